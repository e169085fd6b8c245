//! Heat kernels, extension-problem kernels, fundamental solutions and their
//! Gamma constants.
//!
//! The group kernels are computed in the frequency normalization
//!
//! ```text
//! q_(±s)((z,σ),t,y) = ∫_{ℝ^k} e^{2πi⟨σ,λ⟩} (|λ|/(2 sinh 2πt|λ|))^{m/2+1∓s}
//!                         · e^{−(π/2)(|z|²+y²)|λ| coth(2πt|λ|)} dλ,
//! ```
//!
//! where the oscillation frequency does not depend on `t`. The form with the
//! phase `e^{−(i/t)⟨σ,λ⟩}` and the explicit `2^k (4πt)^{…}` prefactor is
//! kept as an independent evaluation route ([`ext_kernel_q_scaled_form`],
//! [`ghc_heat_kernel`]).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gamma::{abs_gamma_neg, gamma};
use crate::htype::{norm, GroupPoint, HTypeStructure};
use crate::quad::{self, QuadratureSpec};

/// Homogeneous distances below this are treated as the pole.
pub const POLE_RADIUS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// A fractional order `±s` with `0 < s < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FracOrder {
    s: f64,
    sign: Sign,
}

impl FracOrder {
    pub fn new(s: f64, sign: Sign) -> Result<Self> {
        if !(s > 0.0 && s < 1.0) {
            return Err(invalid(format!("fractional order must lie in (0,1), got {s}")));
        }
        Ok(FracOrder { s, sign })
    }

    pub fn plus(s: f64) -> Result<Self> {
        Self::new(s, Sign::Plus)
    }

    pub fn minus(s: f64) -> Result<Self> {
        Self::new(s, Sign::Minus)
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// `+s` or `−s`.
    pub fn signed(&self) -> f64 {
        self.sign.factor() * self.s
    }

    pub fn flipped(&self) -> FracOrder {
        FracOrder { s: self.s, sign: self.sign.flip() }
    }
}

/// `ln(x / sinh x)` for `x ≥ 0`, accurate at both ends.
pub(crate) fn ln_x_over_sinh(x: f64) -> f64 {
    let x = x.abs();
    if x < 1e-4 {
        let x2 = x * x;
        -x2 / 6.0 + x2 * x2 / 180.0
    } else if x < 20.0 {
        (x / x.sinh()).ln()
    } else {
        (2.0 * x).ln() - x - (-(-2.0 * x).exp()).ln_1p()
    }
}

/// `x coth x`, equal to 1 at the origin.
pub(crate) fn x_coth(x: f64) -> f64 {
    let x = x.abs();
    if x < 1e-4 {
        1.0 + x * x / 3.0
    } else {
        x / x.tanh()
    }
}

/// Frequency profile of the extension kernel:
/// `λ ↦ (λ/(2 sinh 2πtλ))^a · e^{−(π/2) r2 λ coth(2πtλ)}`, with the λ → 0
/// limit `(4πt)^{−a} e^{−r2/(4t)}`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ExtProfile {
    pub exponent: f64,
    pub r2: f64,
    pub t: f64,
}

impl ExtProfile {
    #[inline]
    pub fn ln_eval(&self, lambda: f64) -> f64 {
        let x = 2.0 * PI * self.t * lambda;
        self.exponent * (ln_x_over_sinh(x) - (4.0 * PI * self.t).ln()) - self.r2 / (4.0 * self.t) * x_coth(x)
    }

    #[inline]
    pub fn eval(&self, lambda: f64) -> f64 {
        self.ln_eval(lambda).exp()
    }

    /// e-folding length of the large-λ decay `e^{−(2πta + πr2/2)λ}`.
    pub fn lambda_scale(&self) -> f64 {
        1.0 / (2.0 * PI * self.t * self.exponent.max(0.5) + 0.5 * PI * self.r2)
    }
}

/// `ln[(x/sinh x)^a e^{−c·x coth x}]` on the line `x = ξ + iπ/2`, where
/// `sinh x = i cosh ξ` and `coth x = tanh ξ`.
fn shifted_ln_profile(a: f64, c: f64, xi: f64) -> Complex64 {
    let xi_abs = xi.abs();
    let ln_cosh = xi_abs + (-2.0 * xi_abs).exp().ln_1p() - std::f64::consts::LN_2;
    let ln_ratio = Complex64::new(0.5 * (0.25 * PI * PI + xi * xi).ln() - ln_cosh, -(2.0 * xi / PI).atan());
    a * ln_ratio - c * Complex64::new(xi, 0.5 * PI) * xi.tanh()
}

/// The contour shift pays off once the damping `e^{−π|σ|/(2t)}` it extracts
/// is significant, and only while the vertical distance dominates: on the
/// shifted line the Gaussian factor turns into a phase of size `π r2/(8t)`, so
/// for `r2 > 2π|σ|` the real axis cancels less.
fn use_shift(sigma_norm: f64, r2: f64, t: f64) -> bool {
    0.5 * PI * sigma_norm / t > 1.0 && r2 < 2.0 * PI * sigma_norm
}

/// Inner spec for the λ-transform nested inside another integral.
pub(crate) fn inner_spec(spec: &QuadratureSpec) -> QuadratureSpec {
    spec.with_rel_tol((0.1 * spec.rel_tol).max(1e-13))
}

/// Kernel values span hundreds of decades, so the λ-transforms run on
/// relative targets only (the L1 floor still bounds the work when the
/// transform cancels).
fn transform_spec(spec: &QuadratureSpec) -> QuadratureSpec {
    spec.with_abs_tol(f64::MIN_POSITIVE)
}

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(invalid(format!("time must be positive, got {t}")));
    }
    Ok(())
}

fn check_point(s: &HTypeStructure, g: &GroupPoint) -> Result<()> {
    if g.z.len() != s.m() || g.sigma.len() != s.k() {
        return Err(invalid(format!(
            "point has dimensions ({}, {}) but the structure is ({}, {})",
            g.z.len(),
            g.sigma.len(),
            s.m(),
            s.k()
        )));
    }
    if s.k() != 1 && s.k() != 3 {
        return Err(Error::UnsupportedDimension(s.k()));
    }
    Ok(())
}

/// Euclidean extension heat kernel `(4πt)^{−(n/2+1∓s)} e^{−(|x|²+y²)/(4t)}`.
pub fn euclid_ext_kernel(n: usize, o: FracOrder, x: &[f64], y: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    if n < 1 || x.len() != n {
        return Err(invalid(format!("expected a point of ℝ^{n} with n ≥ 1")));
    }
    let r2 = x.iter().map(|v| v * v).sum::<f64>() + y * y;
    let power = n as f64 / 2.0 + 1.0 - o.signed();
    Ok((4.0 * PI * t).powf(-power) * (-r2 / (4.0 * t)).exp())
}

/// Closed form of `∫₀^∞ euclid_ext_kernel dt`:
/// `Γ((n∓2s)/2) / (4π^{n/2+1∓s}) · (|x|²+y²)^{−(n∓2s)/2}`.
pub fn euclid_fundsol(n: usize, o: FracOrder, x: &[f64], y: f64) -> Result<f64> {
    if n < 2 || x.len() != n {
        return Err(invalid(format!("expected a point of ℝ^{n} with n ≥ 2")));
    }
    let r2 = x.iter().map(|v| v * v).sum::<f64>() + y * y;
    if r2.sqrt() < POLE_RADIUS {
        return Err(Error::Pole(r2.sqrt()));
    }
    let a = (n as f64 - 2.0 * o.signed()) / 2.0;
    Ok(gamma(a) / (4.0 * PI.powf(n as f64 / 2.0 + 1.0 - o.signed())) * r2.powf(-a))
}

/// Extension kernel `q_(±s)(g, t, y)` in the frequency normalization.
pub fn ext_kernel_q(
    s: &HTypeStructure,
    o: FracOrder,
    g: &GroupPoint,
    t: f64,
    y: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_point(s, g)?;
    check_time(t)?;
    let exponent = s.m() as f64 / 2.0 + 1.0 - o.signed();
    q_with_exponent(s.k(), exponent, g.z_norm().powi(2) + y * y, g.sigma_norm(), t, spec)
}

/// `∫_{ℝ^k} e^{2πi⟨σ,λ⟩} (|λ|/(2 sinh 2πt|λ|))^a e^{−(π/2) r2 |λ| coth(2πt|λ|)} dλ`.
pub(crate) fn q_with_exponent(
    k: usize,
    exponent: f64,
    r2: f64,
    sigma_norm: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let profile = ExtProfile { exponent, r2, t };
    let scale = profile.lambda_scale();
    if use_shift(sigma_norm, r2, t) {
        let c = r2 / (4.0 * t);
        let ln_norm = -exponent * (4.0 * PI * t).ln();
        let f = |xi: f64| Ok((ln_norm + shifted_ln_profile(exponent, c, 2.0 * PI * t * xi)).exp());
        return Ok(quad::try_radial_fourier_shifted(f, sigma_norm, k, 0.25 / t, scale, &transform_spec(spec))?.value);
    }
    Ok(quad::try_radial_fourier_scaled(|l| Ok(profile.eval(l)), sigma_norm, k, scale, &transform_spec(spec))?.value)
}

/// The same kernel in the scaled form
/// `2^k (4πt)^{−(m/2+k+1∓s)} ∫ e^{−(i/t)⟨σ,λ⟩} (|λ|/sinh|λ|)^{m/2+1∓s} e^{−((|z|²+y²)/4t)|λ| coth|λ|} dλ`.
pub fn ext_kernel_q_scaled_form(
    s: &HTypeStructure,
    o: FracOrder,
    g: &GroupPoint,
    t: f64,
    y: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_point(s, g)?;
    check_time(t)?;
    let exponent = s.m() as f64 / 2.0 + 1.0 - o.signed();
    scaled_form(s.k(), exponent, g.z_norm().powi(2) + y * y, g.sigma_norm(), t, spec)
}

fn scaled_form(k: usize, exponent: f64, r2: f64, sigma_norm: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    let profile = |l: f64| (exponent * ln_x_over_sinh(l) - r2 / (4.0 * t) * x_coth(l)).exp();
    // in λ the decay rate is a + r2/(4t)
    let scale = 1.0 / (exponent.max(0.5) + r2 / (4.0 * t));
    let r_out = sigma_norm / (2.0 * PI * t);
    let transform = if use_shift(sigma_norm, r2, t) {
        let c = r2 / (4.0 * t);
        let f = |xi: f64| Ok(shifted_ln_profile(exponent, c, xi).exp());
        quad::try_radial_fourier_shifted(f, r_out, k, 0.5 * PI, scale, &transform_spec(spec))?.value
    } else {
        quad::try_radial_fourier_scaled(|l| Ok(profile(l)), r_out, k, scale, &transform_spec(spec))?.value
    };
    let prefactor = 2f64.powi(k as i32) * (4.0 * PI * t).powf(-(exponent + k as f64));
    Ok(prefactor * transform)
}

/// Heat kernel `p(g, e, t)` of the horizontal Laplacian (the s = 1 member of
/// the thin-space family), evaluated in the scaled form.
pub fn ghc_heat_kernel(s: &HTypeStructure, g: &GroupPoint, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_point(s, g)?;
    check_time(t)?;
    scaled_form(s.k(), s.m() as f64 / 2.0, g.z_norm().powi(2), g.sigma_norm(), t, spec)
}

/// Thin-space kernel `K_(±s)(g,t) = (4πt)^{1∓s} q_(±s)(g,t,0)`.
pub fn thin_kernel_k(s: &HTypeStructure, o: FracOrder, g: &GroupPoint, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    let q = ext_kernel_q(s, o, g, t, 0.0, spec)?;
    Ok((4.0 * PI * t).powf(1.0 - o.signed()) * q)
}

/// `((|z|²+y²)² + 16|σ|²)`, the fourth power of the homogeneous distance of
/// `(g, y)` from the pole.
pub fn conformal_factor(g: &GroupPoint, y: f64) -> f64 {
    let r2 = g.z_norm().powi(2) + y * y;
    r2 * r2 + 16.0 * g.sigma_norm().powi(2)
}

fn check_pole(g: &GroupPoint, y: f64) -> Result<f64> {
    let rho4 = conformal_factor(g, y);
    let rho = rho4.powf(0.25);
    if !(rho >= POLE_RADIUS) {
        return Err(Error::Pole(rho));
    }
    Ok(rho4)
}

/// `𝔢_(±s)(g, y) = ∫₀^∞ q_(±s)(g, t, y) dt` by quadrature.
///
/// With `t = 1/u` the integrand behaves like `u^{(Q∓2s)/2 − 1}` at `u = 0` and
/// decays like `e^{−c u}` at infinity.
pub fn fundsol_subordinate(
    s: &HTypeStructure,
    o: FracOrder,
    g: &GroupPoint,
    y: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_point(s, g)?;
    let rho4 = match check_pole(g, y) {
        Ok(v) => v,
        Err(Error::Pole(r)) => return Err(Error::Divergence(format!("∫ q dt diverges at the pole (distance {r:e})"))),
        Err(e) => return Err(e),
    };
    let k = s.k();
    let exponent = s.m() as f64 / 2.0 + 1.0 - o.signed();
    let r2 = g.z_norm().powi(2) + y * y;
    let sn = g.sigma_norm();
    let alpha = (s.homogeneous_dimension() as f64 - 2.0 * o.signed()) / 2.0;
    let inner = inner_spec(spec);
    let integrand = |u: f64| -> Result<f64> {
        let t = 1.0 / u;
        if !t.is_finite() || t <= 0.0 {
            return Ok(0.0);
        }
        Ok(q_with_exponent(k, exponent, r2, sn, t, &inner)? / (u * u))
    };
    let scale = 4.0 / rho4.sqrt();
    Ok(quad::try_integrate_semiinfinite(integrand, alpha, scale, spec)?.value)
}

/// `C_(±s)(m, k)`. For the minus family `s ↦ −s` and `Γ(s) ↦ |Γ(−s)|`.
pub fn const_c(m: usize, k: usize, o: FracOrder) -> f64 {
    let (m, k) = (m as f64, k as f64);
    let ss = o.signed();
    let denom_gamma = match o.sign() {
        Sign::Plus => gamma(o.s()),
        Sign::Minus => abs_gamma_neg(o.s()),
    };
    2f64.powf(m / 2.0 + 2.0 * k - 3.0 * ss - 1.0) * gamma(0.5 * (m / 2.0 + 1.0 - ss)) * gamma(0.5 * (m / 2.0 + k - ss))
        / (PI.powf((m + k + 1.0) / 2.0) * denom_gamma)
}

/// `Γ(s)` for the plus family and `|Γ(−s)|` for the minus family.
pub fn family_gamma(o: FracOrder) -> f64 {
    match o.sign() {
        Sign::Plus => gamma(o.s()),
        Sign::Minus => abs_gamma_neg(o.s()),
    }
}

/// Closed form of `𝔢_(±s)(g, y)`:
/// `Γ·(4π)^{±s−1} C_(±s)(m,k) ((|z|²+y²)² + 16|σ|²)^{−(m/2+k∓s)/2}`.
pub fn fundsol_closed(s: &HTypeStructure, o: FracOrder, g: &GroupPoint, y: f64) -> Result<f64> {
    if g.z.len() != s.m() || g.sigma.len() != s.k() {
        return Err(invalid("point does not conform to the structure"));
    }
    let rho4 = check_pole(g, y)?;
    let (m, k) = (s.m(), s.k());
    let ss = o.signed();
    Ok(family_gamma(o)
        * (4.0 * PI).powf(ss - 1.0)
        * const_c(m, k, o)
        * rho4.powf(-0.5 * (m as f64 / 2.0 + k as f64 - ss)))
}

/// `Γ((m+2+2s)/4) Γ((m+2k+2s)/4) / (Γ((m+2−2s)/4) Γ((m+2k−2s)/4))`.
pub fn gamma_ratio(m: usize, k: usize, s: f64) -> f64 {
    let (m, k) = (m as f64, k as f64);
    gamma((m + 2.0 + 2.0 * s) / 4.0) * gamma((m + 2.0 * k + 2.0 * s) / 4.0)
        / (gamma((m + 2.0 - 2.0 * s) / 4.0) * gamma((m + 2.0 * k - 2.0 * s) / 4.0))
}

/// Euclidean norm helper re-exported for callers working with raw vectors.
pub fn euclid_norm(x: &[f64]) -> f64 {
    norm(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::htype::Family;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn h1() -> HTypeStructure {
        HTypeStructure::build_standard(Family::Heisenberg, 1).unwrap()
    }

    fn e1() -> GroupPoint {
        GroupPoint::new(vec![0.0, 0.0], vec![0.0])
    }

    #[test]
    fn frac_order_bounds() {
        assert!(FracOrder::plus(0.0).is_err());
        assert!(FracOrder::plus(1.0).is_err());
        assert!(FracOrder::minus(f64::NAN).is_err());
        assert_eq!(FracOrder::minus(0.25).unwrap().signed(), -0.25);
    }

    #[test]
    fn euclid_ext_kernel_examples() {
        let o = FracOrder::plus(0.5).unwrap();
        let v = euclid_ext_kernel(2, o, &[0.0, 0.0], 0.0, 1.0).unwrap();
        assert!(rel(v, (4.0 * PI).powf(-1.5)) < 1e-14);
        assert!(rel(v, 2.2448e-2) < 1e-4);
        let v = euclid_ext_kernel(2, o.flipped(), &[0.0, 0.0], 0.0, 1.0).unwrap();
        assert!(rel(v, (4.0 * PI).powf(-2.5)) < 1e-14);
        for t in [0.1, 1.0, 7.5] {
            let v = euclid_ext_kernel(2, o, &[0.0, 0.0], 0.0, t).unwrap();
            assert!(rel(v * (4.0 * PI * t).powf(1.5), 1.0) < 1e-14);
        }
        let a = euclid_ext_kernel(3, o, &[1.0, 2.0, 2.0], 0.3, 0.7).unwrap();
        let b = euclid_ext_kernel(3, o, &[3.0, 0.0, 0.0], 0.3, 0.7).unwrap();
        assert!(rel(a, b) < 1e-14);
        assert!(euclid_ext_kernel(2, o, &[0.0, 0.0], 0.0, 0.0).is_err());
    }

    #[test]
    fn euclid_fundsol_examples() {
        let plus = FracOrder::plus(0.5).unwrap();
        let minus = FracOrder::minus(0.5).unwrap();
        let v = euclid_fundsol(2, plus, &[0.0, 0.0], 1.0).unwrap();
        assert!(rel(v, 1.0 / (4.0 * PI)) < 1e-14);
        let v = euclid_fundsol(2, minus, &[0.0, 0.0], 1.0).unwrap();
        assert!(rel(v, 0.5 * PI.sqrt() / (4.0 * PI.powf(2.5))) < 1e-14);
        assert!(rel(v, 0.0126651) < 1e-5);
        let base = euclid_fundsol(3, plus, &[0.3, -0.2, 0.1], 0.4).unwrap();
        let scaled = euclid_fundsol(3, plus, &[0.6, -0.4, 0.2], 0.8).unwrap();
        assert!(rel(scaled, 2f64.powf(-2.0) * base) < 1e-14);
        assert!(matches!(euclid_fundsol(2, plus, &[0.0, 0.0], 0.0), Err(Error::Pole(_))));
    }

    #[test]
    fn ghc_at_identity() {
        let spec = QuadratureSpec::default();
        let v = ghc_heat_kernel(&h1(), &e1(), 1.0, &spec).unwrap();
        assert!(rel(v, 0.0625) < 1e-10, "{v}");
        let v = ghc_heat_kernel(&h1(), &e1(), 2.0, &spec).unwrap();
        assert!(rel(v, 1.0 / 64.0) < 1e-10, "{v}");
    }

    #[test]
    fn extension_kernel_two_forms_agree() {
        let spec = QuadratureSpec::default();
        let g = GroupPoint::new(vec![1.0, 0.0], vec![0.3]);
        for o in [FracOrder::plus(0.5).unwrap(), FracOrder::minus(0.5).unwrap()] {
            let a = ext_kernel_q(&h1(), o, &g, 0.7, 0.5, &spec).unwrap();
            let b = ext_kernel_q_scaled_form(&h1(), o, &g, 0.7, 0.5, &spec).unwrap();
            assert!(a > 0.0);
            assert!(rel(a, b) < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn thin_kernel_is_even() {
        let spec = QuadratureSpec::default();
        let o = FracOrder::minus(0.4).unwrap();
        let g = GroupPoint::new(vec![0.4, -0.9], vec![0.25]);
        let a = thin_kernel_k(&h1(), o, &g, 0.8, &spec).unwrap();
        let b = thin_kernel_k(&h1(), o, &g.inv(), 0.8, &spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn constants() {
        let half = FracOrder::plus(0.5).unwrap();
        let c = const_c(2, 1, half);
        let gamma_34 = gamma(0.75);
        assert!(rel(c, 2f64.sqrt() * gamma_34 * gamma_34 / (PI * PI * PI.sqrt())) < 1e-13);
        assert!(rel(c, 0.121404) < 1e-4, "{c}");
        let cm = const_c(2, 1, half.flipped());
        let gamma_54 = gamma(1.25);
        assert!(rel(cm, 2f64.powf(3.5) * gamma_54 * gamma_54 / (PI * PI * 2.0 * PI.sqrt())) < 1e-13);
        assert!(rel(cm, 0.265670) < 1e-4, "{cm}");
        let r = gamma_ratio(2, 1, 0.5);
        assert!(rel(r, (gamma(1.25) / gamma(0.75)).powi(2)) < 1e-14);
        assert!(rel(r, 0.547110) < 1e-5, "{r}");
    }

    #[test]
    fn closed_fundamental_solutions() {
        let v = fundsol_closed(&h1(), FracOrder::plus(0.5).unwrap(), &e1(), 1.0).unwrap();
        assert!(rel(v, 0.5 * const_c(2, 1, FracOrder::plus(0.5).unwrap())) < 1e-14);
        assert!(rel(v, 0.060703) < 1e-4, "{v}");
        let v = fundsol_closed(&h1(), FracOrder::minus(0.5).unwrap(), &e1(), 1.0).unwrap();
        assert!(rel(v, 0.021142) < 1e-4, "{v}");
        assert!(matches!(fundsol_closed(&h1(), FracOrder::plus(0.5).unwrap(), &e1(), 0.0), Err(Error::Pole(_))));
    }

    #[test]
    fn subordinate_rejects_pole() {
        let spec = QuadratureSpec::default();
        let r = fundsol_subordinate(&h1(), FracOrder::plus(0.5).unwrap(), &e1(), 0.0, &spec);
        assert!(matches!(r, Err(Error::Divergence(_))));
    }

    #[test]
    fn profile_limit_at_zero_frequency() {
        let p = ExtProfile { exponent: 2.5, r2: 0.7, t: 0.3 };
        let limit = (4.0 * PI * 0.3f64).powf(-2.5) * (-0.7 / 1.2f64).exp();
        assert!(rel(p.eval(0.0), limit) < 1e-15);
        assert!(rel(p.eval(1e-9), limit) < 1e-12);
        assert!(p.eval(1e4) == 0.0 || p.eval(1e4) < 1e-300);
    }

    #[test]
    fn subordination_matches_closed_form() {
        let spec = QuadratureSpec::default();
        let quat = HTypeStructure::build_standard(Family::Quaternionic, 1).unwrap();
        let cases = [
            (h1(), GroupPoint::new(vec![0.0, 0.0], vec![0.0]), 1.0),
            (h1(), GroupPoint::new(vec![0.7, -0.2], vec![0.4]), 0.3),
            (h1(), GroupPoint::new(vec![0.0, 0.0], vec![1.5]), 0.0),
            (quat.clone(), GroupPoint::new(vec![0.5, 0.1, 0.0, -0.3], vec![0.2, 0.0, -0.1]), 0.6),
            (quat, GroupPoint::new(vec![0.0; 4], vec![0.0, 0.8, 0.0]), 0.1),
        ];
        for (st, g, y) in cases {
            for o in [FracOrder::plus(0.3).unwrap(), FracOrder::minus(0.7).unwrap()] {
                let a = fundsol_subordinate(&st, o, &g, y, &spec).unwrap();
                let b = fundsol_closed(&st, o, &g, y).unwrap();
                assert!(rel(a, b) < 1e-7, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn contour_shift_matches_real_axis() {
        let spec = QuadratureSpec::default();
        for (k, a, r2, sn, t) in
            [(1, 1.5, 0.3, 0.4, 0.2), (1, 2.2, 0.0, 1.0, 0.3), (3, 3.5, 0.5, 0.6, 0.25), (3, 2.0, 0.0, 0.3, 0.1)]
        {
            assert!(use_shift(sn, r2, t));
            let p = ExtProfile { exponent: a, r2, t };
            let direct = quad::radial_fourier(|l| p.eval(l), sn, k, &spec.with_abs_tol(1e-300)).unwrap().value;
            let shifted = q_with_exponent(k, a, r2, sn, t, &spec).unwrap();
            let scaled = scaled_form(k, a, r2, sn, t, &spec).unwrap()
                / (2f64.powi(k as i32) * (4.0 * PI * t).powf(-(a + k as f64)))
                * (2.0 * PI * t).powi(k as i32).recip();
            assert!(rel(shifted, direct) < 1e-8, "k={k}: {shifted} vs {direct}");
            assert!(rel(scaled * (4.0 * PI * t).powf(-a), shifted) < 1e-8, "{scaled} {shifted}");
        }
    }
}
