//! One-dimensional identities behind the conformal intertwining: the function
//! `h_{s,μ}` and its derivative, the ρ-integral that collapses to a Gamma
//! function, and the J-twisted Gaussian convolution.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::gamma::gamma;
use crate::htype::{dot, norm, HTypeStructure};
use crate::kernels::ln_x_over_sinh;
use crate::quad::{self, QuadratureSpec};

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(invalid(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

fn check_s(s: f64) -> Result<()> {
    if !(s > 0.0 && s < 1.0) {
        return Err(invalid(format!("s must lie in (0,1), got {s}")));
    }
    Ok(())
}

/// `ln sinh x` for x > 0 without overflow.
fn ln_sinh(x: f64) -> f64 {
    x.ln() - ln_x_over_sinh(x)
}

/// `d/dx ln(x / sinh x) = 1/x − coth x`.
fn dln_phi(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        -x / 3.0 * (1.0 - x2 / 15.0)
    } else {
        1.0 / x - 1.0 / x.tanh()
    }
}

/// `h_{s,μ}(ρ) = (μ/sinh μ) R^s [ (μ/sinh μ) ρ/(1+ρ)² (R + 2 cosh μ + 1/R) − 1 ]`
/// with `R = sinh(ρμ/(1+ρ)) / sinh(μ/(1+ρ))`.
pub fn h_func(s: f64, mu: f64, rho: f64) -> Result<f64> {
    check_s(s)?;
    check_positive("μ", mu)?;
    check_positive("ρ", rho)?;
    let (a, b) = (rho * mu / (1.0 + rho), mu / (1.0 + rho));
    let ln_r = ln_sinh(a) - ln_sinh(b);
    let ln_phi = ln_x_over_sinh(mu);
    let weight = rho / (1.0 + rho).powi(2);
    // (μ/sinh μ)(R + 1/R) and 2μ/tanh μ, each formed without overflow
    let bracket = weight * ((ln_phi + ln_r).exp() + (ln_phi - ln_r).exp() + 2.0 * mu / mu.tanh()) - 1.0;
    Ok((ln_phi + s * ln_r).exp() * bracket)
}

/// `h′_{s,μ}(ρ) = ρ^s ∂_ρ[ φ(ρμ/(1+ρ))^{1−s} φ(μ/(1+ρ))^{1+s} ]`, φ(x) = x/sinh x.
pub fn h_deriv_formula(s: f64, mu: f64, rho: f64) -> Result<f64> {
    check_s(s)?;
    check_positive("μ", mu)?;
    check_positive("ρ", rho)?;
    let (a, b) = (rho * mu / (1.0 + rho), mu / (1.0 + rho));
    let f = ((1.0 - s) * ln_x_over_sinh(a) + (1.0 + s) * ln_x_over_sinh(b)).exp();
    let slope = mu / (1.0 + rho).powi(2);
    Ok(rho.powf(s) * f * slope * ((1.0 - s) * dln_phi(a) - (1.0 + s) * dln_phi(b)))
}

/// `∫₀^∞ (μ/((1+ρ) sinh(ρμ/(1+ρ))))² (sinh(ρμ/(1+ρ)) / sinh(μ/(1+ρ)))^s
/// e^{−Bμ coth(ρμ/(1+ρ))} dρ` by quadrature.
pub fn cowboy_lhs(s: f64, b: f64, mu: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_s(s)?;
    check_positive("B", b)?;
    check_positive("μ", mu)?;
    let integrand = |rho: f64| -> Result<f64> {
        let (a, c) = (rho * mu / (1.0 + rho), mu / (1.0 + rho));
        if a == 0.0 {
            return Ok(0.0);
        }
        let ln = 2.0 * (mu.ln() - rho.ln_1p() - ln_sinh(a)) + s * (ln_sinh(a) - ln_sinh(c)) - b * mu / a.tanh();
        Ok(ln.exp())
    };
    // the integrand vanishes faster than any power at 0 and decays like ρ^{s−2}
    let spec = spec.with_abs_tol(f64::MIN_POSITIVE);
    Ok(quad::try_integrate_power_tails(integrand, 1.0, 1.0 - s, b.max(1e-3), &spec)?.value)
}

/// `B^{s−1} (μ/sinh μ)^s Γ(1−s) e^{−Bμ/tanh μ}`.
pub fn cowboy_closed(s: f64, b: f64, mu: f64) -> Result<f64> {
    check_s(s)?;
    check_positive("B", b)?;
    check_positive("μ", mu)?;
    Ok(((s - 1.0) * b.ln() + s * ln_x_over_sinh(mu) - b * mu / mu.tanh()).exp() * gamma(1.0 - s))
}

/// The J-twisted Gaussian convolution next to two closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JTwisted {
    /// `∫ e^{πi⟨J(λ)z,z′⟩} e^{−(π/2)|z−z′|²|λ| coth u} e^{−(π/2)|z′|²|λ| coth v} dz′`.
    pub integral: f64,
    /// `(2 sinh u sinh v / (|λ| sinh(u+v)))^{m/2} e^{−(π/2)|z|²|λ| coth(u+v)}`.
    pub factored: f64,
    /// `(|λ| / (2 sinh(u+v)))^{m/2} e^{−(π/2)|z|²|λ| coth(u+v)}`, the form that
    /// already carries the outer kernel factors of the composition.
    pub absorbed: f64,
}

/// Evaluates the twisted Gaussian integral over `ℝ^m` by cubature, with
/// `u = 2πt|λ|` and `v = 2πτ|λ|`. The integral is real (its sine part is odd
/// under `z′ ↦ z − z′` composed with a reflection), so only the cosine part
/// is integrated.
pub fn jtwisted_gaussian(
    s: &HTypeStructure,
    lambda: &[f64],
    z: &[f64],
    t: f64,
    tau: f64,
    spec: &QuadratureSpec,
) -> Result<JTwisted> {
    let m = s.m();
    if m > 4 {
        return Err(Error::UnsupportedDimension(m));
    }
    if lambda.len() != s.k() || z.len() != m {
        return Err(invalid("λ and z must conform to the structure"));
    }
    check_positive("t", t)?;
    check_positive("τ", tau)?;
    let l = norm(lambda);
    check_positive("|λ|", l)?;
    let (u, v) = (2.0 * PI * t * l, 2.0 * PI * tau * l);
    let jz = s.jmap(lambda, z)?;
    let (cu, cv) = (0.5 * PI * l / u.tanh(), 0.5 * PI * l / v.tanh());
    let integrand = |zp: &[f64]| {
        let d2: f64 = z.iter().zip(zp).map(|(a, b)| (a - b) * (a - b)).sum();
        (PI * dot(&jz, zp)).cos() * (-cu * d2 - cv * dot(zp, zp)).exp()
    };
    let integral = quad::integrate_box(integrand, m, spec)?.value;
    let half_m = m as f64 / 2.0;
    let gaussian = (-0.5 * PI * dot(z, z) * l / (u + v).tanh()).exp();
    let ln_sinh_sum = ln_sinh(u + v);
    let factored = ((2.0f64.ln() + ln_sinh(u) + ln_sinh(v) - l.ln() - ln_sinh_sum) * half_m).exp() * gaussian;
    let absorbed = ((l.ln() - 2.0f64.ln() - ln_sinh_sum) * half_m).exp() * gaussian;
    Ok(JTwisted { integral, factored, absorbed })
}
