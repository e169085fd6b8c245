//! The heat semigroup `P_t = e^{t𝓛}` and the fractional power `𝓛^s` applied to
//! the non-geometric fundamental solutions
//! `𝔢^(±s)(g,y) = ∫₀^∞ (4πt)^{−(1∓s)} e^{−y²/(4t)} p(g,e,t) dt`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::orbit::{nested, Orbit, Slice};
use crate::error::{invalid, Error, Result};
use crate::gamma::gamma;
use crate::htype::{norm, GroupPoint, HTypeStructure};
use crate::kernels::{conformal_factor, ghc_heat_kernel, FracOrder, Sign};
use crate::quad::{self, QuadratureSpec};

/// Where the operators act: flat `ℝ^n` at a point `x`, or an H-type group at `g`.
#[derive(Debug, Clone, Copy)]
pub enum Domain<'a> {
    Euclid { x: &'a [f64] },
    HType { structure: &'a HTypeStructure, g: &'a GroupPoint },
}

impl<'a> Domain<'a> {
    fn validate(&self) -> Result<()> {
        match self {
            Domain::Euclid { x } if x.len() < 2 => Err(invalid("Euclidean dimension must be at least 2")),
            Domain::Euclid { .. } => Ok(()),
            Domain::HType { structure, g } => {
                if g.z.len() != structure.m() || g.sigma.len() != structure.k() {
                    return Err(invalid("point does not conform to the structure"));
                }
                if structure.k() != 1 && structure.k() != 3 {
                    return Err(Error::UnsupportedDimension(structure.k()));
                }
                Ok(())
            }
        }
    }

    /// Horizontal squared radius and heat exponent `n/2` or `m/2`.
    fn heat_data(&self) -> (f64, f64) {
        match self {
            Domain::Euclid { x } => (norm(x).powi(2), x.len() as f64 / 2.0),
            Domain::HType { structure, g } => (g.z_norm().powi(2), structure.m() as f64 / 2.0),
        }
    }

    /// Runs `per_lambda` at λ = 0 (Euclidean) or integrates it against the
    /// vertical Fourier kernel (H-type).
    pub(crate) fn transform<F>(&self, per_lambda: F, lambda_scale: f64, spec: &QuadratureSpec) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let mut per_lambda = per_lambda;
        match self {
            Domain::Euclid { .. } => per_lambda(0.0),
            Domain::HType { structure, g } => {
                let outer = spec.with_abs_tol(f64::MIN_POSITIVE);
                Ok(quad::try_radial_fourier_scaled(per_lambda, g.sigma_norm(), structure.k(), lambda_scale, &outer)?
                    .value)
            }
        }
    }
}

/// How `𝓛^s` is evaluated from the semigroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Route {
    /// `−(s/Γ(1−s)) ∫ t^{−1−s} (P_t u − u) dt`, with the difference taken
    /// pointwise under the τ integral.
    Difference,
    /// `−(1/Γ(1−s)) ∫ t^{−s} ∂_t P_t u dt`, with `∂_t` by central differences
    /// plus one Richardson level.
    Derivative,
}

/// A semigroup orbit `t ↦ P_t u` seen through the two quantities the
/// fractional power needs.
pub(crate) trait Flow {
    fn difference(&self, t: f64, spec: &QuadratureSpec) -> Result<f64>;
    fn derivative(&self, t: f64, spec: &QuadratureSpec) -> Result<f64>;
    fn scale(&self) -> f64;
}

impl Flow for Orbit {
    fn difference(&self, t: f64, spec: &QuadratureSpec) -> Result<f64> {
        Orbit::difference(self, t, spec)
    }
    fn derivative(&self, t: f64, spec: &QuadratureSpec) -> Result<f64> {
        Orbit::derivative(self, t, spec)
    }
    fn scale(&self) -> f64 {
        self.scale
    }
}

/// `P_t c = c`.
struct Constant;

impl Flow for Constant {
    fn difference(&self, _t: f64, _spec: &QuadratureSpec) -> Result<f64> {
        Ok(0.0)
    }
    fn derivative(&self, _t: f64, _spec: &QuadratureSpec) -> Result<f64> {
        Ok(0.0)
    }
    fn scale(&self) -> f64 {
        1.0
    }
}

/// `𝓛^s` (or `𝓛_s` for twisted orbits) from a semigroup orbit.
pub(crate) fn balakrishnan<O: Flow>(orbit: &O, s: f64, route: Route, spec: &QuadratureSpec) -> Result<f64> {
    let inner = nested(spec);
    let integral = match route {
        Route::Difference => {
            let f = |t: f64| Ok(t.powf(-1.0 - s) * orbit.difference(t, &inner)?);
            -s / gamma(1.0 - s) * quad::try_integrate_power_tails(f, 1.0 - s, s, orbit.scale(), spec)?.value
        }
        Route::Derivative => {
            let f = |t: f64| Ok(t.powf(-s) * orbit.derivative(t, &inner)?);
            -quad::try_integrate_power_tails(f, 1.0 - s, s, orbit.scale(), spec)?.value / gamma(1.0 - s)
        }
    };
    Ok(integral)
}

fn check_s(s: f64) -> Result<()> {
    FracOrder::plus(s).map(|_| ())
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(invalid(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

fn orbit_at(domain: &Domain, s: f64, y: f64, lambda: f64) -> Orbit {
    let (r2, a) = domain.heat_data();
    Orbit {
        weight: Slice { a: 1.0 - s, r2: y * y, lambda: 0.0 },
        heat: Slice { a, r2, lambda },
        twist: 0.0,
        scale: 0.25 * (r2 + y * y),
    }
}

pub(crate) fn lambda_scale(scale: f64, exponent: f64, r2: f64) -> f64 {
    1.0 / (2.0 * PI * scale * exponent + 0.5 * PI * r2)
}

fn orbit_lambda_scale(domain: &Domain, s: f64, y: f64) -> f64 {
    let (r2, a) = domain.heat_data();
    lambda_scale(0.25 * (r2 + y * y), a + 1.0 - s, r2 + y * y)
}

/// `P_t 𝔢^(s)(·,y)(g) = ∫₀^∞ (4πτ)^{−(1−s)} e^{−y²/(4τ)} p(g,e,t+τ) dτ`.
pub fn semigroup_on_fundsol(domain: Domain, o: FracOrder, y: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    domain.validate()?;
    if o.sign() != Sign::Plus {
        return Err(invalid("the semigroup is applied to the plus family"));
    }
    check_positive("y", y)?;
    check_positive("t", t)?;
    let s = o.s();
    let inner = nested(spec);
    domain.transform(|lambda| orbit_at(&domain, s, y, lambda).value(t, &inner), orbit_lambda_scale(&domain, s, y), spec)
}

/// `𝓛^s 𝔢^(s)(·,y)(g)` by the finite-difference route.
pub fn frac_power_on_fundsol(domain: Domain, s: f64, y: f64, spec: &QuadratureSpec) -> Result<f64> {
    frac_power_on_fundsol_via(domain, s, y, Route::Derivative, spec)
}

/// `𝓛^s 𝔢^(s)(·,y)(g)` along the chosen route.
pub fn frac_power_on_fundsol_via(domain: Domain, s: f64, y: f64, route: Route, spec: &QuadratureSpec) -> Result<f64> {
    domain.validate()?;
    check_s(s)?;
    check_positive("y", y)?;
    let inner = nested(spec);
    domain.transform(
        |lambda| balakrishnan(&orbit_at(&domain, s, y, lambda), s, route, &inner),
        orbit_lambda_scale(&domain, s, y),
        spec,
    )
}

/// Test hook: the same machinery applied to a constant function, which every
/// `P_t` fixes, so the result is 0.
pub fn frac_power_on_constant(s: f64, route: Route, spec: &QuadratureSpec) -> Result<f64> {
    check_s(s)?;
    balakrishnan(&Constant, s, route, spec)
}

/// `𝔢^(±s)(g,y)` on an H-type group by quadrature of the heat kernel.
pub fn nongeom_fundsol(
    structure: &HTypeStructure,
    o: FracOrder,
    g: &GroupPoint,
    y: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    Domain::HType { structure, g }.validate()?;
    let rho2 = conformal_factor(g, y).sqrt();
    if rho2.sqrt() < crate::kernels::POLE_RADIUS {
        return Err(Error::Pole(rho2.sqrt()));
    }
    let power = 1.0 - o.signed();
    let inner = nested(spec);
    let f = |tau: f64| -> Result<f64> {
        let p = ghc_heat_kernel(structure, g, tau, &inner)?;
        Ok((4.0 * PI * tau).powf(-power) * (-y * y / (4.0 * tau)).exp() * p)
    };
    let beta = structure.homogeneous_dimension() as f64 / 2.0 - o.signed();
    Ok(quad::try_integrate_power_tails(f, 1.0, beta, 0.25 * rho2, spec)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::htype::Family;
    use crate::kernels::euclid_fundsol;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn constant_is_annihilated() {
        let spec = QuadratureSpec::default();
        for route in [Route::Difference, Route::Derivative] {
            assert_eq!(frac_power_on_constant(0.4, route, &spec).unwrap(), 0.0);
        }
    }

    #[test]
    fn euclidean_semigroup_limits_and_monotonicity() {
        let spec = QuadratureSpec::default();
        let x = [0.0, 0.0];
        let o = FracOrder::plus(0.5).unwrap();
        let near = semigroup_on_fundsol(Domain::Euclid { x: &x }, o, 1.0, 1e-9, &spec).unwrap();
        assert!(rel(near, 1.0 / (4.0 * PI)) < 1e-7, "{near}");
        let mut last = near;
        for t in [0.1, 0.5, 1.0, 4.0] {
            let v = semigroup_on_fundsol(Domain::Euclid { x: &x }, o, 1.0, t, &spec).unwrap();
            assert!(v < last);
            last = v;
        }
    }

    #[test]
    fn euclidean_intertwining_both_routes() {
        let spec = QuadratureSpec::default();
        let x = [0.3, -0.4, 0.2];
        for s in [0.25, 0.75] {
            let rhs =
                (2.0 * PI * 0.7f64).powf(2.0 * s) * euclid_fundsol(3, FracOrder::minus(s).unwrap(), &x, 0.7).unwrap();
            for route in [Route::Difference, Route::Derivative] {
                let lhs = frac_power_on_fundsol_via(Domain::Euclid { x: &x }, s, 0.7, route, &spec).unwrap();
                assert!(rel(lhs, rhs) < 1e-7, "s={s} {route:?}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn heisenberg_nongeom_fundsol_at_identity() {
        // p(e,t) = 1/(16t²) on H¹ gives (4π)^{∓s−1}/16 · Γ(2∓s) (4/y²)^{2∓s}
        let spec = QuadratureSpec::default();
        let h1 = HTypeStructure::build_standard(Family::Heisenberg, 1).unwrap();
        let e = h1.identity();
        for o in [FracOrder::plus(0.5).unwrap(), FracOrder::minus(0.5).unwrap()] {
            let ss = o.signed();
            let exact = (4.0 * PI).powf(ss - 1.0) / 16.0 * gamma(2.0 - ss) * 4f64.powf(2.0 - ss);
            let v = nongeom_fundsol(&h1, o, &e, 1.0, &spec).unwrap();
            assert!(rel(v, exact) < 1e-8, "{v} vs {exact}");
        }
    }
}
