//! Frequency slices of semigroup orbits of the fundamental solutions.
//!
//! At a fixed vertical frequency λ every quantity handled by the fractional
//! operators has the shape
//!
//! ```text
//! G(t) = φ(2πtλ)^ν ∫₀^∞ W(τ) Φ(τ + t) dτ,     φ(x) = x / sinh x,
//! ```
//!
//! where `W` and `Φ` are both profiles
//! `(λ/(2 sinh 2πwλ))^a e^{−(π/2) r2 λ coth(2πwλ)}` (at λ = 0 these reduce to
//! `(4πw)^{−a} e^{−r2/(4w)}`, the Euclidean case). The difference
//! `G(t) − G(0)` is assembled as `G`'s integrand at `t = 0` times an `expm1`
//! of an exactly computed log increment, so no cancellation occurs as t → 0.

use std::f64::consts::PI;

use crate::error::Result;
use crate::kernels::{ln_x_over_sinh, ExtProfile};
use crate::quad::{self, QuadratureSpec};

/// `Φ(w) = (λ/(2 sinh 2πwλ))^a e^{−(π/2) r2 λ coth(2πwλ)}`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Slice {
    pub a: f64,
    pub r2: f64,
    pub lambda: f64,
}

impl Slice {
    #[inline]
    pub fn ln_value(&self, w: f64) -> f64 {
        ExtProfile { exponent: self.a, r2: self.r2, t: w }.ln_eval(self.lambda)
    }

    /// `ln Φ(τ + t) − ln Φ(τ)`, accurate to rounding relative to its own size.
    pub fn ln_increment(&self, tau: f64, t: f64) -> f64 {
        let b = 2.0 * PI * tau * self.lambda;
        let d = 2.0 * PI * t * self.lambda;
        let ratio = t / tau;
        // Δ = ln φ(b) − ln φ(b + d)
        let delta = if b > 0.1 && d < 0.5 {
            let half = (0.5 * d).sinh();
            (2.0 * half * half + d.sinh() / b.tanh()).ln_1p() - ratio.ln_1p()
        } else {
            ln_x_over_sinh(b) - ln_x_over_sinh(b + d)
        };
        // −(π/2) r2 λ [coth(b+d) − coth b], written without λ in the denominator
        let coth_gap =
            t / (4.0 * tau * (tau + t)) * (ln_x_over_sinh(b) + ln_x_over_sinh(b + d) - ln_x_over_sinh(d)).exp();
        -self.a * (delta + ratio.ln_1p()) + self.r2 * coth_gap
    }
}

/// Central difference with one Richardson level:
/// `(4 D(h/2) − D(h)) / 3` with `D(h) = (f(x+h) − f(x−h)) / 2h`.
pub fn central_difference<F>(mut f: F, x: f64, h: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let d1 = (f(x + h)? - f(x - h)?) / (2.0 * h);
    let d2 = (f(x + 0.5 * h)? - f(x - 0.5 * h)?) / h;
    Ok((4.0 * d2 - d1) / 3.0)
}

/// Step for differentiating in time at `w`: `max(1e-4, 1e-3·w)`, capped at
/// `w/4` so every sample stays at positive time.
pub(crate) fn time_step(w: f64) -> f64 {
    (1e-4f64).max(1e-3 * w).min(0.25 * w)
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Orbit {
    pub weight: Slice,
    pub heat: Slice,
    /// Exponent ν of the twist `φ(2πtλ)^ν` (0 for the plain heat semigroup).
    pub twist: f64,
    /// Length scale separating head and tail of the τ and t integrals.
    pub scale: f64,
}

impl Orbit {
    fn ln_twist(&self, t: f64) -> f64 {
        if self.twist == 0.0 {
            0.0
        } else {
            self.twist * ln_x_over_sinh(2.0 * PI * t * self.heat.lambda)
        }
    }

    /// Integrand of `G(t)` at τ.
    pub fn integrand(&self, tau: f64, t: f64) -> f64 {
        (self.weight.ln_value(tau) + self.heat.ln_value(tau + t) + self.ln_twist(t)).exp()
    }

    /// Integrand of `G(t) − G(0)` at τ.
    pub fn difference_integrand(&self, tau: f64, t: f64) -> f64 {
        let ln_base = self.weight.ln_value(tau) + self.heat.ln_value(tau);
        let inc = self.ln_twist(t) + self.heat.ln_increment(tau, t);
        if inc > 1.0 {
            // no cancellation to protect, and base · expm1 would be 0 · ∞ near τ = 0
            (ln_base + inc).exp() - ln_base.exp()
        } else {
            ln_base.exp() * inc.exp_m1()
        }
    }

    /// Integrand of `∂_t G(t)` at τ, by finite differences in t.
    pub fn derivative_integrand(&self, tau: f64, t: f64) -> Result<f64> {
        // the twist is even in t, so steps may cross t = 0 as long as τ + t stays positive
        let h = time_step(tau + t);
        central_difference(|tt| Ok(self.integrand(tau, tt)), t, h)
    }

    /// Decay exponent of the τ-integrand at infinity (worst case λ = 0).
    fn tau_beta(&self) -> f64 {
        (self.weight.a + self.heat.a - 1.0).max(0.25)
    }

    fn over_tau<F>(&self, f: F, spec: &QuadratureSpec) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        Ok(quad::try_integrate_power_tails(f, 1.0, self.tau_beta(), self.scale, spec)?.value)
    }

    pub fn value(&self, t: f64, spec: &QuadratureSpec) -> Result<f64> {
        self.over_tau(|tau| Ok(self.integrand(tau, t)), spec)
    }

    pub fn difference(&self, t: f64, spec: &QuadratureSpec) -> Result<f64> {
        self.over_tau(|tau| Ok(self.difference_integrand(tau, t)), spec)
    }

    pub fn derivative(&self, t: f64, spec: &QuadratureSpec) -> Result<f64> {
        self.over_tau(|tau| self.derivative_integrand(tau, t), spec)
    }
}

/// Spec for an integral nested inside another: relative targets only, and a
/// tighter relative tolerance so the outer level sees a smooth integrand.
pub(crate) fn nested(spec: &QuadratureSpec) -> QuadratureSpec {
    spec.with_rel_tol((0.1 * spec.rel_tol).max(1e-13)).with_abs_tol(f64::MIN_POSITIVE)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn increment_matches_direct_difference() {
        for &(a, r2, lambda) in &[(1.0, 0.7, 0.0), (1.5, 0.3, 0.2), (2.5, 1.2, 3.0), (1.0, 0.0, 40.0)] {
            let s = Slice { a, r2, lambda };
            for &(tau, t) in &[(0.3, 0.2), (2.0, 0.5), (0.05, 1.0), (1.0, 1e-3)] {
                let direct = s.ln_value(tau + t) - s.ln_value(tau);
                let inc = s.ln_increment(tau, t);
                assert!(
                    (direct - inc).abs() < 1e-10 * (1.0 + direct.abs()),
                    "{a} {r2} {lambda} {tau} {t}: {direct} {inc}"
                );
            }
        }
    }

    #[test]
    fn increment_is_accurate_at_tiny_steps() {
        let s = Slice { a: 1.5, r2: 0.8, lambda: 2.0 };
        let tau = 0.7;
        let h = 1e-6;
        let slope = (s.ln_value(tau + h) - s.ln_value(tau - h)) / (2.0 * h);
        for t in [1e-9, 1e-12, 1e-15] {
            let inc = s.ln_increment(tau, t);
            assert!((inc / t - slope).abs() < 1e-6 * slope.abs(), "{t}: {} vs {slope}", inc / t);
        }
    }

    #[test]
    fn richardson_recovers_gaussian_derivative() {
        // ∂_t of (4πt)^{−1} e^{−x²/4t}
        let x2 = 0.8;
        let g = |t: f64| (4.0 * PI * t).recip() * (-x2 / (4.0 * t)).exp();
        for t in [0.05, 0.5, 3.0] {
            let exact = g(t) * (x2 / (4.0 * t * t) - 1.0 / t);
            let fd = central_difference(|u| Ok(g(u)), t, time_step(t)).unwrap();
            assert!(((fd - exact) / exact).abs() < 1e-8, "t={t}: {fd} vs {exact}");
        }
    }
}
