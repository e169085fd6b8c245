//! Named numerical checks of the intertwining identities.
//!
//! Every check pairs a left-hand side computed along an operator path (nested
//! quadrature) with an independently computed right-hand side, usually a
//! closed form, and reports the residual against a per-check tolerance.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::fracops::{
    central_difference, chapman_lhs, conformal_apply, conv_direct, conv_lemma_spectral, cowboy_closed, cowboy_lhs,
    frac_power_on_fundsol, h_deriv_formula, h_func, heat_mass, jtwisted_gaussian, nongeom_fundsol, thin_kernel_mass,
    Domain,
};
use crate::gamma::gamma;
use crate::htype::{GroupPoint, HTypeStructure};
use crate::kernels::{
    conformal_factor, const_c, euclid_fundsol, family_gamma, fundsol_closed, fundsol_subordinate, gamma_ratio,
    ghc_heat_kernel, FracOrder,
};
use crate::quad::QuadratureSpec;

/// Guards the relative error against division by zero.
pub const REL_EPS: f64 = 1e-300;

/// Parameters taking comma-separated vectors; all others are scalars.
pub const VECTOR_PARAMS: &[&str] = &["z", "sigma", "lambda"];
/// Scalar parameters that must be non-negative integers.
pub const INTEGER_PARAMS: &[&str] = &["n", "m", "k"];

/// How the residual is judged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    /// `|lhs − rhs| / max(|rhs|, ε) ≤ tol` (absolute when `rhs = 0`).
    Relative,
    /// `|lhs − rhs| ≤ tol`, for identities whose sides pass through zero.
    Absolute,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckDescriptor {
    pub id: &'static str,
    pub summary: &'static str,
    pub required: &'static [&'static str],
    /// Optional parameters with their defaults.
    pub optional: &'static [(&'static str, f64)],
    pub tol: f64,
    pub metric: Metric,
}

impl CheckDescriptor {
    /// Every parameter name in report order.
    pub fn param_names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.required.iter().copied().chain(self.optional.iter().map(|(n, _)| *n))
    }

    pub fn csv_header(&self) -> String {
        let mut out = String::from("check");
        for name in self.param_names() {
            let _ = write!(out, ",param:{name}");
        }
        out.push_str(",lhs,rhs,abs_err,rel_err,tol,pass,runtime_s");
        out
    }
}

const HTYPE: &[&str] = &["m", "k", "s", "z", "sigma", "y"];

static REGISTRY: [CheckDescriptor; 14] = [
    CheckDescriptor {
        id: "EUCLID_INTERTWINE",
        summary: "(-Δ)^s (|x|²+y²)^{-(n-2s)/2} = Γ(n/2+s)/Γ(n/2-s) (2y)^{2s} (|x|²+y²)^{-(n+2s)/2}",
        required: &["n", "s", "z", "y"],
        optional: &[],
        tol: 1e-6,
        metric: Metric::Relative,
    },
    CheckDescriptor {
        id: "EUCLID_DIMFREE",
        summary: "(-Δ)^s E^(s)(·,y) = (2πy)^{2s} E^(-s)(·,y) on R^n",
        required: &["n", "s", "z", "y"],
        optional: &[],
        tol: 1e-6,
        metric: Metric::Relative,
    },
    CheckDescriptor {
        id: "NONGEOM_HTYPE",
        summary: "𝓛^s 𝔢^(s)(·,y) = (2πy)^{2s} 𝔢^(-s)(·,y) on an H-type group",
        required: HTYPE,
        optional: &[],
        tol: 1e-3,
        metric: Metric::Relative,
    },
    CheckDescriptor {
        id: "THEOREM_A",
        summary: "∫ q_(±s) dt equals the closed fundamental solution (sign = ±1)",
        required: HTYPE,
        optional: &[("sign", 1.0)],
        tol: 1e-5,
        metric: Metric::Relative,
    },
    CheckDescriptor {
        id: "LEMMA_CONV",
        summary: "group convolution of extension kernels equals the spectral composition on H¹ (sign = ±1)",
        required: &["m", "k", "s", "z", "sigma", "y", "t", "tau"],
        optional: &[("sign", 1.0)],
        tol: 1e-3,
        metric: Metric::Relative,
    },
    CheckDescriptor {
        id: "COWBOY",
        summary: "ρ-integral of the twisted kernel product equals B^{s-1} (μ/sinh μ)^s Γ(1-s) e^{-Bμ coth μ}",
        required: &["s", "B", "mu"],
        optional: &[],
        tol: 1e-8,
        metric: Metric::Relative,
    },
    CheckDescriptor {
        id: "H_DERIV",
        summary: "finite-difference derivative of h_{s,μ} equals the closed derivative",
        required: &["s", "mu", "rho"],
        optional: &[],
        tol: 1e-6,
        metric: Metric::Absolute,
    },
    CheckDescriptor {
        id: "CONFORMAL",
        summary: "𝓛_s 𝔢_(s)(·,y) = (2πy)^{2s} 𝔢_(-s)(·,y)",
        required: HTYPE,
        optional: &[],
        tol: 1e-3,
        metric: Metric::Relative,
    },
    CheckDescriptor {
        id: "GNONEU",
        summary: "𝓛_s ρ^{-(Q-2s)/4} = gamma_ratio (4y)^{2s} ρ^{-(Q+2s)/4}, ρ = (|z|²+y²)²+16|σ|²",
        required: HTYPE,
        optional: &[],
        tol: 1e-3,
        metric: Metric::Relative,
    },
    CheckDescriptor {
        id: "YAMABE",
        summary: "𝓛_s u_y = u_y^{(Q+2s)/(Q-2s)}",
        required: HTYPE,
        optional: &[],
        tol: 1e-3,
        metric: Metric::Relative,
    },
    CheckDescriptor {
        id: "CHAPMAN",
        summary: "∫ p(g,g',t) p(g',e,τ) dg' = p(g,e,t+τ) on H¹",
        required: &["m", "k", "z", "sigma", "t", "tau"],
        optional: &[],
        tol: 1e-3,
        metric: Metric::Relative,
    },
    CheckDescriptor {
        id: "MASS",
        summary: "∫ p(g,e,t) dg = 1",
        required: &["m", "k", "t"],
        optional: &[],
        tol: 1e-5,
        metric: Metric::Relative,
    },
    CheckDescriptor {
        id: "KNORM",
        summary: "∫ K_(-s)(g,t) dg = 1",
        required: &["m", "k", "s", "t"],
        optional: &[],
        tol: 1e-5,
        metric: Metric::Relative,
    },
    CheckDescriptor {
        id: "JGAUSS",
        summary:
            "J-twisted Gaussian convolution equals (2 sinh u sinh v/(|λ| sinh(u+v)))^{m/2} e^{-(π/2)|z|²|λ| coth(u+v)}",
        required: &["m", "k", "z", "lambda", "t", "tau"],
        optional: &[],
        tol: 1e-6,
        metric: Metric::Relative,
    },
];

/// The registry, in its fixed order.
pub fn list_checks() -> &'static [CheckDescriptor] {
    &REGISTRY
}

/// Looks a check up by id, ignoring ASCII case.
pub fn descriptor(id: &str) -> Option<&'static CheckDescriptor> {
    REGISTRY.iter().find(|d| d.id.eq_ignore_ascii_case(id))
}

/// Quadrature spec a check runs with by default: relative tolerance a
/// hundredth of the check tolerance, clamped to `[1e-10, 1e-4]`.
pub fn spec_for_tol(tol: f64) -> QuadratureSpec {
    QuadratureSpec::default().with_rel_tol((tol / 100.0).clamp(1e-10, 1e-4))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl ParamValue {
    fn render(&self) -> String {
        match self {
            ParamValue::Scalar(v) => v.to_string(),
            ParamValue::Vector(v) => v.iter().map(f64::to_string).collect::<Vec<_>>().join(";"),
        }
    }
}

pub type Params = BTreeMap<String, ParamValue>;

/// Problems with the request itself rather than with the numerics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum UsageError {
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error("check {check} needs parameter `{name}`")]
    MissingParam { check: &'static str, name: &'static str },
    #[error("check {check} takes no parameter `{name}`")]
    UnexpectedParam { check: &'static str, name: String },
    #[error("bad value for `{name}`: {msg}")]
    BadValue { name: String, msg: String },
}

/// Parses a command-line value for parameter `name`.
pub fn parse_param(name: &str, text: &str) -> Result<ParamValue, UsageError> {
    let bad = |msg: String| UsageError::BadValue { name: name.to_string(), msg };
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| bad(format!("`{t}`: {e}")));
    if VECTOR_PARAMS.contains(&name) {
        let v = text.split(',').map(parse).collect::<Result<Vec<_>, _>>()?;
        return Ok(ParamValue::Vector(v));
    }
    let v = parse(text)?;
    if INTEGER_PARAMS.contains(&name) && !(v >= 0.0 && v.fract() == 0.0) {
        return Err(bad(format!("expected a non-negative integer, got {text}")));
    }
    Ok(ParamValue::Scalar(v))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_id: String,
    pub params: Params,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tol: f64,
    pub metric: Metric,
    pub pass: bool,
    pub runtime: f64,
    /// Why the check could not be evaluated, if it could not.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub spec: QuadratureSpec,
}

impl CheckResult {
    /// One CSV row matching [`CheckDescriptor::csv_header`].
    pub fn csv_row(&self) -> String {
        let mut out = self.check_id.clone();
        let names: Vec<&str> = match descriptor(&self.check_id) {
            Some(d) => d.param_names().collect(),
            None => self.params.keys().map(String::as_str).collect(),
        };
        for name in names {
            out.push(',');
            if let Some(v) = self.params.get(name) {
                out.push_str(&v.render());
            }
        }
        let _ = write!(
            out,
            ",{:.16e},{:.16e},{:.6e},{:.6e},{:e},{},{:.3}",
            self.lhs, self.rhs, self.abs_err, self.rel_err, self.tol, self.pass, self.runtime
        );
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("check results serialize")
    }
}

/// Typed access to a check's parameters, defaults filled in.
struct Args<'a> {
    desc: &'static CheckDescriptor,
    params: &'a Params,
}

impl Args<'_> {
    fn scalar(&self, name: &str) -> Result<f64, UsageError> {
        match self.params.get(name) {
            Some(ParamValue::Scalar(v)) => Ok(*v),
            Some(ParamValue::Vector(v)) if v.len() == 1 => Ok(v[0]),
            Some(_) => Err(UsageError::BadValue { name: name.into(), msg: "expected a scalar".into() }),
            None => self
                .desc
                .optional
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, d)| *d)
                .ok_or(UsageError::MissingParam { check: self.desc.id, name: leak_name(self.desc, name) }),
        }
    }

    fn index(&self, name: &str) -> Result<usize, UsageError> {
        let v = self.scalar(name)?;
        if !(v >= 0.0 && v.fract() == 0.0) {
            return Err(UsageError::BadValue {
                name: name.into(),
                msg: format!("expected a non-negative integer, got {v}"),
            });
        }
        Ok(v as usize)
    }

    fn vector(&self, name: &str) -> Result<Vec<f64>, UsageError> {
        match self.params.get(name) {
            Some(ParamValue::Vector(v)) => Ok(v.clone()),
            Some(ParamValue::Scalar(v)) => Ok(vec![*v]),
            None => Err(UsageError::MissingParam { check: self.desc.id, name: leak_name(self.desc, name) }),
        }
    }

    fn sign(&self) -> Result<f64, UsageError> {
        match self.scalar("sign")? {
            v if v == 1.0 || v == -1.0 => Ok(v),
            v => Err(UsageError::BadValue { name: "sign".into(), msg: format!("expected 1 or -1, got {v}") }),
        }
    }

    /// The standard structure for `(m, k)` and the point `(z, σ)` on it.
    fn group(&self) -> Result<(HTypeStructure, GroupPoint), UsageError> {
        let (m, k) = (self.index("m")?, self.index("k")?);
        let structure = HTypeStructure::standard_for(m, k).map_err(|e| bad_value("m,k", e))?;
        let z = self.vector("z")?;
        let sigma = self.vector("sigma")?;
        if z.len() != m || sigma.len() != k {
            return Err(UsageError::BadValue {
                name: "z,sigma".into(),
                msg: format!("need {m} horizontal and {k} vertical coordinates"),
            });
        }
        Ok((structure, GroupPoint::new(z, sigma)))
    }

    fn euclid_point(&self) -> Result<(usize, Vec<f64>), UsageError> {
        let n = self.index("n")?;
        let x = self.vector("z")?;
        if x.len() != n {
            return Err(UsageError::BadValue { name: "z".into(), msg: format!("need {n} coordinates") });
        }
        Ok((n, x))
    }
}

fn leak_name(desc: &'static CheckDescriptor, name: &str) -> &'static str {
    desc.param_names().find(|n| *n == name).unwrap_or("?")
}

fn bad_value(name: &str, e: Error) -> UsageError {
    UsageError::BadValue { name: name.into(), msg: e.to_string() }
}

fn order(sign: f64, s: f64) -> crate::error::Result<FracOrder> {
    if sign > 0.0 {
        FracOrder::plus(s)
    } else {
        FracOrder::minus(s)
    }
}

/// `Γ(a)/Γ(b)`, as the exact product `b(b+1)⋯(a−1)` when `a − b` is a small
/// whole number.
fn gamma_quotient(a: f64, b: f64) -> f64 {
    let d = a - b;
    if d.fract() == 0.0 && (1.0..=8.0).contains(&d) {
        return (0..d as usize).map(|i| b + i as f64).product();
    }
    gamma(a) / gamma(b)
}

/// Both sides of a check, or the reason they could not be formed.
type Sides = crate::error::Result<(f64, f64)>;

/// `(4π)^{1−s} / (Γ(s) C_(s)(m,k))`, which turns `𝔢_(s)(·,y)` into
/// `ρ^{−(Q−2s)/4}`.
fn power_normalization(m: usize, k: usize, o: FracOrder) -> f64 {
    (4.0 * PI).powf(1.0 - o.s()) / (family_gamma(o) * const_c(m, k, o))
}

/// Both sides of `|Γ(−s)| C_(−s) / (Γ(s) C_(s)) = 4^{3s} gamma_ratio`.
pub fn gnoneu_constant_chain(m: usize, k: usize, s: f64) -> crate::error::Result<(f64, f64)> {
    let (plus, minus) = (FracOrder::plus(s)?, FracOrder::minus(s)?);
    let lhs = family_gamma(minus) * const_c(m, k, minus) / (family_gamma(plus) * const_c(m, k, plus));
    Ok((lhs, 4f64.powf(3.0 * s) * gamma_ratio(m, k, s)))
}

/// Both sides of the functional identity `𝓛_s ρ^{−(Q−2s)/4} = ...` at (g, y).
fn gnoneu_sides(structure: &HTypeStructure, s: f64, g: &GroupPoint, y: f64, spec: &QuadratureSpec) -> Sides {
    let (m, k) = (structure.m(), structure.k());
    let q = structure.homogeneous_dimension() as f64;
    let lhs = power_normalization(m, k, FracOrder::plus(s)?) * conformal_apply(structure, s, g, y, spec)?;
    let rhs = gamma_ratio(m, k, s) * (4.0 * y).powf(2.0 * s) * conformal_factor(g, y).powf(-(q + 2.0 * s) / 4.0);
    Ok((lhs, rhs))
}

fn evaluate(id: &str, a: &Args, spec: &QuadratureSpec) -> Result<Sides, UsageError> {
    let sides = match id {
        "EUCLID_INTERTWINE" | "EUCLID_DIMFREE" => {
            let (n, x) = a.euclid_point()?;
            let (s, y) = (a.scalar("s")?, a.scalar("y")?);
            let run = || -> Sides {
                let lhs = frac_power_on_fundsol(Domain::Euclid { x: &x }, s, y, spec)?;
                if id == "EUCLID_DIMFREE" {
                    return Ok((lhs, (2.0 * PI * y).powf(2.0 * s) * euclid_fundsol(n, FracOrder::minus(s)?, &x, y)?));
                }
                // E^(s) at unit distance is the constant in front of the power
                let normalization = euclid_fundsol(n, FracOrder::plus(s)?, &vec![0.0; n], 1.0)?;
                let (half_n, r2) = (n as f64 / 2.0, x.iter().map(|v| v * v).sum::<f64>() + y * y);
                let rhs = gamma_quotient(half_n + s, half_n - s) * (2.0 * y).powf(2.0 * s) * r2.powf(-(half_n + s));
                Ok((lhs / normalization, rhs))
            };
            run()
        }
        "NONGEOM_HTYPE" => {
            let (st, g) = a.group()?;
            let (s, y) = (a.scalar("s")?, a.scalar("y")?);
            (|| -> Sides {
                let lhs = frac_power_on_fundsol(Domain::HType { structure: &st, g: &g }, s, y, spec)?;
                let minus = FracOrder::minus(s)?;
                Ok((lhs, (2.0 * PI * y).powf(2.0 * s) * nongeom_fundsol(&st, minus, &g, y, spec)?))
            })()
        }
        "THEOREM_A" => {
            let (st, g) = a.group()?;
            let (s, y, sign) = (a.scalar("s")?, a.scalar("y")?, a.sign()?);
            (|| -> Sides {
                let o = order(sign, s)?;
                Ok((fundsol_subordinate(&st, o, &g, y, spec)?, fundsol_closed(&st, o, &g, y)?))
            })()
        }
        "LEMMA_CONV" => {
            let (st, g) = a.group()?;
            let (s, y, sign) = (a.scalar("s")?, a.scalar("y")?, a.sign()?);
            let (t, tau) = (a.scalar("t")?, a.scalar("tau")?);
            (|| -> Sides {
                let o = order(sign, s)?;
                Ok((conv_direct(&st, o, &g, y, t, tau, spec)?, conv_lemma_spectral(&st, o, &g, y, t, tau, spec)?))
            })()
        }
        "COWBOY" => {
            let (s, b, mu) = (a.scalar("s")?, a.scalar("B")?, a.scalar("mu")?);
            (|| -> Sides { Ok((cowboy_lhs(s, b, mu, spec)?, cowboy_closed(s, b, mu)?)) })()
        }
        "H_DERIV" => {
            let (s, mu, rho) = (a.scalar("s")?, a.scalar("mu")?, a.scalar("rho")?);
            (|| -> Sides {
                let exact = h_deriv_formula(s, mu, rho)?;
                let fd = central_difference(|r| h_func(s, mu, r), rho, 1e-3 * rho)?;
                Ok((fd, exact))
            })()
        }
        "CONFORMAL" => {
            let (st, g) = a.group()?;
            let (s, y) = (a.scalar("s")?, a.scalar("y")?);
            (|| -> Sides {
                let lhs = conformal_apply(&st, s, &g, y, spec)?;
                Ok((lhs, (2.0 * PI * y).powf(2.0 * s) * fundsol_closed(&st, FracOrder::minus(s)?, &g, y)?))
            })()
        }
        "GNONEU" => {
            let (st, g) = a.group()?;
            let (s, y) = (a.scalar("s")?, a.scalar("y")?);
            gnoneu_sides(&st, s, &g, y, spec)
        }
        "YAMABE" => {
            let (st, g) = a.group()?;
            let (s, y) = (a.scalar("s")?, a.scalar("y")?);
            (|| -> Sides {
                let q = st.homogeneous_dimension() as f64;
                let b = (q - 2.0 * s) / 4.0;
                // u_y = c · ρ^{−(Q−2s)/4}
                let c = gamma_ratio(st.m(), st.k(), s).powf(b / s) * (16.0 * y * y).powf(b);
                let (power_lhs, _) = gnoneu_sides(&st, s, &g, y, spec)?;
                let u = c * conformal_factor(&g, y).powf(-b);
                Ok((c * power_lhs, u.powf((q + 2.0 * s) / (q - 2.0 * s))))
            })()
        }
        "CHAPMAN" => {
            let (st, g) = a.group()?;
            let (t, tau) = (a.scalar("t")?, a.scalar("tau")?);
            (|| -> Sides { Ok((chapman_lhs(&st, &g, t, tau, spec)?, ghc_heat_kernel(&st, &g, t + tau, spec)?)) })()
        }
        "MASS" | "KNORM" => {
            let (m, k) = (a.index("m")?, a.index("k")?);
            let st = HTypeStructure::standard_for(m, k).map_err(|e| bad_value("m,k", e))?;
            let t = a.scalar("t")?;
            let s = if id == "KNORM" { Some(a.scalar("s")?) } else { None };
            (|| -> Sides {
                let mass = match s {
                    Some(s) => thin_kernel_mass(&st, FracOrder::minus(s)?, t, spec)?,
                    None => heat_mass(&st, t, spec)?,
                };
                Ok((mass, 1.0))
            })()
        }
        "JGAUSS" => {
            let (m, k) = (a.index("m")?, a.index("k")?);
            let st = HTypeStructure::standard_for(m, k).map_err(|e| bad_value("m,k", e))?;
            let (z, lambda) = (a.vector("z")?, a.vector("lambda")?);
            let (t, tau) = (a.scalar("t")?, a.scalar("tau")?);
            (|| -> Sides {
                let j = jtwisted_gaussian(&st, &lambda, &z, t, tau, spec)?;
                Ok((j.integral, j.factored))
            })()
        }
        other => return Err(UsageError::UnknownCheck(other.to_string())),
    };
    match sides {
        Err(Error::InvalidArgument(msg)) => Err(UsageError::BadValue { name: id.to_lowercase(), msg }),
        other => Ok(other),
    }
}

/// Runs one check.
///
/// `tol` overrides the descriptor's default tolerance. Missing, unknown or
/// malformed parameters are usage errors; a numerical failure yields a failed
/// result carrying the error as its note.
pub fn run_check(
    id: &str,
    params: &Params,
    tol: Option<f64>,
    spec: &QuadratureSpec,
) -> Result<CheckResult, UsageError> {
    let desc = descriptor(id).ok_or_else(|| UsageError::UnknownCheck(id.to_string()))?;
    if let Some(name) = params.keys().find(|k| !desc.param_names().any(|n| n == k.as_str())) {
        return Err(UsageError::UnexpectedParam { check: desc.id, name: name.clone() });
    }
    for name in desc.required {
        if !params.contains_key(*name) {
            return Err(UsageError::MissingParam { check: desc.id, name });
        }
    }
    spec.validate().map_err(|e| bad_value("quadrature spec", e))?;
    let tol = tol.unwrap_or(desc.tol);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(UsageError::BadValue { name: "tol".into(), msg: format!("must be positive, got {tol}") });
    }
    let mut recorded = params.clone();
    for (name, default) in desc.optional {
        recorded.entry(name.to_string()).or_insert(ParamValue::Scalar(*default));
    }

    let args = Args { desc, params: &recorded };
    let start = Instant::now();
    let sides = evaluate(desc.id, &args, spec)?;
    let runtime = start.elapsed().as_secs_f64();

    let (lhs, rhs, note) = match sides {
        Ok((l, r)) => (l, r, None),
        Err(e) => (f64::NAN, f64::NAN, Some(e.to_string())),
    };
    let abs_err = (lhs - rhs).abs();
    let rel_err = abs_err / rhs.abs().max(REL_EPS);
    let judged = if desc.metric == Metric::Absolute || rhs == 0.0 { abs_err } else { rel_err };
    Ok(CheckResult {
        check_id: desc.id.to_string(),
        params: recorded,
        lhs,
        rhs,
        abs_err,
        rel_err,
        tol,
        metric: desc.metric,
        // NaN compares false, so failed evaluations never pass
        pass: judged <= tol,
        runtime,
        note,
        spec: *spec,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(items: &[(&str, &str)]) -> Params {
        items.iter().map(|(k, v)| (k.to_string(), parse_param(k, v).unwrap())).collect()
    }

    #[test]
    fn registry_is_complete_and_unique() {
        let ids: Vec<_> = list_checks().iter().map(|d| d.id).collect();
        assert_eq!(ids.len(), 14);
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 14);
        assert!(list_checks().iter().all(|d| d.tol > 0.0 && !d.required.is_empty()));
        assert_eq!(descriptor("cowboy").unwrap().id, "COWBOY");
    }

    #[test]
    fn cowboy_row() {
        let p = params(&[("s", "0.5"), ("B", "1"), ("mu", "1")]);
        let d = descriptor("COWBOY").unwrap();
        let r = run_check("cowboy", &p, None, &spec_for_tol(d.tol)).unwrap();
        assert!(r.pass, "{r:?}");
        assert!((r.rhs - 0.4398199).abs() < 1e-7);
        let row = r.csv_row();
        assert_eq!(row.split(',').count(), d.csv_header().split(',').count());
        assert!(row.starts_with("COWBOY,0.5,1,1,"));
    }

    #[test]
    fn usage_errors() {
        let spec = QuadratureSpec::default();
        assert!(matches!(run_check("nosuch", &Params::new(), None, &spec), Err(UsageError::UnknownCheck(_))));
        let p = params(&[("s", "0.5"), ("B", "1")]);
        assert!(matches!(run_check("COWBOY", &p, None, &spec), Err(UsageError::MissingParam { name: "mu", .. })));
        let p = params(&[("s", "0.5"), ("B", "1"), ("mu", "1"), ("t", "1")]);
        assert!(matches!(run_check("COWBOY", &p, None, &spec), Err(UsageError::UnexpectedParam { .. })));
        let p = params(&[("s", "1.5"), ("B", "1"), ("mu", "1")]);
        assert!(matches!(run_check("COWBOY", &p, None, &spec), Err(UsageError::BadValue { .. })));
        assert!(parse_param("m", "2.5").is_err());
        assert_eq!(parse_param("z", "1,-2").unwrap(), ParamValue::Vector(vec![1.0, -2.0]));
    }

    #[test]
    fn euclid_anchor() {
        let p = params(&[("n", "2"), ("s", "0.5"), ("z", "0,0"), ("y", "1")]);
        let r = run_check("EUCLID_INTERTWINE", &p, None, &spec_for_tol(1e-6)).unwrap();
        assert!(r.pass, "{r:?}");
        assert!((r.rhs - 1.0).abs() < 1e-14);
    }

    #[test]
    fn constant_chain() {
        for s in [0.1, 0.5, 0.9] {
            let (l, r) = gnoneu_constant_chain(2, 1, s).unwrap();
            assert!(((l - r) / r).abs() < 1e-12);
        }
    }

    #[test]
    fn h_deriv_passes() {
        let p = params(&[("s", "0.5"), ("mu", "1"), ("rho", "1")]);
        let r = run_check("H_DERIV", &p, None, &QuadratureSpec::default()).unwrap();
        assert!(r.pass && r.metric == Metric::Absolute, "{r:?}");
    }
}
