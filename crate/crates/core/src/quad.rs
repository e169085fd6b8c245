//! Quadrature engine.
//!
//! Everything is built on a globally adaptive 21-point Gauss–Kronrod rule
//! with the QUADPACK error heuristic. The variants handle the integral shapes
//! that occur in the kernels:
//!
//! * [`integrate_adaptive`] for finite intervals (endpoint singularities are
//!   resolved by repeated bisection);
//! * [`integrate_semiinfinite`] for `∫₀^∞ f` with `f(t) ~ c·t^{α−1}` at the
//!   origin and super-polynomial decay, using `t = u^{1/α}` near zero and
//!   geometric truncation of the tail;
//! * [`radial_fourier`] for Fourier transforms of radial profiles on ℝ¹ and ℝ³;
//! * [`integrate_box`] / [`integrate_over_box`] for tensorized cubature in
//!   two to four dimensions.
//!
//! All routines are deterministic: the subdivision order only depends on the
//! integrand values.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Envelope level, relative to the peak, below which an unbounded domain
    /// is truncated.
    pub tail_cut: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { abs_tol: 1e-12, rel_tol: 1e-10, max_subdivisions: 2000, tail_cut: 1e-16 }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize, tail_cut: f64) -> Result<Self> {
        let spec = QuadratureSpec { abs_tol, rel_tol, max_subdivisions, tail_cut };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.abs_tol) || !positive(self.rel_tol) || !positive(self.tail_cut) {
            return Err(invalid("quadrature tolerances and tail cut must be positive"));
        }
        if self.max_subdivisions < 1 {
            return Err(invalid("max_subdivisions must be at least 1"));
        }
        Ok(())
    }

    pub fn with_rel_tol(self, rel_tol: f64) -> Self {
        QuadratureSpec { rel_tol, ..self }
    }

    pub fn with_abs_tol(self, abs_tol: f64) -> Self {
        QuadratureSpec { abs_tol, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub err_estimate: f64,
    pub evaluations: usize,
}

impl QuadResult {
    fn add(&mut self, other: &QuadResult) {
        self.value += other.value;
        self.err_estimate += other.err_estimate;
        self.evaluations += other.evaluations;
    }

    fn scale(mut self, factor: f64) -> Self {
        self.value *= factor;
        self.err_estimate *= factor.abs();
        self
    }
}

// Kronrod nodes (descending, last is the centre) and weights; Gauss weights
// belong to the odd-indexed Kronrod nodes and the centre.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_081_117_092,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    abs_value: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    // max-heap on error; ties broken by position so the order is total
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err).then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gk21<F>(f: &mut F, a: f64, b: f64) -> Result<Segment>
where
    F: FnMut(f64) -> Result<f64>,
{
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut eval = |x: f64| -> Result<f64> {
        let v = f(x)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation { at: x })
        }
    };
    let fc = eval(centre)?;
    let mut res_k = WGK[10] * fc;
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = eval(centre - dx)?;
        let f2 = eval(centre + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let abs_value = res_abs * half.abs();
    res_asc *= half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if abs_value > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * abs_value);
    }
    Ok(Segment { a, b, value, err, abs_value })
}

/// Termination rule shared by the adaptive drivers.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Target {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// When positive, the absolute target is also floored at
    /// `rel_tol · floor_fraction · ∫|f|`, so heavily cancelling oscillatory
    /// integrals converge relative to their magnitude scale.
    pub l1_floor: f64,
    pub max_subdivisions: usize,
}

impl Target {
    pub(crate) fn from_spec(spec: &QuadratureSpec) -> Self {
        Target { abs_tol: spec.abs_tol, rel_tol: spec.rel_tol, l1_floor: 0.0, max_subdivisions: spec.max_subdivisions }
    }

    fn tolerance(&self, value: f64, l1: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs()).max(self.rel_tol * self.l1_floor * l1)
    }
}

pub(crate) struct Adaptive {
    pub result: QuadResult,
    pub l1: f64,
}

/// Globally adaptive bisection over the intervals delimited by `breaks`.
pub(crate) fn adaptive<F>(f: &mut F, breaks: &[f64], target: Target) -> Result<Adaptive>
where
    F: FnMut(f64) -> Result<f64>,
{
    if breaks.len() < 2 {
        return Err(invalid("need at least two breakpoints"));
    }
    if breaks.windows(2).any(|w| !(w[0] < w[1])) || breaks.iter().any(|x| !x.is_finite()) {
        return Err(invalid("breakpoints must be finite and strictly increasing"));
    }
    let mut heap = BinaryHeap::with_capacity(breaks.len() + target.max_subdivisions);
    let mut evaluations = 0usize;
    for w in breaks.windows(2) {
        heap.push(gk21(f, w[0], w[1])?);
        evaluations += 21;
    }
    let (mut value, mut err, mut l1) =
        heap.iter().fold((0.0, 0.0, 0.0), |(v, e, l), s| (v + s.value, e + s.err, l + s.abs_value));
    let mut subdivisions = 0usize;
    loop {
        if err <= target.tolerance(value, l1) {
            // final sum in a fixed order
            let mut segs = heap.into_vec();
            segs.sort_by(|x, y| x.a.total_cmp(&y.a));
            let (value, err, l1) =
                segs.iter().fold((0.0, 0.0, 0.0), |(v, e, l), s| (v + s.value, e + s.err, l + s.abs_value));
            return Ok(Adaptive { result: QuadResult { value, err_estimate: err, evaluations }, l1 });
        }
        if subdivisions >= target.max_subdivisions {
            return Err(Error::ConvergenceFailure { value, err_estimate: err, subdivisions });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            // interval exhausted in floating point
            return Err(Error::ConvergenceFailure { value, err_estimate: err, subdivisions });
        }
        let left = gk21(f, worst.a, mid)?;
        let right = gk21(f, mid, worst.b)?;
        value += left.value + right.value - worst.value;
        err = (err + left.err + right.err - worst.err).max(0.0);
        l1 += left.abs_value + right.abs_value - worst.abs_value;
        heap.push(left);
        heap.push(right);
        evaluations += 42;
        subdivisions += 1;
    }
}

/// `∫_a^b f` by adaptive Gauss–Kronrod.
pub fn integrate_adaptive<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    integrate_adaptive_with_breaks(f, &[a, b], spec)
}

/// As [`integrate_adaptive`], with an initial partition.
pub fn integrate_adaptive_with_breaks<F>(f: F, breaks: &[f64], spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    spec.validate()?;
    let mut g = |x: f64| Ok(f(x));
    adaptive(&mut g, breaks, Target::from_spec(spec)).map(|a| a.result)
}

/// Fallible-integrand version of [`integrate_adaptive`].
pub fn try_integrate_adaptive<F>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    spec.validate()?;
    adaptive(&mut f, &[a, b], Target::from_spec(spec)).map(|a| a.result)
}

/// `∫₀^∞ f(t) dt` for `f(t) ~ c·t^{α−1}` as `t → 0⁺` and super-polynomial
/// decay at infinity.
pub fn integrate_semiinfinite<F>(f: F, alpha: f64, spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    try_integrate_semiinfinite(|t| Ok(f(t)), alpha, 1.0, spec)
}

/// Fallible integrand with an explicit length scale separating the head
/// `[0, scale]` from the tail.
pub fn try_integrate_semiinfinite<F>(mut f: F, alpha: f64, scale: f64, spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    spec.validate()?;
    if !(alpha > 0.0) {
        return Err(Error::Divergence(format!(
            "endpoint exponent α={alpha} is not positive: t^(α-1) is not integrable at 0"
        )));
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(invalid("length scale must be positive"));
    }
    let target = Target::from_spec(spec);

    // head: t = scale·u^p with p = 1/α turns t^{α−1} dt into a bounded density
    let p = 1.0 / alpha;
    let mut head_integrand = |u: f64| -> Result<f64> {
        let t = (scale * u.powf(p)).max(f64::MIN_POSITIVE);
        let jac = scale * p * u.powf(p - 1.0);
        if jac == 0.0 {
            return Ok(0.0);
        }
        Ok(jac * f(t)?)
    };
    let head = adaptive(&mut head_integrand, &[0.0, 1.0], target)?;
    let mut total = head.result;

    // tail: doubling pieces until both the contribution and the envelope vanish
    const MAX_DOUBLINGS: usize = 64;
    let mut lo = scale;
    let mut peak = head.l1 / scale;
    for _ in 0..MAX_DOUBLINGS {
        let hi = 2.0 * lo;
        let piece_target = Target { abs_tol: 0.25 * target.abs_tol.max(target.rel_tol * total.value.abs()), ..target };
        let piece = adaptive(&mut f, &[lo, hi], piece_target)?;
        total.add(&piece.result);
        peak = peak.max(piece.l1 / (hi - lo));
        let envelope = f(hi)?.abs();
        let negligible_piece = piece.result.value.abs() <= piece_target.abs_tol;
        if negligible_piece && envelope <= spec.tail_cut * peak {
            return Ok(total);
        }
        lo = hi;
    }
    Err(Error::Divergence(format!(
        "tail envelope still above {:e} of the peak at the truncation bound t={lo:e}",
        spec.tail_cut
    )))
}

/// `∫₀^∞ f` for a density with algebraic behaviour at both ends:
/// `f(t) ~ t^{α−1}` at 0 and `f(t) ~ t^{−β−1}` at ∞ (α, β > 0).
///
/// The tail `[scale, ∞)` is folded onto `(0, 1]` by `t = scale·w^{−1/β}`,
/// which turns it into another bounded head integral.
pub fn try_integrate_power_tails<F>(
    mut f: F,
    alpha: f64,
    beta: f64,
    scale: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    spec.validate()?;
    if !(alpha > 0.0) || !(beta > 0.0) {
        return Err(Error::Divergence(format!("endpoint exponents α={alpha}, β={beta} must be positive")));
    }
    // sign-changing integrands (semigroup differences) converge relative to ∫|f|
    let target = Target { l1_floor: 1.0, ..Target::from_spec(spec) };
    let p = 1.0 / alpha;
    let mut head_integrand = |u: f64| -> Result<f64> {
        let t = (scale * u.powf(p)).max(f64::MIN_POSITIVE);
        let jac = scale * p * u.powf(p - 1.0);
        if jac == 0.0 {
            return Ok(0.0);
        }
        Ok(jac * f(t)?)
    };
    let Adaptive { result: head, l1: head_l1 } = adaptive(&mut head_integrand, &[0.0, 1.0], target)?;
    let q = 1.0 / beta;
    let mut tail_integrand = |w: f64| -> Result<f64> {
        let t = scale * w.powf(-q);
        if !t.is_finite() {
            return Ok(0.0);
        }
        let jac = scale * q * w.powf(-q - 1.0);
        Ok(jac * f(t)?)
    };
    let tail_target = Target { abs_tol: target.abs_tol.max(target.rel_tol * head_l1) * 0.5, ..target };
    let tail = adaptive(&mut tail_integrand, &[0.0, 1.0], tail_target)?.result;
    let mut total = head;
    total.add(&tail);
    Ok(total)
}

/// `sin(x)/x`, with its Taylor series near zero.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    } else {
        x.sin() / x
    }
}

/// Finds a truncation radius for a radial profile: doubling from `scale/16`
/// until `λ^{k−1}|f(λ)|` stays below `cut` times its peak at two successive
/// probes, then narrowing the last doubling by geometric bisection.
fn radial_cutoff<F>(f: &mut F, k: usize, cut: f64, scale: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let weight = |l: f64| l.powi(k as i32 - 1);
    let mut peak = f(0.0)?.abs() * if k == 1 { 1.0 } else { 0.0 };
    let mut lam = scale / 16.0;
    let mut below = 0;
    for _ in 0..64 {
        let env = weight(lam) * f(lam)?.abs();
        if env > peak {
            peak = env;
            below = 0;
        } else if env <= cut * peak {
            below += 1;
            if below == 2 {
                // the crossing lies in [λ/4, λ/2]
                let (mut lo, mut hi) = (0.25 * lam, 0.5 * lam);
                for _ in 0..4 {
                    let mid = (lo * hi).sqrt();
                    if weight(mid) * f(mid)?.abs() <= cut * peak {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                return Ok(hi);
            }
        } else {
            below = 0;
        }
        lam *= 2.0;
    }
    Err(Error::Divergence(format!("radial profile does not decay below {cut:e} of its peak")))
}

/// Envelope level for truncating a radial profile: `tail_cut`, relaxed to
/// `1e-3·rel_tol` when that is coarser, since the discarded tail then stays
/// well inside the relative target.
fn radial_cut(spec: &QuadratureSpec) -> f64 {
    spec.tail_cut.max(1e-3 * spec.rel_tol)
}

/// `∫_{ℝ^k} e^{2πi⟨σ,λ⟩} f(|λ|) dλ` at any σ with `|σ| = r_out`, for k ∈ {1, 3}.
///
/// k = 1 reduces to `2∫₀^∞ cos(2π r λ) f(λ) dλ`; k = 3 to
/// `(2/r)∫₀^∞ λ f(λ) sin(2π r λ) dλ`, written as `4π∫ λ² f sinc(2πrλ)` so the
/// `r → 0` limit needs no special case. The profile is truncated where its
/// envelope falls below `max(tail_cut, 1e-3·rel_tol)` and the range is split
/// at half periods of the oscillation. The convergence target is also floored relative to
/// `∫|integrand|`, which is the meaningful scale when the transform cancels.
pub fn radial_fourier<F>(f: F, r_out: f64, k: usize, spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    try_radial_fourier(|l| Ok(f(l)), r_out, k, spec)
}

pub fn try_radial_fourier<F>(f: F, r_out: f64, k: usize, spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    try_radial_fourier_scaled(f, r_out, k, 1.0, spec)
}

/// As [`try_radial_fourier`] for a profile whose decay length in λ is about
/// `lambda_scale`. The truncation search starts from that scale, so profiles
/// concentrated near 0 (or spread far out) are resolved.
pub fn try_radial_fourier_scaled<F>(
    mut f: F,
    r_out: f64,
    k: usize,
    lambda_scale: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    spec.validate()?;
    if !(lambda_scale > 0.0 && lambda_scale.is_finite()) {
        return Err(invalid("frequency scale must be positive"));
    }
    if k != 1 && k != 3 {
        return Err(Error::UnsupportedDimension(k));
    }
    if !(r_out >= 0.0 && r_out.is_finite()) {
        return Err(invalid("radial Fourier frequency must be finite and non-negative"));
    }
    let cutoff = radial_cutoff(&mut f, k, radial_cut(spec), lambda_scale)?;
    let mut breaks = vec![0.0];
    if r_out > 0.0 {
        let half_period = 0.5 / r_out;
        let count = (cutoff / half_period).ceil() as usize;
        if count > 1 && count <= 20_000 {
            breaks.extend((1..count).map(|i| i as f64 * half_period));
        }
    }
    breaks.push(cutoff);
    let target = Target { l1_floor: 1.0, ..Target::from_spec(spec) };
    let omega = 2.0 * PI * r_out;
    let result = if k == 1 {
        let mut g = |l: f64| Ok((omega * l).cos() * f(l)?);
        adaptive(&mut g, &breaks, target)?.result.scale(2.0)
    } else {
        let mut g = |l: f64| Ok(l * l * sinc(omega * l) * f(l)?);
        adaptive(&mut g, &breaks, target)?.result.scale(4.0 * PI)
    };
    Ok(result)
}

/// Radial Fourier transform along the shifted line `λ = ξ + iη`, for a
/// profile that is even, real on the real axis and analytic in the strip
/// `|Im λ| ≤ η`.
///
/// `f` receives `ξ ≥ 0` and returns `f(ξ + iη)`. Moving the contour pulls the
/// factor `e^{−2π r η}` out of the integral exactly, which removes the
/// cancellation a real-axis evaluation suffers when `r η` is large:
///
/// * k = 1: `2 e^{−2πrη} Re ∫₀^∞ e^{2πirξ} f(ξ+iη) dξ`;
/// * k = 3: `(2/r) e^{−2πrη} Im ∫₀^∞ (ξ+iη) f(ξ+iη) e^{2πirξ} dξ`.
pub fn try_radial_fourier_shifted<F>(
    mut f: F,
    r_out: f64,
    k: usize,
    eta: f64,
    lambda_scale: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    spec.validate()?;
    if k != 1 && k != 3 {
        return Err(Error::UnsupportedDimension(k));
    }
    if !(r_out > 0.0 && r_out.is_finite()) || !(eta > 0.0 && eta.is_finite()) {
        return Err(invalid("shifted transform needs a positive frequency and shift"));
    }
    if !(lambda_scale > 0.0 && lambda_scale.is_finite()) {
        return Err(invalid("frequency scale must be positive"));
    }
    let omega = 2.0 * PI * r_out;
    let mut modulus = |x: f64| -> Result<f64> {
        let v = f(x)?;
        Ok(if k == 1 { v.norm() } else { v.norm() * Complex64::new(x, eta).norm() })
    };
    // the weight is already folded into `modulus`
    let cutoff = radial_cutoff(&mut modulus, 1, radial_cut(spec), lambda_scale)?;
    let mut breaks = vec![0.0];
    let half_period = 0.5 / r_out;
    let count = (cutoff / half_period).ceil() as usize;
    if count > 1 && count <= 20_000 {
        breaks.extend((1..count).map(|i| i as f64 * half_period));
    }
    breaks.push(cutoff);
    let target = Target { l1_floor: 1.0, ..Target::from_spec(spec) };
    let damping = (-omega * eta).exp();
    let result = if k == 1 {
        let mut g = |x: f64| Ok((Complex64::from_polar(1.0, omega * x) * f(x)?).re);
        adaptive(&mut g, &breaks, target)?.result.scale(2.0 * damping)
    } else {
        let mut g = |x: f64| Ok((Complex64::new(x, eta) * Complex64::from_polar(1.0, omega * x) * f(x)?).im);
        adaptive(&mut g, &breaks, target)?.result.scale(2.0 * damping / r_out)
    };
    Ok(result)
}

/// Recursive tensor-product driver over an explicit box.
fn tensor<F>(
    f: &mut F,
    x: &mut Vec<f64>,
    breaks: &[Vec<f64>],
    abs_target: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let axis = x.len();
    let d = breaks.len();
    let target =
        Target { abs_tol: abs_target, rel_tol: spec.rel_tol, l1_floor: 0.0, max_subdivisions: spec.max_subdivisions };
    let axis_breaks = &breaks[axis];
    if axis + 1 == d {
        let mut g = |v: f64| {
            x.push(v);
            let r = f(x);
            x.pop();
            r
        };
        return adaptive(&mut g, axis_breaks, target).map(|a| a.result);
    }
    let width = axis_breaks[axis_breaks.len() - 1] - axis_breaks[0];
    let inner_abs = 0.1 * abs_target / width;
    let inner_spec = spec.with_rel_tol(0.1 * spec.rel_tol);
    let mut evaluations = 0usize;
    let mut g = |v: f64| {
        x.push(v);
        let r = tensor(f, x, breaks, inner_abs, &inner_spec);
        x.pop();
        r.map(|q| {
            evaluations += q.evaluations;
            q.value
        })
    };
    let mut out = adaptive(&mut g, axis_breaks, target)?.result;
    out.evaluations = evaluations;
    Ok(out)
}

/// Cubature over the box with per-axis breakpoint lists (each list includes
/// the two box edges).
pub fn try_integrate_over_box<F>(mut f: F, breaks: &[Vec<f64>], spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    spec.validate()?;
    let d = breaks.len();
    if !(1..=4).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    // coarse magnitude estimate sets the absolute target of the nested levels
    let n = 8usize;
    let mut l1 = 0.0;
    let mut idx = vec![0usize; d];
    let volume: f64 = breaks.iter().map(|b| b[b.len() - 1] - b[0]).product();
    let total = n.pow(d as u32);
    let mut x = vec![0.0; d];
    for _ in 0..total {
        for (ax, &i) in idx.iter().enumerate() {
            let (lo, hi) = (breaks[ax][0], breaks[ax][breaks[ax].len() - 1]);
            x[ax] = lo + (i as f64 + 0.5) * (hi - lo) / n as f64;
        }
        l1 += f(&x)?.abs();
        for i in idx.iter_mut() {
            *i += 1;
            if *i < n {
                break;
            }
            *i = 0;
        }
    }
    l1 *= volume / total as f64;
    let abs_target = spec.abs_tol.max(spec.rel_tol * l1);
    let mut point = Vec::with_capacity(d);
    tensor(&mut f, &mut point, breaks, abs_target, spec)
}

pub fn integrate_over_box<F>(f: F, lower: &[f64], upper: &[f64], spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: Fn(&[f64]) -> f64,
{
    if lower.len() != upper.len() || lower.iter().zip(upper).any(|(a, b)| !(a < b)) {
        return Err(invalid("box bounds must have equal length with lower < upper"));
    }
    let breaks: Vec<Vec<f64>> = lower.iter().zip(upper).map(|(&a, &b)| vec![a, b]).collect();
    try_integrate_over_box(|x| Ok(f(x)), &breaks, spec)
}

/// `∫_{ℝ^d} f` for an integrand with Gaussian-type decay, d ∈ 2..=4.
///
/// The envelope is sampled on spheres of doubling radius along the axes and
/// the main diagonals; the box half-width is the first radius where it stays
/// below `tail_cut` times its peak. Each axis is split at the origin.
pub fn integrate_box<F>(f: F, d: usize, spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: Fn(&[f64]) -> f64,
{
    spec.validate()?;
    if !(2..=4).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    let mut directions: Vec<Vec<f64>> = Vec::new();
    for ax in 0..d {
        for sign in [1.0, -1.0] {
            let mut v = vec![0.0; d];
            v[ax] = sign;
            directions.push(v);
        }
    }
    for mask in 0..(1usize << d) {
        let v = (0..d).map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 } / (d as f64).sqrt()).collect();
        directions.push(v);
    }
    let envelope = |r: f64| {
        directions
            .iter()
            .map(|dir| {
                let x: Vec<f64> = dir.iter().map(|c| c * r).collect();
                f(&x).abs()
            })
            .fold(0.0, f64::max)
    };
    let mut peak = envelope(0.0);
    let mut radius = 1.0 / 16.0;
    let mut below = 0;
    let mut half_width = None;
    for _ in 0..48 {
        let env = envelope(radius);
        if env > peak {
            peak = env;
            below = 0;
        } else if env <= spec.tail_cut * peak {
            below += 1;
            if below == 2 {
                half_width = Some(radius);
                break;
            }
        } else {
            below = 0;
        }
        radius *= 2.0;
    }
    let w = half_width.ok_or_else(|| Error::Divergence("integrand envelope does not decay".into()))?;
    let breaks: Vec<Vec<f64>> = (0..d).map(|_| vec![-w, 0.0, w]).collect();
    try_integrate_over_box(|x| Ok(f(x)), &breaks, spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn finite_interval_examples() {
        let r = integrate_adaptive(|x| x * x, 0.0, 1.0, &spec()).unwrap();
        assert!(rel(r.value, 1.0 / 3.0) < 1e-13);
        let r = integrate_adaptive(f64::sin, 0.0, PI, &spec()).unwrap();
        assert!(rel(r.value, 2.0) < 1e-13);
        let r = integrate_adaptive(|x| 1.0 / x.sqrt(), 0.0, 1.0, &spec()).unwrap();
        assert!(rel(r.value, 2.0) < 1e-10, "{}", r.value);
        assert!(r.err_estimate >= 0.0);
    }

    #[test]
    fn non_finite_values_are_reported() {
        let err = integrate_adaptive(|x| if x > 0.5 { f64::NAN } else { 1.0 }, 0.0, 1.0, &spec()).unwrap_err();
        assert!(matches!(err, Error::Evaluation { .. }));
    }

    #[test]
    fn subdivision_budget_is_enforced() {
        let tight = QuadratureSpec { max_subdivisions: 2, ..spec() };
        let err = integrate_adaptive(|x| (1.0 / (x + 1e-9)).sin(), 0.0, 1.0, &tight).unwrap_err();
        match err {
            Error::ConvergenceFailure { value, subdivisions, .. } => {
                assert!(value.is_finite());
                assert_eq!(subdivisions, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn semiinfinite_examples() {
        let r = integrate_semiinfinite(|t| (-t).exp() / t.sqrt(), 0.5, &spec()).unwrap();
        assert!(rel(r.value, PI.sqrt()) < 1e-11);
        let r = integrate_semiinfinite(|t| (-t).exp(), 1.0, &spec()).unwrap();
        assert!(rel(r.value, 1.0) < 1e-12);
        let r = integrate_semiinfinite(|t| if t < 1e-8 { 1.0 } else { t / t.sinh() }, 1.0, &spec()).unwrap();
        assert!(rel(r.value, PI * PI / 4.0) < 1e-11);
    }

    #[test]
    fn semiinfinite_rejects_divergence() {
        assert!(matches!(integrate_semiinfinite(|t| 1.0 / t, 0.0, &spec()), Err(Error::Divergence(_))));
        assert!(matches!(integrate_semiinfinite(|t| 1.0 / (1.0 + t), 1.0, &spec()), Err(Error::Divergence(_))));
    }

    #[test]
    fn power_tails() {
        // ∫₀^∞ t^{-1/2}/(1+t) dt = π
        let r = try_integrate_power_tails(|t| Ok(1.0 / (t.sqrt() * (1.0 + t))), 0.5, 0.5, 1.0, &spec()).unwrap();
        assert!(rel(r.value, PI) < 1e-10, "{}", r.value);
    }

    #[test]
    fn radial_fourier_gaussians() {
        let g = |r: f64| (-PI * r * r).exp();
        let r = radial_fourier(g, 1.0, 1, &spec()).unwrap();
        assert!(rel(r.value, (-PI).exp()) < 1e-9, "{}", r.value);
        let r = radial_fourier(g, 0.0, 3, &spec()).unwrap();
        assert!(rel(r.value, 1.0) < 1e-10);
        let r = radial_fourier(g, 1.0, 3, &spec()).unwrap();
        assert!(rel(r.value, (-PI).exp()) < 1e-9, "{}", r.value);
        assert!(matches!(radial_fourier(g, 1.0, 2, &spec()), Err(Error::UnsupportedDimension(2))));
    }

    #[test]
    fn box_gaussians() {
        let s = spec().with_rel_tol(1e-9);
        let gauss = |x: &[f64]| (-PI * x.iter().map(|v| v * v).sum::<f64>()).exp();
        let r = integrate_box(gauss, 2, &s).unwrap();
        assert!(rel(r.value, 1.0) < 1e-8, "{}", r.value);
        let r = integrate_box(gauss, 3, &s).unwrap();
        assert!(rel(r.value, 1.0) < 1e-8, "{}", r.value);
        let r = integrate_box(|x: &[f64]| x[0] * x[0] * gauss(x), 2, &s).unwrap();
        assert!(rel(r.value, 1.0 / (2.0 * PI)) < 1e-8, "{}", r.value);
        assert!(integrate_box(gauss, 5, &s).is_err());
    }

    #[test]
    fn sinc_is_continuous_at_the_switch() {
        let below = sinc(0.999_999e-4);
        let above = sinc(1.000_001e-4);
        assert!((below - 0.999_999e-4f64.sin() / 0.999_999e-4).abs() < 4e-16);
        assert!((above - 1.000_001e-4f64.sin() / 1.000_001e-4).abs() < 4e-16);
        assert_eq!(sinc(0.0), 1.0);
    }

    #[test]
    fn shifted_transform_matches_gaussian() {
        // the Gaussian e^{−πλ²} is entire and its own transform
        let s = QuadratureSpec::default();
        let gauss = |x: f64, eta: f64| (-PI * Complex64::new(x, eta).powi(2)).exp();
        for (r, eta) in [(0.7, 0.3), (2.0, 0.5), (3.0, 1.0)] {
            let v = try_radial_fourier_shifted(|x| Ok(gauss(x, eta)), r, 1, eta, 1.0, &s).unwrap();
            assert!(rel(v.value, (-PI * r * r).exp()) < 1e-9, "{} {}", v.value, (-PI * r * r).exp());
            let v = try_radial_fourier_shifted(|x| Ok(gauss(x, eta)), r, 3, eta, 1.0, &s).unwrap();
            let r3 = radial_fourier(|l| (-PI * l * l).exp(), r, 3, &s).unwrap().value;
            assert!(rel(v.value, (-PI * r * r).exp()) < 1e-9, "{} {r3}", v.value);
        }
    }
}
