//! Brute-force group integrals on `H¹`, the independent side of the
//! convolution identities, and radial mass integrals on any H-type group.

use std::f64::consts::PI;

use super::orbit::nested;
use crate::error::{invalid, Error, Result};
use crate::gamma::gamma;
use crate::htype::{GroupPoint, HTypeStructure};
use crate::kernels::{ext_kernel_q, ghc_heat_kernel, FracOrder};
use crate::quad::{self, QuadratureSpec};

/// Samples per axis of a [`KernelTable`].
pub const TABLE_NODES: usize = 192;

/// A radial kernel `f(|z|, |σ|)` tabulated on a uniform grid and read back by
/// Catmull–Rom bicubic interpolation. Both coordinates are mirrored at 0
/// (the kernel is even in each) and the table reads 0 past its extent.
#[derive(Debug, Clone)]
pub struct KernelTable {
    r_max: f64,
    s_max: f64,
    n: usize,
    values: Vec<f64>,
}

/// Level, relative to the peak, beyond which a tabulated kernel is treated as 0.
const TABLE_CUT: f64 = 1e-8;

fn extent<F>(mut f: F, peak: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut x = 0.25;
    for _ in 0..40 {
        if f(x)?.abs() <= TABLE_CUT * peak {
            let (mut lo, mut hi) = (x / 1.5, x);
            for _ in 0..6 {
                let mid = 0.5 * (lo + hi);
                if f(mid)?.abs() <= TABLE_CUT * peak {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(hi);
        }
        x *= 1.5;
    }
    Err(Error::Divergence("tabulated kernel does not decay".into()))
}

impl KernelTable {
    /// Tabulates `f` with `n` nodes per axis over the box where it exceeds
    /// `1e-8` of its value at the origin.
    pub fn build<F>(mut f: F, n: usize) -> Result<Self>
    where
        F: FnMut(f64, f64) -> Result<f64>,
    {
        if n < 4 {
            return Err(invalid("a kernel table needs at least 4 nodes per axis"));
        }
        let peak = f(0.0, 0.0)?.abs();
        if !(peak > 0.0 && peak.is_finite()) {
            return Err(Error::Evaluation { at: 0.0 });
        }
        let r_max = extent(|r| f(r, 0.0), peak)?;
        let s_max = extent(|s| f(0.0, s), peak)?;
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            let r = r_max * i as f64 / (n - 1) as f64;
            for j in 0..n {
                values.push(f(r, s_max * j as f64 / (n - 1) as f64)?);
            }
        }
        Ok(KernelTable { r_max, s_max, n, values })
    }

    fn node(&self, i: isize, j: isize) -> f64 {
        let last = self.n as isize - 1;
        let (i, j) = (i.abs(), j.abs());
        if i > last || j > last {
            0.0
        } else {
            self.values[i as usize * self.n + j as usize]
        }
    }

    pub fn eval(&self, r: f64, s: f64) -> f64 {
        let (r, s) = (r.abs(), s.abs());
        if r >= self.r_max || s >= self.s_max {
            return 0.0;
        }
        let step = (self.n - 1) as f64;
        let (u, v) = (r / self.r_max * step, s / self.s_max * step);
        let (i, j) = (u.floor() as isize, v.floor() as isize);
        let (wu, wv) = (catmull_rom(u - i as f64), catmull_rom(v - j as f64));
        let mut out = 0.0;
        for (a, wa) in wu.iter().enumerate() {
            for (b, wb) in wv.iter().enumerate() {
                out += wa * wb * self.node(i - 1 + a as isize, j - 1 + b as isize);
            }
        }
        out
    }

    pub fn extent(&self) -> (f64, f64) {
        (self.r_max, self.s_max)
    }
}

fn catmull_rom(x: f64) -> [f64; 4] {
    let (x2, x3) = (x * x, x * x * x);
    [0.5 * (-x3 + 2.0 * x2 - x), 0.5 * (3.0 * x3 - 5.0 * x2 + 2.0), 0.5 * (-3.0 * x3 + 4.0 * x2 + x), 0.5 * (x3 - x2)]
}

fn require_h1(s: &HTypeStructure) -> Result<()> {
    if s.m() + s.k() > 3 {
        return Err(Error::UnsupportedDimension(s.m() + s.k()));
    }
    Ok(())
}

/// `∫_G A((g′)^{-1}∘g) B(g′) dg′` on `H¹` for tabulated radial kernels.
pub fn group_convolution(
    s: &HTypeStructure,
    g: &GroupPoint,
    left: &KernelTable,
    right: &KernelTable,
    spec: &QuadratureSpec,
) -> Result<f64> {
    require_h1(s)?;
    if g.z.len() != 2 || g.sigma.len() != 1 {
        return Err(invalid("point does not conform to the structure"));
    }
    let (ra, sa) = left.extent();
    let (rb, sb) = right.extent();
    let zw = rb.min(ra + g.z_norm());
    let sw = sb.min(sa + g.sigma_norm() + 0.5 * g.z_norm() * zw);
    let axis = |w: f64, c: f64| {
        let mut b = vec![-w, w];
        for p in [0.0, c] {
            if p.abs() < w {
                b.push(p);
            }
        }
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    };
    let breaks = vec![axis(zw, g.z[0]), axis(zw, g.z[1]), axis(sw, g.sigma[0])];
    let integrand = |x: &[f64]| -> Result<f64> {
        let b = right.eval((x[0] * x[0] + x[1] * x[1]).sqrt(), x[2]);
        if b == 0.0 {
            return Ok(0.0);
        }
        let gp = GroupPoint::new(vec![x[0], x[1]], vec![x[2]]);
        let h = s.mul(&gp.inv(), g)?;
        Ok(left.eval(h.z_norm(), h.sigma[0]) * b)
    };
    Ok(quad::try_integrate_over_box(integrand, &breaks, spec)?.value)
}

fn table_of<F>(f: F) -> Result<KernelTable>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    KernelTable::build(f, TABLE_NODES)
}

fn point(r: f64, sigma: f64) -> GroupPoint {
    GroupPoint::new(vec![r, 0.0], vec![sigma])
}

/// `∫_G q_(−o)((g′)^{-1}∘g, t, 0) q_(o)(g′, τ, y) dg′` on `H¹` by cubature
/// over tabulated kernels. `o = +s` is the published composition.
pub fn conv_direct(
    s: &HTypeStructure,
    o: FracOrder,
    g: &GroupPoint,
    y: f64,
    t: f64,
    tau: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    require_h1(s)?;
    if !(y >= 0.0 && y.is_finite()) {
        return Err(invalid("y must be non-negative"));
    }
    let inner = nested(spec);
    let left = table_of(|r, sg| ext_kernel_q(s, o.flipped(), &point(r, sg), t, 0.0, &inner))?;
    let right = table_of(|r, sg| ext_kernel_q(s, o, &point(r, sg), tau, y, &inner))?;
    group_convolution(s, g, &left, &right, spec)
}

/// `∫_G p(g, g′, t) p(g′, e, τ) dg′` on `H¹`, to compare with `p(g, e, t+τ)`.
pub fn chapman_lhs(s: &HTypeStructure, g: &GroupPoint, t: f64, tau: f64, spec: &QuadratureSpec) -> Result<f64> {
    require_h1(s)?;
    let inner = nested(spec);
    let left = table_of(|r, sg| ghc_heat_kernel(s, &point(r, sg), t, &inner))?;
    let right = table_of(|r, sg| ghc_heat_kernel(s, &point(r, sg), tau, &inner))?;
    group_convolution(s, g, &left, &right, spec)
}

fn sphere_area(n: usize) -> f64 {
    2.0 * PI.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0)
}

/// `∫_G f(|z|, |σ|) dg` for a radial function on an H-type group, by nested
/// semi-infinite quadrature in the two radii. The kernel at time `t` spreads
/// over `|z| ~ √t` and `|σ| ~ t`.
pub fn radial_mass<F>(s: &HTypeStructure, mut f: F, t: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    let (m, k) = (s.m(), s.k());
    let mut sigma_integral = |r: f64, inner: &QuadratureSpec| {
        quad::try_integrate_semiinfinite(|sg| Ok(sg.powi(k as i32 - 1) * f(r, sg)?), k as f64, t, inner)
            .map(|q| q.value)
    };
    // the σ-integral is largest on the axis r = 0; away from it, targets are
    // absolute against that size so kernel rounding noise in the far field converges
    let axis = sigma_integral(0.0, &nested(spec))?;
    let inner = nested(spec).with_abs_tol((1e-2 * spec.rel_tol * axis.abs()).max(f64::MIN_POSITIVE));
    let mut over_sigma = |r: f64| -> Result<f64> { Ok(r.powi(m as i32 - 1) * sigma_integral(r, &inner)?) };
    let total = quad::try_integrate_semiinfinite(&mut over_sigma, m as f64, t.sqrt(), spec)?.value;
    Ok(sphere_area(m) * sphere_area(k) * total)
}

/// `∫_G p(g, e, t) dg`, which is 1.
pub fn heat_mass(s: &HTypeStructure, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    let inner = nested(spec);
    radial_mass(s, |r, sg| ghc_heat_kernel(s, &point_in(s, r, sg), t, &inner), t, spec)
}

/// `∫_G K_(o)(g, t) dg` for the thin-space kernel, which is 1.
pub fn thin_kernel_mass(s: &HTypeStructure, o: FracOrder, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    let inner = nested(spec);
    radial_mass(s, |r, sg| crate::kernels::thin_kernel_k(s, o, &point_in(s, r, sg), t, &inner), t, spec)
}

fn point_in(s: &HTypeStructure, r: f64, sigma: f64) -> GroupPoint {
    let mut z = vec![0.0; s.m()];
    z[0] = r;
    let mut sg = vec![0.0; s.k()];
    sg[0] = sigma;
    GroupPoint::new(z, sg)
}
