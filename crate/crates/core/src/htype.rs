//! Groups of Heisenberg type in logarithmic coordinates.
//!
//! A structure is the horizontal dimension `m`, the vertical dimension `k`
//! and the Kaplan matrices `J(ε_1), …, J(ε_k)`. Points are plain coordinate
//! pairs `(z, σ)`; they do not carry their structure, so every operation
//! checks conformance on entry.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Entrywise tolerance for the algebraic conditions.
pub const ALGEBRA_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Heisenberg,
    Quaternionic,
}

impl std::str::FromStr for Family {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "heisenberg" => Ok(Family::Heisenberg),
            "quaternionic" => Ok(Family::Quaternionic),
            other => Err(invalid(format!("unknown family '{other}'"))),
        }
    }
}

/// Square matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(invalid("matrix rows must all have the matrix order as length"));
        }
        Ok(Matrix { n, data: rows.concat() })
    }

    /// Builds an `n×n` matrix from a row-major slice.
    pub fn from_row_major(n: usize, data: &[f64]) -> Result<Self> {
        if data.len() != n * n {
            return Err(invalid(format!("expected {} entries, got {}", n * n, data.len())));
        }
        Ok(Matrix { n, data: data.to_vec() })
    }

    fn zeros(n: usize) -> Self {
        Matrix { n, data: vec![0.0; n * n] }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let v = (0..n).map(|l| self.get(i, l) * other.get(l, j)).sum();
                out.set(i, j, v);
            }
        }
        out
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }
}

/// The H-type algebra condition that failed, with the offending indices.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    OddHorizontalDimension {
        m: usize,
    },
    /// `J(ε_ℓ)` is not skew-symmetric at entry `(row, col)`.
    NotSkewSymmetric {
        l: usize,
        row: usize,
        col: usize,
    },
    /// `J(ε_ℓ)J(ε_j) + J(ε_j)J(ε_ℓ) ≠ −2δ_{ℓj} I` at entry `(row, col)`.
    Anticommutation {
        l: usize,
        j: usize,
        row: usize,
        col: usize,
        deviation: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OddHorizontalDimension { m } => {
                write!(f, "horizontal dimension m={m} is odd")
            }
            Violation::NotSkewSymmetric { l, row, col } => {
                write!(f, "J[{l}] is not skew-symmetric at ({row},{col})")
            }
            Violation::Anticommutation { l, j, row, col, deviation } => {
                write!(f, "anticommutation J[{l}]J[{j}] + J[{j}]J[{l}] = -2δI fails at ({row},{col}) by {deviation:e}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HTypeStructure {
    m: usize,
    k: usize,
    j: Vec<Matrix>,
}

impl HTypeStructure {
    /// Wraps explicit Kaplan matrices. Only the shapes are checked here; use
    /// [`HTypeStructure::validate`] for the algebra.
    pub fn from_matrices(j: Vec<Matrix>) -> Result<Self> {
        let k = j.len();
        if k == 0 {
            return Err(invalid("at least one J-matrix is required"));
        }
        let m = j[0].order();
        if m == 0 || j.iter().any(|a| a.order() != m) {
            return Err(invalid("all J-matrices must be m×m with the same m ≥ 1"));
        }
        Ok(HTypeStructure { m, k, j })
    }

    pub fn build_standard(family: Family, n: usize) -> Result<Self> {
        if n < 1 {
            return Err(invalid("family index n must be at least 1"));
        }
        let structure = match family {
            Family::Heisenberg => {
                let m = 2 * n;
                let mut j1 = Matrix::zeros(m);
                for b in 0..n {
                    j1.set(2 * b, 2 * b + 1, 1.0);
                    j1.set(2 * b + 1, 2 * b, -1.0);
                }
                HTypeStructure { m, k: 1, j: vec![j1] }
            }
            Family::Quaternionic => {
                // left multiplication by i, j, k on H = span(1, i, j, k)
                let units: [[[f64; 4]; 4]; 3] = [
                    [[0., -1., 0., 0.], [1., 0., 0., 0.], [0., 0., 0., -1.], [0., 0., 1., 0.]],
                    [[0., 0., -1., 0.], [0., 0., 0., 1.], [1., 0., 0., 0.], [0., -1., 0., 0.]],
                    [[0., 0., 0., -1.], [0., 0., -1., 0.], [0., 1., 0., 0.], [1., 0., 0., 0.]],
                ];
                let m = 4 * n;
                let j = units
                    .iter()
                    .map(|u| {
                        let mut a = Matrix::zeros(m);
                        for b in 0..n {
                            for (r, row) in u.iter().enumerate() {
                                for (c, &v) in row.iter().enumerate() {
                                    a.set(4 * b + r, 4 * b + c, v);
                                }
                            }
                        }
                        a
                    })
                    .collect();
                HTypeStructure { m, k: 3, j }
            }
        };
        Ok(structure)
    }

    /// The standard family with horizontal dimension `m` and vertical
    /// dimension `k` (k = 1 Heisenberg, k = 3 quaternionic).
    pub fn standard_for(m: usize, k: usize) -> Result<Self> {
        match k {
            1 if m >= 2 && m.is_multiple_of(2) => Self::build_standard(Family::Heisenberg, m / 2),
            3 if m >= 4 && m.is_multiple_of(4) => Self::build_standard(Family::Quaternionic, m / 4),
            _ => Err(invalid(format!(
                "no standard H-type family with m={m}, k={k} (supported: k=1 with m even, k=3 with m divisible by 4)"
            ))),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn j_matrices(&self) -> &[Matrix] {
        &self.j
    }

    /// Homogeneous dimension `Q = m + 2k`.
    pub fn homogeneous_dimension(&self) -> usize {
        self.m + 2 * self.k
    }

    /// Checks skew-symmetry, the anticommutation relations and evenness of m.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        if !self.m.is_multiple_of(2) {
            return Err(Violation::OddHorizontalDimension { m: self.m });
        }
        for (l, a) in self.j.iter().enumerate() {
            for r in 0..self.m {
                for c in 0..self.m {
                    if (a.get(r, c) + a.get(c, r)).abs() > ALGEBRA_TOL {
                        return Err(Violation::NotSkewSymmetric { l, row: r, col: c });
                    }
                }
            }
        }
        for l in 0..self.k {
            for j in l..self.k {
                let ab = self.j[l].mul(&self.j[j]);
                let ba = self.j[j].mul(&self.j[l]);
                for r in 0..self.m {
                    for c in 0..self.m {
                        let target = if l == j && r == c { -2.0 } else { 0.0 };
                        let deviation = ab.get(r, c) + ba.get(r, c) - target;
                        if deviation.abs() > ALGEBRA_TOL {
                            return Err(Violation::Anticommutation { l, j, row: r, col: c, deviation });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Kaplan map `J(σ)z = Σ_ℓ σ_ℓ J(ε_ℓ) z`.
    pub fn jmap(&self, sigma: &[f64], z: &[f64]) -> Result<Vec<f64>> {
        if sigma.len() != self.k || z.len() != self.m {
            return Err(invalid(format!(
                "jmap expects σ of length {} and z of length {}, got {} and {}",
                self.k,
                self.m,
                sigma.len(),
                z.len()
            )));
        }
        let mut out = vec![0.0; self.m];
        for (a, &sl) in self.j.iter().zip(sigma) {
            if sl == 0.0 {
                continue;
            }
            for (o, v) in out.iter_mut().zip(a.apply(z)) {
                *o += sl * v;
            }
        }
        Ok(out)
    }

    fn check_point(&self, g: &GroupPoint) -> Result<()> {
        if g.z.len() != self.m || g.sigma.len() != self.k {
            return Err(invalid(format!(
                "point has dimensions ({}, {}) but the structure is ({}, {})",
                g.z.len(),
                g.sigma.len(),
                self.m,
                self.k
            )));
        }
        Ok(())
    }

    /// `(z,σ)∘(ζ,τ) = (z+ζ, σ+τ+½(⟨J(ε_ℓ)z,ζ⟩)_ℓ)`.
    pub fn mul(&self, g: &GroupPoint, h: &GroupPoint) -> Result<GroupPoint> {
        self.check_point(g)?;
        self.check_point(h)?;
        let z = g.z.iter().zip(&h.z).map(|(a, b)| a + b).collect();
        let sigma = self
            .j
            .iter()
            .zip(g.sigma.iter().zip(&h.sigma))
            .map(|(a, (s, t))| s + t + 0.5 * dot(&a.apply(&g.z), &h.z))
            .collect();
        Ok(GroupPoint { z, sigma })
    }

    pub fn identity(&self) -> GroupPoint {
        GroupPoint { z: vec![0.0; self.m], sigma: vec![0.0; self.k] }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// A group element `(z, σ)` in logarithmic coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupPoint {
    pub z: Vec<f64>,
    pub sigma: Vec<f64>,
}

impl GroupPoint {
    pub fn new(z: Vec<f64>, sigma: Vec<f64>) -> Self {
        GroupPoint { z, sigma }
    }

    /// `(z,σ)^{-1} = (−z, −σ)`.
    pub fn inv(&self) -> GroupPoint {
        GroupPoint { z: self.z.iter().map(|v| -v).collect(), sigma: self.sigma.iter().map(|v| -v).collect() }
    }

    /// Anisotropic dilation `δ_λ(z,σ) = (λz, λ²σ)`.
    pub fn dilate(&self, lambda: f64) -> GroupPoint {
        GroupPoint {
            z: self.z.iter().map(|v| lambda * v).collect(),
            sigma: self.sigma.iter().map(|v| lambda * lambda * v).collect(),
        }
    }

    pub fn z_norm(&self) -> f64 {
        norm(&self.z)
    }

    pub fn sigma_norm(&self) -> f64 {
        norm(&self.sigma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h1() -> HTypeStructure {
        HTypeStructure::build_standard(Family::Heisenberg, 1).unwrap()
    }

    #[test]
    fn heisenberg_one_uses_the_symplectic_convention() {
        let s = h1();
        assert_eq!((s.m(), s.k()), (2, 1));
        let j = &s.j_matrices()[0];
        assert_eq!([j.get(0, 0), j.get(0, 1), j.get(1, 0), j.get(1, 1)], [0.0, 1.0, -1.0, 0.0]);
        assert_eq!(s.homogeneous_dimension(), 4);
    }

    #[test]
    fn standard_shapes() {
        let h2 = HTypeStructure::build_standard(Family::Heisenberg, 2).unwrap();
        assert_eq!((h2.m(), h2.k()), (4, 1));
        assert_eq!(h2.homogeneous_dimension(), 6);
        let q = HTypeStructure::build_standard(Family::Quaternionic, 1).unwrap();
        assert_eq!((q.m(), q.k()), (4, 3));
        assert_eq!(q.homogeneous_dimension(), 10);
        assert!(HTypeStructure::build_standard(Family::Heisenberg, 0).is_err());
    }

    #[test]
    fn standard_families_validate() {
        for n in 1..=3 {
            for fam in [Family::Heisenberg, Family::Quaternionic] {
                let s = HTypeStructure::build_standard(fam, n).unwrap();
                assert_eq!(s.validate(), Ok(()), "{fam:?} n={n}");
            }
        }
    }

    #[test]
    fn validation_reports_the_failed_condition() {
        let not_skew = Matrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let s = HTypeStructure::from_matrices(vec![not_skew]).unwrap();
        assert!(matches!(s.validate(), Err(Violation::NotSkewSymmetric { l: 0, .. })));

        let scaled = Matrix::from_rows(&[vec![0.0, 2.0], vec![-2.0, 0.0]]).unwrap();
        let s = HTypeStructure::from_matrices(vec![scaled]).unwrap();
        match s.validate() {
            Err(Violation::Anticommutation { l: 0, j: 0, deviation, .. }) => {
                assert!((deviation + 6.0).abs() < 1e-12)
            }
            other => panic!("unexpected {other:?}"),
        }

        let odd = Matrix::from_rows(&[vec![0.0; 3], vec![0.0; 3], vec![0.0; 3]]).unwrap();
        let s = HTypeStructure::from_matrices(vec![odd]).unwrap();
        assert_eq!(s.validate(), Err(Violation::OddHorizontalDimension { m: 3 }));
    }

    #[test]
    fn shape_mismatch_is_invalid_argument() {
        let a = Matrix::from_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        let b = Matrix::from_rows(&[vec![0.0; 4], vec![0.0; 4], vec![0.0; 4], vec![0.0; 4]]).unwrap();
        assert!(HTypeStructure::from_matrices(vec![a, b]).is_err());
        assert!(Matrix::from_rows(&[vec![0.0, 1.0], vec![0.0]]).is_err());
    }

    #[test]
    fn jmap_examples() {
        let s = h1();
        assert_eq!(s.jmap(&[1.0], &[1.0, 0.0]).unwrap(), vec![0.0, -1.0]);
        assert_eq!(s.jmap(&[0.0], &[3.0, -2.0]).unwrap(), vec![0.0, 0.0]);
        let jz = s.jmap(&[1.0], &[1.0, 1.0]).unwrap();
        assert_eq!(dot(&jz, &[1.0, 1.0]), 0.0);
        assert!(s.jmap(&[1.0, 2.0], &[1.0, 0.0]).is_err());
    }

    #[test]
    fn group_law_examples() {
        let s = h1();
        let g = GroupPoint::new(vec![1.0, 0.0], vec![0.0]);
        let h = GroupPoint::new(vec![0.0, 1.0], vec![0.0]);
        let gh = s.mul(&g, &h).unwrap();
        assert_eq!(gh, GroupPoint::new(vec![1.0, 1.0], vec![-0.5]));
        let e = s.identity();
        assert_eq!(s.mul(&gh, &e).unwrap(), gh);
        assert_eq!(s.mul(&gh, &gh.inv()).unwrap(), e);
        assert!(s.mul(&g, &GroupPoint::new(vec![0.0], vec![0.0])).is_err());
    }

    #[test]
    fn inverse_examples() {
        let g = GroupPoint::new(vec![1.0, 2.0], vec![3.0]);
        assert_eq!(g.inv(), GroupPoint::new(vec![-1.0, -2.0], vec![-3.0]));
        assert_eq!(g.inv().inv(), g);
        let e = GroupPoint::new(vec![0.0, 0.0], vec![0.0]);
        assert_eq!(e.inv().z_norm(), 0.0);
    }
}
