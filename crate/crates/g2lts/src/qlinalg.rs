//! Quaternionic inner products, orthonormalization, rank, 2x2 Hermitian
//! eigenproblems and detection of the position type of a real subspace of `H^m`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, Matrix3, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{shape, G2Error, Result};
use crate::quat::{QMatrix, QVector, Quaternion};
use crate::real;

/// Default membership and rank tolerance.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Default tolerance for eigenvalue comparisons.
pub const EIGEN_TOL: f64 = 1e-10;

/// Quaternionic inner product `sum conj(v_k) w_k`.
pub fn qdot(v: &QVector, w: &QVector) -> Result<Quaternion> {
    if v.len() != w.len() {
        return Err(shape(format!("qdot of vectors of length {} and {}", v.len(), w.len())));
    }
    Ok(v.dot(w))
}

/// Pivoted modified Gram-Schmidt over H. Columns whose residual falls to
/// `tol` times the largest input norm or below are dropped.
pub fn gram_schmidt_h(cols: &[QVector], tol: f64) -> Vec<QVector> {
    let scale = cols.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Vec::new();
    }
    let mut work: Vec<QVector> = cols.to_vec();
    let mut out = Vec::new();
    while !work.is_empty() {
        let (idx, best) = work
            .iter()
            .enumerate()
            .map(|(i, c)| (i, c.norm()))
            .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= tol * scale {
            break;
        }
        let u = work.swap_remove(idx).scale(1.0 / best);
        for c in work.iter_mut() {
            let coeff = u.dot(c);
            *c = c.sub(&u.right_mul(coeff));
        }
        out.push(u);
    }
    out
}

/// Extend an orthonormal family in `H^m` to an orthonormal basis, keeping
/// the given vectors first; coordinate vectors fill the rest.
pub fn extend_to_onb(prefix: &[QVector], m: usize) -> Vec<QVector> {
    let mut out: Vec<QVector> = prefix.to_vec();
    let mut pool: Vec<QVector> = (0..m).map(|k| QVector::unit(m, k)).collect();
    while out.len() < m && !pool.is_empty() {
        for c in pool.iter_mut() {
            for _ in 0..2 {
                for u in &out {
                    let coeff = u.dot(c);
                    *c = c.sub(&u.right_mul(coeff));
                }
            }
        }
        let (idx, best) = pool
            .iter()
            .enumerate()
            .map(|(i, c)| (i, c.norm()))
            .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= 1e-8 {
            break;
        }
        out.push(pool.swap_remove(idx).scale(1.0 / best));
    }
    out
}

/// Quaternionic column rank.
pub fn rank_h(m: &QMatrix, tol: f64) -> usize {
    let cols: Vec<QVector> = (0..m.cols()).map(|j| m.col(j)).collect();
    gram_schmidt_h(&cols, tol).len()
}

/// Eigenvalues of the quaternionic Hermitian matrix `[[a, c], [conj c, b]]`, descending.
pub fn hermitian2_eigs(a: f64, b: f64, c: Quaternion) -> (f64, f64) {
    let disc = ((a - b) * (a - b) + 4.0 * c.norm_sq()).sqrt();
    (0.5 * (a + b + disc), 0.5 * (a + b - disc))
}

/// A unit eigenvector for eigenvalue `lambda` of `[[a, c], [conj c, b]]`,
/// or `None` when the matrix is a multiple of the identity.
pub fn hermitian2_eigvec(a: f64, b: f64, c: Quaternion, lambda: f64) -> Option<QVector> {
    let v1 = QVector(vec![c, Quaternion::real(lambda - a)]);
    let v2 = QVector(vec![Quaternion::real(lambda - b), c.conj()]);
    let (n1, n2) = (v1.norm(), v2.norm());
    let scale = a.abs().max(b.abs()).max(c.norm()).max(1e-300);
    if n1.max(n2) <= 1e-12 * scale {
        return None;
    }
    Some(if n1 >= n2 { v1.scale(1.0 / n1) } else { v2.scale(1.0 / n2) })
}

/// The position types of real subspaces of a symplectic space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HpType {
    Real(usize),
    Complex(usize),
    Quaternionic(usize),
    Sphere3,
}

impl HpType {
    /// Real dimension per quaternionic dimension.
    pub fn width(self) -> usize {
        match self {
            HpType::Real(_) => 1,
            HpType::Complex(_) => 2,
            HpType::Sphere3 => 3,
            HpType::Quaternionic(_) => 4,
        }
    }

    pub fn dim(self) -> usize {
        match self {
            HpType::Real(l) | HpType::Complex(l) | HpType::Quaternionic(l) => l,
            HpType::Sphere3 => 1,
        }
    }

    pub fn real_dim(self) -> usize {
        self.width() * self.dim()
    }

    /// True for the types available over the complex numbers.
    pub fn is_complex_type(self) -> bool {
        matches!(self, HpType::Real(_) | HpType::Complex(_))
    }

    /// Real scalars spanning the type's coefficient space: `{1}`, `{1,i}`, `{i,j,k}`, `{1,i,j,k}`.
    pub fn scalars(self) -> &'static [Quaternion] {
        const R: [Quaternion; 1] = [Quaternion::ONE];
        const C: [Quaternion; 2] = [Quaternion::ONE, Quaternion::I];
        const S: [Quaternion; 3] = [Quaternion::I, Quaternion::J, Quaternion::K];
        match self {
            HpType::Real(_) => &R,
            HpType::Complex(_) => &C,
            HpType::Sphere3 => &S,
            HpType::Quaternionic(_) => &Quaternion::BASIS,
        }
    }

    /// Build a type from its width and dimension.
    pub fn from_width(width: usize, dim: usize) -> Option<HpType> {
        match (width, dim) {
            (_, 0) => None,
            (1, l) => Some(HpType::Real(l)),
            (2, l) => Some(HpType::Complex(l)),
            (3, 1) => Some(HpType::Sphere3),
            (4, l) => Some(HpType::Quaternionic(l)),
            _ => None,
        }
    }
}

impl fmt::Display for HpType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HpType::Real(l) => write!(f, "R{l}"),
            HpType::Complex(l) => write!(f, "C{l}"),
            HpType::Quaternionic(l) => write!(f, "H{l}"),
            HpType::Sphere3 => write!(f, "S3"),
        }
    }
}

impl FromStr for HpType {
    type Err = G2Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "S3" {
            return Ok(HpType::Sphere3);
        }
        let bad = || G2Error::Parse(format!("bad type name '{s}'"));
        let (head, tail) = s.split_at(s.char_indices().nth(1).map_or(s.len(), |x| x.0));
        let l: usize = tail.parse().map_err(|_| bad())?;
        if l == 0 {
            return Err(bad());
        }
        match head {
            "R" => Ok(HpType::Real(l)),
            "C" => Ok(HpType::Complex(l)),
            "H" => Ok(HpType::Quaternionic(l)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for HpType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for HpType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Result of [`hp_type_of`]: the type and, for totally complex subspaces,
/// the distinguished imaginary unit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HpDetection {
    pub kind: HpType,
    pub unit: Option<Quaternion>,
}

/// Alignment matrix `G_ab = sum_m |P R_a s_m . P R_b s_m|` of a real
/// orthonormal family `basis` (rows are real coordinate vectors) under the
/// real linear maps `ops[a]`.
pub(crate) fn alignment_matrix(basis: &[Vec<f64>], ops: &[DMatrix<f64>; 3]) -> Matrix3<f64> {
    let d = basis.len();
    let coeff: Vec<DMatrix<f64>> = ops
        .iter()
        .map(|op| {
            let mut c = DMatrix::zeros(d, d);
            for (m, s) in basis.iter().enumerate() {
                let img = op * nalgebra::DVector::from_column_slice(s);
                for (k, t) in basis.iter().enumerate() {
                    c[(k, m)] = real::dot(t, img.as_slice());
                }
            }
            c
        })
        .collect();
    let mut g = Matrix3::zeros();
    for a in 0..3 {
        for b in 0..3 {
            g[(a, b)] = coeff[a].dot(&coeff[b]);
        }
    }
    g
}

/// Classify the alignment matrix of a `d`-dimensional subspace.
pub(crate) enum Alignment {
    Invariant,
    Orthogonal,
    Single([f64; 3]),
    Other,
}

pub(crate) fn read_alignment(g: &Matrix3<f64>, d: usize, tol: f64) -> Alignment {
    let df = d as f64;
    let t = tol * df.max(1.0);
    if (g - Matrix3::identity() * df).abs().max() <= t {
        return Alignment::Invariant;
    }
    if g.abs().max() <= t {
        return Alignment::Orthogonal;
    }
    let eig = SymmetricEigen::new(*g);
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let top = eig.eigenvalues[idx[0]];
    if (top - df).abs() <= t && eig.eigenvalues[idx[1]].abs() <= t && eig.eigenvalues[idx[2]].abs() <= t {
        let a = eig.eigenvectors.column(idx[0]);
        let mut v = [a[0], a[1], a[2]];
        // fix the sign so that the first non-negligible component is positive
        if let Some(&first) = v.iter().find(|x| x.abs() > 1e-6) {
            if first < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
        }
        return Alignment::Single(v);
    }
    Alignment::Other
}

/// Detect the position type of the real span of `vectors` in `H^m`.
pub fn hp_type_of(vectors: &[QVector], tol: f64) -> Result<Option<HpDetection>> {
    let m = vectors.first().map_or(0, |v| v.len());
    if vectors.iter().any(|v| v.len() != m) {
        return Err(shape("vectors of unequal length"));
    }
    let reals: Vec<Vec<f64>> = vectors.iter().map(|v| v.to_real()).collect();
    let basis = real::orthonormalize(&reals, 1e-10);
    if basis.len() < vectors.len() || basis.is_empty() {
        return Err(G2Error::Degenerate("vectors are not linearly independent over R".into()));
    }
    let d = basis.len();
    let ops = [Quaternion::I, Quaternion::J, Quaternion::K].map(|q| right_mul_operator(m, q));
    let g = alignment_matrix(&basis, &ops);
    let kind = match read_alignment(&g, d, tol) {
        Alignment::Invariant if d.is_multiple_of(4) => Some(HpDetection { kind: HpType::Quaternionic(d / 4), unit: None }),
        Alignment::Orthogonal => Some(HpDetection { kind: HpType::Real(d), unit: None }),
        Alignment::Single(a) if d.is_multiple_of(2) => Some(HpDetection {
            kind: HpType::Complex(d / 2),
            unit: Some(Quaternion::new(0.0, a[0], a[1], a[2])),
        }),
        _ => {
            let qm = QMatrix::from_cols(vectors)?;
            if d == 3 && rank_h(&qm, tol) == 1 {
                Some(HpDetection { kind: HpType::Sphere3, unit: None })
            } else {
                None
            }
        }
    };
    Ok(kind)
}

/// Real matrix of `x -> x q` on `H^m` in the coordinates of [`QVector::to_real`].
pub(crate) fn right_mul_operator(m: usize, q: Quaternion) -> DMatrix<f64> {
    let r = q.right_matrix();
    let mut op = DMatrix::zeros(4 * m, 4 * m);
    for k in 0..m {
        op.view_mut((4 * k, 4 * k), (4, 4)).copy_from(&r);
    }
    op
}
