//! Quaternion scalars, quaternionic column vectors and dense quaternionic matrices.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use nalgebra::{DMatrix, Matrix4};
use serde::{Deserialize, Serialize};

use crate::error::{domain, shape, Result};

/// A quaternion `w + x i + y j + z k`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<[f64; 4]> for Quaternion {
    fn from(a: [f64; 4]) -> Self {
        Quaternion::new(a[0], a[1], a[2], a[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        [q.w, q.x, q.y, q.z]
    }
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion { w: 0.0, x: 0.0, y: 0.0, z: 0.0 };
    pub const ONE: Quaternion = Quaternion { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };
    pub const I: Quaternion = Quaternion { w: 0.0, x: 1.0, y: 0.0, z: 0.0 };
    pub const J: Quaternion = Quaternion { w: 0.0, x: 0.0, y: 1.0, z: 0.0 };
    pub const K: Quaternion = Quaternion { w: 0.0, x: 0.0, y: 0.0, z: 1.0 };

    /// The canonical real basis `(1, i, j, k)`.
    pub const BASIS: [Quaternion; 4] = [Self::ONE, Self::I, Self::J, Self::K];

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Quaternion { w, x: 0.0, y: 0.0, z: 0.0 }
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn re(self) -> f64 {
        self.w
    }

    /// Imaginary part `(q - conj q)/2` as a quaternion.
    pub fn im(self) -> Self {
        Quaternion::new(0.0, self.x, self.y, self.z)
    }

    pub fn norm_sq(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn inverse(self) -> Result<Self> {
        let n2 = self.norm_sq();
        if n2 == 0.0 {
            return Err(domain("inverse of the zero quaternion"));
        }
        Ok(self.conj() * (1.0 / n2))
    }

    pub fn to_array(self) -> [f64; 4] {
        self.into()
    }

    /// Real 4x4 matrix of `p -> self * p` in the basis `(1,i,j,k)`.
    pub fn left_matrix(self) -> Matrix4<f64> {
        let (a, b, c, d) = (self.w, self.x, self.y, self.z);
        Matrix4::new(
            a, -b, -c, -d, //
            b, a, -d, c, //
            c, d, a, -b, //
            d, -c, b, a,
        )
    }

    /// Real 4x4 matrix of `p -> p * self`.
    pub fn right_matrix(self) -> Matrix4<f64> {
        let (a, b, c, d) = (self.w, self.x, self.y, self.z);
        Matrix4::new(
            a, -b, -c, -d, //
            b, a, d, -c, //
            c, -d, a, b, //
            d, c, -b, a,
        )
    }

    pub fn approx_eq(self, other: Quaternion, tol: f64) -> bool {
        (self - other).norm() <= tol
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i{:+}j{:+}k", self.w, self.x, self.y, self.z)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Quaternion) {
        *self = *self - o;
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        Quaternion::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

/// An element of `H^n`, scalars acting from the right.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QVector(pub Vec<Quaternion>);

impl QVector {
    pub fn zeros(n: usize) -> Self {
        QVector(vec![Quaternion::ZERO; n])
    }

    /// The standard basis vector with a one in slot `k` (zero based).
    pub fn unit(n: usize, k: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[k] = Quaternion::ONE;
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn right_mul(&self, c: Quaternion) -> QVector {
        QVector(self.0.iter().map(|&q| q * c).collect())
    }

    pub fn scale(&self, s: f64) -> QVector {
        QVector(self.0.iter().map(|&q| q * s).collect())
    }

    pub fn add(&self, o: &QVector) -> QVector {
        QVector(self.0.iter().zip(&o.0).map(|(&a, &b)| a + b).collect())
    }

    pub fn sub(&self, o: &QVector) -> QVector {
        QVector(self.0.iter().zip(&o.0).map(|(&a, &b)| a - b).collect())
    }

    /// Unchecked quaternionic inner product `sum conj(a_k) b_k`.
    pub fn dot(&self, o: &QVector) -> Quaternion {
        let mut s = Quaternion::ZERO;
        for (&a, &b) in self.0.iter().zip(&o.0) {
            s += a.conj() * b;
        }
        s
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|q| q.norm_sq()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Real coordinates, four per entry.
    pub fn to_real(&self) -> Vec<f64> {
        self.0.iter().flat_map(|q| q.to_array()).collect()
    }

    pub fn from_real(r: &[f64]) -> Self {
        QVector(r.chunks(4).map(|c| Quaternion::new(c[0], c[1], c[2], c[3])).collect())
    }
}

/// Dense quaternionic matrix in row-major order; it acts on columns from the
/// left, so it represents an H-right-linear map.
#[derive(Clone, Debug, PartialEq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Quaternion>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Quaternion::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = Quaternion::ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Quaternion>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(shape("ragged rows"));
        }
        Ok(QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_cols(cols: &[QVector]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, |x| x.len());
        if cols.iter().any(|x| x.len() != r) {
            return Err(shape("columns of unequal length"));
        }
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for i in 0..r {
                m[(i, j)] = col.0[i];
            }
        }
        Ok(m)
    }

    /// Outer product `a b*`.
    pub fn outer(a: &QVector, b: &QVector) -> Self {
        let mut m = Self::zeros(a.len(), b.len());
        for i in 0..a.len() {
            for j in 0..b.len() {
                m[(i, j)] = a.0[i] * b.0[j].conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn col(&self, j: usize) -> QVector {
        QVector((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn set_col(&mut self, j: usize, v: &QVector) {
        for i in 0..self.rows {
            self[(i, j)] = v.0[i];
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<Quaternion>> {
        self.data.chunks(self.cols.max(1)).map(|r| r.to_vec()).take(self.rows).collect()
    }

    pub fn adjoint(&self) -> QMatrix {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn try_mul(&self, o: &QMatrix) -> Result<QMatrix> {
        if self.cols != o.rows {
            return Err(shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(self.mul_unchecked(o))
    }

    fn mul_unchecked(&self, o: &QMatrix) -> QMatrix {
        let mut m = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Quaternion::ZERO {
                    continue;
                }
                for j in 0..o.cols {
                    let idx = i * o.cols + j;
                    m.data[idx] += a * o[(k, j)];
                }
            }
        }
        m
    }

    pub fn apply(&self, v: &QVector) -> Result<QVector> {
        if self.cols != v.len() {
            return Err(shape("matrix-vector length mismatch"));
        }
        Ok(QVector(
            (0..self.rows)
                .map(|i| {
                    let mut s = Quaternion::ZERO;
                    for k in 0..self.cols {
                        s += self[(i, k)] * v.0[k];
                    }
                    s
                })
                .collect(),
        ))
    }

    pub fn try_add(&self, o: &QMatrix) -> Result<QMatrix> {
        if self.shape() != o.shape() {
            return Err(shape("matrix sum of different shapes"));
        }
        Ok(self.zip_with(o, |a, b| a + b))
    }

    pub fn try_sub(&self, o: &QMatrix) -> Result<QMatrix> {
        if self.shape() != o.shape() {
            return Err(shape("matrix difference of different shapes"));
        }
        Ok(self.zip_with(o, |a, b| a - b))
    }

    fn zip_with(&self, o: &QMatrix, f: impl Fn(Quaternion, Quaternion) -> Quaternion) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(Quaternion) -> Quaternion) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f(a)).collect() }
    }

    pub fn scale(&self, s: f64) -> QMatrix {
        self.map(|a| a * s)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|q| q.norm_sq()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|q| q.norm()).fold(0.0, f64::max)
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.data
    }

    /// Real representation: block `(a,b)` is the left-multiplication matrix of entry `(a,b)`.
    pub fn to_real(&self) -> DMatrix<f64> {
        let mut r = DMatrix::zeros(4 * self.rows, 4 * self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let l = self[(i, j)].left_matrix();
                r.view_mut((4 * i, 4 * j), (4, 4)).copy_from(&l);
            }
        }
        r
    }

    /// Inverse of [`QMatrix::to_real`], reading the first column of each block.
    pub fn from_real(r: &DMatrix<f64>) -> Result<QMatrix> {
        if !r.nrows().is_multiple_of(4) || !r.ncols().is_multiple_of(4) {
            return Err(shape("real representation must have dimensions divisible by 4"));
        }
        let (rows, cols) = (r.nrows() / 4, r.ncols() / 4);
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = Quaternion::new(
                    r[(4 * i, 4 * j)],
                    r[(4 * i + 1, 4 * j)],
                    r[(4 * i + 2, 4 * j)],
                    r[(4 * i + 3, 4 * j)],
                );
            }
        }
        Ok(m)
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Quaternion;
    fn index(&self, (i, j): (usize, usize)) -> &Quaternion {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Quaternion {
        &mut self.data[i * self.cols + j]
    }
}

impl Serialize for QMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for QMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Quaternion>>::deserialize(d)?;
        QMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;
    /// Panics on incompatible shapes; use [`QMatrix::try_mul`] for checked products.
    fn mul(self, o: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, o.rows, "incompatible shapes in matrix product");
        self.mul_unchecked(o)
    }
}
