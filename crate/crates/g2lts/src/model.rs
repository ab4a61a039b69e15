//! Tangent space model of the quaternionic 2-Grassmannian at the base point
//! `V'`: tangent vectors are H-linear maps `V' -> V`, stored as `n x 2`
//! quaternionic matrices whose columns are the images of the basis of `V'`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::cartan::Frame;
use crate::error::{domain, shape, G2Error, Result};
use crate::qlinalg::{rank_h, DEFAULT_TOL};
use crate::quat::{QMatrix, QVector, Quaternion};

/// An element of `m = L(V', V)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector {
    cols: [QVector; 2],
}

impl TangentVector {
    pub fn zeros(n: usize) -> Self {
        TangentVector { cols: [QVector::zeros(n), QVector::zeros(n)] }
    }

    pub fn from_cols(c0: QVector, c1: QVector) -> Result<Self> {
        if c0.len() != c1.len() {
            return Err(shape("tangent vector columns differ in length"));
        }
        if c0.len() < 2 {
            return Err(shape("tangent vectors need n >= 2"));
        }
        Ok(TangentVector { cols: [c0, c1] })
    }

    pub fn from_matrix(m: &QMatrix) -> Result<Self> {
        if m.cols() != 2 {
            return Err(shape(format!("tangent vector must have 2 columns, got {}", m.cols())));
        }
        Self::from_cols(m.col(0), m.col(1))
    }

    /// The map sending basis vector `col` of `V'` to `f_row * q` and the other one to zero.
    pub fn elementary(n: usize, col: usize, row: usize, q: Quaternion) -> Self {
        let mut v = Self::zeros(n);
        v.cols[col].0[row] = q;
        v
    }

    pub fn n(&self) -> usize {
        self.cols[0].len()
    }

    pub fn col(&self, k: usize) -> &QVector {
        &self.cols[k]
    }

    pub fn entry(&self, row: usize, col: usize) -> Quaternion {
        self.cols[col].0[row]
    }

    pub fn matrix(&self) -> QMatrix {
        QMatrix::from_cols(&self.cols).expect("columns have equal length")
    }

    pub fn adjoint(&self) -> QMatrix {
        self.matrix().adjoint()
    }

    /// Image of a vector of `V'` (length 2).
    pub fn apply(&self, x: &QVector) -> QVector {
        self.cols[0].right_mul(x.0[0]).add(&self.cols[1].right_mul(x.0[1]))
    }

    pub fn add(&self, o: &TangentVector) -> TangentVector {
        TangentVector { cols: [self.cols[0].add(&o.cols[0]), self.cols[1].add(&o.cols[1])] }
    }

    pub fn sub(&self, o: &TangentVector) -> TangentVector {
        TangentVector { cols: [self.cols[0].sub(&o.cols[0]), self.cols[1].sub(&o.cols[1])] }
    }

    pub fn scale(&self, s: f64) -> TangentVector {
        TangentVector { cols: [self.cols[0].scale(s), self.cols[1].scale(s)] }
    }

    /// `a * self + o`.
    pub fn axpy(&self, a: f64, o: &TangentVector) -> TangentVector {
        self.scale(a).add(o)
    }

    /// Entrywise right multiplication `v . c`, i.e. `v o L'_c`.
    pub fn right_mul(&self, c: Quaternion) -> TangentVector {
        TangentVector { cols: [self.cols[0].right_mul(c), self.cols[1].right_mul(c)] }
    }

    /// Entrywise left multiplication `c . v` with respect to the standard real forms.
    pub fn left_mul(&self, c: Quaternion) -> TangentVector {
        let f = |col: &QVector| QVector(col.0.iter().map(|&q| c * q).collect());
        TangentVector { cols: [f(&self.cols[0]), f(&self.cols[1])] }
    }

    /// Composition `v o x` with an endomorphism `x` of `V'` (2x2).
    pub fn compose(&self, x: &QMatrix) -> TangentVector {
        let col = |j: usize| self.cols[0].right_mul(x[(0, j)]).add(&self.cols[1].right_mul(x[(1, j)]));
        TangentVector { cols: [col(0), col(1)] }
    }

    /// Left composition `y o v` with an endomorphism `y` of `V` (n x n).
    pub fn left_compose(&self, y: &QMatrix) -> TangentVector {
        TangentVector {
            cols: [
                y.apply(&self.cols[0]).expect("shape checked by caller"),
                y.apply(&self.cols[1]).expect("shape checked by caller"),
            ],
        }
    }

    pub fn norm(&self) -> f64 {
        inner(self, self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.cols.iter().flat_map(|c| c.0.iter()).map(|q| q.norm()).fold(0.0, f64::max)
    }

    /// Real coordinates: column 0 then column 1, four reals per entry.
    pub fn to_real(&self) -> Vec<f64> {
        let mut r = self.cols[0].to_real();
        r.extend(self.cols[1].to_real());
        r
    }

    pub fn from_real(n: usize, r: &[f64]) -> Self {
        TangentVector { cols: [QVector::from_real(&r[..4 * n]), QVector::from_real(&r[4 * n..8 * n])] }
    }

    /// Every entry lies in `R + R i`.
    pub fn is_complex_entry(&self, tol: f64) -> bool {
        self.cols.iter().flat_map(|c| c.0.iter()).all(|q| q.y.abs() <= tol && q.z.abs() <= tol)
    }
}

#[derive(Serialize, Deserialize)]
struct TangentVectorJson {
    n: usize,
    cols: [Vec<Quaternion>; 2],
}

impl Serialize for TangentVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TangentVectorJson { n: self.n(), cols: [self.cols[0].0.clone(), self.cols[1].0.clone()] }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TangentVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = TangentVectorJson::deserialize(d)?;
        let [c0, c1] = j.cols;
        if c0.len() != j.n || c1.len() != j.n {
            return Err(serde::de::Error::custom("column length does not match n"));
        }
        TangentVector::from_cols(QVector(c0), QVector(c1)).map_err(serde::de::Error::custom)
    }
}

/// Unchecked real inner product.
pub(crate) fn inner(u: &TangentVector, v: &TangentVector) -> f64 {
    u.cols[0].dot(&v.cols[0]).re() + u.cols[1].dot(&v.cols[1]).re()
}

/// `Re(<u(e1), v(e1)> + <u(e2), v(e2)>)`.
pub fn metric(u: &TangentVector, v: &TangentVector) -> Result<f64> {
    if u.n() != v.n() {
        return Err(shape(format!("metric of vectors with n = {} and n = {}", u.n(), v.n())));
    }
    Ok(inner(u, v))
}

/// Element of the isotropy group `Sp(V') x Sp(V)`.
#[derive(Clone, Debug, PartialEq)]
pub struct IsotropyElement {
    pub b1: QMatrix,
    pub b2: QMatrix,
}

fn unitary_defect(b: &QMatrix) -> f64 {
    let p = &b.adjoint() * b;
    p.try_sub(&QMatrix::identity(b.cols())).map(|d| d.max_abs()).unwrap_or(f64::INFINITY)
}

impl IsotropyElement {
    pub fn new(b1: QMatrix, b2: QMatrix) -> Result<Self> {
        if b1.shape() != (2, 2) {
            return Err(shape("B1 must be 2x2"));
        }
        if b2.rows() != b2.cols() {
            return Err(shape("B2 must be square"));
        }
        let (d1, d2) = (unitary_defect(&b1), unitary_defect(&b2));
        if d1 > 1e-10 || d2 > 1e-10 {
            return Err(G2Error::Validation(format!(
                "isotropy element not symplectic (defects {d1:.3e}, {d2:.3e})"
            )));
        }
        Ok(IsotropyElement { b1, b2 })
    }

    pub fn identity(n: usize) -> Self {
        IsotropyElement { b1: QMatrix::identity(2), b2: QMatrix::identity(n) }
    }

    pub fn n(&self) -> usize {
        self.b2.rows()
    }

    pub fn compose(&self, o: &IsotropyElement) -> IsotropyElement {
        IsotropyElement { b1: &self.b1 * &o.b1, b2: &self.b2 * &o.b2 }
    }

    pub fn inverse(&self) -> IsotropyElement {
        IsotropyElement { b1: self.b1.adjoint(), b2: self.b2.adjoint() }
    }

    /// `B2 o v o B1*`, without shape checks.
    pub(crate) fn act_unchecked(&self, v: &TangentVector) -> TangentVector {
        v.compose(&self.b1.adjoint()).left_compose(&self.b2)
    }
}

/// Isotropy action `B v = B2 o v o B1*`.
pub fn isotropy_act(g: &IsotropyElement, v: &TangentVector) -> Result<TangentVector> {
    if g.n() != v.n() {
        return Err(shape("isotropy element and tangent vector disagree on n"));
    }
    Ok(g.act_unchecked(v))
}

/// Element `(X1, X2)` of the isotropy algebra `sp(V') + sp(V)`.
#[derive(Clone, Debug, PartialEq)]
pub struct KElement {
    pub x1: QMatrix,
    pub x2: QMatrix,
}

fn skew_defect(x: &QMatrix) -> f64 {
    x.try_add(&x.adjoint()).map(|d| d.max_abs()).unwrap_or(f64::INFINITY)
}

impl KElement {
    pub fn new(x1: QMatrix, x2: QMatrix) -> Result<Self> {
        if x1.shape() != (2, 2) || x2.rows() != x2.cols() {
            return Err(shape("k element blocks must be 2x2 and square"));
        }
        let scale = 1.0 + x1.max_abs().max(x2.max_abs());
        if skew_defect(&x1) > 1e-10 * scale || skew_defect(&x2) > 1e-10 * scale {
            return Err(G2Error::Validation("k element blocks must be skew-adjoint".into()));
        }
        Ok(KElement { x1, x2 })
    }

    pub fn zero(n: usize) -> Self {
        KElement { x1: QMatrix::zeros(2, 2), x2: QMatrix::zeros(n, n) }
    }

    pub fn max_abs(&self) -> f64 {
        self.x1.max_abs().max(self.x2.max_abs())
    }
}

/// Gram block `a* b` (2x2) of two tangent vectors.
fn gram2(a: &TangentVector, b: &TangentVector) -> [[Quaternion; 2]; 2] {
    let mut g = [[Quaternion::ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            g[i][j] = a.cols[i].dot(&b.cols[j]);
        }
    }
    g
}

/// `v o g` for a 2x2 array `g`.
fn times2(v: &TangentVector, g: &[[Quaternion; 2]; 2]) -> TangentVector {
    let col = |j: usize| v.cols[0].right_mul(g[0][j]).add(&v.cols[1].right_mul(g[1][j]));
    TangentVector { cols: [col(0), col(1)] }
}

/// Lie bracket `[u, v] = (v*u - u*v, v u* - u v*)` of two tangent vectors.
pub fn bracket_mm(u: &TangentVector, v: &TangentVector) -> KElement {
    let x1 = (&v.adjoint() * &u.matrix()).try_sub(&(&u.adjoint() * &v.matrix())).expect("2x2");
    let x2 = (&v.matrix() * &u.adjoint()).try_sub(&(&u.matrix() * &v.adjoint())).expect("nxn");
    KElement { x1, x2 }
}

/// `[X, v] = X2 o v + v o X1*`.
pub fn bracket_km(x: &KElement, v: &TangentVector) -> Result<TangentVector> {
    if x.x2.rows() != v.n() {
        return Err(shape("k element and tangent vector disagree on n"));
    }
    Ok(v.left_compose(&x.x2).add(&v.compose(&x.x1.adjoint())))
}

/// Curvature tensor `R(u,v)w = (u v* - v u*) w + w (v* u - u* v)`.
///
/// Panics if the three vectors have different `n`.
pub fn curvature(u: &TangentVector, v: &TangentVector, w: &TangentVector) -> TangentVector {
    assert!(u.n() == v.n() && v.n() == w.n(), "curvature of vectors with different n");
    let vw = gram2(v, w);
    let uw = gram2(u, w);
    let vu = gram2(v, u);
    let mut k = [[Quaternion::ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            // v*u - u*v, where (u*v)_ij = conj((v*u)_ji)
            k[i][j] = vu[i][j] - vu[j][i].conj();
        }
    }
    times2(u, &vw).sub(&times2(v, &uw)).add(&times2(w, &k))
}

/// Whether `v` lies in `L+` (true) or `L-` (false) of the frame; `None` if neither.
fn block_side(v: &TangentVector, frame: &Frame) -> Option<bool> {
    let scale = v.norm().max(1e-300);
    let plus = v.apply(&frame.e_minus).norm() <= 1e-10 * scale;
    let minus = v.apply(&frame.e_plus).norm() <= 1e-10 * scale;
    match (plus, minus) {
        (true, _) => Some(true),
        (false, true) => Some(false),
        _ => None,
    }
}

/// Assemble the map sending `e+ -> a`, `e- -> b`.
fn from_frame_images(frame: &Frame, a: &QVector, b: &QVector) -> TangentVector {
    let m = QMatrix::outer(a, &frame.e_plus).try_add(&QMatrix::outer(b, &frame.e_minus)).expect("shapes");
    TangentVector::from_matrix(&m).expect("n x 2")
}

/// Curvature evaluated through the explicit block formulas for `u, v` in `L+` or `L-`.
pub fn curvature_blocks(
    u: &TangentVector,
    v: &TangentVector,
    w: &TangentVector,
    frame: &Frame,
) -> Result<TangentVector> {
    if u.n() != v.n() || v.n() != w.n() || frame.n() != u.n() {
        return Err(shape("curvature_blocks arguments disagree on n"));
    }
    let su = block_side(u, frame).ok_or_else(|| domain("first argument is not in L+ or L-"))?;
    let sv = block_side(v, frame).ok_or_else(|| domain("second argument is not in L+ or L-"))?;
    let (ep, em) = (&frame.e_plus, &frame.e_minus);
    let wp = w.apply(ep);
    let wm = w.apply(em);
    let out = match (su, sv) {
        (true, true) | (false, false) => {
            let e = if su { ep } else { em };
            let ue = u.apply(e);
            let ve = v.apply(e);
            let twist = ve.dot(&ue).im() * 2.0;
            let gen = |x: &QVector| ue.right_mul(ve.dot(x)).sub(&ve.right_mul(ue.dot(x)));
            if su {
                from_frame_images(frame, &gen(&wp).add(&wp.right_mul(twist)), &gen(&wm))
            } else {
                from_frame_images(frame, &gen(&wp), &gen(&wm).add(&wm.right_mul(twist)))
            }
        }
        (true, false) => mixed_block(frame, &u.apply(ep), &v.apply(em), &wp, &wm),
        (false, true) => mixed_block(frame, &v.apply(ep), &u.apply(em), &wp, &wm).scale(-1.0),
    };
    Ok(out)
}

/// `R(u+, v-) w` from `u+(e+)`, `v-(e-)`, `w(e+)`, `w(e-)`.
fn mixed_block(frame: &Frame, up: &QVector, vm: &QVector, wp: &QVector, wm: &QVector) -> TangentVector {
    let a = wm.right_mul(vm.dot(up));
    let b = wp.right_mul(up.dot(vm)).scale(-1.0);
    from_frame_images(frame, &a, &b)
}

/// Sectional curvature `<R(u,v)v, u>` of an orthonormal pair.
pub fn sectional_curvature(u: &TangentVector, v: &TangentVector) -> Result<f64> {
    if u.n() != v.n() {
        return Err(shape("sectional curvature of vectors with different n"));
    }
    let (uu, vv, uv) = (inner(u, u), inner(v, v), inner(u, v));
    if (uu - 1.0).abs() > 1e-8 || (vv - 1.0).abs() > 1e-8 || uv.abs() > 1e-8 {
        return Err(G2Error::Validation("sectional curvature needs an orthonormal pair".into()));
    }
    Ok(inner(&curvature(u, v, v), u))
}

/// A point of the Grassmannian: the H-span of two orthonormal vectors in `V' + V`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PlaneJson", into = "PlaneJson")]
pub struct Plane {
    basis: [QVector; 2],
}

#[derive(Serialize, Deserialize)]
struct PlaneJson {
    basis: [QVector; 2],
}

impl TryFrom<PlaneJson> for Plane {
    type Error = G2Error;
    fn try_from(p: PlaneJson) -> Result<Self> {
        let [a, b] = p.basis;
        Plane::new(a, b)
    }
}

impl From<Plane> for PlaneJson {
    fn from(p: Plane) -> Self {
        PlaneJson { basis: p.basis }
    }
}

impl Plane {
    pub fn new(a: QVector, b: QVector) -> Result<Self> {
        if a.len() != b.len() || a.len() < 4 {
            return Err(shape("plane basis vectors must have equal length n + 2 >= 4"));
        }
        let defect = (a.dot(&a) - Quaternion::ONE)
            .norm()
            .max((b.dot(&b) - Quaternion::ONE).norm())
            .max(a.dot(&b).norm());
        if defect > 1e-10 {
            return Err(G2Error::Validation(format!("plane basis not orthonormal (defect {defect:.3e})")));
        }
        Ok(Plane { basis: [a, b] })
    }

    /// The base point `V' = span{e1, e2}`.
    pub fn origin(n: usize) -> Self {
        Plane { basis: [QVector::unit(n + 2, 0), QVector::unit(n + 2, 1)] }
    }

    pub fn basis(&self) -> &[QVector; 2] {
        &self.basis
    }

    pub fn n(&self) -> usize {
        self.basis[0].len() - 2
    }

    /// Norm of the component of the plane orthogonal to `V'`; zero exactly at the base point.
    pub fn distance_from_origin(&self) -> f64 {
        self.basis.iter().map(|b| b.0[2..].iter().map(|q| q.norm_sq()).sum::<f64>()).sum::<f64>().sqrt()
    }
}

/// The skew-adjoint `(n+2) x (n+2)` matrix `[[0, -v*], [v, 0]]`.
pub fn embed_in_algebra(v: &TangentVector) -> QMatrix {
    let n = v.n();
    let mut x = QMatrix::zeros(n + 2, n + 2);
    for r in 0..n {
        for c in 0..2 {
            let q = v.entry(r, c);
            x[(r + 2, c)] = q;
            x[(c, r + 2)] = -q.conj();
        }
    }
    x
}

/// The geodesic through `V'` in direction `v`, evaluated at time `t`.
pub fn geodesic_at(v: &TangentVector, t: f64) -> Result<Plane> {
    if v.max_abs() == 0.0 {
        return Err(domain("geodesic direction must be non-zero"));
    }
    let x: DMatrix<f64> = embed_in_algebra(v).to_real() * t;
    let e = x.exp();
    let g = QMatrix::from_real(&e)?;
    Plane::new(g.col(0), g.col(1))
}

/// Quaternionic dimension of the intersection of two planes.
pub fn plane_intersection_dim(p: &Plane, q: &Plane) -> Result<usize> {
    if p.n() != q.n() {
        return Err(shape("planes in different ambient spaces"));
    }
    let m = QMatrix::from_cols(&[p.basis[0].clone(), p.basis[1].clone(), q.basis[0].clone(), q.basis[1].clone()])?;
    Ok(4 - rank_h(&m, DEFAULT_TOL))
}
