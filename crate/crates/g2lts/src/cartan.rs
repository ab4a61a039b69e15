//! Conjugations, Cartan subalgebras, adapted frames, roots and root spaces,
//! characteristic angles and canonical representations.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{domain, shape, G2Error, Result};
use crate::lts::RealSubspace;
use crate::model::{bracket_mm, curvature, inner, IsotropyElement, TangentVector};
use crate::qlinalg::{extend_to_onb, hermitian2_eigs, hermitian2_eigvec, DEFAULT_TOL};
use crate::quat::{QMatrix, QVector, Quaternion};
use crate::real;

/// A conjugation `A` of `V'`, a complementary structure `J`, an adapted basis
/// `(e+, e-)` and unit vectors `H+` in `L+(A)`, `H-` in `L-(A)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FrameJson", into = "FrameJson")]
pub struct Frame {
    pub a: QMatrix,
    pub j: QMatrix,
    pub e_plus: QVector,
    pub e_minus: QVector,
    pub h_plus: TangentVector,
    pub h_minus: TangentVector,
}

#[derive(Serialize, Deserialize)]
struct FrameJson {
    #[serde(rename = "A")]
    a: QMatrix,
    #[serde(rename = "J")]
    j: QMatrix,
    e_plus: QVector,
    e_minus: QVector,
    #[serde(rename = "H_plus")]
    h_plus: TangentVector,
    #[serde(rename = "H_minus")]
    h_minus: TangentVector,
}

impl TryFrom<FrameJson> for Frame {
    type Error = G2Error;
    fn try_from(f: FrameJson) -> Result<Self> {
        Frame::new(f.a, f.j, f.e_plus, f.e_minus, f.h_plus, f.h_minus)
    }
}

impl From<Frame> for FrameJson {
    fn from(f: Frame) -> Self {
        FrameJson { a: f.a, j: f.j, e_plus: f.e_plus, e_minus: f.e_minus, h_plus: f.h_plus, h_minus: f.h_minus }
    }
}

const FRAME_TOL: f64 = 1e-10;

impl Frame {
    /// Validate and assemble a frame.
    pub fn new(
        a: QMatrix,
        j: QMatrix,
        e_plus: QVector,
        e_minus: QVector,
        h_plus: TangentVector,
        h_minus: TangentVector,
    ) -> Result<Self> {
        if a.shape() != (2, 2) || j.shape() != (2, 2) || e_plus.len() != 2 || e_minus.len() != 2 {
            return Err(shape("frame data on V' must be 2-dimensional"));
        }
        if h_plus.n() != h_minus.n() {
            return Err(shape("H+ and H- disagree on n"));
        }
        let id = QMatrix::identity(2);
        let bad = |what: &str, r: f64| -> Result<()> {
            if r > FRAME_TOL {
                Err(G2Error::Validation(format!("frame relation {what} fails (residual {r:.3e})")))
            } else {
                Ok(())
            }
        };
        bad("A^2 = id", (&a * &a).try_sub(&id)?.max_abs())?;
        bad("A* = A", a.try_sub(&a.adjoint())?.max_abs())?;
        bad("J^2 = -id", (&j * &j).try_add(&id)?.max_abs())?;
        bad("J* = -J", j.try_add(&j.adjoint())?.max_abs())?;
        bad("JA = -AJ", (&j * &a).try_add(&(&a * &j))?.max_abs())?;
        bad("|e+| = 1", (e_plus.norm() - 1.0).abs())?;
        bad("A e+ = e+", a.apply(&e_plus)?.sub(&e_plus).norm())?;
        bad("e- = J e+", j.apply(&e_plus)?.sub(&e_minus).norm())?;
        bad("H+ in L+", h_plus.apply(&e_minus).norm())?;
        bad("H- in L-", h_minus.apply(&e_plus).norm())?;
        bad("|H+| = 1", (h_plus.norm() - 1.0).abs())?;
        bad("|H-| = 1", (h_minus.norm() - 1.0).abs())?;
        bad("H+(e+) orthogonal to H-(e-)", h_plus.apply(&e_plus).dot(&h_minus.apply(&e_minus)).norm())?;
        Ok(Frame { a, j, e_plus, e_minus, h_plus, h_minus })
    }

    pub fn n(&self) -> usize {
        self.h_plus.n()
    }

    /// `H+(e+)`.
    pub fn x_plus(&self) -> QVector {
        self.h_plus.apply(&self.e_plus)
    }

    /// `H-(e-)`.
    pub fn x_minus(&self) -> QVector {
        self.h_minus.apply(&self.e_minus)
    }

    /// The element of `L+(A)` sending `e+` to `w`.
    pub fn map_plus(&self, w: &QVector) -> TangentVector {
        TangentVector::from_matrix(&QMatrix::outer(w, &self.e_plus)).expect("n x 2")
    }

    /// The element of `L-(A)` sending `e-` to `w`.
    pub fn map_minus(&self, w: &QVector) -> TangentVector {
        TangentVector::from_matrix(&QMatrix::outer(w, &self.e_minus)).expect("n x 2")
    }

    /// `c H+`, the map `e+ -> H+(e+) c`.
    pub fn scaled_plus(&self, c: Quaternion) -> TangentVector {
        self.map_plus(&self.x_plus().right_mul(c))
    }

    /// `c H-`, the map `e- -> H-(e-) c`.
    pub fn scaled_minus(&self, c: Quaternion) -> TangentVector {
        self.map_minus(&self.x_minus().right_mul(c))
    }

    /// The complex structure `v -> v o J` of `m` induced by `J`.
    pub fn apply_j(&self, v: &TangentVector) -> TangentVector {
        v.compose(&self.j)
    }

    /// An H-orthonormal basis of the orthogonal complement of `H+(e+)`, `H-(e-)` in `V`.
    pub fn complement_basis(&self) -> Vec<QVector> {
        let n = self.n();
        extend_to_onb(&[self.x_plus(), self.x_minus()], n).into_iter().skip(2).collect()
    }

    /// The frame moved by an isotropy element.
    pub fn transform(&self, g: &IsotropyElement) -> Result<Frame> {
        if g.n() != self.n() {
            return Err(shape("isotropy element and frame disagree on n"));
        }
        let b1 = &g.b1;
        Ok(Frame {
            a: &(b1 * &self.a) * &b1.adjoint(),
            j: &(b1 * &self.j) * &b1.adjoint(),
            e_plus: b1.apply(&self.e_plus)?,
            e_minus: b1.apply(&self.e_minus)?,
            h_plus: g.act_unchecked(&self.h_plus),
            h_minus: g.act_unchecked(&self.h_minus),
        })
    }

    /// Cartan subalgebra `a = span{H+, H-}`.
    pub fn cartan_basis(&self) -> [TangentVector; 2] {
        [self.h_plus.clone(), self.h_minus.clone()]
    }
}

/// The frame with `A = diag(1,-1)`, `J(e1) = e2`, `H+ = (e1 -> f1)`, `H- = (e2 -> f2)`.
pub fn standard_frame(n: usize) -> Result<Frame> {
    if n < 2 {
        return Err(domain(format!("standard frame needs n >= 2, got {n}")));
    }
    let mut a = QMatrix::identity(2);
    a[(1, 1)] = -Quaternion::ONE;
    let mut j = QMatrix::zeros(2, 2);
    j[(1, 0)] = Quaternion::ONE;
    j[(0, 1)] = -Quaternion::ONE;
    Ok(Frame {
        a,
        j,
        e_plus: QVector::unit(2, 0),
        e_minus: QVector::unit(2, 1),
        h_plus: TangentVector::elementary(n, 0, 0, Quaternion::ONE),
        h_minus: TangentVector::elementary(n, 1, 1, Quaternion::ONE),
    })
}

/// Whether two orthonormal vectors span a Cartan subalgebra.
pub fn is_cartan(u: &TangentVector, v: &TangentVector) -> Result<bool> {
    if u.n() != v.n() {
        return Err(shape("is_cartan of vectors with different n"));
    }
    let (uu, vv, uv) = (inner(u, u), inner(v, v), inner(u, v));
    if (uu - 1.0).abs() > DEFAULT_TOL || (vv - 1.0).abs() > DEFAULT_TOL || uv.abs() > DEFAULT_TOL {
        return Err(G2Error::Validation("is_cartan needs an orthonormal pair".into()));
    }
    Ok(bracket_mm(u, v).max_abs() <= DEFAULT_TOL)
}

/// The vector `M_{c,eps}`: `e+ -> H-(e-) c / sqrt 2`, `e- -> eps H+(e+) conj(c) / sqrt 2`.
pub fn m_vector(frame: &Frame, c: Quaternion, eps: i8) -> TangentVector {
    let s = if eps < 0 { -FRAC_1_SQRT_2 } else { FRAC_1_SQRT_2 };
    frame
        .map_plus(&frame.x_minus().right_mul(c).scale(FRAC_1_SQRT_2))
        .add(&frame.map_minus(&frame.x_plus().right_mul(c.conj()).scale(s)))
}

/// The six roots of `m` with respect to a Cartan subalgebra `span{H+, H-}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootLabel {
    Lambda1,
    Lambda2,
    Lambda3,
    Lambda4,
    TwoLambda1,
    TwoLambda2,
}

impl RootLabel {
    pub const ALL: [RootLabel; 6] = [
        RootLabel::Lambda1,
        RootLabel::Lambda2,
        RootLabel::Lambda3,
        RootLabel::Lambda4,
        RootLabel::TwoLambda1,
        RootLabel::TwoLambda2,
    ];

    /// Coefficients `(p, q)` with respect to the simple forms dual to `H+`, `H-`.
    pub fn coefficients(self) -> (i32, i32) {
        match self {
            RootLabel::Lambda1 => (1, 0),
            RootLabel::Lambda2 => (0, 1),
            RootLabel::Lambda3 => (1, 1),
            RootLabel::Lambda4 => (1, -1),
            RootLabel::TwoLambda1 => (2, 0),
            RootLabel::TwoLambda2 => (0, 2),
        }
    }

    /// Value on `a H+ + b H-`.
    pub fn eval(self, a: f64, b: f64) -> f64 {
        let (p, q) = self.coefficients();
        p as f64 * a + q as f64 * b
    }

    pub fn name(self) -> &'static str {
        match self {
            RootLabel::Lambda1 => "lambda1",
            RootLabel::Lambda2 => "lambda2",
            RootLabel::Lambda3 => "lambda3",
            RootLabel::Lambda4 => "lambda4",
            RootLabel::TwoLambda1 => "2lambda1",
            RootLabel::TwoLambda2 => "2lambda2",
        }
    }

    /// Ambient multiplicity for a given `n`.
    pub fn multiplicity(self, n: usize) -> usize {
        match self {
            RootLabel::Lambda1 | RootLabel::Lambda2 => 4 * n.saturating_sub(2),
            RootLabel::Lambda3 | RootLabel::Lambda4 => 4,
            RootLabel::TwoLambda1 | RootLabel::TwoLambda2 => 3,
        }
    }
}

impl fmt::Display for RootLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A root together with an orthonormal basis of its root space.
#[derive(Clone, Debug)]
pub struct RootDatum {
    pub label: RootLabel,
    pub multiplicity: usize,
    pub basis: Vec<TangentVector>,
}

impl RootDatum {
    /// Orthogonal projection onto the root space.
    pub fn project(&self, v: &TangentVector) -> TangentVector {
        project_onto(&self.basis, v)
    }
}

impl Serialize for RootDatum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let (p, q) = self.label.coefficients();
        let mut st = s.serialize_struct("RootDatum", 4)?;
        st.serialize_field("label", self.label.name())?;
        st.serialize_field("p", &p)?;
        st.serialize_field("q", &q)?;
        st.serialize_field("multiplicity", &self.multiplicity)?;
        st.end()
    }
}

pub(crate) fn project_onto(basis: &[TangentVector], v: &TangentVector) -> TangentVector {
    let mut out = TangentVector::zeros(v.n());
    for b in basis {
        out = b.axpy(inner(b, v), &out);
    }
    out
}

/// Orthonormal basis of the root space of `label`, from the explicit descriptions.
pub fn root_space_basis(frame: &Frame, label: RootLabel) -> Vec<TangentVector> {
    let imag = [Quaternion::I, Quaternion::J, Quaternion::K];
    match label {
        RootLabel::Lambda1 | RootLabel::Lambda2 => {
            let mut out = Vec::new();
            for w in frame.complement_basis() {
                for c in Quaternion::BASIS {
                    let x = w.right_mul(c);
                    out.push(if label == RootLabel::Lambda1 { frame.map_plus(&x) } else { frame.map_minus(&x) });
                }
            }
            out
        }
        RootLabel::Lambda3 => Quaternion::BASIS.iter().map(|&c| m_vector(frame, c, -1)).collect(),
        RootLabel::Lambda4 => Quaternion::BASIS.iter().map(|&c| m_vector(frame, c, 1)).collect(),
        RootLabel::TwoLambda1 => imag.iter().map(|&c| frame.scaled_plus(c)).collect(),
        RootLabel::TwoLambda2 => imag.iter().map(|&c| frame.scaled_minus(c)).collect(),
    }
}

/// Root data of `m` for the Cartan subalgebra of `frame`. Roots of multiplicity
/// zero (the `lambda1`, `lambda2` pair when `n = 2`) are omitted.
pub fn root_data(frame: &Frame, n: usize) -> Result<Vec<RootDatum>> {
    if n < 2 || frame.n() != n {
        return Err(shape(format!("root data needs n >= 2 matching the frame (n = {n})")));
    }
    Ok(RootLabel::ALL
        .iter()
        .map(|&label| RootDatum { label, multiplicity: label.multiplicity(n), basis: root_space_basis(frame, label) })
        .filter(|d| d.multiplicity > 0)
        .collect())
}

/// Orthogonal projection onto the Cartan subalgebra of `frame`.
pub fn project_cartan(frame: &Frame, v: &TangentVector) -> TangentVector {
    project_onto(&frame.cartan_basis(), v)
}

/// The Riesz vector `p H+ + q H-` of a root.
pub fn root_sharp(label: RootLabel, frame: &Frame) -> TangentVector {
    let (p, q) = label.coefficients();
    frame.h_plus.scale(p as f64).add(&frame.h_minus.scale(q as f64))
}

/// Real orthonormal basis of the whole of `m`.
pub fn full_basis(n: usize) -> Vec<TangentVector> {
    let mut out = Vec::with_capacity(8 * n);
    for col in 0..2 {
        for row in 0..n {
            for c in Quaternion::BASIS {
                out.push(TangentVector::elementary(n, col, row, c));
            }
        }
    }
    out
}

/// Matrix of the Jacobi operator `X -> R(X,H)H` on an orthonormal basis.
pub(crate) fn jacobi_matrix(h: &TangentVector, basis: &[TangentVector]) -> DMatrix<f64> {
    let d = basis.len();
    let images: Vec<TangentVector> = basis.iter().map(|b| curvature(b, h, h)).collect();
    DMatrix::from_fn(d, d, |r, c| inner(&basis[r], &images[c]))
}

/// Eigen-decomposition of the Jacobi operator on `basis`: clustered eigenvalues
/// (ascending) with orthonormal eigenvectors per cluster.
pub(crate) fn jacobi_eigen(
    h: &TangentVector,
    basis: &[TangentVector],
) -> Vec<(f64, Vec<TangentVector>)> {
    if basis.is_empty() {
        return Vec::new();
    }
    let m = jacobi_matrix(h, basis);
    let (vals, vecs) = real::sym_eigen(&m);
    let tol = 1e-6 * inner(h, h).max(1.0);
    let mut out: Vec<(f64, Vec<TangentVector>)> = Vec::new();
    let mut start = 0;
    for (mean, count) in real::cluster(&vals, tol) {
        let members = (start..start + count)
            .map(|k| {
                let mut v = TangentVector::zeros(h.n());
                for (i, b) in basis.iter().enumerate() {
                    v = b.axpy(vecs[(i, k)], &v);
                }
                v
            })
            .collect();
        out.push((mean, members));
        start += count;
    }
    out
}

/// Spectrum of `X -> R(X,H)H` on `S` (or on all of `m` when `S` is `None`), as
/// clustered `(eigenvalue, multiplicity)` pairs in ascending order.
pub fn jacobi_spectrum(h: &TangentVector, s: Option<&RealSubspace>) -> Result<Vec<(f64, usize)>> {
    if h.max_abs() == 0.0 {
        return Err(domain("Jacobi operator of the zero vector"));
    }
    let full;
    let basis: &[TangentVector] = match s {
        Some(s) => {
            if s.n() != h.n() {
                return Err(shape("subspace and vector disagree on n"));
            }
            s.basis()
        }
        None => {
            full = full_basis(h.n());
            &full
        }
    };
    Ok(jacobi_eigen(h, basis).into_iter().map(|(v, b)| (v, b.len())).collect())
}

/// Eigenvalues of `v* v`, descending.
fn gram_eigs(v: &TangentVector) -> (f64, f64, f64, f64, Quaternion) {
    let a = v.col(0).norm_sq();
    let b = v.col(1).norm_sq();
    let c = v.col(0).dot(v.col(1));
    let (m1, m2) = hermitian2_eigs(a, b, c);
    (m1, m2.max(0.0), a, b, c)
}

/// Characteristic angle in `[0, pi/4]`.
pub fn char_angle(v: &TangentVector) -> Result<f64> {
    let (m1, m2, ..) = gram_eigs(v);
    if m1 <= 0.0 {
        return Err(domain("characteristic angle of the zero vector"));
    }
    Ok((m2 / m1).sqrt().atan().clamp(0.0, std::f64::consts::FRAC_PI_4))
}

/// Result of [`canonical_representation`]:
/// `v = norm (cos phi H+ + sin phi H-)` in `frame`.
#[derive(Clone, Debug)]
pub struct CanonicalRep {
    pub frame: Frame,
    pub norm: f64,
    pub phi: f64,
    /// `H-` was completed by an arbitrary deterministic choice (`phi = 0`).
    pub non_canonical: bool,
}

/// Relative eigenvalue gap below which `v* v` is treated as scalar.
const TIE_TOL: f64 = 1e-9;
/// Relative size below which the smaller eigenvalue counts as zero.
const ZERO_TOL: f64 = 1e-14;

/// Canonical representation of a non-zero tangent vector.
pub fn canonical_representation(v: &TangentVector) -> Result<CanonicalRep> {
    let n = v.n();
    let (m1, m2, a, b, c) = gram_eigs(v);
    if m1 <= 0.0 {
        return Err(domain("canonical representation of the zero vector"));
    }
    let x1 = if m1 - m2 <= TIE_TOL * (m1 + m2) {
        QVector::unit(2, 0)
    } else {
        hermitian2_eigvec(a, b, c, m1).unwrap_or_else(|| QVector::unit(2, 0))
    };
    let x1 = x1.scale(1.0 / x1.norm());
    let basis = extend_to_onb(std::slice::from_ref(&x1), 2);
    let x2 = basis[1].clone();
    let up = v.apply(&x1);
    let u_plus = up.scale(1.0 / up.norm());
    let um = v.apply(&x2);
    let (u_minus, non_canonical) = if m2 <= ZERO_TOL * m1 {
        (extend_to_onb(std::slice::from_ref(&u_plus), n)[1].clone(), true)
    } else {
        // re-orthogonalize against u+ to remove eigenvector round-off
        let r = um.sub(&u_plus.right_mul(u_plus.dot(&um)));
        (r.scale(1.0 / r.norm()), false)
    };
    let a_mat = QMatrix::outer(&x1, &x1).try_sub(&QMatrix::outer(&x2, &x2))?;
    let j_mat = QMatrix::outer(&x2, &x1).try_sub(&QMatrix::outer(&x1, &x2))?;
    let h_plus = TangentVector::from_matrix(&QMatrix::outer(&u_plus, &x1))?;
    let h_minus = TangentVector::from_matrix(&QMatrix::outer(&u_minus, &x2))?;
    let frame = Frame::new(a_mat, j_mat, x1, x2, h_plus, h_minus)?;
    let norm = (m1 + m2).sqrt();
    let phi = (m2 / m1).sqrt().atan().clamp(0.0, std::f64::consts::FRAC_PI_4);
    Ok(CanonicalRep { frame, norm, phi, non_canonical })
}

/// An isotropy element carrying `frame_from` to `frame_to`: it maps the adapted
/// basis and the vectors `H+(e+)`, `H-(e-)` onto each other.
pub fn frame_isotropy(frame_from: &Frame, frame_to: &Frame) -> Result<IsotropyElement> {
    let n = frame_from.n();
    if frame_to.n() != n {
        return Err(shape("frames disagree on n"));
    }
    let b1 = QMatrix::outer(&frame_to.e_plus, &frame_from.e_plus)
        .try_add(&QMatrix::outer(&frame_to.e_minus, &frame_from.e_minus))?;
    let onb = |f: &Frame| extend_to_onb(&[f.x_plus(), f.x_minus()], n);
    let (src, dst) = (onb(frame_from), onb(frame_to));
    let mut b2 = QMatrix::zeros(n, n);
    for (s, d) in src.iter().zip(&dst) {
        b2 = b2.try_add(&QMatrix::outer(d, s))?;
    }
    IsotropyElement::new(b1, b2)
}
