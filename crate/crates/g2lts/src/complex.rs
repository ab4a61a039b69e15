//! The complex 2-Grassmannian `G2(C^{n+2})` as the Lie triple system `m1` of
//! complex-entry tangent vectors, its Kähler structure `J`, its quaternionic
//! Kähler structure spanned by `J1, J2, J3`, and the position tests.

use nalgebra::{Complex, DMatrix, Matrix3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constructors::{construct, construct_pi4_alternative, LtsDescriptor, Pi4Kind};
use crate::error::{G2Error, Result};
use crate::lts::RealSubspace;
use crate::model::{curvature, TangentVector};
use crate::qlinalg::{alignment_matrix, read_alignment, Alignment, HpType};
use crate::quat::{QMatrix, QVector, Quaternion};

type C = Complex<f64>;

/// Membership tolerance for the position tests.
pub const POSITION_TOL: f64 = 1e-8;

/// A tangent vector of `G2(C^{n+2})`: a complex `n x 2` matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CTangentJson", into = "CTangentJson")]
pub struct CTangentVector {
    m: DMatrix<C>,
}

#[derive(Serialize, Deserialize)]
struct CTangentJson {
    n: usize,
    /// Rows of `[re, im]` pairs.
    entries: Vec<[[f64; 2]; 2]>,
}

impl TryFrom<CTangentJson> for CTangentVector {
    type Error = G2Error;
    fn try_from(j: CTangentJson) -> Result<Self> {
        if j.entries.len() != j.n {
            return Err(G2Error::Shape(format!("expected {} rows, got {}", j.n, j.entries.len())));
        }
        let m = DMatrix::from_fn(j.n, 2, |r, c| C::new(j.entries[r][c][0], j.entries[r][c][1]));
        CTangentVector::new(m)
    }
}

impl From<CTangentVector> for CTangentJson {
    fn from(v: CTangentVector) -> Self {
        let n = v.n();
        CTangentJson {
            n,
            entries: (0..n).map(|r| [0, 1].map(|c| [v.m[(r, c)].re, v.m[(r, c)].im])).collect(),
        }
    }
}

impl CTangentVector {
    pub fn new(m: DMatrix<C>) -> Result<Self> {
        if m.ncols() != 2 || m.nrows() < 2 {
            return Err(G2Error::Shape(format!("tangent vectors are n x 2 with n >= 2, got {:?}", m.shape())));
        }
        Ok(CTangentVector { m })
    }

    pub fn n(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C> {
        &self.m
    }

    /// The same map as a quaternionic tangent vector with entries in `R + R i`.
    pub fn embed(&self) -> TangentVector {
        let col = |c: usize| QVector((0..self.n()).map(|r| Quaternion::new(self.m[(r, c)].re, self.m[(r, c)].im, 0.0, 0.0)).collect());
        TangentVector::from_cols(col(0), col(1)).expect("n >= 2")
    }

    /// Inverse of [`embed`](Self::embed); fails on entries outside `R + R i`.
    pub fn from_tangent(v: &TangentVector, tol: f64) -> Result<Self> {
        if !v.is_complex_entry(tol) {
            return Err(G2Error::Domain("tangent vector has entries outside R + R i".into()));
        }
        let m = DMatrix::from_fn(v.n(), 2, |r, c| {
            let q = v.entry(r, c);
            C::new(q.w, q.x)
        });
        CTangentVector::new(m)
    }
}

/// `R(u,v)w = (u v* - v u*) w + w (v* u - u* v)` with complex adjoints.
pub fn c_curvature(u: &CTangentVector, v: &CTangentVector, w: &CTangentVector) -> Result<CTangentVector> {
    if u.n() != v.n() || v.n() != w.n() {
        return Err(G2Error::Shape("curvature of vectors with different n".into()));
    }
    let (u, v, w) = (&u.m, &v.m, &w.m);
    let out = (u * v.adjoint() - v * u.adjoint()) * w + w * (v.adjoint() * u - u.adjoint() * v);
    CTangentVector::new(out)
}

/// Largest deviation between [`c_curvature`] and the quaternionic curvature on embedded vectors.
pub fn embedding_defect(u: &CTangentVector, v: &CTangentVector, w: &CTangentVector) -> Result<f64> {
    let c = c_curvature(u, v, w)?.embed();
    let q = curvature(&u.embed(), &v.embed(), &w.embed());
    Ok(c.sub(&q).max_abs())
}

/// The Lie triple system of all complex-entry tangent vectors.
pub fn m1(n: usize) -> Result<RealSubspace> {
    construct(&LtsDescriptor::G2(HpType::Complex(n)), n)
}

/// The Kähler structure `J` and the quaternionic Kähler triple `J1, J2, J3`.
#[derive(Clone, Debug)]
pub struct StructureSpan {
    /// `X1 = diag(i, -i)`, `X2 = [[0, 1], [-1, 0]]`, `X3 = [[0, i], [i, 0]]`; `J_a(v) = v X_a`.
    pub x: [QMatrix; 3],
}

impl Default for StructureSpan {
    fn default() -> Self {
        let (o, z, i) = (Quaternion::ONE, Quaternion::ZERO, Quaternion::I);
        let m = |a: [[Quaternion; 2]; 2]| QMatrix::from_rows(a.iter().map(|r| r.to_vec()).collect()).expect("2x2");
        StructureSpan { x: [m([[i, z], [z, -i]]), m([[z, o], [-o, z]]), m([[z, i], [i, z]])] }
    }
}

impl StructureSpan {
    /// `J(v) = v i`.
    pub fn j(&self, v: &TangentVector) -> TangentVector {
        v.right_mul(Quaternion::I)
    }

    /// `J_a(v) = v X_a`, `a` in `0..3`.
    pub fn j_a(&self, a: usize, v: &TangentVector) -> TangentVector {
        v.compose(&self.x[a])
    }

    /// Worst violation of `J^2 = J_a^2 = -id`, `J_1 J_2 = ±J_3`, and `J J_a = J_a J` on `m1`.
    pub fn relations_defect(&self, n: usize) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for b in m1(n)?.basis() {
            worst = worst.max(self.j(&self.j(b)).add(b).max_abs());
            for a in 0..3 {
                worst = worst.max(self.j_a(a, &self.j_a(a, b)).add(b).max_abs());
                worst = worst.max(self.j(&self.j_a(a, b)).sub(&self.j_a(a, &self.j(b))).max_abs());
            }
            let p = self.j_a(0, &self.j_a(1, b));
            let t = self.j_a(2, b);
            worst = worst.max(p.sub(&t).max_abs().min(p.add(&t).max_abs()));
        }
        Ok(worst)
    }

    /// Largest distance of `g J_a g^-1` from `span{J_1, J_2, J_3}` over random
    /// isotropy elements `(b1, b2) in U(2) x U(n)` preserving `m1`.
    pub fn isotropy_stability(&self, n: usize, samples: usize, seed: u64) -> Result<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let basis = m1(n)?;
        let ops: Vec<DMatrix<f64>> = (0..3).map(|a| operator_on(&basis, |v| self.j_a(a, v))).collect();
        let flat: Vec<Vec<f64>> = ops.iter().map(|m| m.iter().cloned().collect()).collect();
        let span = crate::real::orthonormalize(&flat, 1e-12);
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let b1 = random_unitary(2, &mut rng);
            let b2 = random_unitary(n, &mut rng);
            let g = crate::model::IsotropyElement::new(b1.clone(), b2.clone())?;
            let g_inv = g.inverse();
            for a in 0..3 {
                let conj = operator_on(&basis, |v| {
                    let w = crate::model::isotropy_act(&g_inv, v).expect("same n");
                    crate::model::isotropy_act(&g, &self.j_a(a, &w)).expect("same n")
                });
                let flat: Vec<f64> = conj.iter().cloned().collect();
                worst = worst.max(crate::real::residual(&flat, &span) / crate::real::norm(&flat).max(1.0));
            }
        }
        Ok(worst)
    }
}

/// A pseudorandom unitary with complex entries (Gram-Schmidt of a random matrix).
fn random_unitary(m: usize, rng: &mut ChaCha8Rng) -> QMatrix {
    loop {
        let cols: Vec<QVector> = (0..m)
            .map(|_| QVector((0..m).map(|_| Quaternion::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), 0.0, 0.0)).collect()))
            .collect();
        // complex Gram-Schmidt keeps entries complex
        let mut out: Vec<QVector> = Vec::new();
        for c in cols {
            let mut r = c.clone();
            for u in &out {
                r = r.sub(&u.right_mul(u.dot(&r)));
            }
            let nr = r.norm();
            if nr < 1e-6 {
                break;
            }
            out.push(r.scale(1.0 / nr));
        }
        if out.len() == m {
            return QMatrix::from_cols(&out).expect("square");
        }
    }
}

/// Matrix of a real-linear map restricted to `S` in its orthonormal basis.
fn operator_on(s: &RealSubspace, f: impl Fn(&TangentVector) -> TangentVector) -> DMatrix<f64> {
    let b = s.basis();
    let imgs: Vec<TangentVector> = b.iter().map(&f).collect();
    DMatrix::from_fn(b.len(), b.len(), |r, c| crate::model::inner(&b[r], &imgs[c]))
}

/// Position with respect to `J`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JPosition {
    Complex,
    TotallyReal,
    Neither,
}

/// Position with respect to the quaternionic Kähler structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QkPosition {
    Quaternionic,
    TotallyComplex,
    TotallyReal,
    Neither,
}

/// Both positions plus the measured defects.
#[derive(Clone, Debug, Serialize)]
pub struct PositionReport {
    #[serde(rename = "J")]
    pub j: JPosition,
    #[serde(rename = "QK")]
    pub qk: QkPosition,
    pub residuals: PositionResiduals,
}

#[derive(Clone, Debug, Serialize)]
pub struct PositionResiduals {
    /// `max |C^T C - I|` for `C_km = <J s_m, s_k>`.
    pub j_invariance: f64,
    /// `max |C_km|`.
    pub j_orthogonality: f64,
    /// Alignment matrix of `J1, J2, J3` on `S`, row-major.
    pub qk_alignment: [f64; 9],
}

fn check_in_m1(s: &RealSubspace) -> Result<()> {
    if s.basis().iter().all(|v| v.is_complex_entry(POSITION_TOL)) {
        Ok(())
    } else {
        Err(G2Error::Domain("subspace is not contained in m1".into()))
    }
}

fn real_basis(s: &RealSubspace) -> Vec<Vec<f64>> {
    s.basis().iter().map(|v| v.to_real()).collect()
}

/// Real matrix of a map on all of `m` in the coordinates of [`TangentVector::to_real`].
fn full_operator(n: usize, f: impl Fn(&TangentVector) -> TangentVector) -> DMatrix<f64> {
    let d = 8 * n;
    let mut op = DMatrix::zeros(d, d);
    for k in 0..d {
        let mut e = vec![0.0; d];
        e[k] = 1.0;
        let img = f(&TangentVector::from_real(n, &e)).to_real();
        for (r, x) in img.into_iter().enumerate() {
            op[(r, k)] = x;
        }
    }
    op
}

pub fn j_position(s: &RealSubspace) -> Result<JPosition> {
    Ok(positions(s)?.j)
}

pub fn qk_position(s: &RealSubspace) -> Result<QkPosition> {
    Ok(positions(s)?.qk)
}

/// Position of `S ⊂ m1` with respect to `J` and to the quaternionic Kähler structure.
pub fn positions(s: &RealSubspace) -> Result<PositionReport> {
    check_in_m1(s)?;
    let st = StructureSpan::default();
    let c = operator_on(s, |v| st.j(v));
    let d = s.dim();
    let j_invariance = (c.transpose() * &c - DMatrix::<f64>::identity(d, d)).abs().max();
    let j_orthogonality = c.abs().max();
    let j = if j_invariance <= POSITION_TOL {
        JPosition::Complex
    } else if j_orthogonality <= POSITION_TOL {
        JPosition::TotallyReal
    } else {
        JPosition::Neither
    };
    let n = s.n();
    let ops = [0, 1, 2].map(|a| full_operator(n, |v| st.j_a(a, v)));
    let g: Matrix3<f64> = alignment_matrix(&real_basis(s), &ops);
    let qk = match read_alignment(&g, d, POSITION_TOL) {
        Alignment::Invariant => QkPosition::Quaternionic,
        Alignment::Orthogonal => QkPosition::TotallyReal,
        Alignment::Single(_) => QkPosition::TotallyComplex,
        Alignment::Other => QkPosition::Neither,
    };
    let mut qk_alignment = [0.0; 9];
    for a in 0..3 {
        for b in 0..3 {
            qk_alignment[3 * a + b] = g[(a, b)];
        }
    }
    Ok(PositionReport { j, qk, residuals: PositionResiduals { j_invariance, j_orthogonality, qk_alignment } })
}

/// Whether a type occurs in the complex Grassmannian, with the reason when not.
pub fn complex_admissible(d: &LtsDescriptor, n: usize) -> Result<()> {
    d.validate(n)?;
    let cp = |t: HpType| t.is_complex_type();
    let reject = |why: &str| Err(G2Error::Descriptor(format!("{d} does not occur in G2(C^{}): {why}", n + 2)));
    match *d {
        LtsDescriptor::Geo { .. } | LtsDescriptor::Q3 | LtsDescriptor::P44(_) => Ok(()),
        LtsDescriptor::P0(t) | LtsDescriptor::G2(t) if !cp(t) => reject("only CP-types are allowed"),
        LtsDescriptor::P0(_) | LtsDescriptor::G2(_) => Ok(()),
        LtsDescriptor::S13(l) if l != 2 => reject("only the 2-sphere occurs"),
        LtsDescriptor::S13(_) => Ok(()),
        LtsDescriptor::P12(t) if !cp(t) => reject("only CP-types are allowed"),
        LtsDescriptor::P12(t) if n < t.dim() + t.width() => reject("needs n >= dim + width"),
        LtsDescriptor::P12(_) => Ok(()),
        LtsDescriptor::PxP(a, b) if !(cp(a) && cp(b)) => reject("only CP-types are allowed"),
        LtsDescriptor::PxP(..) => Ok(()),
        LtsDescriptor::S1xS5(l) if l > 3 => reject("needs l <= 3"),
        LtsDescriptor::S1xS5(_) => Ok(()),
        LtsDescriptor::S5 => reject("the 5-sphere does not occur"),
        LtsDescriptor::Sp2 => reject("Sp2 does not occur"),
    }
}

/// A representative inside `m1` of a type of the complex Grassmannian.
pub fn cla_c_construct(d: &LtsDescriptor, n: usize) -> Result<RealSubspace> {
    complex_admissible(d, n)?;
    let s = match *d {
        LtsDescriptor::P44(HpType::Quaternionic(l)) => construct_pi4_alternative(Pi4Kind::Quaternionic, l, n)?,
        LtsDescriptor::P44(HpType::Sphere3) => {
            // x = f1 z1 + f2 z2 with z1 complex and z2 real inside the quaternionic alternative form
            let h = construct_pi4_alternative(Pi4Kind::Quaternionic, 1, n)?;
            RealSubspace::new(n, h.basis()[..3].to_vec())?
        }
        _ => construct(d, n)?,
    };
    check_in_m1(&s).map_err(|_| G2Error::Construction(format!("representative of {d} leaves m1")))?;
    Ok(s)
}

/// The position pair listed for a type of the complex Grassmannian.
pub fn table_positions(d: &LtsDescriptor) -> Option<(JPosition, QkPosition)> {
    use HpType::*;
    use JPosition as J;
    use LtsDescriptor as D;
    use QkPosition as Q;
    let p = match d.canonical() {
        D::Geo { .. } => (J::TotallyReal, Q::TotallyReal),
        D::P0(Real(_)) => (J::TotallyReal, Q::TotallyReal),
        D::P0(Complex(_)) => (J::Complex, Q::TotallyComplex),
        D::S13(2) => (J::Neither, Q::Neither),
        D::P12(Real(_)) => (J::TotallyReal, Q::TotallyReal),
        D::P12(Complex(_)) => (J::Neither, Q::Neither),
        D::P44(Real(_)) => (J::TotallyReal, Q::TotallyReal),
        D::P44(Complex(_)) => (J::TotallyReal, Q::TotallyComplex),
        D::P44(Sphere3) => (J::TotallyReal, Q::Neither),
        D::P44(Quaternionic(_)) => (J::TotallyReal, Q::Quaternionic),
        D::G2(Real(_)) => (J::TotallyReal, Q::TotallyComplex),
        D::G2(Complex(_)) => (J::Complex, Q::Quaternionic),
        D::PxP(Real(_), Real(_)) => (J::TotallyReal, Q::TotallyReal),
        D::PxP(Real(_), Complex(_)) | D::PxP(Complex(_), Real(_)) => (J::Neither, Q::Neither),
        D::PxP(Complex(_), Complex(_)) => (J::Complex, Q::TotallyComplex),
        D::S1xS5(l) if l <= 3 => (J::TotallyReal, Q::Neither),
        D::Q3 => (J::Complex, Q::Neither),
        _ => return None,
    };
    Some(p)
}

/// Maximality inside `G2(C^{n+2})` as listed.
pub fn complex_maximal(d: &LtsDescriptor, n: usize) -> bool {
    use HpType::*;
    use LtsDescriptor as D;
    match d.canonical() {
        D::P0(Complex(l)) => l == n,
        D::P12(Complex(2)) => n == 4,
        D::P44(Quaternionic(l)) => 2 * l == n,
        D::G2(Real(l)) => l == n,
        D::G2(Complex(l)) => l + 1 == n,
        D::PxP(Complex(a), Complex(b)) => a + b == n,
        D::S1xS5(3) | D::Q3 => n == 2,
        _ => false,
    }
}
