//! Concrete totally geodesic embeddings: products and diagonals of
//! projective spaces, geodesic periods and maximal tori, the exotic `HP^2`
//! inside `G2(H^7)` built from the threefold alternating product of `C^6`
//! (with its `CP^2` and `RP^2` restrictions), and the centrosome realization of
//! the `Sp2` type.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

use nalgebra::{Complex, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classify::classify;
use crate::constructors::LtsDescriptor;
use crate::error::{G2Error, Result};
use crate::lts::{is_lts, RealSubspace};
use crate::model::{geodesic_at, Plane, TangentVector};
use crate::qlinalg::HpType;
use crate::quat::{QMatrix, QVector, Quaternion};
use crate::real;

type C = Complex<f64>;
type CVec = DVector<C>;
type CMat = DMatrix<C>;

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);
const I: C = C::new(0.0, 1.0);

/// Outcome of building the tangent space of an orbit or embedding.
#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingReport {
    pub target: LtsDescriptor,
    pub dim: usize,
    pub is_lts: bool,
    pub residual: f64,
    pub classified_as: Option<LtsDescriptor>,
    /// Worst violation of the invariance conditions checked along the way.
    pub invariance_residual: f64,
    #[serde(skip)]
    pub tangent: RealSubspace,
}

impl EmbeddingReport {
    fn new(target: LtsDescriptor, tangent: RealSubspace, invariance_residual: f64) -> Self {
        let (ok, residual) = is_lts(&tangent, 1e-8);
        let classified_as = if ok { classify(&tangent).ok() } else { None };
        EmbeddingReport { target, dim: tangent.dim(), is_lts: ok, residual, classified_as, invariance_residual, tangent }
    }

    /// Closed and classified as the target type.
    pub fn matches_target(&self) -> bool {
        self.is_lts && self.classified_as.is_some_and(|d| d.same_type(&self.target))
    }
}

// ---------------------------------------------------------------------------
// products, diagonals, geodesics

/// The orthogonal splitting `H^{n+2} = V1 + V2` with `V1 = span{e1, f1..f_l1}`
/// and `V2 = span{e2, f_{l1+1}..f_{l1+l2}}`, in coordinates `(e1, e2, f1, ..)`.
fn splitting(l1: usize, l2: usize, n: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    if l1 + l2 > n {
        return Err(G2Error::Domain(format!("splitting needs l1 + l2 <= n ({l1} + {l2} > {n})")));
    }
    let v1 = std::iter::once(0).chain((0..l1).map(|a| 2 + a)).collect();
    let v2 = std::iter::once(1).chain((0..l2).map(|a| 2 + l1 + a)).collect();
    Ok((v1, v2))
}

/// `(p1, p2) -> p1 + p2` for quaternionic lines `p1 in V1`, `p2 in V2`, given by
/// their coordinates in `V1 = span{e1, f1..f_l1}` and `V2 = span{e2, ..}`.
pub fn product_embedding(p1: &QVector, p2: &QVector, n: usize) -> Result<Plane> {
    let (l1, l2) = (p1.len().saturating_sub(1), p2.len().saturating_sub(1));
    let (v1, v2) = splitting(l1, l2, n)?;
    let lift = |p: &QVector, idx: &[usize]| -> Result<QVector> {
        let norm = p.norm();
        if norm == 0.0 {
            return Err(G2Error::Domain("a point of HP(V) needs a non-zero vector".into()));
        }
        let mut out = QVector::zeros(n + 2);
        for (k, &i) in idx.iter().enumerate() {
            out.0[i] = p.0[k] * (1.0 / norm);
        }
        Ok(out)
    };
    Plane::new(lift(p1, &v1)?, lift(p2, &v2)?)
}

/// Image of the differential of the product embedding at the base point.
pub fn product_tangent(l1: usize, l2: usize, n: usize) -> Result<RealSubspace> {
    splitting(l1, l2, n)?;
    let mut vs = Vec::new();
    for (col, rows) in [(0, 0..l1), (1, l1..l1 + l2)] {
        for row in rows {
            for q in Quaternion::BASIS {
                vs.push(TangentVector::elementary(n, col, row, q));
            }
        }
    }
    RealSubspace::span(n, &vs)
}

/// Report for the product embedding; `l2 = 0` is the projective space `HP^n`.
pub fn product_report(l1: usize, l2: usize, n: usize) -> Result<EmbeddingReport> {
    let target = if l2 == 0 {
        LtsDescriptor::P0(HpType::Quaternionic(l1))
    } else {
        LtsDescriptor::PxP(HpType::Quaternionic(l1), HpType::Quaternionic(l2))
    };
    Ok(EmbeddingReport::new(target, product_tangent(l1, l2, n)?, 0.0))
}

/// Tangent space at the base point of `p -> f(p, p)`, where `M` sits in
/// `HP(V1)` as a projective space of type `tau` and `V1`, `V2` are identified by
/// the H-linear map `e1 -> e2`, `f_a -> f_{l+a}`.
pub fn diagonal_tangent(tau: HpType, n: usize) -> Result<RealSubspace> {
    let l = tau.dim();
    if 2 * l > n {
        return Err(G2Error::Domain(format!("diagonal of {tau} needs dim <= n/2 (n = {n})")));
    }
    let vs: Vec<TangentVector> = (0..l)
        .flat_map(|a| {
            tau.scalars().iter().map(move |&c| {
                TangentVector::elementary(n, 0, a, c)
                    .add(&TangentVector::elementary(n, 1, l + a, c))
                    .scale(FRAC_1_SQRT_2)
            })
        })
        .collect();
    RealSubspace::span(n, &vs)
}

pub fn diagonal_report(tau: HpType, n: usize) -> Result<EmbeddingReport> {
    Ok(EmbeddingReport::new(LtsDescriptor::P44(tau), diagonal_tangent(tau, n)?, 0.0))
}

/// Write `x` as `p/q` with `q <= max_den` within `tol`, by continued fractions.
fn rational_approx(x: f64, max_den: u64, tol: f64) -> Option<(u64, u64)> {
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a > 1e12 {
            break;
        }
        let a = a as u64;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        if (p1 as f64 / q1 as f64 - x).abs() <= tol {
            return Some((p1, q1));
        }
        let frac = r - a as f64;
        if frac <= 0.0 {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

/// Largest denominator accepted when reading `tan t` as a rational number.
/// Generic reals have approximations within `1e-12` only with larger denominators.
pub const PERIOD_MAX_DEN: u64 = 10_000;

/// Period of the geodesic in direction `cos t H+ + sin t H-`: `pi sqrt(l1^2 + l2^2)`
/// when `tan t = l1/l2` in lowest terms, `None` (not closed) otherwise.
pub fn geodesic_period(t: f64) -> Result<Option<f64>> {
    if !(-1e-12..=FRAC_PI_4 + 1e-12).contains(&t) {
        return Err(G2Error::Domain(format!("geodesic angle {t} outside [0, pi/4]")));
    }
    Ok(rational_approx(t.tan().max(0.0), PERIOD_MAX_DEN, 1e-12).map(|(l1, l2)| {
        let (a, b) = (l1 as f64, l2 as f64);
        PI * (a * a + b * b).sqrt()
    }))
}

/// Distance of the point `exp(s v)` from the base point, for `v = cos t H+ + sin t H-`.
pub fn return_defect(t: f64, s: f64, n: usize) -> Result<f64> {
    let frame = crate::cartan::standard_frame(n)?;
    let v = frame.h_plus.scale(t.cos()).add(&frame.h_minus.scale(t.sin()));
    Ok(geodesic_at(&v, s)?.distance_from_origin())
}

/// Diameter of the flat torus `R^2 / (pi Z)^2` spanned by `H+`, `H-`, computed
/// as the largest distance to the lattice over a grid of the fundamental domain.
pub fn maximal_torus_diameter(grid: usize) -> f64 {
    let mut best: f64 = 0.0;
    for a in 0..=grid {
        for b in 0..=grid {
            let (x, y) = (PI * a as f64 / grid as f64, PI * b as f64 / grid as f64);
            let d = [(0.0, 0.0), (PI, 0.0), (0.0, PI), (PI, PI)]
                .iter()
                .map(|(p, q)| ((x - p).powi(2) + (y - q).powi(2)).sqrt())
                .fold(f64::INFINITY, f64::min);
            best = best.max(d);
        }
    }
    best
}

// ---------------------------------------------------------------------------
// threefold alternating product of C^6

/// Index of the basis wedge `x_i ^ x_j ^ x_k` (`i < j < k`) among the 20.
fn triple_index() -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity(20);
    for i in 0..6 {
        for j in i + 1..6 {
            for k in j + 1..6 {
                out.push([i, j, k]);
            }
        }
    }
    out
}

fn pair_index() -> Vec<[usize; 2]> {
    let mut out = Vec::with_capacity(15);
    for i in 0..6 {
        for j in i + 1..6 {
            out.push([i, j]);
        }
    }
    out
}

fn det3(m: [[C; 3]; 3]) -> C {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// `u ^ v ^ w` in the orthonormal basis of wedges.
pub fn wedge3(u: &CVec, v: &CVec, w: &CVec) -> CVec {
    CVec::from_iterator(
        20,
        triple_index().into_iter().map(|[i, j, k]| {
            det3([[u[i], v[i], w[i]], [u[j], v[j], w[j]], [u[k], v[k], w[k]]])
        }),
    )
}

/// `u ^ v` as a 2-form.
pub fn wedge2(u: &CVec, v: &CVec) -> CVec {
    CVec::from_iterator(15, pair_index().into_iter().map(|[i, j]| u[i] * v[j] - u[j] * v[i]))
}

/// `w ^ alpha` for a vector `w` and a 2-form `alpha`.
pub fn wedge1_2(w: &CVec, alpha: &CVec) -> CVec {
    let pairs = pair_index();
    let at = |a: usize, b: usize| alpha[pairs.iter().position(|p| *p == [a, b]).expect("pair")];
    CVec::from_iterator(
        20,
        triple_index().into_iter().map(|[i, j, k]| w[i] * at(j, k) - w[j] * at(i, k) + w[k] * at(i, j)),
    )
}

/// The anti-unitary structure `tau(z) = J conj(z)` on `C^6`, with `tau(x_k) = x_{k+3}`.
pub fn tau(z: &CVec) -> CVec {
    CVec::from_fn(6, |r, _| if r < 3 { -z[r + 3].conj() } else { z[r - 3].conj() })
}

fn unit6(k: usize) -> CVec {
    CVec::from_fn(6, |r, _| if r == k { ONE } else { ZERO })
}

fn unit20(k: usize) -> CVec {
    CVec::from_fn(20, |r, _| if r == k { ONE } else { ZERO })
}

/// The induced map `f^(3)` on the wedge space, for complex-linear `f`.
pub fn induced3(f: &CMat) -> CMat {
    let cols: Vec<CVec> = triple_index()
        .into_iter()
        .map(|[i, j, k]| wedge3(&f.column(i).into(), &f.column(j).into(), &f.column(k).into()))
        .collect();
    CMat::from_columns(&cols)
}

/// The derivation `Phi_L(X)` induced on the wedge space.
pub fn derivation3(x: &CMat) -> CMat {
    let cols: Vec<CVec> = triple_index()
        .into_iter()
        .map(|[i, j, k]| {
            let (ei, ej, ek) = (unit6(i), unit6(j), unit6(k));
            let (xi, xj, xk): (CVec, CVec, CVec) = (x.column(i).into(), x.column(j).into(), x.column(k).into());
            wedge3(&xi, &ej, &ek) + wedge3(&ei, &xj, &ek) + wedge3(&ei, &ej, &xk)
        })
        .collect();
    CMat::from_columns(&cols)
}

/// `tau^(3)`, anti-linear: `tau3(sum c_I x_I) = sum conj(c_I) tau x_i ^ tau x_j ^ tau x_k`.
pub fn tau3(y: &CVec) -> CVec {
    let mut out = CVec::zeros(20);
    for (idx, [i, j, k]) in triple_index().into_iter().enumerate() {
        if y[idx] == ZERO {
            continue;
        }
        out += wedge3(&tau(&unit6(i)), &tau(&unit6(j)), &tau(&unit6(k))) * y[idx].conj();
    }
    out
}

fn cdot(a: &CVec, b: &CVec) -> C {
    a.dotc(b)
}

/// Modified Gram-Schmidt over C with re-orthogonalization.
fn c_orthonormalize(vs: &[CVec], tol: f64) -> Vec<CVec> {
    let scale = vs.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
    let mut out: Vec<CVec> = Vec::new();
    for v in vs {
        let mut r = v.clone();
        for _ in 0..2 {
            for u in &out {
                let c = cdot(u, &r);
                r -= u * c;
            }
        }
        let nr = r.norm();
        if nr > tol * scale {
            out.push(r / C::new(nr, 0.0));
        }
    }
    out
}

/// Orthonormal basis of `{y : A y = 0}` for a complex matrix.
fn c_null_space(a: &CMat, tol: f64) -> Vec<CVec> {
    let d = a.ncols();
    let m = if a.nrows() < d {
        let mut p = CMat::zeros(d, d);
        p.view_mut((0, 0), (a.nrows(), d)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("requested V^*");
    let top = svd.singular_values.iter().cloned().fold(0.0, f64::max).max(1.0);
    (0..d)
        .filter(|&k| svd.singular_values[k] <= tol * top)
        .map(|k| CVec::from_iterator(d, vt.row(k).iter().map(|z| z.conj())))
        .collect()
}

/// Orthonormal basis of the orthogonal complement of `span(vs)` inside `span(within)`.
fn c_complement(vs: &[CVec], within: &[CVec]) -> Vec<CVec> {
    let a = CMat::from_fn(vs.len(), within.len(), |r, c| cdot(&vs[r], &within[c]));
    let coefs = c_null_space(&a, 1e-9);
    let out: Vec<CVec> = coefs.iter().map(|y| combine(within, y)).collect();
    c_orthonormalize(&out, 1e-9)
}

fn combine(basis: &[CVec], coef: &CVec) -> CVec {
    basis.iter().zip(coef.iter()).fold(CVec::zeros(basis[0].len()), |acc, (b, c)| acc + b * *c)
}

/// Orthonormal basis of `span(a) ∩ span(b)` (both given orthonormal).
fn c_intersect(a: &[CVec], b: &[CVec]) -> Vec<CVec> {
    // residual of each a-vector against span(b)
    let cols: Vec<CVec> = a
        .iter()
        .map(|v| {
            let mut r = v.clone();
            for u in b {
                r -= u * cdot(u, v);
            }
            r
        })
        .collect();
    let m = CMat::from_columns(&cols);
    let coefs = c_null_space(&m, 1e-9);
    c_orthonormalize(&coefs.iter().map(|y| combine(a, y)).collect::<Vec<_>>(), 1e-9)
}

fn residual_in(v: &CVec, basis: &[CVec]) -> f64 {
    let mut r = v.clone();
    for u in basis {
        r -= u * cdot(u, v);
    }
    r.norm()
}

/// Quaternionic orthonormal basis (w.r.t. `v j = tau3(v)`) of a `tau3`-invariant
/// subspace given by a complex orthonormal basis.
fn quaternionic_basis(basis: &[CVec]) -> Vec<CVec> {
    let mut out: Vec<CVec> = Vec::new();
    let mut all: Vec<CVec> = Vec::new();
    for q in basis {
        let mut r = q.clone();
        for _ in 0..2 {
            for u in &all {
                let c = cdot(u, &r);
                r -= u * c;
            }
        }
        let nr = r.norm();
        if nr > 1e-6 {
            let u = r / C::new(nr, 0.0);
            all.push(tau3(&u));
            all.push(u.clone());
            out.push(u);
        }
    }
    out
}

/// Quaternion coordinate of `y` along the quaternionic unit vector `f`.
fn h_coordinate(f: &CVec, y: &CVec) -> Quaternion {
    let z = cdot(f, y);
    let w = cdot(&tau3(f), y).conj();
    Quaternion::new(z.re, z.im, w.re, w.im)
}

/// Anti-Hermitian matrices commuting with `tau`, as an orthonormal real basis.
fn sp3_basis() -> Vec<CMat> {
    let mut raw = Vec::new();
    for a in 0..6 {
        for b in a..6 {
            let mut e = CMat::zeros(6, 6);
            let mut f = CMat::zeros(6, 6);
            if a == b {
                e[(a, a)] = I;
                raw.push(e);
                continue;
            }
            e[(a, b)] = ONE;
            e[(b, a)] = -ONE;
            f[(a, b)] = I;
            f[(b, a)] = I;
            raw.push(e);
            raw.push(f);
        }
    }
    let j = tau_matrix();
    let projected: Vec<CMat> = raw.iter().map(|x| (x + &j * x.map(|z| z.conj()) * j.transpose()) * C::new(0.5, 0.0)).collect();
    real_orthonormal_matrices(&projected)
}

/// The real matrix `J` with `tau(z) = J conj(z)`.
fn tau_matrix() -> CMat {
    CMat::from_fn(6, 6, |r, c| {
        if r == c + 3 {
            ONE
        } else if c == r + 3 {
            -ONE
        } else {
            ZERO
        }
    })
}

fn flatten(m: &CMat) -> Vec<f64> {
    m.iter().flat_map(|z| [z.re, z.im]).collect()
}

fn unflatten(v: &[f64], rows: usize, cols: usize) -> CMat {
    CMat::from_iterator(rows, cols, v.chunks(2).map(|p| C::new(p[0], p[1])))
}

fn real_orthonormal_matrices(ms: &[CMat]) -> Vec<CMat> {
    let (r, c) = ms[0].shape();
    let flat: Vec<Vec<f64>> = ms.iter().map(flatten).collect();
    real::orthonormalize(&flat, 1e-9).iter().map(|v| unflatten(v, r, c)).collect()
}

/// A pseudorandom element of `Sp(W, tau)`.
fn random_sp3(rng: &mut ChaCha8Rng) -> CMat {
    let x = sp3_basis().into_iter().fold(CMat::zeros(6, 6), |acc, b| acc + b * C::new(rng.random_range(-1.0..1.0), 0.0));
    x.exp()
}

/// The wedge model: `W = C^6`, the symplectic basis `b_1, b_2, b_3` (columns
/// 0..3 of `frame`, with `tau b_k` in columns 3..6), and all derived spaces.
#[derive(Clone, Debug)]
pub struct WedgeSpace {
    /// Unitary matrix with columns `b1, b2, b3, tau b1, tau b2, tau b3`.
    pub frame: CMat,
    pub omega: CVec,
    pub eta: CVec,
    pub zeta: CVec,
    /// Complex orthonormal basis of `V = (W ^ omega)^perp` (14 vectors).
    pub v7: Vec<CVec>,
    /// Complex orthonormal basis of `U = W2 ^ eta` (4 vectors).
    pub u: Vec<CVec>,
    /// Complex orthonormal basis of the complement of `U` in `V` (10 vectors).
    pub u_perp: Vec<CVec>,
    /// `V ∩ L` (6 vectors).
    pub vc: Vec<CVec>,
    /// Real 5-dimensional `V^C ∩ real wedges ∩ zeta^perp`, as real-coefficient vectors.
    pub vr: Vec<CVec>,
    /// `U ∩ V^C` (2 vectors) and `U^C ∩ V^R` (2 vectors).
    pub uc: Vec<CVec>,
    pub ur: Vec<CVec>,
}

/// Dimension counts produced by [`build_wedge`].
#[derive(Clone, Debug, Serialize)]
pub struct WedgeDims {
    pub wedge3: usize,
    pub v7_complex: usize,
    pub v7_quaternionic: usize,
    pub u_quaternionic: usize,
    pub vc_complex: usize,
    pub vr_real: usize,
    pub uc_complex: usize,
    pub ur_real: usize,
}

impl WedgeSpace {
    fn b(&self, k: usize) -> CVec {
        self.frame.column(k).into()
    }

    pub fn dims(&self) -> WedgeDims {
        WedgeDims {
            wedge3: triple_index().len(),
            v7_complex: self.v7.len(),
            v7_quaternionic: quaternionic_basis(&self.v7).len(),
            u_quaternionic: quaternionic_basis(&self.u).len(),
            vc_complex: self.vc.len(),
            vr_real: self.vr.len(),
            uc_complex: self.uc.len(),
            ur_real: self.ur.len(),
        }
    }
}

/// `sum_k b_k ^ tau(b_k)` with signs.
fn symplectic_form(b: &[CVec], signs: &[f64]) -> CVec {
    b.iter().zip(signs).fold(CVec::zeros(15), |acc, (bk, s)| acc + wedge2(bk, &tau(bk)) * C::new(*s, 0.0))
}

/// `omega` from the symplectic basis `B x_1, B x_2, B x_3`.
pub fn omega_for(b: &CMat) -> CVec {
    let cols: Vec<CVec> = (0..3).map(|k| b.column(k).into()).collect();
    symplectic_form(&cols, &[1.0, 1.0, 1.0])
}

/// `eta` from a symplectic basis adapted to `W2 + W1`.
pub fn eta_for(b: &CMat) -> CVec {
    let cols: Vec<CVec> = (0..3).map(|k| b.column(k).into()).collect();
    symplectic_form(&cols, &[1.0, 1.0, -1.0])
}

fn zeta_for(b: &CMat) -> CVec {
    let c = |k: usize| -> CVec { b.column(k).into() };
    wedge3(&c(3), &c(1), &c(2)) + wedge3(&c(0), &c(4), &c(2)) + wedge3(&c(0), &c(1), &c(5))
}

/// Frame matrix `[b1 b2 b3 tau b1 tau b2 tau b3]` from `B in Sp(W, tau)`.
fn frame_from(b: &CMat) -> CMat {
    let cols: Vec<CVec> = (0..3).map(|k| b.column(k).into()).collect();
    let mut all = cols.clone();
    all.extend(cols.iter().map(tau));
    CMat::from_columns(&all)
}

/// Build the wedge model. Seed 0 uses the coordinate symplectic basis; other
/// seeds start from a pseudorandom symplectic basis.
pub fn build_wedge(seed: u64) -> Result<WedgeSpace> {
    let b = if seed == 0 {
        CMat::identity(6, 6)
    } else {
        random_sp3(&mut ChaCha8Rng::seed_from_u64(seed))
    };
    let frame = frame_from(&b);
    let omega = omega_for(&frame);
    let eta = eta_for(&frame);
    let zeta = zeta_for(&frame);
    let w_omega: Vec<CVec> = (0..6).map(|k| wedge1_2(&unit6(k), &omega)).collect();
    let all20: Vec<CVec> = (0..20).map(unit20).collect();
    let v7 = c_complement(&w_omega, &all20);
    let bcol = |k: usize| -> CVec { frame.column(k).into() };
    let w2 = [0, 1, 3, 4];
    let u = c_orthonormalize(&w2.iter().map(|&k| wedge1_2(&bcol(k), &eta)).collect::<Vec<_>>(), 1e-9);
    let u_perp = c_complement(&u, &v7);

    let mut l = Vec::new();
    for nu in 0..3 {
        let tb = bcol(3 + nu);
        l.push(wedge3(&tb, &bcol(1), &bcol(2)));
        l.push(wedge3(&bcol(0), &tb, &bcol(2)));
        l.push(wedge3(&bcol(0), &bcol(1), &tb));
    }
    let l = c_orthonormalize(&l, 1e-9);
    let vc = c_intersect(&v7, &l);
    let uc = c_intersect(&u, &vc);

    // real form: coefficients in the frame wedge basis are real
    let fwedges = induced3(&frame);
    let fw: Vec<CVec> = (0..20).map(|k| fwedges.column(k).into()).collect();
    let real_vc = real_part_subspace(&vc, &fw);
    let zn = zeta.norm();
    let zhat = &zeta / C::new(zn, 0.0);
    let vr: Vec<CVec> = {
        let proj: Vec<CVec> = real_vc.iter().map(|v| v - &zhat * cdot(&zhat, v)).collect();
        real_orthonormalize(&proj)
    };
    let ur = real_intersect(&real_span_of_complex(&uc), &vr);
    let ws = WedgeSpace { frame, omega, eta, zeta, v7, u, u_perp, vc, vr, uc, ur };
    let d = ws.dims();
    let expect = [(d.v7_complex, 14, "V"), (d.u_quaternionic, 2, "U"), (d.vc_complex, 6, "V^C"), (d.vr_real, 5, "V^R"), (d.uc_complex, 2, "U^C"), (d.ur_real, 2, "U^R")];
    for (got, want, what) in expect {
        if got != want {
            return Err(G2Error::Construction(format!("dim {what} = {got}, expected {want}")));
        }
    }
    Ok(ws)
}

/// Real orthonormalization of complex vectors (real inner product `Re <a, b>`).
fn real_orthonormalize(vs: &[CVec]) -> Vec<CVec> {
    let flat: Vec<Vec<f64>> = vs.iter().map(|v| v.iter().flat_map(|z| [z.re, z.im]).collect()).collect();
    real::orthonormalize(&flat, 1e-9)
        .iter()
        .map(|r| CVec::from_iterator(r.len() / 2, r.chunks(2).map(|p| C::new(p[0], p[1]))))
        .collect()
}

fn real_span_of_complex(vs: &[CVec]) -> Vec<CVec> {
    let mut out = Vec::new();
    for v in vs {
        out.push(v.clone());
        out.push(v * I);
    }
    real_orthonormalize(&out)
}

/// Real subspace of `span_C(vs)` whose coordinates in the orthonormal basis `fw` are real.
fn real_part_subspace(vs: &[CVec], fw: &[CVec]) -> Vec<CVec> {
    let gens = real_span_of_complex(vs);
    let m = DMatrix::from_fn(fw.len(), gens.len(), |r, c| cdot(&fw[r], &gens[c]).im);
    let coefs = real::null_space(&m, 1e-9);
    let vs: Vec<CVec> = coefs
        .iter()
        .map(|y| gens.iter().zip(y).fold(CVec::zeros(20), |acc, (g, c)| acc + g * C::new(*c, 0.0)))
        .collect();
    real_orthonormalize(&vs)
}

/// Real intersection of two real subspaces of `C^20` given by real-orthonormal bases.
fn real_intersect(a: &[CVec], b: &[CVec]) -> Vec<CVec> {
    let rdot = |x: &CVec, y: &CVec| cdot(x, y).re;
    let cols: Vec<Vec<f64>> = a
        .iter()
        .map(|v| {
            let mut r = v.clone();
            for u in b {
                r -= u * C::new(rdot(u, v), 0.0);
            }
            r.iter().flat_map(|z| [z.re, z.im]).collect()
        })
        .collect();
    let m = DMatrix::from_fn(cols[0].len(), cols.len(), |r, c| cols[c][r]);
    let coefs = real::null_space(&m, 1e-9);
    let vs: Vec<CVec> = coefs
        .iter()
        .map(|y| a.iter().zip(y).fold(CVec::zeros(20), |acc, (g, c)| acc + g * C::new(*c, 0.0)))
        .collect();
    real_orthonormalize(&vs)
}

/// Block projector onto `W2 = span{b1, b2, tau b1, tau b2}`.
fn w2_projector(ws: &WedgeSpace) -> CMat {
    [0, 1, 3, 4].iter().fold(CMat::zeros(6, 6), |acc, &k| {
        let b = ws.b(k);
        acc + &b * b.adjoint()
    })
}

/// Killing-orthogonal complement of `sp(W, tau)_{2,1}`: the 8 real dimensions
/// of `X` with `X(W2) ⊂ W1` and `X(W1) ⊂ W2`.
pub fn isotropy_complement(ws: &WedgeSpace) -> Vec<CMat> {
    let p2 = w2_projector(ws);
    let p1 = CMat::identity(6, 6) - &p2;
    let off: Vec<CMat> = sp3_basis().iter().map(|x| &p2 * x * &p1 + &p1 * x * &p2).collect();
    real_orthonormal_matrices(&off)
}

/// Tangent vectors at `U` of the `Sp(3)` orbit in `G2(V)`, as a subspace of the
/// model tangent space with `n = 5`.
pub fn sp3_orbit_tangent(ws: &WedgeSpace) -> Result<EmbeddingReport> {
    let m = isotropy_complement(ws);
    if m.len() != 8 {
        return Err(G2Error::Construction(format!("isotropy complement has dimension {}", m.len())));
    }
    let uq = quaternionic_basis(&ws.u);
    let fq = quaternionic_basis(&ws.u_perp);
    let mut worst: f64 = 0.0;
    let mut vs = Vec::new();
    for x in &m {
        let phi = derivation3(x);
        let mut cols = [QVector::zeros(fq.len()), QVector::zeros(fq.len())];
        for (c, u) in uq.iter().enumerate() {
            let y = &phi * u;
            worst = worst.max(residual_in(&y, &ws.u_perp) / y.norm().max(1.0));
            cols[c] = QVector(fq.iter().map(|f| h_coordinate(f, &y)).collect());
        }
        let [c0, c1] = cols;
        vs.push(TangentVector::from_cols(c0, c1)?);
    }
    // Phi_L(X) must also carry the complement back into U
    for x in &m {
        let phi = derivation3(x);
        for f in &ws.u_perp {
            let y = &phi * f;
            worst = worst.max(residual_in(&y, &ws.u) / y.norm().max(1.0));
        }
    }
    if worst > 1e-9 {
        return Err(G2Error::Construction(format!("Phi_L(m) leaves the Cartan complement (residual {worst:.3e})")));
    }
    let tangent = RealSubspace::span(fq.len(), &vs)?;
    Ok(EmbeddingReport::new(LtsDescriptor::P12(HpType::Quaternionic(2)), tangent, worst))
}

/// Tangent vectors of an orbit inside a complex Grassmannian `G2(span(ambient))`
/// at `span(base)`; `gens` are the generating endomorphisms of `C^6`.
fn complex_orbit(gens: &[CMat], base: &[CVec], ambient: &[CVec], real_entries: bool) -> Result<(RealSubspace, f64)> {
    let comp = if real_entries { real_complement(base, ambient) } else { c_complement(base, ambient) };
    let n = comp.len();
    let mut worst: f64 = 0.0;
    let mut vs = Vec::new();
    for g in gens {
        let phi = derivation3(g);
        let mut cols = [QVector::zeros(n), QVector::zeros(n)];
        for (c, u) in base.iter().enumerate() {
            let y = &phi * u;
            worst = worst.max(residual_in(&y, &comp) / y.norm().max(1.0));
            cols[c] = QVector(
                comp.iter()
                    .map(|f| {
                        let z = cdot(f, &y);
                        if real_entries {
                            worst = worst.max(z.im.abs());
                            Quaternion::real(z.re)
                        } else {
                            Quaternion::new(z.re, z.im, 0.0, 0.0)
                        }
                    })
                    .collect(),
            );
        }
        let [c0, c1] = cols;
        vs.push(TangentVector::from_cols(c0, c1)?);
    }
    Ok((RealSubspace::span(n, &vs)?, worst))
}

fn real_complement(base: &[CVec], ambient: &[CVec]) -> Vec<CVec> {
    let proj: Vec<CVec> = ambient
        .iter()
        .map(|v| {
            let mut r = v.clone();
            for u in base {
                r -= u * C::new(cdot(u, v).re, 0.0);
            }
            r
        })
        .collect();
    real_orthonormalize(&proj)
}

/// `su(3)` generators on `W^C = span{b1, b2, b3}` mixing `{b1, b2}` with `b3`,
/// extended to `W` so that they commute with `tau`; `real` keeps only `so(3)`.
fn off_block_generators(ws: &WedgeSpace, real: bool) -> Vec<CMat> {
    let mut out = Vec::new();
    for a in 0..2 {
        let mut gens = vec![{
            let mut x = CMat::zeros(3, 3);
            x[(a, 2)] = ONE;
            x[(2, a)] = -ONE;
            x
        }];
        if !real {
            let mut x = CMat::zeros(3, 3);
            x[(a, 2)] = I;
            x[(2, a)] = I;
            gens.push(x);
        }
        for x in gens {
            let mut big = CMat::zeros(6, 6);
            big.view_mut((0, 0), (3, 3)).copy_from(&x);
            big.view_mut((3, 3), (3, 3)).copy_from(&x.map(|z| z.conj()));
            out.push(&ws.frame * big * ws.frame.adjoint());
        }
    }
    out
}

/// The `SU(3)` orbit through `U^C` in `G2(V^C)`: type `P12(C2)` with `n = 4`.
pub fn complex_restriction(ws: &WedgeSpace) -> Result<EmbeddingReport> {
    let gens = off_block_generators(ws, false);
    let (tangent, mut worst) = complex_orbit(&gens, &ws.uc, &ws.vc, false)?;
    for g in &gens {
        let phi = derivation3(g);
        for v in &ws.vc {
            worst = worst.max(residual_in(&(&phi * v), &ws.vc));
        }
    }
    Ok(EmbeddingReport::new(LtsDescriptor::P12(HpType::Complex(2)), tangent, worst))
}

/// The `SO(3)` orbit through `U^R` in `G2(V^R)`: type `P12(R2)` with `n = 3`.
pub fn real_restriction(ws: &WedgeSpace) -> Result<EmbeddingReport> {
    let gens = off_block_generators(ws, true);
    let (tangent, worst) = complex_orbit(&gens, &ws.ur, &ws.vr, true)?;
    Ok(EmbeddingReport::new(LtsDescriptor::P12(HpType::Real(2)), tangent, worst))
}

/// Largest `|B^(2) omega - omega|` over pseudorandom `B in Sp(W, tau)`.
pub fn omega_invariance(ws: &WedgeSpace, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let b = random_sp3(&mut rng) * &ws.frame;
            (omega_for(&b) - &ws.omega).norm()
        })
        .fold(0.0, f64::max)
}

/// Largest change of `eta` under pseudorandom `B in Sp(W2) x Sp(W1)`.
pub fn eta_invariance(ws: &WedgeSpace, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p2 = w2_projector(ws);
    let p1 = CMat::identity(6, 6) - &p2;
    let block: Vec<CMat> = sp3_basis().iter().map(|x| &p2 * x * &p2 + &p1 * x * &p1).collect();
    let block = real_orthonormal_matrices(&block);
    (0..samples)
        .map(|_| {
            let x = block.iter().fold(CMat::zeros(6, 6), |acc, b| acc + b * C::new(rng.random_range(-1.0..1.0), 0.0));
            let b = x.exp() * &ws.frame;
            (eta_for(&b) - &ws.eta).norm()
        })
        .fold(0.0, f64::max)
}

/// Largest `|B^(3) zeta - zeta|` over pseudorandom rotations of `W^R`.
pub fn zeta_invariance(ws: &WedgeSpace, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let mut x = CMat::zeros(6, 6);
            for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                let t: f64 = rng.random_range(-2.0..2.0);
                for off in [0, 3] {
                    x[(a + off, b + off)] += C::new(t, 0.0);
                    x[(b + off, a + off)] -= C::new(t, 0.0);
                }
            }
            let rot = &ws.frame * x.exp() * ws.frame.adjoint();
            (induced3(&rot) * &ws.zeta - &ws.zeta).norm()
        })
        .fold(0.0, f64::max)
}

/// Largest deviation between `derivation3(X)` and the Leibniz expansion on random wedges.
pub fn leibniz_defect(samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = sp3_basis();
    let rv = |rng: &mut ChaCha8Rng| CVec::from_fn(6, |_, _| C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let x = basis.iter().fold(CMat::zeros(6, 6), |acc, b| acc + b * C::new(rng.random_range(-1.0..1.0), 0.0));
        let (a, b, c) = (rv(&mut rng), rv(&mut rng), rv(&mut rng));
        let lhs = derivation3(&x) * wedge3(&a, &b, &c);
        let rhs = wedge3(&(&x * &a), &b, &c) + wedge3(&a, &(&x * &b), &c) + wedge3(&a, &b, &(&x * &c));
        worst = worst.max((lhs - rhs).norm());
    }
    worst
}

// ---------------------------------------------------------------------------
// centrosome

/// Result of [`centrosome_check`].
#[derive(Clone, Debug, Serialize)]
pub struct CentrosomeReport {
    /// Distance of `exp(pi/4 v) V'` from the center `U'`, and of `exp(pi/2 v) V'` from the pole.
    pub midpoint_defect: f64,
    pub pole_defect: f64,
    pub orbit: EmbeddingReport,
}

/// Orbit of `K = Sp(2) x Sp(2)` through the center point between `V'` and its
/// pole in `G2(H^4)`, transported back to the base point.
pub fn centrosome_check(n: usize) -> Result<CentrosomeReport> {
    if n != 2 {
        return Err(G2Error::Domain(format!("the centrosome check is set in G2(H^4), got n = {n}")));
    }
    // the geodesic towards the pole along v: e_a -> f_a
    let v = TangentVector::elementary(2, 0, 0, Quaternion::ONE).add(&TangentVector::elementary(2, 1, 1, Quaternion::ONE));
    let s = FRAC_1_SQRT_2;
    let q = |x: f64| Quaternion::real(x);
    let center = Plane::new(
        QVector(vec![q(s), q(0.0), q(s), q(0.0)]),
        QVector(vec![q(0.0), q(s), q(0.0), q(s)]),
    )?;
    let pole = Plane::new(
        QVector(vec![q(0.0), q(0.0), q(1.0), q(0.0)]),
        QVector(vec![q(0.0), q(0.0), q(0.0), q(1.0)]),
    )?;
    let midpoint_defect = plane_distance(&geodesic_at(&v, FRAC_PI_4)?, &center)?;
    let pole_defect = plane_distance(&geodesic_at(&v, 2.0 * FRAC_PI_4)?, &pole)?;

    // g = exp(pi/4 [[0, -v*], [v, 0]]) carries V' to U'
    let c = FRAC_PI_4.cos();
    let mut g = QMatrix::zeros(4, 4);
    for a in 0..2 {
        g[(a, a)] = q(c);
        g[(a + 2, a + 2)] = q(c);
        g[(a + 2, a)] = q(c);
        g[(a, a + 2)] = q(-c);
    }
    let g_inv = g.adjoint();
    let mut vs = Vec::new();
    for block in 0..2 {
        for x in sp2_basis() {
            let mut y = QMatrix::zeros(4, 4);
            for r in 0..2 {
                for cc in 0..2 {
                    y[(2 * block + r, 2 * block + cc)] = x[(r, cc)];
                }
            }
            let pulled = &(&g_inv * &y) * &g;
            let mut t = QMatrix::zeros(2, 2);
            for r in 0..2 {
                for cc in 0..2 {
                    t[(r, cc)] = pulled[(2 + r, cc)];
                }
            }
            vs.push(TangentVector::from_matrix(&t)?);
        }
    }
    let tangent = RealSubspace::span(2, &vs)?;
    Ok(CentrosomeReport { midpoint_defect, pole_defect, orbit: EmbeddingReport::new(LtsDescriptor::Sp2, tangent, 0.0) })
}

/// Real basis of the quaternionic skew-Hermitian 2x2 matrices.
fn sp2_basis() -> Vec<QMatrix> {
    let mut out = Vec::new();
    for k in 0..2 {
        for c in [Quaternion::I, Quaternion::J, Quaternion::K] {
            let mut x = QMatrix::zeros(2, 2);
            x[(k, k)] = c;
            out.push(x);
        }
    }
    for c in Quaternion::BASIS {
        let mut x = QMatrix::zeros(2, 2);
        x[(0, 1)] = c;
        x[(1, 0)] = -c.conj();
        out.push(x);
    }
    out
}

/// Operator-norm style distance between two quaternionic planes: the largest
/// residual of one orthonormal basis against the other.
fn plane_distance(p: &Plane, q: &Plane) -> Result<f64> {
    let [q0, q1] = q.basis();
    let mut worst: f64 = 0.0;
    for x in p.basis() {
        let r = x.sub(&q0.right_mul(q0.dot(x))).sub(&q1.right_mul(q1.dot(x)));
        worst = worst.max(r.norm());
    }
    if p.n() != q.n() {
        return Err(G2Error::Shape("planes in different ambient spaces".into()));
    }
    Ok(worst)
}
