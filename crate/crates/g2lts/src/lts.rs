//! Real subspaces of `m` as candidate Lie triple systems: closure, rank,
//! restricted roots, characteristic angle spectra and curvature sampling.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cartan::{canonical_representation, char_angle, full_basis, jacobi_eigen, root_sharp, root_space_basis, Frame, RootLabel};
use crate::error::{domain, shape, G2Error, Result};
use crate::model::{bracket_mm, curvature, inner, sectional_curvature, IsotropyElement, TangentVector};
use crate::qlinalg::{rank_h, DEFAULT_TOL};
use crate::quat::QMatrix;
use crate::real;

/// An R-subspace of `m` given by an orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct RealSubspace {
    n: usize,
    basis: Vec<TangentVector>,
}

#[derive(Serialize, Deserialize)]
struct RealSubspaceJson {
    n: usize,
    basis: Vec<TangentVector>,
}

impl Serialize for RealSubspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RealSubspaceJson { n: self.n, basis: self.basis.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RealSubspace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = RealSubspaceJson::deserialize(d)?;
        RealSubspace::new(j.n, j.basis).map_err(serde::de::Error::custom)
    }
}

impl RealSubspace {
    /// Wrap an orthonormal basis; the Gram matrix must be the identity to `1e-10`.
    pub fn new(n: usize, basis: Vec<TangentVector>) -> Result<Self> {
        if basis.iter().any(|b| b.n() != n) {
            return Err(shape("basis vectors disagree with n"));
        }
        for (i, u) in basis.iter().enumerate() {
            for (j, v) in basis.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                let g = inner(u, v);
                if (g - target).abs() > 1e-10 {
                    return Err(G2Error::Validation(format!(
                        "basis not orthonormal: <b{i}, b{j}> = {g:.3e}"
                    )));
                }
            }
        }
        Ok(RealSubspace { n, basis })
    }

    /// Orthonormalize a spanning family (dependent vectors are dropped).
    pub fn span(n: usize, vectors: &[TangentVector]) -> Result<Self> {
        if vectors.iter().any(|b| b.n() != n) {
            return Err(shape("spanning vectors disagree with n"));
        }
        let reals: Vec<Vec<f64>> = vectors.iter().map(|v| v.to_real()).collect();
        let ortho = real::orthonormalize(&reals, 1e-9);
        Ok(RealSubspace { n, basis: ortho.iter().map(|r| TangentVector::from_real(n, r)).collect() })
    }

    /// All of `m`.
    pub fn whole(n: usize) -> Self {
        RealSubspace { n, basis: full_basis(n) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[TangentVector] {
        &self.basis
    }

    pub(crate) fn real_basis(&self) -> Vec<Vec<f64>> {
        self.basis.iter().map(|b| b.to_real()).collect()
    }

    /// Image under an isotropy element.
    pub fn transform(&self, g: &IsotropyElement) -> Result<Self> {
        if g.n() != self.n {
            return Err(shape("isotropy element and subspace disagree on n"));
        }
        let moved: Vec<TangentVector> = self.basis.iter().map(|b| g.act_unchecked(b)).collect();
        // re-orthonormalize to wash out round-off from the action
        RealSubspace::span(self.n, &moved)
    }

    /// Distance from `v` to the subspace.
    pub fn residual(&self, v: &TangentVector) -> f64 {
        real::residual(&v.to_real(), &self.real_basis())
    }

    /// The sum of two subspaces.
    pub fn sum(&self, o: &RealSubspace) -> Result<RealSubspace> {
        if self.n != o.n {
            return Err(shape("subspaces disagree on n"));
        }
        let mut all = self.basis.clone();
        all.extend(o.basis.iter().cloned());
        RealSubspace::span(self.n, &all)
    }

    /// The intersection of two subspaces.
    pub fn intersect(&self, o: &RealSubspace) -> Result<RealSubspace> {
        if self.n != o.n {
            return Err(shape("subspaces disagree on n"));
        }
        if self.basis.is_empty() {
            return Ok(self.clone());
        }
        let ob = o.real_basis();
        let cols: Vec<Vec<f64>> = self
            .real_basis()
            .iter()
            .map(|b| {
                let p = real::project(b, &ob);
                b.iter().zip(&p).map(|(x, y)| x - y).collect()
            })
            .collect();
        let m = DMatrix::from_fn(8 * self.n, cols.len(), |r, c| cols[c][r]);
        let null = real::null_space(&m, 1e-8);
        let vecs: Vec<TangentVector> = null
            .iter()
            .map(|coef| {
                let mut v = TangentVector::zeros(self.n);
                for (c, b) in coef.iter().zip(&self.basis) {
                    v = b.axpy(*c, &v);
                }
                v
            })
            .collect();
        RealSubspace::span(self.n, &vecs)
    }
}

/// `T` is contained in `S` (projection residuals at most `1e-8`).
pub fn contains(s: &RealSubspace, t: &RealSubspace) -> bool {
    contains_tol(s, t, DEFAULT_TOL)
}

pub fn contains_tol(s: &RealSubspace, t: &RealSubspace, tol: f64) -> bool {
    if s.n != t.n {
        return false;
    }
    let sb = s.real_basis();
    t.basis.iter().all(|v| real::residual(&v.to_real(), &sb) <= tol)
}

pub fn equal(s: &RealSubspace, t: &RealSubspace) -> bool {
    s.dim() == t.dim() && contains(s, t)
}

/// Orthogonal projection of `v` onto `S`.
pub fn orthoproject(v: &TangentVector, s: &RealSubspace) -> Result<TangentVector> {
    if v.n() != s.n {
        return Err(shape("vector and subspace disagree on n"));
    }
    Ok(crate::cartan::project_onto(&s.basis, v))
}

/// The orthogonal complement of `T` inside `S`.
pub fn orthocomplement_in(s: &RealSubspace, t: &RealSubspace) -> Result<RealSubspace> {
    if s.n != t.n {
        return Err(shape("subspaces disagree on n"));
    }
    let tb = t.real_basis();
    let rest: Vec<TangentVector> = s
        .real_basis()
        .iter()
        .map(|b| {
            let p = real::project(b, &tb);
            TangentVector::from_real(s.n, &b.iter().zip(&p).map(|(x, y)| x - y).collect::<Vec<_>>())
        })
        .collect();
    // drop the directions belonging to T, which are numerically tiny
    let reals: Vec<Vec<f64>> = rest.iter().map(|v| v.to_real()).collect();
    let ortho = real::orthonormalize(&reals, 1e-7);
    let out = RealSubspace { n: s.n, basis: ortho.iter().map(|r| TangentVector::from_real(s.n, r)).collect() };
    if out.dim() + t.dim() != s.dim() {
        return Err(G2Error::Degenerate("T is not contained in S".into()));
    }
    Ok(out)
}

/// Closure under the curvature tensor. Returns `(closed, worst residual)`, where
/// each residual is the distance of `R(u,v)w` from `S` divided by
/// `max(|R(u,v)w|, 1)`.
pub fn is_lts(s: &RealSubspace, tol: f64) -> (bool, f64) {
    let rb = s.real_basis();
    let b = &s.basis;
    let d = b.len();
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in (i + 1)..d {
            for w in b {
                let r = curvature(&b[i], &b[j], w);
                let rr = r.to_real();
                let size = real::norm(&rr);
                if size == 0.0 {
                    continue;
                }
                let res = real::residual(&rr, &rb) / size.max(1.0);
                worst = worst.max(res);
            }
        }
    }
    (worst <= tol, worst)
}

/// A deterministic "generic" unit vector of `S`.
fn generic_vector(s: &RealSubspace, variant: usize) -> TangentVector {
    let d = s.dim() as f64;
    let mut h = TangentVector::zeros(s.n);
    for (k, b) in s.basis.iter().enumerate() {
        let k1 = (k + 1) as f64;
        let c = match variant {
            0 => k1 / d,
            1 => (1.3 * k1 + 0.7).sin() + 0.05 * k1,
            _ => (k1 * k1 * 0.37).cos() + 1.1 / k1,
        };
        h = b.axpy(c, &h);
    }
    h.scale(1.0 / h.norm())
}

/// Orthonormal coefficient vectors of the kernel of `v -> [h, v]` on `S`.
fn centralizer(s: &RealSubspace, h: &TangentVector) -> Vec<TangentVector> {
    let cols: Vec<Vec<f64>> = s
        .basis
        .iter()
        .map(|b| {
            let k = bracket_mm(h, b);
            let mut r: Vec<f64> = k.x1.entries().iter().flat_map(|q| q.to_array()).collect();
            r.extend(k.x2.entries().iter().flat_map(|q| q.to_array()));
            r
        })
        .collect();
    if cols.is_empty() {
        return Vec::new();
    }
    let m = DMatrix::from_fn(cols[0].len(), cols.len(), |r, c| cols[c][r]);
    real::null_space(&m, 1e-7)
        .iter()
        .map(|coef| {
            let mut v = TangentVector::zeros(s.n);
            for (c, b) in coef.iter().zip(&s.basis) {
                v = b.axpy(*c, &v);
            }
            v
        })
        .collect()
}

/// A Cartan subalgebra of `S` (the centralizer of a generic element), as an orthonormal basis.
pub fn cartan_of(s: &RealSubspace) -> Result<Vec<TangentVector>> {
    if s.dim() == 0 {
        return Err(domain("empty subspace has no Cartan subalgebra"));
    }
    let c0 = centralizer(s, &generic_vector(s, 0));
    let c1 = centralizer(s, &generic_vector(s, 1));
    let best = if c0.len() == c1.len() {
        c0
    } else {
        let c2 = centralizer(s, &generic_vector(s, 2));
        let m = c0.len().min(c1.len());
        if c2.len() != m {
            return Err(G2Error::Unstable(format!(
                "centralizer dimensions {}, {}, {} disagree",
                c0.len(),
                c1.len(),
                c2.len()
            )));
        }
        c2
    };
    if best.is_empty() || best.len() > 2 {
        return Err(G2Error::Unstable(format!("centralizer of dimension {}", best.len())));
    }
    let sp = RealSubspace::span(s.n, &best)?;
    Ok(sp.basis)
}

/// Rank of a Lie triple system (1 or 2).
pub fn rank_of(s: &RealSubspace) -> Result<usize> {
    let (ok, res) = is_lts(s, 1e-8);
    if !ok {
        return Err(domain(format!("rank of a non Lie triple system (residual {res:.3e})")));
    }
    Ok(cartan_of(s)?.len())
}

/// An ambient root with a sign, i.e. an element of `Delta(m, a)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedRoot {
    pub label: RootLabel,
    pub sign: i8,
}

impl Serialize for RootLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for RootLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        RootLabel::ALL
            .iter()
            .copied()
            .find(|l| l.name() == s)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown root label {s}")))
    }
}

/// A positive restricted root of `(S, a')` evaluated on the chosen unit vector of `a'`.
#[derive(Clone, Debug, Serialize)]
pub struct RestrictedRootDatum {
    pub value: f64,
    pub multiplicity: usize,
    pub elementary: bool,
    /// Ambient roots restricting to this one.
    pub ambient: Vec<SignedRoot>,
    /// Distance of the restricted root space from the sum of the ambient root spaces.
    pub space_residual: f64,
    /// `dim((sum of ambient root spaces) ∩ S) - multiplicity`.
    pub dim_defect: i64,
    /// For elementary roots of rank 1 systems: distance of the Riesz vector from `a'`.
    pub riesz_residual: Option<f64>,
    /// For composite roots with exactly two ambient roots `lambda, mu`: the
    /// coefficients `(a, b)` of the Riesz vector and the worst deviation of the
    /// component norm fractions from them.
    pub split: Option<(f64, f64, f64)>,
}

/// Restricted root data together with the Cartan data used.
#[derive(Clone, Debug, Serialize)]
pub struct RestrictedRoots {
    pub rank: usize,
    /// Unit vector of `a'` at which the roots are evaluated.
    #[serde(skip)]
    pub h: TangentVector,
    #[serde(skip)]
    pub frame: Frame,
    /// Coordinates of `h` with respect to `H+`, `H-` of the frame.
    pub h_coords: (f64, f64),
    /// Distance of `a'` from the Cartan subalgebra of the frame.
    pub cartan_residual: f64,
    pub roots: Vec<RestrictedRootDatum>,
}

const ROOT_MATCH_TOL: f64 = 1e-6;

fn signed_values(a: f64, b: f64) -> Vec<(SignedRoot, f64)> {
    RootLabel::ALL
        .iter()
        .flat_map(|&l| {
            let v = l.eval(a, b);
            [(SignedRoot { label: l, sign: 1 }, v), (SignedRoot { label: l, sign: -1 }, -v)]
        })
        .collect()
}

/// Pick a unit `h` in `a'` (rank 2: well away from all root walls).
pub(crate) fn choose_h(cartan: &[TangentVector]) -> Result<TangentVector> {
    if cartan.len() == 1 {
        return Ok(cartan[0].clone());
    }
    let mut best: Option<(f64, TangentVector)> = None;
    for k in 0..24 {
        let t = 0.1 + k as f64 * std::f64::consts::PI / 24.0;
        let h = cartan[0].scale(t.cos()).add(&cartan[1].scale(t.sin()));
        let phi = char_angle(&h)?;
        let (a, b) = (phi.cos(), phi.sin());
        let mut vals: Vec<f64> = RootLabel::ALL.iter().map(|l| l.eval(a, b).abs()).collect();
        vals.sort_by(f64::total_cmp);
        let gap = vals.windows(2).map(|w| w[1] - w[0]).fold(vals[0], f64::min);
        if best.as_ref().is_none_or(|(g, _)| gap > *g) {
            best = Some((gap, h));
        }
    }
    Ok(best.expect("non-empty grid").1)
}

/// Restricted roots of a Lie triple system.
pub fn restricted_roots(s: &RealSubspace) -> Result<RestrictedRoots> {
    let (ok, res) = is_lts(s, 1e-8);
    if !ok {
        return Err(domain(format!("restricted roots of a non Lie triple system (residual {res:.3e})")));
    }
    let cartan = cartan_of(s)?;
    let rank = cartan.len();
    let h = choose_h(&cartan)?;
    let canon = canonical_representation(&h)?;
    let frame = canon.frame;
    let (a, b) = (canon.norm * canon.phi.cos(), canon.norm * canon.phi.sin());
    let ambient_cartan = frame.cartan_basis();
    let ac_real: Vec<Vec<f64>> = ambient_cartan.iter().map(|v| v.to_real()).collect();
    let cartan_residual = cartan.iter().map(|c| real::residual(&c.to_real(), &ac_real)).fold(0.0, f64::max);
    let values = signed_values(a, b);
    let s_real = s.real_basis();

    let mut roots = Vec::new();
    for (mu, vecs) in jacobi_eigen(&h, &s.basis) {
        if mu.abs() <= ROOT_MATCH_TOL {
            continue;
        }
        let alpha = mu.max(0.0).sqrt();
        let ambient: Vec<SignedRoot> =
            values.iter().filter(|(_, v)| (v - alpha).abs() <= ROOT_MATCH_TOL).map(|(r, _)| *r).collect();
        let mut spaces: Vec<Vec<f64>> = Vec::new();
        let mut by_root: Vec<Vec<Vec<f64>>> = Vec::new();
        for r in &ambient {
            let rb: Vec<Vec<f64>> = root_space_basis(&frame, r.label).iter().map(|v| v.to_real()).collect();
            spaces.extend(rb.iter().cloned());
            by_root.push(rb);
        }
        let space_residual = vecs
            .iter()
            .map(|v| real::residual(&v.to_real(), &spaces))
            .fold(if ambient.is_empty() { f64::INFINITY } else { 0.0 }, f64::max);
        // dimension of (sum of root spaces) ∩ S
        let inter_dim = if spaces.is_empty() {
            0
        } else {
            let cols: Vec<Vec<f64>> = s_real
                .iter()
                .map(|bv| {
                    let p = real::project(bv, &spaces);
                    bv.iter().zip(&p).map(|(x, y)| x - y).collect()
                })
                .collect();
            let m = DMatrix::from_fn(cols[0].len(), cols.len(), |r, c| cols[c][r]);
            real::null_space(&m, 1e-7).len()
        };
        let elementary = ambient.len() == 1;
        let riesz_residual = if elementary && rank == 1 {
            let sharp = root_sharp(ambient[0].label, &frame).scale(ambient[0].sign as f64);
            let cr: Vec<Vec<f64>> = cartan.iter().map(|c| c.to_real()).collect();
            Some(real::residual(&sharp.to_real(), &cr) / sharp.norm())
        } else {
            None
        };
        let split = if ambient.len() == 2 && rank == 1 {
            // alpha^# = alpha(h) h = a lambda^# + b mu^#, solved in the frame coordinates
            let (p1, q1) = ambient[0].label.coefficients();
            let (p2, q2) = ambient[1].label.coefficients();
            let (s1, s2) = (ambient[0].sign as f64, ambient[1].sign as f64);
            let (x1, y1) = (s1 * p1 as f64, s1 * q1 as f64);
            let (x2, y2) = (s2 * p2 as f64, s2 * q2 as f64);
            let (tx, ty) = (alpha * a / canon.norm, alpha * b / canon.norm);
            let det = x1 * y2 - x2 * y1;
            if det.abs() > 1e-12 {
                let ca = (tx * y2 - ty * x2) / det;
                let cb = (x1 * ty - y1 * tx) / det;
                let dev = vecs
                    .iter()
                    .map(|v| {
                        let vr = v.to_real();
                        let tot = real::dot(&vr, &vr);
                        let pa = real::project(&vr, &by_root[0]);
                        (real::dot(&pa, &pa) / tot - ca / (ca + cb)).abs()
                    })
                    .fold(0.0, f64::max);
                Some((ca, cb, dev))
            } else {
                None
            }
        } else {
            None
        };
        roots.push(RestrictedRootDatum {
            value: alpha,
            multiplicity: vecs.len(),
            elementary,
            ambient,
            space_residual,
            dim_defect: inter_dim as i64 - vecs.len() as i64,
            riesz_residual,
            split,
        });
    }
    Ok(RestrictedRoots { rank, h, frame, h_coords: (a, b), cartan_residual, roots })
}

fn random_unit(s: &RealSubspace, rng: &mut ChaCha8Rng) -> TangentVector {
    loop {
        let mut v = TangentVector::zeros(s.n);
        for b in &s.basis {
            v = b.axpy(rng.random_range(-1.0..1.0), &v);
        }
        let nv = v.norm();
        if nv > 1e-3 {
            return v.scale(1.0 / nv);
        }
    }
}

/// Minimum and maximum characteristic angle over the basis and `samples` random unit vectors.
pub fn char_angle_spectrum(s: &RealSubspace, samples: usize, seed: u64) -> Result<(f64, f64)> {
    if s.dim() == 0 {
        return Err(domain("characteristic angle spectrum of the zero subspace"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut visit = |v: &TangentVector| -> Result<()> {
        let p = char_angle(v)?;
        lo = lo.min(p);
        hi = hi.max(p);
        Ok(())
    };
    for b in &s.basis {
        visit(b)?;
    }
    if s.dim() >= 2 {
        // the sum and difference of the first two basis vectors reach the extremes on flat planes
        let (b0, b1) = (&s.basis[0], &s.basis[1]);
        visit(&b0.add(b1))?;
        visit(&b0.sub(b1))?;
    }
    for _ in 0..samples {
        visit(&random_unit(s, &mut rng))?;
    }
    Ok((lo, hi))
}

fn random_pair(s: &RealSubspace, rng: &mut ChaCha8Rng) -> (TangentVector, TangentVector) {
    loop {
        let u = random_unit(s, rng);
        let v = random_unit(s, rng);
        let w = v.sub(&u.scale(inner(&u, &v)));
        let nw = w.norm();
        if nw > 1e-3 {
            return (u, w.scale(1.0 / nw));
        }
    }
}

/// Minimum and maximum sectional curvature over all basis pairs and `samples`
/// random orthonormal pairs. The random part makes this an estimate.
pub fn sectional_range(s: &RealSubspace, samples: usize, seed: u64) -> Result<(f64, f64)> {
    if s.dim() < 2 {
        return Err(domain("sectional curvature needs dim >= 2"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..s.dim() {
        for j in (i + 1)..s.dim() {
            let k = sectional_curvature(&s.basis[i], &s.basis[j])?;
            lo = lo.min(k);
            hi = hi.max(k);
        }
    }
    for _ in 0..samples {
        let (u, v) = random_pair(s, &mut rng);
        let k = sectional_curvature(&u, &v)?;
        lo = lo.min(k);
        hi = hi.max(k);
    }
    Ok((lo, hi))
}

/// Sampled estimate of the minimal sectional curvature.
pub fn min_sectional(s: &RealSubspace, samples: usize, seed: u64) -> Result<f64> {
    Ok(sectional_range(s, samples, seed)?.0)
}

/// Quaternionic dimension of the common kernel in `V'` of all elements of `S`.
pub fn common_kernel_dim(s: &RealSubspace) -> usize {
    if s.dim() == 0 {
        return 2;
    }
    let mut m = QMatrix::zeros(s.n * s.dim(), 2);
    for (k, b) in s.basis.iter().enumerate() {
        for r in 0..s.n {
            for c in 0..2 {
                m[(k * s.n + r, c)] = b.entry(r, c);
            }
        }
    }
    2 - rank_h(&m, DEFAULT_TOL)
}

/// Verification report for a candidate Lie triple system.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub is_lts: bool,
    pub residual: f64,
    pub dim: usize,
    pub rank: Option<usize>,
    pub roots: Vec<RestrictedRootDatum>,
    pub phi: [f64; 2],
}

/// Closure, rank, restricted roots and angle spectrum in one report.
pub fn verify(s: &RealSubspace, tol: f64, samples: usize, seed: u64) -> Result<VerificationReport> {
    let (ok, residual) = is_lts(s, tol);
    let phi = if s.dim() > 0 { char_angle_spectrum(s, samples, seed)? } else { (0.0, 0.0) };
    let (rank, roots) = if ok && s.dim() > 0 {
        let rr = restricted_roots(s)?;
        (Some(rr.rank), rr.roots)
    } else {
        (None, Vec::new())
    };
    Ok(VerificationReport { is_lts: ok, residual, dim: s.dim(), rank, roots, phi: [phi.0, phi.1] })
}
