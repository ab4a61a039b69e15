//! Curvature identities between the root spaces of a Cartan subalgebra,
//! checked against [`curvature`] on random parameter draws.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cartan::{m_vector, root_space_basis, standard_frame, Frame, RootLabel};
use crate::constructors::random_isotropy;
use crate::error::{G2Error, Result};
use crate::model::{curvature, TangentVector};
use crate::quat::Quaternion;

/// One identity with its worst relative residual.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    /// Item letter and side, e.g. `"b2"`.
    pub item: String,
    pub statement: String,
    pub residual: f64,
    pub holds: bool,
}

/// Parameters of one random draw.
struct Draw {
    c: Quaternion,
    ct: Quaternion,
    d: Quaternion,
    eps: i8,
    u_plus: TangentVector,
    v_plus: TangentVector,
    w_plus: TangentVector,
    u_minus: TangentVector,
    v_minus: TangentVector,
    w_minus: TangentVector,
}

fn random_quat(rng: &mut ChaCha8Rng) -> Quaternion {
    Quaternion::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn random_in(basis: &[TangentVector], rng: &mut ChaCha8Rng) -> TangentVector {
    basis.iter().fold(TangentVector::zeros(basis[0].n()), |acc, b| b.axpy(rng.random_range(-1.0..1.0), &acc))
}

impl Draw {
    fn new(frame: &Frame, rng: &mut ChaCha8Rng) -> Draw {
        let l1 = root_space_basis(frame, RootLabel::Lambda1);
        let l2 = root_space_basis(frame, RootLabel::Lambda2);
        Draw {
            c: random_quat(rng),
            ct: random_quat(rng),
            d: random_quat(rng).im(),
            eps: if rng.random_bool(0.5) { 1 } else { -1 },
            u_plus: random_in(&l1, rng),
            v_plus: random_in(&l1, rng),
            w_plus: random_in(&l1, rng),
            u_minus: random_in(&l2, rng),
            v_minus: random_in(&l2, rng),
            w_minus: random_in(&l2, rng),
        }
    }
}

type Side = fn(&Frame, &Draw) -> TangentVector;

struct Identity {
    item: &'static str,
    statement: &'static str,
    lhs: Side,
    rhs: Side,
}

fn at_plus(f: &Frame, v: &TangentVector) -> crate::QVector {
    v.apply(&f.e_plus)
}

fn at_minus(f: &Frame, v: &TangentVector) -> crate::QVector {
    v.apply(&f.e_minus)
}

/// `v c` in the sense of the adapted basis: `e+ -> v(e+) c`, `e- -> v(e-) c`.
fn times(f: &Frame, v: &TangentVector, c: Quaternion) -> TangentVector {
    f.map_plus(&at_plus(f, v).right_mul(c)).add(&f.map_minus(&at_minus(f, v).right_mul(c)))
}

fn sqrt2() -> f64 {
    std::f64::consts::SQRT_2
}

/// The identities as printed, item by item.
fn printed() -> Vec<Identity> {
    vec![
        Identity {
            item: "a1",
            statement: "R(H+,u+)v+ = <u+(e+),v+(e+)> H+",
            lhs: |f, p| curvature(&f.h_plus, &p.u_plus, &p.v_plus),
            rhs: |f, p| times(f, &f.h_plus, at_plus(f, &p.u_plus).dot(&at_plus(f, &p.v_plus))),
        },
        Identity {
            item: "a2",
            statement: "R(H-,u-)v- = <u-(e-),v-(e-)> H-",
            lhs: |f, p| curvature(&f.h_minus, &p.u_minus, &p.v_minus),
            rhs: |f, p| times(f, &f.h_minus, at_minus(f, &p.u_minus).dot(&at_minus(f, &p.v_minus))),
        },
        Identity {
            item: "b1",
            statement: "R(H-,M_{c,e})w+ = J(w+) conj(c) / sqrt 2",
            lhs: |f, p| curvature(&f.h_minus, &m_vector(f, p.c, p.eps), &p.w_plus),
            rhs: |f, p| times(f, &f.apply_j(&p.w_plus), p.c.conj()).scale(1.0 / sqrt2()),
        },
        Identity {
            item: "b2",
            statement: "R(H+,M_{c,e})w- = -e J(w-) c / sqrt 2",
            lhs: |f, p| curvature(&f.h_plus, &m_vector(f, p.c, p.eps), &p.w_minus),
            rhs: |f, p| times(f, &f.apply_j(&p.w_minus), p.c).scale(-(p.eps as f64) / sqrt2()),
        },
        Identity {
            item: "c1",
            statement: "R(u+,v+)M_{c,e} = M_{c d+,-e} + M_{c d+,e}, d+ = Im<v+(e+),u+(e+)>",
            lhs: |f, p| curvature(&p.u_plus, &p.v_plus, &m_vector(f, p.c, p.eps)),
            rhs: |f, p| {
                let d = at_plus(f, &p.v_plus).dot(&at_plus(f, &p.u_plus)).im();
                m_vector(f, p.c * d, -p.eps).add(&m_vector(f, p.c * d, p.eps))
            },
        },
        Identity {
            item: "c2",
            statement: "R(u-,v-)M_{c,e} = M_{d- c,-e} - M_{d- c,e}, d- = Im<v-(e-),u-(e-)>",
            lhs: |f, p| curvature(&p.u_minus, &p.v_minus, &m_vector(f, p.c, p.eps)),
            rhs: |f, p| {
                let d = at_minus(f, &p.v_minus).dot(&at_minus(f, &p.u_minus)).im();
                m_vector(f, d * p.c, -p.eps).sub(&m_vector(f, d * p.c, p.eps))
            },
        },
        Identity {
            item: "d1",
            statement: "R(H+,d H+)M_{c,e} = M_{-2cd,-e}",
            lhs: |f, p| curvature(&f.h_plus, &times(f, &f.h_plus, p.d), &m_vector(f, p.c, p.eps)),
            rhs: |f, p| m_vector(f, -2.0 * (p.c * p.d), -p.eps),
        },
        Identity {
            item: "d2",
            statement: "R(H-,d H-)M_{c,e} = M_{-2dc,-e}",
            lhs: |f, p| curvature(&f.h_minus, &times(f, &f.h_minus, p.d), &m_vector(f, p.c, p.eps)),
            rhs: |f, p| m_vector(f, -2.0 * (p.d * p.c), -p.eps),
        },
        Identity {
            item: "e1",
            statement: "R(d H+,M_{c,e})M_{c~,-e} = Re(d conj(c) c~) H+ + e Im(c d conj(c~)) H-",
            lhs: |f, p| curvature(&times(f, &f.h_plus, p.d), &m_vector(f, p.c, p.eps), &m_vector(f, p.ct, -p.eps)),
            rhs: |f, p| {
                let a = (p.d * p.c.conj() * p.ct).re();
                let b = (p.c * p.d * p.ct.conj()).im();
                f.h_plus.scale(a).add(&times(f, &f.h_minus, b).scale(p.eps as f64))
            },
        },
        Identity {
            item: "e2",
            statement: "R(d H-,M_{c,e})M_{c~,-e} = -e Im(conj(c) d c~) H+ + Re(c~ conj(c) d) H-",
            lhs: |f, p| curvature(&times(f, &f.h_minus, p.d), &m_vector(f, p.c, p.eps), &m_vector(f, p.ct, -p.eps)),
            rhs: |f, p| {
                let a = (p.c.conj() * p.d * p.ct).im();
                let b = (p.ct * p.c.conj() * p.d).re();
                times(f, &f.h_plus, a).scale(-(p.eps as f64)).add(&f.h_minus.scale(b))
            },
        },
        Identity {
            item: "f",
            statement: "R(u+,v-)(-e H+ + H-) = sqrt 2 M_{<v-(e-),u+(e+)>,e}",
            lhs: |f, p| curvature(&p.u_plus, &p.v_minus, &f.h_plus.scale(-(p.eps as f64)).add(&f.h_minus)),
            rhs: |f, p| m_vector(f, at_minus(f, &p.v_minus).dot(&at_plus(f, &p.u_plus)), p.eps).scale(sqrt2()),
        },
        Identity {
            item: "g",
            statement: "R(H+,M_{c,1})M_{c~,-1} = H+ Im(conj(c) c~) - H- Im(c~ conj(c))",
            lhs: |f, p| curvature(&f.h_plus, &m_vector(f, p.c, 1), &m_vector(f, p.ct, -1)),
            rhs: |f, p| times(f, &f.h_plus, (p.c.conj() * p.ct).im()).sub(&times(f, &f.h_minus, (p.ct * p.c.conj()).im())),
        },
    ]
}

/// Forms that hold numerically where the printed ones do not.
fn corrected() -> Vec<Identity> {
    vec![
        Identity {
            item: "b1",
            statement: "R(H-,M_{c,e})w+ = -J(w+) conj(c) / sqrt 2",
            lhs: |f, p| curvature(&f.h_minus, &m_vector(f, p.c, p.eps), &p.w_plus),
            rhs: |f, p| times(f, &f.apply_j(&p.w_plus), p.c.conj()).scale(-1.0 / sqrt2()),
        },
        Identity {
            item: "b2",
            statement: "R(H+,M_{c,e})w- = e J(w-) c / sqrt 2",
            lhs: |f, p| curvature(&f.h_plus, &m_vector(f, p.c, p.eps), &p.w_minus),
            rhs: |f, p| times(f, &f.apply_j(&p.w_minus), p.c).scale(p.eps as f64 / sqrt2()),
        },
        Identity {
            item: "e1",
            statement: "R(d H+,M_{c,e})M_{c~,-e} = Re(d conj(c) c~) H+ - e Re(c d conj(c~)) H-",
            lhs: |f, p| curvature(&times(f, &f.h_plus, p.d), &m_vector(f, p.c, p.eps), &m_vector(f, p.ct, -p.eps)),
            rhs: |f, p| {
                let a = (p.d * p.c.conj() * p.ct).re();
                let b = (p.c * p.d * p.ct.conj()).re();
                f.h_plus.scale(a).sub(&f.h_minus.scale(p.eps as f64 * b))
            },
        },
        Identity {
            item: "e2",
            statement: "R(d H-,M_{c,e})M_{c~,-e} = e Re(conj(c) d c~) H+ + Re(c~ conj(c) d) H-",
            lhs: |f, p| curvature(&times(f, &f.h_minus, p.d), &m_vector(f, p.c, p.eps), &m_vector(f, p.ct, -p.eps)),
            rhs: |f, p| {
                let a = (p.c.conj() * p.d * p.ct).re();
                let b = (p.ct * p.c.conj() * p.d).re();
                f.h_plus.scale(p.eps as f64 * a).add(&f.h_minus.scale(b))
            },
        },
    ]
}

fn run(ids: Vec<Identity>, n: usize, draws: usize, seed: u64, tol: f64) -> Result<Vec<IdentityCheck>> {
    if n < 3 {
        return Err(G2Error::Domain("the identities involve lambda1 and lambda2, which need n >= 3".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = vec![0.0f64; ids.len()];
    for k in 0..draws {
        let frame = standard_frame(n)?.transform(&random_isotropy(n, seed.wrapping_add(k as u64)))?;
        let p = Draw::new(&frame, &mut rng);
        for (w, id) in worst.iter_mut().zip(&ids) {
            let (l, r) = ((id.lhs)(&frame, &p), (id.rhs)(&frame, &p));
            *w = w.max(l.sub(&r).max_abs() / l.max_abs().max(r.max_abs()).max(1.0));
        }
    }
    Ok(ids
        .iter()
        .zip(worst)
        .map(|(id, r)| IdentityCheck { item: id.item.into(), statement: id.statement.into(), residual: r, holds: r <= tol })
        .collect())
}

/// Check every printed identity on `draws` random parameter sets in random adapted frames.
pub fn check_printed(n: usize, draws: usize, seed: u64, tol: f64) -> Result<Vec<IdentityCheck>> {
    run(printed(), n, draws, seed, tol)
}

/// Check the corrected forms of the identities that fail as printed.
pub fn check_corrected(n: usize, draws: usize, seed: u64, tol: f64) -> Result<Vec<IdentityCheck>> {
    run(corrected(), n, draws, seed, tol)
}

/// Sub-field structure of a rank 2 Lie triple system along `H+` (`nu = 1`) or `H-` (`nu = 2`).
#[derive(Clone, Debug, Serialize)]
pub struct SubfieldReport {
    pub nu: u8,
    /// Real dimension of `K = {c : H c in S}`.
    pub field_dim: usize,
    /// Dimension of `S ∩ m_lambda_nu`.
    pub root_space_dim: usize,
    /// Distance of products of basis elements of `K` from `K`.
    pub closure_residual: f64,
    /// Distance of `v c` from `S` for `v` in `S ∩ m_lambda_nu`, `c` in `K`.
    pub invariance_residual: f64,
    /// Largest `|<v c, w>|` for `v, w` in `S ∩ m_lambda_nu`, `c` orthogonal to `K`.
    pub orthogonality_residual: f64,
}

impl SubfieldReport {
    pub fn holds(&self, tol: f64) -> bool {
        matches!(self.field_dim, 1 | 2 | 4)
            && self.closure_residual <= tol
            && self.invariance_residual <= tol
            && self.orthogonality_residual <= tol
    }
}

fn quat_span_residual(q: Quaternion, basis: &[[f64; 4]]) -> f64 {
    let v = q.to_array();
    let mut r = v;
    for b in basis {
        let p: f64 = (0..4).map(|k| b[k] * v[k]).sum();
        for k in 0..4 {
            r[k] -= p * b[k];
        }
    }
    r.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Check the sub-field structure for both `nu` at the Cartan subalgebra chosen by
/// [`restricted_roots`](crate::lts::restricted_roots). Entries are present only
/// when `lambda_nu` restricts to a root of `S`.
pub fn subfield_check(s: &crate::lts::RealSubspace) -> Result<Vec<SubfieldReport>> {
    use crate::lts::{restricted_roots, RealSubspace};
    let rr = restricted_roots(s)?;
    if rr.rank != 2 {
        return Err(G2Error::Domain("the sub-field structure concerns rank 2 systems".into()));
    }
    let f = &rr.frame;
    let n = s.n();
    let mut out = Vec::new();
    for nu in [1u8, 2] {
        let (label, h) = if nu == 1 { (RootLabel::Lambda1, &f.h_plus) } else { (RootLabel::Lambda2, &f.h_minus) };
        let root = RealSubspace::new(n, root_space_basis(f, label))?;
        let sub = s.intersect(&root)?;
        if sub.dim() == 0 {
            continue;
        }
        let line = RealSubspace::new(n, Quaternion::BASIS.iter().map(|&q| times(f, h, q)).collect())?;
        let at = |v: &TangentVector| if nu == 1 { at_plus(f, v) } else { at_minus(f, v) };
        let hx = at(h);
        let field: Vec<Quaternion> = s.intersect(&line)?.basis().iter().map(|t| hx.dot(&at(t))).collect();
        let field_arr: Vec<[f64; 4]> = field.iter().map(|q| q.to_array()).collect();
        let mut closure: f64 = 0.0;
        for &a in &field {
            for &b in &field {
                closure = closure.max(quat_span_residual(a * b, &field_arr));
            }
        }
        let perp: Vec<Quaternion> = Quaternion::BASIS
            .iter()
            .map(|&q| {
                let mut r = q.to_array();
                for b in &field_arr {
                    let p: f64 = (0..4).map(|k| b[k] * r[k]).sum();
                    for k in 0..4 {
                        r[k] -= p * b[k];
                    }
                }
                Quaternion::from(r)
            })
            .collect();
        let mut invariance: f64 = 0.0;
        let mut orth: f64 = 0.0;
        for v in sub.basis() {
            for &c in &field {
                invariance = invariance.max(s.residual(&times(f, v, c)));
            }
            for &c in &perp {
                let vc = times(f, v, c);
                for w in sub.basis() {
                    orth = orth.max(crate::model::metric(&vc, w)?.abs());
                }
            }
        }
        out.push(SubfieldReport {
            nu,
            field_dim: field.len(),
            root_space_dim: sub.dim(),
            closure_residual: closure,
            invariance_residual: invariance,
            orthogonality_residual: orth,
        });
    }
    Ok(out)
}
