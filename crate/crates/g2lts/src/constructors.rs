//! Explicit bases for every type of Lie triple system, randomized congruent
//! copies, and the dimension, rank, maximality and inclusion tables.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cartan::{m_vector, standard_frame, Frame};
use crate::error::{G2Error, Result};
use crate::lts::{contains, RealSubspace};
use crate::model::{inner, IsotropyElement, TangentVector};
use crate::qlinalg::{gram_schmidt_h, HpType};
use crate::quat::{QMatrix, QVector, Quaternion};

/// `arctan(1/2)`.
pub fn arctan_half() -> f64 {
    0.5f64.atan()
}

/// `arctan(1/3)`.
pub fn arctan_third() -> f64 {
    (1.0f64 / 3.0).atan()
}

/// Symbolic name of a type of Lie triple system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LtsDescriptor {
    /// A geodesic line with characteristic angle `t`.
    Geo { t: f64 },
    /// Projective type with angle 0.
    P0(HpType),
    /// Sphere with angle `arctan(1/3)`, dimension 2 or 3.
    S13(usize),
    /// Projective type with angle `arctan(1/2)`.
    P12(HpType),
    /// Projective type with angle `pi/4`.
    P44(HpType),
    /// The 5-sphere with angle `pi/4`.
    S5,
    /// Grassmannian type `U + J(U)`.
    G2(HpType),
    /// Product of two projective types.
    PxP(HpType, HpType),
    /// `S1 x S5` family, parameter in `2..=5`.
    S1xS5(usize),
    Sp2,
    Q3,
}

const ANGLE_TOL: f64 = 1e-9;

impl LtsDescriptor {
    /// Check the parameter bounds of the classification for a given `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        let err = |m: String| Err(G2Error::Descriptor(m));
        if n < 2 {
            return err(format!("n must be at least 2, got {n}"));
        }
        match *self {
            LtsDescriptor::Geo { t } => {
                if !(-ANGLE_TOL..=FRAC_PI_4 + ANGLE_TOL).contains(&t) {
                    return err(format!("Geo needs t in [0, pi/4], got {t}"));
                }
            }
            LtsDescriptor::P0(tau) => {
                if tau.dim() > n {
                    return err(format!("P0 needs dim(tau) <= n ({tau}, n = {n})"));
                }
            }
            LtsDescriptor::S13(l) => {
                if !(2..=3).contains(&l) {
                    return err(format!("S13 needs l in {{2, 3}}, got {l}"));
                }
            }
            LtsDescriptor::P12(tau) => match tau.dim() {
                1 => {
                    if tau.width() + 1 > n {
                        return err(format!("P12 with {tau} needs w(tau) <= n - 1 (n = {n})"));
                    }
                }
                2 => {
                    let need = match tau {
                        HpType::Real(_) => 3,
                        HpType::Complex(_) => 4,
                        _ => 5,
                    };
                    if n < need {
                        return err(format!("P12 with {tau} needs n >= {need} (n = {n})"));
                    }
                }
                _ => return err(format!("P12 needs dim(tau) <= 2, got {tau}")),
            },
            LtsDescriptor::P44(tau) => {
                if 2 * tau.dim() > n {
                    return err(format!("P44 needs dim(tau) <= n/2 ({tau}, n = {n})"));
                }
            }
            LtsDescriptor::S5 | LtsDescriptor::Sp2 | LtsDescriptor::Q3 => {}
            LtsDescriptor::G2(tau) => {
                if tau == HpType::Sphere3 {
                    return err("G2 does not admit the type S3".into());
                }
                if tau.dim() > n {
                    return err(format!("G2 needs dim(tau) <= n ({tau}, n = {n})"));
                }
            }
            LtsDescriptor::PxP(a, b) => {
                if a.dim() + b.dim() > n {
                    return err(format!("PxP needs dim(tau1) + dim(tau2) <= n ({a}, {b}, n = {n})"));
                }
            }
            LtsDescriptor::S1xS5(l) => {
                if !(2..=5).contains(&l) {
                    return err(format!("S1xS5 needs 2 <= l <= 5, got {l}"));
                }
            }
        }
        Ok(())
    }

    /// Representative under the identifications of the classification:
    /// special geodesics become projective types and `PxP` arguments are sorted.
    pub fn canonical(&self) -> LtsDescriptor {
        match *self {
            LtsDescriptor::Geo { t } if t.abs() <= ANGLE_TOL => LtsDescriptor::P0(HpType::Real(1)),
            LtsDescriptor::Geo { t } if (t - arctan_half()).abs() <= ANGLE_TOL => LtsDescriptor::P12(HpType::Real(1)),
            LtsDescriptor::Geo { t } if (t - FRAC_PI_4).abs() <= ANGLE_TOL => LtsDescriptor::P44(HpType::Real(1)),
            LtsDescriptor::PxP(a, b) if b < a => LtsDescriptor::PxP(b, a),
            d => d,
        }
    }

    /// Equality up to the identifications; geodesic angles compared to `1e-6`.
    pub fn same_type(&self, other: &LtsDescriptor) -> bool {
        match (self.canonical(), other.canonical()) {
            (LtsDescriptor::Geo { t: a }, LtsDescriptor::Geo { t: b }) => (a - b).abs() <= 1e-6,
            (a, b) => a == b,
        }
    }

    /// Real dimension.
    pub fn dim(&self) -> usize {
        match *self {
            LtsDescriptor::Geo { .. } => 1,
            LtsDescriptor::P0(t) | LtsDescriptor::P12(t) | LtsDescriptor::P44(t) => t.real_dim(),
            LtsDescriptor::S13(l) => l,
            LtsDescriptor::S5 => 5,
            LtsDescriptor::G2(t) => 2 * t.real_dim(),
            LtsDescriptor::PxP(a, b) => a.real_dim() + b.real_dim(),
            LtsDescriptor::S1xS5(l) => 1 + l,
            LtsDescriptor::Sp2 => 10,
            LtsDescriptor::Q3 => 6,
        }
    }

    /// Rank (1 or 2).
    pub fn rank(&self) -> usize {
        match *self {
            LtsDescriptor::G2(t) => {
                if t.dim() >= 2 {
                    2
                } else {
                    1
                }
            }
            LtsDescriptor::PxP(..) | LtsDescriptor::S1xS5(_) | LtsDescriptor::Sp2 | LtsDescriptor::Q3 => 2,
            _ => 1,
        }
    }

    /// Global isometry type of the corresponding submanifold.
    pub fn isometry_type(&self) -> String {
        fn proj(t: HpType, kappa: &str) -> String {
            match t {
                HpType::Real(l) => format!("RP^{l}_{kappa}"),
                HpType::Complex(l) => format!("CP^{l}_{kappa}"),
                HpType::Quaternionic(l) => format!("HP^{l}_{kappa}"),
                HpType::Sphere3 => String::new(),
            }
        }
        match *self {
            LtsDescriptor::Geo { .. } => "R or S^1".into(),
            LtsDescriptor::P0(HpType::Sphere3) => "S^3_{r=1/2}".into(),
            LtsDescriptor::P0(t) => proj(t, "1"),
            LtsDescriptor::S13(l) => format!("S^{l}_{{r=sqrt(10)/2}}"),
            LtsDescriptor::P12(HpType::Sphere3) => "S^3_{r=sqrt(5)/2}".into(),
            LtsDescriptor::P12(t) => proj(t, "1/5"),
            LtsDescriptor::P44(HpType::Sphere3) => "S^3_{r=1/sqrt(2)}".into(),
            LtsDescriptor::P44(t) => proj(t, "1/2"),
            LtsDescriptor::S5 => "S^5_{r=1/sqrt(2)}".into(),
            LtsDescriptor::G2(t) => {
                let k = match t {
                    HpType::Real(_) => "R",
                    HpType::Complex(_) => "C",
                    _ => "H",
                };
                format!("G_2({k}^{})", t.dim() + 2)
            }
            LtsDescriptor::PxP(a, b) => {
                let f = |t: HpType| {
                    if t == HpType::Sphere3 {
                        "S^3_{r=1/2}".to_string()
                    } else {
                        proj(t, "1")
                    }
                };
                format!("{} x {}", f(a), f(b))
            }
            LtsDescriptor::S1xS5(l) => format!("(S^1_{{r=1/sqrt(2)}} x S^{l}_{{r=1/sqrt(2)}})/{{+-id}}"),
            LtsDescriptor::Sp2 => "Sp(2)".into(),
            LtsDescriptor::Q3 => "G_2^+(R^5)".into(),
        }
    }
}

impl fmt::Display for LtsDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LtsDescriptor::Geo { t } => write!(f, "Geo:t={t}"),
            LtsDescriptor::P0(t) => write!(f, "P:phi=0:{t}"),
            LtsDescriptor::S13(l) => write!(f, "S13:{l}"),
            LtsDescriptor::P12(t) => write!(f, "P12:{t}"),
            LtsDescriptor::P44(t) => write!(f, "P44:{t}"),
            LtsDescriptor::S5 => write!(f, "S5"),
            LtsDescriptor::G2(t) => write!(f, "G2:{t}"),
            LtsDescriptor::PxP(a, b) => write!(f, "PxP:{a},{b}"),
            LtsDescriptor::S1xS5(l) => write!(f, "S1xS5:{l}"),
            LtsDescriptor::Sp2 => write!(f, "Sp2"),
            LtsDescriptor::Q3 => write!(f, "Q3"),
        }
    }
}

fn parse_count(s: &str, what: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| G2Error::Parse(format!("bad {what} parameter '{s}'")))
}

fn parse_angle(s: &str) -> Result<f64> {
    match s.trim() {
        "0" => Ok(0.0),
        "arctan1/2" | "arctan(1/2)" => Ok(arctan_half()),
        "arctan1/3" | "arctan(1/3)" => Ok(arctan_third()),
        "pi/4" => Ok(FRAC_PI_4),
        x => x.parse().map_err(|_| G2Error::Parse(format!("bad angle '{x}'"))),
    }
}

impl FromStr for LtsDescriptor {
    type Err = G2Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (s, None),
        };
        fn need<'a>(head: &str, r: Option<&'a str>) -> Result<&'a str> {
            r.ok_or_else(|| G2Error::Parse(format!("'{head}' needs a parameter")))
        }
        let d = match head {
            "Geo" => {
                let r = need(head, rest)?;
                let t = r.strip_prefix("t=").ok_or_else(|| G2Error::Parse(format!("expected t=..., got '{r}'")))?;
                LtsDescriptor::Geo { t: parse_angle(t)? }
            }
            "P" => {
                let r = need(head, rest)?;
                let (phi, tau) =
                    r.split_once(':').ok_or_else(|| G2Error::Parse(format!("expected phi=...:tau, got '{r}'")))?;
                let phi = phi.strip_prefix("phi=").ok_or_else(|| G2Error::Parse(format!("expected phi=..., got '{phi}'")))?;
                let tau: HpType = tau.parse()?;
                let angle = parse_angle(phi)?;
                if angle.abs() <= ANGLE_TOL {
                    LtsDescriptor::P0(tau)
                } else if (angle - arctan_half()).abs() <= ANGLE_TOL {
                    LtsDescriptor::P12(tau)
                } else if (angle - FRAC_PI_4).abs() <= ANGLE_TOL {
                    LtsDescriptor::P44(tau)
                } else {
                    return Err(G2Error::Parse(format!("no projective type with phi = {phi}")));
                }
            }
            "P0" => LtsDescriptor::P0(need(head, rest)?.parse()?),
            "S13" => LtsDescriptor::S13(parse_count(need(head, rest)?, "S13")?),
            "P12" => LtsDescriptor::P12(need(head, rest)?.parse()?),
            "P44" => LtsDescriptor::P44(need(head, rest)?.parse()?),
            "S5" if rest.is_none() => LtsDescriptor::S5,
            "G2" => LtsDescriptor::G2(need(head, rest)?.parse()?),
            "PxP" => {
                let r = need(head, rest)?;
                let (a, b) = r.split_once(',').ok_or_else(|| G2Error::Parse(format!("PxP needs two types, got '{r}'")))?;
                LtsDescriptor::PxP(a.parse()?, b.parse()?)
            }
            "S1xS5" => LtsDescriptor::S1xS5(parse_count(need(head, rest)?, "S1xS5")?),
            "Sp2" if rest.is_none() => LtsDescriptor::Sp2,
            "Q3" if rest.is_none() => LtsDescriptor::Q3,
            _ => return Err(G2Error::Parse(format!("unknown descriptor '{s}'"))),
        };
        Ok(d)
    }
}

impl Serialize for LtsDescriptor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LtsDescriptor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// `e1 -> f_row q` (rows 0-based).
fn c1(n: usize, row: usize, q: Quaternion) -> TangentVector {
    TangentVector::elementary(n, 0, row, q)
}

/// `e2 -> f_row q` (rows 0-based).
fn c2(n: usize, row: usize, q: Quaternion) -> TangentVector {
    TangentVector::elementary(n, 1, row, q)
}

/// Linear combination of tangent vectors.
fn comb(n: usize, terms: &[(f64, &TangentVector)]) -> TangentVector {
    terms.iter().fold(TangentVector::zeros(n), |acc, (c, v)| v.axpy(*c, &acc))
}

fn normalized(v: TangentVector) -> TangentVector {
    let nv = v.norm();
    v.scale(1.0 / nv)
}

fn finish(n: usize, vs: Vec<TangentVector>) -> Result<RealSubspace> {
    RealSubspace::new(n, vs).map_err(|e| G2Error::Construction(e.to_string()))
}

/// The isometry `Theta` used in the `arctan(1/2)` types: `Theta(1) = H+`,
/// `Theta(i)`, `Theta(j)`, `Theta(k)` are `e1 -> f3, f4, f5`.
fn theta_row(q: Quaternion) -> usize {
    if q == Quaternion::ONE {
        0
    } else if q == Quaternion::I {
        2
    } else if q == Quaternion::J {
        3
    } else {
        4
    }
}

/// Coefficient set `Q` of the `arctan(1/2)` types with `dim(tau) = 1`.
fn p12_scalars(tau: HpType) -> &'static [Quaternion] {
    const R: [Quaternion; 1] = [Quaternion::ONE];
    const C: [Quaternion; 2] = [Quaternion::ONE, Quaternion::I];
    const S: [Quaternion; 3] = [Quaternion::ONE, Quaternion::I, Quaternion::J];
    match tau.width() {
        1 => &R,
        2 => &C,
        3 => &S,
        _ => &Quaternion::BASIS,
    }
}

/// The core `{q H- + 2 Theta(q)}` of the `arctan(1/2)` types.
fn p12_core(n: usize, q_set: &[Quaternion]) -> Vec<TangentVector> {
    let s5 = 5f64.sqrt();
    q_set
        .iter()
        .map(|&q| comb(n, &[(1.0 / s5, &c2(n, 1, q)), (2.0 / s5, &c1(n, theta_row(q), Quaternion::ONE))]))
        .collect()
}

/// The linear isometry `Phi: V' -> V` used for the standard `Sp2`, `e_a -> f_a j`.
fn sp2_phi(n: usize) -> QMatrix {
    let mut phi = QMatrix::zeros(n, 2);
    phi[(0, 0)] = Quaternion::J;
    phi[(1, 1)] = Quaternion::J;
    phi
}

/// Build the standard representative of a type.
pub fn construct(d: &LtsDescriptor, n: usize) -> Result<RealSubspace> {
    d.validate(n)?;
    let f = standard_frame(n)?;
    let one = Quaternion::ONE;
    let (hp, hm) = (f.h_plus.clone(), f.h_minus.clone());
    let vs: Vec<TangentVector> = match *d {
        LtsDescriptor::Geo { t } => vec![comb(n, &[(t.cos(), &hp), (t.sin(), &hm)])],
        LtsDescriptor::P0(tau) => {
            let mut out = Vec::new();
            for row in 0..tau.dim() {
                for &c in tau.scalars() {
                    out.push(c1(n, row, c));
                }
            }
            out
        }
        LtsDescriptor::S13(l) => {
            let a = (3.0f64 / 5.0).sqrt();
            let b = (2.0f64 / 5.0).sqrt();
            let mut out = vec![comb(n, &[(3.0 / 10f64.sqrt(), &hp), (1.0 / 10f64.sqrt(), &hm)])];
            out.push(comb(n, &[(a, &m_vector(&f, one, 1)), (b, &c2(n, 1, Quaternion::I))]));
            if l == 3 {
                out.push(comb(n, &[(a, &m_vector(&f, Quaternion::J, 1)), (b, &c2(n, 1, Quaternion::K))]));
            }
            out
        }
        LtsDescriptor::P12(tau) => p12_basis(&f, tau, n),
        LtsDescriptor::P44(tau) => {
            let l = tau.dim();
            let mut out = Vec::new();
            for a in 0..l {
                for &c in tau.scalars() {
                    let theta = if matches!(tau, HpType::Quaternionic(_)) { c } else { c.conj() };
                    out.push(comb(n, &[(FRAC_1_SQRT_2, &c1(n, a, c)), (FRAC_1_SQRT_2, &c2(n, l + a, theta))]));
                }
            }
            out
        }
        LtsDescriptor::S5 => {
            let mut out = vec![comb(n, &[(FRAC_1_SQRT_2, &hp), (-FRAC_1_SQRT_2, &hm)])];
            out.extend(Quaternion::BASIS.iter().map(|&c| m_vector(&f, c, 1)));
            out
        }
        LtsDescriptor::G2(tau) => {
            let mut out = Vec::new();
            for col in 0..2 {
                for row in 0..tau.dim() {
                    for &c in tau.scalars() {
                        out.push(TangentVector::elementary(n, col, row, c));
                    }
                }
            }
            out
        }
        LtsDescriptor::PxP(t1, t2) => {
            let mut out = Vec::new();
            for row in 0..t1.dim() {
                for &c in t1.scalars() {
                    out.push(c1(n, row, c));
                }
            }
            for row in 0..t2.dim() {
                for &c in t2.scalars() {
                    out.push(c2(n, t1.dim() + row, c));
                }
            }
            out
        }
        LtsDescriptor::S1xS5(l) => {
            let mut out = vec![hp, hm];
            out.extend(Quaternion::BASIS[..l - 1].iter().map(|&c| m_vector(&f, c, 1)));
            out
        }
        LtsDescriptor::Sp2 => {
            let phi = sp2_phi(n);
            sp_algebra_basis()
                .iter()
                .map(|x| TangentVector::from_matrix(&(&phi * x)).expect("n x 2"))
                .collect()
        }
        LtsDescriptor::Q3 => vec![
            hp.clone(),
            hm.clone(),
            c1(n, 0, Quaternion::I),
            c2(n, 1, Quaternion::I),
            m_vector(&f, one, -1),
            m_vector(&f, Quaternion::I, 1),
        ],
    };
    finish(n, vs)
}

/// Orthonormal basis of `sp(V')` (skew-Hermitian 2x2 matrices, norm 1).
fn sp_algebra_basis() -> Vec<QMatrix> {
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
        x[(0, 1)] = c * FRAC_1_SQRT_2;
        x[(1, 0)] = -(c.conj() * FRAC_1_SQRT_2);
        out.push(x);
    }
    out
}

fn p12_basis(f: &Frame, tau: HpType, n: usize) -> Vec<TangentVector> {
    let (s2, s5) = (2f64.sqrt(), 5f64.sqrt());
    let q_set = p12_scalars(tau);
    let mut out = p12_core(n, q_set);
    let i = Quaternion::I;
    match tau {
        HpType::Real(2) => {
            out = vec![
                comb(n, &[(2.0 / s5, &f.h_plus), (1.0 / s5, &f.h_minus)]),
                comb(n, &[((2.0f64 / 5.0).sqrt(), &m_vector(f, Quaternion::ONE, 1)), ((3.0f64 / 5.0).sqrt(), &c2(n, 2, Quaternion::ONE))]),
            ];
        }
        HpType::Complex(2) => {
            // w0 = e2 -> f4, Theta(i) = e1 -> f3
            let j_theta_i = f.apply_j(&c1(n, 2, Quaternion::ONE));
            let a = (2.0f64 / 5.0).sqrt();
            out.push(comb(
                n,
                &[(a, &m_vector(f, Quaternion::ONE, 1)), (-1.0 / s5, &j_theta_i.right_mul(i)), (a, &c2(n, 3, Quaternion::ONE))],
            ));
            out.push(comb(n, &[(a, &m_vector(f, i, 1)), (-1.0 / s5, &j_theta_i), (a, &c2(n, 3, i))]));
        }
        HpType::Quaternionic(2) => {
            for c in Quaternion::BASIS {
                let mut v = m_vector(f, c, 1);
                for a in [Quaternion::I, Quaternion::J, Quaternion::K] {
                    let jt = f.apply_j(&c1(n, theta_row(a), Quaternion::ONE));
                    v = jt.right_mul(c.conj() * a).axpy(-1.0 / s2, &v);
                }
                out.push(normalized(v));
            }
        }
        _ => {}
    }
    out
}

/// Build `{x + J(Xi x)}` from an orthonormal family spanning `W` inside `L+` of
/// the standard frame and the matrix of `Xi` on that family; `Xi` must be
/// orthogonal with `Xi^2 = -id`.
pub fn pi4_alternative_from(n: usize, w: &[TangentVector], xi: &DMatrix<f64>) -> Result<RealSubspace> {
    let d = w.len();
    if xi.shape() != (d, d) {
        return Err(G2Error::Descriptor(format!("Xi must be {d}x{d}")));
    }
    if (xi * xi + DMatrix::<f64>::identity(d, d)).abs().max() > 1e-10 {
        return Err(G2Error::Descriptor("Xi^2 = -id is violated".into()));
    }
    if (xi.transpose() * xi - DMatrix::<f64>::identity(d, d)).abs().max() > 1e-10 {
        return Err(G2Error::Descriptor("Xi is not orthogonal".into()));
    }
    let f = standard_frame(n)?;
    for (k, x) in w.iter().enumerate() {
        if x.apply(&f.e_minus).norm() > 1e-10 {
            return Err(G2Error::Descriptor(format!("W vector {k} is not in L+")));
        }
    }
    let vs: Vec<TangentVector> = (0..d)
        .map(|k| {
            let xi_x = (0..d).fold(TangentVector::zeros(n), |acc, m| w[m].axpy(xi[(m, k)], &acc));
            w[k].add(&f.apply_j(&xi_x)).scale(FRAC_1_SQRT_2)
        })
        .collect();
    RealSubspace::new(n, vs)
}

/// Kind of the alternative `pi/4` description.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pi4Kind {
    /// Totally real `W`, orthogonal `Xi`: type `P44(C, l)`.
    Complex,
    /// Totally complex `W`, anti-linear orthogonal `Xi`: type `P44(H, l)`.
    Quaternionic,
}

/// The alternative description of `P44(C, l)` and `P44(H, l)`; all entries
/// lie in `R + R i`.
pub fn construct_pi4_alternative(kind: Pi4Kind, l: usize, n: usize) -> Result<RealSubspace> {
    if l == 0 || 2 * l > n {
        return Err(G2Error::Descriptor(format!("alternative pi/4 form needs 1 <= 2l <= n (l = {l}, n = {n})")));
    }
    let scalars: &[Quaternion] = match kind {
        Pi4Kind::Complex => &[Quaternion::ONE],
        Pi4Kind::Quaternionic => &[Quaternion::ONE, Quaternion::I],
    };
    let s = scalars.len();
    let mut w = Vec::new();
    for row in 0..2 * l {
        for &c in scalars {
            w.push(c1(n, row, c));
        }
    }
    let d = w.len();
    // Xi(f_{2a} c) = f_{2a+1} conj'(c), Xi(f_{2a+1} c) = -f_{2a} conj'(c), conj' trivial for the real kind
    let mut xi = DMatrix::zeros(d, d);
    for a in 0..l {
        for (k, &c) in scalars.iter().enumerate() {
            let img = if kind == Pi4Kind::Quaternionic { c.conj() } else { c };
            let k_img = scalars.iter().position(|&x| x == img || x == -img).expect("closed");
            let sign = if scalars[k_img] == img { 1.0 } else { -1.0 };
            let (even, odd) = (2 * a * s, (2 * a + 1) * s);
            xi[(odd + k_img, even + k)] = sign;
            xi[(even + k_img, odd + k)] = -sign;
        }
    }
    pi4_alternative_from(n, &w, &xi)
}

/// A pseudorandom isotropy element (quaternionic QR of a seeded random matrix).
pub fn random_isotropy(n: usize, seed: u64) -> IsotropyElement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut unitary = |m: usize| -> QMatrix {
        loop {
            let cols: Vec<QVector> = (0..m)
                .map(|_| {
                    QVector(
                        (0..m)
                            .map(|_| {
                                Quaternion::new(
                                    rng.random_range(-1.0..1.0),
                                    rng.random_range(-1.0..1.0),
                                    rng.random_range(-1.0..1.0),
                                    rng.random_range(-1.0..1.0),
                                )
                            })
                            .collect(),
                    )
                })
                .collect();
            let q = gram_schmidt_h(&cols, 1e-6);
            if q.len() == m {
                return QMatrix::from_cols(&q).expect("square");
            }
        }
    };
    let b1 = unitary(2);
    let b2 = unitary(n);
    IsotropyElement::new(b1, b2).expect("QR factor is symplectic")
}

/// Congruent copy of `S` under a seeded random isotropy element.
pub fn randomize(s: &RealSubspace, seed: u64) -> Result<RealSubspace> {
    s.transform(&random_isotropy(s.n(), seed))
}

/// Answer of [`container_of`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "type")]
pub enum Containment {
    /// Properly contained in a system of this type.
    Container(LtsDescriptor),
    /// A maximal Lie triple system.
    Maximal,
    /// The system is all of `m`.
    WholeSpace,
}

/// The containing type from the inclusion table, or maximality.
pub fn container_of(d: &LtsDescriptor, n: usize) -> Result<Containment> {
    d.validate(n)?;
    use Containment::*;
    use HpType::*;
    use LtsDescriptor as D;
    let c = match d.canonical() {
        D::Geo { .. } => Container(D::PxP(Real(1), Real(1))),
        D::P0(Quaternionic(l)) if l == n => Maximal,
        D::P0(_) => Container(D::P0(Quaternionic(n))),
        D::S13(_) => Container(D::Sp2),
        D::P12(Real(l)) => Container(D::G2(Real(l + 1))),
        D::P12(Complex(l)) => Container(D::G2(Complex(l + 2))),
        D::P12(Sphere3) if n == 4 => Maximal,
        D::P12(Sphere3) => Container(D::P12(Quaternionic(1))),
        D::P12(Quaternionic(1)) if n == 5 => Container(D::P12(Quaternionic(2))),
        D::P12(Quaternionic(1)) => Container(D::G2(Quaternionic(5))),
        D::P12(Quaternionic(_)) if n == 5 => Maximal,
        D::P12(Quaternionic(_)) => Container(D::G2(Quaternionic(5))),
        D::P44(t) => Container(D::PxP(t, t)),
        D::S5 => Container(D::S1xS5(5)),
        D::G2(Quaternionic(l)) if l == n => WholeSpace,
        D::G2(Quaternionic(l)) if l + 1 == n => Maximal,
        D::G2(Quaternionic(_)) => Container(D::G2(Quaternionic(n - 1))),
        D::G2(Complex(l)) if l == n => Maximal,
        D::G2(Complex(_)) => Container(D::G2(Complex(n))),
        D::G2(Real(l)) if l == n => Container(D::G2(Complex(n))),
        D::G2(Real(_)) => Container(D::G2(Real(n))),
        D::G2(Sphere3) => unreachable!("rejected by validate"),
        D::PxP(Quaternionic(a), Quaternionic(b)) if a + b == n => Maximal,
        D::PxP(Quaternionic(a), Quaternionic(_)) => Container(D::PxP(Quaternionic(a), Quaternionic(n - a))),
        D::PxP(a, b) => Container(D::PxP(Quaternionic(a.dim()), Quaternionic(b.dim()))),
        D::S1xS5(l) if l < 5 => Container(D::S1xS5(5)),
        D::S1xS5(_) | D::Sp2 if n == 2 => Maximal,
        D::S1xS5(_) | D::Sp2 => Container(D::G2(Quaternionic(2))),
        D::Q3 => Container(D::G2(Complex(2))),
    };
    Ok(c)
}

/// Concrete inner and outer subspaces in compatible position, with containment checked.
pub fn containment_witness(d: &LtsDescriptor, n: usize) -> Result<(RealSubspace, RealSubspace)> {
    let outer = match container_of(d, n)? {
        Containment::Container(o) => o,
        other => return Err(G2Error::Domain(format!("{d} has no container at n = {n} ({other:?})"))),
    };
    let s_in = construct(d, n)?;
    let s_out = construct(&outer, n)?;
    if !contains(&s_out, &s_in) {
        let worst = s_in.basis().iter().map(|v| s_out.residual(v)).fold(0.0, f64::max);
        return Err(G2Error::Construction(format!(
            "standard {d} is not inside standard {outer} (residual {worst:.3e})"
        )));
    }
    Ok((s_in, s_out))
}

/// Facts from the classification tables.
#[derive(Clone, Debug, Serialize)]
pub struct TypeFacts {
    pub descriptor: LtsDescriptor,
    pub dim: usize,
    pub rank: usize,
    pub maximal: bool,
    pub whole_space: bool,
    pub isometry_type: String,
}

pub fn type_facts(d: &LtsDescriptor, n: usize) -> Result<TypeFacts> {
    let c = container_of(d, n)?;
    Ok(TypeFacts {
        descriptor: *d,
        dim: d.dim(),
        rank: d.rank(),
        maximal: c == Containment::Maximal,
        whole_space: c == Containment::WholeSpace,
        isometry_type: d.isometry_type(),
    })
}

/// All `HpType`s of quaternionic dimension at most `max_dim`.
pub fn hp_types_up_to(max_dim: usize) -> Vec<HpType> {
    let mut out = Vec::new();
    for l in 1..=max_dim {
        out.extend([HpType::Real(l), HpType::Complex(l), HpType::Quaternionic(l)]);
    }
    if max_dim >= 1 {
        out.push(HpType::Sphere3);
    }
    out.sort();
    out
}

/// Every descriptor valid at `n`, in canonical form, with a single generic
/// geodesic angle standing in for the `Geo` family.
pub fn all_descriptors(n: usize) -> Vec<LtsDescriptor> {
    let types = hp_types_up_to(n);
    let mut out = vec![LtsDescriptor::Geo { t: 0.3 }];
    for &t in &types {
        out.push(LtsDescriptor::P0(t));
    }
    out.extend([LtsDescriptor::S13(2), LtsDescriptor::S13(3)]);
    for &t in &types {
        out.push(LtsDescriptor::P12(t));
        out.push(LtsDescriptor::P44(t));
    }
    out.push(LtsDescriptor::S5);
    for &t in &types {
        out.push(LtsDescriptor::G2(t));
    }
    for (i, &a) in types.iter().enumerate() {
        for &b in &types[i..] {
            out.push(LtsDescriptor::PxP(a, b));
        }
    }
    out.extend((2..=5).map(LtsDescriptor::S1xS5));
    out.extend([LtsDescriptor::Sp2, LtsDescriptor::Q3]);
    out.retain(|d| d.validate(n).is_ok());
    out
}

/// Check that a family is orthonormal (used by tests on hand-built families).
pub fn gram_defect(vs: &[TangentVector]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, u) in vs.iter().enumerate() {
        for (j, v) in vs.iter().enumerate() {
            let t = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((inner(u, v) - t).abs());
        }
    }
    worst
}
