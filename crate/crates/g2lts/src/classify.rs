//! Recognition of the type of a Lie triple system from intrinsic invariants:
//! rank, characteristic angle, the spectrum of the Jacobi operator on a
//! Cartan subalgebra and, for `phi = 0`, the common kernel.

use std::f64::consts::FRAC_PI_4;

use serde::Serialize;

use crate::cartan::{canonical_representation, char_angle, jacobi_spectrum};
use crate::constructors::{all_descriptors, arctan_half, arctan_third, LtsDescriptor};
use crate::error::{G2Error, Result};
use crate::lts::{cartan_of, choose_h, common_kernel_dim, is_lts, RealSubspace};
use crate::qlinalg::HpType;

const ANGLE_TOL: f64 = 1e-6;
const EIG_TOL: f64 = 1e-6;
const CLOSURE_TOL: f64 = 1e-8;

/// `tan` of the direction inside the Cartan subalgebra used for rank 2 systems.
const RANK2_SLOPE: f64 = 0.2;

/// Everything the classifier looked at.
#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub descriptor: LtsDescriptor,
    pub dim: usize,
    pub rank: usize,
    /// Characteristic angle of the Cartan direction (rank 1 only).
    pub phi: Option<f64>,
    /// Jacobi spectrum on `S` of the unit vector used.
    pub spectrum: Vec<(f64, usize)>,
    /// Multiplicities of `lambda1, lambda2, lambda3, lambda4, 2lambda1, 2lambda2` (rank 2 only).
    pub multiplicities: Option<[usize; 6]>,
}

/// Type of a Lie triple system.
pub fn classify(s: &RealSubspace) -> Result<LtsDescriptor> {
    Ok(classify_detailed(s)?.descriptor)
}

pub fn classify_detailed(s: &RealSubspace) -> Result<Classification> {
    if s.dim() == 0 {
        return Err(G2Error::Unrecognized("the zero subspace has no type".into()));
    }
    let (ok, res) = is_lts(s, CLOSURE_TOL);
    if !ok {
        return Err(G2Error::Unrecognized(format!("not a Lie triple system (residual {res:.3e})")));
    }
    let cartan = cartan_of(s)?;
    match cartan.len() {
        1 => classify_rank1(s, &cartan[0]),
        _ => classify_rank2(s, &cartan),
    }
}

/// Multiplicity of eigenvalue `target` in a clustered spectrum; `None` if some
/// eigenvalue is outside `allowed`.
fn multiplicities(spectrum: &[(f64, usize)], allowed: &[f64]) -> Option<Vec<usize>> {
    let mut out = vec![0; allowed.len()];
    for &(val, m) in spectrum {
        let k = allowed.iter().position(|&a| (val - a).abs() <= EIG_TOL)?;
        out[k] += m;
    }
    Some(out)
}

fn unrecognized<T>(what: String) -> Result<T> {
    Err(G2Error::Unrecognized(what))
}

fn classify_rank1(s: &RealSubspace, h: &crate::model::TangentVector) -> Result<Classification> {
    let d = s.dim();
    let h = h.scale(1.0 / h.norm());
    let phi = char_angle(&h)?;
    let spectrum = jacobi_spectrum(&h, Some(s))?;
    let near = |x: f64| (phi - x).abs() <= ANGLE_TOL;
    let report = |descriptor: LtsDescriptor| Classification {
        descriptor,
        dim: d,
        rank: 1,
        phi: Some(phi),
        spectrum: spectrum.clone(),
        multiplicities: None,
    };
    if d == 1 {
        let t = [0.0, arctan_half(), FRAC_PI_4].into_iter().find(|&x| near(x)).unwrap_or(phi);
        return Ok(report(LtsDescriptor::Geo { t }.canonical()));
    }
    // eigenvalues kappa (root alpha) and 4 kappa (root 2 alpha), plus 0 on R h
    let kappa = if near(0.0) {
        1.0
    } else if near(arctan_half()) {
        0.2
    } else if near(FRAC_PI_4) {
        0.5
    } else if near(arctan_third()) {
        0.4
    } else {
        return unrecognized(format!("rank 1 system with characteristic angle {phi}"));
    };
    let Some(m) = multiplicities(&spectrum, &[0.0, kappa, 4.0 * kappa]) else {
        return unrecognized(format!("Jacobi spectrum {spectrum:?} does not fit curvature {kappa}"));
    };
    if m[0] != 1 {
        return unrecognized(format!("rank 1 system with {}-dimensional flat", m[0]));
    }
    let w = m[2] + 1;
    let tau = |w: usize| -> Result<HpType> {
        if !d.is_multiple_of(w) {
            return unrecognized(format!("dimension {d} is not a multiple of width {w}"));
        }
        HpType::from_width(w, d / w).ok_or_else(|| G2Error::Unrecognized(format!("no HP-type of width {w}, dim {}", d / w)))
    };
    let desc = if near(arctan_third()) {
        if m[2] != 0 {
            return unrecognized("sphere with non-constant curvature".into());
        }
        LtsDescriptor::S13(d)
    } else if near(0.0) {
        if common_kernel_dim(s) == 0 {
            match tau(w)? {
                // `U + J(U)` of a one-dimensional `U` has twice the width of `U`
                HpType::Real(2) => LtsDescriptor::G2(HpType::Real(1)),
                HpType::Complex(2) => LtsDescriptor::G2(HpType::Complex(1)),
                HpType::Quaternionic(2) => LtsDescriptor::G2(HpType::Quaternionic(1)),
                t => return unrecognized(format!("flat-kernel system of unexpected shape {t}")),
            }
        } else {
            LtsDescriptor::P0(tau(w)?)
        }
    } else if near(arctan_half()) {
        LtsDescriptor::P12(tau(w)?)
    } else if m[2] == 4 && d == 5 {
        LtsDescriptor::S5
    } else {
        LtsDescriptor::P44(tau(w)?)
    };
    Ok(report(desc))
}

/// Root multiplicities predicted for a rank 2 type in the standard frame.
pub fn rank2_multiplicities(d: &LtsDescriptor) -> Option<[usize; 6]> {
    let t = match *d {
        LtsDescriptor::G2(tau) if tau.dim() >= 2 => {
            let (w, l) = (tau.width(), tau.dim());
            [w * (l - 2), w * (l - 2), w, w, w - 1, w - 1]
        }
        LtsDescriptor::PxP(a, b) => {
            [a.width() * (a.dim() - 1), b.width() * (b.dim() - 1), 0, 0, a.width() - 1, b.width() - 1]
        }
        LtsDescriptor::S1xS5(l) => [0, 0, 0, l - 1, 0, 0],
        LtsDescriptor::Sp2 => [0, 0, 2, 2, 2, 2],
        LtsDescriptor::Q3 => [0, 0, 1, 1, 1, 1],
        _ => return None,
    };
    Some(t)
}

/// Representative of a multiplicity tuple modulo swapping the two Cartan
/// directions and reversing the sign of one of them.
fn canonical_tuple(t: [usize; 6]) -> [usize; 6] {
    let [a, b, c, d, e, f] = t;
    [[a, b, c, d, e, f], [b, a, c, d, f, e], [a, b, d, c, e, f], [b, a, d, c, f, e]]
        .into_iter()
        .min()
        .expect("four variants")
}

fn classify_rank2(s: &RealSubspace, cartan: &[crate::model::TangentVector]) -> Result<Classification> {
    let n = s.n();
    let h0 = choose_h(cartan)?;
    let frame = canonical_representation(&h0)?.frame;
    let sl = RANK2_SLOPE.atan();
    let h = frame.h_plus.scale(sl.cos()).add(&frame.h_minus.scale(sl.sin()));
    let spectrum = jacobi_spectrum(&h, Some(s))?;
    let c2 = sl.cos().powi(2);
    let r = RANK2_SLOPE;
    // squared root values of lambda1, lambda2, lambda3, lambda4, 2lambda1, 2lambda2
    let vals = [0.0, c2, r * r * c2, (1.0 + r).powi(2) * c2, (1.0 - r).powi(2) * c2, 4.0 * c2, 4.0 * r * r * c2];
    let Some(m) = multiplicities(&spectrum, &vals) else {
        return unrecognized(format!("Jacobi spectrum {spectrum:?} is not a restriction of the root system"));
    };
    if m[0] != 2 {
        return unrecognized(format!("rank 2 system with {}-dimensional flat at a regular vector", m[0]));
    }
    let tuple = [m[1], m[2], m[3], m[4], m[5], m[6]];
    let key = canonical_tuple(tuple);
    let matches: Vec<LtsDescriptor> = all_descriptors(n)
        .into_iter()
        .filter(|d| d.rank() == 2 && rank2_multiplicities(d).map(canonical_tuple) == Some(key))
        .collect();
    match matches.as_slice() {
        [d] => Ok(Classification {
            descriptor: *d,
            dim: s.dim(),
            rank: 2,
            phi: None,
            spectrum,
            multiplicities: Some(tuple),
        }),
        [] => unrecognized(format!("no rank 2 type with root multiplicities {tuple:?} at n = {n}")),
        many => unrecognized(format!(
            "multiplicities {tuple:?} fit several types: {}",
            many.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", ")
        )),
    }
}
