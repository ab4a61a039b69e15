use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use approx::assert_abs_diff_eq;
use g2lts::cartan::{
    canonical_representation, char_angle, frame_isotropy, is_cartan, m_vector, project_cartan, root_data,
    standard_frame, RootLabel,
};
use g2lts::constructors::{all_descriptors, arctan_half, construct, random_isotropy, randomize, LtsDescriptor};
use g2lts::identities::subfield_check;
use g2lts::lts::{char_angle_spectrum, equal, is_lts, rank_of, restricted_roots, sectional_range, RealSubspace};
use g2lts::model::{
    curvature, curvature_blocks, geodesic_at, isotropy_act, metric, plane_intersection_dim, Plane, TangentVector,
};
use g2lts::qlinalg::{hermitian2_eigs, hp_type_of, HpType};
use g2lts::{QMatrix, QVector, Quaternion};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn quat() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-1.0f64..1.0).prop_map(Quaternion::from)
}

fn unit_quat() -> impl Strategy<Value = Quaternion> {
    quat().prop_filter("non-zero", |q| q.norm() > 0.1).prop_map(|q| q * (1.0 / q.norm()))
}

fn qvec(len: usize) -> impl Strategy<Value = QVector> {
    prop::collection::vec(quat(), len).prop_map(QVector)
}

fn tangent(n: usize) -> impl Strategy<Value = TangentVector> {
    (qvec(n), qvec(n)).prop_map(|(a, b)| TangentVector::from_cols(a, b).unwrap())
}

fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
    (a - b).norm() <= tol
}

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn inner_product_is_sesquilinear(v in qvec(5), w in qvec(5), c in quat()) {
        prop_assert!(close(v.right_mul(c).dot(&w), c.conj() * v.dot(&w), 1e-12));
        prop_assert!(close(v.dot(&w.right_mul(c)), v.dot(&w) * c, 1e-12));
    }

    #[test]
    fn adjoint_is_the_metric_adjoint(rows in prop::collection::vec(prop::collection::vec(quat(), 4), 4), v in qvec(4), w in qvec(4)) {
        let m = QMatrix::from_rows(rows).unwrap();
        let lhs = m.apply(&v).unwrap().dot(&w);
        let rhs = v.dot(&m.adjoint().apply(&w).unwrap());
        prop_assert!(close(lhs, rhs, 1e-10));
    }

    #[test]
    fn hermitian_eigs_have_trace_and_determinant(a in -3.0f64..3.0, b in -3.0f64..3.0, c in quat()) {
        let (l1, l2) = hermitian2_eigs(a, b, c);
        prop_assert!(l1 >= l2);
        prop_assert!((l1 + l2 - (a + b)).abs() <= 1e-12);
        prop_assert!((l1 * l2 - (a * b - c.norm_sq())).abs() <= 1e-10);
    }

    #[test]
    fn hp_type_is_invariant_under_right_multiplication(q in unit_quat(), pick in 0usize..3) {
        let m = 4;
        let e = |k: usize| QVector::unit(m, k);
        let vectors = match pick {
            0 => vec![e(0), e(1)],
            1 => vec![e(0), e(0).right_mul(Quaternion::I), e(1), e(1).right_mul(Quaternion::I)],
            _ => Quaternion::BASIS.iter().map(|&c| e(0).right_mul(c)).collect(),
        };
        let before = hp_type_of(&vectors, 1e-8).unwrap().unwrap();
        let moved: Vec<QVector> = vectors.iter().map(|v| v.right_mul(q)).collect();
        let after = hp_type_of(&moved, 1e-8).unwrap().unwrap();
        prop_assert_eq!(before.kind, after.kind);
        if let (Some(u0), Some(u1)) = (before.unit, after.unit) {
            // (v q)(conj q u q) = (v u) q
            let expect = q.conj() * u0 * q;
            prop_assert!(close(u1, expect, 1e-8) || close(u1, -expect, 1e-8));
        }
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn first_bianchi_identity(u in tangent(3), v in tangent(3), w in tangent(3)) {
        let s = curvature(&u, &v, &w).add(&curvature(&v, &w, &u)).add(&curvature(&w, &u, &v));
        prop_assert!(s.max_abs() <= 1e-9);
    }

    #[test]
    fn curvature_pair_symmetry(u in tangent(3), v in tangent(3), w in tangent(3), z in tangent(3)) {
        let a = metric(&curvature(&u, &v, &w), &z).unwrap();
        let b = metric(&curvature(&w, &z, &u), &v).unwrap();
        prop_assert!((a - b).abs() <= 1e-9);
    }

    #[test]
    fn curvature_is_isotropy_equivariant(u in tangent(3), v in tangent(3), w in tangent(3), seed in any::<u64>()) {
        let g = random_isotropy(3, seed);
        let act = |x: &TangentVector| isotropy_act(&g, x).unwrap();
        let lhs = act(&curvature(&u, &v, &w));
        let rhs = curvature(&act(&u), &act(&v), &act(&w));
        prop_assert!(lhs.sub(&rhs).max_abs() <= 1e-9);
    }

    #[test]
    fn block_formulas_agree_with_curvature(a in qvec(4), b in qvec(4), w in tangent(4), side in (0usize..2, 0usize..2), seed in any::<u64>()) {
        let f = standard_frame(4).unwrap().transform(&random_isotropy(4, seed)).unwrap();
        let pick = |x: &QVector, s: usize| if s == 0 { f.map_plus(x) } else { f.map_minus(x) };
        let (u, v) = (pick(&a, side.0), pick(&b, side.1));
        let lhs = curvature(&u, &v, &w);
        let rhs = curvature_blocks(&u, &v, &w, &f).unwrap();
        prop_assert!(lhs.sub(&rhs).max_abs() <= 1e-10);
    }

    #[test]
    fn char_angle_is_isotropy_invariant(v in tangent(4), seed in any::<u64>()) {
        prop_assume!(v.norm() > 1e-3);
        let gv = isotropy_act(&random_isotropy(4, seed), &v).unwrap();
        prop_assert!((char_angle(&v).unwrap() - char_angle(&gv).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn equal_angle_vectors_are_connected(v in tangent(3), seed in any::<u64>()) {
        prop_assume!(v.norm() > 1e-3);
        let v = v.scale(1.0 / v.norm());
        let w = isotropy_act(&random_isotropy(3, seed), &v).unwrap();
        let (cv, cw) = (canonical_representation(&v).unwrap(), canonical_representation(&w).unwrap());
        let g = frame_isotropy(&cv.frame, &cw.frame).unwrap();
        prop_assert!(isotropy_act(&g, &v).unwrap().sub(&w).max_abs() <= 1e-8);
    }

    #[test]
    fn root_spaces_resolve_the_identity(v in tangent(4), seed in any::<u64>()) {
        let f = standard_frame(4).unwrap().transform(&random_isotropy(4, seed)).unwrap();
        let mut sum = project_cartan(&f, &v);
        for r in root_data(&f, 4).unwrap() {
            sum = sum.add(&r.project(&v));
        }
        prop_assert!(sum.sub(&v).max_abs() <= 1e-10);
    }

    #[test]
    fn pi4_geodesics_meet_the_base_in_zero_or_full_dimension(seed in any::<u64>(), t in 0.0f64..10.0) {
        let f = standard_frame(3).unwrap().transform(&random_isotropy(3, seed)).unwrap();
        let v = f.h_plus.add(&f.h_minus).scale(FRAC_1_SQRT_2);
        let p = geodesic_at(&v, t).unwrap();
        let d = plane_intersection_dim(&p, &Plane::origin(3)).unwrap();
        prop_assert!(d != 1);
    }
}

#[test]
fn root_vectors_are_jacobi_eigenvectors() {
    let n = 4;
    let f = standard_frame(n).unwrap().transform(&random_isotropy(n, 3)).unwrap();
    for k in 0..=8 {
        let ang = k as f64 * 0.37;
        let (a, b) = (ang.cos(), ang.sin());
        let z = f.h_plus.scale(a).add(&f.h_minus.scale(b));
        for r in root_data(&f, n).unwrap() {
            assert_eq!(r.basis.len(), r.multiplicity);
            let lam = r.label.eval(a, b);
            for x in &r.basis {
                let d = curvature(x, &z, &z).sub(&x.scale(lam * lam)).max_abs();
                assert!(d <= 1e-9, "{} at ({a:.2},{b:.2}): defect {d:.2e}", r.label);
            }
        }
    }
}

#[test]
fn root_multiplicities() {
    for n in 2..=6 {
        let f = standard_frame(n).unwrap();
        let got: Vec<usize> = root_data(&f, n).unwrap().iter().map(|r| r.multiplicity).collect();
        let want: Vec<usize> = RootLabel::ALL.iter().map(|l| l.multiplicity(n)).filter(|&m| m > 0).collect();
        assert_eq!(got, want);
    }
    let f = standard_frame(3).unwrap();
    let m: Vec<usize> = root_data(&f, 3).unwrap().iter().map(|r| r.multiplicity).collect();
    assert_eq!(m, [4, 4, 4, 4, 3, 3]);
}

#[test]
fn cartan_pairs_and_m_vectors() {
    let f = standard_frame(3).unwrap();
    assert!(is_cartan(&f.h_plus, &f.h_minus).unwrap());
    let m = m_vector(&f, Quaternion::ONE, 1);
    assert!(!is_cartan(&f.h_plus, &m).unwrap());
    assert!(is_cartan(&m, &m_vector(&f, Quaternion::ONE, -1)).unwrap());
    assert!(is_cartan(&f.h_plus, &f.h_plus.scale(2.0)).is_err());
    for c in [Quaternion::ONE, Quaternion::J, Quaternion::new(0.3, -0.4, 0.5, 0.1)] {
        for eps in [1, -1] {
            let m = m_vector(&f, c, eps);
            assert_abs_diff_eq!(metric(&m, &m).unwrap(), c.norm_sq(), epsilon = 1e-12);
            assert_abs_diff_eq!(metric(&m, &f.h_plus).unwrap(), 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(metric(&m, &f.h_minus).unwrap(), 0.0, epsilon = 1e-12);
        }
    }
    // M_{1,1} and M_{1,-1} are orthogonal
    assert_abs_diff_eq!(metric(&m_vector(&f, Quaternion::ONE, 1), &m_vector(&f, Quaternion::ONE, -1)).unwrap(), 0.0, epsilon = 1e-12);
}

#[test]
fn geodesic_identifications_hold_as_subspaces() {
    let n = 3;
    let pairs = [
        (LtsDescriptor::Geo { t: 0.0 }, LtsDescriptor::P0(HpType::Real(1))),
        (LtsDescriptor::Geo { t: arctan_half() }, LtsDescriptor::P12(HpType::Real(1))),
        (LtsDescriptor::Geo { t: FRAC_PI_4 }, LtsDescriptor::P44(HpType::Real(1))),
    ];
    for (a, b) in pairs {
        let (sa, sb) = (construct(&a, n).unwrap(), construct(&b, n).unwrap());
        assert!(equal(&sa, &sb), "{a} and {b} differ");
        assert!(a.same_type(&b));
    }
}

// root values depend on the chosen unit vector of the Cartan subspace, so the
// comparison uses root multiplicities and the Ricci spectrum
fn intrinsic_signature(s: &RealSubspace) -> (Vec<usize>, Vec<f64>) {
    let mut m: Vec<usize> = restricted_roots(s).unwrap().roots.iter().map(|r| r.multiplicity).collect();
    m.sort();
    let e = s.basis();
    let ric = nalgebra::DMatrix::from_fn(e.len(), e.len(), |a, b| {
        e.iter().map(|z| metric(&curvature(z, &e[a], &e[b]), z).unwrap()).sum::<f64>()
    });
    let mut ev: Vec<f64> = ric.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    (m, ev)
}

#[test]
fn product_types_are_symmetric() {
    let n = 5;
    for d in all_descriptors(n) {
        if let LtsDescriptor::PxP(a, b) = d {
            let s1 = construct(&LtsDescriptor::PxP(a, b), n).unwrap();
            let s2 = construct(&LtsDescriptor::PxP(b, a), n).unwrap();
            assert_eq!(s1.dim(), s2.dim());
            assert_eq!(rank_of(&s1).unwrap(), rank_of(&s2).unwrap());
            let (m1, r1) = intrinsic_signature(&s1);
            let (m2, r2) = intrinsic_signature(&s2);
            assert_eq!(m1, m2, "{d}");
            for (x, y) in r1.iter().zip(&r2) {
                assert!((x - y).abs() <= 1e-9, "{d}: {r1:?} vs {r2:?}");
            }
            let c1 = g2lts::classify::classify(&s1).unwrap();
            let c2 = g2lts::classify::classify(&s2).unwrap();
            assert!(c1.same_type(&c2));
        }
    }
}

#[test]
fn pi4_types_have_constant_angle() {
    for n in 2..=5 {
        for d in all_descriptors(n) {
            if matches!(d, LtsDescriptor::P44(_)) {
                let s = randomize(&construct(&d, n).unwrap(), 5).unwrap();
                let (lo, hi) = char_angle_spectrum(&s, 200, 11).unwrap();
                assert!((lo - FRAC_PI_4).abs() <= 1e-8 && (hi - FRAC_PI_4).abs() <= 1e-8, "{d} at n = {n}: [{lo}, {hi}]");
            }
        }
    }
}

#[test]
fn randomize_is_seed_stable_and_preserves_invariants() {
    let n = 4;
    for d in all_descriptors(n) {
        let s = construct(&d, n).unwrap();
        let a = randomize(&s, 42).unwrap();
        let b = randomize(&s, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.dim(), s.dim());
        assert!(is_lts(&a, 1e-8).0);
        assert_eq!(rank_of(&a).unwrap(), d.rank());
    }
}

#[test]
fn sphere_in_p12_has_curvature_four_fifths() {
    let s = randomize(&construct(&"P12:S3".parse().unwrap(), 4).unwrap(), 9).unwrap();
    let (lo, hi) = sectional_range(&s, 200, 1).unwrap();
    assert_abs_diff_eq!(lo, 0.8, epsilon = 1e-9);
    assert_abs_diff_eq!(hi, 0.8, epsilon = 1e-9);
}

#[test]
fn rank_two_types_meet_the_cartan_directions_in_a_subfield() {
    for n in 2..=4 {
        for (k, d) in all_descriptors(n).into_iter().enumerate() {
            if d.rank() != 2 {
                continue;
            }
            let s = randomize(&construct(&d, n).unwrap(), 100 + k as u64).unwrap();
            for r in subfield_check(&s).unwrap() {
                assert!(r.holds(1e-8), "{d} at n = {n}: {r:?}");
            }
        }
    }
}

#[test]
fn serde_round_trips() {
    let n = 3;
    let f = standard_frame(n).unwrap().transform(&random_isotropy(n, 4)).unwrap();
    let back: g2lts::cartan::Frame = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
    assert_eq!(back, f);
    for d in all_descriptors(n) {
        let s = randomize(&construct(&d, n).unwrap(), 1).unwrap();
        let back: RealSubspace = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
        let text = d.to_string();
        let parsed: LtsDescriptor = text.parse().unwrap();
        assert!(parsed.same_type(&d), "{text}");
        let json: LtsDescriptor = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
        assert!(json.same_type(&d));
    }
    let p = geodesic_at(&f.h_plus, 0.7).unwrap();
    let back: Plane = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
    assert_eq!(back, p);
}

#[test]
fn malformed_inputs_are_rejected() {
    assert!("P12:X3".parse::<LtsDescriptor>().is_err());
    assert!("Geo".parse::<LtsDescriptor>().is_err());
    assert!(LtsDescriptor::P12(HpType::Quaternionic(2)).validate(4).is_err());
    assert!(serde_json::from_str::<RealSubspace>(r#"{"n":2,"basis":[{"n":3}]}"#).is_err());
    let a = QVector::unit(4, 0);
    assert!(Plane::new(a.clone(), a).is_err());
}

#[test]
fn generic_geodesics_are_not_closed() {
    use g2lts::embeddings::geodesic_period;
    assert_eq!(geodesic_period(0.3).unwrap(), None);
    assert_eq!(geodesic_period(0.7).unwrap(), None);
    let p = geodesic_period((2.0f64 / 7.0).atan()).unwrap().unwrap();
    assert_abs_diff_eq!(p, std::f64::consts::PI * 53f64.sqrt(), epsilon = 1e-9);
}
