use g2lts::cartan::{m_vector, standard_frame};
use g2lts::constructors::{
    all_descriptors, construct, construct_pi4_alternative, container_of, containment_witness, randomize,
    Containment, LtsDescriptor, Pi4Kind,
};
use g2lts::lts::{is_lts, rank_of};
use g2lts::model::{curvature, curvature_blocks, TangentVector};
use g2lts::qlinalg::HpType;
use g2lts::Quaternion;

#[test]
fn every_type_is_closed_with_table_dimension_and_rank() {
    for n in 2..=6 {
        for d in all_descriptors(n) {
            let s = construct(&d, n).unwrap();
            let (ok, res) = is_lts(&s, 1e-9);
            assert!(ok, "{d} at n = {n} is not closed (residual {res:.3e})");
            assert_eq!(s.dim(), d.dim(), "{d} at n = {n}");
            assert_eq!(rank_of(&s).unwrap(), d.rank(), "{d} at n = {n}");
        }
    }
}

#[test]
fn randomized_copies_stay_closed() {
    for n in [2, 5] {
        for (k, d) in all_descriptors(n).into_iter().enumerate() {
            let s = randomize(&construct(&d, n).unwrap(), k as u64).unwrap();
            let (ok, res) = is_lts(&s, 1e-8);
            assert!(ok, "{d} at n = {n} randomized: residual {res:.3e}");
        }
    }
}

#[test]
fn inclusion_table_in_standard_position() {
    for n in 2..=7 {
        for d in all_descriptors(n) {
            if let Containment::Container(_) = container_of(&d, n).unwrap() {
                containment_witness(&d, n).unwrap_or_else(|e| panic!("{d} at n = {n}: {e}"));
            }
        }
    }
}

#[test]
fn whole_space_is_the_quaternionic_grassmannian_type() {
    for n in 2..=5 {
        let d = LtsDescriptor::G2(HpType::Quaternionic(n));
        assert_eq!(container_of(&d, n).unwrap(), Containment::WholeSpace);
        assert_eq!(construct(&d, n).unwrap().dim(), 8 * n);
    }
}

#[test]
fn pi4_alternative_forms_match_dimensions() {
    for n in 2..=6 {
        for l in 1..=n / 2 {
            let c = construct_pi4_alternative(Pi4Kind::Complex, l, n).unwrap();
            assert_eq!(c.dim(), 2 * l);
            assert!(is_lts(&c, 1e-9).0);
            let h = construct_pi4_alternative(Pi4Kind::Quaternionic, l, n).unwrap();
            assert_eq!(h.dim(), 4 * l);
            assert!(is_lts(&h, 1e-9).0);
            assert!(h.basis().iter().all(|v| v.is_complex_entry(1e-12)));
        }
    }
}

#[test]
fn block_curvature_agrees_with_direct_formula() {
    let n = 4;
    let f = standard_frame(n).unwrap();
    let mut side: Vec<TangentVector> = Vec::new();
    for row in 0..n {
        for q in Quaternion::BASIS {
            side.push(TangentVector::elementary(n, 0, row, q));
            side.push(TangentVector::elementary(n, 1, row, q));
        }
    }
    let ws = [m_vector(&f, Quaternion::J, 1), f.h_plus.clone(), TangentVector::elementary(n, 1, 3, Quaternion::K)];
    for (i, u) in side.iter().enumerate().step_by(3) {
        for v in side.iter().skip(i % 5).step_by(5) {
            for w in &ws {
                let a = curvature(u, v, w);
                let b = curvature_blocks(u, v, w, &f).unwrap();
                assert!(a.sub(&b).max_abs() < 1e-12, "block formula mismatch");
            }
        }
    }
}

#[test]
fn classifier_recovers_every_randomized_type() {
    use g2lts::classify::classify;
    for n in 2..=5 {
        for (k, d) in all_descriptors(n).into_iter().enumerate() {
            let s = randomize(&construct(&d, n).unwrap(), 17 + k as u64).unwrap();
            let got = classify(&s).unwrap_or_else(|e| panic!("{d} at n = {n}: {e}"));
            assert!(got.same_type(&d), "{d} at n = {n} classified as {got}");
        }
    }
}
