//! Acceptance suite. Each test evaluates one criterion and prints a single
//! `PASS` or `FAIL` line. Two criteria contain statements that do not hold
//! numerically; their tests print `FAIL` and then assert that the failing items
//! are exactly the documented counterexamples, so any other regression still
//! fails the run.

use std::f64::consts::{FRAC_PI_4, PI};

use g2lts::cartan::{jacobi_spectrum, root_data, standard_frame, RootLabel};
use g2lts::classify::classify;
use g2lts::complex::{cla_c_construct, complex_admissible, m1, positions, table_positions};
use g2lts::constructors::{
    all_descriptors, arctan_third, construct, container_of, containment_witness, randomize, Containment, LtsDescriptor,
};
use g2lts::embeddings::{
    build_wedge, complex_restriction, eta_invariance, geodesic_period, leibniz_defect, maximal_torus_diameter,
    omega_invariance, real_restriction, return_defect, sp3_orbit_tangent, zeta_invariance,
};
use g2lts::identities::{check_corrected, check_printed};
use g2lts::lts::{contains, is_lts, rank_of, restricted_roots, sectional_range, RealSubspace};
use g2lts::model::{geodesic_at, plane_intersection_dim, sectional_curvature, Plane, TangentVector};
use g2lts::qlinalg::HpType;
use g2lts::Quaternion;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEEDS: [u64; 5] = [1, 2, 3, 4, 5];

fn report(k: usize, name: &str, ok: bool, detail: &str) -> bool {
    println!("criterion {k:>2} {name}: {} {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn random_unit(s: &RealSubspace, rng: &mut ChaCha8Rng) -> TangentVector {
    let v = s.basis().iter().fold(TangentVector::zeros(s.n()), |acc, b| b.axpy(rng.random_range(-1.0..1.0), &acc));
    v.scale(1.0 / v.norm())
}

#[test]
fn criterion_01_root_table() {
    let mut bad = Vec::new();
    for n in 2..=6 {
        let f = standard_frame(n).unwrap();
        // generic H = cos s H+ + sin s H- with tan s = 1/5: all root values distinct
        let (a, b) = (5.0 / 26f64.sqrt(), 1.0 / 26f64.sqrt());
        let h = f.h_plus.scale(a).add(&f.h_minus.scale(b));
        let spec = jacobi_spectrum(&h, None).unwrap();
        let expected = [4 * n - 8, 4 * n - 8, 4, 4, 3, 3];
        let labels = RootLabel::ALL;
        let got: Vec<usize> = labels
            .iter()
            .map(|l| {
                let mu = l.eval(a, b).powi(2);
                spec.iter().filter(|(e, _)| (e - mu).abs() < 1e-6).map(|(_, m)| *m).sum()
            })
            .collect();
        let from_data: Vec<usize> = labels
            .iter()
            .map(|l| root_data(&f, n).unwrap().iter().find(|d| d.label == *l).map_or(0, |d| d.basis.len()))
            .collect();
        if got != expected || from_data != expected {
            bad.push(format!("n={n}: spectrum {got:?}, root data {from_data:?}"));
        }
    }
    let ok = report(1, "root multiplicities (4n-8,4n-8,4,4,3,3), n=2..6", bad.is_empty(), &bad.join("; "));
    assert!(ok);
}

#[test]
fn criterion_02_closure() {
    let (mut count, mut worst, mut bad) = (0, 0.0f64, Vec::new());
    for n in 2..=7 {
        for d in all_descriptors(n) {
            let s = construct(&d, n).unwrap();
            let mut all = vec![s.clone()];
            all.extend(SEEDS.iter().map(|&seed| randomize(&s, seed).unwrap()));
            for t in &all {
                let (ok, r) = is_lts(t, 1e-9);
                worst = worst.max(r);
                count += 1;
                if !ok {
                    bad.push(format!("{d}@{n}"));
                }
            }
        }
    }
    let ok = report(2, "closure of all types and 5 randomized copies", bad.is_empty(), &format!("{count} subspaces, worst residual {worst:.2e} {bad:?}"));
    assert!(ok);
}

/// Dimension and rank as listed in the type table.
fn table_dim_rank(d: &LtsDescriptor) -> (usize, usize) {
    use LtsDescriptor::*;
    let wd = |t: HpType| t.width() * t.dim();
    match *d {
        Geo { .. } => (1, 1),
        P0(t) | P12(t) | P44(t) => (wd(t), 1),
        S13(l) => (l, 1),
        S5 => (5, 1),
        G2(t) if t.dim() == 1 => (2 * t.width(), 1),
        G2(t) => (2 * wd(t), 2),
        PxP(a, b) => (wd(a) + wd(b), 2),
        S1xS5(l) => (1 + l, 2),
        Sp2 => (10, 2),
        Q3 => (6, 2),
    }
}

#[test]
fn criterion_03_dimension_and_rank() {
    let mut bad = Vec::new();
    let mut count = 0;
    for n in 2..=7 {
        for d in all_descriptors(n) {
            let s = construct(&d, n).unwrap();
            let got = (s.dim(), rank_of(&s).unwrap());
            count += 1;
            if got != table_dim_rank(&d) {
                bad.push(format!("{d}@{n}: {got:?}"));
            }
        }
    }
    let ok = report(3, "dimension and rank table", bad.is_empty(), &format!("{count} instances {bad:?}"));
    assert!(ok);
}

#[test]
fn criterion_04_classifier_round_trip() {
    let mut bad = Vec::new();
    let mut count = 0;
    for n in 2..=7 {
        for d in all_descriptors(n) {
            let s = construct(&d, n).unwrap();
            for &seed in &SEEDS {
                count += 1;
                match classify(&randomize(&s, seed).unwrap()) {
                    Ok(got) if got.same_type(&d) => {}
                    other => bad.push(format!("{d}@{n}/{seed}: {other:?}")),
                }
            }
        }
    }
    let ok = report(4, "classify(randomize(construct(d))) = d", bad.is_empty(), &format!("{count} cases {bad:?}"));
    assert!(ok);
}

#[test]
fn criterion_05_curvature_values() {
    let mut notes = Vec::new();
    let mut ok = true;

    // minimal sectional curvature 1/5 on the explicit basis pairs, never below it when sampled
    let s = construct(&"P12:H2".parse().unwrap(), 5).unwrap();
    let b = s.basis();
    let mut basis_min = f64::INFINITY;
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            basis_min = basis_min.min(sectional_curvature(&b[i], &b[j]).unwrap());
        }
    }
    let (sampled_min, _) = sectional_range(&s, 500, 9).unwrap();
    ok &= (basis_min - 0.2).abs() <= 1e-6 && sampled_min >= 0.2 - 1e-6;
    notes.push(format!("P12:H2 basis min {basis_min:.9}, sampled min {sampled_min:.9}"));

    for l in 2..=3 {
        let (lo, hi) = sectional_range(&construct(&LtsDescriptor::S13(l), 4).unwrap(), 200, 3).unwrap();
        ok &= (lo - 0.4).abs() <= 1e-9 && (hi - 0.4).abs() <= 1e-9;
        notes.push(format!("S13:{l} in [{lo:.12}, {hi:.12}]"));
    }
    let (lo, hi) = sectional_range(&construct(&LtsDescriptor::S5, 3).unwrap(), 200, 3).unwrap();
    ok &= (lo - 2.0).abs() <= 1e-9 && (hi - 2.0).abs() <= 1e-9;
    notes.push(format!("S5 in [{lo:.12}, {hi:.12}]"));

    // holomorphic planes span{v, v i} of the complex projective type
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for l in 1..=3 {
        let s = construct(&LtsDescriptor::P0(HpType::Complex(l)), 4).unwrap();
        for _ in 0..20 {
            let v = random_unit(&s, &mut rng);
            let vi = v.right_mul(Quaternion::I);
            assert!(s.residual(&vi) < 1e-12);
            worst = worst.max((sectional_curvature(&v, &vi).unwrap() - 4.0).abs());
        }
    }
    ok &= worst <= 1e-9;
    notes.push(format!("holomorphic deviation from 4: {worst:.2e}"));
    let ok = report(5, "curvature values", ok, &notes.join("; "));
    assert!(ok);
}

#[test]
fn criterion_06_geodesic_periods() {
    let n = 3;
    let mut ok = true;
    let mut notes = Vec::new();
    for (t, expect) in [(FRAC_PI_4, PI * 2f64.sqrt()), (arctan_third(), PI * 10f64.sqrt())] {
        let period = geodesic_period(t).unwrap();
        ok &= period.is_some_and(|p| (p - expect).abs() <= 1e-9);
        // closest return on a 1e-6 grid around the predicted time sits at the predicted time
        let near: Vec<(f64, f64)> = (-10..=10)
            .map(|k| {
                let s = expect + k as f64 * 1e-6;
                (s, return_defect(t, s, n).unwrap())
            })
            .collect();
        let best = near.iter().cloned().fold((0.0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
        ok &= (best.0 - expect).abs() < 0.5e-6 && best.1 <= 1e-9;
        // no earlier return
        let earlier = (1..=50).map(|k| return_defect(t, expect * k as f64 / 51.0, n).unwrap()).fold(f64::INFINITY, f64::min);
        ok &= earlier > 1e-3;
        notes.push(format!("t={t:.6}: period {period:?}, defect at prediction {:.1e}, min earlier defect {earlier:.3}", best.1));
    }
    let diameter = maximal_torus_diameter(400);
    let half = PI * 10f64.sqrt() / 2.0;
    ok &= (diameter - PI / 2f64.sqrt()).abs() <= 1e-9 && half > diameter;
    notes.push(format!("torus diameter {diameter:.9} < {half:.9}"));
    let ok = report(6, "geodesic periods and diameter excess", ok, &notes.join("; "));
    assert!(ok);
}

#[test]
fn criterion_07_isoclinic_property() {
    let n = 4;
    let origin = Plane::origin(n);
    let mut types: Vec<LtsDescriptor> = all_descriptors(n).into_iter().filter(|d| matches!(d, LtsDescriptor::P44(_))).collect();
    types.push(LtsDescriptor::S5);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut bad = Vec::new();
    let mut seen = [0usize; 3];
    for d in &types {
        let s = randomize(&construct(d, n).unwrap(), 8).unwrap();
        for _ in 0..100 {
            let v = random_unit(&s, &mut rng);
            // 19 random times and the return time, where the planes coincide
            for k in 0..20 {
                let t = if k == 0 { PI * 2f64.sqrt() } else { rng.random_range(0.0..2.0 * PI) };
                let k = plane_intersection_dim(&geodesic_at(&v, t).unwrap(), &origin).unwrap();
                seen[k.min(2)] += 1;
                if k == 1 {
                    bad.push(format!("{d} t={t}"));
                }
            }
        }
    }
    let ok = report(7, "intersection dimension never 1", bad.is_empty(), &format!("{} types, counts of dim 0/1/2: {seen:?}", types.len()));
    assert!(ok);
}

#[test]
fn criterion_08_curvature_identities() {
    let printed = check_printed(4, 100, 21, 1e-9).unwrap();
    let failing: Vec<&str> = printed.iter().filter(|c| !c.holds).map(|c| c.item.as_str()).collect();
    let detail = printed.iter().map(|c| format!("{}:{:.1e}", c.item, c.residual)).collect::<Vec<_>>().join(" ");
    report(8, "curvature identities between root spaces", failing.is_empty(), &detail);
    // documented counterexamples: both parts of (b) have the opposite sign, both parts of (e) are wrong
    assert_eq!(failing, ["b1", "b2", "e1", "e2"]);
    let corrected = check_corrected(4, 100, 21, 1e-9).unwrap();
    println!("  corrected forms: {}", corrected.iter().map(|c| format!("{}:{:.1e}", c.item, c.residual)).collect::<Vec<_>>().join(" "));
    assert!(corrected.iter().all(|c| c.holds));
}

/// Maximal entries of the type table.
fn table_maximal(d: &LtsDescriptor, n: usize) -> bool {
    use HpType::*;
    use LtsDescriptor::*;
    match *d {
        P0(Quaternionic(l)) => l == n,
        P12(Sphere3) => n == 4,
        P12(Quaternionic(2)) => n == 5,
        G2(Quaternionic(1)) => n == 2,
        G2(Quaternionic(l)) => l + 1 == n,
        G2(Complex(l)) => l == n && n >= 2,
        PxP(Quaternionic(a), Quaternionic(b)) => a + b == n,
        S1xS5(5) | Sp2 => n == 2,
        _ => false,
    }
}

#[test]
fn criterion_09_inclusion_table() {
    let mut bad = Vec::new();
    let mut witnessed = 0;
    for n in 2..=7 {
        for d in all_descriptors(n) {
            let c = container_of(&d, n).unwrap();
            let maximal = matches!(c, Containment::Maximal);
            if maximal != table_maximal(&d, n) {
                bad.push(format!("{d}@{n}: {c:?}"));
            }
            if let Containment::Container(_) = c {
                match containment_witness(&d, n) {
                    Ok((inner, outer)) if contains(&outer, &inner) => witnessed += 1,
                    other => bad.push(format!("{d}@{n}: witness {:?}", other.err())),
                }
            }
        }
    }
    let ok = report(9, "inclusion table and maximality column", bad.is_empty(), &format!("{witnessed} witnesses {bad:?}"));
    assert!(ok);
}

#[test]
fn criterion_10_wedge_pipeline() {
    let mut ok = true;
    let mut notes = Vec::new();
    for seed in [0u64, 7] {
        let ws = build_wedge(seed).unwrap();
        let dims = ws.dims();
        ok &= dims.wedge3 == 20 && dims.v7_quaternionic == 7;
        let h = sp3_orbit_tangent(&ws).unwrap();
        let c = complex_restriction(&ws).unwrap();
        let r = real_restriction(&ws).unwrap();
        ok &= h.dim == 8 && h.matches_target() && h.target == LtsDescriptor::P12(HpType::Quaternionic(2));
        ok &= c.dim == 4 && c.matches_target() && c.target == LtsDescriptor::P12(HpType::Complex(2));
        ok &= r.dim == 2 && r.matches_target() && r.target == LtsDescriptor::P12(HpType::Real(2));
        let inv = [omega_invariance(&ws, 10, 1), eta_invariance(&ws, 10, 2), zeta_invariance(&ws, 10, 3)];
        ok &= inv.iter().all(|x| *x <= 1e-9);
        notes.push(format!("seed {seed}: dims {}/{}, orbit {} {:?}, C {} {:?}, R {} {:?}, invariance {}", dims.wedge3, dims.v7_quaternionic, h.dim, h.classified_as.map(|d| d.to_string()), c.dim, c.classified_as.map(|d| d.to_string()), r.dim, r.classified_as.map(|d| d.to_string()), inv.iter().map(|x| format!("{x:.1e}")).collect::<Vec<_>>().join("/")));
    }
    let leib = leibniz_defect(20, 3);
    ok &= leib <= 1e-10;
    notes.push(format!("Leibniz {leib:.1e}"));
    let ok = report(10, "exterior cube construction", ok, &notes.join("; "));
    assert!(ok);
}

#[test]
fn criterion_11_complex_grassmannian() {
    let mut mismatches = Vec::new();
    let mut other = Vec::new();
    let mut rows = 0;
    for n in 2..=4 {
        let s = m1(n).unwrap();
        if classify(&s).unwrap() != LtsDescriptor::G2(HpType::Complex(n)) {
            other.push(format!("m1@{n}"));
        }
        for d in all_descriptors(n) {
            if complex_admissible(&d, n).is_err() {
                if cla_c_construct(&d, n).is_ok() {
                    other.push(format!("{d}@{n} accepted"));
                }
                continue;
            }
            rows += 1;
            let s = cla_c_construct(&d, n).unwrap();
            if !is_lts(&s, 1e-9).0 || !classify(&s).unwrap().same_type(&d) {
                other.push(format!("{d}@{n} construction"));
            }
            let p = positions(&s).unwrap();
            let want = table_positions(&d).unwrap();
            if (p.j, p.qk) != want {
                mismatches.push(format!("{d}@{n}: got {:?}/{:?}, listed {:?}/{:?}", p.j, p.qk, want.0, want.1));
            }
        }
    }
    // excluded types must be rejected at every n where they are otherwise valid
    for s in ["P0:H1", "P0:S3", "S13:3", "P12:H1", "P12:S3", "S5", "G2:H1", "PxP:R1,H1", "PxP:S3,C1", "S1xS5:4", "S1xS5:5", "Sp2"] {
        let d: LtsDescriptor = s.parse().unwrap();
        if cla_c_construct(&d, 6).is_ok() {
            other.push(format!("{s} accepted"));
        }
    }
    report(11, "complex Grassmannian types and positions", mismatches.is_empty() && other.is_empty(), &format!("{rows} rows; {}", mismatches.join("; ")));
    assert!(other.is_empty(), "{other:?}");
    // documented counterexample: the 2-dimensional real arctan(1/2) type cannot be
    // totally real for the quaternionic structure
    assert!(mismatches.iter().all(|m| m.starts_with("P12:R2@") && m.contains("got TotallyReal/Neither")), "{mismatches:?}");
    assert_eq!(mismatches.len(), 2);
}

#[test]
fn criterion_12_restricted_root_properties() {
    let mut bad = Vec::new();
    let mut checked = 0;
    let mut splits = Vec::new();
    for n in 2..=5 {
        for d in all_descriptors(n) {
            let s = randomize(&construct(&d, n).unwrap(), 6).unwrap();
            let rr = restricted_roots(&s).unwrap();
            if rr.cartan_residual > 1e-8 {
                bad.push(format!("{d}@{n} cartan {:.1e}", rr.cartan_residual));
            }
            for r in &rr.roots {
                checked += 1;
                if r.ambient.is_empty() || r.space_residual > 1e-8 || r.dim_defect != 0 {
                    bad.push(format!("{d}@{n} root {:.4}: residual {:.1e} defect {}", r.value, r.space_residual, r.dim_defect));
                }
                if let Some(x) = r.riesz_residual {
                    if x > 1e-8 {
                        bad.push(format!("{d}@{n} riesz {x:.1e}"));
                    }
                }
                // the splitting of composite roots of the two sphere-like families
                let coeff = |label: RootLabel| {
                    let (ca, cb, dev) = r.split?;
                    let k = r.ambient.iter().position(|a| a.label == label)?;
                    Some((if k == 0 { ca } else { cb }, dev))
                };
                let expect: &[(RootLabel, f64)] = match d {
                    LtsDescriptor::S13(_) => &[(RootLabel::Lambda4, 0.6), (RootLabel::TwoLambda2, 0.4)],
                    LtsDescriptor::P12(_) if r.ambient.iter().any(|a| a.label == RootLabel::Lambda2) => {
                        &[(RootLabel::Lambda4, 0.4), (RootLabel::Lambda2, 0.6)]
                    }
                    _ => &[],
                };
                for &(label, want) in expect {
                    match coeff(label) {
                        Some((got, dev)) if (got - want).abs() <= 1e-8 && dev <= 1e-8 => splits.push(format!("{d}:{label}={got:.6}")),
                        got => bad.push(format!("{d}@{n} split {label}: {got:?}")),
                    }
                }
            }
        }
    }
    splits.sort();
    splits.dedup();
    let ok = report(12, "restricted roots, root spaces, Riesz vectors, splittings", bad.is_empty(), &format!("{checked} roots; {} {bad:?}", splits.join(" ")));
    assert!(ok);
}
