//! Quaternionic inner products, Gram-Schmidt and position types of real subspaces.

use g2lts::qlinalg::{gram_schmidt_h, hermitian2_eigs, hp_type_of};
use g2lts::{QVector, Quaternion};

fn main() -> g2lts::Result<()> {
    let q = Quaternion::new(0.5, -1.0, 2.0, 0.25);
    println!("q = {q:?}, |q| = {:.6}, q q^-1 = {:?}", q.norm(), q * q.inverse()?);

    let v = QVector(vec![Quaternion::ONE, Quaternion::I, Quaternion::ZERO]);
    let w = QVector(vec![Quaternion::J, Quaternion::ONE, Quaternion::K]);
    println!("<v, w> = {:?}", v.dot(&w));

    let onb = gram_schmidt_h(&[v.clone(), w.clone()], 1e-10);
    println!("orthonormalized over H: {} vectors, <b0, b1> = {:?}", onb.len(), onb[0].dot(&onb[1]));

    let (l1, l2) = hermitian2_eigs(2.0, 1.0, Quaternion::new(0.0, 0.5, 0.5, 0.0));
    println!("eigenvalues of [[2, c], [conj c, 1]]: {l1:.6}, {l2:.6}");

    let e = |k| QVector::unit(3, k);
    let cases = [
        ("span{e0, e1}", vec![e(0), e(1)]),
        ("span{e0, e0 i}", vec![e(0), e(0).right_mul(Quaternion::I)]),
        ("e0 H", Quaternion::BASIS.iter().map(|&c| e(0).right_mul(c)).collect()),
    ];
    for (name, vs) in cases {
        let det = hp_type_of(&vs, 1e-8)?;
        println!("{name}: {det:?}");
    }
    Ok(())
}
