//! Root space decomposition of the tangent space and the characteristic angle.

use g2lts::cartan::{canonical_representation, char_angle, jacobi_spectrum, root_data, standard_frame};
use g2lts::constructors::random_isotropy;
use g2lts::model::isotropy_act;

fn main() -> g2lts::Result<()> {
    let n = 3;
    let frame = standard_frame(n)?;
    for r in root_data(&frame, n)? {
        let (p, q) = r.label.coefficients();
        println!("{:>9} = {p} H+* + {q} H-*  multiplicity {}", r.label, r.multiplicity);
    }

    // Jacobi operator of a generic Cartan direction: eigenvalues lambda(H)^2
    let t = 0.2f64.atan();
    let h = frame.h_plus.scale(t.cos()).add(&frame.h_minus.scale(t.sin()));
    for (value, mult) in jacobi_spectrum(&h, None)? {
        println!("Jacobi eigenvalue {value:.6} with multiplicity {mult}");
    }

    // the characteristic angle is an isotropy invariant
    let v = h.add(&frame.h_plus.scale(0.3));
    let moved = isotropy_act(&random_isotropy(n, 7), &v)?;
    println!("phi(v) = {:.12}, phi(g v) = {:.12}", char_angle(&v)?, char_angle(&moved)?);
    let rep = canonical_representation(&moved)?;
    println!("g v = {:.6} (cos phi H+ + sin phi H-) with phi = {:.6}", rep.norm, rep.phi);
    Ok(())
}
