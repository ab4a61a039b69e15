//! Closed geodesics, the torus diameter and the intersection property of pi/4 directions.

use std::f64::consts::{FRAC_PI_4, PI};

use g2lts::cartan::standard_frame;
use g2lts::constructors::{arctan_third, random_isotropy};
use g2lts::embeddings::{geodesic_period, maximal_torus_diameter, return_defect};
use g2lts::model::{geodesic_at, isotropy_act, plane_intersection_dim, Plane};

fn main() -> g2lts::Result<()> {
    for (name, t) in [("pi/4", FRAC_PI_4), ("arctan 1/3", arctan_third()), ("0.3", 0.3)] {
        match geodesic_period(t)? {
            Some(p) => println!("t = {name}: period {p:.9}, return defect {:.1e}", return_defect(t, p, 2)?),
            None => println!("t = {name}: not closed"),
        }
    }
    println!("maximal torus diameter {:.6} (pi/sqrt 2 = {:.6})", maximal_torus_diameter(400), PI / 2f64.sqrt());

    let n = 3;
    let frame = standard_frame(n)?;
    let v = frame.h_plus.add(&frame.h_minus).scale(0.5f64.sqrt());
    let v = isotropy_act(&random_isotropy(n, 2), &v)?;
    let mut counts = [0usize; 3];
    for k in 0..=40 {
        let t = k as f64 * PI * 2f64.sqrt() / 40.0;
        counts[plane_intersection_dim(&geodesic_at(&v, t)?, &Plane::origin(n))?] += 1;
    }
    println!("intersection dimensions 0/1/2 along a pi/4 geodesic: {counts:?}");
    Ok(())
}
