//! Orbit tangent spaces inside the exterior cube of a 6-dimensional symplectic space.

use g2lts::embeddings::{build_wedge, complex_restriction, leibniz_defect, real_restriction, sp3_orbit_tangent};

fn main() -> g2lts::Result<()> {
    let ws = build_wedge(0)?;
    println!("{:?}", ws.dims());
    for r in [sp3_orbit_tangent(&ws)?, complex_restriction(&ws)?, real_restriction(&ws)?] {
        println!(
            "target {:<8} dim {:>2} closed {} classified {:?} invariance {:.1e}",
            r.target.to_string(),
            r.dim,
            r.is_lts,
            r.classified_as.map(|d| d.to_string()),
            r.invariance_residual
        );
    }
    println!("Leibniz defect {:.1e}", leibniz_defect(20, 1));
    Ok(())
}
