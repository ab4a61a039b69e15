//! Types of the complex 2-Grassmannian and their position with respect to J and the
//! quaternionic Kaehler structure.

use g2lts::complex::{cla_c_construct, complex_admissible, positions, table_positions, StructureSpan};
use g2lts::constructors::all_descriptors;

fn main() -> g2lts::Result<()> {
    let n = 3;
    let st = StructureSpan::default();
    println!("quaternion relations defect {:.1e}", st.relations_defect(n)?);
    for d in all_descriptors(n) {
        if let Err(e) = complex_admissible(&d, n) {
            println!("{:<12} excluded ({e})", d.to_string());
            continue;
        }
        let p = positions(&cla_c_construct(&d, n)?)?;
        let listed = table_positions(&d);
        let flag = match listed {
            Some((j, qk)) if (j, qk) != (p.j, p.qk) => format!("  listed {j:?}/{qk:?}"),
            _ => String::new(),
        };
        println!("{:<12} J {:<12} QK {:<15}{flag}", d.to_string(), format!("{:?}", p.j), format!("{:?}", p.qk));
    }
    Ok(())
}
