//! Recover the type of a Lie triple system given only a basis.

use g2lts::classify::classify_detailed;
use g2lts::constructors::{all_descriptors, construct, randomize};

fn main() -> g2lts::Result<()> {
    let n = 5;
    let mut wrong = 0;
    for (k, d) in all_descriptors(n).into_iter().enumerate() {
        let hidden = randomize(&construct(&d, n)?, 1000 + k as u64)?;
        let c = classify_detailed(&hidden)?;
        let ok = c.descriptor.same_type(&d);
        wrong += usize::from(!ok);
        println!("{:<14} -> {:<14} rank {} {}", d.to_string(), c.descriptor.to_string(), c.rank, if ok { "" } else { "MISMATCH" });
    }
    println!("{wrong} mismatches");
    Ok(())
}
