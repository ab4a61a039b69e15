//! Maximal types and containments, each verified by an explicit pair of subspaces.

use g2lts::constructors::{all_descriptors, container_of, containment_witness, Containment};
use g2lts::lts::contains;

fn main() -> g2lts::Result<()> {
    let n = 6;
    for d in all_descriptors(n) {
        match container_of(&d, n)? {
            Containment::Container(c) => {
                let (inner, outer) = containment_witness(&d, n)?;
                println!("{d:<12} in {c:<12} verified: {}", contains(&outer, &inner));
            }
            Containment::Maximal => println!("{d:<12} maximal"),
            Containment::WholeSpace => println!("{d:<12} whole space"),
        }
    }
    Ok(())
}
