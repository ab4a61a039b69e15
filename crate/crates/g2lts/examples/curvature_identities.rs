//! Curvature identities on the lambda1 and lambda2 root spaces, as printed and corrected.

use g2lts::identities::{check_corrected, check_printed};

fn main() -> g2lts::Result<()> {
    let n = 4;
    for (name, checks) in [("printed", check_printed(n, 100, 0, 1e-9)?), ("corrected", check_corrected(n, 100, 0, 1e-9)?)] {
        println!("{name}:");
        for c in checks {
            println!("  {:<3} {:<5} residual {:.2e}  {}", c.item, c.holds, c.residual, c.statement);
        }
    }
    Ok(())
}
