//! Build every type at a given n, check closure, dimension and rank.

use g2lts::constructors::{all_descriptors, construct, randomize};
use g2lts::lts::{is_lts, rank_of, sectional_range};

fn main() -> g2lts::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(4);
    println!("{:<14} {:>4} {:>5} {:>11} {:>15}", "type", "dim", "rank", "residual", "curvature");
    for (k, d) in all_descriptors(n).into_iter().enumerate() {
        let s = randomize(&construct(&d, n)?, k as u64)?;
        let (ok, residual) = is_lts(&s, 1e-9);
        assert!(ok, "{d} is not closed");
        let curv = if s.dim() >= 2 {
            let (lo, hi) = sectional_range(&s, 200, 1)?;
            format!("[{lo:.3}, {hi:.3}]")
        } else {
            "-".into()
        };
        println!("{:<14} {:>4} {:>5} {:>11.2e}   {curv}", d.to_string(), s.dim(), rank_of(&s)?, residual);
    }
    Ok(())
}
