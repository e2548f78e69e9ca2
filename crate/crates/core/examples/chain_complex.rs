//! Builds the enhanced-state complex of the Hopf link, prints chain ranks
//! per grading, checks d^2 = 0 and dumps the differentials as triplets.

use khovanov::complex::{build_complex, verify_dd_zero};
use khovanov::diagram::torus_diagram;

fn main() -> khovanov::Result<()> {
    let c = build_complex(&torus_diagram(2)?);
    println!("{} enhanced states", c.total_rank());
    for g in c.gradings() {
        println!("C({:>2},{:>3}) rank {}", g.0, g.1, c.rank(g));
    }
    println!("d^2 = 0: {}", verify_dd_zero(&c));
    print!("{}", c.to_triplets());
    Ok(())
}
