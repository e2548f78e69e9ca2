//! Compares the closed form for T(2, n) with direct computation.
//!
//! cargo run --release --example torus_closed_form -- 12

use std::time::Instant;

use khovanov::complex::build_complex;
use khovanov::diagram::torus_diagram;
use khovanov::homology::compute_homology;
use khovanov::torus::torus_kh;

fn main() -> khovanov::Result<()> {
    let max: i64 = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(8);
    for n in 1..=max {
        let start = Instant::now();
        let direct = compute_homology(&build_complex(&torus_diagram(n)?))?;
        let verdict = if direct == torus_kh(n)? {
            "match"
        } else {
            "MISMATCH"
        };
        println!(
            "T(2,{n:>2}): {:>2} groups  {verdict}  {:.2?}",
            direct.len(),
            start.elapsed()
        );
    }
    print!("{}", torus_kh(max)?.render_table());
    Ok(())
}
