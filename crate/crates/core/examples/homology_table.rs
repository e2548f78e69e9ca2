//! Framed Khovanov homology of a PD file, or of T(2, n) when given a number.
//!
//! cargo run --example homology_table -- crates/core/tests/fixtures/trefoil.pd
//! cargo run --example homology_table -- 7

use khovanov::complex::build_complex;
use khovanov::diagram::{parse_pd, torus_diagram};
use khovanov::homology::compute_homology;

fn main() -> khovanov::Result<()> {
    let arg = std::env::args().nth(1).unwrap_or_else(|| "3".into());
    let d = match arg.parse::<i64>() {
        Ok(n) => torus_diagram(n)?,
        Err(_) => parse_pd(&std::fs::read_to_string(&arg).expect("readable PD file"))?,
    };
    let table = compute_homology(&build_complex(&d))?;
    print!("{}", table.render_table());
    println!("{}", table.render_json());
    Ok(())
}
