//! The long exact sequence at one crossing, with ranks of the induced maps.
//!
//! cargo run --example long_exact_sequence -- crates/core/tests/fixtures/figure_eight.pd 1

use khovanov::diagram::{parse_pd, torus_diagram};
use khovanov::les::{split_at_crossing, LongExactSequence};

fn main() -> khovanov::Result<()> {
    let mut args = std::env::args().skip(1);
    let d = match args.next() {
        Some(path) => parse_pd(&std::fs::read_to_string(&path).expect("readable PD file"))?,
        None => torus_diagram(3)?,
    };
    let v: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(0);
    let split = split_at_crossing(&d, v)?;
    print!(
        "{}",
        LongExactSequence::compute(&split).exactness().render_text()
    );
    Ok(())
}
