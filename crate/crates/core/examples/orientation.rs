//! Orients a PD diagram along its strands, prints the overlay and writhe.
//!
//! cargo run --example orientation -- crates/core/tests/fixtures/trefoil.pd

use khovanov::diagram::{emit_orientation, parse_pd, OrientedDiagram};

fn main() -> khovanov::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        eprintln!("usage: orientation FILE.pd");
        std::process::exit(2);
    });
    let text = std::fs::read_to_string(&path).expect("readable PD file");
    let od = OrientedDiagram::from_pd(parse_pd(&text)?)?;
    print!("{}", emit_orientation(&od));
    eprintln!("writhe {}", od.writhe()?);
    Ok(())
}
