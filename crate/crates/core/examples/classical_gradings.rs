//! Converts the framed trefoil table to classical (i, j) gradings using the
//! writhe of an orientation.

use khovanov::complex::build_complex;
use khovanov::diagram::{torus_diagram, OrientedDiagram};
use khovanov::homology::{classical_table, compute_homology};

fn main() -> khovanov::Result<()> {
    let d = torus_diagram(3)?;
    let w = OrientedDiagram::from_pd(d.clone())?.writhe()?;
    let framed = compute_homology(&build_complex(&d))?;
    println!("writhe {w}");
    print!("{}", framed.render_table());
    print!("{}", classical_table(&framed, w)?.render_table());
    Ok(())
}
