//! A kink shifts the table by (+1, +3) or (-1, -3); the rest is unchanged.

use khovanov::complex::build_complex;
use khovanov::diagram::{apply_r1, torus_diagram, R1Site};
use khovanov::homology::{compute_homology, tables_shifted};

fn main() -> khovanov::Result<()> {
    let d = torus_diagram(3)?;
    let h = compute_homology(&build_complex(&d))?;
    for sign in [1, -1] {
        let kinked = apply_r1(&d, R1Site::Arc(d.arcs()[0]), sign)?;
        let k = compute_homology(&build_complex(&kinked))?;
        let s = sign as i64;
        println!(
            "kink of sign {sign:+}: shift by ({s:+},{:+}) {}",
            3 * s,
            tables_shifted(&k, &h, s, 3 * s)
        );
        print!("{}", k.render_table());
    }
    Ok(())
}
