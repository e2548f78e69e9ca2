//! Kauffman bracket by the state sum and by the enhanced-state sum, and the
//! skein relation at every crossing.

use khovanov::bracket::{bracket_enhanced_sum, bracket_state_sum, skein_check};
use khovanov::diagram::{braid_closure, torus_diagram, LinkDiagram};

fn main() -> khovanov::Result<()> {
    let diagrams = [
        ("empty", LinkDiagram::empty()),
        ("Hopf link", torus_diagram(2)?),
        ("trefoil", torus_diagram(3)?),
        ("figure eight", braid_closure(3, &[1, -2, 1, -2])?),
    ];
    for (name, d) in &diagrams {
        let states = bracket_state_sum(d);
        let enhanced = bracket_enhanced_sum(d);
        let skein = (0..d.crossing_count())
            .map(|v| skein_check(d, v))
            .collect::<Result<Vec<_>, _>>()?;
        println!("{name:>12}: {states}");
        println!(
            "{:>12}  enhanced sum agrees: {}, skein holds: {}",
            "",
            enhanced == states,
            skein.iter().all(|&s| s)
        );
    }
    Ok(())
}
