//! Where the B-smoothing has no homology in the neighbouring gradings, the
//! projection onto the A-smoothing must be injective, surjective or both.
//! Lists every such grading of T(2, 4) at crossing 0 with what was observed.

use khovanov::diagram::torus_diagram;
use khovanov::les::{check_beta, split_at_crossing, BetaPrediction};

fn main() -> khovanov::Result<()> {
    let split = split_at_crossing(&torus_diagram(4)?, 0)?;
    for g in split.parent().gradings().collect::<Vec<_>>() {
        let s = check_beta(&split, g.0, g.1)?;
        if s.prediction == BetaPrediction::Unknown {
            continue;
        }
        println!(
            "H({:>2},{:>3}) predicted {:<4?} injective {:<5} surjective {:<5} {}",
            g.0,
            g.1,
            s.prediction,
            s.observed_mono,
            s.observed_epi,
            if s.confirmed() { "ok" } else { "MISMATCH" }
        );
    }
    Ok(())
}
