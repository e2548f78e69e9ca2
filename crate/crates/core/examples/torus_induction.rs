//! Replays the inductive computation of H(T(2, n)) from H(T(2, n-1)): the
//! two smoothings at the first crossing, exactness, and the connecting map
//! from the bottom of T(2, n-1) into the framed unknot, which is
//! multiplication by 2 for odd n and zero for even n.

use khovanov::les::replay_torus_step;

fn main() -> khovanov::Result<()> {
    let max: i64 = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(7);
    for n in 3..=max {
        let s = replay_torus_step(n)?;
        println!(
            "T(2,{n}): smoothings ok {} / {}, table ok {}, exact {}, |degree| {} (expected {})",
            s.sub_matches,
            s.quotient_matches,
            s.parent_matches,
            s.exact,
            s.degree,
            s.predicted_degree
        );
    }
    Ok(())
}
