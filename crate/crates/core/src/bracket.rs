//! The unreduced Kauffman bracket, by the plain state sum and by the
//! enhanced state sum, plus an executable skein relation.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::diagram::LinkDiagram;
use crate::error::Result;
use crate::poly::LaurentPoly;
use crate::resolution::{sign_masks, KauffmanState, Marker, Resolver};

/// `Σ_s A^{σ(s)} (−A² − A⁻²)^{|D_s|}` over all Kauffman states.
pub fn bracket_state_sum(d: &LinkDiagram) -> LaurentPoly {
    let resolver = Resolver::new(d);
    let n = d.crossing_count();
    // tally (σ, |D_s|) first, then expand each distinct term once
    let tally: BTreeMap<(i64, usize), u64> = (0..1u64 << n)
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<(i64, usize), u64>, i| {
            let s = KauffmanState::from_lex_index(i, n);
            let circles = resolver.smooth_unchecked(&s).circle_count();
            *acc.entry((s.sigma(), circles)).or_default() += 1;
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        });
    let delta = LaurentPoly::delta();
    let mut total = LaurentPoly::zero();
    for ((sigma, circles), count) in tally {
        total += LaurentPoly::monomial(count, sigma) * delta.pow(circles as u32);
    }
    total
}

/// `Σ_S (−1)^{|D_s|} A^{σ(s) + 2τ(S)}` over all enhanced states.
pub fn bracket_enhanced_sum(d: &LinkDiagram) -> LaurentPoly {
    let resolver = Resolver::new(d);
    let n = d.crossing_count();
    let tally: BTreeMap<i64, i64> = (0..1u64 << n)
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<i64, i64>, i| {
            let s = KauffmanState::from_lex_index(i, n);
            let circles = resolver.smooth_unchecked(&s).circle_count();
            let sign = if circles % 2 == 0 { 1 } else { -1 };
            for minus in sign_masks(circles) {
                let tau = circles as i64 - 2 * minus.count_ones() as i64;
                *acc.entry(s.sigma() + 2 * tau).or_default() += sign;
            }
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        });
    let mut total = LaurentPoly::zero();
    for (e, c) in tally {
        total.add_term(e, BigInt::from(c));
    }
    total
}

/// Checks `[D] = A[D_A] + A⁻¹[D_B]` at crossing `v`, where `D_A` and `D_B`
/// are `D` with `v` smoothed.
pub fn skein_check(d: &LinkDiagram, v: usize) -> Result<bool> {
    let (da, _) = d.smooth_crossing(v, Marker::A)?;
    let (db, _) = d.smooth_crossing(v, Marker::B)?;
    let rhs = LaurentPoly::monomial(1, 1) * bracket_state_sum(&da)
        + LaurentPoly::monomial(1, -1) * bracket_state_sum(&db);
    Ok(bracket_state_sum(d) == rhs)
}
