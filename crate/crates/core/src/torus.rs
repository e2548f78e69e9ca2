//! Closed forms for the homology of `T(2, n)` and of framed unknots, and
//! the degree of the connecting map used in the inductive computation.

use crate::error::{Error, Result};
use crate::homology::{AbelianGroup, HomologyTable};

/// Homology of the torus link `T(2, n)`, `n ≥ 1`.
///
/// ℤ at `(n, n)` and `(−n, −3n)`; ℤ at `(n−2s, n−4s+4)` for even `s` in
/// `0..=n`; ℤ at `(n−2s, n−4s)` and ℤ₂ at `(n−2s, n−4s+4)` for odd `s` in
/// `3..=n`. Coinciding clauses describe the same group. The one-crossing
/// diagram `T(2, 1)` is a kinked unknot, with ℤ only at `(1, 1)` and `(1, 5)`.
pub fn torus_kh(n: i64) -> Result<HomologyTable> {
    if n < 1 {
        return Err(Error::TorusParameter { min: 1, got: n });
    }
    if n == 1 {
        return Ok(framed_unknot_kh(1));
    }
    let z = AbelianGroup::free(1);
    let mut t = HomologyTable::framed();
    t.insert((n, n), z.clone());
    t.insert((-n, -3 * n), z.clone());
    for s in (0..=n).step_by(2) {
        t.insert((n - 2 * s, n - 4 * s + 4), z.clone());
    }
    for s in (3..=n).step_by(2) {
        t.insert((n - 2 * s, n - 4 * s), z.clone());
        t.insert((n - 2 * s, n - 4 * s + 4), AbelianGroup::cyclic(2));
    }
    Ok(t)
}

/// Homology of the unknot diagram with `k` kinks: ℤ at `(k, 3k ± 2)`.
pub fn framed_unknot_kh(k: i64) -> HomologyTable {
    let z = AbelianGroup::free(1);
    HomologyTable::from_entries([(k, 3 * k + 2, z.clone()), (k, 3 * k - 2, z)])
}

/// Absolute degree of the connecting map `H(T(2, n−1)) → H(◯^{1−n})` that
/// hits the lower framed-unknot group: 2 for odd `n`, 0 for even `n`.
pub fn predicted_connecting_degree(n: i64) -> Result<u64> {
    if n < 2 {
        return Err(Error::TorusParameter { min: 2, got: n });
    }
    Ok(if n % 2 == 1 { 2 } else { 0 })
}
