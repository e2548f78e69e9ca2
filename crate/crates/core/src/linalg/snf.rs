use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{DenseMatrix, IntegerMatrix};
use crate::error::{Error, Result};

/// `s = u · m · v` with `s` diagonal, `u` and `v` unimodular.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: DenseMatrix,
    pub s: DenseMatrix,
    pub v: DenseMatrix,
    pub u_inv: DenseMatrix,
    pub v_inv: DenseMatrix,
    /// The `min(rows, cols)` diagonal entries of `s`, non-negative, each
    /// dividing the next; zeros come last.
    pub invariant_factors: Vec<BigInt>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.invariant_factors
            .iter()
            .filter(|d| !d.is_zero())
            .count()
    }
}

struct Reducer {
    a: DenseMatrix,
    track: bool,
    u: DenseMatrix,
    u_inv: DenseMatrix,
    v: DenseMatrix,
    v_inv: DenseMatrix,
}

impl Reducer {
    fn new(a: DenseMatrix, track: bool) -> Self {
        let (m, n) = (a.rows(), a.cols());
        let id = |k: usize| {
            if track {
                DenseMatrix::identity(k)
            } else {
                DenseMatrix::zeros(0, 0)
            }
        };
        Reducer {
            a,
            track,
            u: id(m),
            u_inv: id(m),
            v: id(n),
            v_inv: id(n),
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if self.track {
            self.u.swap_rows(i, j);
            self.u_inv.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if self.track {
            self.v.swap_cols(i, j);
            self.v_inv.swap_rows(i, j);
        }
    }

    /// `row[dst] += q · row[src]`
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.a.add_row_multiple(dst, src, q);
        if self.track {
            self.u.add_row_multiple(dst, src, q);
            self.u_inv.add_col_multiple(src, dst, &-q);
        }
    }

    /// `col[dst] += q · col[src]`
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.a.add_col_multiple(dst, src, q);
        if self.track {
            self.v.add_col_multiple(dst, src, q);
            self.v_inv.add_row_multiple(src, dst, &-q);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if self.track {
            self.u.negate_row(i);
            self.u_inv.negate_col(i);
        }
    }

    /// Nonzero entry of minimal absolute value in the trailing block,
    /// ties broken by lowest row, then lowest column.
    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = self.a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => x.magnitude() < self.a.get(bi, bj).magnitude(),
                };
                if better {
                    best = Some((i, j));
                    if x.magnitude().is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn run(&mut self) {
        let (m, n) = (self.a.rows(), self.a.cols());
        for t in 0..m.min(n) {
            // Re-pick the smallest entry of the trailing block after every
            // pass; keeping the pivot fixed lets the other entries explode.
            loop {
                let Some((pi, pj)) = self.min_pivot(t) else {
                    return;
                };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let mut clean = true;
                for i in t + 1..m {
                    if let Some(q) = self.quotient(t, self.a.get(i, t)) {
                        self.add_row(i, t, &-q);
                        clean &= self.a.get(i, t).is_zero();
                    }
                }
                for j in t + 1..n {
                    if let Some(q) = self.quotient(t, self.a.get(t, j)) {
                        self.add_col(j, t, &-q);
                        clean &= self.a.get(t, j).is_zero();
                    }
                }
                if !clean {
                    continue;
                }
                let p = self.a.get(t, t).clone();
                let offender =
                    (t + 1..m).find(|&i| (t + 1..n).any(|j| !self.a.get(i, j).is_multiple_of(&p)));
                match offender {
                    Some(i) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a.get(t, t).is_negative() {
                self.negate_row(t);
            }
        }
    }

    /// Nearest-integer quotient of `x` by the pivot at `(t, t)`, `None`
    /// when `x` is zero.
    fn quotient(&self, t: usize, x: &BigInt) -> Option<BigInt> {
        if x.is_zero() {
            return None;
        }
        let p = self.a.get(t, t);
        let (mut q, r) = x.div_mod_floor(p);
        if (&r + &r).magnitude() > p.magnitude() {
            q += 1;
        }
        Some(q)
    }
}

/// Dense Smith normal form with transforms and their inverses.
pub fn smith_normal_form_dense(m: &DenseMatrix) -> SnfResult {
    let mut r = Reducer::new(m.clone(), true);
    r.run();
    let k = m.rows().min(m.cols());
    let invariant_factors = (0..k).map(|i| r.a.get(i, i).clone()).collect();
    SnfResult {
        u: r.u,
        s: r.a,
        v: r.v,
        u_inv: r.u_inv,
        v_inv: r.v_inv,
        invariant_factors,
    }
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SnfResult {
    smith_normal_form_dense(&m.to_dense())
}

/// Nonzero invariant factors of a dense matrix, without transforms.
pub fn dense_invariant_factors(m: DenseMatrix) -> Vec<BigInt> {
    let k = m.rows().min(m.cols());
    let mut r = Reducer::new(m, false);
    r.run();
    (0..k)
        .map(|i| r.a.get(i, i).clone())
        .filter(|d| !d.is_zero())
        .collect()
}

/// Rank over the rationals of a dense matrix.
pub fn dense_rank(m: &DenseMatrix) -> usize {
    dense_invariant_factors(m.clone()).len()
}

/// Decides whether `m · x = target` has an integer solution and returns one.
pub fn solve_in_image_dense(m: &DenseMatrix, target: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    let snf = smith_normal_form_dense(m);
    solve_with(&snf, m.rows(), m.cols(), target)
}

pub fn solve_in_image(m: &IntegerMatrix, target: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    solve_in_image_dense(&m.to_dense(), target)
}

/// Solves against a precomputed factorization of an `rows × cols` matrix.
pub(crate) fn solve_with(
    snf: &SnfResult,
    rows: usize,
    cols: usize,
    target: &[BigInt],
) -> Result<Option<Vec<BigInt>>> {
    if target.len() != rows {
        return Err(Error::DimensionMismatch(format!(
            "target of length {} for a matrix with {rows} rows",
            target.len()
        )));
    }
    // s · y = u · target, x = v · y
    let ut = snf.u.mul_vec(target);
    let mut y = vec![BigInt::zero(); cols];
    for (i, c) in ut.iter().enumerate() {
        let d = snf.invariant_factors.get(i).filter(|d| !d.is_zero());
        match d {
            Some(d) => {
                let (q, r) = c.div_rem(d);
                if !r.is_zero() {
                    return Ok(None);
                }
                y[i] = q;
            }
            None if !c.is_zero() => return Ok(None),
            None => {}
        }
    }
    Ok(Some(snf.v.mul_vec(&y)))
}
