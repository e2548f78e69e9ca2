//! Invariant factors of large sparse matrices.
//!
//! Repeatedly pivots on a ±1 entry and replaces the matrix by its Schur
//! complement, which removes one unit invariant factor per step without
//! changing the others. Columns are visited in order of increasing length and
//! the shortest row holding a unit is chosen, which keeps fill-in low on
//! boundary matrices. Whatever survives without unit entries is handed to the
//! dense Smith normal form.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::matrix::{DenseMatrix, IntegerMatrix};
use super::snf::dense_invariant_factors;

trait Scalar: Clone + Debug {
    fn from_i64(x: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    /// `self − f · x`, or `None` on overflow.
    fn mul_sub(&self, f: &Self, x: &Self) -> Option<Self>;
    /// `x · p` where `p` is a unit, or `None` on overflow.
    fn times_unit(&self, p: &Self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Scalar for i64 {
    fn from_i64(x: i64) -> Self {
        x
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn mul_sub(&self, f: &Self, x: &Self) -> Option<Self> {
        f.checked_mul(*x).and_then(|p| self.checked_sub(p))
    }
    fn times_unit(&self, p: &Self) -> Option<Self> {
        self.checked_mul(*p)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scalar for BigInt {
    fn from_i64(x: i64) -> Self {
        BigInt::from(x)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }
    fn mul_sub(&self, f: &Self, x: &Self) -> Option<Self> {
        Some(self - f * x)
    }
    fn times_unit(&self, p: &Self) -> Option<Self> {
        Some(self * p)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

struct Overflow;

struct Eliminator<T> {
    rows: Vec<Vec<(u32, T)>>,
    /// Rows that may hold an entry in each column; may contain stale or
    /// duplicate indices until cleaned.
    col_rows: Vec<Vec<u32>>,
    row_alive: Vec<bool>,
    col_alive: Vec<bool>,
    units: usize,
}

impl<T: Scalar> Eliminator<T> {
    fn new(m: &IntegerMatrix) -> Self {
        let mut rows: Vec<Vec<(u32, T)>> = vec![Vec::new(); m.rows()];
        let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); m.cols()];
        for c in 0..m.cols() {
            for &(r, v) in m.column(c) {
                rows[r as usize].push((c as u32, T::from_i64(v)));
                col_rows[c].push(r);
            }
        }
        Eliminator {
            rows,
            col_rows,
            row_alive: vec![true; m.rows()],
            col_alive: vec![true; m.cols()],
            units: 0,
        }
    }

    fn entry(&self, r: u32, c: u32) -> Option<&T> {
        let row = &self.rows[r as usize];
        row.binary_search_by_key(&c, |e| e.0)
            .ok()
            .map(|i| &row[i].1)
    }

    fn clean_column(&mut self, c: usize) {
        let mut list = std::mem::take(&mut self.col_rows[c]);
        list.sort_unstable();
        list.dedup();
        list.retain(|&r| self.row_alive[r as usize] && self.entry(r, c as u32).is_some());
        self.col_rows[c] = list;
    }

    /// Shortest live row with a unit entry in column `c`.
    fn unit_row(&self, c: usize) -> Option<u32> {
        self.col_rows[c]
            .iter()
            .copied()
            .filter(|&r| self.entry(r, c as u32).is_some_and(T::is_unit))
            .min_by_key(|&r| (self.rows[r as usize].len(), r))
    }

    /// Eliminates column `c` using the unit at row `r`, then drops both.
    fn pivot(&mut self, r: u32, c: u32) -> Result<(), Overflow> {
        let p = self.entry(r, c).cloned().expect("pivot entry exists");
        let pivot_row = std::mem::take(&mut self.rows[r as usize]);
        let targets: Vec<u32> = self.col_rows[c as usize]
            .iter()
            .copied()
            .filter(|&i| i != r)
            .collect();
        for i in targets {
            let x = match self.entry(i, c) {
                Some(x) => x.clone(),
                None => continue,
            };
            let f = x.times_unit(&p).ok_or(Overflow)?;
            let old = std::mem::take(&mut self.rows[i as usize]);
            let mut merged = Vec::with_capacity(old.len() + pivot_row.len());
            let (mut a, mut b) = (old.into_iter().peekable(), pivot_row.iter().peekable());
            loop {
                match (a.peek(), b.peek()) {
                    (Some(ea), Some(eb)) if ea.0 == eb.0 => {
                        let col = ea.0;
                        let v = ea.1.mul_sub(&f, &eb.1).ok_or(Overflow)?;
                        a.next();
                        b.next();
                        if !v.is_zero() {
                            merged.push((col, v));
                        }
                    }
                    (Some(ea), Some(eb)) if ea.0 < eb.0 => {
                        merged.push(a.next().unwrap());
                    }
                    (_, Some(eb)) => {
                        let col = eb.0;
                        let v = T::from_i64(0).mul_sub(&f, &eb.1).ok_or(Overflow)?;
                        b.next();
                        self.col_rows[col as usize].push(i);
                        merged.push((col, v));
                    }
                    (Some(_), None) => merged.push(a.next().unwrap()),
                    (None, None) => break,
                }
            }
            self.rows[i as usize] = merged;
        }
        self.row_alive[r as usize] = false;
        self.col_alive[c as usize] = false;
        self.col_rows[c as usize].clear();
        self.units += 1;
        Ok(())
    }

    fn run(&mut self) -> Result<(), Overflow> {
        let ncols = self.col_alive.len();
        let mut heap: BinaryHeap<Reverse<(usize, u32)>> = (0..ncols)
            .map(|c| Reverse((self.col_rows[c].len(), c as u32)))
            .collect();
        let mut deferred: Vec<u32> = Vec::new();
        loop {
            while let Some(Reverse((key, c))) = heap.pop() {
                let cu = c as usize;
                if !self.col_alive[cu] {
                    continue;
                }
                self.clean_column(cu);
                let len = self.col_rows[cu].len();
                if len == 0 {
                    self.col_alive[cu] = false;
                    continue;
                }
                if len > key {
                    heap.push(Reverse((len, c)));
                    continue;
                }
                match self.unit_row(cu) {
                    Some(r) => self.pivot(r, c)?,
                    None => deferred.push(c),
                }
            }
            // fill-in may have created units in columns skipped earlier
            let mut progress = false;
            for c in std::mem::take(&mut deferred) {
                let cu = c as usize;
                if !self.col_alive[cu] {
                    continue;
                }
                self.clean_column(cu);
                if self.unit_row(cu).is_some() {
                    heap.push(Reverse((self.col_rows[cu].len(), c)));
                    progress = true;
                } else if !self.col_rows[cu].is_empty() {
                    deferred.push(c);
                }
            }
            if !progress {
                return Ok(());
            }
        }
    }

    /// The part of the matrix that no unit pivot could reach.
    fn remainder(&self) -> DenseMatrix {
        let rows: Vec<usize> = (0..self.rows.len())
            .filter(|&r| self.row_alive[r] && !self.rows[r].is_empty())
            .collect();
        let mut cols: Vec<u32> = rows
            .iter()
            .flat_map(|&r| self.rows[r].iter().map(|e| e.0))
            .collect();
        cols.sort_unstable();
        cols.dedup();
        let mut dense = DenseMatrix::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (c, v) in &self.rows[r] {
                let j = cols.binary_search(c).unwrap();
                dense.set(i, j, v.to_big());
            }
        }
        dense
    }
}

fn eliminate<T: Scalar>(m: &IntegerMatrix) -> Result<Vec<BigInt>, Overflow> {
    let mut e = Eliminator::<T>::new(m);
    e.run()?;
    let rest = dense_invariant_factors(e.remainder());
    let mut factors = vec![BigInt::one(); e.units];
    factors.extend(rest);
    Ok(factors)
}

/// Nonzero invariant factors of `m`, in divisibility order.
pub fn invariant_factors(m: &IntegerMatrix) -> Vec<BigInt> {
    match eliminate::<i64>(m) {
        Ok(f) => f,
        Err(Overflow) => match eliminate::<BigInt>(m) {
            Ok(f) => f,
            Err(Overflow) => unreachable!("arbitrary precision cannot overflow"),
        },
    }
}

/// Rank over the rationals.
pub fn rank(m: &IntegerMatrix) -> usize {
    invariant_factors(m).len()
}

#[cfg(test)]
pub(crate) fn invariant_factors_big(m: &IntegerMatrix) -> Vec<BigInt> {
    match eliminate::<BigInt>(m) {
        Ok(f) => f,
        Err(Overflow) => unreachable!(),
    }
}
