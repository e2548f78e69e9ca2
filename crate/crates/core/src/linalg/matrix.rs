use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Sparse integer matrix in column-major form. Entries are stored as `i64`;
/// every algorithm that can grow entries works in checked or
/// arbitrary-precision arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    /// Per column, `(row, value)` sorted by row, no zeros.
    columns: Vec<Vec<(u32, i64)>>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        IntegerMatrix {
            rows: n,
            cols: n,
            columns: (0..n).map(|i| vec![(i as u32, 1)]).collect(),
        }
    }

    /// Builds from row-major dense data.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Self::from_triplets(
            r,
            c,
            rows.iter().enumerate().flat_map(|(i, row)| {
                assert_eq!(row.len(), c, "ragged rows");
                row.iter().enumerate().map(move |(j, &v)| (i, j, v))
            }),
        )
        .expect("dimensions are consistent")
    }

    /// Builds from `(row, col, value)` entries; duplicates are summed.
    pub fn from_triplets<I>(rows: usize, cols: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, i64)>,
    {
        let mut columns: Vec<Vec<(u32, i64)>> = vec![Vec::new(); cols];
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(Error::DimensionMismatch(format!(
                    "entry ({r}, {c}) outside {rows}x{cols}"
                )));
            }
            columns[c].push((r as u32, v));
        }
        for col in &mut columns {
            col.sort_unstable_by_key(|e| e.0);
            let mut merged: Vec<(u32, i64)> = Vec::with_capacity(col.len());
            for &(r, v) in col.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == r => {
                        last.1 = last
                            .1
                            .checked_add(v)
                            .ok_or_else(|| Error::DimensionMismatch("entry overflows i64".into()))?
                    }
                    _ => merged.push((r, v)),
                }
            }
            merged.retain(|e| e.1 != 0);
            *col = merged;
        }
        Ok(IntegerMatrix {
            rows,
            cols,
            columns,
        })
    }

    /// Builds from columns already sorted by row and free of zeros.
    pub(crate) fn from_columns(rows: usize, columns: Vec<Vec<(u32, i64)>>) -> Self {
        debug_assert!(columns
            .iter()
            .all(|c| c.windows(2).all(|w| w[0].0 < w[1].0) && c.iter().all(|e| e.1 != 0)));
        IntegerMatrix {
            rows,
            cols: columns.len(),
            columns,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn column(&self, j: usize) -> &[(u32, i64)] {
        &self.columns[j]
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.columns[c]
            .binary_search_by_key(&(r as u32), |e| e.0)
            .map(|i| self.columns[c][i].1)
            .unwrap_or(0)
    }

    /// Sets one entry, keeping the storage free of zeros.
    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        assert!(r < self.rows && c < self.cols);
        let col = &mut self.columns[c];
        match col.binary_search_by_key(&(r as u32), |e| e.0) {
            Ok(i) if v == 0 => {
                col.remove(i);
            }
            Ok(i) => col[i].1 = v,
            Err(_) if v == 0 => {}
            Err(i) => col.insert(i, (r as u32, v)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    /// `(row, col, value)` in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |&(r, v)| (r as usize, c, v)))
    }

    pub fn transpose(&self) -> IntegerMatrix {
        Self::from_triplets(
            self.cols,
            self.rows,
            self.triplets().map(|(r, c, v)| (c, r, v)),
        )
        .expect("transpose keeps entries in range")
    }

    /// Exact product `self · rhs`; fails if an entry leaves the `i64` range.
    pub fn mul(&self, rhs: &IntegerMatrix) -> Result<IntegerMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut acc: Vec<i128> = vec![0; self.rows];
        let mut touched: Vec<u32> = Vec::new();
        let mut columns = Vec::with_capacity(rhs.cols);
        for rcol in &rhs.columns {
            for &(k, x) in rcol {
                for &(i, y) in &self.columns[k as usize] {
                    if acc[i as usize] == 0 {
                        touched.push(i);
                    }
                    acc[i as usize] += x as i128 * y as i128;
                    // a cancellation to 0 may push `i` twice; dedup below
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let mut col = Vec::new();
            for &i in &touched {
                let v = std::mem::take(&mut acc[i as usize]);
                if v != 0 {
                    let v = i64::try_from(v).map_err(|_| {
                        Error::DimensionMismatch("product entry overflows i64".into())
                    })?;
                    col.push((i, v));
                }
            }
            touched.clear();
            columns.push(col);
        }
        Ok(IntegerMatrix {
            rows: self.rows,
            cols: rhs.cols,
            columns,
        })
    }

    /// `self · x` for an arbitrary-precision vector.
    pub fn mul_vec(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        let mut out = vec![BigInt::zero(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            if x[j].is_zero() {
                continue;
            }
            for &(i, v) in col {
                out[i as usize] += &x[j] * v;
            }
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.rows, self.cols);
        for (r, c, v) in self.triplets() {
            d.set(r, c, BigInt::from(v));
        }
        d
    }

    /// Sub-matrix on the given rows and columns, in the given orders.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> IntegerMatrix {
        let mut pos = vec![u32::MAX; self.rows];
        for (k, &r) in rows.iter().enumerate() {
            pos[r] = k as u32;
        }
        let columns = cols
            .iter()
            .map(|&c| {
                let mut col: Vec<(u32, i64)> = self.columns[c]
                    .iter()
                    .filter(|e| pos[e.0 as usize] != u32::MAX)
                    .map(|&(r, v)| (pos[r as usize], v))
                    .collect();
                col.sort_unstable_by_key(|e| e.0);
                col
            })
            .collect();
        IntegerMatrix {
            rows: rows.len(),
            cols: cols.len(),
            columns,
        }
    }
}

/// Dense arbitrary-precision integer matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<BigInt>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let big: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        Self::from_rows(&big, cols)
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += q · row[src]`
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let add = s * q;
                self.data[dst * self.cols + j] += add;
            }
        }
    }

    /// `col[dst] += q · col[src]`
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if !s.is_zero() {
                let add = s * q;
                self.data[i * self.cols + dst] += add;
            }
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = &mut self.data[i * self.cols + j];
            *v = -std::mem::take(v);
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = &mut self.data[i * self.cols + j];
            *v = -std::mem::take(v);
        }
    }

    pub fn mul(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = DenseMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        *out.get_mut(i, j) += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, x.len(), "dimension mismatch in product");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Sub-matrix of the given rows (in order), all columns.
    pub fn select_rows(&self, rows: impl IntoIterator<Item = usize>) -> DenseMatrix {
        let rows: Vec<usize> = rows.into_iter().collect();
        let mut m = DenseMatrix::zeros(rows.len(), self.cols);
        for (k, &r) in rows.iter().enumerate() {
            for j in 0..self.cols {
                m.set(k, j, self.get(r, j).clone());
            }
        }
        m
    }

    /// Sub-matrix of the given columns (in order), all rows.
    pub fn select_cols(&self, cols: impl IntoIterator<Item = usize>) -> DenseMatrix {
        let cols: Vec<usize> = cols.into_iter().collect();
        let mut m = DenseMatrix::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &c) in cols.iter().enumerate() {
                m.set(i, k, self.get(i, c).clone());
            }
        }
        m
    }

    /// `[self | rhs]`
    pub fn hconcat(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.rows, rhs.rows);
        let mut m = DenseMatrix::zeros(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..rhs.cols {
                m.set(i, self.cols + j, rhs.get(i, j).clone());
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !m.get(i, k).is_zero()) {
                    Some(i) => {
                        m.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1)
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.determinant().abs().is_one()
    }
}
