use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::LinalgError;

/// Dense matrix of exact rationals with fixed dimensions.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<BigRational>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        ExactMatrix { rows: rows.len(), cols, data: rows.iter().flatten().cloned().collect() }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let rows: Vec<Vec<BigRational>> =
            rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
        Self::from_rows(&rows)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<BigRational>], height: usize) -> Self {
        let mut m = Self::zeros(height, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), height, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Each row scaled by the lcm of its denominators.
    fn cleared_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
            })
            .collect()
    }

    fn integer_rows(&self) -> Result<Vec<Vec<BigInt>>, LinalgError> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .enumerate()
                    .map(|(j, x)| {
                        if x.is_integer() {
                            Ok(x.to_integer())
                        } else {
                            Err(LinalgError::NonIntegerEntry { row: i, col: j })
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut a = self.cleared_rows();
        bareiss_echelon(&mut a, self.cols).len()
    }

    /// Solves `self * x = target` exactly and returns `x` only when it exists
    /// and is entrywise nonnegative. Columns must be linearly independent.
    pub fn solve_nonnegative(&self, target: &[BigRational]) -> Option<Vec<BigRational>> {
        let x = self.solve(target)?;
        x.iter().all(|c| !c.is_negative()).then_some(x)
    }

    /// Exact solution of `self * x = target` for independent columns.
    pub fn solve(&self, target: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(target.len(), self.rows, "target length mismatch");
        let k = self.cols;
        let mut aug = Self::zeros(self.rows, k + 1);
        for i in 0..self.rows {
            for j in 0..k {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, k, target[i].clone());
        }
        let mut a = aug.cleared_rows();
        let pivots = bareiss_echelon(&mut a, k + 1);
        if pivots.len() != k || pivots.contains(&k) {
            // dependent columns, or the target is outside the column span
            return None;
        }
        let mut x = vec![BigRational::zero(); k];
        for (r, &c) in pivots.iter().enumerate().rev() {
            let mut acc = BigRational::from_integer(a[r][k].clone());
            for j in c + 1..k {
                acc -= BigRational::from_integer(a[r][j].clone()) * &x[j];
            }
            x[c] = acc / BigRational::from_integer(a[r][c].clone());
        }
        Some(x)
    }

    /// Nonzero invariant factors `d_1 | d_2 | ...` of an integer matrix, all
    /// positive.
    pub fn smith_normal_form(&self) -> Result<Vec<BigInt>, LinalgError> {
        let rows = self.integer_rows()?;
        Ok(smith_invariants(rows, self.cols))
    }

    /// Determinant of a square matrix.
    pub fn determinant(&self) -> BigRational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut a: Vec<Vec<BigRational>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut det = BigRational::one();
        for c in 0..self.cols {
            let Some(p) = (c..self.rows).find(|&r| !a[r][c].is_zero()) else {
                return BigRational::zero();
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            let pivot = a[c][c].clone();
            det *= &pivot;
            for r in c + 1..self.rows {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = &a[r][c] / &pivot;
                for j in c..self.cols {
                    let t = &f * &a[c][j];
                    a[r][j] -= t;
                }
            }
        }
        det
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Fraction-free (Bareiss) row echelon form in place. Returns pivot columns;
/// rows past the rank are left zero.
pub(crate) fn bareiss_echelon(a: &mut [Vec<BigInt>], cols: usize) -> Vec<usize> {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Dense Smith normal form by elementary integer row and column operations.
pub(crate) fn smith_invariants(mut a: Vec<Vec<BigInt>>, cols: usize) -> Vec<BigInt> {
    let rows = a.len();
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let v = &a[t][j] * &q;
                    a[i][j] -= v;
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let v = &row[t] * &q;
                    row[j] -= v;
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                move_smallest_to_pivot(&mut a, t, cols);
                continue;
            }
            // pivot must divide the trailing block
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    normalize_divisor_chain(diag)
}

fn move_smallest_to_pivot(a: &mut [Vec<BigInt>], t: usize, cols: usize) {
    let rows = a.len();
    let mut best = (t, t);
    for i in t..rows {
        if !a[i][t].is_zero() && (a[best.0][best.1].is_zero() || a[i][t].abs() < a[best.0][best.1].abs()) {
            best = (i, t);
        }
    }
    for j in t..cols {
        if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
            best = (t, j);
        }
    }
    a.swap(t, best.0);
    for row in a.iter_mut() {
        row.swap(t, best.1);
    }
}

/// Rewrites a diagonal into a divisibility chain with the same product and
/// the same cokernel.
pub(crate) fn normalize_divisor_chain(mut d: Vec<BigInt>) -> Vec<BigInt> {
    d.retain(|x| !x.is_zero());
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}
