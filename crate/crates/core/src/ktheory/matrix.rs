use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// An integer matrix with arbitrary-precision entries, stored by sparse rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, BigInt>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BTreeMap::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut a = Self::zeros(n, n);
        for i in 0..n {
            a.set(i, i, BigInt::one());
        }
        a
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut a = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            for (j, &x) in row.iter().enumerate() {
                a.set(i, j, BigInt::from(x));
            }
        }
        a
    }

    pub fn from_dense(rows: usize, cols: usize, dense: Vec<Vec<BigInt>>) -> Self {
        let mut a = Self::zeros(rows, cols);
        for (i, row) in dense.into_iter().enumerate() {
            for (j, x) in row.into_iter().enumerate() {
                a.set(i, j, x);
            }
        }
        a
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        self.data[i].get(&j).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        if x.is_zero() {
            self.data[i].remove(&j);
        } else {
            self.data[i].insert(j, x);
        }
    }

    /// Adds `x` to entry `(i, j)`.
    pub fn add_to(&mut self, i: usize, j: usize, x: &BigInt) {
        let cur = self.get(i, j);
        self.set(i, j, cur + x);
    }

    pub fn row(&self, i: usize) -> &BTreeMap<usize, BigInt> {
        &self.data[i]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for (&j, x) in row {
                t.data[j].insert(i, x.clone());
            }
        }
        t
    }

    /// Matrix product; `None` on a dimension mismatch.
    pub fn mul(&self, other: &Self) -> Option<Self> {
        if self.cols != other.rows {
            return None;
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for (i, row) in self.data.iter().enumerate() {
            let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
            for (&k, a) in row {
                for (&j, b) in &other.data[k] {
                    *acc.entry(j).or_default() += a * b;
                }
            }
            acc.retain(|_, x| !x.is_zero());
            out.data[i] = acc;
        }
        Some(out)
    }

    /// Nonzero entries off the diagonal?
    pub fn is_diagonal(&self) -> bool {
        self.data.iter().enumerate().all(|(i, row)| row.keys().all(|&j| j == i))
    }

    /// Determinant of a square matrix by fraction-free Bareiss elimination.
    pub fn determinant(&self) -> Option<BigInt> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.to_dense();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                let swap = (k + 1..n).find(|&i| !a[i][k].is_zero());
                match swap {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Some(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = t.div_floor(&prev);
                }
            }
            prev = a[k][k].clone();
        }
        Some(if n == 0 { BigInt::one() } else { sign * &a[n - 1][n - 1] })
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().is_some_and(|d| d.abs().is_one())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_determinant() {
        let a = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(a.determinant(), Some(BigInt::from(-8)));
        let b = IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]);
        assert_eq!(a.mul(&b).unwrap(), IntMatrix::from_rows(&[vec![2, 6], vec![6, 14]]));
        assert!(b.is_unimodular());
        assert_eq!(IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).determinant(), Some(BigInt::from(-1)));
        let c = IntMatrix::from_rows(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 1]]);
        // 2(3-2) - 0 + 1(1-3) = 0
        assert_eq!(c.determinant(), Some(BigInt::zero()));
    }
}
