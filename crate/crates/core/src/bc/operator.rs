use num_complex::Complex;
use num_traits::Zero;

use super::scalar::Scalar;
use crate::error::{level_mismatch, Result};

/// An `N x N` matrix with at most one nonzero entry per column.
///
/// Diagonal operators, truncated shifts and all their products and adjoints
/// have this shape, so products cost `O(N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator<T> {
    dim: usize,
    /// `cols[c] = Some((r, a))` means the column `c` is `a e_r`.
    cols: Vec<Option<(usize, Complex<T>)>>,
}

impl<T: Scalar> Operator<T> {
    pub fn zero(dim: usize) -> Self {
        Operator { dim, cols: vec![None; dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diag((0..dim).map(|_| Complex::new(T::one(), T::zero())).collect())
    }

    pub fn diag(values: Vec<Complex<T>>) -> Self {
        let dim = values.len();
        let cols = values
            .into_iter()
            .enumerate()
            .map(|(c, a)| (!a.is_zero()).then_some((c, a)))
            .collect();
        Operator { dim, cols }
    }

    /// The truncated isometry `e_k -> e_{k+j}` (zero past the edge).
    pub fn shift(j: usize, dim: usize) -> Self {
        let cols = (0..dim)
            .map(|c| (c + j < dim).then(|| (c + j, Complex::new(T::one(), T::zero()))))
            .collect();
        Operator { dim, cols }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex<T> {
        match &self.cols[c] {
            Some((row, a)) if *row == r => a.clone(),
            _ => Complex::new(T::zero(), T::zero()),
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut cols = vec![None; self.dim];
        for (c, col) in self.cols.iter().enumerate() {
            if let Some((r, a)) = col {
                cols[*r] = Some((c, a.conj()));
            }
        }
        Operator { dim: self.dim, cols }
    }

    /// `self * other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(level_mismatch(self.dim, other.dim));
        }
        let cols = other
            .cols
            .iter()
            .map(|col| {
                let (r, b) = col.as_ref()?;
                let (s, a) = self.cols[*r].as_ref()?;
                let prod = a.clone() * b.clone();
                (!prod.is_zero()).then_some((*s, prod))
            })
            .collect();
        Ok(Operator { dim: self.dim, cols })
    }

    pub fn scale(&self, c: &Complex<T>) -> Self {
        let cols = self
            .cols
            .iter()
            .map(|col| {
                let (r, a) = col.as_ref()?;
                let prod = a.clone() * c.clone();
                (!prod.is_zero()).then_some((*r, prod))
            })
            .collect();
        Operator { dim: self.dim, cols }
    }

    /// `P A P` for `P` the projection onto the first `dim` basis vectors.
    pub fn compress(&self, dim: usize) -> Self {
        let cols = self
            .cols
            .iter()
            .take(dim)
            .map(|col| col.as_ref().filter(|(r, _)| *r < dim).cloned())
            .collect();
        Operator { dim: dim.min(self.dim), cols }
    }

    pub fn diagonal(&self) -> Vec<Complex<T>> {
        (0..self.dim).map(|k| self.entry(k, k)).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        self.cols.iter().enumerate().all(|(c, col)| col.as_ref().map_or(true, |(r, _)| *r == c))
    }

    pub fn to_dense(&self) -> Vec<Vec<Complex<T>>> {
        (0..self.dim).map(|r| (0..self.dim).map(|c| self.entry(r, c)).collect()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Op = Operator<f64>;

    fn c(x: f64) -> Complex<f64> {
        Complex::new(x, 0.0)
    }

    #[test]
    fn shift_examples() {
        assert_eq!(Op::shift(0, 3), Op::identity(3));
        assert_eq!(Op::shift(3, 3), Op::zero(3));

        let s = Op::shift(1, 3);
        assert_eq!(s.entry(1, 0), c(1.0));
        assert_eq!(s.entry(2, 1), c(1.0));
        assert_eq!(s.entry(0, 2), c(0.0));
        let ss_star = s.compose(&s.adjoint()).unwrap();
        assert_eq!(ss_star, Op::diag(vec![c(0.0), c(1.0), c(1.0)]));
        // Truncated: the last basis vector falls off the edge.
        let raw = s.adjoint().compose(&s).unwrap();
        assert_eq!(raw, Op::diag(vec![c(1.0), c(1.0), c(0.0)]));
        // Formed one size up and compressed, S*S is the identity.
        let s4 = Op::shift(1, 4);
        assert_eq!(s4.adjoint().compose(&s4).unwrap().compress(3), Op::identity(3));
    }

    #[test]
    fn dense_matches_sparse_product() {
        let a = Op::diag(vec![c(1.0), c(2.0), c(3.0), c(4.0)]).compose(&Op::shift(1, 4)).unwrap();
        let b = Op::shift(2, 4).adjoint();
        let (da, db) = (a.to_dense(), b.to_dense());
        let ab = a.compose(&b).unwrap().to_dense();
        for r in 0..4 {
            for col in 0..4 {
                let s: Complex<f64> = (0..4).map(|k| da[r][k] * db[k][col]).sum();
                assert_eq!(ab[r][col], s);
            }
        }
    }
}
