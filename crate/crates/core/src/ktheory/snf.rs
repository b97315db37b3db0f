use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::matrix::IntMatrix;

/// `U A V = D` with `U`, `V` unimodular and `D` diagonal, `d_1 | d_2 | ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
    /// The nonzero diagonal entries of `D`, all positive.
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
}

type Dense = Vec<Vec<BigInt>>;

fn swap_cols(a: &mut Dense, i: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// `row_dst += c * row_src`.
fn add_row(a: &mut Dense, dst: usize, src: usize, c: &BigInt) {
    if c.is_zero() {
        return;
    }
    let src_row = a[src].clone();
    for (x, y) in a[dst].iter_mut().zip(&src_row) {
        *x += c * y;
    }
}

/// `col_dst += c * col_src`.
fn add_col(a: &mut Dense, dst: usize, src: usize, c: &BigInt) {
    if c.is_zero() {
        return;
    }
    for row in a.iter_mut() {
        let s = row[src].clone();
        row[dst] += c * s;
    }
}

fn min_abs_entry(a: &Dense, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if x.is_zero() {
                continue;
            }
            if best.map_or(true, |(bi, bj)| x.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
                if x.abs().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

/// Smith normal form with transforms, pivoting on the entry of least absolute value.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let (rows, cols) = (a.rows(), a.cols());
    let mut d = a.to_dense();
    let mut u = IntMatrix::identity(rows).to_dense();
    let mut v = IntMatrix::identity(cols).to_dense();
    let mut rank = 0;
    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = min_abs_entry(&d, t) else {
                break;
            };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if d[i][t].is_zero() {
                    continue;
                }
                let q = -d[i][t].div_floor(&d[t][t]);
                add_row(&mut d, i, t, &q);
                add_row(&mut u, i, t, &q);
                clean &= d[i][t].is_zero();
            }
            for j in t + 1..cols {
                if d[t][j].is_zero() {
                    continue;
                }
                let q = -d[t][j].div_floor(&d[t][t]);
                add_col(&mut d, j, t, &q);
                add_col(&mut v, j, t, &q);
                clean &= d[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // The pivot must divide the rest of the matrix.
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d[i][j].is_multiple_of(&d[t][t])));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    add_row(&mut d, t, i, &one);
                    add_row(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t).and_then(|r| r.get(t)).map_or(true, Zero::is_zero) {
            break;
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
        rank += 1;
    }
    let invariant_factors = (0..rank).map(|i| d[i][i].clone()).collect();
    SnfResult {
        u: IntMatrix::from_dense(rows, rows, u),
        v: IntMatrix::from_dense(cols, cols, v),
        d: IntMatrix::from_dense(rows, cols, d),
        invariant_factors,
        rank,
    }
}

/// Invariant factors without transforms, for large sparse matrices.
///
/// Unit pivots are eliminated sparsely; a unit pivot's row and column can then
/// be dropped. Whatever remains is handed to the dense algorithm.
pub fn invariant_factors(a: &IntMatrix) -> (usize, Vec<BigInt>) {
    let mut rows: BTreeMap<usize, BTreeMap<usize, BigInt>> = (0..a.rows())
        .filter(|&i| !a.row(i).is_empty())
        .map(|i| (i, a.row(i).clone()))
        .collect();
    let mut col_rows: BTreeMap<usize, std::collections::BTreeSet<usize>> = BTreeMap::new();
    for (&i, row) in &rows {
        for &j in row.keys() {
            col_rows.entry(j).or_default().insert(i);
        }
    }
    // Unit pivots by lazy Markowitz cost; stale heap entries are re-checked on pop.
    let cost = |rows: &BTreeMap<usize, BTreeMap<usize, BigInt>>,
                cols: &BTreeMap<usize, std::collections::BTreeSet<usize>>,
                i: usize,
                j: usize| (rows[&i].len() - 1) * (cols[&j].len() - 1);
    let mut heap = BinaryHeap::new();
    for (&i, row) in &rows {
        for (&j, x) in row {
            if x.abs().is_one() {
                heap.push(Reverse((cost(&rows, &col_rows, i, j), i, j)));
            }
        }
    }
    let mut units = 0usize;
    while let Some(Reverse((c, pi, pj))) = heap.pop() {
        match rows.get(&pi).and_then(|r| r.get(&pj)) {
            Some(x) if x.abs().is_one() => {}
            _ => continue,
        }
        let current = cost(&rows, &col_rows, pi, pj);
        if current > c {
            heap.push(Reverse((current, pi, pj)));
            continue;
        }
        let prow = rows.remove(&pi).expect("pivot row");
        let pval = prow[&pj].clone();
        for &j in prow.keys() {
            col_rows.get_mut(&j).expect("indexed").remove(&pi);
        }
        let others: Vec<usize> = col_rows[&pj].iter().copied().collect();
        for i in others {
            let row = rows.get_mut(&i).expect("indexed");
            // row_i -= (a_ij / p) row_p, exact since p = +-1.
            let c = &row[&pj] * &pval;
            for (&j, x) in &prow {
                let e = row.entry(j).or_default();
                *e -= &c * x;
                if e.is_zero() {
                    row.remove(&j);
                    col_rows.get_mut(&j).expect("indexed").remove(&i);
                } else {
                    col_rows.entry(j).or_default().insert(i);
                }
            }
            if row.is_empty() {
                rows.remove(&i);
            } else {
                for (&j, x) in &rows[&i] {
                    if x.abs().is_one() {
                        heap.push(Reverse((cost(&rows, &col_rows, i, j), i, j)));
                    }
                }
            }
        }
        col_rows.remove(&pj);
        units += 1;
    }
    // Dense remainder on the surviving rows and columns.
    let live_cols: Vec<usize> = col_rows.iter().filter(|(_, r)| !r.is_empty()).map(|(&j, _)| j).collect();
    let col_pos: BTreeMap<usize, usize> = live_cols.iter().enumerate().map(|(p, &j)| (j, p)).collect();
    let mut rest = IntMatrix::zeros(rows.len(), live_cols.len());
    for (r, row) in rows.values().enumerate() {
        for (j, x) in row {
            rest.set(r, col_pos[j], x.clone());
        }
    }
    let snf = smith_normal_form(&rest);
    let mut factors = vec![BigInt::one(); units];
    factors.extend(snf.invariant_factors);
    (units + snf.rank, factors)
}

/// A finitely generated abelian group `Z^gens / (column span of relations)`,
/// with its normal form `Z^free_rank + sum Z/t_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbGroupPresentation {
    pub generators: usize,
    pub relations: IntMatrix,
    pub free_rank: usize,
    /// Invariant factors greater than 1.
    pub torsion: Vec<BigInt>,
}

impl AbGroupPresentation {
    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Same normal form?
    pub fn isomorphic(&self, other: &Self) -> bool {
        self.free_rank == other.free_rank && self.torsion == other.torsion
    }
}

impl fmt::Display for AbGroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Serialize for AbGroupPresentation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `Z^rows / A Z^cols`.
pub fn cokernel(a: &IntMatrix) -> AbGroupPresentation {
    let (rank, factors) = invariant_factors(a);
    AbGroupPresentation {
        generators: a.rows(),
        relations: a.clone(),
        free_rank: a.rows() - rank,
        torsion: factors.into_iter().filter(|d| !d.is_one()).collect(),
    }
}

/// `cols - rank`, the rank of the kernel of `A` acting on `Z^cols`.
pub fn kernel_rank(a: &IntMatrix) -> usize {
    a.cols() - invariant_factors(a).0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check(a: &IntMatrix) -> SnfResult {
        let r = smith_normal_form(a);
        let prod = r.u.mul(a).unwrap().mul(&r.v).unwrap();
        assert_eq!(prod, r.d);
        assert!(r.d.is_diagonal());
        assert!(r.u.is_unimodular() && r.v.is_unimodular());
        for w in r.invariant_factors.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        r
    }

    #[test]
    fn snf_examples() {
        assert_eq!(check(&IntMatrix::from_rows(&[vec![2]])).invariant_factors, ints(&[2]));
        assert_eq!(check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]])).invariant_factors, ints(&[1, 6]));
        assert_eq!(check(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]])).invariant_factors, ints(&[2, 4]));
        let r = check(&IntMatrix::from_rows(&[vec![0, 0], vec![0, 0]]));
        assert_eq!(r.rank, 0);
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(cokernel(&IntMatrix::zeros(1, 1)).to_string(), "Z");
        assert_eq!(cokernel(&IntMatrix::from_rows(&[vec![1], vec![1], vec![1]])).to_string(), "Z^2");
        assert_eq!(cokernel(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]])).to_string(), "Z/6");
        assert_eq!(cokernel(&IntMatrix::from_rows(&[vec![1, 0], vec![0, 1]])).to_string(), "0");
    }

    #[test]
    fn sparse_path_matches_dense() {
        let a = IntMatrix::from_rows(&[vec![4, 6, 0], vec![6, 9, 3], vec![2, 1, -1], vec![0, 0, 5]]);
        let dense = smith_normal_form(&a);
        assert_eq!(invariant_factors(&a), (dense.rank, dense.invariant_factors));
    }
}
