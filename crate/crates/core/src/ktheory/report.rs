use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::matrix::IntMatrix;
use super::snf::{cokernel, kernel_rank, AbGroupPresentation};
use crate::bc::Operator;
use crate::error::{Error, Result};
use crate::level::{LevelGroupElement, LevelIndex, LevelModel};

/// `Z^r / Z 1` for `r = |G_{n,m}|`, and the index-map identities in the shift model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct K0Report {
    pub level: LevelIndex,
    pub r: usize,
    pub quotient: AbGroupPresentation,
    pub rank: usize,
    pub torsion: Vec<String>,
    /// `1 - S S^*` is the projection onto slot 0.
    pub defect_projection: bool,
    /// `1 - S^* S = 0` with `S^* S` formed one size up and compressed.
    pub isometry: bool,
    /// `K_0(B)`, carried only as a symbol.
    pub k0_b: &'static str,
    pub pass: bool,
}

/// `1 - S S^*` and `1 - S^* S` for the shift on `dim` slots.
fn shift_defects(dim: usize) -> (Operator<BigRational>, Operator<BigRational>) {
    let one = Complex::new(BigRational::one(), BigRational::zero());
    let complement = |op: &Operator<BigRational>| {
        Operator::diag(op.diagonal().into_iter().map(|d| one.clone() - d).collect())
    };
    let s = Operator::<BigRational>::shift(1, dim);
    let ss_star = s.compose(&s.adjoint()).expect("same size");
    let s1 = Operator::<BigRational>::shift(1, dim + 1);
    let s_star_s = s1.adjoint().compose(&s1).expect("same size").compress(dim);
    assert!(ss_star.is_diagonal() && s_star_s.is_diagonal());
    (complement(&ss_star), complement(&s_star_s))
}

pub fn k0_quotient_report(model: &LevelModel) -> Result<K0Report> {
    let r = model.group_order(model.m()) as usize;
    let mut ones = IntMatrix::zeros(r, 1);
    for i in 0..r {
        ones.set(i, 0, BigInt::one());
    }
    let quotient = cokernel(&ones);
    let dim = r + 1;
    let (defect, isometry_defect) = shift_defects(dim);
    let mut e0 = vec![Complex::new(BigRational::zero(), BigRational::zero()); dim];
    e0[0] = Complex::new(BigRational::one(), BigRational::zero());
    let defect_projection = defect == Operator::diag(e0);
    let isometry = isometry_defect == Operator::zero(dim);
    let pass = quotient.free_rank + 1 == r && quotient.is_free() && defect_projection && isometry;
    Ok(K0Report {
        level: model.level(),
        r,
        rank: quotient.free_rank,
        torsion: quotient.torsion.iter().map(ToString::to_string).collect(),
        quotient,
        defect_projection,
        isometry,
        k0_b: "Q",
        pass,
    })
}

/// The valuation window `0..W` over `(n, m)`: the fiber at valuation `k` is `G_{n, m - min(k, m)}`.
struct Window<'a> {
    model: &'a LevelModel,
    width: u32,
    offsets: Vec<usize>,
}

impl<'a> Window<'a> {
    fn new(model: &'a LevelModel, width: u32) -> Self {
        let mut offsets = vec![0];
        for k in 0..width {
            let l = model.m() - k.min(model.m());
            offsets.push(offsets.last().unwrap() + model.group_order(l) as usize);
        }
        Window { model, width, offsets }
    }

    fn depth(&self, k: u32) -> u32 {
        self.model.m() - k.min(self.model.m())
    }

    fn len(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    /// `1 - S` from the points with `k < W - 1` to all points, where
    /// `S(k, g) = (k + 1, [pi]^{-1} g)` projected to the next fiber.
    fn one_minus_shift(&self) -> Result<IntMatrix> {
        let domain = self.offsets[self.width as usize - 1];
        let mut a = IntMatrix::zeros(self.len(), domain);
        let n = self.model.n();
        for k in 0..self.width - 1 {
            let (l, l_next) = (self.depth(k), self.depth(k + 1));
            for (i, g) in self.model.group_elements(l).enumerate() {
                let col = self.offsets[k as usize] + i;
                let moved = LevelGroupElement { v: (g.v + n - 1) % n, u: g.u };
                let image = self.model.project(&moved, l_next)?;
                let row = self.offsets[k as usize + 1] + self.model.group_index(&image)?;
                a.add_to(col, col, &BigInt::one());
                a.add_to(row, col, &-BigInt::one());
            }
        }
        Ok(a)
    }
}

/// Kernel and cokernel of `1 - S` on a valuation window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PvReport {
    pub level: LevelIndex,
    pub window: u32,
    pub kernel_rank: usize,
    pub cokernel: AbGroupPresentation,
    /// Cokernel on the doubled window.
    pub doubled: AbGroupPresentation,
    pub stabilized: bool,
    pub pass: bool,
}

pub fn pv_window_check(model: &LevelModel, window: u32) -> Result<PvReport> {
    let min = model.m() + 2;
    if window < min {
        return Err(Error::WindowTooSmall { window, min });
    }
    model.guard().check_carrier(2 * window as u64 * model.group_order(model.m()))?;
    let a = Window::new(model, window).one_minus_shift()?;
    let b = Window::new(model, 2 * window).one_minus_shift()?;
    let doubled_kernel = kernel_rank(&b);
    let kernel_rank = kernel_rank(&a);
    let coker = cokernel(&a);
    let doubled = cokernel(&b);
    let stabilized = coker.isomorphic(&doubled);
    Ok(PvReport {
        level: model.level(),
        window,
        kernel_rank,
        pass: kernel_rank == 0 && doubled_kernel == 0 && stabilized,
        cokernel: coker,
        doubled,
        stabilized,
    })
}

/// The combined report: `{"level", "rank", "torsion", "k1_kernel_rank", "stabilized", ...}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KTheoryReport {
    pub claim: &'static str,
    pub level: LevelIndex,
    pub rank: usize,
    pub torsion: Vec<String>,
    pub k1_kernel_rank: usize,
    pub stabilized: bool,
    pub k0: K0Report,
    pub pv: PvReport,
    pub pass: bool,
}

pub const KTHEORY_CLAIM: &str =
    "K_1(A_K) = 0; 0 -> C(Y_K^*, Z)/Z1 -> K_0(A_K) -> Q -> 0; delta[u_B]_1 = -[1_{Y_K^*}]_0";

/// Runs both checks; the window defaults to `m + 2`.
pub fn ktheory_report(model: &LevelModel, window: Option<u32>) -> Result<KTheoryReport> {
    let k0 = k0_quotient_report(model)?;
    let pv = pv_window_check(model, window.unwrap_or(model.m() + 2))?;
    Ok(KTheoryReport {
        claim: KTHEORY_CLAIM,
        level: model.level(),
        rank: k0.rank,
        torsion: k0.torsion.clone(),
        k1_kernel_rank: pv.kernel_rank,
        stabilized: pv.stabilized,
        pass: k0.pass && pv.pass,
        k0,
        pv,
    })
}
