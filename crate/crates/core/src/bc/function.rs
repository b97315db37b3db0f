use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::Scalar;
use crate::error::{level_mismatch, Result};
use crate::level::{LevelIndex, LevelModel, LevelPoint};

/// Exact Gaussian rational.
pub type Gaussian = Complex<BigRational>;

pub(crate) fn gaussian_to<T: Scalar>(z: &Gaussian) -> Complex<T> {
    Complex::new(T::from_rational(&z.re), T::from_rational(&z.im))
}

/// A function on `Y_{n,m}`, i.e. a locally constant function on `Y_K` of level `(n, m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocallyConstantFunction {
    level: LevelIndex,
    /// Indexed by `LevelModel::point_index`.
    values: Vec<Gaussian>,
}

impl LocallyConstantFunction {
    pub fn from_fn(model: &LevelModel, f: impl Fn(&LevelPoint) -> Gaussian) -> Self {
        LocallyConstantFunction { level: model.level(), values: model.points().map(|y| f(&y)).collect() }
    }

    pub fn from_values(model: &LevelModel, values: Vec<Gaussian>) -> Result<Self> {
        if values.len() != model.point_count() {
            return Err(level_mismatch(model.point_count(), values.len()));
        }
        Ok(LocallyConstantFunction { level: model.level(), values })
    }

    pub fn constant(model: &LevelModel, c: Gaussian) -> Self {
        LocallyConstantFunction { level: model.level(), values: vec![c; model.point_count()] }
    }

    pub fn one(model: &LevelModel) -> Self {
        Self::constant(model, Gaussian::one())
    }

    pub fn indicator(model: &LevelModel, pred: impl Fn(&LevelPoint) -> bool) -> Self {
        Self::from_fn(model, |y| if pred(y) { Gaussian::one() } else { Gaussian::zero() })
    }

    /// Indicator of stratum `k`; stratum 0 is `Y^*`, stratum `m` the zero part.
    pub fn stratum_indicator(model: &LevelModel, k: u32) -> Self {
        Self::indicator(model, |y| y.k == k)
    }

    /// Indicator of the single point with index `idx`.
    pub fn point_indicator(model: &LevelModel, idx: usize) -> Self {
        let mut values = vec![Gaussian::zero(); model.point_count()];
        values[idx] = Gaussian::one();
        LocallyConstantFunction { level: model.level(), values }
    }

    /// All point indicators, in point index order.
    pub fn basis(model: &LevelModel) -> Vec<Self> {
        (0..model.point_count()).map(|i| Self::point_indicator(model, i)).collect()
    }

    pub fn level(&self) -> LevelIndex {
        self.level
    }

    pub fn values(&self) -> &[Gaussian] {
        &self.values
    }

    pub(crate) fn check(&self, model: &LevelModel) -> Result<()> {
        if model.level() != self.level {
            return Err(level_mismatch(model.level(), self.level));
        }
        Ok(())
    }

    pub fn value(&self, model: &LevelModel, y: &LevelPoint) -> Result<&Gaussian> {
        self.check(model)?;
        Ok(&self.values[model.point_index(y)?])
    }

    pub fn value_at(&self, idx: usize) -> &Gaussian {
        &self.values[idx]
    }

    pub fn sup_norm(&self) -> f64 {
        self.values
            .iter()
            .map(|z| gaussian_to::<f64>(z).norm())
            .fold(0.0, f64::max)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.level != other.level {
            return Err(level_mismatch(self.level, other.level));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(LocallyConstantFunction { level: self.level, values })
    }

    /// `f o transition`, a function on the finer level `fine`.
    pub fn pullback(&self, coarse: &LevelModel, fine: &LevelModel) -> Result<Self> {
        self.check(coarse)?;
        let target = coarse.level();
        let values = fine
            .points()
            .map(|y| {
                let x = fine.transition(&y, target)?;
                Ok(self.values[coarse.point_index(&x)?].clone())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LocallyConstantFunction { level: fine.level(), values })
    }
}

/// Which side of `f` the isometry power sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// `f v_j`
    Right,
    /// `v_j^* f`
    Left,
}

/// `f v_j` or `v_j^* f`.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub f: LocallyConstantFunction,
    pub j: u32,
    pub side: Side,
}

impl Monomial {
    pub fn right(f: LocallyConstantFunction, j: u32) -> Self {
        Monomial { f, j, side: Side::Right }
    }

    pub fn left(j: u32, f: LocallyConstantFunction) -> Self {
        Monomial { f, j, side: Side::Left }
    }

    pub fn diagonal(f: LocallyConstantFunction) -> Self {
        Monomial { f, j: 0, side: Side::Right }
    }

    /// Degree for the time evolution: `+j` for `f v_j`, `-j` for `v_j^* f`.
    pub fn degree(&self) -> i64 {
        match self.side {
            Side::Right => self.j as i64,
            Side::Left => -(self.j as i64),
        }
    }
}

/// `coeff * mono`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledMonomial {
    pub coeff: Complex64,
    pub mono: Monomial,
}

impl From<Monomial> for ScaledMonomial {
    fn from(mono: Monomial) -> Self {
        ScaledMonomial { coeff: Complex64::new(1.0, 0.0), mono }
    }
}

/// `sigma_z(c f v_j) = q^(i z j) c f v_j`, extended to complex `z`.
pub fn time_evolution(q: u64, z: Complex64, a: &ScaledMonomial) -> ScaledMonomial {
    let exponent = Complex64::i() * z * (a.mono.degree() as f64) * (q as f64).ln();
    ScaledMonomial { coeff: a.coeff * exponent.exp(), mono: a.mono.clone() }
}

/// The scalar by which `sigma_{i beta}` multiplies a monomial of degree `deg`,
/// namely `x^deg` with `x = q^-beta`.
pub fn analytic_factor<T: Scalar>(x: &T, deg: i64) -> T {
    let p = x.pown(deg.unsigned_abs() as u32);
    if deg >= 0 {
        p
    } else {
        T::one() / p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(desc: &str, n: u32, m: u32) -> LevelModel {
        LevelModel::new(&desc.parse().unwrap(), LevelIndex::new(n, m)).unwrap()
    }

    #[test]
    fn time_evolution_examples() {
        let y = model("Q2", 1, 1);
        let f = LocallyConstantFunction::one(&y);
        let a: ScaledMonomial = Monomial::diagonal(f.clone()).into();
        assert_eq!(time_evolution(2, Complex64::new(0.7, -0.3), &a), a);

        let b: ScaledMonomial = Monomial::right(f.clone(), 1).into();
        let t = time_evolution(2, Complex64::new(1.3, 0.0), &b);
        assert!((t.coeff.norm() - 1.0).abs() < 1e-15);
        let expected = Complex64::new(0.0, 1.3 * 2f64.ln()).exp();
        assert!((t.coeff - expected).norm() < 1e-15);

        let c: ScaledMonomial = Monomial::right(f, 2).into();
        let t = time_evolution(2, Complex64::new(0.0, 1.0), &c);
        assert!((t.coeff - Complex64::new(0.25, 0.0)).norm() < 1e-15);
        assert!((analytic_factor(&0.5, 2) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn evolution_is_a_flow() {
        let y = model("Q3", 2, 1);
        let a: ScaledMonomial = Monomial::left(3, LocallyConstantFunction::one(&y)).into();
        let (z, w) = (Complex64::new(0.4, 0.2), Complex64::new(-1.1, 0.5));
        let two = time_evolution(3, z, &time_evolution(3, w, &a));
        let one = time_evolution(3, z + w, &a);
        assert!((two.coeff - one.coeff).norm() < 1e-12);
    }

    #[test]
    fn pullback_is_compatible() {
        let coarse = model("Q3", 1, 1);
        let fine = model("Q3", 2, 2);
        let f = LocallyConstantFunction::stratum_indicator(&coarse, 0);
        let g = f.pullback(&coarse, &fine).unwrap();
        for y in fine.points() {
            let x = fine.transition(&y, coarse.level()).unwrap();
            assert_eq!(g.value(&fine, &y).unwrap(), f.value(&coarse, &x).unwrap());
        }
    }
}
