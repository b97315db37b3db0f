use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::function::{analytic_factor, gaussian_to, LocallyConstantFunction, Monomial, Side};
use super::operator::Operator;
use super::scalar::{Beta, Scalar};
use crate::error::{level_mismatch, Error, Result};
use crate::level::{LevelModel, LevelPoint};

/// The representation `pi_w` on `l^2({0..N-1})` with `H e_k = k log(q) e_k`.
///
/// `pi_w(f) e_k = f(k.w) e_k` and `pi_w(v_j) e_k = e_{k+j}`.
#[derive(Debug, Clone)]
pub struct MatrixModel<'a> {
    model: &'a LevelModel,
    w: LevelPoint,
    n: usize,
}

/// `(truncated, exact, bound)` for `Tr e^{-beta H}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionFunction<T> {
    /// `sum_{k<N} q^{-k beta}`
    pub truncated: T,
    /// `(1 - q^-beta)^-1`
    pub exact: T,
    /// `q^{-beta N} / (1 - q^-beta)`, which equals `exact - truncated`.
    pub bound: T,
}

/// Partition function of the local system and its truncation to `N` levels.
pub fn partition_function<T: Scalar>(q: u64, beta: &Beta, n: usize) -> Result<PartitionFunction<T>> {
    if let Beta::Real(b) = beta {
        if !(*b > 0.0) {
            return Err(Error::NonpositiveBeta(*b));
        }
    }
    let x = T::boltzmann(q, beta)?;
    let mut truncated = T::zero();
    let mut term = T::one();
    for _ in 0..n {
        truncated = truncated + term.clone();
        term = term * x.clone();
    }
    let one_minus = T::one() - x;
    Ok(PartitionFunction { truncated, exact: T::one() / one_minus.clone(), bound: term / one_minus })
}

/// `Tr(e^{-beta H} M) / Tr(e^{-beta H})` with `x = q^-beta`.
pub fn gibbs_expectation<T: Scalar>(x: &T, m: &Operator<T>) -> Complex<T> {
    let mut num = Complex::new(T::zero(), T::zero());
    let mut z = T::zero();
    let mut weight = T::one();
    for d in m.diagonal() {
        num = num + d.scale(weight.clone());
        z = z + weight.clone();
        weight = weight * x.clone();
    }
    num.unscale(z)
}

/// Outcome of one KMS check `|phi(a sigma_{i beta}(b)) - phi(b a)|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KmsResidual {
    pub residual: f64,
    /// Set when the residual was computed exactly and vanishes.
    pub exact_zero: bool,
    /// `|f_a| |f_b| x^{N-j} (1 - x^j) / (1 - x^N)` for a degree-zero product with `j = |deg a|`, else 0.
    pub sharp_bound: f64,
    /// `|f_a| |f_b| x^{N-J} / (1 - x)` with `J = j_a + j_b`.
    pub contract_bound: f64,
}

impl<'a> MatrixModel<'a> {
    pub fn new(model: &'a LevelModel, w: LevelPoint, n: usize) -> Result<Self> {
        if w.k != 0 {
            return Err(level_mismatch("stratum 0", format!("stratum {}", w.k)));
        }
        model.point_index(&w)?;
        if n == 0 {
            return Err(Error::TruncationTooSmall { n, degree: 0 });
        }
        Ok(MatrixModel { model, w, n })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn base_point(&self) -> &LevelPoint {
        &self.w
    }

    pub fn q(&self) -> u64 {
        self.model.q()
    }

    /// Diagonal of `H`.
    pub fn hamiltonian(&self) -> Vec<f64> {
        let lq = (self.q() as f64).ln();
        (0..self.n).map(|k| k as f64 * lq).collect()
    }

    fn orbit(&self, len: usize) -> Result<Vec<usize>> {
        (0..len).map(|k| self.model.point_index(&self.model.act(k as u64, &self.w)?)).collect()
    }

    fn represent_dim<T: Scalar>(&self, f: &LocallyConstantFunction, dim: usize) -> Result<Operator<T>> {
        f.check(self.model)?;
        let orbit = self.orbit(dim)?;
        Ok(Operator::diag(orbit.iter().map(|&i| gaussian_to(f.value_at(i))).collect()))
    }

    /// `pi_w(f)`, the diagonal matrix with entries `f(k.w)`.
    pub fn represent<T: Scalar>(&self, f: &LocallyConstantFunction) -> Result<Operator<T>> {
        self.represent_dim(f, self.n)
    }

    pub fn shift_matrix<T: Scalar>(&self, j: u32) -> Operator<T> {
        Operator::shift(j as usize, self.n)
    }

    fn monomial_dim<T: Scalar>(&self, a: &Monomial, dim: usize) -> Result<Operator<T>> {
        let f = self.represent_dim::<T>(&a.f, dim)?;
        let s = Operator::<T>::shift(a.j as usize, dim);
        match a.side {
            Side::Right => f.compose(&s),
            Side::Left => s.adjoint().compose(&f),
        }
    }

    /// `pi_w(a)` truncated to `N`.
    pub fn monomial<T: Scalar>(&self, a: &Monomial) -> Result<Operator<T>> {
        self.monomial_dim(a, self.n)
    }

    /// `P_N pi_w(a b) P_N`, formed in dimension `N + j_a + j_b` so that no
    /// intermediate basis vector is lost to the truncation.
    pub fn compressed_product<T: Scalar>(&self, a: &Monomial, b: &Monomial) -> Result<Operator<T>> {
        let dim = self.n + (a.j + b.j) as usize;
        let pa = self.monomial_dim::<T>(a, dim)?;
        let pb = self.monomial_dim::<T>(b, dim)?;
        Ok(pa.compose(&pb)?.compress(self.n))
    }

    /// `phi_N(a sigma_{i beta}(b)) - phi_N(b a)` in the Gibbs state of this model.
    pub fn kms_difference<T: Scalar>(&self, a: &Monomial, b: &Monomial, x: &T) -> Result<Complex<T>> {
        let degree = a.j + b.j;
        if degree as usize >= self.n {
            return Err(Error::TruncationTooSmall { n: self.n, degree });
        }
        let factor = analytic_factor(x, b.degree());
        let lhs = gibbs_expectation(x, &self.compressed_product::<T>(a, b)?).scale(factor);
        let rhs = gibbs_expectation(x, &self.compressed_product::<T>(b, a)?);
        Ok(lhs - rhs)
    }

    /// KMS residual, exact whenever `beta` is an integer.
    pub fn kms_residual(&self, a: &Monomial, b: &Monomial, beta: &Beta) -> Result<KmsResidual> {
        if beta.is_infinite() {
            return Err(Error::NonpositiveBeta(f64::INFINITY));
        }
        let (residual, exact_zero) = match beta {
            Beta::Int(_) => {
                let x = BigRational::boltzmann(self.q(), beta)?;
                let d = self.kms_difference(a, b, &x)?;
                (gaussian_to::<f64>(&d).norm(), d.is_zero())
            }
            _ => {
                let x = f64::boltzmann(self.q(), beta)?;
                (self.kms_difference(a, b, &x)?.norm(), false)
            }
        };
        let x = f64::boltzmann(self.q(), beta)?;
        let norms = a.f.sup_norm() * b.f.sup_norm();
        let n = self.n as i32;
        let sharp_bound = if a.degree() + b.degree() == 0 {
            let j = a.j as i32;
            norms * x.powi(n - j) * (1.0 - x.powi(j)) / (1.0 - x.powi(n))
        } else {
            0.0
        };
        let contract_bound = norms * x.powi(n - (a.j + b.j) as i32) / (1.0 - x);
        Ok(KmsResidual { residual, exact_zero, sharp_bound, contract_bound })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::level::LevelIndex;

    fn model(desc: &str, n: u32, m: u32) -> LevelModel {
        LevelModel::new(&desc.parse().unwrap(), LevelIndex::new(n, m)).unwrap()
    }

    fn real_diag(op: &Operator<f64>) -> Vec<f64> {
        op.diagonal().iter().map(|z| z.re).collect()
    }

    #[test]
    fn represent_examples() {
        let y = model("Q2", 1, 1);
        let w = y.point(0);
        let mm = MatrixModel::new(&y, w, 4).unwrap();
        let one = LocallyConstantFunction::one(&y);
        assert_eq!(mm.represent::<f64>(&one).unwrap(), Operator::identity(4));
        let f = LocallyConstantFunction::stratum_indicator(&y, 0);
        assert_eq!(real_diag(&mm.represent(&f).unwrap()), vec![1.0, 0.0, 0.0, 0.0]);

        let y = model("Q3", 2, 2);
        let w = y.point(y.point_index(&LevelPoint { k: 0, g: y.identity(2) }).unwrap());
        let mm = MatrixModel::new(&y, w, 5).unwrap();
        let f = LocallyConstantFunction::indicator(&y, |p| p.k == 2 && p.g.v == 0);
        assert_eq!(real_diag(&mm.represent(&f).unwrap()), vec![0.0, 0.0, 1.0, 0.0, 1.0]);
    }

    #[test]
    fn gibbs_examples() {
        let id = Operator::<f64>::identity(7);
        assert!((gibbs_expectation(&0.3, &id).re - 1.0).abs() < 1e-15);
        let m = Operator::diag(vec![Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)]);
        assert!((gibbs_expectation(&0.5, &m).re - 2.0 / 3.0).abs() < 1e-15);
        let mut v = vec![Complex::new(0.0, 0.0); 60];
        v[0] = Complex::new(1.0, 0.0);
        assert!((gibbs_expectation(&0.5, &Operator::diag(v)).re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn partition_examples() {
        let z = partition_function::<f64>(2, &Beta::Int(1), 4).unwrap();
        assert_eq!((z.exact, z.truncated, z.bound), (2.0, 1.875, 0.125));
        let z = partition_function::<BigRational>(3, &Beta::Int(2), 10).unwrap();
        assert_eq!(z.exact, BigRational::new(9.into(), 8.into()));
        assert_eq!(&z.exact - &z.truncated, z.bound);
        assert_eq!(partition_function::<f64>(2, &Beta::Real(-1.0), 4), Err(Error::NonpositiveBeta(-1.0)));
    }

    #[test]
    fn residual_examples() {
        let y = model("Q2", 1, 1);
        let one = LocallyConstantFunction::one(&y);
        let mm = MatrixModel::new(&y, y.point(0), 12).unwrap();
        let d = Monomial::diagonal(LocallyConstantFunction::stratum_indicator(&y, 0));
        let r = mm.kms_residual(&d, &Monomial::diagonal(one.clone()), &Beta::Int(1)).unwrap();
        assert!(r.exact_zero);

        let a = Monomial::right(one.clone(), 1);
        let b = Monomial::left(1, one.clone());
        let r12 = mm.kms_residual(&a, &b, &Beta::Int(1)).unwrap();
        assert!(r12.residual <= r12.sharp_bound * (1.0 + 1e-12));
        assert!(r12.residual <= 2f64.powi(-10) / 0.5);

        let mm24 = MatrixModel::new(&y, y.point(0), 24).unwrap();
        let r24 = mm24.kms_residual(&a, &b, &Beta::Int(1)).unwrap();
        let ratio = r12.residual / r24.residual;
        assert!((ratio / 4096.0 - 1.0).abs() < 1e-3, "ratio {ratio}");

        assert_eq!(
            MatrixModel::new(&y, y.point(0), 2).unwrap().kms_residual(&a, &b, &Beta::Int(1)),
            Err(Error::TruncationTooSmall { n: 2, degree: 2 })
        );
    }
}
