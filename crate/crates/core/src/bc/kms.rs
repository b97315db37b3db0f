use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use super::function::{gaussian_to, Gaussian, LocallyConstantFunction};
use super::scalar::{Beta, Scalar};
use crate::error::{level_mismatch, Result};
use crate::level::{LevelGroupElement, LevelMeasure, LevelModel, LevelPoint};

fn check_base(model: &LevelModel, f: &LocallyConstantFunction, w: &LevelPoint) -> Result<()> {
    f.check(model)?;
    if w.k != 0 {
        return Err(level_mismatch("stratum 0", format!("stratum {}", w.k)));
    }
    model.point_index(w)?;
    Ok(())
}

/// `phi_{beta,w}(f) = (1 - x) sum_{k>=0} x^k f(k.w)`, `x = q^-beta`, in closed form.
///
/// For `k >= m` the point `k.w` sits in the top stratum and depends on `k`
/// only modulo `n`, so the tail is `(1 - x) x^m / (1 - x^n) sum_{r<n} x^r f((m+r).w)`.
pub fn kms_eval<T: Scalar>(
    model: &LevelModel,
    f: &LocallyConstantFunction,
    beta: &Beta,
    w: &LevelPoint,
) -> Result<Complex<T>> {
    check_base(model, f, w)?;
    if beta.is_infinite() {
        return Ok(gaussian_to(f.value(model, w)?));
    }
    let x = T::boltzmann(model.q(), beta)?;
    let (n, m) = (model.n(), model.m());
    let one_minus = T::one() - x.clone();
    let mut acc = Complex::new(T::zero(), T::zero());
    let mut xk = T::one();
    for k in 0..m {
        let v: Complex<T> = gaussian_to(f.value(model, &model.act(k as u64, w)?)?);
        acc = acc + v.scale(xk.clone() * one_minus.clone());
        xk = xk * x.clone();
    }
    let tail_scale = one_minus * xk / (T::one() - x.pown(n));
    let mut xr = T::one();
    for r in 0..n {
        let v: Complex<T> = gaussian_to(f.value(model, &model.act((m + r) as u64, w)?)?);
        acc = acc + v.scale(xr.clone() * tail_scale.clone());
        xr = xr * x.clone();
    }
    Ok(acc)
}

/// `phi_{inf,w}(f) = f(w)`.
pub fn kms_infty_eval(model: &LevelModel, f: &LocallyConstantFunction, w: &LevelPoint) -> Result<Gaussian> {
    check_base(model, f, w)?;
    Ok(f.value(model, w)?.clone())
}

/// The KMS state `f -> sum_w nu(w) phi_{beta,w}(f)` attached to a probability
/// measure `nu` on stratum 0.
#[derive(Debug, Clone, PartialEq)]
pub struct KmsState {
    pub beta: Beta,
    pub measure: LevelMeasure,
}

pub fn state_from_measure(nu: &LevelMeasure, beta: Beta) -> Result<KmsState> {
    nu.require_probability()?;
    beta.validate()?;
    Ok(KmsState { beta, measure: nu.clone() })
}

impl KmsState {
    pub fn dirac(model: &LevelModel, g: &LevelGroupElement, beta: Beta) -> Result<Self> {
        state_from_measure(&LevelMeasure::dirac(model, g)?, beta)
    }

    pub fn evaluate<T: Scalar>(&self, model: &LevelModel, f: &LocallyConstantFunction) -> Result<Complex<T>> {
        if model.level() != self.measure.level() {
            return Err(level_mismatch(model.level(), self.measure.level()));
        }
        let mut acc = Complex::new(T::zero(), T::zero());
        for (i, nu) in self.measure.weights().iter().enumerate() {
            if nu.is_zero() {
                continue;
            }
            let w = LevelPoint { k: 0, g: model.group_element(model.m(), i) };
            let v = kms_eval::<T>(model, f, &self.beta, &w)?;
            acc = acc + v.scale(T::from_rational(nu));
        }
        Ok(acc)
    }

    /// Extremal states are exactly the Dirac ones.
    pub fn is_extremal(&self) -> bool {
        let w = self.measure.weights();
        w.iter().filter(|x| !x.is_zero()).count() == 1 && w.iter().any(BigRational::is_one)
    }

    pub fn translate(&self, model: &LevelModel, g: &LevelGroupElement) -> Result<Self> {
        Ok(KmsState { beta: self.beta, measure: galois_translate(model, &self.measure, g)? })
    }

    /// `{"beta": number | "inf", "level": {"n", "m"}, "weights": {"(v, u)": "p/q"}}`.
    pub fn to_json(&self, model: &LevelModel) -> Value {
        let mut weights = Map::new();
        for (i, nu) in self.measure.weights().iter().enumerate() {
            if !nu.is_zero() {
                weights.insert(model.group_element(model.m(), i).to_string(), Value::String(nu.to_string()));
            }
        }
        json!({ "beta": self.beta, "level": self.measure.level(), "weights": weights })
    }
}

/// Pushforward of `nu` under left translation by `g` in `G_{n,m}`.
pub fn galois_translate(model: &LevelModel, nu: &LevelMeasure, g: &LevelGroupElement) -> Result<LevelMeasure> {
    if nu.level() != model.level() {
        return Err(level_mismatch(model.level(), nu.level()));
    }
    if g.depth() != model.m() {
        return Err(level_mismatch(model.m(), g.depth()));
    }
    let mut weights = vec![BigRational::zero(); nu.weights().len()];
    for (i, w) in nu.weights().iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        let h = model.group_op(g, &model.group_element(model.m(), i))?;
        weights[model.group_index(&h)?] = w.clone();
    }
    LevelMeasure::new(model, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::level::LevelIndex;

    fn model(desc: &str, n: u32, m: u32) -> LevelModel {
        LevelModel::new(&desc.parse().unwrap(), LevelIndex::new(n, m)).unwrap()
    }

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn kms_eval_examples() {
        let y = model("Q2", 1, 1);
        let w = y.point(0);
        let s0 = LocallyConstantFunction::stratum_indicator(&y, 0);
        let s1 = LocallyConstantFunction::stratum_indicator(&y, 1);
        let a = kms_eval::<BigRational>(&y, &s0, &Beta::Int(1), &w).unwrap();
        let b = kms_eval::<BigRational>(&y, &s1, &Beta::Int(1), &w).unwrap();
        assert_eq!(a.re, rat(1, 2));
        assert_eq!(b.re, rat(1, 2));
        assert_eq!(kms_infty_eval(&y, &s0, &w).unwrap(), Gaussian::one());
        assert_eq!(kms_infty_eval(&y, &s1, &w).unwrap(), Gaussian::zero());
        let one = LocallyConstantFunction::one(&y);
        let v = kms_eval::<f64>(&y, &one, &Beta::Real(0.37), &w).unwrap();
        assert!((v.re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_measure_average() {
        let y = model("Q3", 2, 1);
        let nu = LevelMeasure::uniform(&y);
        let state = state_from_measure(&nu, Beta::Int(1)).unwrap();
        let f = LocallyConstantFunction::indicator(&y, |p| p.k == 0 && p.g.v == 0);
        let v = state.evaluate::<BigRational>(&y, &f).unwrap();
        assert_eq!(v.re, (BigRational::one() - rat(1, 3)) * rat(2, 4));
        assert!(!state.is_extremal());
    }

    #[test]
    fn translation_examples() {
        let y = model("Q3", 2, 1);
        let r = y.ring(1).unwrap();
        let w = LevelGroupElement { v: 0, u: Some(r.one()) };
        let g = LevelGroupElement { v: 1, u: Some(r.from_int(2)) };
        let d = LevelMeasure::dirac(&y, &w).unwrap();
        assert_eq!(galois_translate(&y, &d, &y.identity(1)).unwrap(), d);
        assert_eq!(galois_translate(&y, &d, &g).unwrap(), LevelMeasure::dirac(&y, &g).unwrap());

        let state = KmsState::dirac(&y, &w, Beta::Int(2)).unwrap();
        assert!(state.is_extremal());
        let orbit: Vec<KmsState> = y.group_elements(1).map(|h| state.translate(&y, &h).unwrap()).collect();
        for (i, a) in orbit.iter().enumerate() {
            for b in &orbit[i + 1..] {
                assert_ne!(a, b);
            }
        }
        assert_eq!(orbit.len(), 4);
    }

    #[test]
    fn state_json_shape() {
        let y = model("Q3", 2, 1);
        let state = KmsState::dirac(&y, &y.identity(1), Beta::Infinite).unwrap();
        let j = state.to_json(&y);
        assert_eq!(j["beta"], "inf");
        assert_eq!(j["level"]["n"], 2);
        assert_eq!(j["weights"]["(0, 1)"], "1");
    }

    #[test]
    fn mass_must_be_one() {
        let y = model("Q3", 2, 1);
        let nu = LevelMeasure::new(&y, vec![rat(1, 2), rat(0, 1), rat(0, 1), rat(0, 1)]).unwrap();
        assert!(matches!(state_from_measure(&nu, Beta::Int(1)), Err(crate::Error::MassNotOne(_))));
    }
}
