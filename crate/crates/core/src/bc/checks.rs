use std::collections::HashSet;

use num_traits::Zero;
use serde::Serialize;

use super::function::{LocallyConstantFunction, Monomial};
use super::kms::{kms_eval, kms_infty_eval, KmsState};
use super::matrix_model::{gibbs_expectation, MatrixModel};
use super::scalar::{Beta, Scalar};
use crate::error::Result;
use crate::level::{LevelIndex, LevelModel};

pub const KMS_CLAIM: &str =
    "phi_{beta,w}(f) = (1 - q^-beta) sum_k q^{-k beta} f(k.w); Tr e^{-beta H} = (1 - q^-beta)^-1; G acts freely and transitively on extremal KMS_beta states";

const FLOAT_SLACK: f64 = 1e-12;

/// `f v_j` and `v_j^* f` for `f` in the point basis and `1`, `0 <= j <= max_degree`.
pub fn monomial_family(model: &LevelModel, max_degree: u32) -> Vec<Monomial> {
    let mut funcs = LocallyConstantFunction::basis(model);
    funcs.push(LocallyConstantFunction::one(model));
    let mut out = Vec::new();
    for f in &funcs {
        out.push(Monomial::diagonal(f.clone()));
        for j in 1..=max_degree {
            out.push(Monomial::right(f.clone(), j));
            out.push(Monomial::left(j, f.clone()));
        }
    }
    out
}

/// Pairs from [`monomial_family`] with `j_a + j_b <= max_degree`.
pub fn monomial_pairs(model: &LevelModel, max_degree: u32) -> Vec<(Monomial, Monomial)> {
    let family = monomial_family(model, max_degree);
    let mut out = Vec::new();
    for a in &family {
        for b in &family {
            if a.j + b.j <= max_degree {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KmsCheck {
    pub level: LevelIndex,
    pub beta: Beta,
    pub truncation: usize,
    pub pairs: usize,
    pub nonzero: usize,
    pub max_residual: f64,
    /// Largest `residual / contract_bound`.
    pub max_bound_ratio: f64,
    pub pass: bool,
}

/// KMS residuals of every monomial pair of total degree at most `max_degree`.
pub fn kms_check(model: &LevelModel, beta: &Beta, n: usize, max_degree: u32) -> Result<KmsCheck> {
    let mm = MatrixModel::new(model, model.point(0), n)?;
    let pairs = monomial_pairs(model, max_degree);
    let (mut nonzero, mut max_residual, mut max_bound_ratio, mut pass) = (0, 0.0f64, 0.0f64, true);
    for (a, b) in &pairs {
        let r = mm.kms_residual(a, b, beta)?;
        if !r.exact_zero && r.residual > 0.0 {
            nonzero += 1;
        }
        max_residual = max_residual.max(r.residual);
        if r.contract_bound > 0.0 {
            max_bound_ratio = max_bound_ratio.max(r.residual / r.contract_bound);
        }
        pass &= r.residual <= r.contract_bound + FLOAT_SLACK;
    }
    Ok(KmsCheck {
        level: model.level(),
        beta: *beta,
        truncation: n,
        pairs: pairs.len(),
        nonzero,
        max_residual,
        max_bound_ratio,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GibbsCheck {
    pub level: LevelIndex,
    pub beta: Beta,
    pub truncation: usize,
    pub functions: usize,
    pub max_gibbs_delta: f64,
    /// `q^{-beta N} / (1 - q^-beta)` for indicators.
    pub gibbs_bound: f64,
    pub max_infty_delta: f64,
    /// `2 q^-beta / (1 - q^-beta)` for indicators.
    pub infty_bound: f64,
    pub pass: bool,
}

/// Gibbs expectations against the closed form, and the closed form against
/// its `beta = inf` limit, on every point indicator at every stratum-0 base point.
pub fn gibbs_check(model: &LevelModel, beta: &Beta, n: usize) -> Result<GibbsCheck> {
    let x = f64::boltzmann(model.q(), beta)?;
    let basis = LocallyConstantFunction::basis(model);
    let gibbs_bound = x.powi(n as i32) / (1.0 - x);
    let infty_bound = 2.0 * x / (1.0 - x);
    let (mut max_gibbs_delta, mut max_infty_delta, mut pass) = (0.0f64, 0.0f64, true);
    for w in model.stratum(0).map(|i| model.point(i)) {
        let mm = MatrixModel::new(model, w.clone(), n)?;
        for f in &basis {
            let closed = kms_eval::<f64>(model, f, beta, &w)?;
            let gibbs = gibbs_expectation(&x, &mm.represent::<f64>(f)?);
            let limit = super::function::gaussian_to::<f64>(&kms_infty_eval(model, f, &w)?);
            let (dg, di) = ((gibbs - closed).norm(), (closed - limit).norm());
            let norm = f.sup_norm();
            pass &= dg <= norm * gibbs_bound + FLOAT_SLACK && di <= norm * infty_bound + FLOAT_SLACK;
            max_gibbs_delta = max_gibbs_delta.max(dg);
            max_infty_delta = max_infty_delta.max(di);
        }
    }
    Ok(GibbsCheck {
        level: model.level(),
        beta: *beta,
        truncation: n,
        functions: basis.len(),
        max_gibbs_delta,
        gibbs_bound,
        max_infty_delta,
        infty_bound,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GaloisCheck {
    pub level: LevelIndex,
    pub group_order: u64,
    /// Extremal states tested, one per point of `G_{n,m}`.
    pub states: u64,
    pub min_orbit: u64,
    pub max_stabilizer: u64,
    pub pass: bool,
}

/// Orbits and stabilizers of every Dirac state under `G_{n,m}`.
pub fn galois_check(model: &LevelModel, beta: &Beta) -> Result<GaloisCheck> {
    let m = model.m();
    let order = model.group_order(m);
    let group: Vec<_> = model.group_elements(m).collect();
    let (mut min_orbit, mut max_stabilizer) = (u64::MAX, 0);
    for h in &group {
        let state = KmsState::dirac(model, h, *beta)?;
        let mut orbit = HashSet::new();
        let mut stabilizer = 0;
        for g in &group {
            let t = state.translate(model, g)?;
            if t == state {
                stabilizer += 1;
            }
            let support: Vec<_> =
                t.measure.weights().iter().enumerate().filter(|(_, w)| !w.is_zero()).map(|(i, w)| (i, w.clone())).collect();
            orbit.insert(support);
        }
        min_orbit = min_orbit.min(orbit.len() as u64);
        max_stabilizer = max_stabilizer.max(stabilizer);
    }
    Ok(GaloisCheck {
        level: model.level(),
        group_order: order,
        states: order,
        min_orbit,
        max_stabilizer,
        pass: min_orbit == order && max_stabilizer == 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(desc: &str, n: u32, m: u32) -> LevelModel {
        LevelModel::new(&desc.parse().unwrap(), LevelIndex::new(n, m)).unwrap()
    }

    #[test]
    fn checks_pass_on_small_levels() {
        let y = model("Q2", 2, 1);
        let k = kms_check(&y, &Beta::Int(1), 8, 2).unwrap();
        assert!(k.pass && k.nonzero > 0, "{k:?}");
        assert!(gibbs_check(&y, &Beta::Real(0.5), 8).unwrap().pass);
        let g = galois_check(&y, &Beta::Int(1)).unwrap();
        assert_eq!((g.min_orbit, g.max_stabilizer), (y.group_order(1), 1));
    }
}
