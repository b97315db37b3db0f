//! KMS states: closed form, matrix model, Gibbs limit and Galois translation.

use bclocal::bc::{
    kms_eval, kms_infty_eval, partition_function, Beta, KmsState, LocallyConstantFunction, MatrixModel, Monomial,
};
use bclocal::level::{LevelIndex, LevelModel};
use num_rational::BigRational;

fn main() -> bclocal::Result<()> {
    let field = "Q2".parse()?;
    let model = LevelModel::new(&field, LevelIndex::new(2, 2))?;
    let w = model.point(0);
    let beta = Beta::Int(1);

    let z = partition_function::<BigRational>(model.q(), &beta, 16)?;
    println!("Z_16 = {}, Z = {}, gap = {}", z.truncated, z.exact, z.bound);

    for k in 0..=model.m() {
        let f = LocallyConstantFunction::stratum_indicator(&model, k);
        let exact = kms_eval::<BigRational>(&model, &f, &beta, &w)?;
        let ground = kms_infty_eval(&model, &f, &w)?;
        println!("phi(1_stratum{k}) = {}   phi_inf = {}", exact.re, ground.re);
    }

    let mm = MatrixModel::new(&model, w.clone(), 16)?;
    let one = LocallyConstantFunction::one(&model);
    let (a, b) = (Monomial::right(one.clone(), 1), Monomial::left(1, one));
    let r = mm.kms_residual(&a, &b, &beta)?;
    println!("KMS residual (v_1, v_1^*) at N = 16: {:e} <= {:e}", r.residual, r.sharp_bound);

    let state = KmsState::dirac(&model, &model.identity(model.m()), beta)?;
    let g = model.group_element(model.m(), 1);
    println!("translated by {g}: {}", state.translate(&model, &g)?.to_json(&model));
    Ok(())
}
