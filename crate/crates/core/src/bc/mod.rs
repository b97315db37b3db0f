//! Time evolution, matrix models and KMS states at a finite level.

mod checks;
mod function;
mod kms;
mod matrix_model;
mod operator;
mod scalar;

pub use checks::{
    galois_check, gibbs_check, kms_check, monomial_family, monomial_pairs, GaloisCheck, GibbsCheck, KmsCheck, KMS_CLAIM,
};
pub use function::{
    analytic_factor, time_evolution, Gaussian, LocallyConstantFunction, Monomial, ScaledMonomial, Side,
};
pub use kms::{galois_translate, kms_eval, kms_infty_eval, state_from_measure, KmsState};
pub use matrix_model::{gibbs_expectation, partition_function, KmsResidual, MatrixModel, PartitionFunction};
pub use operator::Operator;
pub use scalar::{Beta, Scalar};
