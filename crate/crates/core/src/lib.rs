//! Finite-level computational models of the Bost-Connes C*-dynamical system
//! attached to a p-adic local field.

pub mod bc;
pub mod cli;
pub mod error;
pub mod finite_abelian;
pub mod guard;
pub mod induction;
pub mod ktheory;
pub mod level;
pub mod padic;
pub mod prim;

pub use error::{Error, Result};
pub use guard::Guardrails;
