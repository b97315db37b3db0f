use serde::Serialize;

use super::number_field::{splitting_data, NumberFieldSpec};
use crate::error::{Error, Result};

/// Largest bound a divergence search may reach.
pub const DIVERGENCE_GUARD: u64 = 100_000_000;

/// Ideal counts `a_1..a_B` of a number field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletSeriesPartial {
    field: NumberFieldSpec,
    /// `coeffs[n]` for `n` in `0..=B`; `coeffs[0] = 0`.
    coeffs: Vec<u16>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZetaPartial {
    pub bound: u64,
    pub partial: f64,
    /// Infinite when the series does not converge.
    pub tail_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InducedMass {
    pub p: u64,
    pub f: u32,
    pub beta: f64,
    pub zeta: ZetaPartial,
    pub local_factor: f64,
    pub mass: f64,
    pub tail_bound: f64,
}

fn prime_sieve(bound: usize) -> Vec<bool> {
    let mut is_p = vec![true; bound + 1];
    is_p[0] = false;
    if bound >= 1 {
        is_p[1] = false;
    }
    let mut i = 2;
    while i * i <= bound {
        if is_p[i] {
            (i * i..=bound).step_by(i).for_each(|j| is_p[j] = false);
        }
        i += 1;
    }
    is_p
}

/// Number of ideals of each norm up to `bound`.
pub fn ideal_count_coeffs(field: &NumberFieldSpec, bound: u64) -> Result<DirichletSeriesPartial> {
    if let NumberFieldSpec::Quadratic(d) = *field {
        NumberFieldSpec::quadratic(d)?;
    }
    if bound > DIVERGENCE_GUARD {
        return Err(Error::GuardExceeded(bound));
    }
    let b = bound as usize;
    let mut coeffs = vec![1u16; b + 1];
    coeffs[0] = 0;
    if *field != NumberFieldSpec::Rationals {
        for (p, _) in prime_sieve(b).into_iter().enumerate().filter(|&(_, is_p)| is_p) {
            let data = splitting_data(field, p as u64)?;
            let mut pk = p;
            let mut k = 1;
            while pk <= b {
                let c = data.local_count(k) as u16;
                if c != 1 {
                    for n in (pk..=b).step_by(pk) {
                        if (n / pk) % p != 0 {
                            coeffs[n] *= c;
                        }
                    }
                }
                match pk.checked_mul(p) {
                    Some(next) => pk = next,
                    None => break,
                }
                k += 1;
            }
        }
    }
    Ok(DirichletSeriesPartial { field: *field, coeffs })
}

impl DirichletSeriesPartial {
    pub fn field(&self) -> &NumberFieldSpec {
        &self.field
    }

    pub fn bound(&self) -> u64 {
        (self.coeffs.len() - 1) as u64
    }

    /// `a_n`, zero outside `1..=B`.
    pub fn coeff(&self, n: u64) -> u32 {
        self.coeffs.get(n as usize).map_or(0, |&a| a as u32)
    }

    pub fn coeffs(&self) -> &[u16] {
        &self.coeffs
    }

    /// `sum_{n <= B} a_n n^-beta`, summed smallest terms first.
    pub fn partial(&self, beta: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .filter(|&(_, &a)| a != 0)
            .map(|(n, &a)| a as f64 * (n as f64).powf(-beta))
            .sum()
    }

    /// `C_K B^(1-beta) / (beta - 1)` with `C_Q = 1` and `C_K = 4` for quadratic `K`.
    pub fn tail_bound(&self, beta: f64) -> f64 {
        if beta <= 1.0 {
            return f64::INFINITY;
        }
        let c = match self.field {
            NumberFieldSpec::Rationals => 1.0,
            NumberFieldSpec::Quadratic(_) => 4.0,
        };
        c * (self.bound() as f64).powf(1.0 - beta) / (beta - 1.0)
    }

    pub fn evaluate(&self, beta: f64) -> ZetaPartial {
        ZetaPartial { bound: self.bound(), partial: self.partial(beta), tail_bound: self.tail_bound(beta) }
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_nan() || beta <= 0.0 {
        Err(Error::NonpositiveBeta(beta))
    } else {
        Ok(())
    }
}

pub fn zeta_partial(field: &NumberFieldSpec, beta: f64, bound: u64) -> Result<ZetaPartial> {
    check_beta(beta)?;
    if bound == 0 {
        return Err(Error::Parse("bound must be at least 1".into()));
    }
    Ok(ideal_count_coeffs(field, bound)?.evaluate(beta))
}

/// Total mass of the state induced from the completion at a prime above `p`.
pub fn induced_partition(field: &NumberFieldSpec, p: u64, beta: f64, bound: u64) -> Result<InducedMass> {
    check_beta(beta)?;
    if beta <= 1.0 {
        return Err(Error::BetaNotAboveOne(beta));
    }
    let data = splitting_data(field, p)?;
    let zeta = zeta_partial(field, beta, bound)?;
    let local_factor = 1.0 - (p as f64).powf(-(data.f as f64) * beta);
    Ok(InducedMass {
        p,
        f: data.f,
        beta,
        zeta,
        local_factor,
        mass: zeta.partial * local_factor,
        tail_bound: zeta.tail_bound * local_factor,
    })
}

/// Smallest power-of-two bound whose partial sum exceeds `target`.
pub fn divergence_witness(field: &NumberFieldSpec, beta: f64, target: f64) -> Result<u64> {
    check_beta(beta)?;
    if beta > 1.0 {
        return Err(Error::BetaAboveOne(beta));
    }
    let mut bound = 1u64;
    while bound <= DIVERGENCE_GUARD {
        if zeta_partial(field, beta, bound)?.partial > target {
            return Ok(bound);
        }
        bound *= 2;
    }
    Err(Error::GuardExceeded(bound))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss() -> NumberFieldSpec {
        NumberFieldSpec::Quadratic(-1)
    }

    #[test]
    fn coefficient_examples() {
        let q = ideal_count_coeffs(&NumberFieldSpec::Rationals, 50).unwrap();
        assert!((1..=50).all(|n| q.coeff(n) == 1));
        let g = ideal_count_coeffs(&gauss(), 50).unwrap();
        assert_eq!((g.coeff(1), g.coeff(2), g.coeff(3), g.coeff(5), g.coeff(9), g.coeff(25)), (1, 1, 0, 2, 1, 3));
    }

    #[test]
    fn zeta_examples() {
        let one = zeta_partial(&NumberFieldSpec::Rationals, 2.0, 1).unwrap();
        assert_eq!(one.partial, 1.0);
        let ip = induced_partition(&NumberFieldSpec::Rationals, 2, 2.0, 100_000).unwrap();
        let pi2_8 = std::f64::consts::PI.powi(2) / 8.0;
        assert!((ip.mass - pi2_8).abs() <= ip.tail_bound);
        assert_eq!(
            induced_partition(&NumberFieldSpec::Rationals, 2, 1.0, 10),
            Err(Error::BetaNotAboveOne(1.0))
        );
    }

    #[test]
    fn divergence_examples() {
        assert_eq!(divergence_witness(&NumberFieldSpec::Rationals, 1.0, 1.0), Ok(2));
        let b = divergence_witness(&gauss(), 1.0, 5.0).unwrap();
        assert!(zeta_partial(&gauss(), 1.0, b).unwrap().partial > 5.0);
        assert!(zeta_partial(&gauss(), 1.0, b / 2).unwrap().partial <= 5.0);
        assert_eq!(divergence_witness(&gauss(), 1.5, 5.0), Err(Error::BetaAboveOne(1.5)));
    }
}
