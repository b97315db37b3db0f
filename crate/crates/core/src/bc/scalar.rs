use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Inverse temperature in `(0, inf]`.
///
/// Integer values are kept as `Int` so that `q^-beta` is an exact rational.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Beta {
    Int(u32),
    Real(f64),
    Infinite,
}

impl Beta {
    pub fn new(beta: f64) -> Result<Self> {
        if beta.is_infinite() && beta > 0.0 {
            return Ok(Beta::Infinite);
        }
        if !(beta > 0.0) {
            return Err(Error::NonpositiveBeta(beta));
        }
        if beta.fract() == 0.0 && beta <= u32::MAX as f64 {
            Ok(Beta::Int(beta as u32))
        } else {
            Ok(Beta::Real(beta))
        }
    }

    pub fn int(beta: u32) -> Result<Self> {
        if beta == 0 {
            return Err(Error::NonpositiveBeta(0.0));
        }
        Ok(Beta::Int(beta))
    }

    pub fn as_f64(&self) -> f64 {
        match *self {
            Beta::Int(b) => b as f64,
            Beta::Real(b) => b,
            Beta::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Beta::Infinite)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match *self {
            Beta::Int(0) => Err(Error::NonpositiveBeta(0.0)),
            Beta::Real(b) if !(b > 0.0) || !b.is_finite() => Err(Error::NonpositiveBeta(b)),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Beta::Int(b) => write!(f, "{b}"),
            Beta::Real(b) => write!(f, "{b}"),
            Beta::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Beta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(Beta::Infinite);
        }
        let b: f64 = s.parse().map_err(|_| Error::Parse(format!("cannot parse beta '{s}'")))?;
        Beta::new(b)
    }
}

impl Serialize for Beta {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Beta::Int(b) => s.serialize_u32(b),
            Beta::Real(b) => s.serialize_f64(b),
            Beta::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Real scalars the models are computed over: `f64` or exact `BigRational`.
pub trait Scalar: Num + Clone + PartialOrd + fmt::Debug + std::ops::Neg<Output = Self> {
    fn from_rational(r: &BigRational) -> Self;
    fn to_f64(&self) -> f64;
    fn abs_val(&self) -> Self;
    /// The Boltzmann factor `q^-beta` for finite `beta`.
    fn boltzmann(q: u64, beta: &Beta) -> Result<Self>;

    fn pown(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for f64 {
    fn from_rational(r: &BigRational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs_val(&self) -> Self {
        f64::abs(*self)
    }

    fn boltzmann(q: u64, beta: &Beta) -> Result<Self> {
        beta.validate()?;
        match *beta {
            Beta::Infinite => Ok(0.0),
            b => Ok((q as f64).powf(-b.as_f64())),
        }
    }

    fn pown(&self, e: u32) -> Self {
        f64::powi(*self, e as i32)
    }
}

impl Scalar for BigRational {
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs_val(&self) -> Self {
        Signed::abs(self)
    }

    fn boltzmann(q: u64, beta: &Beta) -> Result<Self> {
        beta.validate()?;
        match *beta {
            Beta::Int(b) => Ok(BigRational::new(BigInt::one(), BigInt::from(q).pow(b))),
            Beta::Infinite => Ok(BigRational::zero()),
            Beta::Real(_) => Err(Error::InexactBeta),
        }
    }

    fn pown(&self, e: u32) -> Self {
        num_traits::pow(self.clone(), e as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_parsing() {
        assert_eq!("2".parse::<Beta>().unwrap(), Beta::Int(2));
        assert_eq!("0.5".parse::<Beta>().unwrap(), Beta::Real(0.5));
        assert_eq!("inf".parse::<Beta>().unwrap(), Beta::Infinite);
        assert_eq!("-1".parse::<Beta>(), Err(Error::NonpositiveBeta(-1.0)));
        assert_eq!("0".parse::<Beta>(), Err(Error::NonpositiveBeta(0.0)));
    }

    #[test]
    fn boltzmann_factors() {
        let x = BigRational::boltzmann(3, &Beta::Int(2)).unwrap();
        assert_eq!(x, BigRational::new(1.into(), 9.into()));
        assert_eq!(BigRational::boltzmann(3, &Beta::Real(0.5)), Err(Error::InexactBeta));
        let y = f64::boltzmann(4, &Beta::Real(0.5)).unwrap();
        assert!((y - 0.5).abs() < 1e-15);
    }
}
