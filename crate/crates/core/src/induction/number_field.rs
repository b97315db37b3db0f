use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::padic::is_prime;

/// Quadratic fields of class number one that are supported.
pub const SUPPORTED_QUADRATIC: [i64; 9] = [-1, -2, -3, -7, -11, 2, 3, 5, 13];

/// `Q` or `Q(sqrt d)` for squarefree `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NumberFieldSpec {
    Rationals,
    Quadratic(i64),
}

impl NumberFieldSpec {
    pub fn quadratic(d: i64) -> Result<Self> {
        if d == 0 || d == 1 || !is_squarefree(d) {
            return Err(Error::UnsupportedField(format!("d = {d} is not a squarefree integer other than 0, 1")));
        }
        if !SUPPORTED_QUADRATIC.contains(&d) {
            return Err(Error::UnsupportedField(format!(
                "Q(sqrt {d}) is not in the supported class-number-one list {SUPPORTED_QUADRATIC:?}"
            )));
        }
        Ok(NumberFieldSpec::Quadratic(d))
    }

    pub fn degree(&self) -> u32 {
        match self {
            NumberFieldSpec::Rationals => 1,
            NumberFieldSpec::Quadratic(_) => 2,
        }
    }

    pub fn discriminant(&self) -> i64 {
        match *self {
            NumberFieldSpec::Rationals => 1,
            NumberFieldSpec::Quadratic(d) if d.rem_euclid(4) == 1 => d,
            NumberFieldSpec::Quadratic(d) => 4 * d,
        }
    }
}

fn is_squarefree(d: i64) -> bool {
    let d = d.unsigned_abs();
    (2..).take_while(|k| k * k <= d).all(|k| d % (k * k) != 0)
}

impl fmt::Display for NumberFieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumberFieldSpec::Rationals => write!(f, "Q"),
            NumberFieldSpec::Quadratic(-1) => write!(f, "Q(i)"),
            NumberFieldSpec::Quadratic(d) => write!(f, "Q(sqrt:{d})"),
        }
    }
}

impl Serialize for NumberFieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for NumberFieldSpec {
    type Err = Error;

    /// `Q`, `Q(i)`, `Q(sqrt:d)`.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "Q" {
            return Ok(NumberFieldSpec::Rationals);
        }
        if s == "Q(i)" {
            return Self::quadratic(-1);
        }
        let d = s
            .strip_prefix("Q(sqrt:")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("cannot parse global field '{s}'")))?;
        let d: i64 = d.parse().map_err(|_| Error::Parse(format!("cannot parse global field '{s}'")))?;
        Self::quadratic(d)
    }
}

/// How a rational prime decomposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrimeData {
    pub p: u64,
    pub splitting: Splitting,
    /// Inertia degree.
    pub f: u32,
    pub primes_above: u32,
}

impl PrimeData {
    /// Number of ideals of norm `p^k`.
    pub fn local_count(&self, k: u32) -> u32 {
        match (self.primes_above, self.splitting) {
            (1, Splitting::Split) | (_, Splitting::Ramified) => 1,
            (_, Splitting::Split) => k + 1,
            (_, Splitting::Inert) => u32::from(k % 2 == 0),
        }
    }
}

/// The Kronecker symbol `(D / p)` for a prime `p`.
pub fn kronecker(disc: i64, p: u64) -> i32 {
    if p == 2 {
        return match disc.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    let a = disc.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    let mut acc = 1u128;
    let mut base = a as u128;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

pub fn splitting_data(field: &NumberFieldSpec, p: u64) -> Result<PrimeData> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(match field {
        NumberFieldSpec::Rationals => PrimeData { p, splitting: Splitting::Split, f: 1, primes_above: 1 },
        NumberFieldSpec::Quadratic(_) => match kronecker(field.discriminant(), p) {
            1 => PrimeData { p, splitting: Splitting::Split, f: 1, primes_above: 2 },
            -1 => PrimeData { p, splitting: Splitting::Inert, f: 2, primes_above: 1 },
            _ => PrimeData { p, splitting: Splitting::Ramified, f: 1, primes_above: 1 },
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_fields() {
        assert_eq!("Q".parse::<NumberFieldSpec>().unwrap(), NumberFieldSpec::Rationals);
        assert_eq!("Q(i)".parse::<NumberFieldSpec>().unwrap(), NumberFieldSpec::Quadratic(-1));
        let k: NumberFieldSpec = "Q(sqrt:-3)".parse().unwrap();
        assert_eq!((k.discriminant(), k.to_string()), (-3, "Q(sqrt:-3)".to_string()));
        assert_eq!("Q(sqrt:5)".parse::<NumberFieldSpec>().unwrap().discriminant(), 5);
        assert_eq!("Q(sqrt:2)".parse::<NumberFieldSpec>().unwrap().discriminant(), 8);
        assert!(matches!("Q(sqrt:-5)".parse::<NumberFieldSpec>(), Err(Error::UnsupportedField(_))));
        assert!(matches!("Q(sqrt:4)".parse::<NumberFieldSpec>(), Err(Error::UnsupportedField(_))));
        assert!("R".parse::<NumberFieldSpec>().is_err());
    }

    #[test]
    fn splitting_examples() {
        let q = NumberFieldSpec::Rationals;
        assert_eq!(splitting_data(&q, 2).unwrap().f, 1);
        let gauss = NumberFieldSpec::Quadratic(-1);
        // x^2 + 1 has roots mod 5 and none mod 3.
        assert!((0..5u64).any(|x| (x * x + 1) % 5 == 0));
        assert!((0..3u64).all(|x| (x * x + 1) % 3 != 0));
        let d5 = splitting_data(&gauss, 5).unwrap();
        assert_eq!((d5.splitting, d5.f, d5.primes_above), (Splitting::Split, 1, 2));
        let d3 = splitting_data(&gauss, 3).unwrap();
        assert_eq!((d3.splitting, d3.f), (Splitting::Inert, 2));
        assert_eq!(splitting_data(&gauss, 2).unwrap().splitting, Splitting::Ramified);
        assert_eq!(splitting_data(&gauss, 4), Err(Error::NotPrime(4)));
    }
}
