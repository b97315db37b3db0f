//! Monic integer polynomials used to present unramified and Eisenstein
//! extensions of `Q_p`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A monic polynomial with integer coefficients, stored low degree first.
/// The leading coefficient 1 is included.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl IntPoly {
    /// Builds a polynomial from coefficients `[c_0, c_1, ..., c_d]`.
    /// The leading coefficient must be 1.
    pub fn monic(coeffs: Vec<i64>) -> Result<Self> {
        match coeffs.last() {
            Some(1) if coeffs.len() >= 2 => Ok(IntPoly { coeffs }),
            _ => Err(Error::Parse(format!(
                "expected a monic polynomial of degree >= 1, got coefficients {coeffs:?}"
            ))),
        }
    }

    pub fn degree(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// The non-leading coefficients `c_0..c_{d-1}`.
    pub fn lower(&self) -> &[i64] {
        &self.coeffs[..self.coeffs.len() - 1]
    }

    pub fn is_irreducible_mod(&self, p: u64) -> bool {
        let f: Vec<u64> = self.coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
        let d = f.len() - 1;
        // Trial division by every monic polynomial of degree 1..=d/2.
        for deg in 1..=d / 2 {
            let count = (p as usize).pow(deg as u32);
            for code in 0..count {
                let mut g = Vec::with_capacity(deg + 1);
                let mut c = code;
                for _ in 0..deg {
                    g.push((c % p as usize) as u64);
                    c /= p as usize;
                }
                g.push(1);
                if rem_mod_p(&f, &g, p).iter().all(|&x| x == 0) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_eisenstein_at(&self, p: u64) -> bool {
        let p = p as i64;
        let lower = self.lower();
        lower.iter().all(|c| c % p == 0) && lower[0] % (p * p) != 0
    }
}

/// Remainder of `f` modulo monic `g` over `F_p`.
fn rem_mod_p(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dg;
        if lead != 0 {
            for (i, &gc) in g.iter().enumerate() {
                let t = &mut r[shift + i];
                *t = (*t + p * p - (lead * gc) % p) % p;
            }
        }
        r.pop();
    }
    r
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (deg, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let abs = c.unsigned_abs();
            let body = match (deg, abs) {
                (0, a) => a.to_string(),
                (1, 1) => "x".to_string(),
                (1, a) => format!("{a}*x"),
                (d, 1) => format!("x^{d}"),
                (d, a) => format!("{a}*x^{d}"),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for IntPoly {
    type Err = Error;

    /// Parses expressions such as `x^2+x+1`, `x^2-3`, `x^3 + 2*x - 2`.
    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse(format!("cannot parse polynomial '{s}'"));
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(err());
        }
        let mut coeffs: Vec<i64> = Vec::new();
        let bytes = text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = 1i64;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -1;
                }
                i += 1;
            } else if i != 0 {
                return Err(err());
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let num: Option<i64> = if i > start {
                Some(text[start..i].parse().map_err(|_| err())?)
            } else {
                None
            };
            if i < bytes.len() && bytes[i] == b'*' {
                i += 1;
            }
            let deg = if i < bytes.len() && bytes[i] == b'x' {
                i += 1;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    let s2 = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if s2 == i {
                        return Err(err());
                    }
                    text[s2..i].parse::<usize>().map_err(|_| err())?
                } else {
                    1
                }
            } else {
                if num.is_none() {
                    return Err(err());
                }
                0
            };
            if coeffs.len() <= deg {
                coeffs.resize(deg + 1, 0);
            }
            coeffs[deg] += sign * num.unwrap_or(1);
        }
        IntPoly::monic(coeffs)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
