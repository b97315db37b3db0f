use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::poly::{is_prime, IntPoly};
use crate::error::{Error, Result};
use crate::guard::sat_pow;

/// How the local field is presented over `Q_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum FieldKind {
    Qp,
    /// Unramified of degree `f`, presented by a monic polynomial irreducible mod `p`.
    Unramified(IntPoly),
    /// Totally ramified of degree `e`, presented by an Eisenstein polynomial.
    Eisenstein(IntPoly),
}

/// A local field of characteristic zero, validated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LocalFieldSpec {
    p: u64,
    kind: FieldKind,
    e: u32,
    f: u32,
    q: u64,
}

/// Validates a field presentation and computes its invariants.
pub fn make_field(p: u64, kind: FieldKind) -> Result<LocalFieldSpec> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let (e, f) = match &kind {
        FieldKind::Qp => (1, 1),
        FieldKind::Unramified(g) => {
            if g.degree() < 2 {
                return Err(Error::Parse("unramified degree must be at least 2".into()));
            }
            if !g.is_irreducible_mod(p) {
                return Err(Error::PolynomialNotIrreducibleModP { poly: g.to_string(), p });
            }
            (1, g.degree())
        }
        FieldKind::Eisenstein(g) => {
            if g.degree() < 2 {
                return Err(Error::Parse("ramification index must be at least 2".into()));
            }
            if !g.is_eisenstein_at(p) {
                return Err(Error::NotEisenstein { poly: g.to_string(), p });
            }
            (g.degree(), 1)
        }
    };
    Ok(LocalFieldSpec { p, kind, e, f, q: sat_pow(p, f) })
}

impl LocalFieldSpec {
    pub fn qp(p: u64) -> Result<Self> {
        make_field(p, FieldKind::Qp)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    /// Ramification index.
    pub fn e(&self) -> u32 {
        self.e
    }

    /// Residue degree.
    pub fn f(&self) -> u32 {
        self.f
    }

    /// Cardinality of the residue field, `p^f`.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Number of coordinates of a ring element (`e*f`, only one of which exceeds 1).
    pub fn dim(&self) -> usize {
        (self.e * self.f) as usize
    }

    /// Coordinate moduli for `O_K / pi^m`.
    ///
    /// Unramified: every coordinate lives in `Z/p^m`. Eisenstein: coordinate
    /// `i` (coefficient of `x^i`) lives in `Z/p^ceil((m-i)/e)`, since
    /// `v(a x^i) = e v_p(a) + i`.
    pub fn moduli(&self, m: u32) -> Vec<u64> {
        match self.kind {
            FieldKind::Qp | FieldKind::Unramified(_) => vec![sat_pow(self.p, m); self.dim()],
            FieldKind::Eisenstein(_) => (0..self.e)
                .map(|i| {
                    let exp = if m > i { (m - i).div_ceil(self.e) } else { 0 };
                    sat_pow(self.p, exp)
                })
                .collect(),
        }
    }

    /// The defining polynomial, if any.
    pub fn poly(&self) -> Option<&IntPoly> {
        match &self.kind {
            FieldKind::Qp => None,
            FieldKind::Unramified(g) | FieldKind::Eisenstein(g) => Some(g),
        }
    }
}

impl fmt::Display for LocalFieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FieldKind::Qp => write!(f, "Q{}", self.p),
            FieldKind::Unramified(g) => write!(f, "Q{}u{}:{}", self.p, self.f, g),
            FieldKind::Eisenstein(g) => write!(f, "Q{}[{}]", self.p, g),
        }
    }
}

impl FromStr for LocalFieldSpec {
    type Err = Error;

    /// Grammar:
    ///
    /// ```text
    /// field   := "Q" prime [ eis | unr ]
    /// eis     := "[" poly "]"            totally ramified, e = deg poly
    /// unr     := "u" degree ":" poly     unramified, f = degree = deg poly
    /// ```
    ///
    /// Examples: `Q2`, `Q3[x^2-3]`, `Q2u2:x^2+x+1`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let err = || Error::Parse(format!("cannot parse field descriptor '{s}'"));
        let rest = s.strip_prefix('Q').ok_or_else(err)?;
        let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
        if digits.is_empty() {
            return Err(err());
        }
        let p: u64 = digits.parse().map_err(|_| err())?;
        let tail = &rest[digits.len()..];
        if tail.is_empty() {
            return make_field(p, FieldKind::Qp);
        }
        if let Some(unr) = tail.strip_prefix('u') {
            if unr.contains('[') {
                return Err(Error::MixedRamification);
            }
            let (deg, poly) = unr.split_once(':').ok_or_else(err)?;
            let deg: u32 = deg.parse().map_err(|_| err())?;
            let g: IntPoly = poly.parse()?;
            if g.degree() != deg {
                return Err(Error::Parse(format!(
                    "declared degree {deg} but polynomial has degree {}",
                    g.degree()
                )));
            }
            return make_field(p, FieldKind::Unramified(g));
        }
        if let Some(eis) = tail.strip_prefix('[') {
            let body = eis.strip_suffix(']').ok_or_else(err)?;
            if body.contains(']') || body.contains('u') {
                return Err(Error::MixedRamification);
            }
            return make_field(p, FieldKind::Eisenstein(body.parse()?));
        }
        Err(err())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_field_examples() {
        let q2 = make_field(2, FieldKind::Qp).unwrap();
        assert_eq!((q2.q(), q2.e(), q2.f()), (2, 1, 1));

        let u = make_field(2, FieldKind::Unramified("x^2+x+1".parse().unwrap())).unwrap();
        assert_eq!((u.q(), u.e(), u.f()), (4, 1, 2));

        let eis = make_field(3, FieldKind::Eisenstein("x^2-3".parse().unwrap())).unwrap();
        assert_eq!((eis.q(), eis.e(), eis.f()), (3, 2, 1));
    }

    #[test]
    fn make_field_errors() {
        assert_eq!(LocalFieldSpec::qp(4), Err(Error::NotPrime(4)));
        assert!(matches!(
            make_field(2, FieldKind::Unramified("x^2+1".parse().unwrap())),
            Err(Error::PolynomialNotIrreducibleModP { .. })
        ));
        assert!(matches!(
            make_field(3, FieldKind::Eisenstein("x^2-9".parse().unwrap())),
            Err(Error::NotEisenstein { .. })
        ));
    }

    #[test]
    fn descriptors_round_trip() {
        for d in ["Q2", "Q3", "Q5", "Q3[x^2-3]", "Q2u2:x^2+x+1", "Q2[x^3+2*x+2]"] {
            let f: LocalFieldSpec = d.parse().unwrap();
            assert_eq!(f.to_string(), d);
        }
        assert_eq!("Q2u2[x^2-2]".parse::<LocalFieldSpec>(), Err(Error::MixedRamification));
        assert!("Z2".parse::<LocalFieldSpec>().is_err());
        assert!("Q2u3:x^2+x+1".parse::<LocalFieldSpec>().is_err());
    }

    #[test]
    fn eisenstein_moduli_count_p_to_the_m() {
        let f: LocalFieldSpec = "Q3[x^2-3]".parse().unwrap();
        for m in 1..8 {
            let card: u64 = f.moduli(m).iter().product();
            assert_eq!(card, 3u64.pow(m));
        }
        assert_eq!(f.moduli(3), vec![9, 3]);
    }
}
