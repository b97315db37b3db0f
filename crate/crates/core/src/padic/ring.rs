use std::fmt;

use serde::Serialize;

use super::field::{FieldKind, LocalFieldSpec};
use crate::error::{level_mismatch, Error, Result};

/// An element of `O_K / pi^m` in canonical coordinates.
///
/// Coordinates are coefficients of `1, x, ..., x^(d-1)` in the presenting
/// polynomial basis, each reduced into `[0, modulus_i)`. Two elements are
/// equal iff their coordinates are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RingElement {
    level: u32,
    coeffs: Vec<u64>,
}

impl RingElement {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Reinterprets the canonical coordinates at a higher level.
    pub fn lift(&self, level: u32) -> RingElement {
        debug_assert!(level >= self.level);
        RingElement { level, coeffs: self.coeffs.clone() }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            write!(f, "{:?}", self.coeffs)
        }
    }
}

/// The residue ring `O_K / pi^m`, `m >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueRing {
    field: LocalFieldSpec,
    m: u32,
    moduli: Vec<u64>,
    /// Largest coordinate modulus; products are formed modulo this.
    top: u64,
    /// `x^d = sum reducer[i] x^i` in `Z/top`.
    reducer: Vec<u64>,
    card: u64,
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Inverse of `a` modulo `m` (which must be coprime to `a`).
fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let qt = old_r / r;
        (old_r, r) = (r, old_r - qt * r);
        (old_s, s) = (s, old_s - qt * s);
    }
    debug_assert_eq!(old_r.abs(), 1);
    (old_s * old_r).rem_euclid(m as i128) as u64
}

impl ResidueRing {
    pub fn new(field: &LocalFieldSpec, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Parse("residue ring level must be at least 1".into()));
        }
        Ok(Self::with_level(field, m))
    }

    pub(crate) fn with_level(field: &LocalFieldSpec, m: u32) -> Self {
        let moduli = field.moduli(m);
        let top = moduli.iter().copied().max().unwrap_or(1);
        let reducer = match field.poly() {
            None => Vec::new(),
            Some(g) => g
                .lower()
                .iter()
                .map(|&c| (-(c as i128)).rem_euclid(top as i128) as u64)
                .collect(),
        };
        let card = moduli.iter().product();
        ResidueRing { field: field.clone(), m, moduli, top, reducer, card }
    }

    pub fn field(&self) -> &LocalFieldSpec {
        &self.field
    }

    pub fn level(&self) -> u32 {
        self.m
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    /// `q^m`.
    pub fn cardinality(&self) -> u64 {
        self.card
    }

    /// `q^(m-1) (q-1)`.
    pub fn unit_count(&self) -> u64 {
        let q = self.field.q();
        self.card / q * (q - 1)
    }

    fn check(&self, a: &RingElement) -> Result<()> {
        if a.level != self.m || a.coeffs.len() != self.moduli.len() {
            return Err(level_mismatch(self.m, a.level));
        }
        Ok(())
    }

    fn canonical(&self, raw: impl IntoIterator<Item = u64>) -> RingElement {
        let coeffs = raw.into_iter().zip(&self.moduli).map(|(c, &md)| c % md).collect();
        RingElement { level: self.m, coeffs }
    }

    pub fn zero(&self) -> RingElement {
        self.canonical(std::iter::repeat(0).take(self.moduli.len()))
    }

    pub fn one(&self) -> RingElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> RingElement {
        let mut raw = vec![0u64; self.moduli.len()];
        raw[0] = (n as i128).rem_euclid(self.moduli[0] as i128) as u64;
        self.canonical(raw)
    }

    /// Builds an element from raw coordinates, reducing them.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<RingElement> {
        if coeffs.len() != self.moduli.len() {
            return Err(Error::Parse(format!(
                "expected {} coordinates, got {}",
                self.moduli.len(),
                coeffs.len()
            )));
        }
        Ok(self.canonical(
            coeffs
                .iter()
                .zip(&self.moduli)
                .map(|(&c, &md)| (c as i128).rem_euclid(md as i128) as u64),
        ))
    }

    /// The prime element: `p` when unramified, the class of `x` when Eisenstein.
    pub fn uniformizer(&self) -> RingElement {
        match self.field.kind() {
            FieldKind::Eisenstein(_) => {
                let mut raw = vec![0u64; self.moduli.len()];
                raw[1] = 1;
                self.canonical(raw)
            }
            _ => self.from_int(self.field.p() as i64),
        }
    }

    /// Mixed-radix index in `0..q^m`.
    pub fn index_of(&self, a: &RingElement) -> u64 {
        let mut idx = 0u64;
        let mut scale = 1u64;
        for (&c, &md) in a.coeffs.iter().zip(&self.moduli) {
            idx += c * scale;
            scale *= md;
        }
        idx
    }

    pub fn element(&self, mut idx: u64) -> RingElement {
        let mut coeffs = Vec::with_capacity(self.moduli.len());
        for &md in &self.moduli {
            coeffs.push(idx % md);
            idx /= md;
        }
        RingElement { level: self.m, coeffs }
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = RingElement> + '_ {
        (0..self.card).map(|i| self.element(i))
    }

    /// All units in index order.
    pub fn units(&self) -> impl Iterator<Item = RingElement> + '_ {
        self.elements().filter(|a| self.is_unit(a))
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.canonical(a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| x + y)))
    }

    pub fn neg(&self, a: &RingElement) -> Result<RingElement> {
        self.check(a)?;
        Ok(self.canonical(a.coeffs.iter().zip(&self.moduli).map(|(&x, &md)| md - x)))
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.add(a, &self.neg(b)?)
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    fn mul_unchecked(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let d = self.moduli.len();
        let top = self.top;
        if d == 1 {
            return self.canonical([mul_mod(a.coeffs[0], b.coeffs[0], top)]);
        }
        let mut prod = vec![0u64; 2 * d - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mul_mod(x, y, top)) % top;
            }
        }
        // x^t = x^(t-d) * sum reducer[i] x^i, from the top degree down.
        for t in (d..2 * d - 1).rev() {
            let c = prod[t];
            if c == 0 {
                continue;
            }
            for (i, &r) in self.reducer.iter().enumerate() {
                let slot = &mut prod[t - d + i];
                *slot = (*slot + mul_mod(c, r, top)) % top;
            }
        }
        prod.truncate(d);
        self.canonical(prod)
    }

    pub fn pow(&self, a: &RingElement, mut e: u64) -> Result<RingElement> {
        self.check(a)?;
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_unchecked(&acc, &base);
            }
            base = self.mul_unchecked(&base, &base);
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn is_unit(&self, a: &RingElement) -> bool {
        let p = self.field.p();
        match self.field.kind() {
            FieldKind::Unramified(_) => a.coeffs.iter().any(|c| c % p != 0),
            _ => a.coeffs[0] % p != 0,
        }
    }

    /// Inverse of a unit; `None` for non-units.
    pub fn inverse(&self, a: &RingElement) -> Result<Option<RingElement>> {
        self.check(a)?;
        if !self.is_unit(a) {
            return Ok(None);
        }
        Ok(Some(self.pow(a, self.unit_count() - 1)?))
    }

    /// The `pi`-adic valuation, with `m` for zero.
    pub fn valuation(&self, a: &RingElement) -> Result<u32> {
        self.check(a)?;
        let p = self.field.p();
        let vp = |mut c: u64| {
            let mut v = 0;
            while c % p == 0 {
                c /= p;
                v += 1;
            }
            v
        };
        let e = self.field.e();
        let v = a
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match self.field.kind() {
                FieldKind::Eisenstein(_) => e * vp(c) + i as u32,
                _ => vp(c),
            })
            .min();
        Ok(v.unwrap_or(self.m).min(self.m))
    }

    /// Reduction `O_K/pi^m -> O_K/pi^l`, `l <= m`. Level 0 is not a ring here.
    pub fn reduce(&self, a: &RingElement, l: u32) -> Result<RingElement> {
        self.check(a)?;
        if l == 0 || l > self.m {
            return Err(level_mismatch(format!("1..={}", self.m), l));
        }
        let target = self.field.moduli(l);
        Ok(RingElement {
            level: l,
            coeffs: a.coeffs.iter().zip(&target).map(|(&c, &md)| c % md).collect(),
        })
    }

    /// Exact division by the prime element: for `a` of positive valuation,
    /// returns the unique `b` in `O_K/pi^(m-1)` with `pi * b = a`.
    pub fn div_uniformizer(&self, a: &RingElement) -> Result<RingElement> {
        if self.valuation(a)? == 0 {
            return Err(Error::Parse(format!("{a} is a unit, not divisible by pi")));
        }
        if self.m == 1 {
            return Err(level_mismatch("level >= 2", 1));
        }
        let lower = ResidueRing::with_level(&self.field, self.m - 1);
        let p = self.field.p();
        match self.field.kind() {
            FieldKind::Eisenstein(g) => {
                // x * b = a with x^e = -sum c_j x^j:
                //   b_{e-1} = -(a_0/p) / (c_0/p),  b_i = a_{i+1} + b_{e-1} c_{i+1}.
                let e = self.moduli.len();
                let top = self.top;
                let c = g.lower();
                let c0p = (c[0] / p as i64).rem_euclid(top as i64) as u64;
                let a0p = a.coeffs[0] / p;
                let last = (top - mul_mod(a0p, inv_mod(c0p, top), top)) % top;
                let mut raw = vec![0u64; e];
                raw[e - 1] = last;
                for i in 0..e - 1 {
                    let ci = (c[i + 1] as i128).rem_euclid(top as i128) as u64;
                    raw[i] = (a.coeffs[i + 1] + mul_mod(last, ci, top)) % top;
                }
                Ok(lower.canonical(raw))
            }
            _ => Ok(lower.canonical(a.coeffs.iter().map(|&c| c / p))),
        }
    }

    /// Decomposes `a = pi^k u` with `u` a unit of `O_K/pi^(m-k)`; zero gives `(m, None)`.
    pub fn val_unit_decompose(&self, a: &RingElement) -> Result<(u32, Option<RingElement>)> {
        let k = self.valuation(a)?;
        if k == self.m {
            return Ok((k, None));
        }
        let mut cur = a.clone();
        let mut ring = self.clone();
        for _ in 0..k {
            cur = ring.div_uniformizer(&cur)?;
            ring = ResidueRing::with_level(&self.field, ring.m - 1);
        }
        Ok((k, Some(cur)))
    }

    /// `pi^k * lift(u)` for `u` at level `m - k`.
    pub fn shift_up(&self, u: &RingElement, k: u32) -> Result<RingElement> {
        if u.level + k != self.m {
            return Err(level_mismatch(self.m - k.min(self.m), u.level));
        }
        let lifted = self.canonical(u.coeffs.iter().copied());
        let pik = self.pow(&self.uniformizer(), k as u64)?;
        self.mul(&lifted, &pik)
    }
}
