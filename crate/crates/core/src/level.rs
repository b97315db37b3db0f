//! Finite levels `Y_{n,m} = O_K/pi^m x_{units} G_{n,m}` of the Bost-Connes space.
//!
//! `G_{n,m} = Z/n x (O_K/pi^m)^*`, with `[pi] = (1, 1)` and `[s] = (0, s)` for a
//! unit `s`. A point of `Y_{n,m}` has a unique canonical form `(k, g)` with
//! `g` in `G_{n,m-k}`; the stratum `k = m` is the image of zero.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{level_mismatch, Error, Result};
use crate::guard::{sat_pow, Guardrails};
use crate::padic::{LocalFieldSpec, ResidueRing, RingElement};

/// A level `(n, m)`: valuation depth `n`, unit depth `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LevelIndex {
    pub n: u32,
    pub m: u32,
}

impl LevelIndex {
    pub fn new(n: u32, m: u32) -> Self {
        LevelIndex { n, m }
    }
}

impl fmt::Display for LevelIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.n, self.m)
    }
}

impl std::str::FromStr for LevelIndex {
    type Err = Error;

    /// Parses `n:m`.
    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse(format!("cannot parse level '{s}', expected n:m"));
        let (n, m) = s.trim().split_once(':').ok_or_else(err)?;
        let n: u32 = n.trim().parse().map_err(|_| err())?;
        let m: u32 = m.trim().parse().map_err(|_| err())?;
        if n == 0 {
            return Err(Error::Parse("level n must be at least 1".into()));
        }
        Ok(LevelIndex { n, m })
    }
}

/// An element `(v, u)` of `G_{n,l}`; `u` is absent when `l = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelGroupElement {
    pub v: u32,
    pub u: Option<RingElement>,
}

impl LevelGroupElement {
    /// The unit depth `l` of the group this element lives in.
    pub fn depth(&self) -> u32 {
        self.u.as_ref().map_or(0, RingElement::level)
    }
}

impl fmt::Display for LevelGroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.u {
            Some(u) => write!(f, "({}, {})", self.v, u),
            None => write!(f, "({})", self.v),
        }
    }
}

/// Canonical representative `(k, g)` of a point of `Y_{n,m}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelPoint {
    pub k: u32,
    pub g: LevelGroupElement,
}

impl fmt::Display for LevelPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.k, self.g)
    }
}

impl Serialize for LevelPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("LevelPoint", 3)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("v", &self.g.v)?;
        let digits: &[u64] = self.g.u.as_ref().map_or(&[], |u| u.coeffs());
        st.serialize_field("u", digits)?;
        st.end()
    }
}

/// Outcome of the freeness check for the balancing action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalancingReport {
    pub level: LevelIndex,
    /// Pairs `(a, g)` with `a != 0`.
    pub pairs: u64,
    pub unit_count: u64,
    /// Incidences `s != 1` fixing a pair.
    pub violations: u64,
    /// Orbit count on nonzero pairs by Burnside's lemma.
    pub orbits: u64,
    /// `sum_{k<m} |G_{n,m-k}|`.
    pub expected_orbits: u64,
    pub pass: bool,
}

/// Outcome of the shift conjugacy check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugacyReport {
    pub level: LevelIndex,
    pub window: u32,
    pub checked: u64,
    /// `(k, j)` pairs skipped because `k + j >= m`.
    pub saturated: u64,
    pub failures: u64,
    /// Largest `k + j` that was verified, if any.
    pub verified_up_to: Option<u32>,
    pub pass: bool,
}

/// The finite level `Y_{n,m}` with its groups `G_{n,l}`, `l <= m`.
#[derive(Debug, Clone)]
pub struct LevelModel {
    field: LocalFieldSpec,
    level: LevelIndex,
    /// `rings[l - 1]` is `O_K/pi^l`.
    rings: Vec<ResidueRing>,
    /// `units[l]` lists the units of `O_K/pi^l` in ring index order; `units[0]` is empty.
    units: Vec<Vec<RingElement>>,
    /// `unit_slot[l][ring index]` is the position in `units[l]`, or `u32::MAX`.
    unit_slot: Vec<Vec<u32>>,
    /// Index of the first point of each stratum, plus the total at the end.
    offsets: Vec<usize>,
    guard: Guardrails,
}

impl LevelModel {
    pub fn new(field: &LocalFieldSpec, level: LevelIndex) -> Result<Self> {
        Self::with_guard(field, level, &Guardrails::default())
    }

    pub fn with_guard(field: &LocalFieldSpec, level: LevelIndex, guard: &Guardrails) -> Result<Self> {
        let LevelIndex { n, m } = level;
        if n == 0 {
            return Err(Error::Parse("level n must be at least 1".into()));
        }
        guard.check("n", n as u64, guard.max_n as u64)?;
        guard.check("m", m as u64, guard.max_m as u64)?;
        guard.check("q", field.q(), guard.max_q)?;
        guard.check_carrier((n as u64).saturating_mul(sat_pow(field.q(), m)))?;

        let rings: Vec<ResidueRing> = (1..=m).map(|l| ResidueRing::with_level(field, l)).collect();
        let mut units = vec![Vec::new()];
        let mut unit_slot = vec![Vec::new()];
        for r in &rings {
            let mut slot = vec![u32::MAX; r.cardinality() as usize];
            let list: Vec<RingElement> = r.units().collect();
            for (i, u) in list.iter().enumerate() {
                slot[r.index_of(u) as usize] = i as u32;
            }
            units.push(list);
            unit_slot.push(slot);
        }
        let mut model = LevelModel {
            field: field.clone(),
            level,
            rings,
            units,
            unit_slot,
            offsets: Vec::new(),
            guard: *guard,
        };
        let mut acc = 0usize;
        for k in 0..=m {
            model.offsets.push(acc);
            acc += model.group_order(m - k) as usize;
        }
        model.offsets.push(acc);
        Ok(model)
    }

    pub fn field(&self) -> &LocalFieldSpec {
        &self.field
    }

    pub fn level(&self) -> LevelIndex {
        self.level
    }

    /// The guardrails this model was built under.
    pub fn guard(&self) -> &Guardrails {
        &self.guard
    }

    pub fn n(&self) -> u32 {
        self.level.n
    }

    pub fn m(&self) -> u32 {
        self.level.m
    }

    pub fn q(&self) -> u64 {
        self.field.q()
    }

    /// `O_K/pi^l` for `1 <= l <= m`.
    pub fn ring(&self, l: u32) -> Option<&ResidueRing> {
        if l == 0 {
            None
        } else {
            self.rings.get(l as usize - 1)
        }
    }

    /// Units of `O_K/pi^l` in index order (empty for `l = 0`).
    pub fn units(&self, l: u32) -> &[RingElement] {
        &self.units[l as usize]
    }

    fn unit_count(&self, l: u32) -> u64 {
        if l == 0 {
            1
        } else {
            self.units[l as usize].len() as u64
        }
    }

    /// `|G_{n,l}|`.
    pub fn group_order(&self, l: u32) -> u64 {
        self.level.n as u64 * self.unit_count(l)
    }

    /// `|Y_{n,m}| = n q^m`.
    pub fn point_count(&self) -> usize {
        *self.offsets.last().expect("offsets are nonempty")
    }

    fn unit_position(&self, u: &RingElement) -> Result<usize> {
        let l = u.level();
        let ring = self.ring(l).ok_or_else(|| level_mismatch(format!("<= {}", self.m()), l))?;
        let pos = self.unit_slot[l as usize][ring.index_of(u) as usize];
        if pos == u32::MAX {
            return Err(Error::Parse(format!("{u} is not a unit")));
        }
        Ok(pos as usize)
    }

    fn check_group(&self, g: &LevelGroupElement) -> Result<()> {
        if g.v >= self.level.n {
            return Err(level_mismatch(format!("v < {}", self.level.n), g.v));
        }
        if g.depth() > self.m() {
            return Err(level_mismatch(format!("depth <= {}", self.m()), g.depth()));
        }
        if let Some(u) = &g.u {
            self.unit_position(u)?;
        }
        Ok(())
    }

    /// Position of `g` in `G_{n,l}`, `l = depth(g)`: `v * |units| + unit position`.
    pub fn group_index(&self, g: &LevelGroupElement) -> Result<usize> {
        self.check_group(g)?;
        let uc = self.unit_count(g.depth()) as usize;
        let pos = match &g.u {
            Some(u) => self.unit_position(u)?,
            None => 0,
        };
        Ok(g.v as usize * uc + pos)
    }

    pub fn group_element(&self, l: u32, idx: usize) -> LevelGroupElement {
        let uc = self.unit_count(l) as usize;
        let v = (idx / uc) as u32;
        let u = (l > 0).then(|| self.units[l as usize][idx % uc].clone());
        LevelGroupElement { v, u }
    }

    /// Elements of `G_{n,l}` in index order.
    pub fn group_elements(&self, l: u32) -> impl Iterator<Item = LevelGroupElement> + '_ {
        (0..self.group_order(l) as usize).map(move |i| self.group_element(l, i))
    }

    pub fn identity(&self, l: u32) -> LevelGroupElement {
        LevelGroupElement { v: 0, u: self.ring(l).map(ResidueRing::one) }
    }

    /// The class of the prime element, `(1, 1)`, in `G_{n,l}`.
    pub fn uniformizer_class(&self, l: u32) -> LevelGroupElement {
        LevelGroupElement { v: 1 % self.level.n, u: self.ring(l).map(ResidueRing::one) }
    }

    /// The class `(0, s)` of a unit `s`.
    pub fn unit_class(&self, s: &RingElement) -> Result<LevelGroupElement> {
        self.unit_position(s)?;
        Ok(LevelGroupElement { v: 0, u: Some(s.clone()) })
    }

    pub fn group_op(&self, g: &LevelGroupElement, h: &LevelGroupElement) -> Result<LevelGroupElement> {
        self.check_group(g)?;
        self.check_group(h)?;
        if g.depth() != h.depth() {
            return Err(level_mismatch(g.depth(), h.depth()));
        }
        let v = (g.v + h.v) % self.level.n;
        let u = match (&g.u, &h.u) {
            (Some(a), Some(b)) => Some(self.ring(a.level()).expect("checked").mul(a, b)?),
            _ => None,
        };
        Ok(LevelGroupElement { v, u })
    }

    pub fn group_inverse(&self, g: &LevelGroupElement) -> Result<LevelGroupElement> {
        self.check_group(g)?;
        let v = (self.level.n - g.v) % self.level.n;
        let u = match &g.u {
            Some(a) => self.ring(a.level()).expect("checked").inverse(a)?,
            None => None,
        };
        Ok(LevelGroupElement { v, u })
    }

    /// Image of `g` in `G_{n,l}`, `l <= depth(g)`.
    pub fn project(&self, g: &LevelGroupElement, l: u32) -> Result<LevelGroupElement> {
        self.check_group(g)?;
        if l > g.depth() {
            return Err(level_mismatch(format!("<= {}", g.depth()), l));
        }
        let u = match &g.u {
            Some(a) if l > 0 => Some(self.ring(a.level()).expect("checked").reduce(a, l)?),
            _ => None,
        };
        Ok(LevelGroupElement { v: g.v, u })
    }

    /// Canonical form of the class of `(a, g)`, `a` in `O_K/pi^m`, `g` in `G_{n,m}`.
    pub fn canonicalize(&self, a: &RingElement, g: &LevelGroupElement) -> Result<LevelPoint> {
        let m = self.m();
        let ring = self.ring(m).ok_or_else(|| level_mismatch(m, a.level()))?;
        if a.level() != m {
            return Err(level_mismatch(m, a.level()));
        }
        if g.depth() != m {
            return Err(level_mismatch(m, g.depth()));
        }
        self.check_group(g)?;
        let (k, u) = ring.val_unit_decompose(a)?;
        let g = match u {
            None => LevelGroupElement { v: g.v, u: None },
            Some(u) => {
                let gu = self.rings[m as usize - 1].reduce(g.u.as_ref().expect("depth m"), m - k)?;
                let prod = self.rings[(m - k) as usize - 1].mul(&u, &gu)?;
                LevelGroupElement { v: g.v, u: Some(prod) }
            }
        };
        Ok(LevelPoint { k, g })
    }

    fn check_point(&self, y: &LevelPoint) -> Result<()> {
        if y.k > self.m() || y.g.depth() != self.m() - y.k {
            return Err(level_mismatch(
                format!("point of Y_{{{}}}", self.level),
                format!("stratum {} with depth {}", y.k, y.g.depth()),
            ));
        }
        self.check_group(&y.g)
    }

    /// `j . [a, g] = [a pi^j, [pi]^{-j} g]`.
    pub fn act(&self, j: u64, y: &LevelPoint) -> Result<LevelPoint> {
        self.check_point(y)?;
        let m = self.m();
        let k = (y.k as u64 + j).min(m as u64) as u32;
        let n = self.level.n as u64;
        let v = ((y.g.v as u64 + n - j % n) % n) as u32;
        let g = self.project(&LevelGroupElement { v, u: y.g.u.clone() }, m - k)?;
        Ok(LevelPoint { k, g })
    }

    /// The projection `Y_{n,m} -> Y_{n',m'}` for `n' | n`, `m' <= m`.
    pub fn transition(&self, y: &LevelPoint, target: LevelIndex) -> Result<LevelPoint> {
        self.check_point(y)?;
        let LevelIndex { n, m } = self.level;
        if target.n == 0 || n % target.n != 0 || target.m > m {
            return Err(Error::BadTarget(format!("cannot project {} to {}", self.level, target)));
        }
        let v = y.g.v % target.n;
        if y.k >= target.m {
            return Ok(LevelPoint { k: target.m, g: LevelGroupElement { v, u: None } });
        }
        let l = target.m - y.k;
        let u = self.project(&y.g, l)?.u;
        Ok(LevelPoint { k: y.k, g: LevelGroupElement { v, u } })
    }

    /// Left translation by `h` in `G_{n,m}`: `h . [a, g] = [a, h g]`.
    pub fn translate(&self, h: &LevelGroupElement, y: &LevelPoint) -> Result<LevelPoint> {
        self.check_point(y)?;
        if h.depth() != self.m() {
            return Err(level_mismatch(self.m(), h.depth()));
        }
        let hp = self.project(h, y.g.depth())?;
        Ok(LevelPoint { k: y.k, g: self.group_op(&hp, &y.g)? })
    }

    /// Dense index of a point in `0..n q^m`, stratum by stratum.
    pub fn point_index(&self, y: &LevelPoint) -> Result<usize> {
        self.check_point(y)?;
        Ok(self.offsets[y.k as usize] + self.group_index(&y.g)?)
    }

    pub fn point(&self, idx: usize) -> LevelPoint {
        let k = self.offsets.partition_point(|&o| o <= idx) - 1;
        let l = self.m() - k as u32;
        LevelPoint { k: k as u32, g: self.group_element(l, idx - self.offsets[k]) }
    }

    pub fn points(&self) -> impl Iterator<Item = LevelPoint> + '_ {
        (0..self.point_count()).map(|i| self.point(i))
    }

    /// Points of stratum `k`, i.e. `G_{n,m-k}` embedded in `Y_{n,m}`.
    pub fn stratum(&self, k: u32) -> std::ops::Range<usize> {
        self.offsets[k as usize]..self.offsets[k as usize + 1]
    }

    /// Stratum sizes found by canonicalizing every pair `(a, g)`.
    pub fn orbit_decompose(&self) -> Result<Vec<(u32, u64)>> {
        let m = self.m();
        let mut hit = vec![false; self.point_count()];
        if m == 0 {
            for g in self.group_elements(0) {
                hit[self.point_index(&LevelPoint { k: 0, g })?] = true;
            }
        } else {
            let ring = &self.rings[m as usize - 1];
            let gs: Vec<LevelGroupElement> = self.group_elements(m).collect();
            for a in ring.elements() {
                let (k, u) = ring.val_unit_decompose(&a)?;
                for g in &gs {
                    let y = match &u {
                        None => LevelPoint { k, g: LevelGroupElement { v: g.v, u: None } },
                        Some(u) => {
                            let l = m - k;
                            let gu = ring.reduce(g.u.as_ref().expect("depth m"), l)?;
                            let prod = self.rings[l as usize - 1].mul(u, &gu)?;
                            LevelPoint { k, g: LevelGroupElement { v: g.v, u: Some(prod) } }
                        }
                    };
                    hit[self.point_index(&y)?] = true;
                }
            }
        }
        Ok((0..=m)
            .map(|k| (k, hit[self.stratum(k)].iter().filter(|&&b| b).count() as u64))
            .collect())
    }

    /// `sum_{k=0}^m |G_{n,m-k}|`, to be compared with `n q^m`.
    pub fn stratum_dimension_sum(&self) -> u64 {
        (0..=self.m()).map(|k| self.group_order(self.m() - k)).sum()
    }

    /// Exhaustive stabilizer count for `s . (a, g) = (a s, (0, s)^{-1} g)` on `a != 0`.
    ///
    /// A unit `s` fixes `(a, g)` iff `a s = a` and `s^{-1} u_g = u_g`, so the
    /// fixed pairs of each `s` are counted factor by factor.
    pub fn balancing_free_check(&self) -> Result<BalancingReport> {
        let LevelIndex { n, m } = self.level;
        let expected_orbits: u64 = (0..m).map(|k| self.group_order(m - k)).sum();
        if m == 0 {
            return Ok(BalancingReport {
                level: self.level,
                pairs: 0,
                unit_count: 1,
                violations: 0,
                orbits: 0,
                expected_orbits,
                pass: true,
            });
        }
        let ring = &self.rings[m as usize - 1];
        let units = &self.units[m as usize];
        let one = ring.one();
        let nonzero: Vec<RingElement> = ring.elements().filter(|a| !a.is_zero()).collect();
        let pairs = nonzero.len() as u64 * self.group_order(m);
        let mut fixed_total = 0u64;
        let mut violations = 0u64;
        for s in units {
            let s_inv = ring.inverse(s)?.expect("unit");
            let mut fixed_a = 0u64;
            for a in &nonzero {
                if ring.mul(a, s)? == *a {
                    fixed_a += 1;
                }
            }
            let mut fixed_u = 0u64;
            for u in units {
                if ring.mul(&s_inv, u)? == *u {
                    fixed_u += 1;
                }
            }
            let fixed = fixed_a * fixed_u * n as u64;
            fixed_total += fixed;
            if *s != one {
                violations += fixed;
            }
        }
        let orbits = fixed_total / units.len() as u64;
        Ok(BalancingReport {
            level: self.level,
            pairs,
            unit_count: units.len() as u64,
            violations,
            orbits,
            expected_orbits,
            pass: violations == 0 && orbits == expected_orbits,
        })
    }

    /// Checks `psi(act(j, y)) = shift_j(psi(y))` for `psi(k, v, u) = (k, v + k, u)`
    /// on strata `k <= W`, shifts `j <= W`, wherever `k + j < m`.
    pub fn shift_conjugacy_check(&self, window: u32) -> Result<ConjugacyReport> {
        let LevelIndex { n, m } = self.level;
        let psi = |y: &LevelPoint| LevelPoint {
            k: y.k,
            g: LevelGroupElement { v: (y.g.v + y.k % n) % n, u: y.g.u.clone() },
        };
        let mut checked = 0u64;
        let mut saturated = 0u64;
        let mut failures = 0u64;
        let mut verified_up_to: Option<u32> = None;
        for k in 0..=window.min(m) {
            for j in 0..=window {
                if k + j >= m {
                    saturated += 1;
                    continue;
                }
                for idx in self.stratum(k) {
                    let y = self.point(idx);
                    let lhs = psi(&self.act(j as u64, &y)?);
                    let shifted = psi(&y);
                    let rhs = LevelPoint {
                        k: k + j,
                        g: self.project(&shifted.g, m - k - j)?,
                    };
                    checked += 1;
                    if lhs != rhs {
                        failures += 1;
                    }
                }
                verified_up_to = verified_up_to.max(Some(k + j));
            }
        }
        Ok(ConjugacyReport {
            level: self.level,
            window,
            checked,
            saturated,
            failures,
            verified_up_to,
            pass: failures == 0,
        })
    }
}

/// A finite measure on the stratum-0 points `G_{n,m}` with exact rational weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelMeasure {
    level: LevelIndex,
    weights: Vec<BigRational>,
    total: BigRational,
}

impl LevelMeasure {
    /// Weights indexed like `LevelModel::group_elements(m)`.
    pub fn new(model: &LevelModel, weights: Vec<BigRational>) -> Result<Self> {
        let expected = model.group_order(model.m()) as usize;
        if weights.len() != expected {
            return Err(level_mismatch(format!("{expected} weights"), weights.len()));
        }
        if let Some(w) = weights.iter().find(|w| w.is_negative()) {
            return Err(Error::Parse(format!("negative weight {w}")));
        }
        let total = weights.iter().fold(BigRational::zero(), |acc, w| acc + w);
        Ok(LevelMeasure { level: model.level(), weights, total })
    }

    /// Like `new`, but the weights must sum to `declared`.
    pub fn with_total(model: &LevelModel, weights: Vec<BigRational>, declared: &BigRational) -> Result<Self> {
        let mu = Self::new(model, weights)?;
        if &mu.total != declared {
            return Err(Error::MassNotOne(mu.total.to_string()));
        }
        Ok(mu)
    }

    pub fn uniform(model: &LevelModel) -> Self {
        let size = model.group_order(model.m()) as usize;
        let w = BigRational::new(1.into(), (size as u64).into());
        LevelMeasure { level: model.level(), weights: vec![w; size], total: BigRational::one() }
    }

    pub fn dirac(model: &LevelModel, g: &LevelGroupElement) -> Result<Self> {
        if g.depth() != model.m() {
            return Err(level_mismatch(model.m(), g.depth()));
        }
        let idx = model.group_index(g)?;
        let mut weights = vec![BigRational::zero(); model.group_order(model.m()) as usize];
        weights[idx] = BigRational::one();
        Ok(LevelMeasure { level: model.level(), weights, total: BigRational::one() })
    }

    pub fn level(&self) -> LevelIndex {
        self.level
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn total(&self) -> &BigRational {
        &self.total
    }

    /// Fails with `MassNotOne` unless the total mass is 1.
    pub fn require_probability(&self) -> Result<()> {
        if self.total.is_one() {
            Ok(())
        } else {
            Err(Error::MassNotOne(self.total.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(desc: &str, n: u32, m: u32) -> LevelModel {
        LevelModel::new(&desc.parse().unwrap(), LevelIndex::new(n, m)).unwrap()
    }

    fn ge(model: &LevelModel, v: u32, u: i64) -> LevelGroupElement {
        let ring = model.ring(model.m()).unwrap();
        LevelGroupElement { v, u: Some(ring.from_int(u)) }
    }

    #[test]
    fn group_op_examples() {
        let y = model("Q3", 2, 2);
        // 2 * 5 = 10 = 1 mod 9
        assert_eq!((2 * 5) % 9, 1);
        assert_eq!(y.group_op(&ge(&y, 1, 2), &ge(&y, 1, 5)).unwrap(), ge(&y, 0, 1));
        let g = ge(&y, 1, 7);
        assert_eq!(y.group_op(&g, &y.identity(2)).unwrap(), g);

        let y = model("Q2", 3, 1);
        assert_eq!(y.group_op(&ge(&y, 2, 1), &ge(&y, 2, 1)).unwrap(), ge(&y, 1, 1));
    }

    #[test]
    fn canonicalize_examples() {
        let y = model("Q2", 1, 1);
        let r = y.ring(1).unwrap();
        let p = y.canonicalize(&r.one(), &y.identity(1)).unwrap();
        assert_eq!(p, LevelPoint { k: 0, g: y.identity(1) });
        let z = y.canonicalize(&r.zero(), &y.identity(1)).unwrap();
        assert_eq!(z, LevelPoint { k: 1, g: LevelGroupElement { v: 0, u: None } });

        let y = model("Q3", 2, 2);
        let r = y.ring(2).unwrap();
        let p = y.canonicalize(&r.from_int(3), &ge(&y, 1, 4)).unwrap();
        let r1 = y.ring(1).unwrap();
        assert_eq!(p, LevelPoint { k: 1, g: LevelGroupElement { v: 1, u: Some(r1.one()) } });
    }

    #[test]
    fn act_and_transition_examples() {
        let y = model("Q2", 1, 1);
        let p0 = LevelPoint { k: 0, g: y.identity(1) };
        assert_eq!(y.act(0, &p0).unwrap(), p0);
        assert_eq!(y.act(1, &p0).unwrap(), LevelPoint { k: 1, g: LevelGroupElement { v: 0, u: None } });

        let y = model("Q3", 2, 2);
        let r1 = y.ring(1).unwrap();
        let p = LevelPoint { k: 0, g: ge(&y, 0, 2) };
        let q = y.act(1, &p).unwrap();
        assert_eq!(q, LevelPoint { k: 1, g: LevelGroupElement { v: 1, u: Some(r1.from_int(2)) } });

        let p = LevelPoint { k: 0, g: ge(&y, 1, 5) };
        assert_eq!(y.transition(&p, LevelIndex::new(2, 2)).unwrap(), p);
        assert_eq!(
            y.transition(&p, LevelIndex::new(2, 1)).unwrap(),
            LevelPoint { k: 0, g: LevelGroupElement { v: 1, u: Some(r1.from_int(2)) } }
        );
        let z = LevelPoint { k: 2, g: LevelGroupElement { v: 1, u: None } };
        assert_eq!(
            y.transition(&z, LevelIndex::new(2, 1)).unwrap(),
            LevelPoint { k: 1, g: LevelGroupElement { v: 1, u: None } }
        );
        assert!(matches!(y.transition(&z, LevelIndex::new(3, 1)), Err(Error::BadTarget(_))));
        assert!(matches!(y.transition(&z, LevelIndex::new(2, 3)), Err(Error::BadTarget(_))));
    }

    #[test]
    fn orbit_decompose_examples() {
        assert_eq!(model("Q2", 1, 1).orbit_decompose().unwrap(), vec![(0, 1), (1, 1)]);
        assert_eq!(model("Q3", 2, 2).orbit_decompose().unwrap(), vec![(0, 12), (1, 4), (2, 2)]);
        assert_eq!(model("Q2", 3, 2).orbit_decompose().unwrap(), vec![(0, 6), (1, 3), (2, 3)]);
    }

    #[test]
    fn balancing_examples() {
        assert!(model("Q2", 1, 1).balancing_free_check().unwrap().pass);
        let r = model("Q3", 2, 2).balancing_free_check().unwrap();
        // (9 - 1) * 12 nonzero pairs, free orbits of size 6.
        assert_eq!((r.pairs, r.orbits, r.expected_orbits), (96, 16, 16));
        assert!(r.pass);
        assert!(model("Q2", 3, 3).balancing_free_check().unwrap().pass);
    }

    #[test]
    fn conjugacy_examples() {
        let r = model("Q2", 3, 2).shift_conjugacy_check(2).unwrap();
        assert!(r.pass && r.checked > 0);
        let r = model("Q3", 2, 2).shift_conjugacy_check(2).unwrap();
        assert!(r.pass);
        assert_eq!(r.verified_up_to, Some(1));
    }

    #[test]
    fn point_indexing_round_trips() {
        let y = model("Q3[x^2-3]", 2, 3);
        assert_eq!(y.point_count(), 2 * 27);
        for i in 0..y.point_count() {
            assert_eq!(y.point_index(&y.point(i)).unwrap(), i);
        }
    }

    #[test]
    fn point_json_shape() {
        let y = model("Q3", 2, 2);
        let p = LevelPoint { k: 0, g: ge(&y, 1, 5) };
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"k":0,"v":1,"u":[5]}"#);
        assert_eq!(serde_json::to_string(&LevelIndex::new(2, 2)).unwrap(), r#"{"n":2,"m":2}"#);
    }

    #[test]
    fn guardrails_apply() {
        let f: LocalFieldSpec = "Q2".parse().unwrap();
        assert!(matches!(
            LevelModel::new(&f, LevelIndex::new(13, 1)),
            Err(Error::SizeGuardExceeded { .. })
        ));
        assert!(matches!(
            LevelModel::new(&f, LevelIndex::new(1, 7)),
            Err(Error::SizeGuardExceeded { .. })
        ));
    }

    #[test]
    fn measures() {
        let y = model("Q3", 2, 1);
        let mu = LevelMeasure::uniform(&y);
        assert!(mu.require_probability().is_ok());
        let half = BigRational::new(1.into(), 2.into());
        let w = vec![half.clone(), BigRational::zero(), BigRational::zero(), BigRational::zero()];
        let nu = LevelMeasure::new(&y, w).unwrap();
        assert!(matches!(nu.require_probability(), Err(Error::MassNotOne(_))));
        assert_eq!(nu.total(), &half);
    }
}
