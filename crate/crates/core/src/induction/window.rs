use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::bc::{Beta, Scalar};
use crate::error::{level_mismatch, Error, Result};
use crate::level::{LevelIndex, LevelMeasure, LevelModel};

/// Rational weights on `[lo, hi] x G_{n,m}`, a valuation window of the
/// level space with the level group as fiber.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowMeasure {
    level: LevelIndex,
    q: u64,
    beta: Beta,
    lo: i64,
    hi: i64,
    fiber: usize,
    units: usize,
    weights: Vec<BigRational>,
}

impl WindowMeasure {
    pub fn zero(model: &LevelModel, lo: i64, hi: i64, beta: Beta) -> Result<Self> {
        beta.validate()?;
        if !matches!(beta, Beta::Int(_)) {
            return Err(Error::InexactBeta);
        }
        if hi < lo {
            return Err(Error::Parse(format!("empty window [{lo}, {hi}]")));
        }
        let fiber = model.group_order(model.m()) as usize;
        let len = (hi - lo + 1) as u64 * fiber as u64;
        model.guard().check_carrier(len)?;
        Ok(WindowMeasure {
            level: model.level(),
            q: model.q(),
            beta,
            lo,
            hi,
            fiber,
            units: fiber / model.n() as usize,
            weights: vec![BigRational::zero(); len as usize],
        })
    }

    /// `nu` placed on the valuation-zero slice of `[0, window]`.
    pub fn from_level_measure(model: &LevelModel, nu: &LevelMeasure, window: u32, beta: Beta) -> Result<Self> {
        if nu.level() != model.level() {
            return Err(level_mismatch(model.level(), nu.level()));
        }
        let mut out = Self::zero(model, 0, window as i64, beta)?;
        for (idx, w) in nu.weights().iter().enumerate() {
            out.set(0, idx, w.clone());
        }
        Ok(out)
    }

    pub fn level(&self) -> LevelIndex {
        self.level
    }

    pub fn beta(&self) -> Beta {
        self.beta
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn fiber_size(&self) -> usize {
        self.fiber
    }

    pub fn contains(&self, j: i64) -> bool {
        (self.lo..=self.hi).contains(&j)
    }

    fn slot(&self, j: i64, idx: usize) -> usize {
        assert!(self.contains(j) && idx < self.fiber, "({j}, {idx}) outside the window");
        (j - self.lo) as usize * self.fiber + idx
    }

    pub fn get(&self, j: i64, idx: usize) -> &BigRational {
        &self.weights[self.slot(j, idx)]
    }

    pub fn set(&mut self, j: i64, idx: usize, w: BigRational) {
        let s = self.slot(j, idx);
        self.weights[s] = w;
    }

    fn add(&mut self, j: i64, idx: usize, w: &BigRational) {
        let s = self.slot(j, idx);
        self.weights[s] += w;
    }

    /// Nonzero entries `(valuation, fiber index, weight)`.
    pub fn entries(&self) -> impl Iterator<Item = (i64, usize, &BigRational)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(|(s, w)| (self.lo + (s / self.fiber) as i64, s % self.fiber, w))
    }

    pub fn total(&self) -> BigRational {
        self.weights.iter().sum()
    }

    /// Smallest and largest valuation carrying mass.
    pub fn support(&self) -> Option<(i64, i64)> {
        let mut it = self.entries().map(|(j, _, _)| j);
        let first = it.next()?;
        Some(it.fold((first, first), |(a, b), j| (a.min(j), b.max(j))))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.weights.iter().all(|w| *w >= BigRational::zero())
    }

    pub fn restrict(&self, lo: i64, hi: i64) -> WindowMeasure {
        let (lo, hi) = (lo.max(self.lo), hi.min(self.hi));
        let start = (lo - self.lo) as usize * self.fiber;
        let end = (hi - self.lo + 1) as usize * self.fiber;
        WindowMeasure { lo, hi, weights: self.weights[start..end].to_vec(), ..self.clone() }
    }

    /// Fiber index of `g . (j, h)`, which has valuation `j + g` and class `h [pi]^-g`.
    pub fn shift_index(&self, g: i64, idx: usize) -> usize {
        let n = self.level.n as i64;
        let v = (idx / self.units) as i64;
        ((v - g).rem_euclid(n)) as usize * self.units + idx % self.units
    }

    /// `q^(-beta g)` for any integer `g`.
    pub fn boltzmann(&self, g: i64) -> BigRational {
        let x = BigRational::boltzmann(self.q, &self.beta).expect("integer beta checked on construction");
        let p = x.pown(g.unsigned_abs() as u32);
        if g >= 0 {
            p
        } else {
            p.recip()
        }
    }

    /// Whether `mu(g.x) = q^(-beta g) mu(x)` for `g = 1` and all `x` with both ends in the window.
    pub fn scaling_holds(&self) -> bool {
        let x = self.boltzmann(1);
        (self.lo..self.hi).all(|j| {
            (0..self.fiber).all(|idx| *self.get(j + 1, self.shift_index(1, idx)) == &x * self.get(j, idx))
        })
    }
}

/// `sum_g q^(-beta g) g_* nu`, evaluated on `[lo, hi]`.
pub fn saturate(nu: &WindowMeasure, lo: i64, hi: i64) -> WindowMeasure {
    let mut out = WindowMeasure { lo, hi, weights: vec![BigRational::zero(); (hi - lo + 1) as usize * nu.fiber], ..nu.clone() };
    for (i, idx, w) in nu.entries() {
        for j in lo..=hi {
            let g = j - i;
            out.add(j, nu.shift_index(g, idx), &(nu.boltzmann(g) * w));
        }
    }
    out
}

/// Extends a measure on `[0, W]` to `[-W, W]` by `mu~(x) = q^(-beta g) mu(g^-1 x)`,
/// evaluating every admissible `g`. The flag reports whether all candidates agreed.
pub fn induce(mu: &WindowMeasure) -> Result<(WindowMeasure, bool)> {
    if mu.lo != 0 {
        return Err(Error::Parse(format!("expected a window starting at 0, found {}", mu.lo)));
    }
    let w = mu.hi;
    let mut out = WindowMeasure { lo: -w, hi: w, weights: vec![BigRational::zero(); (2 * w + 1) as usize * mu.fiber], ..mu.clone() };
    let mut consistent = true;
    for j in -w..=w {
        for idx in 0..mu.fiber {
            let mut value: Option<BigRational> = None;
            for g in (j - w)..=j {
                // g^-1 x = (j - g, h [pi]^g) must lie in [0, W].
                if !(0..=w).contains(&(j - g)) {
                    continue;
                }
                let cand = mu.boltzmann(g) * mu.get(j - g, mu.shift_index(-g, idx));
                match &value {
                    None => value = Some(cand),
                    Some(v) if *v != cand => consistent = false,
                    Some(_) => {}
                }
            }
            out.set(j, idx, value.unwrap_or_else(BigRational::zero));
        }
    }
    Ok((out, consistent))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundtripReport {
    pub level: LevelIndex,
    pub window: u32,
    pub beta: Beta,
    pub support: Option<(i64, i64)>,
    pub interior: (i64, i64),
    pub candidates_consistent: bool,
    pub interior_agrees: bool,
    pub saturation_agrees: bool,
    pub scaling_holds: bool,
    pub nu_mass: String,
    pub induced_mass: String,
    pub expected_mass: String,
    pub mass_agrees: bool,
    pub pass: bool,
}

/// Builds the extension of `nu` on `[0, W]`, induces it to `[-W, W]`, and
/// checks the result against restriction, saturation and scaling.
pub fn induce_restrict_roundtrip(model: &LevelModel, nu: &WindowMeasure) -> Result<RoundtripReport> {
    if nu.level != model.level() {
        return Err(level_mismatch(model.level(), nu.level));
    }
    let (lo, w) = nu.window();
    if lo != 0 {
        return Err(Error::Parse(format!("expected a window starting at 0, found {lo}")));
    }
    let m = model.m() as i64;
    if w < m {
        return Err(Error::WindowTooSmall { window: w as u32, min: m as u32 });
    }
    if !nu.is_nonnegative() {
        return Err(Error::Parse("measure has negative weights".into()));
    }
    let interior = (0, w - m);
    if let Some((_, top)) = nu.support() {
        if top > interior.1 {
            return Err(Error::SupportTouchesBoundary(top));
        }
    }

    let mu = saturate(nu, 0, w);
    let (induced, candidates_consistent) = induce(&mu)?;
    let interior_agrees = induced.restrict(interior.0, interior.1) == mu.restrict(interior.0, interior.1);
    let saturation_agrees = induced == saturate(nu, -w, w);
    let scaling_holds = induced.scaling_holds();

    let expected: BigRational = nu
        .entries()
        .map(|(i, _, wt)| wt * (-w..=w).map(|j| nu.boltzmann(j - i)).sum::<BigRational>())
        .sum();
    let induced_mass = induced.total();
    let mass_agrees = induced_mass == expected;
    Ok(RoundtripReport {
        level: model.level(),
        window: w as u32,
        beta: nu.beta,
        support: nu.support(),
        interior,
        candidates_consistent,
        interior_agrees,
        saturation_agrees,
        scaling_holds,
        nu_mass: nu.total().to_string(),
        induced_mass: induced_mass.to_string(),
        expected_mass: expected.to_string(),
        mass_agrees,
        pass: candidates_consistent && interior_agrees && saturation_agrees && scaling_holds && mass_agrees,
    })
}

/// `sum_{j=-W}^{W} q^(-beta j)`.
pub fn geometric_window_sum(q: u64, beta: u32, window: u32) -> BigRational {
    let x = BigRational::new(1.into(), num_bigint::BigInt::from(q).pow(beta));
    let w = window as i64;
    (-w..=w)
        .map(|j| if j >= 0 { x.pown(j as u32) } else { x.pown((-j) as u32).recip() })
        .fold(BigRational::zero(), |a, b| a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use crate::padic::LocalFieldSpec;

    fn model() -> LevelModel {
        LevelModel::new(&LocalFieldSpec::qp(2).unwrap(), LevelIndex::new(2, 2)).unwrap()
    }

    #[test]
    fn dirac_round_trip() {
        let model = model();
        let g = model.identity(model.m());
        let nu = LevelMeasure::dirac(&model, &g).unwrap();
        let nu = WindowMeasure::from_level_measure(&model, &nu, 6, Beta::Int(1)).unwrap();
        let report = induce_restrict_roundtrip(&model, &nu).unwrap();
        assert!(report.pass, "{report:?}");
        assert_eq!(report.induced_mass, geometric_window_sum(2, 1, 6).to_string());

        let mu = saturate(&nu, 0, 6);
        let (induced, _) = induce(&mu).unwrap();
        let idx = model.group_index(&g).unwrap();
        for j in -6..=6i64 {
            let expected = if j >= 0 {
                BigRational::new(1.into(), (1i64 << j).into())
            } else {
                BigRational::from_integer((1i64 << -j).into())
            };
            assert_eq!(*induced.get(j, nu.shift_index(j, idx)), expected);
        }
    }

    #[test]
    fn zero_measure() {
        let model = model();
        let nu = WindowMeasure::zero(&model, 0, 4, Beta::Int(2)).unwrap();
        let report = induce_restrict_roundtrip(&model, &nu).unwrap();
        assert!(report.pass);
        assert_eq!(report.induced_mass, "0");
    }

    #[test]
    fn boundary_support_rejected() {
        let model = model();
        let mut nu = WindowMeasure::zero(&model, 0, 4, Beta::Int(1)).unwrap();
        nu.set(3, 0, BigRational::one());
        assert_eq!(induce_restrict_roundtrip(&model, &nu), Err(Error::SupportTouchesBoundary(3)));
    }
}
