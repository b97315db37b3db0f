//! Points of `X_K = K x_{O_K^*} G_K^ab` as coherent towers of finite-level
//! images, orbit-closure membership, and the quasi-orbit space.

use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{level_mismatch, Error, Result};
use crate::level::{LevelGroupElement, LevelIndex, LevelModel, LevelPoint};
use crate::padic::{LocalFieldSpec, ResidueRing, RingElement};

/// `v(a)` for `a != 0`, or the zero flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Zero,
}

type UnitFn = Arc<dyn Fn(u32) -> RingElement + Send + Sync>;
type ResidueFn = Arc<dyn Fn(u32) -> u32 + Send + Sync>;

/// A unit of `O_K` known through its images in `O_K/pi^m`.
#[derive(Clone)]
pub enum UnitTower {
    /// Known to the level of the stored element and no further.
    Eager(RingElement),
    /// Any level on request; coherence is checked on each query.
    Callback(UnitFn),
}

impl fmt::Debug for UnitTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitTower::Eager(u) => write!(f, "Eager({u})"),
            UnitTower::Callback(_) => write!(f, "Callback"),
        }
    }
}

impl UnitTower {
    /// The image of a rational integer unit at every level.
    pub fn integer(field: &LocalFieldSpec, value: i64) -> Self {
        let field = field.clone();
        UnitTower::Callback(Arc::new(move |m| ResidueRing::with_level(&field, m).from_int(value)))
    }

    pub fn one(field: &LocalFieldSpec) -> Self {
        Self::integer(field, 1)
    }

    /// The image in `O_K/pi^m`, `m >= 1`.
    pub fn at(&self, field: &LocalFieldSpec, m: u32) -> Result<RingElement> {
        let u = match self {
            UnitTower::Eager(top) => {
                if m > top.level() {
                    return Err(Error::PrecisionExceeded { known: top.level(), requested: m });
                }
                ResidueRing::with_level(field, top.level()).reduce(top, m)?
            }
            UnitTower::Callback(f) => {
                let u = f(m);
                if u.level() != m {
                    return Err(Error::IncoherentTower(format!("asked for level {m}, got level {}", u.level())));
                }
                let ring = ResidueRing::with_level(field, m);
                for l in 1..m {
                    if ring.reduce(&u, l)? != f(l) {
                        return Err(Error::IncoherentTower(format!("levels {l} and {m} disagree")));
                    }
                }
                u
            }
        };
        if !ResidueRing::with_level(field, m).is_unit(&u) {
            return Err(Error::IncoherentTower(format!("{u} is not a unit at level {m}")));
        }
        Ok(u)
    }
}

/// The `Zhat` component of a Galois element, known through its residues mod `n`.
#[derive(Clone)]
pub enum GaloisResidue {
    Integer(i64),
    Callback(ResidueFn),
}

impl fmt::Debug for GaloisResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaloisResidue::Integer(v) => write!(f, "Integer({v})"),
            GaloisResidue::Callback(_) => write!(f, "Callback"),
        }
    }
}

impl GaloisResidue {
    /// The residue mod `n`, checked against every divisor of `n`.
    pub fn at(&self, n: u32) -> Result<u32> {
        match self {
            GaloisResidue::Integer(v) => Ok(v.rem_euclid(n as i64) as u32),
            GaloisResidue::Callback(f) => {
                let v = f(n);
                if v >= n {
                    return Err(Error::IncoherentTower(format!("residue {v} not reduced mod {n}")));
                }
                for d in (1..n).filter(|d| n % d == 0) {
                    if f(d) != v % d {
                        return Err(Error::IncoherentTower(format!("residues mod {d} and {n} disagree")));
                    }
                }
                Ok(v)
            }
        }
    }
}

/// A point `[a, alpha]` of `X_K`, with `a = pi^k u` and `alpha = (v, s)`.
#[derive(Debug, Clone)]
pub struct ExactPoint {
    field: LocalFieldSpec,
    valuation: Valuation,
    unit: Option<UnitTower>,
    galois_v: GaloisResidue,
    galois_unit: UnitTower,
}

/// Coordinates of a point of `X_K` at level `(n, m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum XCoords {
    /// `(k, v, u s mod pi^m)`.
    Nonzero { k: i64, g: LevelGroupElement },
    /// `[0, alpha]`; only `v mod n` survives the balancing.
    Zero { v: u32 },
}

impl ExactPoint {
    pub fn new(
        field: &LocalFieldSpec,
        valuation: Valuation,
        unit: Option<UnitTower>,
        galois_v: GaloisResidue,
        galois_unit: UnitTower,
    ) -> Result<Self> {
        match (valuation, &unit) {
            (Valuation::Zero, Some(_)) => {
                return Err(Error::IncoherentTower("the zero point has no unit component".into()))
            }
            (Valuation::Finite(_), None) => {
                return Err(Error::IncoherentTower("a nonzero point needs a unit component".into()))
            }
            _ => {}
        }
        Ok(ExactPoint { field: field.clone(), valuation, unit, galois_v, galois_unit })
    }

    /// `[1, 1]`.
    pub fn one(field: &LocalFieldSpec) -> Self {
        ExactPoint {
            field: field.clone(),
            valuation: Valuation::Finite(0),
            unit: Some(UnitTower::one(field)),
            galois_v: GaloisResidue::Integer(0),
            galois_unit: UnitTower::one(field),
        }
    }

    /// `[0, (v, 1)]`.
    pub fn zero(field: &LocalFieldSpec, v: i64) -> Self {
        ExactPoint {
            field: field.clone(),
            valuation: Valuation::Zero,
            unit: None,
            galois_v: GaloisResidue::Integer(v),
            galois_unit: UnitTower::one(field),
        }
    }

    /// `[pi^k, (v, s)]` with `s` known to the level of the given element.
    pub fn from_parts(field: &LocalFieldSpec, k: i64, v: i64, s: RingElement) -> Self {
        ExactPoint {
            field: field.clone(),
            valuation: Valuation::Finite(k),
            unit: Some(UnitTower::one(field)),
            galois_v: GaloisResidue::Integer(v),
            galois_unit: UnitTower::Eager(s),
        }
    }

    /// The lift `[pi^k, g]` of a point of `Y_{n,m}`; known to level `m - k`.
    pub fn from_level_point(model: &LevelModel, y: &LevelPoint) -> Self {
        if y.k == model.m() {
            return Self::zero(model.field(), y.g.v as i64);
        }
        let s = y.g.u.clone().expect("strata below m carry a unit");
        Self::from_parts(model.field(), y.k as i64, y.g.v as i64, s)
    }

    pub fn field(&self) -> &LocalFieldSpec {
        &self.field
    }

    pub fn valuation(&self) -> Valuation {
        self.valuation
    }

    fn unit_product(&self, l: u32) -> Result<Option<RingElement>> {
        if l == 0 {
            return Ok(None);
        }
        let s = self.galois_unit.at(&self.field, l)?;
        let u = self.unit.as_ref().expect("nonzero point").at(&self.field, l)?;
        Ok(Some(ResidueRing::with_level(&self.field, l).mul(&u, &s)?))
    }

    pub fn x_coords(&self, level: LevelIndex) -> Result<XCoords> {
        let v = self.galois_v.at(level.n)?;
        match self.valuation {
            Valuation::Zero => Ok(XCoords::Zero { v }),
            Valuation::Finite(k) => Ok(XCoords::Nonzero { k, g: LevelGroupElement { v, u: self.unit_product(level.m)? } }),
        }
    }

    /// The image in `Y_{n,m}`; fails for points of negative valuation.
    pub fn point_image(&self, model: &LevelModel) -> Result<LevelPoint> {
        let LevelIndex { n, m } = model.level();
        let v = self.galois_v.at(n)?;
        match self.valuation {
            Valuation::Finite(k) if k < 0 => Err(level_mismatch("a point of Y_K", format!("valuation {k}"))),
            Valuation::Finite(k) if (k as u64) < m as u64 => {
                let k = k as u32;
                Ok(LevelPoint { k, g: LevelGroupElement { v, u: self.unit_product(m - k)? } })
            }
            _ => Ok(LevelPoint { k: m, g: LevelGroupElement { v, u: None } }),
        }
    }
}

/// Answer of the closure oracle with the shift that realizes it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub member: bool,
    /// Some `j` with `j.x` in the level cylinder of `y`.
    pub witness: Option<i64>,
}

/// Does the `Z`-orbit of `x` meet the level-`(n, m)` cylinder of `y`?
///
/// `j.[pi^k, (v, w)] = [pi^(k+j), (v - j, w)]`. A nonzero target pins
/// `j = k_y - k_x`. The cylinder of a zero target is `{k >= m, v = v_y mod n}`
/// together with the zero points of that residue.
pub fn closure_member(x: &ExactPoint, y: &ExactPoint, level: LevelIndex) -> Result<Membership> {
    let n = level.n as i64;
    let no = Membership { member: false, witness: None };
    match (x.x_coords(level)?, y.x_coords(level)?) {
        (XCoords::Zero { v: vx }, XCoords::Zero { v: vy }) => {
            Ok(Membership { member: true, witness: Some((vx as i64 - vy as i64).rem_euclid(n)) })
        }
        (XCoords::Zero { .. }, XCoords::Nonzero { .. }) => Ok(no),
        (XCoords::Nonzero { k, g }, XCoords::Zero { v: vy }) => {
            // Least j >= m - k with v - j = v_y mod n.
            let lo = level.m as i64 - k;
            let r = (g.v as i64 - vy as i64 - lo).rem_euclid(n);
            Ok(Membership { member: true, witness: Some(lo + r) })
        }
        (XCoords::Nonzero { k: kx, g: gx }, XCoords::Nonzero { k: ky, g: gy }) => {
            let j = ky - kx;
            let v = (gx.v as i64 - j).rem_euclid(n) as u32;
            let moved = LevelGroupElement { v, u: gx.u };
            Ok(if moved == gy { Membership { member: true, witness: Some(j) } } else { no })
        }
    }
}

/// A point of the quasi-orbit space at a finite level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QuasiOrbitLabel {
    /// The orbit of `[1, g]`, `g` in `G_{n,m}`.
    UnitPoint(LevelGroupElement),
    /// The class of all zero points.
    ZeroOrbit,
}

impl fmt::Display for QuasiOrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuasiOrbitLabel::UnitPoint(g) => write!(f, "{g}"),
            QuasiOrbitLabel::ZeroOrbit => write!(f, "P_K"),
        }
    }
}

impl Serialize for QuasiOrbitLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            QuasiOrbitLabel::UnitPoint(g) => {
                let mut st = s.serialize_struct("QuasiOrbitLabel", 3)?;
                st.serialize_field("kind", "unit")?;
                st.serialize_field("v", &g.v)?;
                let digits: &[u64] = g.u.as_ref().map_or(&[], |u| u.coeffs());
                st.serialize_field("u", digits)?;
                st.end()
            }
            QuasiOrbitLabel::ZeroOrbit => {
                let mut st = s.serialize_struct("QuasiOrbitLabel", 1)?;
                st.serialize_field("kind", "zero")?;
                st.end()
            }
        }
    }
}

/// Shifts `x` to valuation 0 and reads off its Galois element.
pub fn quasi_orbit(x: &ExactPoint, level: LevelIndex) -> Result<QuasiOrbitLabel> {
    match x.x_coords(level)? {
        XCoords::Zero { .. } => Ok(QuasiOrbitLabel::ZeroOrbit),
        XCoords::Nonzero { k, g } => {
            let v = (g.v as i64 + k).rem_euclid(level.n as i64) as u32;
            Ok(QuasiOrbitLabel::UnitPoint(LevelGroupElement { v, u: g.u }))
        }
    }
}

/// A canonical point carrying the label.
pub fn representative(model: &LevelModel, label: &QuasiOrbitLabel) -> ExactPoint {
    match label {
        QuasiOrbitLabel::ZeroOrbit => ExactPoint::zero(model.field(), 0),
        QuasiOrbitLabel::UnitPoint(g) => ExactPoint::from_level_point(model, &LevelPoint { k: 0, g: g.clone() }),
    }
}

/// Closure relation among the quasi-orbit labels of one level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecializationTable {
    pub claim: &'static str,
    pub level: LevelIndex,
    pub labels: Vec<QuasiOrbitLabel>,
    /// `closure[i][j]`: label `j` lies in the orbit closure of label `i`.
    pub closure: Vec<Vec<bool>>,
    /// Distinct labels over all points of `Y_{n,m}`.
    pub label_count: usize,
    pub expected_label_count: usize,
    pub reflexive: bool,
    pub transitive: bool,
    pub units_separated: bool,
    pub zero_in_every_closure: bool,
    /// The closure of `P_K` contains no other label.
    pub zero_closed: bool,
    pub pass: bool,
}

pub const PRIM_CLAIM: &str = "Prim A_K = {ker pi_w | w in G(K^ab/K)} u {P_K}; the only open set containing P_K is the whole space";

pub fn prim_report(model: &LevelModel) -> Result<SpecializationTable> {
    let level = model.level();
    let size = model.group_order(model.m()) + 1;
    model.guard().check_carrier(size.saturating_mul(size))?;

    let mut labels: Vec<QuasiOrbitLabel> = model.group_elements(model.m()).map(QuasiOrbitLabel::UnitPoint).collect();
    labels.push(QuasiOrbitLabel::ZeroOrbit);

    // Every point of Y_{n,m}, lifted, lands on one of these labels.
    let mut seen = std::collections::BTreeSet::new();
    for y in model.points() {
        let x = ExactPoint::from_level_point(model, &y);
        let label = if y.k == 0 || y.k == model.m() {
            quasi_orbit(&x, level)?
        } else {
            // Known only to depth m - k: shift first, then the label is read at that depth.
            let l = quasi_orbit(&x, LevelIndex::new(level.n, model.m() - y.k))?;
            lift_label(model, l)
        };
        seen.insert(label);
    }
    let mut label_count = seen.len();
    if seen.iter().any(|l| !labels.contains(l)) {
        label_count = usize::MAX;
    }

    let reps: Vec<ExactPoint> = labels.iter().map(|l| representative(model, l)).collect();
    let closure = reps
        .iter()
        .map(|x| reps.iter().map(|y| Ok(closure_member(x, y, level)?.member)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;

    let t = labels.len();
    let z = t - 1;
    let reflexive = (0..t).all(|i| closure[i][i]);
    let transitive = (0..t).all(|i| (0..t).all(|j| !closure[i][j] || (0..t).all(|k| !closure[j][k] || closure[i][k])));
    let units_separated = (0..z).all(|i| (0..z).all(|j| i == j || !closure[i][j]));
    let zero_in_every_closure = (0..t).all(|i| closure[i][z]);
    let zero_closed = (0..z).all(|j| !closure[z][j]);
    let expected_label_count = t;
    Ok(SpecializationTable {
        claim: PRIM_CLAIM,
        level,
        pass: reflexive
            && transitive
            && units_separated
            && zero_in_every_closure
            && zero_closed
            && label_count == expected_label_count,
        labels,
        closure,
        label_count,
        expected_label_count,
        reflexive,
        transitive,
        units_separated,
        zero_in_every_closure,
        zero_closed,
    })
}

/// Points of stratum `k` are known only to depth `m - k`; their label is the
/// class of any lift, and the canonical lift takes unit digits as they are.
fn lift_label(model: &LevelModel, label: QuasiOrbitLabel) -> QuasiOrbitLabel {
    match label {
        QuasiOrbitLabel::UnitPoint(LevelGroupElement { v, u: Some(u) }) => {
            let lifted = u.lift(model.m());
            QuasiOrbitLabel::UnitPoint(LevelGroupElement { v, u: Some(lifted) })
        }
        QuasiOrbitLabel::UnitPoint(LevelGroupElement { v, u: None }) => {
            let one = model.ring(model.m()).map(ResidueRing::one);
            QuasiOrbitLabel::UnitPoint(LevelGroupElement { v, u: one })
        }
        zero => zero,
    }
}

impl SpecializationTable {
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let names: Vec<String> = self.labels.iter().map(ToString::to_string).collect();
        out.push_str(&format!("| closure of \\ contains | {} |\n", names.join(" | ")));
        out.push_str(&format!("|---|{}\n", "---|".repeat(names.len())));
        for (name, row) in names.iter().zip(&self.closure) {
            let cells: Vec<&str> = row.iter().map(|&b| if b { "yes" } else { "." }).collect();
            out.push_str(&format!("| {} | {} |\n", name, cells.join(" | ")));
        }
        out
    }
}
