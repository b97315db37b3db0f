use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::ring::{ResidueRing, RingElement};
use crate::error::Result;
use crate::finite_abelian::decompose;
use crate::guard::Guardrails;

/// Structure of `(O_K/pi^m)^*`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitGroupInfo {
    pub order: u64,
    pub invariant_factors: Vec<u64>,
    pub generators: Vec<RingElement>,
}

/// Unit group structure with the default guardrails.
pub fn unit_group(ring: &ResidueRing) -> Result<UnitGroupInfo> {
    unit_group_with(ring, &Guardrails::default())
}

/// Brute-force unit group structure: all element orders, cyclic factors peeled
/// off greedily, generators verified by enumerating the subgroup they span.
pub fn unit_group_with(ring: &ResidueRing, guard: &Guardrails) -> Result<UnitGroupInfo> {
    guard.check_carrier(ring.cardinality())?;
    let units: Vec<RingElement> = ring.units().collect();
    let index: HashMap<&RingElement, usize> = units.iter().enumerate().map(|(i, u)| (u, i)).collect();
    let identity = index[&ring.one()];
    let mul = |a: usize, b: usize| {
        let prod = ring.mul(&units[a], &units[b]).expect("same ring");
        index[&prod]
    };
    let dec = decompose(units.len(), identity, mul);

    // Every tuple of exponents gives a distinct unit.
    let mut seen = HashSet::with_capacity(units.len());
    let mut span = vec![identity];
    for (&g, &d) in dec.generators.iter().zip(&dec.invariant_factors) {
        let mut next = Vec::with_capacity(span.len() * d as usize);
        let mut power = identity;
        for _ in 0..d {
            next.extend(span.iter().map(|&h| mul(h, power)));
            power = mul(power, g);
        }
        assert_eq!(power, identity, "generator order divides its invariant factor");
        span = next;
    }
    seen.extend(span.iter().copied());
    assert_eq!(seen.len(), units.len(), "generators span the unit group freely");

    Ok(UnitGroupInfo {
        order: units.len() as u64,
        invariant_factors: dec.invariant_factors,
        generators: dec.generators.into_iter().map(|g| units[g].clone()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn info(desc: &str, m: u32) -> UnitGroupInfo {
        unit_group(&ResidueRing::new(&desc.parse().unwrap(), m).unwrap()).unwrap()
    }

    /// Multiplicative order by repeated multiplication in `Z/modulus`.
    fn brute_order(a: u64, modulus: u64) -> u64 {
        let mut x = a % modulus;
        let mut k = 1;
        while x != 1 % modulus {
            x = x * a % modulus;
            k += 1;
        }
        k
    }

    #[test]
    fn examples() {
        // (Z/9)^* has an element of order 6, so it is cyclic.
        assert_eq!((1..9).filter(|a| a % 3 != 0).map(|a| brute_order(a, 9)).max(), Some(6));
        let u = info("Q3", 2);
        assert_eq!((u.order, u.invariant_factors), (6, vec![6]));

        let u = info("Q2", 1);
        assert_eq!((u.order, u.invariant_factors.clone()), (1, vec![]));
        assert!(u.generators.is_empty());

        // Every unit of Z/8 squares to 1: exponent 2, order 4.
        assert!((1..8).step_by(2).all(|a| brute_order(a, 8) <= 2));
        let u = info("Q2", 3);
        assert_eq!((u.order, u.invariant_factors), (4, vec![2, 2]));
    }

    #[test]
    fn order_formula_and_divisibility() {
        for (d, q) in [("Q2", 2u64), ("Q3", 3), ("Q5", 5), ("Q2u2:x^2+x+1", 4), ("Q3[x^2-3]", 3)] {
            for m in 1..=4 {
                let u = info(d, m);
                assert_eq!(u.order, q.pow(m - 1) * (q - 1));
                assert_eq!(u.invariant_factors.iter().product::<u64>(), u.order);
                for w in u.invariant_factors.windows(2) {
                    assert_eq!(w[1] % w[0], 0);
                }
            }
        }
    }

    #[test]
    fn guard() {
        let ring = ResidueRing::new(&"Q5".parse().unwrap(), 4).unwrap();
        let tight = Guardrails { max_carrier: 100, ..Guardrails::default() };
        assert!(matches!(unit_group_with(&ring, &tight), Err(Error::SizeGuardExceeded { .. })));
    }
}
