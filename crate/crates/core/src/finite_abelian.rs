//! Invariant-factor decomposition of small finite abelian groups given by an
//! explicit multiplication on indices `0..order`.

use std::collections::HashSet;

/// `d_1 | d_2 | ... | d_r` together with generators realizing them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianDecomposition {
    pub invariant_factors: Vec<u64>,
    pub generators: Vec<usize>,
}

fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

struct Group<'a, F: Fn(usize, usize) -> usize> {
    order: u64,
    identity: usize,
    mul: &'a F,
}

impl<F: Fn(usize, usize) -> usize> Group<'_, F> {
    fn pow(&self, g: usize, mut e: u64) -> usize {
        let mut acc = self.identity;
        let mut base = g;
        while e > 0 {
            if e & 1 == 1 {
                acc = (self.mul)(acc, base);
            }
            base = (self.mul)(base, base);
            e >>= 1;
        }
        acc
    }

    fn element_order(&self, g: usize, primes: &[(u64, u32)]) -> u64 {
        let mut d = self.order;
        for &(l, _) in primes {
            while d % l == 0 && self.pow(g, d / l) == self.identity {
                d /= l;
            }
        }
        d
    }
}

/// Decomposes the abelian group on `0..order` with the given product.
///
/// Works prime by prime: inside each Sylow subgroup a coset of maximal order
/// modulo the span so far is chosen and replaced by a representative of the
/// same order, which splits off a cyclic direct summand. Primary factors are
/// then recombined into invariant factors.
pub fn decompose<F>(order: usize, identity: usize, mul: F) -> AbelianDecomposition
where
    F: Fn(usize, usize) -> usize,
{
    let group = Group { order: order as u64, identity, mul: &mul };
    let primes = prime_factors(order as u64);
    let orders: Vec<u64> = (0..order).map(|g| group.element_order(g, &primes)).collect();

    // primary[i] = list of (prime power, generator), sorted descending.
    let mut primary: Vec<Vec<(u64, usize)>> = Vec::new();
    for &(l, _) in &primes {
        let sylow: Vec<usize> = (0..order)
            .filter(|&g| {
                let mut o = orders[g];
                while o % l == 0 {
                    o /= l;
                }
                o == 1
            })
            .collect();
        let mut span: HashSet<usize> = HashSet::from([identity]);
        let mut span_list = vec![identity];
        let mut factors = Vec::new();
        while span_list.len() < sylow.len() {
            // Order of g modulo the current span.
            let rel_order = |g: usize| {
                let mut o = 1u64;
                let mut h = g;
                while !span.contains(&h) {
                    h = group.pow(h, l);
                    o *= l;
                }
                o
            };
            let (best, best_order) = sylow
                .iter()
                .map(|&g| (g, rel_order(g)))
                .max_by_key(|&(g, o)| (o, std::cmp::Reverse(g)))
                .expect("sylow subgroup is nonempty");
            let rep = span_list
                .iter()
                .map(|&h| mul(best, h))
                .find(|&g| orders[g] == best_order)
                .expect("a coset of maximal order contains an element of that order");
            let mut next = Vec::with_capacity(span_list.len() * best_order as usize);
            let mut power = identity;
            for _ in 0..best_order {
                for &h in &span_list {
                    next.push(mul(h, power));
                }
                power = mul(power, rep);
            }
            span = next.iter().copied().collect();
            span_list = next;
            factors.push((best_order, rep));
        }
        factors.sort_by(|a, b| b.0.cmp(&a.0));
        primary.push(factors);
    }

    let rank = primary.iter().map(Vec::len).max().unwrap_or(0);
    let mut invariant_factors = Vec::with_capacity(rank);
    let mut generators = Vec::with_capacity(rank);
    for i in 0..rank {
        let mut d = 1u64;
        let mut g = identity;
        for factors in &primary {
            if let Some(&(pp, gen)) = factors.get(i) {
                d *= pp;
                g = mul(g, gen);
            }
        }
        invariant_factors.push(d);
        generators.push(g);
    }
    invariant_factors.reverse();
    generators.reverse();
    AbelianDecomposition { invariant_factors, generators }
}
