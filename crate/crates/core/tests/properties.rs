use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use bclocal::bc::{kms_eval, galois_translate, Beta, LocallyConstantFunction};
use bclocal::induction::{
    divergence_witness, ideal_count_coeffs, splitting_data, zeta_partial, NumberFieldSpec, Splitting, WindowMeasure,
    induce_restrict_roundtrip, SUPPORTED_QUADRATIC,
};
use bclocal::ktheory::{invariant_factors, smith_normal_form, IntMatrix};
use bclocal::level::{LevelIndex, LevelMeasure, LevelModel};
use bclocal::padic::{LocalFieldSpec, ResidueRing};
use bclocal::prim::{closure_member, ExactPoint};

const FIELDS: [&str; 5] = ["Q2", "Q3", "Q5", "Q2u2:x^2+x+1", "Q3[x^2-3]"];

fn field() -> impl Strategy<Value = LocalFieldSpec> {
    prop::sample::select(FIELDS.to_vec()).prop_map(|d| d.parse().unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(f in field(), m in 1u32..4, ia in any::<u64>(), ib in any::<u64>(), ic in any::<u64>()) {
        let r = ResidueRing::new(&f, m).unwrap();
        let card = r.cardinality();
        let (a, b, c) = (r.element(ia % card), r.element(ib % card), r.element(ic % card));
        let ab = r.mul(&a, &b).unwrap();
        prop_assert_eq!(r.mul(&ab, &c).unwrap(), r.mul(&a, &r.mul(&b, &c).unwrap()).unwrap());
        prop_assert_eq!(ab.clone(), r.mul(&b, &a).unwrap());
        let lhs = r.mul(&a, &r.add(&b, &c).unwrap()).unwrap();
        let rhs = r.add(&ab, &r.mul(&a, &c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(r.add(&a, &r.neg(&a).unwrap()).unwrap(), r.zero());
        match r.inverse(&a).unwrap() {
            Some(inv) => prop_assert_eq!(r.mul(&a, &inv).unwrap(), r.one()),
            None => prop_assert!(r.valuation(&a).unwrap() > 0),
        }
    }

    #[test]
    fn act_is_a_monoid_action(f in field(), n in 1u32..5, m in 1u32..4, idx in any::<usize>(), j1 in 0u64..8, j2 in 0u64..8) {
        let y = LevelModel::new(&f, LevelIndex::new(n, m)).unwrap();
        let p = y.point(idx % y.point_count());
        prop_assert_eq!(y.act(0, &p).unwrap(), p.clone());
        let step = y.act(j1, &y.act(j2, &p).unwrap()).unwrap();
        prop_assert_eq!(step, y.act(j1 + j2, &p).unwrap());
    }

    #[test]
    fn transitions_commute_with_act(
        f in field(), n in 1u32..4, c in 1u32..3, m in 1u32..4, dm in 0u32..2, idx in any::<usize>(), j in 0u64..6,
    ) {
        let fine = LevelModel::new(&f, LevelIndex::new(n * c, m)).unwrap();
        let target = LevelIndex::new(n, m.saturating_sub(dm).max(1));
        let coarse = LevelModel::new(&f, target).unwrap();
        let p = fine.point(idx % fine.point_count());
        let lhs = fine.transition(&fine.act(j, &p).unwrap(), target).unwrap();
        let rhs = coarse.act(j, &fine.transition(&p, target).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn galois_translation_is_an_action(f in field(), n in 1u32..4, m in 1u32..3, a in any::<usize>(), b in any::<usize>()) {
        let y = LevelModel::new(&f, LevelIndex::new(n, m)).unwrap();
        let order = y.group_order(m) as usize;
        let (g, h) = (y.group_element(m, a % order), y.group_element(m, b % order));
        let nu = LevelMeasure::uniform(&y);
        let dirac = LevelMeasure::dirac(&y, &y.identity(m)).unwrap();
        for mu in [nu, dirac] {
            let two = galois_translate(&y, &galois_translate(&y, &mu, &h).unwrap(), &g).unwrap();
            let gh = y.group_op(&g, &h).unwrap();
            prop_assert_eq!(two, galois_translate(&y, &mu, &gh).unwrap());
        }
    }

    #[test]
    fn kms_eval_is_a_probability(f in field(), n in 1u32..4, m in 1u32..3, beta in 1u32..4, w in any::<usize>()) {
        let y = LevelModel::new(&f, LevelIndex::new(n, m)).unwrap();
        let w = y.point(y.stratum(0).start + w % y.stratum(0).len());
        let b = Beta::Int(beta);
        let mut total = BigRational::zero();
        for f in LocallyConstantFunction::basis(&y) {
            let v = kms_eval::<BigRational>(&y, &f, &b, &w).unwrap();
            prop_assert!(v.im.is_zero() && v.re >= BigRational::zero());
            total += v.re;
        }
        prop_assert!(total.is_one());
    }

    #[test]
    fn sparse_and_dense_snf_agree(rows in 1usize..6, cols in 1usize..6, seed in prop::collection::vec(-6i64..7, 36)) {
        let data: Vec<Vec<i64>> = (0..rows).map(|i| seed[i * 6..i * 6 + cols].to_vec()).collect();
        let a = IntMatrix::from_rows(&data);
        let snf = smith_normal_form(&a);
        let (rank, factors) = invariant_factors(&a);
        prop_assert_eq!(rank, snf.rank);
        prop_assert_eq!(factors, snf.invariant_factors.clone());
        prop_assert!(snf.u.is_unimodular() && snf.v.is_unimodular());
        prop_assert_eq!(snf.u.mul(&a).unwrap().mul(&snf.v).unwrap(), snf.d.clone());
        prop_assert!(snf.d.is_diagonal());
        for w in snf.invariant_factors.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn closure_is_transitive(k in 0i64..4, s in 0i64..3, t in 0i64..3, v in 0i64..6) {
        let f: LocalFieldSpec = "Q3".parse().unwrap();
        let level = LevelIndex::new(2, 2);
        let ring = ResidueRing::new(&f, 2).unwrap();
        let unit = |c: i64| ring.from_int(if c % 3 == 0 { 1 } else { c });
        let x = ExactPoint::from_parts(&f, 0, 0, unit(s));
        let y = ExactPoint::from_parts(&f, k, v, unit(t));
        let z = ExactPoint::zero(&f, v);
        let xy = closure_member(&x, &y, level).unwrap().member;
        let yz = closure_member(&y, &z, level).unwrap().member;
        prop_assert!(yz);
        if xy {
            prop_assert!(closure_member(&x, &z, level).unwrap().member);
        }
    }

    #[test]
    fn roundtrip_on_random_measures(
        w_extra in 1u32..4, beta in 1u32..3, entries in prop::collection::vec((0i64..3, 0usize..8, 1i64..9, 1i64..9), 0..5),
    ) {
        let y = LevelModel::new(&"Q2".parse().unwrap(), LevelIndex::new(2, 2)).unwrap();
        let window = 2 + w_extra;
        let mut nu = WindowMeasure::zero(&y, 0, window as i64, Beta::Int(beta)).unwrap();
        for (j, idx, p, q) in entries {
            nu.set(j.min((window - 2) as i64), idx % nu.fiber_size(), BigRational::new(p.into(), q.into()));
        }
        let report = induce_restrict_roundtrip(&y, &nu).unwrap();
        prop_assert!(report.pass);
    }
}

/// Ideals of `Z[i]` of norm `n` correspond to Gaussian integers of norm `n` up to the four units.
fn gaussian_ideal_count(n: i64) -> u32 {
    let r = (n as f64).sqrt() as i64 + 1;
    let mut count = 0;
    for a in -r..=r {
        for b in -r..=r {
            if a * a + b * b == n {
                count += 1;
            }
        }
    }
    count / 4
}

#[test]
fn gaussian_counts_match_brute_force() {
    let a = ideal_count_coeffs(&NumberFieldSpec::Quadratic(-1), 200).unwrap();
    for n in 1..=200 {
        assert_eq!(a.coeff(n), gaussian_ideal_count(n as i64), "a_{n}");
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn ideal_counts_are_multiplicative() {
    for d in SUPPORTED_QUADRATIC {
        let k = NumberFieldSpec::Quadratic(d);
        let a = ideal_count_coeffs(&k, 10_000).unwrap();
        assert_eq!(a.coeff(1), 1);
        for m in 1..=100u64 {
            for n in 1..=10_000 / m {
                if gcd(m, n) == 1 {
                    assert_eq!(a.coeff(m * n), a.coeff(m) * a.coeff(n), "{k}: a_{m} a_{n}");
                }
            }
        }
    }
}

/// Number of roots of the minimal polynomial of the ring of integers modulo `p`.
fn root_count(d: i64, p: i64) -> usize {
    let (b, c) = if d.rem_euclid(4) == 1 { (-1, (1 - d) / 4) } else { (0, -d) };
    (0..p).filter(|x| (x * x + b * x + c).rem_euclid(p) == 0).count()
}

#[test]
fn splitting_matches_root_counts() {
    for d in SUPPORTED_QUADRATIC {
        let k = NumberFieldSpec::Quadratic(d);
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43] {
            let data = splitting_data(&k, p).unwrap();
            let expected = match root_count(d, p as i64) {
                2 => Splitting::Split,
                0 => Splitting::Inert,
                _ => Splitting::Ramified,
            };
            assert_eq!(data.splitting, expected, "{p} in {k}");
            let f = if expected == Splitting::Inert { 2 } else { 1 };
            assert_eq!(data.f, f);
        }
    }
}

#[test]
fn tail_bounds_cover_doubled_partial_sums() {
    let fields = [NumberFieldSpec::Rationals, NumberFieldSpec::Quadratic(-1), NumberFieldSpec::Quadratic(5)];
    for k in fields {
        for beta in [1.25, 1.5, 2.0, 3.0] {
            for b in [100u64, 1_000, 10_000] {
                let z = zeta_partial(&k, beta, b).unwrap();
                let z2 = zeta_partial(&k, beta, 64 * b).unwrap();
                assert!(z2.partial - z.partial <= z.tail_bound, "{k} beta={beta} B={b}");
            }
        }
    }
    let z = zeta_partial(&NumberFieldSpec::Rationals, 2.0, 1_000_000).unwrap();
    assert!((z.partial - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-6);
}

#[test]
fn divergence_witnesses_grow_with_target() {
    for k in [NumberFieldSpec::Rationals, NumberFieldSpec::Quadratic(-1), NumberFieldSpec::Quadratic(-3)] {
        let mut last = 0;
        for target in [1.0, 2.0, 4.0, 6.0] {
            let b = divergence_witness(&k, 1.0, target).unwrap();
            assert!(b >= last);
            assert!(zeta_partial(&k, 1.0, b).unwrap().partial > target);
            last = b;
        }
    }
    let b = divergence_witness(&NumberFieldSpec::Rationals, 0.5, 50.0).unwrap();
    assert!(b <= 1024);
}

#[test]
fn smith_form_of_a_known_matrix() {
    let a = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let snf = smith_normal_form(&a);
    let expected: Vec<BigInt> = [2, 6, 12].into_iter().map(BigInt::from).collect();
    assert_eq!(snf.invariant_factors, expected);
}
