//! Frozen values from direct enumeration, and brute-force equivalence.

use std::collections::BTreeMap;

use proptest::prelude::*;
use sumlab::constructions::{dyadic_pigeonhole, popular_diffs, triple_count_diff, CUBIC_BUDGET};
use sumlab::{energy_of, pair_set, pair_set_size, projection_count, rep_fn, FiniteSet, Op, Rational};

fn set(v: &[(i64, i64)]) -> FiniteSet {
    v.iter().map(|&(p, q)| Rational::new(p, q)).collect()
}

fn ints(v: &[i64]) -> FiniteSet {
    FiniteSet::from_integers(v.iter().copied())
}

fn apply(op: Op, x: &Rational, y: &Rational) -> Rational {
    match op {
        Op::Sum => x + y,
        Op::Diff => x - y,
        Op::Prod => x * y,
        Op::Ratio => x * &y.recip(),
    }
}

fn brute_counts(a: &FiniteSet, b: &FiniteSet, op: Op) -> BTreeMap<Rational, u64> {
    let mut m = BTreeMap::new();
    for x in a {
        for y in b {
            *m.entry(apply(op, x, y)).or_insert(0) += 1;
        }
    }
    m
}

struct Frozen {
    a: FiniteSet,
    sums: usize,
    diffs: usize,
    prods: usize,
    ratios: usize,
    e2: u64,
    e3: u64,
    mult_energy: u64,
    e_three_halves: f64,
    proj_diffs_a: u64,
}

fn frozen() -> Vec<Frozen> {
    vec![
        Frozen {
            a: ints(&[1, 2, 3, 5, 8, 13]),
            sums: 17,
            diffs: 23,
            prods: 21,
            ratios: 31,
            e2: 82,
            e3: 294,
            mult_energy: 66,
            e_three_halves: 51.3243554546686,
            proj_diffs_a: 100,
        },
        Frozen {
            a: set(&[(1, 2), (1, 1), (3, 2), (7, 3), (-2, 1)]),
            sums: 14,
            diffs: 19,
            prods: 15,
            ratios: 21,
            e2: 49,
            e3: 157,
            mult_energy: 45,
            e_three_halves: 32.83719413699133,
            proj_diffs_a: 32,
        },
        Frozen {
            a: ints(&[1, 3, 9, 27, 81]),
            sums: 15,
            diffs: 21,
            prods: 9,
            ratios: 9,
            e2: 45,
            e3: 145,
            mult_energy: 85,
            e_three_halves: 31.18033988749895,
            proj_diffs_a: 0,
        },
        Frozen {
            a: FiniteSet::from_integers((1..=10).map(|j| j * j)),
            sums: 52,
            diffs: 81,
            prods: 42,
            ratios: 63,
            e2: 210,
            e3: 1150,
            mult_energy: 278,
            e_three_halves: 129.90704784914567,
            proj_diffs_a: 314,
        },
    ]
}

#[test]
fn frozen_set_sizes_and_energies() {
    for f in frozen() {
        let a = &f.a;
        assert_eq!(pair_set_size(a, a, Op::Sum).unwrap(), f.sums, "{a:?}");
        assert_eq!(pair_set_size(a, a, Op::Diff).unwrap(), f.diffs);
        assert_eq!(pair_set_size(a, a, Op::Prod).unwrap(), f.prods);
        assert_eq!(pair_set_size(a, a, Op::Ratio).unwrap(), f.ratios);
        assert_eq!(energy_of(a, a, Op::Diff, 2.0).unwrap().exact_u128(), Some(f.e2 as u128));
        // additive energy of sums and differences agree for a single set
        assert_eq!(energy_of(a, a, Op::Sum, 2.0).unwrap().exact_u128(), Some(f.e2 as u128));
        assert_eq!(energy_of(a, a, Op::Diff, 3.0).unwrap().exact_u128(), Some(f.e3 as u128));
        assert_eq!(energy_of(a, a, Op::Ratio, 2.0).unwrap().exact_u128(), Some(f.mult_energy as u128));
        let e = energy_of(a, a, Op::Diff, 1.5).unwrap().value();
        assert!((e - f.e_three_halves).abs() <= 1e-9 * f.e_three_halves);
        let d = pair_set(a, a, Op::Diff).unwrap();
        assert_eq!(projection_count(&d, a), f.proj_diffs_a);
    }
}

#[test]
fn frozen_small_constructions() {
    // every difference of {1,2,3} is popular and every element rich
    let a = ints(&[1, 2, 3]);
    assert_eq!(popular_diffs(&a), ints(&[-2, -1, 0, 1, 2]));
    assert_eq!(triple_count_diff(&a, CUBIC_BUDGET).unwrap(), 27);
    // {1..4}: differences with counts 1,2,3,4,3,2,1; squares weigh the level [2,4) most
    let f = rep_fn(&ints(&[1, 2, 3, 4]), &ints(&[1, 2, 3, 4]), Op::Diff).unwrap();
    let class = dyadic_pigeonhole(&f, 2.0).unwrap();
    assert_eq!(class.members, ints(&[-2, -1, 1, 2]));
}

fn small_set() -> impl Strategy<Value = FiniteSet> {
    prop::collection::vec((-40i64..=40, 1i64..=5), 1..=14)
        .prop_map(|v| v.into_iter().map(|(p, q)| Rational::new(p, q)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn rep_functions_match_enumeration(a in small_set(), b in small_set(), big in any::<bool>()) {
        let (a, b) = if big {
            let s = Rational::from_integer(num_bigint::BigInt::from(3) << 70);
            (a.iter().map(|x| x * &s).collect::<FiniteSet>(), b.iter().map(|x| x * &s).collect())
        } else {
            (a, b)
        };
        for op in [Op::Sum, Op::Diff, Op::Prod, Op::Ratio] {
            if op == Op::Ratio && b.contains_zero() {
                prop_assert!(rep_fn(&a, &b, op).is_err());
                continue;
            }
            let brute = brute_counts(&a, &b, op);
            let f = rep_fn(&a, &b, op).unwrap();
            let fast: BTreeMap<Rational, u64> = f.iter().collect();
            prop_assert_eq!(&fast, &brute);
            prop_assert_eq!(pair_set_size(&a, &b, op).unwrap(), brute.len());
            let keys: FiniteSet = brute.keys().cloned().collect();
            prop_assert_eq!(pair_set(&a, &b, op).unwrap(), keys);
            for k in [2u32, 3] {
                let want: u128 = brute.values().map(|&c| (c as u128).pow(k)).sum();
                prop_assert_eq!(energy_of(&a, &b, op, k as f64).unwrap().exact_u128(), Some(want));
            }
            let want: f64 = brute.values().map(|&c| (c as f64).powf(12.0 / 7.0)).sum();
            let got = energy_of(&a, &b, op, 12.0 / 7.0).unwrap().value();
            prop_assert!((got - want).abs() <= 1e-9 * want);
        }
    }

    #[test]
    fn projection_matches_enumeration(p in small_set(), q in small_set(), big in any::<bool>()) {
        let (p, q) = if big {
            let s = Rational::from_integer(num_bigint::BigInt::from(5) << 64);
            (p.iter().map(|x| x * &s).collect::<FiniteSet>(), q.iter().map(|x| x * &s).collect())
        } else {
            (p, q)
        };
        let want = q
            .iter()
            .map(|y| p.iter().filter(|x| p.contains(&(*x - y))).count() as u64)
            .sum::<u64>();
        prop_assert_eq!(projection_count(&p, &q), want);
        // symmetric inputs take the halved path
        let sym: FiniteSet = p.iter().flat_map(|x| [x.clone(), -x]).collect();
        let symq: FiniteSet = q.iter().flat_map(|x| [x.clone(), -x]).collect();
        let want = symq
            .iter()
            .map(|y| sym.iter().filter(|x| sym.contains(&(*x - y))).count() as u64)
            .sum::<u64>();
        prop_assert_eq!(projection_count(&sym, &symq), want);
    }

    #[test]
    fn huge_elements_match_small(a in small_set()) {
        let big: FiniteSet = small_set_scaled(&a);
        for op in [Op::Sum, Op::Diff] {
            prop_assert_eq!(pair_set_size(&a, &a, op).unwrap(), pair_set_size(&big, &big, op).unwrap());
            prop_assert_eq!(
                energy_of(&a, &a, op, 3.0).unwrap().exact_u128(),
                energy_of(&big, &big, op, 3.0).unwrap().exact_u128()
            );
        }
        prop_assert_eq!(triple_count_diff(&a, CUBIC_BUDGET).unwrap(), triple_count_diff(&big, CUBIC_BUDGET).unwrap());
    }
}

fn small_set_scaled(a: &FiniteSet) -> FiniteSet {
    let s = Rational::from_integer(num_bigint::BigInt::from(7) << 90);
    a.iter().map(|x| x * &s).collect()
}
