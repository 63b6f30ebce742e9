//! Popular and rich subsets, the iterated rich-set refinement, dyadic
//! pigeonholing of representation functions and the triple counts that feed
//! the projection inequalities.
//!
//! Thresholds:
//! * popular differences: `δ_A(x) ≥ |A|² / (11 |A−A|)`, tested as `11 δ |A−A| ≥ |A|²`;
//! * rich (difference side): `|(x − A) ∩ P| ≥ 2|A|/√11`, tested as `11 c² ≥ 4 |A|²`;
//! * popular sums: `σ_X(y) ≥ |X|² / (8 |X+X| ln m)`;
//! * rich (sum side): `|(X + x) ∩ P| ≥ 3|X|/4`, tested as `4 c ≥ 3 |X|`.
//!
//! Every logarithm of a set size is natural; see [`log_ambient`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::{Error, Result};
use crate::rep::{energy, energy_of, energy_of_counts, pair_runs, rep_fn, EnergyValue, Op, RepFn};
use crate::scaled::{dispatch, to_rational, Bits, Elem};
use crate::sets::FiniteSet;

/// Default size limit for the cubic-cost triple counts.
pub const CUBIC_BUDGET: usize = 1000;

/// Exponent used by the refinement criterion and the sum-side pigeonholing.
pub const REFINE_EXPONENT: f64 = 12.0 / 7.0;

/// The logarithm applied to set sizes everywhere: natural log.
pub fn log_ambient(m: usize) -> f64 {
    (m as f64).ln()
}

/// Lower and upper rational bounds on `ln m` from `terms` terms of the atanh series.
fn ln_bounds(m: u64, terms: usize) -> (BigRational, BigRational) {
    // ln z = 2 atanh(t), t = (z-1)/(z+1); remainder after K terms ≤ 2 t^(2K+1) / ((2K+1)(1-t²))
    fn atanh_bounds(t: &BigRational, terms: usize) -> (BigRational, BigRational) {
        let two = BigRational::from_integer(2.into());
        let t2 = t * t;
        let mut pow = t.clone();
        let mut sum = BigRational::zero();
        for k in 0..terms {
            sum += &pow / BigRational::from_integer(BigInt::from(2 * k + 1));
            pow = &pow * &t2;
        }
        let denom = BigRational::from_integer(BigInt::from(2 * terms + 1)) * (BigRational::one() - &t2);
        let rem = &two * &pow / denom;
        (&two * &sum, &two * &sum + rem)
    }
    let e = 63 - m.leading_zeros() as i64;
    let y = BigRational::new(BigInt::from(m), BigInt::one() << e);
    let ty = (&y - BigRational::one()) / (&y + BigRational::one());
    let third = BigRational::new(1.into(), 3.into());
    let (l2lo, l2hi) = atanh_bounds(&third, terms);
    let (ylo, yhi) = atanh_bounds(&ty, terms);
    let e = BigRational::from_integer(e.into());
    (&e * l2lo + ylo, &e * l2hi + yhi)
}

/// Exact decision of `ln m ≥ q`.
pub(crate) fn ln_at_least(m: u64, q: &BigRational) -> bool {
    if m <= 1 {
        return q <= &BigRational::zero();
    }
    // ln m is irrational for m ≥ 2, so the interval eventually separates
    let mut terms = 8;
    while terms <= 4096 {
        let (lo, hi) = ln_bounds(m, terms);
        if &lo >= q {
            return true;
        }
        if &hi < q {
            return false;
        }
        terms *= 2;
    }
    log_ambient(m as usize) >= num_traits::ToPrimitive::to_f64(q).unwrap_or(f64::INFINITY)
}

fn to_set<T: Elem>(vals: impl IntoIterator<Item = T>, denom: &BigInt) -> FiniteSet {
    FiniteSet::from_sorted(vals.into_iter().map(|v| to_rational(&v, denom)).collect())
}

fn popular_diffs_t<T: Elem>(a: &[T]) -> Vec<T> {
    let n = a.len() as u128;
    let (keys, counts) = pair_runs(a, a, Op::Diff, true);
    let support = keys.len() as u128;
    keys.into_iter()
        .zip(counts)
        .filter(|(_, c)| 11 * *c as u128 * support >= n * n)
        .map(|(k, _)| k)
        .collect()
}

/// `P = {x ∈ A−A : δ_A(x) ≥ |A|² / (11 |A−A|)}`.
pub fn popular_diffs(a: &FiniteSet) -> FiniteSet {
    if a.is_empty() {
        return FiniteSet::empty();
    }
    dispatch(
        &[a.as_slice()],
        |d, v| to_set(popular_diffs_t(&v[0]), d),
        |d, v| to_set(popular_diffs_t(&v[0]), d),
    )
}

/// Rows `M[i][j] = (a_i − a_j ∈ P)`.
fn diff_rows<T: Elem>(a: &[T], p: &FxHashSet<T>) -> Vec<Bits> {
    let n = a.len();
    (0..n)
        .map(|i| {
            let mut row = Bits::new(n);
            for j in 0..n {
                if p.contains(&(a[i].clone() - a[j].clone())) {
                    row.set(j);
                }
            }
            row
        })
        .collect()
}

fn is_rich_diff(count: u64, n: usize) -> bool {
    11 * (count as u128) * (count as u128) >= 4 * (n as u128) * (n as u128)
}

/// `R_A = {x ∈ A : |(x − A) ∩ P| ≥ 2|A|/√11}`.
pub fn rich_diff_elements(a: &FiniteSet, p: &FiniteSet) -> FiniteSet {
    fn kernel<T: Elem>(d: &BigInt, v: Vec<Vec<T>>) -> FiniteSet {
        let (a, p) = (&v[0], &v[1]);
        let pset: FxHashSet<T> = p.iter().cloned().collect();
        let n = a.len();
        let rich = a.iter().filter(|x| {
            let c = a.iter().filter(|y| pset.contains(&((*x).clone() - (*y).clone()))).count();
            is_rich_diff(c as u64, n)
        });
        to_set(rich.cloned(), d)
    }
    dispatch(&[a.as_slice(), p.as_slice()], kernel, kernel)
}

/// Whether `σ ≥ |X|² / (8 s ln m)`, with an exact tie-break near the boundary.
fn sum_is_popular(sigma: u64, x_len: usize, sumset: usize, m: usize) -> bool {
    let n2 = (x_len as f64).powi(2);
    let t = n2 / (8.0 * sumset as f64 * log_ambient(m));
    let s = sigma as f64;
    if (s - t).abs() > 1e-9 * t {
        return s >= t;
    }
    // σ ≥ t  ⇔  ln m ≥ |X|² / (8 s σ)
    let q = BigRational::new(
        BigInt::from(x_len) * BigInt::from(x_len),
        BigInt::from(8u64) * BigInt::from(sumset) * BigInt::from(sigma),
    );
    ln_at_least(m as u64, &q)
}

fn popular_sums_t<T: Elem>(x: &[T], ambient: usize) -> Vec<T> {
    let (keys, counts) = pair_runs(x, x, Op::Sum, true);
    let s = keys.len();
    keys.into_iter()
        .zip(counts)
        .filter(|(_, c)| sum_is_popular(*c, x.len(), s, ambient))
        .map(|(k, _)| k)
        .collect()
}

/// `P_A(X) = {y ∈ X+X : σ_X(y) ≥ |X|² / (8 |X+X| ln m)}` with `m = ambient_size`.
pub fn popular_sums(x: &FiniteSet, ambient_size: usize) -> Result<FiniteSet> {
    if ambient_size < 3 {
        return Err(Error::Domain(format!("ambient size {ambient_size} < 3")));
    }
    if x.is_empty() {
        return Ok(FiniteSet::empty());
    }
    Ok(dispatch(
        &[x.as_slice()],
        |d, v| to_set(popular_sums_t(&v[0], ambient_size), d),
        |d, v| to_set(popular_sums_t(&v[0], ambient_size), d),
    ))
}

fn is_rich_sum(count: u64, n: usize) -> bool {
    4 * count as u128 >= 3 * n as u128
}

/// `R_A(X) = {x ∈ X : |(X + x) ∩ P| ≥ 3|X|/4}`.
pub fn rich_sum_elements(x: &FiniteSet, p: &FiniteSet) -> FiniteSet {
    fn kernel<T: Elem>(d: &BigInt, v: Vec<Vec<T>>) -> FiniteSet {
        let (x, p) = (&v[0], &v[1]);
        let pset: FxHashSet<T> = p.iter().cloned().collect();
        let n = x.len();
        let rich = x.iter().filter(|a| {
            let c = x.iter().filter(|b| pset.contains(&((*a).clone() + (*b).clone()))).count();
            is_rich_sum(c as u64, n)
        });
        to_set(rich.cloned(), d)
    }
    dispatch(&[x.as_slice(), p.as_slice()], kernel, kernel)
}

/// `R_A(X)` computed from scratch with ambient size `m`.
pub fn rich_sum_step(x: &FiniteSet, ambient_size: usize) -> Result<FiniteSet> {
    let p = popular_sums(x, ambient_size)?;
    Ok(rich_sum_elements(x, &p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    EnergyCriterionMet,
    IterationGuard,
    SetTooSmall,
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StopReason::EnergyCriterionMet => "energy-criterion-met",
            StopReason::IterationGuard => "iteration-guard",
            StopReason::SetTooSmall => "set-too-small",
        })
    }
}

/// Iterates `A_0 = A`, `A_{j+1} = R_A(A_j)`.
#[derive(Clone, Debug)]
pub struct RefinementTrace {
    pub iterates: Vec<FiniteSet>,
    pub stop_reason: StopReason,
}

/// Finds the first iterate `B` with `E_{12/7}(R_A(B)) ≥ E_{12/7}(B) / ln|A|`.
///
/// At most `⌊ln|A|⌋` refinement steps are taken; an iterate of size at most
/// `|A|/2` ends the search with [`StopReason::SetTooSmall`]. In both guard
/// cases `B` is the last iterate.
pub fn refine_to_b(a: &FiniteSet) -> Result<(FiniteSet, RefinementTrace)> {
    let n = a.len();
    if n < 3 {
        return Err(Error::Domain(format!("refinement needs |A| >= 3, got {n}")));
    }
    let log_n = log_ambient(n);
    let guard = log_n.floor() as usize;
    let e127 = |z: &FiniteSet| -> Result<f64> { Ok(energy_of(z, z, Op::Diff, REFINE_EXPONENT)?.approx) };
    let mut iterates = vec![a.clone()];
    let mut cur_energy = e127(a)?;
    loop {
        let cur = iterates.last().unwrap();
        let next = rich_sum_step(cur, n)?;
        let next_energy = e127(&next)?;
        if next_energy >= cur_energy / log_n {
            let b = cur.clone();
            return Ok((
                b,
                RefinementTrace {
                    iterates,
                    stop_reason: StopReason::EnergyCriterionMet,
                },
            ));
        }
        if iterates.len() > guard {
            return Ok((
                cur.clone(),
                RefinementTrace {
                    iterates,
                    stop_reason: StopReason::IterationGuard,
                },
            ));
        }
        let too_small = 2 * next.len() <= n;
        iterates.push(next);
        cur_energy = next_energy;
        if too_small {
            let b = iterates.last().unwrap().clone();
            return Ok((
                b,
                RefinementTrace {
                    iterates,
                    stop_reason: StopReason::SetTooSmall,
                },
            ));
        }
    }
}

/// A dyadic level `Δ` with the values whose count lies in `[Δ, 2Δ)`.
#[derive(Clone, Debug)]
pub struct DyadicClass {
    pub level: u64,
    pub members: FiniteSet,
    pub weighted_mass: EnergyValue,
    /// Number of nonempty-or-empty levels `0..=⌊log₂ max count⌋`.
    pub levels: usize,
}

fn mass_greater(a: &EnergyValue, b: &EnergyValue) -> bool {
    match (&a.exact, &b.exact) {
        (Some(x), Some(y)) => x > y,
        _ => a.approx > b.approx,
    }
}

/// Level class of `f` maximizing `Σ_{x ∈ class} f(x)^k`; ties go to the smaller level.
pub fn dyadic_pigeonhole(f: &RepFn, k: f64) -> Result<DyadicClass> {
    if f.is_empty() {
        return Err(Error::Domain("dyadic pigeonholing of an empty function".into()));
    }
    let level_of = |c: u64| 63 - c.leading_zeros() as usize;
    let levels = level_of(f.max_count()) + 1;
    let mut per_level: Vec<Vec<u64>> = vec![Vec::new(); levels];
    for &c in f.counts() {
        per_level[level_of(c)].push(c);
    }
    let mut best: Option<(usize, EnergyValue)> = None;
    for (j, cs) in per_level.iter().enumerate() {
        if cs.is_empty() {
            continue;
        }
        let m = energy_of_counts(cs, k);
        if best.as_ref().is_none_or(|(_, bm)| mass_greater(&m, bm)) {
            best = Some((j, m));
        }
    }
    let (j, weighted_mass) = best.expect("nonempty function has a level");
    Ok(DyadicClass {
        level: 1 << j,
        members: f.filter_support(|c| level_of(c) == j),
        weighted_mass,
        levels,
    })
}

/// Statistics of the difference-side triple set
/// `S = {(r, a, a′) ∈ R_A × A² : r − a, r − a′, a − a′ ∈ P}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffTriples {
    pub count: u64,
    pub popular_size: usize,
    pub rich_size: usize,
    /// `min_{r ∈ R_A} #{(a, a′) : r − a, r − a′ ∈ P}`; `None` when `R_A` is empty.
    pub min_pairs_per_rich: Option<u64>,
}

fn check_budget(n: usize, budget: usize) -> Result<()> {
    if n > budget {
        Err(Error::Budget {
            what: "cubic triple count",
            needed: n as u128,
            limit: budget as u128,
        })
    } else {
        Ok(())
    }
}

fn diff_triples_t<T: Elem>(a: &[T]) -> DiffTriples {
    let p: FxHashSet<T> = popular_diffs_t(a).into_iter().collect();
    let rows = diff_rows(a, &p);
    let n = a.len();
    let mut count = 0u64;
    let mut rich_size = 0;
    let mut min_pairs: Option<u64> = None;
    for row_r in &rows {
        let c = row_r.count();
        if !is_rich_diff(c, n) {
            continue;
        }
        rich_size += 1;
        min_pairs = Some(min_pairs.map_or(c * c, |m| m.min(c * c)));
        for i in row_r.ones() {
            count += rows[i].and_count(row_r);
        }
    }
    DiffTriples {
        count,
        popular_size: p.len(),
        rich_size,
        min_pairs_per_rich: min_pairs,
    }
}

/// Full statistics behind [`triple_count_diff`].
pub fn diff_triples(a: &FiniteSet, budget: usize) -> Result<DiffTriples> {
    check_budget(a.len(), budget)?;
    if a.is_empty() {
        return Ok(DiffTriples {
            count: 0,
            popular_size: 0,
            rich_size: 0,
            min_pairs_per_rich: None,
        });
    }
    Ok(dispatch(
        &[a.as_slice()],
        |_, v| diff_triples_t(&v[0]),
        |_, v| diff_triples_t(&v[0]),
    ))
}

/// `|{(r, a₁, a₂) ∈ R_A × A² : r − a₁, r − a₂, a₁ − a₂ ∈ P}|`.
pub fn triple_count_diff(a: &FiniteSet, budget: usize) -> Result<u64> {
    Ok(diff_triples(a, budget)?.count)
}

/// Fibers of `f(r, a, a′) = (r − a′, r − a)` on the difference-side triple set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleFibers {
    pub triples: u64,
    pub image_size: u64,
    /// `Σ_y |f⁻¹(y)|²`.
    pub collisions: u128,
}

fn diff_fibers_t<T: Elem>(a: &[T]) -> TripleFibers {
    let p: FxHashSet<T> = popular_diffs_t(a).into_iter().collect();
    let rows = diff_rows(a, &p);
    let n = a.len();
    let mut fibers: FxHashMap<(T, T), u64> = FxHashMap::default();
    let mut triples = 0;
    for (r, row_r) in rows.iter().enumerate() {
        if !is_rich_diff(row_r.count(), n) {
            continue;
        }
        for i in row_r.ones() {
            for j in row_r.ones() {
                if rows[i].get(j) {
                    triples += 1;
                    let key = (a[r].clone() - a[j].clone(), a[r].clone() - a[i].clone());
                    *fibers.entry(key).or_insert(0) += 1;
                }
            }
        }
    }
    TripleFibers {
        triples,
        image_size: fibers.len() as u64,
        collisions: fibers.values().map(|&c| c as u128 * c as u128).sum(),
    }
}

/// Enumerates the difference-side triples and the fibers of `f` over them.
pub fn diff_triple_fibers(a: &FiniteSet, budget: usize) -> Result<TripleFibers> {
    check_budget(a.len(), budget)?;
    if a.is_empty() {
        return Ok(TripleFibers {
            triples: 0,
            image_size: 0,
            collisions: 0,
        });
    }
    Ok(dispatch(
        &[a.as_slice()],
        |_, v| diff_fibers_t(&v[0]),
        |_, v| diff_fibers_t(&v[0]),
    ))
}

/// The sum-side triple set
/// `X = {(r₁, r₂, b) ∈ R_A(B)² × B : r₁ + b, r₂ + b ∈ P_A(B), r₁ − r₂ ∈ P_Δ}`
/// and the data it was built from.
#[derive(Clone, Debug)]
pub struct SumTriples {
    pub count: u64,
    pub level: u64,
    pub level_members: FiniteSet,
    pub popular_sums: FiniteSet,
    pub rich: FiniteSet,
    /// `#{(r₁, r₂) ∈ R_A(B)² : r₁ − r₂ ∈ P_Δ}`.
    pub level_pairs: u64,
}

impl SumTriples {
    pub fn level_size(&self) -> usize {
        self.level_members.len()
    }
}

/// `|X|` with `(Δ, P_Δ)` from pigeonholing `δ_{R_A(B)}` at exponent 12/7.
pub fn triple_count_sum(b: &FiniteSet, ambient_size: usize, budget: usize) -> Result<SumTriples> {
    check_budget(b.len(), budget)?;
    if b.is_empty() {
        return Err(Error::Domain("sum-side triples of an empty set".into()));
    }
    let popular = popular_sums(b, ambient_size)?;
    let rich = rich_sum_elements(b, &popular);
    let delta_r = rep_fn(&rich, &rich, Op::Diff)?;
    let class = dyadic_pigeonhole(&delta_r, REFINE_EXPONENT)?;
    fn kernel<T: Elem>(v: Vec<Vec<T>>) -> (u64, u64) {
        let (b, p, r, pd) = (&v[0], &v[1], &v[2], &v[3]);
        let pset: FxHashSet<T> = p.iter().cloned().collect();
        let pdset: FxHashSet<T> = pd.iter().cloned().collect();
        let rows: Vec<Bits> = r
            .iter()
            .map(|x| {
                let mut row = Bits::new(b.len());
                for (j, y) in b.iter().enumerate() {
                    if pset.contains(&(x.clone() + y.clone())) {
                        row.set(j);
                    }
                }
                row
            })
            .collect();
        let mut count = 0;
        let mut pairs = 0;
        for (i, x) in r.iter().enumerate() {
            for (j, y) in r.iter().enumerate() {
                if pdset.contains(&(x.clone() - y.clone())) {
                    pairs += 1;
                    count += rows[i].and_count(&rows[j]);
                }
            }
        }
        (count, pairs)
    }
    let groups = [b.as_slice(), popular.as_slice(), rich.as_slice(), class.members.as_slice()];
    let (count, level_pairs) = dispatch(&groups, |_, v| kernel(v), |_, v| kernel(v));
    Ok(SumTriples {
        count,
        level: class.level,
        level_members: class.members,
        popular_sums: popular,
        rich,
        level_pairs,
    })
}

/// `E_{12/7}` of a set's difference function.
pub fn e127(z: &FiniteSet) -> EnergyValue {
    energy(&rep_fn(z, z, Op::Diff).expect("differences are always defined"), REFINE_EXPONENT)
}

/// Number of `(a₁, a₂) ∈ A²` with `a₁ − a₂ ∈ P`, i.e. `Σ_{x ∈ P} δ_A(x)`.
pub fn popular_mass(a: &FiniteSet, p: &FiniteSet) -> u64 {
    let d = rep_fn(a, a, Op::Diff).expect("differences are always defined");
    p.iter().map(|x| d.get(x)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::FamilyKind;
    use crate::rational::Rational;

    fn ints(v: &[i64]) -> FiniteSet {
        FiniteSet::from_integers(v.iter().copied())
    }

    #[test]
    fn popular_diff_examples() {
        assert_eq!(popular_diffs(&ints(&[1, 2, 3])), ints(&[-2, -1, 0, 1, 2]));
        assert_eq!(popular_diffs(&ints(&[4])), ints(&[0]));
        let gp = FamilyKind::gp(1, 2).generate(8).unwrap();
        assert!(popular_diffs(&gp).contains(&Rational::zero()));
    }

    #[test]
    fn rich_diff_examples() {
        let a = ints(&[1, 2, 3]);
        let p = popular_diffs(&a);
        assert_eq!(rich_diff_elements(&a, &p), a);
        let s = ints(&[9]);
        assert_eq!(rich_diff_elements(&s, &popular_diffs(&s)), s);
    }

    #[test]
    fn popular_sum_examples() {
        let x = ints(&[1, 2, 3]);
        assert_eq!(popular_sums(&x, 3).unwrap(), ints(&[2, 3, 4, 5, 6]));
        assert_eq!(popular_sums(&ints(&[5]), 10).unwrap(), ints(&[10]));
        assert!(matches!(popular_sums(&x, 2), Err(Error::Domain(_))));
        assert_eq!(rich_sum_elements(&x, &popular_sums(&x, 3).unwrap()), x);
        assert_eq!(rich_sum_elements(&ints(&[5]), &ints(&[10])), ints(&[5]));
    }

    #[test]
    fn ln_decisions_are_exact() {
        // ln 3 = 1.0986..., ln 1000 = 6.9077...
        assert!(ln_at_least(3, &BigRational::new(1098.into(), 1000.into())));
        assert!(!ln_at_least(3, &BigRational::new(1099.into(), 1000.into())));
        assert!(ln_at_least(1000, &BigRational::new(69077.into(), 10000.into())));
        assert!(!ln_at_least(1000, &BigRational::new(69078.into(), 10000.into())));
        assert!(ln_at_least(2, &BigRational::new(693147180559945i64.into(), 1000000000000000i64.into())));
        assert!(!ln_at_least(2, &BigRational::new(693147180559946i64.into(), 1000000000000000i64.into())));
    }

    #[test]
    fn refinement_examples() {
        let a = ints(&[1, 2, 3]);
        let (b, trace) = refine_to_b(&a).unwrap();
        assert_eq!(b, a);
        assert_eq!(trace.stop_reason, StopReason::EnergyCriterionMet);
        assert_eq!(trace.iterates.len(), 1);
        assert!(matches!(refine_to_b(&ints(&[1, 2])), Err(Error::Domain(_))));
        for n in [20usize, 64, 150] {
            let a = FamilyKind::random(crate::family::RangeSpec::Quadratic(1), 3).generate(n).unwrap();
            let (b, trace) = refine_to_b(&a).unwrap();
            assert!(trace.iterates.len() <= log_ambient(n).floor() as usize + 1);
            for w in trace.iterates.windows(2) {
                assert!(w[1].is_subset(&w[0]));
            }
            if trace.stop_reason == StopReason::EnergyCriterionMet {
                assert!(2 * b.len() >= n);
            }
        }
    }

    #[test]
    fn pigeonhole_examples() {
        let a = ints(&[1, 2, 3]);
        let d = rep_fn(&a, &a, Op::Diff).unwrap();
        let c = dyadic_pigeonhole(&d, 3.0).unwrap();
        assert_eq!(c.level, 2);
        assert_eq!(c.members, ints(&[-1, 0, 1]));
        assert_eq!(c.weighted_mass.exact_u128(), Some(43));
        let s = ints(&[0]);
        let c = dyadic_pigeonhole(&rep_fn(&s, &s, Op::Diff).unwrap(), 2.0).unwrap();
        assert_eq!((c.level, c.members.clone()), (1, ints(&[0])));
    }

    #[test]
    fn triple_count_examples() {
        assert_eq!(triple_count_diff(&ints(&[1, 2, 3]), CUBIC_BUDGET).unwrap(), 27);
        assert_eq!(triple_count_diff(&ints(&[7]), CUBIC_BUDGET).unwrap(), 1);
        let big = FamilyKind::ap(1, 1).generate(20).unwrap();
        assert!(matches!(triple_count_diff(&big, 10), Err(Error::Budget { .. })));

        let t = triple_count_sum(&ints(&[1, 2, 3]), 3, CUBIC_BUDGET).unwrap();
        assert!(2 * t.count >= t.level * t.level_size() as u64 * 3);
        assert!(t.count <= 27);
        let f = diff_triple_fibers(&ints(&[1, 2, 3]), CUBIC_BUDGET).unwrap();
        assert_eq!(f.triples, 27);
        assert!((f.triples as u128).pow(2) <= f.image_size as u128 * f.collisions);
        let one = triple_count_sum(&ints(&[4]), 10, CUBIC_BUDGET).unwrap();
        assert_eq!((one.count, one.level), (1, 1));
    }
}
