//! Pair sets, representation functions, moment energies and projection counts.
//!
//! All counting happens on common-denominator integer numerators (see
//! [`crate::scaled`]). Counts are `u64`: a count never exceeds `|A||B|`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::scaled::{self, dispatch, fp_add, fp_sub, to_rational, Bits, Elem, FP_MOD};
use crate::sets::FiniteSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Sum,
    Diff,
    Prod,
    Ratio,
}

impl Op {
    pub fn symbol(&self) -> &'static str {
        match self {
            Op::Sum => "+",
            Op::Diff => "-",
            Op::Prod => "*",
            Op::Ratio => "/",
        }
    }

    fn check_domain(&self, b: &FiniteSet) -> Result<()> {
        if *self == Op::Ratio && b.contains_zero() {
            Err(Error::DivisionDomain)
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Op::Sum => "sum",
            Op::Diff => "diff",
            Op::Prod => "prod",
            Op::Ratio => "ratio",
        })
    }
}

impl FromStr for Op {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "sum" | "+" => Ok(Op::Sum),
            "diff" | "-" => Ok(Op::Diff),
            "prod" | "*" => Ok(Op::Prod),
            "ratio" | "/" => Ok(Op::Ratio),
            other => Err(Error::InvalidParam(format!("unknown op `{other}`"))),
        }
    }
}

#[derive(Clone, Debug)]
enum RepKeys {
    /// Value `nums[i] / denom`.
    Scaled { denom: BigInt, nums: Vec<i128> },
    ScaledBig { denom: BigInt, nums: Vec<BigInt> },
    Exact(Vec<Rational>),
}

/// A representation function: value ↦ number of ordered pairs realizing it.
///
/// Entries are kept in increasing order of value; only positive counts are stored.
#[derive(Clone, Debug)]
pub struct RepFn {
    op: Op,
    left_size: usize,
    right_size: usize,
    keys: RepKeys,
    counts: Vec<u64>,
}

impl RepFn {
    pub fn op(&self) -> Op {
        self.op
    }

    pub fn left_size(&self) -> usize {
        self.left_size
    }

    pub fn right_size(&self) -> usize {
        self.right_size
    }

    /// Support size, i.e. `|A op B|`.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total_mass(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }

    pub fn max_count(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    pub fn key(&self, i: usize) -> Rational {
        match &self.keys {
            RepKeys::Scaled { denom, nums } => to_rational(&nums[i], denom),
            RepKeys::ScaledBig { denom, nums } => to_rational(&nums[i], denom),
            RepKeys::Exact(v) => v[i].clone(),
        }
    }

    fn index_of(&self, x: &Rational) -> Option<usize> {
        match &self.keys {
            RepKeys::Scaled { denom, nums } => {
                let k: i128 = scaled::numerator_over(x, denom)?;
                nums.binary_search(&k).ok()
            }
            RepKeys::ScaledBig { denom, nums } => {
                let k: BigInt = scaled::numerator_over(x, denom)?;
                nums.binary_search(&k).ok()
            }
            RepKeys::Exact(v) => v.binary_search(x).ok(),
        }
    }

    /// Count at `x`, zero off the support.
    pub fn get(&self, x: &Rational) -> u64 {
        self.index_of(x).map_or(0, |i| self.counts[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (Rational, u64)> + '_ {
        (0..self.len()).map(move |i| (self.key(i), self.counts[i]))
    }

    pub fn support(&self) -> FiniteSet {
        self.filter_support(|_| true)
    }

    /// Values whose count satisfies `pred`, as a set.
    pub fn filter_support(&self, pred: impl Fn(u64) -> bool) -> FiniteSet {
        FiniteSet::from_sorted(
            (0..self.len())
                .filter(|&i| pred(self.counts[i]))
                .map(|i| self.key(i))
                .collect(),
        )
    }

    /// Debug dump: header `value,count`, values as `p/q`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("value,count\n");
        for (v, c) in self.iter() {
            s.push_str(&format!("{},{}\n", v.to_pq_string(), c));
        }
        s
    }
}

/// Sorted `(value, count)` runs of `a op b` for `op ∈ {sum, diff, prod}`.
/// `same` means `a` and `b` are the same slice, enabling the symmetric shortcut.
pub(crate) fn pair_runs<T: Elem>(a: &[T], b: &[T], op: Op, same: bool) -> (Vec<T>, Vec<u64>) {
    debug_assert!(op != Op::Ratio);
    if a.is_empty() || b.is_empty() {
        return (Vec::new(), Vec::new());
    }
    if let Some(r) = dense_runs(a, b, op) {
        return r;
    }
    let apply = |x: &T, y: &T| -> T {
        match op {
            Op::Sum => x.clone() + y.clone(),
            Op::Diff => x.clone() - y.clone(),
            _ => x.clone() * y.clone(),
        }
    };
    if same && op == Op::Diff {
        // positive differences only, then mirror
        let n = a.len();
        let mut pos = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in 0..i {
                pos.push(a[i].clone() - a[j].clone());
            }
        }
        pos.sort_unstable();
        let (pk, pc) = rle(pos, 1);
        let mut keys = Vec::with_capacity(2 * pk.len() + 1);
        let mut counts = Vec::with_capacity(2 * pk.len() + 1);
        for (k, c) in pk.iter().zip(&pc).rev() {
            keys.push(-k.clone());
            counts.push(*c);
        }
        keys.push(T::zero());
        counts.push(n as u64);
        keys.extend(pk);
        counts.extend(pc);
        return (keys, counts);
    }
    if same {
        // commutative: off-diagonal pairs twice, diagonal once
        let n = a.len();
        let mut off = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in 0..i {
                off.push(apply(&a[i], &a[j]));
            }
        }
        off.sort_unstable();
        let mut diag: Vec<T> = a.iter().map(|x| apply(x, x)).collect();
        diag.sort_unstable();
        let (ok, oc) = rle(off, 2);
        let (dk, dc) = rle(diag, 1);
        return merge_runs(ok, oc, dk, dc);
    }
    let mut vals = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            vals.push(apply(x, y));
        }
    }
    vals.sort_unstable();
    rle(vals, 1)
}

/// Counting-array path when every result is a small integer in a narrow window.
fn dense_runs<T: Elem>(a: &[T], b: &[T], op: Op) -> Option<(Vec<T>, Vec<u64>)> {
    if op == Op::Prod {
        return None;
    }
    let (amin, amax) = (a.first()?.to_i64()?, a.last()?.to_i64()?);
    let (bmin, bmax) = (b.first()?.to_i64()?, b.last()?.to_i64()?);
    let (lo, hi) = match op {
        Op::Sum => (amin.checked_add(bmin)?, amax.checked_add(bmax)?),
        _ => (amin.checked_sub(bmax)?, amax.checked_sub(bmin)?),
    };
    let width = (hi as i128 - lo as i128) as u64 + 1;
    let pairs = (a.len() * b.len()) as u64;
    if width > (1 << 26) || width > 16 * pairs + 4096 {
        return None;
    }
    let mut table = vec![0u64; width as usize];
    let bi: Vec<i64> = b.iter().map(|y| y.to_i64().expect("bounded")).collect();
    for x in a {
        let xi = x.to_i64().expect("bounded");
        match op {
            Op::Sum => bi.iter().for_each(|&y| table[(xi + y - lo) as usize] += 1),
            _ => bi.iter().for_each(|&y| table[(xi - y - lo) as usize] += 1),
        }
    }
    let mut keys = Vec::new();
    let mut counts = Vec::new();
    for (off, &c) in table.iter().enumerate() {
        if c > 0 {
            keys.push(T::from_big(&BigInt::from(lo + off as i64)).expect("bounded"));
            counts.push(c);
        }
    }
    Some((keys, counts))
}

fn rle<T: Elem>(sorted: Vec<T>, weight: u64) -> (Vec<T>, Vec<u64>) {
    let mut keys: Vec<T> = Vec::new();
    let mut counts: Vec<u64> = Vec::new();
    for v in sorted {
        if keys.last() == Some(&v) {
            *counts.last_mut().unwrap() += weight;
        } else {
            keys.push(v);
            counts.push(weight);
        }
    }
    (keys, counts)
}

fn merge_runs<T: Elem>(ak: Vec<T>, ac: Vec<u64>, bk: Vec<T>, bc: Vec<u64>) -> (Vec<T>, Vec<u64>) {
    let mut keys = Vec::with_capacity(ak.len() + bk.len());
    let mut counts = Vec::with_capacity(ak.len() + bk.len());
    let (mut i, mut j) = (0, 0);
    while i < ak.len() || j < bk.len() {
        let take_a = j >= bk.len() || (i < ak.len() && ak[i] <= bk[j]);
        let take_b = i >= ak.len() || (j < bk.len() && bk[j] <= ak[i]);
        if take_a && take_b {
            keys.push(ak[i].clone());
            counts.push(ac[i] + bc[j]);
            i += 1;
            j += 1;
        } else if take_a {
            keys.push(ak[i].clone());
            counts.push(ac[i]);
            i += 1;
        } else {
            keys.push(bk[j].clone());
            counts.push(bc[j]);
            j += 1;
        }
    }
    (keys, counts)
}

fn reduce_fraction<T: Elem>(n: &T, d: &T) -> (T, T) {
    let g = n.gcd(d);
    let (mut n, mut d) = (n.clone() / g.clone(), d.clone() / g);
    if d.is_negative() {
        n = -n;
        d = -d;
    }
    (n, d)
}

fn ratio_runs<T: Elem>(a: &[T], b: &[T]) -> (Vec<Rational>, Vec<u64>) {
    let mut map: FxHashMap<(T, T), u64> = FxHashMap::default();
    for x in a {
        for y in b {
            *map.entry(reduce_fraction(x, y)).or_insert(0) += 1;
        }
    }
    let mut entries: Vec<(Rational, u64)> = map
        .into_iter()
        .map(|((n, d), c)| (Rational::new(n.to_big(), d.to_big()), c))
        .collect();
    entries.sort_unstable_by(|x, y| x.0.cmp(&y.0));
    entries.into_iter().unzip()
}

fn same_set(a: &FiniteSet, b: &FiniteSet) -> bool {
    std::ptr::eq(a, b) || a == b
}

/// `A op B` as a set.
pub fn pair_set(a: &FiniteSet, b: &FiniteSet, op: Op) -> Result<FiniteSet> {
    Ok(rep_fn(a, b, op)?.support())
}

/// Representation function of `A op B` (ordered pairs).
pub fn rep_fn(a: &FiniteSet, b: &FiniteSet, op: Op) -> Result<RepFn> {
    op.check_domain(b)?;
    let same = same_set(a, b);
    let (keys, counts) = if op == Op::Ratio {
        let (k, c) = dispatch(
            &[a.as_slice(), b.as_slice()],
            |_, v| ratio_runs(&v[0], &v[1]),
            |_, v| ratio_runs(&v[0], &v[1]),
        );
        (RepKeys::Exact(k), c)
    } else {
        let sq = |d: &BigInt| if op == Op::Prod { d * d } else { d.clone() };
        dispatch(
            &[a.as_slice(), b.as_slice()],
            |d, v| {
                let (k, c) = pair_runs(&v[0], &v[1], op, same);
                (RepKeys::Scaled { denom: sq(d), nums: k }, c)
            },
            |d, v| {
                let (k, c) = pair_runs(&v[0], &v[1], op, same);
                (RepKeys::ScaledBig { denom: sq(d), nums: k }, c)
            },
        )
    };
    let f = RepFn {
        op,
        left_size: a.len(),
        right_size: b.len(),
        keys,
        counts,
    };
    debug_assert_eq!(f.total_mass(), (a.len() * b.len()) as u128);
    Ok(f)
}

/// Counts of `A op B` without materializing the support values.
pub(crate) fn rep_counts(a: &FiniteSet, b: &FiniteSet, op: Op) -> Result<Vec<u64>> {
    if op == Op::Ratio {
        return Ok(rep_fn(a, b, op)?.counts);
    }
    let same = same_set(a, b);
    Ok(dispatch(
        &[a.as_slice(), b.as_slice()],
        |_, v| pair_runs(&v[0], &v[1], op, same).1,
        |_, v| pair_runs(&v[0], &v[1], op, same).1,
    ))
}

/// `|A op B|` without building the set; exact.
///
/// Values are bucketed by a residue fingerprint; buckets holding more than one
/// pair are resolved by exact comparison.
pub fn pair_set_size(a: &FiniteSet, b: &FiniteSet, op: Op) -> Result<usize> {
    op.check_domain(b)?;
    if a.is_empty() || b.is_empty() {
        return Ok(0);
    }
    if op == Op::Ratio {
        return Ok(rep_fn(a, b, op)?.len());
    }
    let same = same_set(a, b);
    Ok(dispatch(
        &[a.as_slice(), b.as_slice()],
        |_, v| distinct_small(&v[0], &v[1], op, same),
        |_, v| distinct_fingerprinted(&v[0], &v[1], op, same),
    ))
}

fn distinct_small(a: &[i128], b: &[i128], op: Op, same: bool) -> usize {
    let f = |x: i128, y: i128| match op {
        Op::Sum => x + y,
        Op::Diff => x - y,
        _ => x * y,
    };
    let mut vals: Vec<i128> = if same && op != Op::Diff {
        (0..a.len()).flat_map(|i| (0..=i).map(move |j| f(a[i], a[j]))).collect()
    } else {
        a.iter().flat_map(|&x| b.iter().map(move |&y| f(x, y))).collect()
    };
    vals.sort_unstable();
    vals.dedup();
    vals.len()
}

fn fp_mul(x: u64, y: u64) -> u64 {
    ((x as u128 * y as u128) % FP_MOD as u128) as u64
}

fn distinct_fingerprinted<T: Elem>(a: &[T], b: &[T], op: Op, same: bool) -> usize {
    let fa: Vec<u64> = a.iter().map(Elem::fingerprint).collect();
    let fb: Vec<u64> = b.iter().map(Elem::fingerprint).collect();
    let combine = |x: u64, y: u64| match op {
        Op::Sum => fp_add(x, y),
        Op::Diff => fp_sub(x, y),
        _ => fp_mul(x, y),
    };
    // for A - A with A = B count positive differences and mirror
    let diff_same = same && op == Op::Diff;
    let mut tagged: Vec<(u64, u32, u32)> = Vec::new();
    for i in 0..a.len() {
        let jmax = if same { i + usize::from(!diff_same) } else { b.len() };
        for j in 0..jmax {
            tagged.push((combine(fa[i], fb[j]), i as u32, j as u32));
        }
    }
    tagged.sort_unstable();
    let value = |i: u32, j: u32| -> T {
        let (x, y) = (a[i as usize].clone(), b[j as usize].clone());
        match op {
            Op::Sum => x + y,
            Op::Diff => x - y,
            _ => x * y,
        }
    };
    let mut distinct = 0usize;
    let mut start = 0;
    while start < tagged.len() {
        let mut end = start + 1;
        while end < tagged.len() && tagged[end].0 == tagged[start].0 {
            end += 1;
        }
        if end - start == 1 {
            distinct += 1;
        } else {
            let mut vals: Vec<T> = tagged[start..end].iter().map(|&(_, i, j)| value(i, j)).collect();
            vals.sort_unstable();
            vals.dedup();
            distinct += vals.len();
        }
        start = end;
    }
    if diff_same {
        2 * distinct + 1
    } else {
        distinct
    }
}

/// A moment energy `Σ count^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyValue {
    /// Present iff `k` is a nonnegative integer.
    pub exact: Option<BigUint>,
    pub approx: f64,
}

impl EnergyValue {
    pub fn value(&self) -> f64 {
        self.approx
    }

    pub fn exact_u128(&self) -> Option<u128> {
        self.exact.as_ref().and_then(|e| e.to_u128())
    }
}

/// Tree summation; error grows with log of the length.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n if n <= 8 => xs.iter().sum(),
        n => pairwise_sum(&xs[..n / 2]) + pairwise_sum(&xs[n / 2..]),
    }
}

fn histogram(counts: &[u64]) -> BTreeMap<u64, u64> {
    let mut h = BTreeMap::new();
    for &c in counts {
        *h.entry(c).or_insert(0) += 1;
    }
    h
}

pub(crate) fn energy_of_counts(counts: &[u64], k: f64) -> EnergyValue {
    assert!(k >= 0.0 && k.is_finite(), "energy exponent must be a nonnegative real");
    let h = histogram(counts);
    if k.fract() == 0.0 && k <= u32::MAX as f64 {
        let e = k as u32;
        let mut total = BigUint::zero();
        for (&c, &m) in &h {
            total += BigUint::from(c).pow(e) * BigUint::from(m);
        }
        let approx = total.to_f64().unwrap_or(f64::INFINITY);
        return EnergyValue {
            exact: Some(total),
            approx,
        };
    }
    let terms: Vec<f64> = h.iter().map(|(&c, &m)| m as f64 * (c as f64).powf(k)).collect();
    EnergyValue {
        exact: None,
        approx: pairwise_sum(&terms),
    }
}

/// `Σ_x f(x)^k`. Multiplicative energies come from a ratio [`RepFn`].
pub fn energy(f: &RepFn, k: f64) -> EnergyValue {
    energy_of_counts(&f.counts, k)
}

/// `E_k(A, B)` for the given operation, without keeping the support.
pub fn energy_of(a: &FiniteSet, b: &FiniteSet, op: Op, k: f64) -> Result<EnergyValue> {
    Ok(energy_of_counts(&rep_counts(a, b, op)?, k))
}

/// Default work limit for [`projection_count_within`].
pub const PROJECTION_BUDGET: u128 = 1 << 28;

/// `#{(p1, p2, q) ∈ P × P × Q : p1 - p2 = q}`.
pub fn projection_count(p: &FiniteSet, q: &FiniteSet) -> u64 {
    projection_count_within(p, q, u128::MAX).expect("unbounded budget")
}

/// [`projection_count`] refusing work above `limit` elementary steps.
pub fn projection_count_within(p: &FiniteSet, q: &FiniteSet, limit: u128) -> Result<u64> {
    if p.is_empty() || q.is_empty() {
        return Ok(0);
    }
    dispatch(
        &[p.as_slice(), q.as_slice()],
        |_, v| projection_kernel(&v[0], &v[1], limit),
        |_, v| projection_kernel(&v[0], &v[1], limit),
    )
}

fn symmetric<T: Elem>(v: &[T]) -> bool {
    v.iter().zip(v.iter().rev()).all(|(x, y)| x == &-y.clone())
}

fn projection_kernel<T: Elem>(p: &[T], q: &[T], limit: u128) -> Result<u64> {
    // negation pairs up the triples when both sets are symmetric, so only q > 0 is needed
    let sym = symmetric(p) && symmetric(q);
    let q_pos = if sym { &q[q.partition_point(|y| !y.is_positive())..] } else { q };
    let hash_cost = p.len() as u128 * q_pos.len() as u128;
    let span = match (p[0].to_i64(), p[p.len() - 1].to_i64()) {
        (Some(lo), Some(hi)) => Some((hi as i128 - lo as i128) as u128),
        _ => None,
    };
    let bit_cost = span
        .filter(|&w| w < 1 << 34)
        .map(|w| q.len() as u128 * (w / 64 + 1));
    let cost = bit_cost.map_or(hash_cost, |b| b.min(hash_cost));
    if cost > limit {
        return Err(Error::Budget {
            what: "projection count",
            needed: cost,
            limit,
        });
    }
    if bit_cost.is_some_and(|b| b < hash_cost) {
        let lo = p[0].to_i64().unwrap();
        let hi = p[p.len() - 1].to_i64().unwrap();
        let mut bits = Bits::new((hi - lo) as usize + 1);
        for x in p {
            bits.set((x.to_i64().unwrap() - lo) as usize);
        }
        let mut total = 0u64;
        for y in q {
            // |P ∩ (P + y)| depends only on |y|
            if let Some(s) = y.to_i64().and_then(|s| usize::try_from(s.unsigned_abs()).ok()) {
                total += bits.shifted_overlap(s);
            }
        }
        return Ok(total);
    }
    let pf: Vec<u64> = p.iter().map(Elem::fingerprint).collect();
    let qf: Vec<u64> = q_pos.iter().map(Elem::fingerprint).collect();
    // a small bitmap over fingerprint bits rejects most candidates in cache
    let bits = (p.len() * 32).next_power_of_two().clamp(1 << 12, 1 << 24);
    let shift = 64 - bits.trailing_zeros();
    let slot = |f: u64| (f.wrapping_mul(0x9e37_79b9_7f4a_7c15) >> shift) as usize;
    let mut filter = Bits::new(bits);
    for &f in &pf {
        filter.set(slot(f));
    }
    let fset: FxHashSet<u64> = pf.iter().copied().collect();
    let exact: FxHashSet<&T> = p.iter().collect();
    let mut total = 0u64;
    for (x, &xf) in p.iter().zip(&pf) {
        for (y, &yf) in q_pos.iter().zip(&qf) {
            let f = fp_sub(xf, yf);
            if filter.get(slot(f)) && fset.contains(&f) && exact.contains(&(x.clone() - y.clone())) {
                total += 1;
            }
        }
    }
    if sym {
        let has_zero = q.binary_search(&T::zero()).is_ok();
        total = 2 * total + if has_zero { p.len() as u64 } else { 0 };
    }
    Ok(total)
}
