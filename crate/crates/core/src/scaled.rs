//! Common-denominator integer views of rational data.
//!
//! Sums and differences of elements sharing a denominator `L` are again
//! multiples of `1/L`, so the counting kernels can run on integer numerators.
//! Numerators bounded by [`SMALL_LIMIT`] use `i128` (products still fit);
//! everything else falls back to `BigInt`.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::Rational;

/// Largest magnitude admitted on the `i128` path.
pub(crate) const SMALL_LIMIT: i128 = 1 << 62;

/// Safe prime below 2^61 used for additive fingerprints. A Mersenne modulus
/// would map `2^j` to `2^(j mod 61)` and collide on geometric progressions.
pub(crate) const FP_MOD: u64 = 0x1fff_ffff_ffff_f6bb;

pub(crate) trait Elem:
    Integer + Signed + Clone + Hash + Ord + Send + Sync + Debug + 'static
{
    fn from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn to_i64(&self) -> Option<i64>;
    /// Residue modulo [`FP_MOD`]; additive homomorphism.
    fn fingerprint(&self) -> u64;
}

impl Elem for i128 {
    fn from_big(b: &BigInt) -> Option<Self> {
        let v = b.to_i128()?;
        (v.abs() <= SMALL_LIMIT).then_some(v)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn to_i64(&self) -> Option<i64> {
        i64::try_from(*self).ok()
    }
    fn fingerprint(&self) -> u64 {
        self.rem_euclid(FP_MOD as i128) as u64
    }
}

impl Elem for BigInt {
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn to_i64(&self) -> Option<i64> {
        ToPrimitive::to_i64(self)
    }
    fn fingerprint(&self) -> u64 {
        self.mod_floor(&BigInt::from(FP_MOD)).to_u64().unwrap_or(0)
    }
}

pub(crate) fn fp_sub(a: u64, b: u64) -> u64 {
    let (d, borrow) = a.overflowing_sub(b);
    d.wrapping_add(FP_MOD * borrow as u64)
}

pub(crate) fn fp_add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= FP_MOD {
        s - FP_MOD
    } else {
        s
    }
}

/// Least common denominator of every value in `groups`.
pub(crate) fn common_denom<'a>(groups: impl IntoIterator<Item = &'a [Rational]>) -> BigInt {
    let mut l = BigInt::one();
    for g in groups {
        for r in g {
            if !r.denom().is_one() {
                l = l.lcm(r.denom());
            }
        }
    }
    l
}

/// Numerators of every group over `denom`, or `None` if some value does not fit `T`.
pub(crate) fn scale_with<T: Elem>(denom: &BigInt, groups: &[&[Rational]]) -> Option<Vec<Vec<T>>> {
    groups
        .iter()
        .map(|g| {
            g.iter()
                .map(|r| {
                    let num = if r.denom() == denom {
                        r.numer().clone()
                    } else {
                        r.numer() * (denom / r.denom())
                    };
                    T::from_big(&num)
                })
                .collect()
        })
        .collect()
}

/// Scales `groups` to a common denominator and runs `small` on `i128`
/// numerators when they fit, `big` otherwise.
pub(crate) fn dispatch<R>(
    groups: &[&[Rational]],
    small: impl FnOnce(&BigInt, Vec<Vec<i128>>) -> R,
    big: impl FnOnce(&BigInt, Vec<Vec<BigInt>>) -> R,
) -> R {
    let denom = common_denom(groups.iter().copied());
    match scale_with::<i128>(&denom, groups) {
        Some(v) => small(&denom, v),
        None => big(&denom, scale_with::<BigInt>(&denom, groups).expect("BigInt always fits")),
    }
}

pub(crate) fn to_rational<T: Elem>(num: &T, denom: &BigInt) -> Rational {
    if denom.is_one() {
        Rational::from_integer(num.to_big())
    } else {
        Rational::new(num.to_big(), denom.clone())
    }
}

/// Numerator of `r` over `denom`, if `r` is a multiple of `1/denom`.
pub(crate) fn numerator_over<T: Elem>(r: &Rational, denom: &BigInt) -> Option<T> {
    let scaled = r.numer() * denom;
    let (q, rem) = scaled.div_rem(r.denom());
    if !rem.is_zero() {
        return None;
    }
    T::from_big(&q)
}

/// Fixed-width bitset.
#[derive(Clone, Debug)]
pub(crate) struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    pub fn new(len: usize) -> Self {
        Bits {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn and_count(&self, other: &Bits) -> u64 {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as u64)
            .sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + t)
            })
        })
    }

    /// `|{i : self[i] && self[i - shift]}|` for `shift >= 0`.
    pub fn shifted_overlap(&self, shift: usize) -> u64 {
        if shift >= self.len {
            return 0;
        }
        let ws = shift / 64;
        let bs = shift % 64;
        let n = self.words.len();
        let mut total = 0u64;
        for i in ws..n {
            let j = i - ws;
            let mut sh = self.words[j] << bs;
            if bs != 0 && j > 0 {
                sh |= self.words[j - 1] >> (64 - bs);
            }
            total += (self.words[i] & sh).count_ones() as u64;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn common_denominator_scaling() {
        let a = [Rational::new(1, 2), Rational::new(2, 3)];
        let b = [Rational::from(5)];
        let d = common_denom([&a[..], &b[..]]);
        assert_eq!(d, BigInt::from(6));
        let v = scale_with::<i128>(&d, &[&a, &b]).unwrap();
        assert_eq!(v, vec![vec![3, 4], vec![30]]);
        assert_eq!(to_rational(&4i128, &d), Rational::new(2, 3));
        assert_eq!(numerator_over::<i128>(&Rational::new(1, 3), &d), Some(2));
        assert_eq!(numerator_over::<i128>(&Rational::new(1, 4), &d), None);
    }

    #[test]
    fn large_values_fall_back() {
        let big = [Rational::from_integer(BigInt::one() << 100)];
        let r = dispatch(&[&big], |_, _| "small", |_, _| "big");
        assert_eq!(r, "big");
    }

    #[test]
    fn fingerprints_are_additive() {
        let a: BigInt = BigInt::from(-123456789012345i64) << 80;
        let b: BigInt = BigInt::from(987654321) << 70;
        let d = &a - &b;
        assert_eq!(fp_sub(a.fingerprint(), b.fingerprint()), d.fingerprint());
        assert_eq!(fp_add(a.fingerprint(), b.fingerprint()), (&a + &b).fingerprint());
        assert_eq!((-5i128).fingerprint(), FP_MOD - 5);
    }

    #[test]
    fn bitset_shift_overlap() {
        let mut b = Bits::new(200);
        for i in [0, 3, 64, 67, 130, 199] {
            b.set(i);
        }
        for shift in 0..200 {
            let naive = (shift..200).filter(|&i| b.get(i) && b.get(i - shift)).count() as u64;
            assert_eq!(b.shifted_overlap(shift), naive, "shift {shift}");
        }
        assert_eq!(b.ones().collect::<Vec<_>>(), vec![0, 3, 64, 67, 130, 199]);
    }
}
