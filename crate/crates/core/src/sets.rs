//! Canonical finite subsets of the rationals and their affine transforms.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A finite set of rationals stored as a strictly increasing sequence.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FiniteSet {
    elems: Vec<Rational>,
}

/// Builds the canonical set: sorted, duplicates collapsed.
pub fn make_set(values: impl IntoIterator<Item = Rational>) -> FiniteSet {
    let mut elems: Vec<Rational> = values.into_iter().collect();
    elems.sort_unstable();
    elems.dedup();
    FiniteSet { elems }
}

impl FiniteSet {
    pub fn empty() -> Self {
        FiniteSet::default()
    }

    pub fn from_integers(values: impl IntoIterator<Item = i64>) -> Self {
        make_set(values.into_iter().map(Rational::from))
    }

    /// Caller guarantees `elems` is strictly increasing.
    pub(crate) fn from_sorted(elems: Vec<Rational>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        FiniteSet { elems }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.elems.iter()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.elems
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.elems.binary_search(x).is_ok()
    }

    pub fn min(&self) -> Option<&Rational> {
        self.elems.first()
    }

    pub fn max(&self) -> Option<&Rational> {
        self.elems.last()
    }

    pub fn is_subset(&self, other: &FiniteSet) -> bool {
        self.elems.iter().all(|x| other.contains(x))
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Rational::zero())
    }

    /// True iff every element is strictly positive.
    pub fn is_positive(&self) -> bool {
        self.min().is_none_or(|m| m.is_positive())
    }

    /// One element per line, `p` or `p/q`.
    pub fn to_lines(&self) -> String {
        let mut s = String::new();
        for e in &self.elems {
            s.push_str(&e.to_string());
            s.push('\n');
        }
        s
    }

    /// Parses the element-per-line format; blank lines and `#` comments are skipped.
    pub fn parse_lines(text: &str) -> Result<Self> {
        let mut vals = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let r = t.parse::<Rational>().map_err(|e| Error::Parse {
                line: i + 1,
                msg: e.to_string(),
            })?;
            vals.push(r);
        }
        Ok(make_set(vals))
    }
}

impl FromIterator<Rational> for FiniteSet {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        make_set(iter)
    }
}

impl<'a> IntoIterator for &'a FiniteSet {
    type Item = &'a Rational;
    type IntoIter = std::slice::Iter<'a, Rational>;
    fn into_iter(self) -> Self::IntoIter {
        self.elems.iter()
    }
}

impl fmt::Debug for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.elems.iter()).finish()
    }
}

impl FromStr for FiniteSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FiniteSet::parse_lines(s)
    }
}

/// `{scale * a + shift : a in A}`.
pub fn transform(a: &FiniteSet, scale: &Rational, shift: &Rational) -> Result<FiniteSet> {
    if scale.is_zero() {
        return Err(Error::InvalidScale);
    }
    let mut out: Vec<Rational> = a.iter().map(|x| &(x * scale) + shift).collect();
    if !scale.is_positive() {
        out.reverse();
    }
    Ok(FiniteSet::from_sorted(out))
}

/// `A ∩ (A / λ)`.
pub fn intersect_dilate(a: &FiniteSet, lambda: &Rational) -> Result<FiniteSet> {
    if lambda.is_zero() {
        return Err(Error::InvalidScale);
    }
    Ok(FiniteSet::from_sorted(
        a.iter()
            .filter(|x| a.contains(&(*x * lambda)))
            .cloned()
            .collect(),
    ))
}

/// Consecutive gaps strictly increasing; vacuous for two or fewer elements.
pub fn is_convex(a: &FiniteSet) -> bool {
    let gaps: Vec<Rational> = a.elems.windows(2).map(|w| &w[1] - &w[0]).collect();
    gaps.windows(2).all(|g| g[0] < g[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64) -> Rational {
        Rational::from(n)
    }

    fn ints(v: &[i64]) -> FiniteSet {
        FiniteSet::from_integers(v.iter().copied())
    }

    #[test]
    fn make_set_examples() {
        assert_eq!(make_set([r(3), r(1), r(2), r(2)]), ints(&[1, 2, 3]));
        assert!(make_set(Vec::new()).is_empty());
        let s = make_set([Rational::new(1, 2), Rational::new(2, 4)]);
        assert_eq!(s.len(), 1);
        assert_eq!(s.as_slice()[0], Rational::new(1, 2));
    }

    #[test]
    fn transform_examples() {
        let a = ints(&[1, 2, 3]);
        assert_eq!(transform(&a, &r(2), &r(0)).unwrap(), ints(&[2, 4, 6]));
        assert_eq!(transform(&a, &r(1), &r(-2)).unwrap(), ints(&[-1, 0, 1]));
        assert_eq!(transform(&a, &r(-1), &r(0)).unwrap(), ints(&[-3, -2, -1]));
        assert!(matches!(transform(&a, &r(0), &r(1)), Err(Error::InvalidScale)));
    }

    #[test]
    fn intersect_dilate_examples() {
        assert_eq!(intersect_dilate(&ints(&[1, 2, 4]), &r(2)).unwrap(), ints(&[1, 2]));
        let a = ints(&[1, 5, 7, 9]);
        assert_eq!(intersect_dilate(&a, &r(1)).unwrap(), a);
        assert!(intersect_dilate(&ints(&[1, 3]), &r(2)).unwrap().is_empty());
        assert!(matches!(intersect_dilate(&a, &r(0)), Err(Error::InvalidScale)));
    }

    #[test]
    fn convexity_examples() {
        assert!(is_convex(&ints(&[1, 4, 9, 16])));
        assert!(!is_convex(&ints(&[1, 2, 3])));
        assert!(is_convex(&ints(&[5])));
        assert!(is_convex(&FiniteSet::empty()));
    }

    #[test]
    fn line_format() {
        let s = FiniteSet::parse_lines("# header\n3\n1/2\n\n-4/6\n3\n").unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.to_lines(), "-2/3\n1/2\n3\n");
        match FiniteSet::parse_lines("1\nabc\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    fn arb_set() -> impl Strategy<Value = FiniteSet> {
        prop::collection::vec((-50i64..50, 1i64..6), 0..20)
            .prop_map(|v| make_set(v.into_iter().map(|(p, q)| Rational::new(p, q))))
    }

    fn arb_nonzero() -> impl Strategy<Value = Rational> {
        (-9i64..10, 1i64..5)
            .prop_filter("nonzero", |(p, _)| *p != 0)
            .prop_map(|(p, q)| Rational::new(p, q))
    }

    proptest! {
        #[test]
        fn transform_is_bijective(a in arb_set(), s in arb_nonzero(), t in (-20i64..20).prop_map(Rational::from)) {
            let b = transform(&a, &s, &t).unwrap();
            prop_assert_eq!(b.len(), a.len());
            let back = transform(&b, &s.recip(), &(-&(&t / &s))).unwrap();
            prop_assert_eq!(back, a);
        }

        #[test]
        fn convexity_invariant_under_positive_affine(a in arb_set(), s in arb_nonzero(), t in (-20i64..20).prop_map(Rational::from)) {
            let s = s.abs();
            prop_assert_eq!(is_convex(&transform(&a, &s, &t).unwrap()), is_convex(&a));
        }
    }
}
