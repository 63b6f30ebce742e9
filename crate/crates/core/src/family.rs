//! Parametric set families: progressions, convex sequences, seeded random subsets.
//!
//! Text syntax (also used in scan output):
//!
//! | kind | syntax | elements |
//! |------|--------|----------|
//! | arithmetic progression | `ap(a,d)` | `a + j d`, `j = 0..n` |
//! | geometric progression | `gp(a,r)` | `a r^j`, `j = 0..n` |
//! | convex powers | `convex(k)` | `j^k`, `j = 1..=n` |
//! | random convex | `convex_custom(seed)` | gaps `g_{j+1} = g_j + 1 + u_j`, `u_j ∈ {0,1,2}` |
//! | random subset | `random(N,seed)` | `n` distinct draws from `[1, N]` |
//! | perturbed | `perturbed(seed,<kind>)` | each element moved by less than a quarter of the minimum gap |
//!
//! `N` may be an integer or scale with `n`: `4n`, `n^2`, `3n^2`.
//!
//! Random draws use `ChaCha8Rng::seed_from_u64(seed)`; random subsets use
//! rejection sampling (redraw on collision) with `random_range(1..=N)`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::sets::{make_set, FiniteSet};

/// Range of a random subset, possibly growing with the requested size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RangeSpec {
    Fixed(u64),
    Linear(u64),
    Quadratic(u64),
}

impl RangeSpec {
    pub fn resolve(&self, n: usize) -> u64 {
        let n = n as u64;
        match *self {
            RangeSpec::Fixed(v) => v,
            RangeSpec::Linear(c) => c * n,
            RangeSpec::Quadratic(c) => c * n * n,
        }
    }
}

impl fmt::Display for RangeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RangeSpec::Fixed(v) => write!(f, "{v}"),
            RangeSpec::Linear(1) => write!(f, "n"),
            RangeSpec::Linear(c) => write!(f, "{c}n"),
            RangeSpec::Quadratic(1) => write!(f, "n^2"),
            RangeSpec::Quadratic(c) => write!(f, "{c}n^2"),
        }
    }
}

impl FromStr for RangeSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::InvalidParam(format!("bad range `{t}`"));
        let coef = |c: &str| -> Result<u64> {
            if c.is_empty() {
                Ok(1)
            } else {
                c.parse().map_err(|_| bad())
            }
        };
        if let Some(c) = t.strip_suffix("n^2") {
            Ok(RangeSpec::Quadratic(coef(c)?))
        } else if let Some(c) = t.strip_suffix('n') {
            Ok(RangeSpec::Linear(coef(c)?))
        } else {
            Ok(RangeSpec::Fixed(t.parse().map_err(|_| bad())?))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Ap { start: Rational, step: Rational },
    Gp { start: Rational, ratio: Rational },
    ConvexPower { exponent: u32 },
    ConvexCustom { seed: u64 },
    RandomSubset { range: RangeSpec, seed: u64 },
    Perturbed { seed: u64, base: Box<FamilyKind> },
}

/// A family kind together with the requested size.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub n: usize,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, n: usize) -> Self {
        FamilySpec { kind, n }
    }
}

impl FamilyKind {
    pub fn ap(start: i64, step: i64) -> Self {
        FamilyKind::Ap {
            start: start.into(),
            step: step.into(),
        }
    }

    pub fn gp(start: i64, ratio: i64) -> Self {
        FamilyKind::Gp {
            start: start.into(),
            ratio: ratio.into(),
        }
    }

    pub fn convex(exponent: u32) -> Self {
        FamilyKind::ConvexPower { exponent }
    }

    pub fn random(range: RangeSpec, seed: u64) -> Self {
        FamilyKind::RandomSubset { range, seed }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FamilyKind::Ap { step, .. } if step.is_zero() => {
                Err(Error::InfeasibleSpec("ap step must be nonzero".into()))
            }
            FamilyKind::Gp { start, ratio } => {
                let one = Rational::one();
                if ratio.is_zero() || ratio.abs() == one {
                    Err(Error::InfeasibleSpec("gp ratio must avoid 0, 1, -1".into()))
                } else if start.is_zero() {
                    Err(Error::InfeasibleSpec("gp start must be nonzero".into()))
                } else {
                    Ok(())
                }
            }
            FamilyKind::ConvexPower { exponent } if *exponent < 2 => {
                Err(Error::InfeasibleSpec("convex exponent must be >= 2".into()))
            }
            FamilyKind::Perturbed { base, .. } => base.validate(),
            _ => Ok(()),
        }
    }

    /// Same family with every seed offset by `salt` (identity for `salt = 0`).
    pub fn reseeded(&self, salt: u64) -> FamilyKind {
        let mix = |s: u64| s.wrapping_add(salt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        match self {
            FamilyKind::ConvexCustom { seed } => FamilyKind::ConvexCustom { seed: mix(*seed) },
            FamilyKind::RandomSubset { range, seed } => FamilyKind::RandomSubset {
                range: *range,
                seed: mix(*seed),
            },
            FamilyKind::Perturbed { seed, base } => FamilyKind::Perturbed {
                seed: mix(*seed),
                base: Box::new(base.reseeded(salt)),
            },
            other => other.clone(),
        }
    }

    pub fn generate(&self, n: usize) -> Result<FiniteSet> {
        gen_family(&FamilySpec::new(self.clone(), n))
    }
}

/// Generates exactly `spec.n` elements; deterministic in the spec.
pub fn gen_family(spec: &FamilySpec) -> Result<FiniteSet> {
    spec.kind.validate()?;
    let n = spec.n;
    let set = match &spec.kind {
        FamilyKind::Ap { start, step } => make_set(
            (0..n).map(|j| start + &(step * &Rational::from(j as i64))),
        ),
        FamilyKind::Gp { start, ratio } => {
            let mut v = Vec::with_capacity(n);
            let mut cur = start.clone();
            for _ in 0..n {
                v.push(cur.clone());
                cur = &cur * ratio;
            }
            make_set(v)
        }
        FamilyKind::ConvexPower { exponent } => make_set(
            (1..=n).map(|j| Rational::from_integer(num_traits::pow(BigInt::from(j), *exponent as usize))),
        ),
        FamilyKind::ConvexCustom { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut v = Vec::with_capacity(n);
            let mut a: i64 = 1;
            let mut gap: i64 = 0;
            for _ in 0..n {
                v.push(Rational::from(a));
                gap += 1 + rng.random_range(0..3i64);
                a += gap;
            }
            make_set(v)
        }
        FamilyKind::RandomSubset { range, seed } => {
            let big_n = range.resolve(n);
            if big_n < n as u64 {
                return Err(Error::InfeasibleSpec(format!(
                    "random subset of size {n} from range {big_n}"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut chosen = BTreeSet::new();
            while chosen.len() < n {
                chosen.insert(rng.random_range(1..=big_n));
            }
            make_set(chosen.into_iter().map(|x| Rational::from_integer(BigInt::from(x))))
        }
        FamilyKind::Perturbed { seed, base } => {
            let base_set = base.generate(n)?;
            let min_gap = base_set
                .as_slice()
                .windows(2)
                .map(|w| &w[1] - &w[0])
                .min()
                .unwrap_or_else(Rational::one);
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            // |noise| <= 999/4000 * min_gap < min_gap / 4
            let unit = &min_gap / &Rational::from(4000);
            make_set(base_set.iter().map(|x| {
                let k: i64 = rng.random_range(-999..=999);
                x + &(&unit * &Rational::from(k))
            }))
        }
    };
    debug_assert_eq!(set.len(), n);
    Ok(set)
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyKind::Ap { start, step } => write!(f, "ap({start},{step})"),
            FamilyKind::Gp { start, ratio } => write!(f, "gp({start},{ratio})"),
            FamilyKind::ConvexPower { exponent } => write!(f, "convex({exponent})"),
            FamilyKind::ConvexCustom { seed } => write!(f, "convex_custom({seed})"),
            FamilyKind::RandomSubset { range, seed } => write!(f, "random({range},{seed})"),
            FamilyKind::Perturbed { seed, base } => write!(f, "perturbed({seed},{base})"),
        }
    }
}

impl FromStr for FamilyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = |msg: &str| Error::InvalidParam(format!("family `{t}`: {msg}"));
        let (name, rest) = t.split_once('(').ok_or_else(|| bad("expected name(args)"))?;
        let body = rest.strip_suffix(')').ok_or_else(|| bad("missing `)`"))?;
        let rat = |x: &str| x.trim().parse::<Rational>().map_err(|e| bad(&e.to_string()));
        let int = |x: &str| x.trim().parse::<u64>().map_err(|_| bad("expected integer"));
        let two = || -> Result<(&str, &str)> { body.split_once(',').ok_or_else(|| bad("expected two arguments")) };
        let kind = match name.trim().to_ascii_lowercase().as_str() {
            "ap" => {
                let (a, d) = two()?;
                FamilyKind::Ap { start: rat(a)?, step: rat(d)? }
            }
            "gp" => {
                let (a, r) = two()?;
                FamilyKind::Gp { start: rat(a)?, ratio: rat(r)? }
            }
            "convex" => FamilyKind::ConvexPower {
                exponent: int(body)? as u32,
            },
            "convex_custom" => FamilyKind::ConvexCustom { seed: int(body)? },
            "random" => {
                let (r, seed) = two()?;
                FamilyKind::RandomSubset { range: r.parse()?, seed: int(seed)? }
            }
            "perturbed" => {
                let (seed, base) = two()?;
                FamilyKind::Perturbed {
                    seed: int(seed)?,
                    base: Box::new(base.parse()?),
                }
            }
            _ => return Err(bad("unknown family")),
        };
        kind.validate()?;
        Ok(kind)
    }
}

impl Serialize for FamilyKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FamilyKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
