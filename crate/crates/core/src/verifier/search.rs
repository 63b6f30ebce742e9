//! Hill-climbing search for sets with small theorem ratios.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::checks::theorem_sides;
use crate::error::{Error, Result};
use crate::family::FamilyKind;
use crate::rational::Rational;
use crate::sets::{is_convex, FiniteSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    ThmSp,
    ThmCsum,
    ThmCdiff,
}

impl Objective {
    pub fn name(&self) -> &'static str {
        match self {
            Objective::ThmSp => "thm_sp",
            Objective::ThmCsum => "thm_csum",
            Objective::ThmCdiff => "thm_cdiff",
        }
    }

    fn convex(&self) -> bool {
        *self != Objective::ThmSp
    }

    /// The objective's ratio; `None` for sets outside its domain.
    pub fn ratio(&self, a: &FiniteSet) -> Option<f64> {
        theorem_sides(self.name(), a).ok().map(|(l, r)| l / r)
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Objective {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "thm_sp" => Ok(Objective::ThmSp),
            "thm_csum" => Ok(Objective::ThmCsum),
            "thm_cdiff" => Ok(Objective::ThmCdiff),
            other => Err(Error::InvalidParam(format!("unknown objective `{other}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub best: FiniteSet,
    pub ratio: f64,
    /// Best ratio seen after each evaluation; non-increasing, length = evaluations.
    pub trajectory: Vec<f64>,
    pub restarts: usize,
}

/// Minimizes the objective's ratio over `n`-element integer sets in `[1, 4n²]`
/// using single-element replacements. `budget` counts evaluated sets,
/// including the start (`{1..n}` for `thm_sp`, squares otherwise).
pub fn search_extremal(objective: Objective, n: usize, budget: usize, seed: u64) -> Result<SearchResult> {
    if n < 4 {
        return Err(Error::InvalidParam(format!("search needs n >= 4, got {n}")));
    }
    if budget < 1 {
        return Err(Error::InvalidParam("search budget must be at least 1".into()));
    }
    let top = 4 * (n as i64) * (n as i64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start: Vec<i64> = if objective.convex() {
        (1..=n as i64).map(|j| j * j).collect()
    } else {
        (1..=n as i64).collect()
    };
    let eval = |v: &[i64]| objective.ratio(&FiniteSet::from_integers(v.iter().copied()));

    let mut cur = start;
    let mut cur_ratio = eval(&cur).expect("start lies in the objective's domain");
    let mut best = (cur.clone(), cur_ratio);
    let mut trajectory = vec![cur_ratio];
    let patience = (4 * n).max(50);
    let mut stale = 0;
    let mut restarts = 0;

    while trajectory.len() < budget {
        let (cand, fresh) = if stale >= patience {
            stale = 0;
            restarts += 1;
            (restart(objective, n, top, &mut rng)?, true)
        } else {
            match propose(objective, &cur, top, &mut rng) {
                Some(c) => (c, false),
                None => {
                    stale += 1;
                    trajectory.push(best.1);
                    continue;
                }
            }
        };
        match eval(&cand) {
            Some(r) if fresh => {
                cur = cand;
                cur_ratio = r;
            }
            Some(r) if r < cur_ratio => {
                cur = cand;
                cur_ratio = r;
                stale = 0;
            }
            // sideways moves keep the walk from freezing on plateaus
            Some(r) if r == cur_ratio => {
                cur = cand;
                stale += 1;
            }
            _ => stale += 1,
        }
        if cur_ratio < best.1 {
            best = (cur.clone(), cur_ratio);
        }
        trajectory.push(best.1);
    }
    Ok(SearchResult {
        best: FiniteSet::from_integers(best.0),
        ratio: best.1,
        trajectory,
        restarts,
    })
}

fn restart(objective: Objective, n: usize, top: i64, rng: &mut ChaCha8Rng) -> Result<Vec<i64>> {
    let kind = if objective.convex() {
        FamilyKind::ConvexCustom { seed: rng.random() }
    } else {
        FamilyKind::RandomSubset {
            range: crate::family::RangeSpec::Fixed(top as u64),
            seed: rng.random(),
        }
    };
    let set = kind.generate(n)?;
    Ok(set.iter().map(integer).collect())
}

fn integer(r: &Rational) -> i64 {
    r.numer().try_into().expect("search sets are small integers")
}

/// Replaces one element by a fresh value; for convex objectives the value is
/// drawn between the neighbours and rejected if convexity breaks.
fn propose(objective: Objective, cur: &[i64], top: i64, rng: &mut ChaCha8Rng) -> Option<Vec<i64>> {
    let n = cur.len();
    let i = rng.random_range(0..n);
    let (lo, hi) = if objective.convex() {
        let lo = if i == 0 { 1 } else { cur[i - 1] + 1 };
        let hi = if i + 1 == n { top } else { cur[i + 1] - 1 };
        (lo, hi)
    } else {
        (1, top)
    };
    if lo > hi {
        return None;
    }
    let v = rng.random_range(lo..=hi);
    if v == cur[i] || (!objective.convex() && cur.binary_search(&v).is_ok()) {
        return None;
    }
    let mut next = cur.to_vec();
    next[i] = v;
    next.sort_unstable();
    if objective.convex() && !is_convex(&FiniteSet::from_integers(next.iter().copied())) {
        return None;
    }
    Some(next)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_one_is_the_start() {
        let r = search_extremal(Objective::ThmSp, 8, 1, 0).unwrap();
        let ap = Objective::ThmSp.ratio(&FiniteSet::from_integers(1..=8)).unwrap();
        assert_eq!(r.ratio, ap);
        assert_eq!(r.trajectory, vec![ap]);
        assert_eq!(r.best, FiniteSet::from_integers(1..=8));
    }

    #[test]
    fn search_improves_monotonically() {
        for obj in [Objective::ThmSp, Objective::ThmCsum, Objective::ThmCdiff] {
            let r = search_extremal(obj, 8, 400, 7).unwrap();
            assert_eq!(r.trajectory.len(), 400);
            assert!(r.trajectory.windows(2).all(|w| w[1] <= w[0]));
            assert!(r.ratio > 0.0 && r.ratio <= r.trajectory[0]);
            assert_eq!(r.best.len(), 8);
            assert_eq!(obj.ratio(&r.best), Some(r.ratio));
            assert!(r.best.max().unwrap() <= &Rational::from(256));
            if obj != Objective::ThmSp {
                assert!(is_convex(&r.best));
            }
        }
        let a = search_extremal(Objective::ThmCsum, 8, 50, 1).unwrap();
        let b = search_extremal(Objective::ThmCsum, 8, 50, 1).unwrap();
        assert_eq!((a.best, a.ratio), (b.best, b.ratio));
    }

    #[test]
    fn small_n_rejected() {
        assert!(search_extremal(Objective::ThmSp, 3, 10, 0).is_err());
        assert!(search_extremal(Objective::ThmSp, 8, 0, 0).is_err());
    }
}
