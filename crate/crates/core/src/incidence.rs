//! Exact incidence counts between Cartesian point sets `A × B` and either
//! non-horizontal lines or translates of one convex curve, plus the measured
//! Szemerédi–Trotter ratio.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::scaled::common_denom;
use crate::sets::{is_convex, FiniteSet};

/// The line `y = slope·x + intercept` with finite nonzero slope.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Line {
    slope: Rational,
    intercept: Rational,
}

impl Line {
    pub fn new(slope: Rational, intercept: Rational) -> Result<Self> {
        if slope.is_zero() {
            return Err(Error::Domain("line slope must be nonzero".into()));
        }
        Ok(Line { slope, intercept })
    }

    pub fn slope(&self) -> &Rational {
        &self.slope
    }

    pub fn intercept(&self) -> &Rational {
        &self.intercept
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        &(&self.slope * x) + &self.intercept
    }
}

impl fmt::Debug for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y = {}x + {}", self.slope, self.intercept)
    }
}

/// Bit length above which the integer kernel switches to `BigInt`.
const SMALL_BITS: u64 = 40;

fn fits(x: &BigInt) -> bool {
    x.bits() <= SMALL_BITS
}

/// Integer form of a line over the common denominator `L` of the points:
/// `β = (num·α + off) / den` with `α, β` the scaled coordinates.
struct ScaledLine {
    num: BigInt,
    off: BigInt,
    den: BigInt,
}

impl ScaledLine {
    fn new(line: &Line, l: &BigInt) -> Self {
        // slope p/q, intercept u/v:  q·v·β = p·v·α + u·q·L
        let (p, q) = (line.slope.numer(), line.slope.denom());
        let (u, v) = (line.intercept.numer(), line.intercept.denom());
        ScaledLine {
            num: p * v,
            off: u * q * l,
            den: q * v,
        }
    }
}

/// `#{(a, b, ℓ) : a ∈ A, b ∈ B, b = ℓ(a)}`.
pub fn count_incidences_lines(a: &FiniteSet, b: &FiniteSet, lines: &[Line]) -> Result<u64> {
    if lines.iter().any(|l| l.slope.is_zero()) {
        return Err(Error::Domain("line slope must be nonzero".into()));
    }
    if a.is_empty() || b.is_empty() || lines.is_empty() {
        return Ok(0);
    }
    let l = common_denom([a.as_slice(), b.as_slice()]);
    let scale = |r: &Rational| r.numer() * (&l / r.denom());
    let alphas: Vec<BigInt> = a.iter().map(scale).collect();
    let betas: Vec<BigInt> = b.iter().map(scale).collect();
    let scaled: Vec<ScaledLine> = lines.iter().map(|ln| ScaledLine::new(ln, &l)).collect();

    let small = alphas.iter().chain(&betas).all(fits)
        && scaled.iter().all(|s| fits(&s.num) && fits(&s.off) && fits(&s.den));
    if small {
        let to = |x: &BigInt| x.to_i128().expect("fits in 40 bits");
        let alphas: Vec<i128> = alphas.iter().map(to).collect();
        let bset: FxHashSet<i128> = betas.iter().map(to).collect();
        Ok(scaled
            .par_iter()
            .map(|s| {
                let (num, off, den) = (to(&s.num), to(&s.off), to(&s.den));
                alphas
                    .iter()
                    .filter(|&&x| {
                        let t = num * x + off;
                        t % den == 0 && bset.contains(&(t / den))
                    })
                    .count() as u64
            })
            .sum())
    } else {
        let bset: FxHashSet<BigInt> = betas.into_iter().collect();
        Ok(scaled
            .par_iter()
            .map(|s| {
                alphas
                    .iter()
                    .filter(|x| {
                        let t = &s.num * *x + &s.off;
                        let (q, r) = num_integer::Integer::div_rem(&t, &s.den);
                        r.is_zero() && bset.contains(&q)
                    })
                    .count() as u64
            })
            .sum())
    }
}

/// A convex set read as the table `f(j) = a_j`, `j = 1..=|A|`.
#[derive(Clone, Debug)]
pub struct ConvexCurve {
    table: FiniteSet,
}

impl ConvexCurve {
    pub fn new(table: FiniteSet) -> Result<Self> {
        if !is_convex(&table) {
            return Err(Error::Domain("curve table is not convex".into()));
        }
        Ok(ConvexCurve { table })
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// `f(j)` for `j ∈ [1, len]`, `None` outside the table.
    pub fn eval(&self, j: i64) -> Option<&Rational> {
        if j < 1 {
            return None;
        }
        self.table.as_slice().get(j as usize - 1)
    }
}

/// The curve `y = f(x − shift) − offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveTranslate {
    pub shift: i64,
    pub offset: Rational,
}

/// `#{(x, b, t) : x ∈ [1, range], b ∈ B, f(x − t.shift) − t.offset = b}`.
pub fn count_incidences_curve(
    curve: &ConvexCurve,
    range: usize,
    b: &FiniteSet,
    translates: &[CurveTranslate],
) -> u64 {
    translates
        .par_iter()
        .map(|t| {
            (1..=range as i64)
                .filter_map(|x| curve.eval(x - t.shift))
                .filter(|y| b.contains(&(*y - &t.offset)))
                .count() as u64
        })
        .sum()
}

/// `incidences / ((points·lines)^{2/3} + lines)`.
pub fn st_ratio(incidences: u64, points: u64, lines: u64) -> Result<f64> {
    if points == 0 || lines == 0 {
        return Err(Error::Domain("st_ratio needs at least one point and one line".into()));
    }
    let (p, l) = (points as f64, lines as f64);
    Ok(incidences as f64 / ((p * l).powf(2.0 / 3.0) + l))
}

/// Lines `y = m x + b` for `m ∈ [1, slopes]`, `b ∈ [1, intercepts]`.
pub fn line_grid(slopes: u64, intercepts: u64) -> Vec<Line> {
    let mut out = Vec::with_capacity((slopes * intercepts) as usize);
    for m in 1..=slopes as i64 {
        for c in 1..=intercepts as i64 {
            out.push(Line {
                slope: m.into(),
                intercept: c.into(),
            });
        }
    }
    out
}

/// Result of counting a point grid against a line family.
#[derive(Clone, Debug, PartialEq)]
pub struct IncidenceReport {
    pub incidences: u64,
    pub points: u64,
    pub lines: u64,
    pub ratio: f64,
}

pub fn measure_lines(a: &FiniteSet, b: &FiniteSet, lines: &[Line]) -> Result<IncidenceReport> {
    let incidences = count_incidences_lines(a, b, lines)?;
    let points = (a.len() * b.len()) as u64;
    let n_lines = lines.len() as u64;
    let ratio = if n_lines == 0 || points == 0 {
        0.0
    } else {
        st_ratio(incidences, points, n_lines)?
    };
    Ok(IncidenceReport {
        incidences,
        points,
        lines: n_lines,
        ratio,
    })
}

/// `[n] × [n]` against `{y = mx + b : m ∈ [⌈√n⌉], b ∈ [n]}`.
pub fn grid_measurement(n: u64) -> Result<IncidenceReport> {
    let grid = FiniteSet::from_integers(1..=n as i64);
    measure_lines(&grid, &grid, &line_grid(ceil_sqrt(n), n))
}

pub fn ceil_sqrt(n: u64) -> u64 {
    let mut s = (n as f64).sqrt() as u64;
    while s * s < n {
        s += 1;
    }
    while s > 0 && (s - 1) * (s - 1) >= n {
        s -= 1;
    }
    s
}

/// Parses `slope,intercept` rows; an optional non-numeric header row is skipped.
pub fn parse_line_file(text: &str) -> Result<Vec<Line>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line_no = rec.position().map_or(i + 1, |p| p.line() as usize);
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        if rec.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected 2 fields, found {}", rec.len()),
            });
        }
        let parse = |s: &str| s.parse::<Rational>();
        let (slope, intercept) = match (parse(&rec[0]), parse(&rec[1])) {
            (Ok(s), Ok(c)) => (s, c),
            (Err(e), _) | (_, Err(e)) => {
                if out.is_empty() && i == 0 {
                    continue;
                }
                return Err(Error::Parse {
                    line: line_no,
                    msg: e.to_string(),
                });
            }
        };
        if slope.is_zero() {
            return Err(Error::Parse {
                line: line_no,
                msg: "zero slope".into(),
            });
        }
        out.push(Line { slope, intercept });
    }
    Ok(out)
}

/// `slope,intercept` CSV with a header row.
pub fn lines_to_csv(lines: &[Line]) -> String {
    let mut s = String::from("slope,intercept\n");
    for l in lines {
        s.push_str(&format!("{},{}\n", l.slope, l.intercept));
    }
    s
}

/// Number of points of `A × B` on a line is at most `min(|A|, |B|)`.
pub fn trivial_line_bound(a: &FiniteSet, b: &FiniteSet, lines: usize) -> u64 {
    lines as u64 * a.len().min(b.len()) as u64
}
