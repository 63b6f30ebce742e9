//! Named checks. Assert-type checks evaluate one inequality with an explicit
//! constant; ratio reports measure `lhs / rhs` for claims whose implied
//! constant is unknown and never fail.
//!
//! A check id is `name` or `name:key=value;key=value`, e.g. `holder_s:s=12/7`
//! or `diff_proj:part=triples;c=1/5`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::constructions::{
    diff_triple_fibers, dyadic_pigeonhole, popular_diffs, popular_mass, popular_sums, refine_to_b,
    rich_diff_elements, rich_sum_elements, triple_count_diff, triple_count_sum, StopReason,
    CUBIC_BUDGET, REFINE_EXPONENT,
};
use crate::error::{Error, Result};
use crate::family::FamilyKind;
use crate::incidence::{ceil_sqrt, line_grid, measure_lines};
use crate::rational::Rational;
use crate::rep::{
    energy_of, pair_set_size, projection_count_within, rep_fn, EnergyValue, Op, PROJECTION_BUDGET,
};
use crate::sets::{intersect_dilate, is_convex, FiniteSet};

pub type Params = BTreeMap<String, String>;

/// Relative slack for inequalities involving fractional-power energies.
pub const FLOAT_SLACK: f64 = 1e-9;

/// Default size limit for enumerating triple fibers (memory grows like `|A|³`).
pub const FIBER_BUDGET: usize = 120;

/// Default size limit for `rs_prop`.
pub const RS_PROP_BUDGET: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    RatioReport,
    Skipped(String),
}

impl Verdict {
    pub fn is_fail(&self) -> bool {
        *self == Verdict::Fail
    }

    pub fn is_skipped(&self) -> bool {
        matches!(self, Verdict::Skipped(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => f.write_str("pass"),
            Verdict::Fail => f.write_str("fail"),
            Verdict::RatioReport => f.write_str("ratio-report"),
            Verdict::Skipped(r) => write!(f, "skipped({r})"),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub check_id: String,
    pub inputs_desc: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub verdict: Verdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Assert,
    Ratio,
}

struct Entry {
    name: &'static str,
    kind: Kind,
    params: &'static [&'static str],
}

const REGISTRY: &[Entry] = &[
    Entry { name: "cs_energy", kind: Kind::Assert, params: &["op", "partner"] },
    Entry { name: "cs_proj", kind: Kind::Assert, params: &["map", "partner", "budget"] },
    Entry { name: "popular_mass", kind: Kind::Assert, params: &["c"] },
    Entry { name: "rich_size", kind: Kind::Assert, params: &["c"] },
    Entry { name: "diff_proj", kind: Kind::Assert, params: &["part", "c", "budget"] },
    Entry { name: "sum_proj", kind: Kind::Assert, params: &["part", "c", "budget"] },
    Entry { name: "e127_trivial", kind: Kind::Assert, params: &[] },
    Entry { name: "holder_s", kind: Kind::Assert, params: &["s", "partner"] },
    Entry { name: "e2_interp", kind: Kind::Assert, params: &[] },
    Entry { name: "e32_interp", kind: Kind::Assert, params: &[] },
    Entry { name: "e2_lower", kind: Kind::Assert, params: &[] },
    Entry { name: "convex_e3", kind: Kind::Ratio, params: &["partner"] },
    Entry { name: "convex_es", kind: Kind::Ratio, params: &["s", "partner"] },
    Entry { name: "prop_ea", kind: Kind::Ratio, params: &[] },
    Entry { name: "rs_prop", kind: Kind::Ratio, params: &["stat", "budget"] },
    Entry { name: "lemma6_e3", kind: Kind::Ratio, params: &["partner"] },
    Entry { name: "thm_sp", kind: Kind::Ratio, params: &[] },
    Entry { name: "thm_csum", kind: Kind::Ratio, params: &[] },
    Entry { name: "thm_cdiff", kind: Kind::Ratio, params: &[] },
    Entry { name: "st_measure", kind: Kind::Ratio, params: &["slopes", "intercepts", "partner"] },
];

/// Assert-type checks run by a bare `verify`.
pub const DEFAULT_SUITE: &[&str] = &[
    "cs_energy",
    "cs_energy:op=sum",
    "cs_proj",
    "popular_mass",
    "rich_size",
    "diff_proj",
    "sum_proj",
    "e127_trivial",
    "holder_s:s=3/2",
    "holder_s:s=12/7",
    "holder_s:s=12/5",
    "e2_interp",
    "e32_interp",
    "e2_lower",
];

/// Every registered check name with whether it is assert-type.
pub fn registry() -> impl Iterator<Item = (&'static str, bool)> {
    REGISTRY.iter().map(|e| (e.name, e.kind == Kind::Assert))
}

fn entry(name: &str) -> Result<&'static Entry> {
    REGISTRY
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownCheck(name.to_string()))
}

/// A parsed check id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckSpec {
    pub name: String,
    pub params: Params,
}

impl CheckSpec {
    pub fn is_assert(&self) -> bool {
        entry(&self.name).map(|e| e.kind == Kind::Assert).unwrap_or(false)
    }

    pub fn accepts(&self, key: &str) -> bool {
        entry(&self.name).is_ok_and(|e| e.params.contains(&key))
    }

    fn validate(&self) -> Result<()> {
        let e = entry(&self.name)?;
        for k in self.params.keys() {
            if !e.params.contains(&k.as_str()) {
                return Err(Error::InvalidParam(format!("`{}` takes no parameter `{k}`", self.name)));
            }
        }
        Ok(())
    }
}

impl FromStr for CheckSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, rest) = match s.split_once(':') {
            Some((n, r)) => (n.trim(), Some(r)),
            None => (s, None),
        };
        let mut params = Params::new();
        for kv in rest.into_iter().flat_map(|r| r.split(';')) {
            let kv = kv.trim();
            if kv.is_empty() {
                continue;
            }
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::InvalidParam(format!("expected key=value, got `{kv}`")))?;
            params.insert(k.trim().to_string(), v.trim().to_string());
        }
        let spec = CheckSpec {
            name: name.to_string(),
            params,
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for CheckSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        for (i, (k, v)) in self.params.iter().enumerate() {
            write!(f, "{}{k}={v}", if i == 0 { ':' } else { ';' })?;
        }
        Ok(())
    }
}

/// Splits on commas outside parentheses, so `a:partner=gp(1,2),b` has two items.
pub fn split_list(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let (mut depth, mut cur) = (0i32, String::new());
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    out.push(cur);
    out.into_iter().map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect()
}

pub fn parse_check_list(s: &str) -> Result<Vec<CheckSpec>> {
    split_list(s).iter().map(|c| c.parse()).collect()
}

pub fn default_suite() -> Vec<CheckSpec> {
    DEFAULT_SUITE.iter().map(|s| s.parse().expect("default suite is valid")).collect()
}

/// Parses `check_id`, merges `params` over its inline parameters and evaluates it.
pub fn run_check(
    check_id: &str,
    a: &FiniteSet,
    b: Option<&FiniteSet>,
    params: Option<&Params>,
) -> Result<CheckResult> {
    let mut spec: CheckSpec = check_id.parse()?;
    if let Some(p) = params {
        spec.params.extend(p.iter().map(|(k, v)| (k.clone(), v.clone())));
        spec.validate()?;
    }
    evaluate(&spec, a, b)
}

/// Evaluates a parsed check. Only malformed parameters are errors; budget,
/// domain and precondition problems become skipped verdicts.
pub fn evaluate(spec: &CheckSpec, a: &FiniteSet, b: Option<&FiniteSet>) -> Result<CheckResult> {
    spec.validate()?;
    let partner;
    let b = match spec.params.get("partner") {
        Some(fam) => {
            let kind: FamilyKind = fam.parse()?;
            partner = kind.generate(a.len())?;
            &partner
        }
        None => b.unwrap_or(a),
    };
    let ctx = Ctx { spec, a, b };
    let mut desc = format!("|A|={}", a.len());
    if !std::ptr::eq(a, b) {
        desc.push_str(&format!(",|B|={}", b.len()));
    }
    let out = match ctx.run(&mut desc) {
        Ok(o) => o,
        Err(Error::InvalidParam(m)) => return Err(Error::InvalidParam(m)),
        Err(e) => Outcome::skip(skip_reason(&e)),
    };
    Ok(out.finish(spec.to_string(), desc))
}

fn skip_reason(e: &Error) -> String {
    match e {
        Error::Budget { .. } => "budget".into(),
        Error::DivisionDomain => "division-by-zero".into(),
        Error::Domain(m) if m == NOT_CONVEX => m.clone(),
        Error::Domain(m) => format!("domain: {m}"),
        other => other.to_string(),
    }
}

struct Outcome {
    lhs: f64,
    rhs: f64,
    ratio: Option<f64>,
    verdict: Verdict,
}

impl Outcome {
    fn skip(reason: impl Into<String>) -> Self {
        Outcome {
            lhs: f64::NAN,
            rhs: f64::NAN,
            ratio: None,
            verdict: Verdict::Skipped(reason.into()),
        }
    }

    /// Exact `lhs ≤ rhs`.
    fn exact(lhs: BigRational, rhs: BigRational) -> Self {
        let verdict = if lhs <= rhs { Verdict::Pass } else { Verdict::Fail };
        Outcome {
            lhs: to_f64(&lhs),
            rhs: to_f64(&rhs),
            ratio: None,
            verdict,
        }
    }

    /// `lhs ≤ rhs` up to [`FLOAT_SLACK`].
    fn approx(lhs: f64, rhs: f64) -> Self {
        let ok = lhs <= rhs + FLOAT_SLACK * rhs.abs();
        Outcome {
            lhs,
            rhs,
            ratio: None,
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        }
    }

    fn report(lhs: f64, rhs: f64) -> Self {
        Outcome {
            lhs,
            rhs,
            ratio: None,
            verdict: Verdict::RatioReport,
        }
    }

    fn finish(self, check_id: String, inputs_desc: String) -> CheckResult {
        let ratio = self.ratio.unwrap_or_else(|| {
            if self.rhs > 0.0 {
                self.lhs / self.rhs
            } else {
                f64::NAN
            }
        });
        CheckResult {
            check_id,
            inputs_desc,
            lhs: self.lhs,
            rhs: self.rhs,
            ratio,
            verdict: self.verdict,
        }
    }
}

fn to_f64(r: &BigRational) -> f64 {
    Rational::from(r.clone()).to_f64()
}

fn int(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

fn exact_energy(e: &EnergyValue) -> BigRational {
    let v: &BigUint = e.exact.as_ref().expect("integer exponent");
    BigRational::from_integer(BigInt::from(v.clone()))
}

struct Ctx<'a> {
    spec: &'a CheckSpec,
    a: &'a FiniteSet,
    b: &'a FiniteSet,
}

impl Ctx<'_> {
    fn param(&self, key: &str) -> Option<&str> {
        self.spec.params.get(key).map(String::as_str)
    }

    fn rational(&self, key: &str, default: Rational) -> Result<BigRational> {
        match self.param(key) {
            None => Ok(default.as_big().clone()),
            Some(v) => v
                .parse::<Rational>()
                .map(|r| r.as_big().clone())
                .map_err(|_| Error::InvalidParam(format!("`{key}` must be a rational, got `{v}`"))),
        }
    }

    fn real(&self, key: &str, default: f64) -> Result<f64> {
        match self.param(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<Rational>()
                .map(|r| r.to_f64())
                .or_else(|_| v.parse::<f64>())
                .map_err(|_| Error::InvalidParam(format!("`{key}` must be a number, got `{v}`"))),
        }
    }

    fn size(&self, key: &str, default: usize) -> Result<usize> {
        match self.param(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::InvalidParam(format!("`{key}` must be a nonnegative integer, got `{v}`"))),
        }
    }

    fn choice<'s>(&'s self, key: &str, options: &[&'s str]) -> Result<&'s str> {
        let v = self.param(key).unwrap_or(options[0]);
        options
            .iter()
            .copied()
            .find(|o| *o == v)
            .ok_or_else(|| Error::InvalidParam(format!("`{key}` must be one of {options:?}, got `{v}`")))
    }

    fn run(&self, desc: &mut String) -> Result<Outcome> {
        let (a, b) = (self.a, self.b);
        let n = a.len();
        match self.spec.name.as_str() {
            "cs_energy" => {
                let op: Op = self.choice("op", &["diff", "sum", "prod", "ratio"])?.parse()?;
                cauchy_schwarz(a, b, op)
            }
            "cs_proj" => match self.choice("map", &["diff", "sum", "prod", "ratio", "triple"])? {
                "triple" => {
                    let f = diff_triple_fibers(a, self.size("budget", FIBER_BUDGET)?)?;
                    desc.push_str(&format!(",|X|={},|Y|={}", f.triples, f.image_size));
                    Ok(Outcome::exact(
                        int(f.triples) * int(f.triples),
                        int(f.image_size) * int(BigInt::from(f.collisions)),
                    ))
                }
                op => cauchy_schwarz(a, b, op.parse()?),
            },
            "popular_mass" => {
                let c = self.rational("c", Rational::new(10, 11))?;
                let p = popular_diffs(a);
                Ok(Outcome::exact(c * int(n * n), int(popular_mass(a, &p))))
            }
            "rich_size" => {
                let c = self.rational("c", Rational::new(1, 2))?;
                let r = rich_diff_elements(a, &popular_diffs(a));
                let (lhs, rhs) = (c * int(n), int(r.len()));
                let mut o = Outcome::exact(lhs.clone(), rhs.clone());
                if lhs == rhs {
                    o.verdict = Verdict::Fail;
                }
                Ok(o)
            }
            "diff_proj" => self.diff_proj(desc),
            "sum_proj" => self.sum_proj(desc),
            "e127_trivial" => {
                let e = energy_of(a, a, Op::Diff, REFINE_EXPONENT)?.approx;
                let (n2, n3) = ((n * n) as f64, (n * n * n) as f64);
                let mut o = Outcome::approx(e, n3);
                if n2 > e + FLOAT_SLACK * e {
                    o.verdict = Verdict::Fail;
                }
                Ok(o)
            }
            "holder_s" => {
                let s = self.real("s", 1.5)?;
                if !(s > 1.0 && s < 3.0) {
                    return Err(Error::InvalidParam(format!("holder_s needs s in (1,3), got {s}")));
                }
                let es = energy_of(a, b, Op::Diff, s)?.approx;
                let e3 = energy_of(a, b, Op::Diff, 3.0)?.approx;
                let ab = (a.len() * b.len()) as f64;
                Ok(Outcome::approx(es, e3.powf((s - 1.0) / 2.0) * ab.powf((3.0 - s) / 2.0)))
            }
            "e2_interp" => {
                let e2 = energy_of(a, a, Op::Diff, 2.0)?.approx;
                let e127 = energy_of(a, a, Op::Diff, REFINE_EXPONENT)?.approx;
                let e3 = energy_of(a, a, Op::Diff, 3.0)?.approx;
                Ok(Outcome::approx(e2, e127.powf(7.0 / 9.0) * e3.powf(2.0 / 9.0)))
            }
            "e32_interp" => {
                let e32 = energy_of(a, a, Op::Diff, 1.5)?.approx;
                let e127 = energy_of(a, a, Op::Diff, REFINE_EXPONENT)?.approx;
                Ok(Outcome::approx(
                    e32.powf(2.0 / 3.0),
                    (n as f64).powf(0.4) * e127.powf(7.0 / 15.0),
                ))
            }
            "e2_lower" => {
                let e2 = exact_energy(&energy_of(a, a, Op::Diff, 2.0)?);
                let sums = pair_set_size(a, a, Op::Sum)?;
                Ok(Outcome::exact(int(n).pow(4), int(sums) * e2))
            }
            "convex_e3" => {
                require_convex(a)?;
                let e3 = energy_of(a, b, Op::Diff, 3.0)?.approx;
                Ok(Outcome::report(e3, (a.len() * b.len() * b.len()) as f64))
            }
            "convex_es" => {
                require_convex(a)?;
                let s = self.real("s", 1.5)?;
                if s < 1.0 {
                    return Err(Error::InvalidParam(format!("convex_es needs s >= 1, got {s}")));
                }
                let es = energy_of(a, b, Op::Diff, s)?.approx;
                Ok(Outcome::report(es, a.len() as f64 * (b.len() as f64).powf((s + 1.0) / 2.0)))
            }
            "prop_ea" => {
                require_convex(a)?;
                let e = energy_of(a, a, Op::Diff, 2.4)?.approx;
                let d = pair_set_size(a, a, Op::Diff)? as f64;
                Ok(Outcome::report(e, (n as f64).powf(38.0 / 15.0) * d.powf(4.0 / 45.0)))
            }
            "rs_prop" => self.rs_prop(desc),
            "lemma6_e3" => {
                let e3 = energy_of(a, b, Op::Diff, 3.0)?.approx;
                let prods = pair_set_size(a, a, Op::Prod)? as f64;
                let sums = pair_set_size(a, a, Op::Sum)? as f64;
                let ln_rhs = 2.0 * (b.len() as f64).ln() + 17.5 * prods.ln() + 24.0 * sums.ln()
                    - 54.0 * (n as f64).ln();
                let mut o = Outcome::report(e3, ln_rhs.exp());
                o.ratio = Some((e3.ln() - ln_rhs).exp());
                Ok(o)
            }
            "thm_sp" | "thm_csum" | "thm_cdiff" => {
                let (lhs, rhs) = theorem_sides(&self.spec.name, a)?;
                Ok(Outcome::report(lhs, rhs))
            }
            "st_measure" => {
                let slopes = self.size("slopes", ceil_sqrt(n as u64) as usize)?;
                let intercepts = self.size("intercepts", n)?;
                let lines = line_grid(slopes as u64, intercepts as u64);
                if lines.is_empty() || a.is_empty() || b.is_empty() {
                    return Err(Error::Domain("no points or no lines".into()));
                }
                let rep = measure_lines(a, b, &lines)?;
                desc.push_str(&format!(",|L|={}", rep.lines));
                let (p, l) = (rep.points as f64, rep.lines as f64);
                let mut o = Outcome::report(rep.incidences as f64, (p * l).powf(2.0 / 3.0) + l);
                o.ratio = Some(rep.ratio);
                Ok(o)
            }
            other => Err(Error::UnknownCheck(other.to_string())),
        }
    }

    fn diff_proj(&self, desc: &mut String) -> Result<Outcome> {
        let a = self.a;
        let n = a.len();
        match self.choice("part", &["full", "triples", "projection"])? {
            "full" => {
                let c = self.rational("c", Rational::new(9, 484))?;
                let (e3, proj) = diff_projection_side(a)?;
                Ok(Outcome::exact(c * int(n).pow(6), e3 * int(proj)))
            }
            "triples" => {
                let c = self.rational("c", Rational::new(3, 22))?;
                let t = triple_count_diff(a, self.size("budget", CUBIC_BUDGET)?)?;
                Ok(Outcome::exact(c * int(n).pow(3), int(t)))
            }
            _ => {
                let t = triple_count_diff(a, self.size("budget", CUBIC_BUDGET)?)?;
                desc.push_str(&format!(",|S|={t}"));
                let (e3, proj) = diff_projection_side(a)?;
                Ok(Outcome::exact(int(t) * int(t), e3 * int(proj)))
            }
        }
    }

    fn sum_proj(&self, desc: &mut String) -> Result<Outcome> {
        let a = self.a;
        let n = a.len();
        let part = self.choice("part", &["full", "triples", "projection"])?;
        let c = self.rational("c", Rational::new(1, 2))?;
        let budget = self.size("budget", CUBIC_BUDGET)?;
        if n < 3 {
            return Err(Error::Domain("|A| < 3".into()));
        }
        let (b, trace) = refine_to_b(a)?;
        if trace.stop_reason != StopReason::EnergyCriterionMet {
            return Ok(Outcome::skip(format!("guard: {}", trace.stop_reason)));
        }
        let popular = popular_sums(&b, n)?;
        let rich = rich_sum_elements(&b, &popular);
        let class = dyadic_pigeonhole(&rep_fn(&rich, &rich, Op::Diff)?, REFINE_EXPONENT)?;
        let (delta, pd) = (class.level, class.members.len());
        desc.push_str(&format!(",|B|={},Δ={delta},|PΔ|={pd}", b.len()));
        let pairs_bound = c * int(delta) * int(pd) * int(b.len());
        let projection = || -> Result<BigRational> {
            let e3 = exact_energy(&energy_of(&b, &b, Op::Diff, 3.0)?);
            let proj = projection_count_within(&popular, &class.members, PROJECTION_BUDGET)?;
            Ok(e3 * int(proj))
        };
        match part {
            "full" => Ok(Outcome::exact(&pairs_bound * &pairs_bound, projection()?)),
            "triples" => {
                let t = triple_count_sum(&b, n, budget)?;
                Ok(Outcome::exact(pairs_bound, int(t.count)))
            }
            _ => {
                let t = triple_count_sum(&b, n, budget)?;
                Ok(Outcome::exact(int(t.count) * int(t.count), projection()?))
            }
        }
    }

    fn rs_prop(&self, desc: &mut String) -> Result<Outcome> {
        let a = self.a;
        let n = a.len();
        let stat = self.choice("stat", &["max", "q64"])?;
        let limit = self.size("budget", RS_PROP_BUDGET)?;
        if n > limit {
            return Err(Error::Budget {
                what: "rs_prop",
                needed: n as u128,
                limit: limit as u128,
            });
        }
        if a.is_empty() || !a.is_positive() {
            return Ok(Outcome::skip("nonpositive"));
        }
        let class = dyadic_pigeonhole(&rep_fn(a, a, Op::Ratio)?, 2.0)?;
        let mut sizes = Vec::with_capacity(class.members.len());
        for lambda in &class.members {
            let a_lambda = intersect_dilate(a, lambda)?;
            sizes.push(pair_set_size(a, &a_lambda, Op::Prod)?);
        }
        sizes.sort_unstable_by(|x, y| y.cmp(x));
        let s = sizes.len();
        let value = match stat {
            "max" => sizes[0],
            _ => sizes[s.div_ceil(64) - 1],
        };
        desc.push_str(&format!(",|S|={s}"));
        let prods = pair_set_size(a, a, Op::Prod)? as f64;
        let sums = pair_set_size(a, a, Op::Sum)? as f64;
        let ln_bound = 18.0 * (n as f64).ln() - 0.5 * (s as f64).ln() - 4.0 * prods.ln() - 8.0 * sums.ln();
        let mut o = Outcome::report(value as f64, ln_bound.exp());
        o.ratio = Some(((value as f64).ln() - ln_bound).exp());
        Ok(o)
    }
}

const NOT_CONVEX: &str = "not-convex";

fn require_convex(a: &FiniteSet) -> Result<()> {
    if is_convex(a) {
        Ok(())
    } else {
        Err(Error::Domain(NOT_CONVEX.into()))
    }
}

/// `(|A||B|)² ≤ |A ∘ B| · E(A, B)`.
fn cauchy_schwarz(a: &FiniteSet, b: &FiniteSet, op: Op) -> Result<Outcome> {
    let size = pair_set_size(a, b, op)?;
    let e = exact_energy(&energy_of(a, b, op, 2.0)?);
    let ab = int(a.len() * b.len());
    Ok(Outcome::exact(&ab * &ab, int(size) * e))
}

/// `(E₃(A), projection_count(P, P))` for the popular differences `P`.
fn diff_projection_side(a: &FiniteSet) -> Result<(BigRational, u64)> {
    let e3 = exact_energy(&energy_of(a, a, Op::Diff, 3.0)?);
    let p = popular_diffs(a);
    Ok((e3, projection_count_within(&p, &p, PROJECTION_BUDGET)?))
}

/// Exponent `e` in the theorem's `|A|^e` for `thm_sp`, `thm_csum`, `thm_cdiff`.
pub fn theorem_exponent(name: &str) -> Option<f64> {
    match name {
        "thm_sp" => Some(4.0 / 3.0 + 10.0 / 4407.0),
        "thm_csum" => Some(46.0 / 29.0),
        "thm_cdiff" => Some(8.0 / 5.0 + 1.0 / 3440.0),
        _ => None,
    }
}

/// `(lhs, rhs)` of a theorem ratio; convex objectives require a convex set.
pub fn theorem_sides(name: &str, a: &FiniteSet) -> Result<(f64, f64)> {
    let e = theorem_exponent(name).ok_or_else(|| Error::UnknownCheck(name.to_string()))?;
    let lhs = match name {
        "thm_sp" => pair_set_size(a, a, Op::Sum)?.max(pair_set_size(a, a, Op::Prod)?),
        "thm_csum" => {
            require_convex(a)?;
            pair_set_size(a, a, Op::Sum)?
        }
        _ => {
            require_convex(a)?;
            pair_set_size(a, a, Op::Diff)?
        }
    };
    Ok((lhs as f64, (a.len() as f64).powf(e)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> FiniteSet {
        FiniteSet::from_integers(v.iter().copied())
    }

    fn check(id: &str, a: &FiniteSet) -> CheckResult {
        run_check(id, a, None, None).unwrap()
    }

    #[test]
    fn registry_examples() {
        let a = ints(&[1, 2, 3]);
        let d = check("diff_proj", &a);
        assert_eq!(d.verdict, Verdict::Pass);
        assert!((d.lhs - 9.0 * 729.0 / 484.0).abs() < 1e-9);
        assert_eq!(d.rhs, 855.0);

        let c = check("cs_energy", &a);
        assert_eq!((c.lhs, c.rhs, c.verdict), (81.0, 95.0, Verdict::Pass));

        let e = check("e127_trivial", &ints(&[7]));
        assert_eq!((e.lhs, e.rhs, e.verdict), (1.0, 1.0, Verdict::Pass));

        let gp = FamilyKind::gp(1, 2).generate(4).unwrap();
        let t = check("thm_sp", &gp);
        assert_eq!(t.verdict, Verdict::RatioReport);
        assert_eq!(t.lhs, 10.0);
        assert!((t.ratio - 1.56995).abs() < 1e-4);
    }

    #[test]
    fn ids_and_params() {
        let a = ints(&[1, 2, 3]);
        assert!(matches!(run_check("nope", &a, None, None), Err(Error::UnknownCheck(_))));
        assert!(matches!(run_check("holder_s:t=2", &a, None, None), Err(Error::InvalidParam(_))));
        assert!(matches!(run_check("holder_s:s=3", &a, None, None), Err(Error::InvalidParam(_))));
        let spec: CheckSpec = "diff_proj:part=triples;c=1/5".parse().unwrap();
        assert_eq!(spec.to_string(), "diff_proj:c=1/5;part=triples");
        let mut p = Params::new();
        p.insert("c".into(), "1000".into());
        assert_eq!(run_check("diff_proj", &a, None, Some(&p)).unwrap().verdict, Verdict::Fail);
        assert_eq!(default_suite().len(), DEFAULT_SUITE.len());
    }

    #[test]
    fn preconditions_skip() {
        let a = ints(&[1, 2, 3]);
        assert_eq!(check("thm_csum", &a).verdict, Verdict::Skipped("not-convex".into()));
        assert_eq!(check("thm_csum", &ints(&[1, 4, 9])).verdict, Verdict::RatioReport);
        assert!(check("sum_proj", &ints(&[1, 2])).verdict.is_skipped());
        assert!(check("cs_energy:op=ratio", &ints(&[0, 1])).verdict.is_skipped());
        let big = FamilyKind::ap(1, 1).generate(30).unwrap();
        assert!(check("diff_proj:part=triples;budget=10", &big).verdict.is_skipped());
        assert!(check("rs_prop", &ints(&[-1, 2, 3])).verdict.is_skipped());
    }

    #[test]
    fn rich_size_is_strict() {
        let a = ints(&[1, 2, 3, 4]);
        assert_eq!(check("rich_size", &a).verdict, Verdict::Pass);
        // c·|A| equal to |R_A| must fail
        let r = check("rich_size", &a).rhs;
        let id = format!("rich_size:c={}/4", r);
        assert_eq!(check(&id, &a).verdict, Verdict::Fail);
    }

    #[test]
    fn every_check_runs_on_small_sets() {
        let sets = [
            ints(&[5]),
            ints(&[1, 3]),
            ints(&[-3, -1, 0, 1, 3]),
            ints(&[1, 4, 9, 16, 25, 36]),
            FamilyKind::gp(1, 3).generate(7).unwrap(),
            [Rational::new(1, 2), Rational::new(2, 3), Rational::from(5)].into_iter().collect(),
        ];
        for a in &sets {
            for (name, is_assert) in registry() {
                let r = check(name, a);
                if is_assert {
                    assert!(!r.verdict.is_fail(), "{name} failed on {a:?}: {r:?}");
                } else {
                    assert_ne!(r.verdict, Verdict::Fail);
                }
            }
            for part in ["triples", "projection"] {
                for id in [format!("diff_proj:part={part}"), format!("sum_proj:part={part}")] {
                    assert!(!check(&id, a).verdict.is_fail(), "{id} on {a:?}");
                }
            }
            assert!(!check("cs_proj:map=triple", a).verdict.is_fail());
        }
    }

    #[test]
    fn list_splitting() {
        assert_eq!(split_list("ap(1,1), gp(1,2),convex(2)"), ["ap(1,1)", "gp(1,2)", "convex(2)"]);
        let c = parse_check_list("cs_energy:partner=random(n^2,5),thm_sp").unwrap();
        assert_eq!(c.len(), 2);
        assert!(c[0].accepts("op") && !c[1].accepts("op"));
        assert!(split_list(" ").is_empty());
    }

    #[test]
    fn partner_family() {
        let a = FamilyKind::convex(2).generate(20).unwrap();
        let r = check("convex_e3:partner=random(n^2,5)", &a);
        assert_eq!(r.verdict, Verdict::RatioReport);
        assert_eq!(r.inputs_desc, "|A|=20,|B|=20");
    }
}
