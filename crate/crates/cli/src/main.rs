//! `sumlab` command-line front end.
//!
//! Exit codes: 0 ok, 1 an assert-type check failed, 2 usage error, 3 I/O error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use sumlab::constructions::{popular_diffs, rich_diff_elements};
use sumlab::incidence::{
    ceil_sqrt, count_incidences_curve, line_grid, measure_lines, parse_line_file, st_ratio, ConvexCurve,
    CurveTranslate,
};
use sumlab::verifier::scan::{format_float, results_to_csv, rows_to_text};
use sumlab::verifier::{
    default_suite, parse_check_list, rows_to_csv, rows_to_json, run_scan_with, search_extremal, split_list,
    write_atomic, CheckSpec, Objective, ScanConfig,
};
use sumlab::{energy_of, gen_family, is_convex, pair_set_size, Error, FamilyKind, FamilySpec, FiniteSet, Op, Rational};

#[derive(Parser)]
#[command(name = "sumlab", version, about = "Sum-product experiments on finite sets of rationals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a set from a family spec.
    Gen(Common),
    /// Pair-set sizes, energies and popular/rich set sizes of one set.
    Stats(Common),
    /// Run checks on one set; exit 1 if any assert-type check fails.
    Verify(VerifyArgs),
    /// Sweep checks over families and sizes.
    Scan(ScanArgs),
    /// Count point–line or point–curve incidences.
    Incidence(IncidenceArgs),
    /// Hill-climb for sets with small theorem ratios.
    Search(SearchArgs),
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Family spec such as `ap(1,1)`, `gp(1,2)`, `convex(2)`, `random(n^2,7)`; repeatable.
    #[arg(long)]
    family: Vec<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Set file, one rational per line.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// JSON file with the same keys as the flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Comma-separated check ids; defaults to the assert suite.
    #[arg(long)]
    checks: Option<String>,
    /// Second set for two-set checks.
    #[arg(long)]
    partner: Option<PathBuf>,
    /// Size limit for cubic-cost checks.
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    common: Common,
    /// Comma-separated sizes.
    #[arg(long)]
    sizes: Option<String>,
    #[arg(long)]
    checks: Option<String>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    budget: Option<usize>,
    /// Fill the elapsed_s column (makes output timing-dependent).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct IncidenceArgs {
    #[command(flatten)]
    common: Common,
    /// Points `[1,N] × [1,N]`.
    #[arg(long)]
    grid: Option<u64>,
    /// Second coordinate set (defaults to the first).
    #[arg(long)]
    input_b: Option<PathBuf>,
    /// Line file, CSV `slope,intercept`.
    #[arg(long)]
    lines: Option<PathBuf>,
    /// `S,I`: lines `y = mx + b`, `m ∈ [1,S]`, `b ∈ [1,I]`; `auto` uses `⌈√N⌉,N`.
    #[arg(long)]
    line_grid: Option<String>,
    /// Convex curve table file (element per line) for curve incidences.
    #[arg(long)]
    curve: Option<PathBuf>,
    /// Translates file, CSV `shift,offset`.
    #[arg(long)]
    translates: Option<PathBuf>,
    /// Argument range `[1, R]` for curve incidences.
    #[arg(long)]
    range: Option<usize>,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "thm_sp")]
    objective: String,
    /// Number of evaluated sets.
    #[arg(long)]
    budget: Option<usize>,
    /// CSV of the best ratio after each evaluation.
    #[arg(long)]
    trajectory: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Deserialize, Default)]
#[serde(untagged)]
enum OneOrMany {
    #[default]
    None,
    One(String),
    Many(Vec<String>),
}

#[derive(Deserialize, Default)]
#[serde(untagged)]
enum Sizes {
    #[default]
    None,
    Text(String),
    List(Vec<usize>),
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    family: OneOrMany,
    n: Option<usize>,
    #[serde(default)]
    sizes: Sizes,
    #[serde(default)]
    checks: OneOrMany,
    seed: Option<u64>,
    out: Option<PathBuf>,
    format: Option<Format>,
    jobs: Option<usize>,
    budget: Option<usize>,
    input: Option<PathBuf>,
}

/// Fully resolved settings: flags over config file over defaults.
struct Settings {
    families: Vec<String>,
    n: Option<usize>,
    input: Option<PathBuf>,
    sizes: Option<String>,
    checks: Option<String>,
    seed: u64,
    out: Option<PathBuf>,
    format: Format,
    jobs: usize,
    budget: Option<usize>,
}

struct Fail {
    code: u8,
    msg: String,
}

type CliResult<T> = Result<T, Fail>;

fn usage(msg: impl Into<String>) -> Fail {
    Fail { code: 2, msg: msg.into() }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) | Error::Csv(_) => 3,
            _ => 2,
        };
        Fail { code, msg: e.to_string() }
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Fail {
        code: 3,
        msg: format!("{}: {e}", path.display()),
    })
}

fn resolve(common: &Common, sizes: Option<&str>, checks: Option<&str>, jobs: Option<usize>, budget: Option<usize>) -> CliResult<Settings> {
    let cfg: ConfigFile = match &common.config {
        Some(p) => serde_json::from_str(&read(p)?).map_err(|e| usage(format!("config {}: {e}", p.display())))?,
        None => ConfigFile::default(),
    };
    let list = |v: OneOrMany| -> Option<String> {
        match v {
            OneOrMany::None => None,
            OneOrMany::One(s) => Some(s),
            OneOrMany::Many(v) => Some(v.join(",")),
        }
    };
    let families = if !common.family.is_empty() {
        common.family.iter().flat_map(|f| split_list(f)).collect()
    } else {
        list(cfg.family).map(|s| split_list(&s)).unwrap_or_default()
    };
    let cfg_sizes = match cfg.sizes {
        Sizes::None => None,
        Sizes::Text(s) => Some(s),
        Sizes::List(v) => Some(v.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")),
    };
    Ok(Settings {
        families,
        n: common.n.or(cfg.n),
        input: common.input.clone().or(cfg.input),
        sizes: sizes.map(str::to_string).or(cfg_sizes),
        checks: checks.map(str::to_string).or(list(cfg.checks)),
        seed: common.seed.or(cfg.seed).unwrap_or(0),
        out: common.out.clone().or(cfg.out),
        format: common.format.or(cfg.format).unwrap_or_default(),
        jobs: jobs.or(cfg.jobs).unwrap_or(1),
        budget: budget.or(cfg.budget),
    })
}

fn parse_family(s: &str, seed: u64) -> CliResult<FamilyKind> {
    let kind: FamilyKind = s.parse()?;
    Ok(kind.reseeded(seed))
}

/// The single set named by `--input` or `--family` + `--n`.
fn load_set(st: &Settings) -> CliResult<(FiniteSet, String)> {
    match (&st.input, st.families.as_slice()) {
        (Some(p), []) => Ok((FiniteSet::parse_lines(&read(p)?)?, p.display().to_string())),
        (None, [f]) => {
            let n = st.n.ok_or_else(|| usage("--family needs --n"))?;
            let kind = parse_family(f, st.seed)?;
            let set = gen_family(&FamilySpec::new(kind.clone(), n))?;
            Ok((set, format!("{kind} n={n}")))
        }
        (None, []) => Err(usage("supply exactly one of --input or --family")),
        _ => Err(usage("supply exactly one set: one --family or one --input")),
    }
}

/// Writes to `out` atomically, or to stdout when absent.
fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => write_atomic(p, text.as_bytes()).map_err(|e| Fail {
            code: 3,
            msg: format!("{}: {e}", p.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_gen(c: &Common) -> CliResult<u8> {
    let st = resolve(c, None, None, None, None)?;
    let (set, _) = load_set(&st)?;
    emit(st.out.as_deref(), &set.to_lines())?;
    Ok(0)
}

fn energy_value(a: &FiniteSet, op: Op, k: f64) -> CliResult<Value> {
    let e = energy_of(a, a, op, k)?;
    Ok(match e.exact {
        Some(x) => Value::String(x.to_string()),
        None => json!(e.approx),
    })
}

fn cmd_stats(c: &Common) -> CliResult<u8> {
    let st = resolve(c, None, None, None, None)?;
    let (a, desc) = load_set(&st)?;
    let na = Value::String("n/a(0∈A)".into());
    let mut m = Map::new();
    m.insert("set".into(), Value::String(desc));
    m.insert("|A|".into(), json!(a.len()));
    m.insert("|A+A|".into(), json!(pair_set_size(&a, &a, Op::Sum)?));
    m.insert("|A-A|".into(), json!(pair_set_size(&a, &a, Op::Diff)?));
    m.insert("|AA|".into(), json!(pair_set_size(&a, &a, Op::Prod)?));
    let zero = a.contains_zero();
    m.insert(
        "|A/A|".into(),
        if zero { na.clone() } else { json!(pair_set_size(&a, &a, Op::Ratio)?) },
    );
    for (label, k) in [("E_3/2", 1.5), ("E_12/7", 12.0 / 7.0), ("E_2", 2.0), ("E_12/5", 2.4), ("E_3", 3.0)] {
        m.insert(label.into(), energy_value(&a, Op::Diff, k)?);
    }
    m.insert("E^x_2".into(), if zero { na } else { energy_value(&a, Op::Ratio, 2.0)? });
    m.insert("is_convex".into(), json!(is_convex(&a)));
    let p = popular_diffs(&a);
    m.insert("|P|".into(), json!(p.len()));
    m.insert("|R_A|".into(), json!(rich_diff_elements(&a, &p).len()));
    let text = match st.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&Value::Object(m)).expect("json")),
        Format::Csv => {
            let mut s = String::from("stat,value\n");
            for (k, v) in &m {
                let v = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                s.push_str(&format!("{},{}\n", csv_field(k), csv_field(&v)));
            }
            s
        }
    };
    emit(st.out.as_deref(), &text)?;
    Ok(0)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn with_budget(mut checks: Vec<CheckSpec>, budget: Option<usize>) -> Vec<CheckSpec> {
    if let Some(b) = budget {
        for c in &mut checks {
            if c.accepts("budget") {
                c.params.entry("budget".into()).or_insert_with(|| b.to_string());
            }
        }
    }
    checks
}

fn cmd_verify(v: &VerifyArgs) -> CliResult<u8> {
    let st = resolve(&v.common, None, v.checks.as_deref(), None, v.budget)?;
    let (a, desc) = load_set(&st)?;
    let b = match &v.partner {
        Some(p) => Some(FiniteSet::parse_lines(&read(p)?)?),
        None => None,
    };
    let checks = match &st.checks {
        Some(s) => parse_check_list(s)?,
        None => default_suite(),
    };
    let checks = with_budget(checks, st.budget);
    let mut results = Vec::with_capacity(checks.len());
    for c in &checks {
        results.push(sumlab::verifier::evaluate(c, &a, b.as_ref())?);
    }
    let failed = results.iter().filter(|r| r.verdict.is_fail()).count();
    let report = match st.format {
        Format::Csv => results_to_csv(&results)?,
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&results).expect("json")),
    };
    match &st.out {
        Some(p) => {
            emit(Some(p), &report)?;
            for r in &results {
                println!(
                    "{:<28} lhs={} rhs={} {}",
                    r.check_id,
                    format_float(r.lhs),
                    format_float(r.rhs),
                    r.verdict
                );
            }
        }
        None => emit(None, &report)?,
    }
    eprintln!("{desc}: {} checks, {failed} failed", results.len());
    Ok(if failed > 0 { 1 } else { 0 })
}

fn parse_sizes(s: &str) -> CliResult<Vec<usize>> {
    split_list(s)
        .iter()
        .map(|t| t.parse().map_err(|_| usage(format!("bad size `{t}`"))))
        .collect()
}

fn cmd_scan(s: &ScanArgs) -> CliResult<u8> {
    let st = resolve(&s.common, s.sizes.as_deref(), s.checks.as_deref(), s.jobs, s.budget)?;
    if st.families.is_empty() {
        return Err(usage("scan needs at least one --family"));
    }
    let families = st
        .families
        .iter()
        .map(|f| f.parse::<FamilyKind>().map_err(Fail::from))
        .collect::<CliResult<Vec<_>>>()?;
    let sizes = match (&st.sizes, st.n) {
        (Some(s), _) => parse_sizes(s)?,
        (None, Some(n)) => vec![n],
        (None, None) => return Err(usage("scan needs --sizes")),
    };
    let checks = match &st.checks {
        Some(c) => parse_check_list(c)?,
        None => return Err(usage("scan needs --checks")),
    };
    if sizes.is_empty() || checks.is_empty() {
        return Err(usage("scan needs nonempty --sizes and --checks"));
    }
    let mut cfg = ScanConfig::new(families, sizes, with_budget(checks, st.budget), st.seed);
    cfg.jobs = st.jobs.max(1);
    cfg.timing = s.timing;
    let rows = run_scan_with(&cfg)?;
    let text = match st.format {
        Format::Csv => rows_to_csv(&rows)?,
        Format::Json => rows_to_json(&rows)?,
    };
    emit(st.out.as_deref(), &text)?;
    if st.out.is_some() {
        print!("{}", rows_to_text(&rows));
    }
    Ok(if rows.iter().any(|r| r.verdict.is_fail()) { 1 } else { 0 })
}

fn parse_translates(text: &str) -> CliResult<Vec<CurveTranslate>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let bad = |msg: String| usage(format!("translates line {}: {msg}", i + 1));
        let (sh, off) = t.split_once(',').ok_or_else(|| bad("expected shift,offset".into()))?;
        match (sh.trim().parse::<i64>(), off.trim().parse::<Rational>()) {
            (Ok(shift), Ok(offset)) => out.push(CurveTranslate { shift, offset }),
            _ if out.is_empty() && i == 0 => continue,
            _ => return Err(bad(format!("cannot parse `{t}`"))),
        }
    }
    Ok(out)
}

fn cmd_incidence(x: &IncidenceArgs) -> CliResult<u8> {
    let st = resolve(&x.common, None, None, None, None)?;
    let a = match x.grid {
        Some(n) => FiniteSet::from_integers(1..=n as i64),
        None => load_set(&st)?.0,
    };
    let b = match &x.input_b {
        Some(p) => FiniteSet::parse_lines(&read(p)?)?,
        None => a.clone(),
    };
    if let Some(curve) = &x.curve {
        let curve = ConvexCurve::new(FiniteSet::parse_lines(&read(curve)?)?)?;
        let translates = match &x.translates {
            Some(p) => parse_translates(&read(p)?)?,
            None => return Err(usage("--curve needs --translates")),
        };
        let range = x.range.unwrap_or(curve.len());
        let inc = count_incidences_curve(&curve, range, &b, &translates);
        return report_incidence(&st, inc, (range * b.len()) as u64, translates.len() as u64);
    }
    let lines = match (&x.lines, &x.line_grid) {
        (Some(p), None) => parse_line_file(&read(p)?)?,
        (None, Some(g)) => {
            let (s, i) = if g == "auto" {
                (ceil_sqrt(a.len() as u64), a.len() as u64)
            } else {
                match parse_sizes(g)?.as_slice() {
                    [s, i] => (*s as u64, *i as u64),
                    _ => return Err(usage("--line-grid expects S,I or auto")),
                }
            };
            line_grid(s, i)
        }
        _ => return Err(usage("supply exactly one of --lines or --line-grid")),
    };
    let rep = measure_lines(&a, &b, &lines)?;
    report_incidence(&st, rep.incidences, rep.points, rep.lines)
}

fn report_incidence(st: &Settings, incidences: u64, points: u64, lines: u64) -> CliResult<u8> {
    let ratio = if points == 0 || lines == 0 {
        None
    } else {
        Some(st_ratio(incidences, points, lines)?)
    };
    let text = match st.format {
        Format::Json => format!(
            "{}\n",
            json!({"incidences": incidences, "points": points, "lines": lines, "st_ratio": ratio})
        ),
        Format::Csv => format!(
            "incidences,points,lines,st_ratio\n{incidences},{points},{lines},{}\n",
            ratio.map(format_float).unwrap_or_default()
        ),
    };
    emit(st.out.as_deref(), &text)?;
    Ok(0)
}

fn cmd_search(s: &SearchArgs) -> CliResult<u8> {
    let st = resolve(&s.common, None, None, None, s.budget)?;
    let objective: Objective = s.objective.parse()?;
    let n = st.n.ok_or_else(|| usage("search needs --n"))?;
    let budget = st.budget.unwrap_or(1000);
    let res = search_extremal(objective, n, budget, st.seed)?;
    emit(st.out.as_deref(), &res.best.to_lines())?;
    if let Some(p) = &s.trajectory {
        let mut t = String::from("step,best_ratio\n");
        for (i, r) in res.trajectory.iter().enumerate() {
            t.push_str(&format!("{},{}\n", i + 1, format_float(*r)));
        }
        emit(Some(p), &t)?;
    }
    eprintln!(
        "{objective} n={n} budget={budget} seed={}: best ratio {} after {} restarts",
        st.seed,
        format_float(res.ratio),
        res.restarts
    );
    Ok(0)
}

fn run(cli: Cli) -> CliResult<u8> {
    match &cli.command {
        Command::Gen(c) => cmd_gen(c),
        Command::Stats(c) => cmd_stats(c),
        Command::Verify(v) => cmd_verify(v),
        Command::Scan(s) => cmd_scan(s),
        Command::Incidence(i) => cmd_incidence(i),
        Command::Search(s) => cmd_search(s),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
