use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sumlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumlab")).args(args).output().expect("spawn sumlab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_writes_one_element_per_line() {
    let o = sumlab(&["gen", "--family", "ap(1/2,1)", "--n", "4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "1/2\n3/2\n5/2\n7/2\n");
    let o = sumlab(&["gen", "--family", "gp(1,3)", "--n", "3"]);
    assert_eq!(stdout(&o), "1\n3\n9\n");
}

#[test]
fn gen_random_depends_only_on_seed() {
    let a = stdout(&sumlab(&["gen", "--family", "random(n^2,0)", "--n", "20", "--seed", "5"]));
    let b = stdout(&sumlab(&["gen", "--family", "random(n^2,0)", "--n", "20", "--seed", "5"]));
    let c = stdout(&sumlab(&["gen", "--family", "random(n^2,0)", "--n", "20", "--seed", "6"]));
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert_eq!(a.lines().count(), 20);
}

#[test]
fn stats_small_sets() {
    let o = stdout(&sumlab(&["stats", "--family", "ap(1,1)", "--n", "3"]));
    for line in ["|A+A|,5", "|AA|,6", "E_2,19", "E_3,45", "|A/A|,7"] {
        assert!(o.lines().any(|l| l == line), "missing {line} in\n{o}");
    }
    let o = stdout(&sumlab(&["stats", "--family", "convex(2)", "--n", "4", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&o).unwrap();
    assert_eq!(v["is_convex"], true);
    assert_eq!(v["|A|"], 4);

    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("a.txt");
    fs::write(&f, "0\n1\n2\n").unwrap();
    let o = stdout(&sumlab(&["stats", "--input", path(&f)]));
    assert!(o.contains("|A/A|,n/a(0∈A)"));
}

#[test]
fn verify_exit_codes() {
    let o = sumlab(&["verify", "--family", "ap(1,1)", "--n", "50"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("check_id,inputs_desc,lhs,rhs,ratio,verdict\n"));
    let o = sumlab(&["verify", "--family", "ap(1,1)", "--n", "10", "--checks", "diff_proj:c=1000"]);
    assert_eq!(code(&o), 1);
    let o = sumlab(&["verify", "--family", "ap(1,1)", "--n", "10", "--checks", "no_such_check"]);
    assert_eq!(code(&o), 2);
    let o = sumlab(&["verify", "--input", "/nonexistent/set.txt"]);
    assert_eq!(code(&o), 3);
    let o = sumlab(&["verify", "--family", "ap(1,1)"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn verify_writes_results_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = sumlab(&[
        "verify", "--family", "convex(2)", "--n", "12", "--checks", "cs_energy,thm_csum", "--format", "json", "--out",
        path(&out),
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["verdict"], "pass");
    assert_eq!(rows[1]["verdict"], "ratio-report");
}

#[test]
fn verify_partner_file() {
    let dir = tempfile::tempdir().unwrap();
    let b = dir.path().join("b.txt");
    fs::write(&b, "1\n5\n9\n").unwrap();
    let o = sumlab(&["verify", "--family", "ap(1,1)", "--n", "6", "--checks", "cs_energy", "--partner", path(&b)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("|B|=3"));
}

#[test]
fn scan_rows_and_determinism() {
    let args = |jobs: &str| {
        sumlab(&[
            "scan", "--family", "random(4n,1),convex(2)", "--sizes", "16,32", "--checks", "cs_energy,thm_sp", "--seed",
            "3", "--jobs", jobs,
        ])
    };
    let one = args("1");
    let eight = args("8");
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, eight.stdout);
    let text = stdout(&one);
    assert_eq!(text.lines().count(), 1 + 8);
    assert!(text.starts_with("family,n,check_id,lhs,rhs,ratio,verdict,elapsed_s\n"));

    let o = sumlab(&["scan", "--family", "ap(1,1)", "--family", "gp(1,2)", "--sizes", "8,16", "--checks", "thm_sp"]);
    assert_eq!(stdout(&o).lines().count(), 5);
}

#[test]
fn scan_failure_is_reported_not_fatal() {
    let o = sumlab(&["scan", "--family", "ap(1,1)", "--sizes", "10", "--checks", "diff_proj:c=1000,cs_energy"]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    assert!(text.contains(",fail"));
    assert!(text.contains(",pass"));
}

#[test]
fn incidence_counts() {
    let dir = tempfile::tempdir().unwrap();
    let lines = dir.path().join("lines.csv");
    fs::write(&lines, "slope,intercept\n1,0\n").unwrap();
    let o = sumlab(&["incidence", "--grid", "3", "--lines", path(&lines)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("incidences,points,lines,st_ratio\n3,9,1,"));

    fs::write(&lines, "").unwrap();
    let o = sumlab(&["incidence", "--grid", "3", "--lines", path(&lines)]);
    assert_eq!(stdout(&o), "incidences,points,lines,st_ratio\n0,9,0,\n");

    fs::write(&lines, "1,0\n2,1\n0,3\n").unwrap();
    let o = sumlab(&["incidence", "--grid", "3", "--lines", path(&lines)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let o = sumlab(&["incidence", "--grid", "32", "--line-grid", "auto", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["points"], 1024);
    assert_eq!(v["lines"], 6 * 32);
}

#[test]
fn curve_incidences() {
    let dir = tempfile::tempdir().unwrap();
    let curve = dir.path().join("curve.txt");
    let tr = dir.path().join("tr.csv");
    fs::write(&curve, "1\n4\n9\n16\n25\n").unwrap();
    // y = f(x) hits B = {1,4,9,16,25} five times; shifted by one it hits four
    fs::write(&tr, "shift,offset\n0,0\n1,0\n").unwrap();
    let b = dir.path().join("b.txt");
    fs::write(&b, "1\n4\n9\n16\n25\n").unwrap();
    let o = sumlab(&[
        "incidence", "--input", path(&b), "--curve", path(&curve), "--translates", path(&tr), "--input-b", path(&b),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("9,"));
}

#[test]
fn search_writes_set_and_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("t.csv");
    let o = sumlab(&["search", "--n", "8", "--budget", "200", "--seed", "1", "--trajectory", path(&traj)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 8);
    let t = fs::read_to_string(&traj).unwrap();
    let vals: Vec<f64> = t.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(vals.len(), 200);
    assert!(vals.windows(2).all(|w| w[1] <= w[0]));
    let o = sumlab(&["search", "--n", "8", "--objective", "nope"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(&cfg, r#"{"family": "ap(1,1)", "n": 5, "format": "json"}"#).unwrap();
    let o = sumlab(&["gen", "--config", path(&cfg)]);
    assert_eq!(stdout(&o), "1\n2\n3\n4\n5\n");
    let o = sumlab(&["gen", "--config", path(&cfg), "--n", "2"]);
    assert_eq!(stdout(&o), "1\n2\n");
    let o = sumlab(&["stats", "--config", path(&cfg)]);
    assert!(serde_json::from_str::<serde_json::Value>(&stdout(&o)).is_ok());
    fs::write(&cfg, r#"{"famly": "ap(1,1)"}"#).unwrap();
    assert_eq!(code(&sumlab(&["gen", "--config", path(&cfg)])), 2);
}
