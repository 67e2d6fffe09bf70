use std::path::Path;
use std::process::{Command, Output};

const DEMO_INSTANCE: &str = r#"{"seed":0,"radius_label":"demo","network":{"nodes":[[0,0.0,0.0],[1,1.0,0.0],[2,2.0,0.0],[3,3.0,0.0]],"edges":[[0,1,1.0],[1,2,1.0],[2,3,1.0]]},"vehicles":[{"id":0,"origin":0,"destination":2,"route":[0,1,2]},{"id":1,"origin":2,"destination":3,"route":[2,3]}]}"#;

fn marp(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_marp"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn demo_dir() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("demo.json"), DEMO_INSTANCE).unwrap();
    dir
}

#[test]
fn generate_writes_valid_instance_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = marp(d, &["generate", "--kind", "grid", "--size", "3", "--vehicles", "1", "--seed", "0", "--out", "a.json"]);
    assert_eq!(code(&out), 0);
    let instance = marp::instance::load_instance(d.join("a.json")).unwrap();
    assert_eq!(instance.network().node_count(), 9);
    assert!(d.join("a.json.manifest.json").exists());

    marp(d, &["generate", "--kind", "grid", "--size", "3", "--vehicles", "1", "--seed", "0", "--out", "b.json"]);
    assert_eq!(std::fs::read(d.join("a.json")).unwrap(), std::fs::read(d.join("b.json")).unwrap());

    let zero = marp(d, &["generate", "--size", "3", "--vehicles", "0", "--out", "c.json"]);
    assert_eq!(code(&zero), 2);
}

#[test]
fn build_prints_resolved_lambda() {
    let dir = demo_dir();
    let d = dir.path();
    let soft = marp(d, &["build", "--instance", "demo.json", "--regime", "soft", "--out", "s.qubo"]);
    assert_eq!(code(&soft), 0);
    assert!(stdout(&soft).contains("0.666667"), "{}", stdout(&soft));
    let hard = marp(d, &["build", "--instance", "demo.json", "--regime", "hard", "--out", "h.qubo"]);
    assert!(stdout(&hard).starts_with("lambda 4 "), "{}", stdout(&hard));
    let custom = marp(d, &["build", "--instance", "demo.json", "--regime", "custom", "--out", "c.qubo"]);
    assert_eq!(code(&custom), 2);
}

#[test]
fn solve_demo_and_exit_codes() {
    let dir = demo_dir();
    let d = dir.path();
    marp(d, &["build", "--instance", "demo.json", "--regime", "custom", "--lambda", "0.5", "--out", "q.qubo"]);
    assert_eq!(code(&marp(d, &["solve", "--qubo", "q.qubo", "--solver", "exact", "--out", "x.json"])), 0);
    let solution = marp::solvers::Solution::load(d.join("x.json")).unwrap();
    assert_eq!(solution.energy, -2.5);
    assert_eq!(solution.x, vec![true, true]);

    for name in ["sa1.json", "sa2.json"] {
        marp(d, &["solve", "--qubo", "q.qubo", "--solver", "sa", "--seed", "5", "--out", name]);
    }
    assert_eq!(std::fs::read(d.join("sa1.json")).unwrap(), std::fs::read(d.join("sa2.json")).unwrap());

    let mut big = String::from("p qubo 0 31 31 0\n");
    for i in 0..31 {
        big.push_str(&format!("{i} {i} -1\n"));
    }
    std::fs::write(d.join("big.qubo"), big).unwrap();
    assert_eq!(code(&marp(d, &["solve", "--qubo", "big.qubo", "--solver", "exact", "--out", "b.json"])), 4);

    std::fs::write(d.join("bad.qubo"), "p qubo 0 2 1 0\n5 5 -1\n").unwrap();
    assert_eq!(code(&marp(d, &["solve", "--qubo", "bad.qubo", "--out", "b.json"])), 3);
    assert_eq!(code(&marp(d, &["solve", "--qubo", "missing.qubo", "--out", "b.json"])), 5);
    assert_eq!(code(&marp(d, &["solve", "--qubo", "q.qubo", "--solver", "magic", "--out", "b.json"])), 2);
}

#[test]
fn evaluate_demo_selection() {
    let dir = demo_dir();
    let d = dir.path();
    std::fs::write(
        d.join("first.json"),
        r#"{"x":[1,0],"energy":-2.0,"solver":"exact","seed":null,"wall_time_s":0.0}"#,
    )
    .unwrap();
    let out = marp(d, &["evaluate", "--instance", "demo.json", "--solution", "first.json", "--lambda-regime", "hard", "--out", "m.csv"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rows = marp::metrics::read_metrics_csv(std::fs::read(d.join("m.csv")).unwrap().as_slice()).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].report.pct_coverage, 75.0);
    assert_eq!(rows[0].report.pct_overlap, 0.0);
    assert_eq!(rows[0].report.pct_vehicles, 50.0);

    std::fs::write(
        d.join("none.json"),
        r#"{"x":[0,0],"energy":0.0,"solver":"exact","seed":null,"wall_time_s":0.0}"#,
    )
    .unwrap();
    let out = marp(d, &["evaluate", "--instance", "demo.json", "--solution", "none.json", "--out", "n.csv"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("empty selection"));
    let rows = marp::metrics::read_metrics_csv(std::fs::read(d.join("n.csv")).unwrap().as_slice()).unwrap();
    assert_eq!(rows[0].report.pct_coverage, 0.0);
    assert_eq!(rows[0].report.hhi, 0.0);
}

#[test]
fn sweep_and_pareto() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("cfg.json"),
        r#"{"network": {"kind": "grid", "size": 6}, "fleet_sizes": [8], "seeds": [1],
            "lambda_values": [0.1, "hard"], "solver": {"kind": "exact"}}"#,
    )
    .unwrap();
    assert_eq!(code(&marp(d, &["sweep", "--config", "cfg.json", "--out-dir", "out"])), 0);
    let rows = marp::metrics::read_metrics_csv(std::fs::read(d.join("out/metrics.csv")).unwrap().as_slice()).unwrap();
    assert_eq!(rows.len(), 2);

    assert_eq!(code(&marp(d, &["pareto", "--rows", "out/metrics.csv", "--out", "p.csv"])), 0);
    let pareto = std::fs::read_to_string(d.join("p.csv")).unwrap();
    let (a, b) = (&rows[0].report, &rows[1].report);
    let a_dominates = a.pct_coverage >= b.pct_coverage
        && a.pct_overlap <= b.pct_overlap
        && (a.pct_coverage > b.pct_coverage || a.pct_overlap < b.pct_overlap);
    let b_dominates = b.pct_coverage >= a.pct_coverage
        && b.pct_overlap <= a.pct_overlap
        && (b.pct_coverage > a.pct_coverage || b.pct_overlap < a.pct_overlap);
    let expected = if a_dominates || b_dominates { 1 } else { 2 };
    assert_eq!(pareto.lines().count() - 1, expected, "{pareto}");

    assert_eq!(code(&marp(d, &["sweep", "--config", "nope.json", "--out-dir", "o"])), 2);
}

#[test]
fn reduce_wsp_check() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("three.json"),
        r#"{"universe_size": 3, "sets": [[0, 1], [1, 2], [2]], "weights": [5, 4, 3]}"#,
    )
    .unwrap();
    let out = marp(d, &["reduce-wsp", "--wsp", "three.json", "--check"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("PASS") && text.contains("weight 8"), "{text}");

    let sets: Vec<String> = (0..25).map(|i| format!("[{i}]")).collect();
    let weights = vec!["1"; 25].join(",");
    std::fs::write(
        d.join("big.json"),
        format!(r#"{{"universe_size": 25, "sets": [{}], "weights": [{weights}]}}"#, sets.join(",")),
    )
    .unwrap();
    assert_eq!(code(&marp(d, &["reduce-wsp", "--wsp", "big.json", "--check"])), 4);
}

#[test]
fn replay_rejects_broken_manifest() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("m.json"), "{").unwrap();
    assert_eq!(code(&marp(dir.path(), &["replay", "m.json"])), 3);
}
