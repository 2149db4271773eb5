//! End-to-end checks of the binary: flags, config-file merging, CSV schemas,
//! SVG structure, and exit codes (0 ok, 1 verification, 2 usage, 3 I/O).

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_oaprobe"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn assert_exit(output: &Output, code: i32) {
    assert_eq!(
        output.status.code(),
        Some(code),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
}

const RESULTS_HEADER: &str = "strategy,table_size,target_alpha,achieved_alpha,trial,seed,op_kind,ops,mean_probes,stddev_probes,max_probes,p99_probes,mem_bytes,wall_nanos";

#[test]
fn bench_single_cell_emits_two_rows_with_exact_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "bench",
            "--strategies",
            "random",
            "--load-factors",
            "0.5",
            "--trials",
            "1",
            "--entries",
            "100",
            "--seed",
            "7",
            "--out",
            "r.csv",
            "--hist",
            "h.csv",
        ],
    );
    assert_exit(&out, 0);
    let csv = std::fs::read_to_string(dir.path().join("r.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], RESULTS_HEADER);
    assert_eq!(lines.len(), 3, "header + insert + lookup_hit");
    for line in &lines[1..] {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 14);
        assert_eq!(fields[0], "random");
        // next_prime(ceil(100 / 0.5)) = next_prime(200) = 211.
        assert_eq!(fields[1], "211");
        assert_eq!(fields[7], "100");
    }
    assert_eq!(lines[1].split(',').nth(6), Some("insert"));
    assert_eq!(lines[2].split(',').nth(6), Some("lookup_hit"));

    let hist = std::fs::read_to_string(dir.path().join("h.csv")).unwrap();
    assert_eq!(
        hist.lines().next(),
        Some("strategy,target_alpha,op_kind,probes,count")
    );
    // Occurrences per kind sum to the op count.
    let insert_total: u64 = hist
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect::<Vec<_>>())
        .filter(|f| f[2] == "insert")
        .map(|f| f[4].parse::<u64>().unwrap())
        .sum();
    assert_eq!(insert_total, 100);
}

#[test]
fn bench_unsuccessful_fraction_adds_miss_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "bench",
            "--strategies",
            "bathroom",
            "--load-factors",
            "0.5",
            "--trials",
            "2",
            "--entries",
            "100",
            "--seed",
            "7",
            "--unsuccessful-fraction",
            "0.5",
            "--out",
            "r.csv",
            "--hist",
            "h.csv",
        ],
    );
    assert_exit(&out, 0);
    let csv = std::fs::read_to_string(dir.path().join("r.csv")).unwrap();
    let miss_rows: Vec<&str> = csv
        .lines()
        .filter(|l| l.split(',').nth(6) == Some("lookup_miss"))
        .collect();
    assert_eq!(miss_rows.len(), 2);
    for row in miss_rows {
        assert_eq!(row.split(',').nth(7), Some("50"));
    }
}

#[test]
fn config_file_is_merged_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("cfg.json"),
        r#"{"strategies": ["random"], "load-factors": [0.5], "trials": 1, "seed": 3, "entries": 500}"#,
    )
    .unwrap();
    let out = run_in(
        dir.path(),
        &[
            "bench",
            "--config",
            "cfg.json",
            "--entries",
            "200",
            "--out",
            "r.csv",
            "--hist",
            "h.csv",
        ],
    );
    assert_exit(&out, 0);
    let csv = std::fs::read_to_string(dir.path().join("r.csv")).unwrap();
    // entries flag (200) overrides the file (500): next_prime(400) = 401.
    assert_eq!(csv.lines().nth(1).unwrap().split(',').nth(1), Some("401"));
}

#[test]
fn malformed_or_unknown_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{not json").unwrap();
    assert_exit(&run_in(dir.path(), &["bench", "--config", "bad.json"]), 2);

    std::fs::write(dir.path().join("unknown.json"), r#"{"no-such-knob": 1}"#).unwrap();
    assert_exit(
        &run_in(dir.path(), &["bench", "--config", "unknown.json"]),
        2,
    );

    assert_exit(&run_in(dir.path(), &["bench", "--config", "missing.json"]), 2);
}

#[test]
fn invalid_bench_flags_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_exit(&run_in(dir.path(), &["bench", "--trials", "0"]), 2);
    assert_exit(&run_in(dir.path(), &["bench", "--strategies", "cuckoo"]), 2);
    assert_exit(
        &run_in(dir.path(), &["bench", "--strategies", "random,random"]),
        2,
    );
    assert_exit(&run_in(dir.path(), &["bench", "--load-factors", "1.5"]), 2);
    assert_exit(&run_in(dir.path(), &["bench", "--no-such-flag"]), 2);
    assert_exit(&run_in(dir.path(), &["bench", "--mode", "fixed-m"]), 2);
    assert_exit(
        &run_in(
            dir.path(),
            &["bench", "--mode", "fixed-m", "--table-size", "100"],
        ),
        2,
    );
    assert_exit(&run_in(dir.path(), &["bench", "--table-size", "101"]), 2);
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "bench",
            "--strategies",
            "random",
            "--load-factors",
            "0.5",
            "--trials",
            "1",
            "--entries",
            "50",
            "--out",
            "/nonexistent-dir/r.csv",
        ],
    );
    assert_exit(&out, 3);
}

#[test]
fn sim_extremes_are_exact() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "sim",
            "--size",
            "64",
            "--occupancy",
            "0.0,1.0",
            "--trials",
            "30",
            "--seed",
            "5",
            "--out",
            "sim.csv",
        ],
    );
    assert_exit(&out, 0);
    let csv = std::fs::read_to_string(dir.path().join("sim.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "n,occupancy,trials,mean_probes,stddev_probes,max_probes,found_rate"
    );
    let vacant: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(vacant[3], "1");
    assert_eq!(vacant[6], "1");
    let full: Vec<&str> = lines[2].split(',').collect();
    assert_eq!(full[3], "128");
    assert_eq!(full[5], "128");
    assert_eq!(full[6], "0");

    assert_exit(&run_in(dir.path(), &["sim", "--occupancy", "1.5"]), 2);
    assert_exit(&run_in(dir.path(), &["sim", "--growth", "sideways"]), 2);
    assert_exit(&run_in(dir.path(), &["sim", "--trials", "0"]), 2);
}

#[test]
fn plot_emits_one_polyline_per_strategy() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "bench",
            "--strategies",
            "random,bathroom",
            "--load-factors",
            "0.3,0.5,0.7",
            "--trials",
            "2",
            "--entries",
            "200",
            "--seed",
            "9",
            "--out",
            "r.csv",
            "--hist",
            "h.csv",
        ],
    );
    assert_exit(&out, 0);
    let out = run_in(
        dir.path(),
        &["plot", "--in", "r.csv", "--out", "p.svg", "--metric", "mean_probes"],
    );
    assert_exit(&out, 0);
    let svg = std::fs::read_to_string(dir.path().join("p.svg")).unwrap();
    let polylines: Vec<&str> = svg.lines().filter(|l| l.contains("<polyline")).collect();
    assert_eq!(polylines.len(), 2);
    for line in &polylines {
        let points = line.split("points=\"").nth(1).unwrap();
        let points = points.split('"').next().unwrap();
        assert_eq!(points.split(' ').count(), 3, "three alphas, three points");
    }
    assert!(svg.contains("load factor"));
    assert!(svg.contains("mean_probes"));

    // max_probes is also plottable, and the output is deterministic.
    let out = run_in(
        dir.path(),
        &["plot", "--in", "r.csv", "--out", "q.svg", "--metric", "max_probes"],
    );
    assert_exit(&out, 0);
    let out = run_in(
        dir.path(),
        &["plot", "--in", "r.csv", "--out", "q2.svg", "--metric", "max_probes"],
    );
    assert_exit(&out, 0);
    let q = std::fs::read(dir.path().join("q.svg")).unwrap();
    let q2 = std::fs::read(dir.path().join("q2.svg")).unwrap();
    assert_eq!(q, q2);
}

#[test]
fn plot_rejects_bad_inputs() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.csv"), "strategy,whatever\n1,2\n").unwrap();
    assert_exit(&run_in(dir.path(), &["plot", "--in", "bad.csv"]), 2);

    std::fs::write(dir.path().join("empty.csv"), format!("{RESULTS_HEADER}\n")).unwrap();
    assert_exit(&run_in(dir.path(), &["plot", "--in", "empty.csv"]), 2);

    assert_exit(&run_in(dir.path(), &["plot", "--in", "missing.csv"]), 3);

    std::fs::write(
        dir.path().join("ok.csv"),
        format!("{RESULTS_HEADER}\nrandom,211,0.5,0.47,0,7,insert,100,1.4,0.8,5,4,3587,123\n"),
    )
    .unwrap();
    assert_exit(
        &run_in(dir.path(), &["plot", "--in", "ok.csv", "--metric", "nope"]),
        2,
    );
    // Filter matches nothing: usage error, not an empty chart.
    assert_exit(
        &run_in(
            dir.path(),
            &["plot", "--in", "ok.csv", "--op-kind", "delete"],
        ),
        2,
    );
}

#[test]
fn verify_all_suites_pass_on_this_build() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["verify", "--suite", "all", "--seed", "7"]);
    assert_exit(&out, 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    for suite in ["oracle", "permutation", "reduction", "sim", "metrics"] {
        assert!(stdout.contains(&format!("suite {suite}: ok")), "{stdout}");
    }
    assert_exit(&run_in(dir.path(), &["verify", "--suite", "nonsense"]), 2);
}
