use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ecrank_cli::cache;
use ecrank_core::families::{self, FamilyParams};
use ecrank_core::Curve;
use serde_json::Value;

fn ecrank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ecrank")).args(args).output().expect("spawn ecrank")
}

fn ok(args: &[&str]) {
    let out = ecrank(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    let header = rdr.headers().unwrap().iter().map(String::from).collect();
    let rows = rdr.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn f(s: &str) -> f64 {
    s.parse().unwrap()
}

fn same_files(a: &Path, b: &Path, names: &[&str]) {
    for n in names {
        assert_eq!(fs::read(a.join(n)).unwrap(), fs::read(b.join(n)).unwrap(), "{n} differs");
    }
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    for threads in ["1", "4"] {
        let out = dir.path().join(threads);
        let out = out.to_str().unwrap();
        ok(&["--threads", threads, "average-rank", "--t", "3000", "--out", out]);
        ok(&["--threads", threads, "density", "--t", "500", "--x", "200", "--out", out]);
        ok(&["--threads", threads, "twists", "--t", "1500", "--out", out]);
    }
    same_files(
        &dir.path().join("1"),
        &dir.path().join("4"),
        &["average_rank.csv", "average_rank.json", "density.csv", "density.json", "twists.csv", "twists.json"],
    );
}

#[test]
fn rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        ok(&["average-rank", "--t", "2000", "--out", out.to_str().unwrap()]);
    }
    same_files(&dir.path().join("a"), &dir.path().join("b"), &["average_rank.csv", "average_rank.json"]);
}

#[test]
fn average_rank_summary_recomputes_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    ok(&["average-rank", "--t", "5000", "--x", "100", "--c0", "0.5", "--out", out]);
    let (header, rows) = rows(&dir.path().join("average_rank.csv"));
    assert_eq!(header, ["r", "s", "logN_term", "U1_term", "U2_term", "bound"]);
    let summary = json(&dir.path().join("average_rank.json"));
    let params = FamilyParams::new(5000.0).unwrap();
    let mut sums = [0.0f64; 5];
    for row in &rows {
        let c = Curve::new(row[0].parse().unwrap(), row[1].parse().unwrap()).unwrap();
        let w = families::weight_wt(&c, &params);
        sums[0] += w;
        for i in 0..4 {
            sums[i + 1] += w * f(&row[i + 2]);
        }
        let parts = f(&row[2]) + f(&row[3]) + f(&row[4]) + 0.5 / 100f64.ln();
        assert!((parts - f(&row[5])).abs() < 1e-12);
    }
    assert_eq!(summary["curves"].as_u64().unwrap() as usize, rows.len());
    assert!((sums[0] - summary["S_T"].as_f64().unwrap()).abs() < 1e-12 * sums[0]);
    for (i, key) in ["avg_logN_term", "avg_U1_term", "avg_U2_term", "avg_bound"].iter().enumerate() {
        let v = summary[key].as_f64().unwrap();
        assert!((sums[i + 1] / sums[0] - v).abs() < 1e-12, "{key}: {} vs {v}", sums[i + 1] / sums[0]);
    }
}

#[test]
fn density_csv_shape() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["density", "--t", "800", "--x", "300", "--r-max", "12", "--out", dir.path().to_str().unwrap()]);
    let (header, rows) = rows(&dir.path().join("density.csv"));
    assert_eq!(header, ["R", "census", "markov_bound", "reference_decay"]);
    let summary = json(&dir.path().join("density.json"));
    let threshold = summary["rank_threshold"].as_f64().unwrap();
    let ranks: Vec<u32> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(ranks.windows(2).all(|w| w[0] < w[1]));
    let census: Vec<usize> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(census.windows(2).all(|w| w[0] >= w[1]));
    for (row, js) in rows.iter().zip(summary["rows"].as_array().unwrap()) {
        let rank: f64 = row[0].parse().unwrap();
        assert_eq!(!row[2].is_empty(), rank >= threshold, "R = {rank}");
        assert_eq!(js["census"].as_u64().unwrap().to_string(), row[1]);
    }
}

#[test]
fn twists_signs_partition_and_proportions() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["twists", "--t", "3000", "--x", "500", "--out", dir.path().to_str().unwrap()]);
    let (header, rows) = rows(&dir.path().join("twists.csv"));
    assert_eq!(header[..2], ["D", "sign"]);
    let summary = json(&dir.path().join("twists.json"));
    let (mut w_plus, mut w_minus) = (0.0, 0.0);
    let mut plus_count = 0;
    for row in &rows {
        let d: i64 = row[0].parse().unwrap();
        let sign: i8 = row[1].parse().unwrap();
        // base 37a1 has w = -1
        assert_eq!(ecrank_core::twists::root_number(-1, d, 37).unwrap(), sign);
        if sign > 0 {
            w_plus += f(&row[5]);
            plus_count += 1;
        } else {
            w_minus += f(&row[5]);
        }
    }
    assert_eq!(summary["plus"]["count"].as_u64().unwrap(), plus_count);
    let part = &summary["partition"];
    assert!((part["W_plus"].as_f64().unwrap() - w_plus).abs() < 1e-12);
    assert!((part["W_minus"].as_f64().unwrap() - w_minus).abs() < 1e-12);
    assert!(part["difference"].as_f64().unwrap().abs() < 1e-12);
    let reference = &summary["proportions_reference"];
    assert_eq!(reference["lower_rank0"].as_f64().unwrap(), 0.25);
    assert_eq!(reference["lower_rank1"].as_f64().unwrap(), 0.75);
}

#[test]
fn empty_family_has_distinct_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(ecrank(&["average-rank", "--t", "1", "--x", "30", "--out", out]).status.code(), Some(3));
    assert_eq!(ecrank(&["twists", "--t", "6", "--x", "30", "--class", "1,1,0", "--out", out]).status.code(), Some(3));
}

#[test]
fn invalid_config_fails_with_message() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "[average-rank]\nbogus = 2\n").unwrap();
    let out = ecrank(&["--config", cfg.to_str().unwrap(), "average-rank"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));
    let out = ecrank(&["average-rank", "--t", "NaN"]);
    assert!(!out.status.success());
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let out = dir.path().join("out");
    fs::write(&cfg, format!("[average-rank]\nt = 100000.0\nx = 40.0\nout = {:?}\n", out.to_str().unwrap())).unwrap();
    ok(&["--config", cfg.to_str().unwrap(), "average-rank", "--t", "1000"]);
    let summary = json(&out.join("average_rank.json"));
    assert_eq!(summary["T"].as_f64(), Some(1000.0));
    assert_eq!(summary["X"].as_f64(), Some(40.0));
}

#[test]
fn cache_build_load_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ap.bin");
    let p = path.to_str().unwrap();
    ok(&["cache", "build", "--t", "1000", "--limit", "60", "--out", p]);
    ok(&["cache", "load", "--path", p]);
    assert_eq!(cache::load(&path).unwrap().records(), cache::build_records(1000.0, 60).unwrap());

    let with_cache = dir.path().join("c");
    let without = dir.path().join("n");
    ok(&["average-rank", "--t", "1000", "--x", "60", "--cache", p, "--out", with_cache.to_str().unwrap()]);
    ok(&["average-rank", "--t", "1000", "--x", "60", "--out", without.to_str().unwrap()]);
    same_files(&with_cache, &without, &["average_rank.csv"]);

    let mut bytes = fs::read(&path).unwrap();
    let at = cache::HEADER_LEN + 24;
    bytes[at..at + 8].copy_from_slice(&1000i64.to_le_bytes());
    fs::write(&path, &bytes).unwrap();
    let out = ecrank(&["verify", "--cache", p]);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("cache") && stderr.contains("Hasse"), "{stderr}");

    fs::write(&path, &bytes[..bytes.len() - 5]).unwrap();
    let out = ecrank(&["cache", "load", "--path", p]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("corrupt cache"));
}

#[test]
fn verify_passes() {
    let out = ecrank(&["verify"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.lines().filter(|l| l.ends_with(" ok")).count(), 6);
}
