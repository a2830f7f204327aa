use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use photon_walk::golden::{TABLE_I, TABLE_III};
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_photon-walk"));
    c.env_remove("PHOTON_WALK_OUTPUT_DIR");
    c
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_csv(path: &Path) -> Vec<BTreeMap<String, String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    let headers = r.headers().unwrap().clone();
    r.records()
        .map(|rec| {
            headers
                .iter()
                .zip(rec.unwrap().iter())
                .map(|(h, v)| (h.to_string(), v.to_string()))
                .collect()
        })
        .collect()
}

fn num(row: &BTreeMap<String, String>, key: &str) -> f64 {
    row[key].parse().unwrap()
}

#[test]
fn table_one_files_match_the_reference() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["tables", "--which", "I", "--output-dir", "t"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csvs: Vec<PathBuf> = fs::read_dir(dir.path().join("t"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| {
            p.extension().is_some_and(|e| e == "csv") && !p.to_string_lossy().contains("margins")
        })
        .collect();
    assert_eq!(csvs.len(), 4);
    for table in &TABLE_I {
        let name = format!("table_I_{}_{}.csv", &table.label[2..3], table.input.label());
        let rows = read_csv(&dir.path().join("t").join(name));
        assert_eq!(rows.len(), 21);
        for row in rows {
            let (q1, q2) = (num(&row, "q1") as i64, num(&row, "q2") as i64);
            assert!(q1 >= q2);
            let want = table.probability(q1, q2).unwrap();
            assert!((num(&row, "P") - want).abs() < 1e-10);
            assert!((num(&row, "P_x128") - 128.0 * want).abs() < 1e-8);
        }
    }
}

#[test]
fn table_three_margins() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "tables",
            "--which",
            "III",
            "--output-dir",
            "t",
            "--format",
            "csv",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let rows = read_csv(&dir.path().join("t/table_III_a_psi_plus_margins.csv"));
    let at_minus_one = rows.iter().find(|r| r["q"] == "-1").unwrap();
    assert!((num(at_minus_one, "P_x128") - 71.0).abs() < 1e-8);
    assert_eq!(TABLE_III[0].input.label(), "psi+");
}

#[test]
fn single_walk_side_peak() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "single",
            "--steps",
            "50",
            "--initial",
            "hx-vy_minus",
            "--output-dir",
            "o",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let rows = read_csv(&dir.path().join("o/single_n50_hx_minus_vy_minus.csv"));
    assert_eq!(rows.len(), 51);
    let peak = rows
        .iter()
        .filter(|r| num(r, "q") >= 10.0)
        .max_by(|a, b| num(a, "P").total_cmp(&num(b, "P")))
        .unwrap();
    assert!((num(peak, "q") - 35.0).abs() <= 4.0);
}

#[test]
fn two_photon_without_steps() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "two-photon",
            "--steps",
            "0",
            "--initial",
            "phi+",
            "--output-dir",
            "o",
            "--format",
            "json",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("o/two_photon_n0_phi_plus.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(v["experiment"], "two-photon");
    assert_eq!(v["steps"], 0);
    assert_eq!(v["initial"], "phi+");
    let pairs = v["data"]["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 1);
    assert_eq!(
        (pairs[0]["q1"].as_i64(), pairs[0]["q2"].as_i64()),
        (Some(0), Some(0))
    );
    assert!((pairs[0]["P"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn json_distributions_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["single", "--steps", "17", "--initial", "hy+vx"],
        vec!["coherent", "--steps", "9", "--initial", "coh:0.1,-0.1"],
        vec!["two-photon", "--steps", "6", "--initial", "xy"],
    ] {
        let mut full = args.clone();
        full.extend(["--output-dir", "o", "--format", "json"]);
        assert_eq!(run_in(dir.path(), &full).status.code(), Some(0));
    }
    for entry in fs::read_dir(dir.path().join("o")).unwrap() {
        let v: Value =
            serde_json::from_str(&fs::read_to_string(entry.unwrap().path()).unwrap()).unwrap();
        let data = &v["data"];
        let rows = data
            .get("pairs")
            .or(data.get("distribution"))
            .unwrap_or(data);
        let total: f64 = rows
            .as_array()
            .unwrap()
            .iter()
            .map(|r| r["P"].as_f64().unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-10, "{v}");
    }
}

#[test]
fn artifacts_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "asymptotic-compare",
        "--steps",
        "30",
        "--initial",
        "hx+vy",
        "--format",
        "csv,json,svg",
    ];
    let mut a = args.to_vec();
    a.extend(["--output-dir", "a"]);
    let mut b = args.to_vec();
    b.extend(["--output-dir", "b"]);
    assert_eq!(run_in(dir.path(), &a).status.code(), Some(0));
    assert_eq!(run_in(dir.path(), &b).status.code(), Some(0));
    let mut names: Vec<_> = fs::read_dir(dir.path().join("a"))
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert_eq!(names.len(), 3);
    for name in names {
        let x = fs::read(dir.path().join("a").join(&name)).unwrap();
        let y = fs::read(dir.path().join("b").join(&name)).unwrap();
        assert_eq!(x, y);
        assert!(!x.contains(&b'\r'));
    }
    let rows = read_csv(&dir.path().join("a/asymptotic_compare_n30_hx_plus_vy.csv"));
    assert!(rows[0].contains_key("P_exact") && rows[0].contains_key("abs_diff"));
}

#[test]
fn two_photon_comparison_writes_heatmaps() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "asymptotic-compare",
            "--steps",
            "12",
            "--initial",
            "psi+",
            "--output-dir",
            "o",
            "--format",
            "svg,json",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(dir
        .path()
        .join("o/asymptotic_compare_n12_psi_plus_exact.svg")
        .exists());
    assert!(dir
        .path()
        .join("o/asymptotic_compare_n12_psi_plus_approx.svg")
        .exists());
    let v: Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("o/asymptotic_compare_n12_psi_plus.json")).unwrap(),
    )
    .unwrap();
    assert!(v["data"]["total_variation"].as_f64().unwrap() < 1.0);
}

#[test]
fn config_file_and_environment() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("cfg.json"),
        r#"{"steps": 4, "initial": "hx", "formats": ["csv"], "output_dir": "from-file"}"#,
    )
    .unwrap();
    let out = bin()
        .current_dir(dir.path())
        .env("PHOTON_WALK_OUTPUT_DIR", "from-env")
        .args(["single", "--config", "cfg.json", "--steps", "6"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("from-env/single_n6_hx.csv").exists());
    assert!(!dir.path().join("from-file").exists());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        run_in(dir.path(), &["single", "--initial", "hq"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run_in(dir.path(), &["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        run_in(dir.path(), &["tables", "--which", "IV"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run_in(
            dir.path(),
            &["single", "--config", "missing.json", "--initial", "hx"]
        )
        .status
        .code(),
        Some(3)
    );
    fs::write(dir.path().join("blocker"), b"").unwrap();
    let out = run_in(
        dir.path(),
        &["single", "--initial", "hx", "--output-dir", "blocker/sub"],
    );
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(run_in(dir.path(), &["--help"]).status.code(), Some(0));
}
