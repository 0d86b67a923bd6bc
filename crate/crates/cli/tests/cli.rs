use std::process::{Command, Output};

fn slgen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slgen"))
        .args(args)
        .env_remove("SLGEN_LIMIT_SCALE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn eta_both_methods_agree_on_gl22() {
    let o = slgen(&["eta", "--n", "2", "--q", "2", "--method", "both"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 2);
    for row in &rows {
        assert_eq!(&row[0], "GL(2,2)");
        assert_eq!((&row[4], &row[5]), ("19", "36"));
    }
    assert!(text.starts_with("# schema_version=1"));
}

#[test]
fn projective_and_cyclic_eta() {
    let o = slgen(&["eta", "--n", "2", "--q", "3", "--kind", "PSL", "--method", "brute"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("\"PSL(2,3)\",PSL,2,3,"));
    let o = slgen(&["eta", "--n", "2", "--method", "cyclic"]);
    assert!(stdout(&o).contains("\"C2\",cyclic,2,,3,4,cyclic"));
    let o = slgen(&["eta", "--n", "2", "--q", "3", "--kind", "SL", "--method", "classbased"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn limit_guard_has_its_own_exit_code() {
    let o = slgen(&["genprob", "--n", "99", "--q", "2"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("limit"));
    let o = Command::new(env!("CARGO_BIN_EXE_slgen"))
        .args(["eta", "--n", "3", "--q", "3", "--method", "brute"])
        .env("SLGEN_LIMIT_SCALE", "0.0001")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn error_kinds_map_to_distinct_exit_codes() {
    assert_eq!(slgen(&["nosuch"]).status.code(), Some(2));
    assert_eq!(slgen(&["eta", "--n", "2", "--q", "6"]).status.code(), Some(3));
    assert_eq!(slgen(&["gensets", "--n", "2", "--q", "3", "--set", "c2"]).status.code(), Some(5));
    assert_eq!(slgen(&["--limit-scale", "0", "eta", "--n", "2"]).status.code(), Some(3));
}

#[test]
fn randomized_output_is_reproducible() {
    for args in [
        &["genprob", "--n", "3", "--q", "2", "--trials", "300", "--seed", "9"][..],
        &["permcyc", "--q", "2", "--m", "651", "--n", "8", "--trials", "2000", "--seed", "4"],
        &["norm", "--q", "3", "--n", "3", "--mode", "random", "--trials", "5", "--seed", "2"],
        &["gensets", "--n", "3", "--q", "3", "--set", "c2", "--mode", "sample", "--trials", "5"],
    ] {
        let a = slgen(args);
        let b = slgen(args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn genprob_reports() {
    let v = json(&slgen(&["genprob", "--n", "2", "--q", "3", "--mode", "exact"]));
    assert_eq!(v["generation_probability"], "2/3");
    assert_eq!(v["schema_version"], 1);
    let v = json(&slgen(&["genprob", "--n", "2", "--q", "5", "--trials", "100", "--seed", "3"]));
    assert_eq!(v["seed"], 3);
    assert_eq!(v["trials"], 100);
    assert!((v["kantor_benchmark"].as_f64().unwrap() - 0.08).abs() < 1e-12);
}

#[test]
fn pisigma_worked_instance() {
    let v = json(&slgen(&["pisigma", "--group", "C2", "--classes", "1"]));
    assert_eq!(v["miss_probability"], "1/4");
    assert_eq!(v["second_moment_limit"], "1/2");
    let gens = "[[[1,1],[0,1]],[[0,1],[1,0]]]";
    let v = json(&slgen(&["pisigma", "--generators", gens, "--q", "2", "--order", "3"]));
    assert_eq!(v["group_order"], 6);
    assert_eq!(v["subset_size"], 2);
}

#[test]
fn norm_modes() {
    let v = json(&slgen(&["norm", "--q", "4", "--n", "3", "--mode", "hyperplanes"]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 21);
    assert!(rows.iter().all(|r| r["surjective"] == true && r["dim"] == 2));
    let v = json(&slgen(&["norm", "--q", "5", "--n", "2", "--mode", "counterexample"]));
    assert_eq!(v["rows"][0]["missing_values"], serde_json::json!([2, 3]));
    let v = json(&slgen(&["norm", "--q", "3", "--n", "2", "--mode", "gauss"]));
    for row in v["rows"].as_array().unwrap() {
        assert!((row["magnitude"].as_f64().unwrap() - 3.0).abs() < 1e-9);
    }
}

#[test]
fn gensets_density_and_counts() {
    let o = slgen(&["gensets", "--n", "3", "--q", "2", "--set", "c2", "--mode", "count"]);
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "3,2,c2,56,168,1,3,1,3,true"), "{text}");
    let o = slgen(&["gensets", "--n", "4", "--q", "2", "--set", "c1"]);
    assert!(stdout(&o).lines().any(|l| l == "4,2,c1,2,15"));
}

#[test]
fn classes_table_sums_to_group_order() {
    let o = slgen(&["classes", "--n", "2", "--q", "3"]);
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(o.stdout.as_slice());
    let total: u64 = rdr.records().map(|r| r.unwrap()[2].parse::<u64>().unwrap()).sum();
    assert_eq!(total, 48);
}

#[test]
fn selftest_subset_passes() {
    let o = slgen(&["selftest", "--only", "2,5,13"]);
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("criterion")).count(), 3);
    assert!(o.status.success(), "{text}");
}
