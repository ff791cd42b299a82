use std::fs;
use std::process::{Command, Output};

fn tm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn entropy_json_matches_reference() {
    let out = tm(&["entropy", "--digits", "10", "--format", "json"]);
    assert!(out.status.success());
    let v = json(&out);
    let h = v["h"].as_str().unwrap();
    assert!(h.starts_with("0.5063839954"), "{h}");
    assert!(v["digits_validated"].as_u64().unwrap() >= 10);
    let d1: f64 = v["D1"].to_string().parse().unwrap();
    assert!((d1 - 0.7305).abs() < 5e-4);
    for key in ["energy_exponent", "S"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn entropy_digit_cap_is_a_usage_error() {
    assert_eq!(tm(&["entropy", "--digits", "40"]).status.code(), Some(2));
}

#[test]
fn pressure_csv_has_header_and_normalisation() {
    let out = tm(&["pressure", "--n", "12", "--t", "0:2:0.5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.split("\r\n").filter(|l| !l.is_empty()).collect();
    assert_eq!(lines[0], "t,p");
    assert_eq!(lines.len(), 6);
    for (row, t) in [(1, "0"), (3, "1")] {
        let cols: Vec<&str> = lines[row].split(',').collect();
        assert_eq!(cols[0], t);
        let p: f64 = cols[1].parse().unwrap();
        assert!((p - std::f64::consts::LN_2).abs() < 1e-10);
    }
}

#[test]
fn restricted_pressure_json() {
    let out = tm(&["pressure", "--n", "12", "--t", "1", "--restricted", "2", "--format", "json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["kind"], "restricted_m2");
    assert_eq!(v["samples"].as_array().unwrap().len(), 1);
}

#[test]
fn negative_temperature_and_caps_exit_2() {
    assert_eq!(tm(&["pressure", "--n", "12", "--t", "-1:1:0.5"]).status.code(), Some(2));
    assert_eq!(tm(&["pressure", "--n", "40"]).status.code(), Some(2));
    assert_eq!(tm(&["measure", "--word", "01a", "--level", "8"]).status.code(), Some(2));
    assert_eq!(tm(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn level_cap_can_be_lowered_by_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_tm"))
        .args(["pressure", "--n", "12", "--t", "1"])
        .env("TM_MAX_LEVEL", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("TM_MAX_LEVEL"));
}

#[test]
fn spectrum_endpoints() {
    let out = tm(&["spectrum", "--kind", "birkhoff", "--n", "16"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let (a, v) = l.trim_end().split_once(',').unwrap();
            (a.parse().unwrap(), v.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 401);
    assert!((rows[0].0 + std::f64::consts::LN_2).abs() < 1e-15);
    assert!(rows[0].1 >= 0.97);
    assert!(rows.iter().all(|&(_, v)| (0.0..=1.0).contains(&v)));
    let dim = tm(&["spectrum", "--kind", "dimension", "--n", "16", "--alpha", "1:2:0.25"]);
    assert_eq!(stdout(&dim).lines().count(), 6);
}

#[test]
fn localdim_and_measure_records() {
    let v = json(&tm(&["localdim", "--x", "1/3", "--n", "60"]));
    let d: f64 = v["local_dimension"].to_string().parse().unwrap();
    assert!((d - (2.0 - 3f64.ln() / std::f64::consts::LN_2)).abs() < 1e-12);
    let singular = json(&tm(&["localdim", "--x", "3/8", "--n", "10"]));
    assert_eq!(singular["local_dimension"], "inf");
    assert_eq!(singular["singular"], true);

    let m = json(&tm(&["measure", "--word", "0101", "--level", "14"]));
    assert_eq!(m["word"], "0101");
    assert_eq!(m["pass"], true);
    for key in ["level", "mass", "gibbs_bound"] {
        assert!(m.get(key).is_some(), "{key}");
    }
}

#[test]
fn json_numbers_have_17_significant_digits() {
    let text = stdout(&tm(&["measure", "--word", "0", "--level", "4"]));
    let line = text.lines().find(|l| l.contains("\"mass\"")).unwrap();
    let number = line.split(':').nth(1).unwrap().trim().trim_end_matches(',');
    let mantissa = number.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17, "{number}");
}

#[test]
fn verify_symbolic_suite_passes() {
    let out = tm(&["verify", "--suite", "symbolic"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["overall"], true);
    assert_eq!(tm(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn figures_are_written_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    for fig in ["psi_humps", "birkhoff_humps", "pressure_asymptotes", "b_spectrum"] {
        let out = tm(&["figure", fig, "--out", path, "--n", "12"]);
        assert!(out.status.success(), "{fig}");
    }
    let humps = fs::read_to_string(dir.path().join("psi_humps.csv")).unwrap();
    assert!(humps.starts_with("x,psi_x,psi_2x,psi_4x\r\n"));
    assert_eq!(humps.lines().count(), 10_002);
    assert!(humps.contains("-inf"));

    let again = tempfile::tempdir().unwrap();
    tm(&["figure", "b_spectrum", "--out", again.path().to_str().unwrap(), "--n", "12"]);
    assert_eq!(
        fs::read(dir.path().join("b_spectrum.csv")).unwrap(),
        fs::read(again.path().join("b_spectrum.csv")).unwrap()
    );
}

#[test]
fn output_is_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (threads, path) in [("1", &a), ("4", &b)] {
        let out = tm(&[
            "--threads", threads, "pressure", "--n", "16", "--t", "0:10:0.5", "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(tm(&["--threads", "zero", "entropy"]).status.code(), Some(2));
}
