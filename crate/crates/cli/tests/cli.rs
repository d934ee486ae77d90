use std::fs;
use std::path::Path;
use std::process::{Command, Stdio};
use std::thread::sleep;
use std::time::{Duration, Instant};

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["waring"];
    argv.extend_from_slice(args);
    let code = waring_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn gamma_output_has_exactly_four_keys_in_order() {
    let (code, out, _) = run(&["gamma", "--k", "3", "--q", "7"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), r#"{"k":3,"q":7,"coverable":true,"gamma":3}"#);
    let (_, out, _) = run(&["gamma", "--k", "4", "--q", "9"]);
    assert_eq!(out.trim(), r#"{"k":4,"q":9,"coverable":false,"gamma":null}"#);
}

#[test]
fn uncoverable_listing() {
    let (_, out, _) = run(&["uncoverable", "--k", "12"]);
    assert_eq!(out.trim(), r#"{"k":12,"fields":[4,9,25,121]}"#);
    let v = json(&["uncoverable", "--k", "11"]);
    assert_eq!(v["fields"], serde_json::json!([]));
}

#[test]
fn exit_codes() {
    let (code, _, err) = run(&["gamma", "--k", "3", "--q", "6"]);
    assert_eq!(code, 2);
    assert!(err.contains("NonPrimePowerQ"));

    let (code, _, err) = run(&["gamma", "--k", "3", "--bogus", "1"]);
    assert_eq!(code, 1);
    assert!(err.contains("--bogus"));

    let (code, _, err) = run(&["table", "--k", "3", "--filter", "gamma=5"]);
    assert_eq!(code, 1);
    assert!(err.contains("--filter"));

    let (code, _, err) = run(&["table", "--k", "3", "--resume", "cp.json"]);
    assert_eq!(code, 1);
    assert!(err.contains("--out"));

    let (code, _, err) = run(&["nosuch"]);
    assert_eq!(code, 1);
    assert!(err.contains("nosuch"));

    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("decompose-matrix"));

    let (code, _, err) = run(&["decompose-ring", "--k", "3", "--ring", "zn:12", "--alpha", "5"]);
    assert_eq!(code, 2);
    assert!(err.contains("GcdViolation"));

    let (code, _, err) = run(&["decompose-matrix", "--k", "3", "--q", "5", "--a", "1,2;3"]);
    assert_eq!(code, 2);
    assert!(err.contains("InvalidInput"));
}

#[test]
fn field_size_cap_from_environment_is_reported_as_a_domain_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_waring"))
        .args(["gamma", "--k", "5", "--q", "1031"])
        .env("WARING_SIZE_CAP", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("SizeCapExceeded"));
}

#[test]
fn decompositions_print_verified_witnesses() {
    let v = json(&["decompose-matrix", "--k", "3", "--q", "4", "--a", "g,0;0,g"]);
    assert_eq!(v["witnesses"].as_array().unwrap().len(), 2);
    assert_eq!(v["verified"], true);

    let v = json(&["decompose-matrix", "--k", "3", "--q", "5", "--a", "1,2;3,4"]);
    assert_eq!(v["row_bound"], 2);
    assert!(v["witnesses"].as_array().unwrap().len() <= 2);
    assert_eq!(v["witness_polys"].as_array().unwrap().len(), v["witnesses"].as_array().unwrap().len());

    let v = json(&["decompose-ring", "--k", "3", "--ring", "zn:55", "--alpha", "7"]);
    assert_eq!(v["witnesses"].as_array().unwrap().len(), 2);
    let v = json(&["decompose-ring", "--k", "3", "--ring", "zn:55", "--alpha", "7", "--no-row"]);
    assert_eq!(v["witnesses"].as_array().unwrap().len(), 1);

    let v = json(&["decompose-ring", "--k", "5", "--ring", "polyq:p=3,s=1,f=x^2+1,e=2", "--alpha", "[1,2,0,1]"]);
    assert_eq!(v["verified"], true);

    let v = json(&["decompose-field", "--k", "3", "--q", "7", "--y", "3"]);
    assert_eq!(v["witnesses"].as_array().unwrap().len(), 3);
}

#[test]
fn spectral_sarkozy_lemmas() {
    let v = json(&["spectral", "--k", "3", "--q", "13", "--bruteforce"]);
    assert_eq!(v["bruteforce_match"], true);
    assert_eq!(v["lambdas"].as_array().unwrap().len(), 3);

    let v = json(&["sarkozy", "--k", "3", "--q", "1681", "--random", "124", "--seed", "7"]);
    assert_eq!(v["min_size"], 124);
    assert!(v["pair"].is_array());

    let v = json(&["sarkozy", "--k", "3", "--q", "7", "--set", "0,3"]);
    assert!(v["pair"].is_null());

    let v = json(&["lemmas", "--x-max", "6", "--y-window", "50"]);
    assert_eq!(v["quartic_violations"], serde_json::json!([]));
}

#[test]
fn verify_suite_reports_per_k() {
    let v = json(&["verify", "--suite", "table1", "--kmin", "4", "--kmax", "7"]);
    assert_eq!(v["pass"], true);
    assert_eq!(v["results"].as_array().unwrap().len(), 4);
    let (code, _, err) = run(&["verify", "--suite", "table1", "--kmin", "1", "--kmax", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("InvalidInput"));
}

#[test]
fn table_six_matches_uncoverable_and_classes() {
    let (code, out, _) = run(&["table", "--k", "6", "--csv", "--jobs", "4"]);
    assert_eq!(code, 0);
    let mut unc = Vec::new();
    let mut six = Vec::new();
    for line in out.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        if f[2] == "false" {
            unc.push(f[1].parse::<u64>().unwrap());
        } else if f[3] == "6" {
            six.push(f[1].parse::<u64>().unwrap());
        }
    }
    assert_eq!(unc, vec![4, 25]);
    assert_eq!(six, vec![7, 13]);
}

fn scan_args<'a>(out: &'a str, cp: &'a str, jobs: &'a str) -> Vec<&'a str> {
    vec![
        "table", "--kmin", "3", "--kmax", "6", "--qmax", "3000", "--out", out, "--resume", cp, "--jobs", jobs,
        "--chunk-size", "16",
    ]
}

#[test]
fn stopped_scan_resumes_to_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n).to_string_lossy().into_owned();
    let (full, cp_full) = (p("full.json"), p("full.cp"));
    assert_eq!(run(&scan_args(&full, &cp_full, "3")).0, 0);

    let (part, cp_part) = (p("part.json"), p("part.cp"));
    let mut args = scan_args(&part, &cp_part, "1");
    args.extend(["--stop-after-chunks", "5"]);
    assert_eq!(run(&args).0, 0);
    let cp: Value = serde_json::from_str(&fs::read_to_string(&cp_part).unwrap()).unwrap();
    assert_eq!(cp["complete"], false);
    assert_eq!(cp["task_index"], 80);
    // Garbage after the checkpointed prefix must be discarded.
    fs::OpenOptions::new()
        .append(true)
        .open(&part)
        .and_then(|mut f| std::io::Write::write_all(&mut f, b"{\"torn\":"))
        .unwrap();
    assert_eq!(run(&scan_args(&part, &cp_part, "8")).0, 0);
    assert_eq!(fs::read(&full).unwrap(), fs::read(&part).unwrap());

    // A checkpoint from a different scan is refused.
    let mut other = scan_args(&part, &cp_part, "2");
    other[6] = "2000";
    let (code, _, err) = run(&other);
    assert_eq!(code, 2);
    assert!(err.contains("different scan"));
}

#[test]
fn corrupted_prefix_is_detected() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n).to_string_lossy().into_owned();
    let (out, cp) = (p("t.csv"), p("t.cp"));
    let mut args = scan_args(&out, &cp, "2");
    args.extend(["--csv", "--stop-after-chunks", "3"]);
    assert_eq!(run(&args).0, 0);
    let mut bytes = fs::read(&out).unwrap();
    bytes[25] ^= 1;
    fs::write(&out, bytes).unwrap();
    args.truncate(args.len() - 2);
    let (code, _, err) = run(&args);
    assert_eq!(code, 2);
    assert!(err.contains("does not match"));
}

fn wait_for(path: &Path, deadline: Duration) -> bool {
    let start = Instant::now();
    while start.elapsed() < deadline {
        if path.exists() {
            return true;
        }
        sleep(Duration::from_millis(5));
    }
    false
}

#[test]
fn killed_process_resumes_to_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n).to_string_lossy().into_owned();
    let args = |out: &str, cp: &str| -> Vec<String> {
        ["table", "--kmin", "3", "--kmax", "8", "--qmax", "20000", "--chunk-size", "4", "--jobs", "2", "--out", out, "--resume", cp]
            .iter()
            .map(|s| s.to_string())
            .collect()
    };
    let bin = env!("CARGO_BIN_EXE_waring");
    let (full, cp_full) = (p("full.json"), p("full.cp"));
    assert!(Command::new(bin).args(args(&full, &cp_full)).status().unwrap().success());

    let (part, cp_part) = (p("part.json"), p("part.cp"));
    let mut child = Command::new(bin)
        .args(args(&part, &cp_part))
        .stdout(Stdio::null())
        .spawn()
        .unwrap();
    assert!(wait_for(Path::new(&cp_part), Duration::from_secs(60)));
    child.kill().unwrap();
    child.wait().unwrap();
    let cp: Value = serde_json::from_str(&fs::read_to_string(&cp_part).unwrap()).unwrap();
    let status = Command::new(bin).args(args(&part, &cp_part)).status().unwrap();
    assert!(status.success());
    assert_eq!(fs::read(&full).unwrap(), fs::read(&part).unwrap());
    // Record whether the kill landed mid-scan; either way the bytes match.
    eprintln!("killed at task {} (complete: {})", cp["task_index"], cp["complete"]);
}
