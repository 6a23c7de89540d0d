use std::process::{Command, Output};

fn flopgw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flopgw"))
        .args(args)
        .env_remove("FLOPGW_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn appendix_all_pass() {
    let o = flopgw(&["verify", "appendix", "--r", "1..3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["suite"], "appendix");
    let entries = v["entries"].as_array().unwrap();
    assert!(!entries.is_empty());
    assert!(entries.iter().all(|e| e["status"] == "pass" && !e["anchor"].as_str().unwrap().is_empty()));
    for r in ["1", "2", "3"] {
        assert!(entries.iter().any(|e| e["params"]["r"] == r));
    }
}

#[test]
fn genus_one_table_csv() {
    let o = flopgw(&["table", "genus1", "--r", "1", "--dmax", "5", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "d,invariant\n1,1/12\n2,1/24\n3,1/36\n4,1/48\n5,1/60\n");
}

#[test]
fn genus_one_table_several_r() {
    let o = flopgw(&["table", "genus1", "--r", "2..3", "--dmax", "2", "--format", "csv"]);
    assert_eq!(stdout(&o), "r,d,invariant\n2,1,-1/8\n2,2,1/16\n3,1,1/6\n3,2,1/12\n");
}

#[test]
fn flop_sweep_passes() {
    let o = flopgw(&["verify", "flop", "--r", "2", "--max-m", "5", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.lines().filter(|l| !l.starts_with("flop:")).all(|l| l.starts_with('✓')));
}

#[test]
fn quantization_and_batyrev_pass() {
    assert_eq!(flopgw(&["verify", "quantization", "--dim", "2", "--cutoff", "3"]).status.code(), Some(0));
    let o = flopgw(&["verify", "batyrev", "--r", "1", "--sample", "3/10,0 7/10,0"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn failure_exits_one_with_anchor() {
    // an absurd gap threshold makes the semisimplicity certificate fail
    let o = flopgw(&["verify", "batyrev", "--r", "1", "--gap-tolerance", "1e9"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.lines().any(|l| l.starts_with("FAIL ") && l.contains("id=semisimplicity")), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(flopgw(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(flopgw(&["verify", "cohomology", "--r", "0"]).status.code(), Some(2));
    assert_eq!(flopgw(&["verify", "cohomology", "--dmax", "0"]).status.code(), Some(2));
    assert_eq!(flopgw(&["verify", "batyrev", "--sample", "1,2"]).status.code(), Some(2));
    assert_eq!(flopgw(&["verify", "cohomology", "--format", "yaml"]).status.code(), Some(2));
}

#[test]
fn deterministic_without_timing() {
    let args = ["verify", "all", "--r", "1", "--no-timing", "--max-m", "3", "--max-n", "3"];
    let a = flopgw(&args);
    let b = flopgw(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v.get("timing_ms").is_none());
    let suites: Vec<&str> = v["entries"].as_array().unwrap().iter().map(|e| e["params"]["suite"].as_str().unwrap()).collect();
    let mut order = suites.clone();
    order.dedup();
    assert_eq!(order, ["appendix", "flop", "batyrev", "cohomology", "quantization"]);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = std::env::temp_dir().join(format!("flopgw-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.toml");
    std::fs::write(&cfg, "r = 1\ndmax = 3\nformat = \"csv\"\n").unwrap();
    let run = |extra: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_flopgw"))
            .args(["table", "genus1"])
            .args(extra)
            .env("FLOPGW_CONFIG", &cfg)
            .output()
            .unwrap()
    };
    assert_eq!(stdout(&run(&[])), "d,invariant\n1,1/12\n2,1/24\n3,1/36\n");
    assert_eq!(stdout(&run(&["--dmax", "1"])), "d,invariant\n1,1/12\n");
}

#[test]
fn out_file_and_dump() {
    let dir = std::env::temp_dir().join(format!("flopgw-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("dg.json");
    let o = flopgw(&["dump", "dG", "--r", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v[0]["r"], 1);
    assert_eq!(v[0]["constant_at_zero"], "-1/24");
    // q/(12(1 - q)) written over -1 + q
    assert_eq!(v[0]["remainder"], "[(-1/12)*q] / [(-1) + (1)*q]");
    let num = &v[0]["pieces"]["log_delta"]["num"]["coeffs"];
    assert_eq!(num[0]["coeffs"][0], "-1/48");
    assert_eq!(num[0]["order"], 1);
}
