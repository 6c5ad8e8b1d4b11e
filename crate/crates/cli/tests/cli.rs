use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cover-lrc"))
        .args(args)
        .env_remove("COVER_LRC_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn bound_examples() {
    let o = run(&["bound", "--n", "9", "--k", "36", "--r", "2", "--rho", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().nth(1), Some("9,36,4,2,2,5,5,13,5,true"));

    let o = run(&[
        "bound", "--n", "255", "--k", "28560", "--r", "8", "--rho", "8", "--format", "json",
    ]);
    let v = json(&o);
    assert_eq!(v["cover_bound"], 53);
    assert_eq!(v["q"], 256);
    assert_eq!(v["optimal"], true);
}

#[test]
fn invalid_configuration_exits_2() {
    let o = run(&["bound", "--n", "9", "--k", "35", "--r", "2", "--rho", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("does not divide k = 35"));

    let o = run(&[
        "plocal", "--n", "9", "--r", "2", "--rho", "2", "--t-max", "19",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["simulate", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["roundtrip", "--field", "4,1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn roundtrip_local_repair_of_two_columns() {
    let v = json(&run(&["roundtrip", "--cols", "3,8", "--seed", "11"]));
    assert_eq!(v["erased_lines"], serde_json::json!([12, 17]));
    assert_eq!(v["local_repair"]["success"], true);
    assert_eq!(v["local_repair"]["correct"], true);
    assert_eq!(v["recovered"], true);
    assert_eq!(v["repaired"], v["codeword"]);
    assert_eq!(v["params"]["n"], 9);
}

#[test]
fn roundtrip_global_decoding_and_no_corruption() {
    let v = json(&run(&["roundtrip", "--random-lines", "4", "--seed", "2"]));
    assert_eq!(v["erased_lines"].as_array().unwrap().len(), 4);
    assert_eq!(v["global_decode"]["success"], true);
    assert_eq!(v["recovered"], true);

    let v = json(&run(&["roundtrip", "--seed", "2"]));
    assert_eq!(v["erased_lines"], serde_json::json!([]));
    assert_eq!(v["repaired"], v["codeword"]);
    assert_eq!(v["received"], v["codeword"]);

    let v = json(&run(&[
        "roundtrip",
        "--mode",
        "errors",
        "--random-lines",
        "2",
        "--seed",
        "5",
    ]));
    assert!(v["local_repair"].is_null());
    assert_eq!(v["global_decode"]["correct"], true);
}

#[test]
fn plocal_table() {
    let o = run(&["plocal", "--n", "9", "--k", "36", "--r", "2", "--rho", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,p_cover,p_rank,mode"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 38);
    assert!(rows.contains(&"0,1,1,errors"));
    assert!(rows.contains(&"1,1,1,erasures"));
    // two rows or two columns from distinct groups: 54 of 153 pairs
    assert!(rows.iter().any(|r| r.starts_with("2,0.352941176471,")));
    assert!(String::from_utf8_lossy(&o.stderr).contains("marker erasures t=4"));

    let v = json(&run(&[
        "plocal",
        "--n",
        "255",
        "--k",
        "28560",
        "--r",
        "8",
        "--rho",
        "8",
        "--t-min",
        "20",
        "--t-max",
        "60",
        "--construction",
        "cover",
        "--format",
        "json",
    ]));
    assert_eq!(v["markers"]["errors"], 26);
    assert_eq!(v["markers"]["erasures"], 52);
    let marked: Vec<_> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["marker"] == true)
        .collect();
    assert_eq!(marked.len(), 2);
    assert!(marked
        .iter()
        .all(|r| r["p_rank"].is_null() && r["p_cover_exact"].is_string()));
}

#[test]
fn simulate_is_deterministic() {
    let args = [
        "simulate", "--t-min", "0", "--t-max", "5", "--trials", "2000", "--seed", "9",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let t0 = text.lines().nth(1).unwrap();
    assert!(t0.starts_with("0,erasures,2000,2000,1.000000,1,"), "{t0}");

    let c = Command::new(env!("CARGO_BIN_EXE_cover-lrc"))
        .args(&args[..args.len() - 2])
        .env("COVER_LRC_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(c.stdout, a.stdout);
}

#[test]
fn simulate_with_decoder() {
    let o = run(&[
        "simulate", "--decode", "--t-min", "1", "--t-max", "4", "--trials", "300", "--seed", "1",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for row in stdout(&o).lines().skip(1) {
        let f: Vec<&str> = row.split(',').collect();
        assert_eq!(f[3], f[13], "repairs equal predicate hits: {row}");
        assert_eq!(f[14], "0");
    }
    let o = run(&["simulate", "--decode", "--mode", "errors"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_with_flag_override() {
    let path = tmp("config.json");
    std::fs::write(
        &path,
        r#"{"n": 255, "k": 28560, "r": 8, "rho": 8, "format": "json"}"#,
    )
    .unwrap();
    let v = json(&run(&["bound", "--config", path.to_str().unwrap()]));
    assert_eq!(v["cover_bound"], 53);
    let o = run(&[
        "bound",
        "--config",
        path.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert!(stdout(&o).starts_with("n,k,"));

    std::fs::write(&path, r#"{"n": 9, "unknown": 1}"#).unwrap();
    let o = run(&["bound", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_default_suite_passes() {
    let out = tmp("verify.json");
    let o = run(&[
        "verify",
        "--t-max",
        "3",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 5);
    assert!(checks.iter().all(|c| c["counterexample"].is_null()));
}
