use std::path::PathBuf;
use std::process::{Command, Output};

fn taufact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_taufact"))
        .args(args)
        .env_remove("TAUFACT_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("taufact-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn relate_and_factor() {
    let o = taufact(&["relate", "--x", "-2", "--y", "3", "--n", "5", "--mu"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "true\n");
    assert_eq!(stdout(&taufact(&["relate", "--x", "2", "--y", "3", "--n", "7", "--mu"])), "false\n");
    assert_eq!(stdout(&taufact(&["relate", "--x", "-2", "--y", "3", "--n", "5", "--tau"])), "true\n");
    assert_eq!(stdout(&taufact(&["factor", "--x", "296"])), "2^3 · 37\n");
}

#[test]
fn relate_needs_exactly_one_relation() {
    assert_eq!(taufact(&["relate", "--x", "1", "--y", "2", "--n", "5"]).status.code(), Some(2));
    let both = taufact(&["relate", "--x", "1", "--y", "2", "--n", "5", "--mu", "--tau"]);
    assert_eq!(both.status.code(), Some(2));
}

#[test]
fn atom_paths() {
    let o = taufact(&["atom", "--x", "50", "--n", "11", "--method", "all"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("all paths agree"));
    assert_eq!(text.matches(" atom").count(), 3, "{text}");

    let o = taufact(&["atom", "--x", "16", "--n", "8", "--method", "oracle"]);
    assert!(stdout(&o).contains("reducible  witness 4 · 4"));
    let o = taufact(&["atom", "--x", "6", "--n", "5", "--method", "oracle"]);
    assert!(stdout(&o).contains("witness -1 · (-2) · 3"));
}

#[test]
fn atom_json_lists_every_path() {
    let o = taufact(&["atom", "--x", "296", "--n", "11", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["agree"], true);
    assert_eq!(v["results"].as_array().unwrap().len(), 3);
    assert_eq!(v["results"][1]["rule"], "Thm7.1-xi3-x2i");
}

#[test]
fn capability_and_usage_exit_codes() {
    let o = taufact(&["atom", "--x", "16", "--n", "8", "--method", "theorem"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(taufact(&["atom", "--x", "1", "--n", "5"]).status.code(), Some(2));
    assert_eq!(taufact(&["verify", "Thm9.9"]).status.code(), Some(2));
    assert_eq!(taufact(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(taufact(&["classes", "--n", "9"]).status.code(), Some(2));
    let o = taufact(&["table", "--n", "13", "--max-per-class", "40"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn prime_counterexample() {
    let o = taufact(&["prime", "--x", "98", "--n", "2", "--bound", "500"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("counterexample 196 = 14 · 14"));
    let o = taufact(&["prime", "--x", "98", "--n", "2", "--bound", "500", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "counterexample_found");
    assert_eq!(v["multiple"], 196);
    assert_eq!(v["factorization"]["parts"], serde_json::json!([14, 14]));
    assert!(stdout(&taufact(&["prime", "--x", "14", "--n", "2"])).contains("is a tau_2-prime"));
}

#[test]
fn enumerate_98_under_7() {
    let o = taufact(&["enumerate", "--x", "98", "--n", "7"]);
    let text = stdout(&o);
    assert!(text.starts_with("(-14) · (-7)\n"));
    assert!(text.ends_with("4 factorizations\n"));
    let o = taufact(&["enumerate", "--x", "28", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], 14);
    let o = taufact(&["enumerate", "--x", "28", "--all-signs", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], 16);
}

#[test]
fn classes_json() {
    let o = taufact(&["classes", "--n", "11", "--format", "json"]);
    assert_eq!(
        stdout(&o),
        "{\"n\":11,\"base\":2,\"q\":5,\"classes\":[[0],[1,10],[2,9],[4,7],[3,8],[5,6]]}\n"
    );
}

#[test]
fn table_n13_has_7776_rows() {
    let dir = scratch("t13");
    let out = dir.join("t13.csv");
    let o = taufact(&[
        "table",
        "--n",
        "13",
        "--max-per-class",
        "5",
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 7777);
    assert!(text.starts_with("zero,x0,x1,x2,x3,x4,x5,verdict,witness\n"));
}

#[test]
fn table_output_is_byte_stable_and_cached() {
    let dir = scratch("cache");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_taufact"))
            .args(["table", "--n", "11", "--x0-levels", "0,1", "--format", "json"])
            .env("TAUFACT_CACHE_DIR", &dir)
            .output()
            .unwrap()
    };
    let first = run();
    let second = run();
    assert_eq!(first.stdout, second.stdout);
    assert!(String::from_utf8_lossy(&second.stderr).contains("cache hit"));
    assert!(dir.join("atoms-n11-m4-x0_0_1.json").exists());
    let v: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1250);

    let fresh = taufact(&["table", "--n", "11", "--x0-levels", "0,1", "--format", "json"]);
    assert_eq!(fresh.stdout, first.stdout);
}

#[test]
fn config_file_sets_format_and_flags_override() {
    let dir = scratch("config");
    let cfg = dir.join("taufact.toml");
    std::fs::write(&cfg, "format = \"json\"\n").unwrap();
    let c = cfg.to_str().unwrap();
    let o = taufact(&["--config", c, "factor", "--x", "12"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["text"], "2^2 · 3");
    let o = taufact(&["--config", c, "factor", "--x", "12", "--format", "text"]);
    assert_eq!(stdout(&o), "2^2 · 3\n");

    std::fs::write(&cfg, "sweep_cap = 50\n").unwrap();
    let o = taufact(&["--config", c, "sweep", "--n", "5", "--hi", "100"]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::write(&cfg, "no_such_key = 1\n").unwrap();
    assert_eq!(taufact(&["--config", c, "factor", "--x", "12"]).status.code(), Some(2));
}

#[test]
fn sweep_reports_are_reproducible() {
    let args = ["sweep", "--n", "7", "--hi", "5000", "--paths", "oracle,theorem,signature", "--format", "json"];
    let a = taufact(&args);
    let b = taufact(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["mismatches"], serde_json::json!([]));
    assert_eq!(v["paths"], serde_json::json!(["oracle", "theorem", "signature"]));
}

#[test]
fn instantiate_and_conditions() {
    assert_eq!(stdout(&taufact(&["instantiate", "--signature", "x1*x4^2", "--n", "11"])), "50\n");
    assert_eq!(stdout(&taufact(&["instantiate", "--signature", "z", "--n", "5"])), "5\n");
    let o = taufact(&["conditions", "--n", "11", "--i", "1", "--j", "2", "--m", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["signature_verdict"], "atom");
    assert_eq!(v["readings"][0]["holds"], true);
    let o = taufact(&["conditions", "--n", "11", "--i", "0", "--j", "2", "--m", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_all_is_green_with_errata() {
    let o = taufact(&["verify", "--all", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 12);
    let thm42 = checks.iter().find(|c| c["id"] == "Thm4.2").unwrap();
    assert!(thm42["errata"][0].as_str().unwrap().contains("(7,6)"));
    let o = taufact(&["verify", "Thm3.5", "--limit", "2000"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS Thm3.5"));
}

#[test]
fn score_adjudicates() {
    let o = taufact(&["score", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["adjudicated"].is_string());
}
