//! Black-box tests of the command-line surface: exit codes, document
//! shapes, byte-for-byte determinism, and the check driver.

use std::path::PathBuf;
use std::process::Command;

fn pcf(args: &[&str]) -> (String, String, Option<i32>) {
    pcf_env(args, &[])
}

fn pcf_env(args: &[&str], env: &[(&str, &str)]) -> (String, String, Option<i32>) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pcf"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("spawn pcf");
    (
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
        out.status.code(),
    )
}

fn write_temp(name: &str, content: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pcf-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn heavy_ends_path_file() -> PathBuf {
    write_temp(
        "heavy_ends_path.json",
        &pcf_core::instance::serialize_instance(&pcf_core::fixtures::heavy_ends_path(10)),
    )
}

fn star_tree_file() -> PathBuf {
    // Star instance document plus the root field.
    let mut doc: serde_json::Value = serde_json::from_str(&pcf_core::instance::serialize_instance(
        &pcf_core::fixtures::greedy_trap_star(),
    ))
    .unwrap();
    doc["root"] = serde_json::json!(0);
    write_temp(
        "greedy_trap_tree.json",
        &serde_json::to_string_pretty(&doc).unwrap(),
    )
}

#[test]
fn gen_is_byte_identical_across_runs() {
    let a = pcf(&["gen", "--seed", "7", "-n", "6", "-m", "8"]);
    let b = pcf(&["gen", "--seed", "7", "-n", "6", "-m", "8"]);
    assert_eq!(a.2, Some(0));
    assert_eq!(a.0, b.0);
    assert!(a.0.contains("\"vertices\""));
    let c = pcf(&["gen", "--seed", "8", "-n", "6", "-m", "8"]);
    assert_ne!(a.0, c.0, "different seeds give different instances");
}

#[test]
fn solver_documents_are_deterministic() {
    let heavy_ends_path = heavy_ends_path_file();
    let p = heavy_ends_path.to_str().unwrap();
    let a = pcf(&["solve-urpcf", "-K", "2", p]);
    let b = pcf(&["solve-urpcf", "-K", "2", p]);
    assert_eq!(a.2, Some(0), "stderr: {}", a.1);
    assert_eq!(a.0, b.0);
}

#[test]
fn exit_codes_follow_the_contract() {
    let heavy_ends_path = heavy_ends_path_file();
    let p = heavy_ends_path.to_str().unwrap();

    // 0: success
    assert_eq!(pcf(&["solve-urpcf", "-K", "2", p]).2, Some(0));
    // 1: solver error (K out of range)
    let (_, stderr, code) = pcf(&["solve-urpcf", "-K", "0", p]);
    assert_eq!(code, Some(1));
    assert!(stderr.contains("out of range"), "stderr: {stderr}");
    // 1: unknown root label
    assert_eq!(pcf(&["solve-rpcf", "--roots", "0,99", p]).2, Some(1));
    // 2: validation failure (negative weight)
    let bad = write_temp(
        "bad.json",
        r#"{"vertices":[{"id":0,"penalty":"1"},{"id":1,"penalty":"1"}],
            "edges":[{"u":0,"v":1,"w":"-1"}]}"#,
    );
    let (_, stderr, code) = pcf(&["solve-urpcf", "-K", "1", bad.to_str().unwrap()]);
    assert_eq!(code, Some(2));
    assert!(stderr.contains("negative weight"), "stderr: {stderr}");
    // 3: oracle guard violation
    let (big_doc, _, _) = pcf(&["gen", "--seed", "1", "-n", "17", "-m", "20"]);
    let big = write_temp("big.json", &big_doc);
    let (_, stderr, code) = pcf(&["oracle", "urpcf", "-K", "2", big.to_str().unwrap()]);
    assert_eq!(code, Some(3));
    assert!(stderr.contains("guard"), "stderr: {stderr}");
}

#[test]
fn solve_rpcf_emits_one_component_per_root() {
    let heavy_ends_path = heavy_ends_path_file();
    let (stdout, stderr, code) = pcf(&[
        "solve-rpcf",
        "--roots",
        "0,3",
        heavy_ends_path.to_str().unwrap(),
    ]);
    assert_eq!(code, Some(0), "stderr: {stderr}");
    let inst = pcf_core::fixtures::heavy_ends_path(10);
    let (forest, value) = pcf_core::instance::parse_forest(&inst, &stdout).unwrap();
    assert_eq!(forest.k(), 2);
    assert_eq!(
        pcf_core::instance::cost_plus_penalty(&inst, &forest).unwrap(),
        value
    );
    assert!(forest.contains(0) && forest.contains(3));
}

#[test]
fn prune_tree_reads_the_root_field() {
    let tree = star_tree_file();
    let (stdout, stderr, code) = pcf(&["prune-tree", "-k", "3", tree.to_str().unwrap()]);
    assert_eq!(code, Some(0), "stderr: {stderr}");
    let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(doc["value"], "40.4");
    assert_eq!(doc["k"], 3);

    // Without the root field the document is rejected.
    let no_root = write_temp(
        "no_root.json",
        &pcf_core::instance::serialize_instance(&pcf_core::fixtures::greedy_trap_star()),
    );
    assert_eq!(
        pcf(&["prune-tree", "-k", "3", no_root.to_str().unwrap()]).2,
        Some(2)
    );
}

#[test]
fn float_flag_renders_approximations() {
    let tree = star_tree_file();
    let (stdout, _, code) = pcf(&["prune-tree", "-k", "3", "--float", tree.to_str().unwrap()]);
    assert_eq!(code, Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert!((doc["value"].as_f64().unwrap() - 40.4).abs() < 1e-9);
}

#[test]
fn sweep_cover_on_non_metric_input_expands_walks() {
    // A path graph is not complete: the planner must close it and report
    // patrol walks in the original graph.
    let path_doc = r#"{"vertices":[{"id":0,"penalty":"50"},{"id":1,"penalty":"50"},{"id":2,"penalty":"50"}],
        "edges":[{"u":0,"v":1,"w":"1"},{"u":1,"v":2,"w":"1"}]}"#;
    let inst = write_temp("path3.json", path_doc);
    let p = inst.to_str().unwrap();
    let (stdout, stderr, code) = pcf(&[
        "sweep-cover",
        "--speed",
        "1",
        "--period",
        "1",
        "--cost",
        "1",
        p,
    ]);
    assert_eq!(code, Some(0), "stderr: {stderr}");
    let plan: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let groups = plan["groups"].as_array().unwrap();
    assert!(!groups.is_empty());
    for g in groups {
        if g["kind"] == "patrol" {
            assert!(
                g["walk"].is_array(),
                "closed instances report original-graph walks"
            );
        }
    }

    // The emitted plan verifies against the same instance and parameters.
    let plan_file = write_temp("plan3.json", &stdout);
    let (vout, vstderr, vcode) = pcf(&[
        "verify-plan",
        "--speed",
        "1",
        "--period",
        "1",
        "--cost",
        "1",
        "--plan",
        plan_file.to_str().unwrap(),
        p,
    ]);
    assert_eq!(vcode, Some(0), "stderr: {vstderr}\nstdout: {vout}");
    assert!(vout.contains("plan: pass"));
}

#[test]
fn verify_plan_rejects_a_doctored_plan() {
    // Fast sensors make one patrolling sensor cheaper than two stationed
    // ones, so the plan contains a patrol group to tamper with.
    let pair_doc = r#"{"vertices":[{"id":0,"penalty":"9"},{"id":1,"penalty":"9"}],
        "edges":[{"u":0,"v":1,"w":"3"}]}"#;
    let inst = write_temp("pair.json", pair_doc);
    let p = inst.to_str().unwrap();
    let (stdout, _, code) = pcf(&[
        "sweep-cover",
        "--speed",
        "8",
        "--period",
        "1",
        "--cost",
        "1",
        p,
    ]);
    assert_eq!(code, Some(0));
    // Halve the sensor count on any patrol group.
    let mut plan: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let mut doctored = false;
    for g in plan["groups"].as_array_mut().unwrap() {
        if g["kind"] == "patrol" {
            let s = g["sensors"].as_u64().unwrap();
            g["sensors"] = serde_json::json!(s / 2);
            doctored = true;
        }
    }
    assert!(doctored, "expected a patrol group: {stdout}");
    let plan_file = write_temp("doctored.json", &serde_json::to_string(&plan).unwrap());
    let (vout, _, vcode) = pcf(&[
        "verify-plan",
        "--speed",
        "8",
        "--period",
        "1",
        "--cost",
        "1",
        "--plan",
        plan_file.to_str().unwrap(),
        p,
    ]);
    assert_eq!(vcode, Some(2), "stdout: {vout}");
    assert!(vout.contains("FAIL"));
}

#[test]
fn trace_matches_the_hand_computed_golden() {
    let doc = r#"{"vertices":[{"id":0,"penalty":"1"},{"id":1,"penalty":"5"}],
        "edges":[{"u":0,"v":1,"w":"4"}]}"#;
    let inst = write_temp("pair15.json", doc);
    let (stdout, stderr, code) = pcf(&["trace", inst.to_str().unwrap()]);
    assert_eq!(code, Some(0), "stderr: {stderr}");
    let got: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let expected = serde_json::json!({
        "n": 2,
        "events": [
            {"type": "deactivate", "index": 0, "component": 0},
            {"type": "edge", "index": 1, "edge": [0, 1], "left": 0, "right": 1,
             "left_active": false, "right_active": true, "merged": 2},
            {"type": "deactivate", "index": 2, "component": 2}
        ],
        "components": [
            {"id": 0, "vertices": [0], "y": "1", "h": "1", "pi": "1", "deactivated_at": 0},
            {"id": 1, "vertices": [1], "y": "3", "h": "3", "pi": "5", "deactivated_at": null},
            {"id": 2, "vertices": [0, 1], "y": "2", "h": "6", "pi": "6", "deactivated_at": 2}
        ],
        "final_components": [2]
    });
    assert_eq!(got, expected);
}

#[test]
fn bench_reports_without_changing_answers() {
    let (stdout, stderr, code) = pcf(&["bench", "--seed", "3", "-n", "40", "-m", "80", "-K", "5"]);
    assert_eq!(code, Some(0), "stderr: {stderr}");
    let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert!(doc["total_ms"].is_number());
    assert!(doc["events"].as_u64().unwrap() <= 79);
    let inst = pcf_core::instance::generate_random(3, 40, 80, 1000, 1000).unwrap();
    let sol = pcf_core::prune::solve_urpcf(&inst, 5).unwrap();
    assert_eq!(doc["value"], sol.value.to_decimal_string().as_str());
}

#[test]
fn check_suites_pass_and_parallelism_is_inert() {
    let heavy_ends_path = heavy_ends_path_file();
    let (stdout, _, code) = pcf(&[
        "check",
        "--suite",
        "dual",
        heavy_ends_path.to_str().unwrap(),
    ]);
    assert_eq!(code, Some(0));
    assert!(stdout.contains("dual: pass"));

    for suite in ["dual", "lmp", "dp", "sweep"] {
        let serial = pcf(&["check", "--suite", suite, "--seeds", "6"]);
        assert_eq!(serial.2, Some(0), "suite {suite}: {}", serial.1);
        assert!(serial.0.contains("all pass"), "suite {suite}: {}", serial.0);
        let parallel = pcf_env(
            &["check", "--suite", suite, "--seeds", "6"],
            &[("PCF_THREADS", "4")],
        );
        assert_eq!(
            parallel.0, serial.0,
            "suite {suite} output must not depend on threads"
        );
    }

    assert_eq!(pcf(&["check", "--suite", "nonsense"]).2, Some(2));
}
