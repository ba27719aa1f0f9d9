use std::path::PathBuf;
use std::process::Command;

use coarse_cover::cli::{run, EXIT_FAIL, EXIT_PASS, EXIT_RESOURCE, EXIT_USAGE};
use coarse_cover::format::{to_json, WitnessDoc};
use coarse_cover::pipeline::{Report, Status};
use serde_json::Value;

fn path(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(rel).to_string_lossy().into_owned()
}

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("coarse-cover").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn run_writes_a_passing_report() {
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("z2.json");
    let o = cli(&["run", &path("scenarios/z2-over-z.example.json"), "--output", report_path.to_str().unwrap()]);
    assert_eq!(o.code, EXIT_PASS, "{}{}", o.stdout, o.stderr);
    assert!(o.stdout.contains("status: pass"));
    let report: Report = serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report.status, Status::Pass);
    assert_eq!(report.transfer.as_ref().unwrap().families.len(), 4);
    assert_eq!((report.plan.m, report.plan.n), (1, 1));
    assert!(report.notes.iter().any(|n| n.contains("(m+1)(n+1)-1")));
}

#[test]
fn weakened_witness_is_rejected_and_the_report_still_written() {
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("weak.json");
    let o = cli(&["run", &path("scenarios/z2-over-z.weakened.json"), "--output", report_path.to_str().unwrap()]);
    assert_eq!(o.code, EXIT_FAIL);
    assert!(o.stdout.contains("r_{(m+1)(n+1)}-disjoint"), "{}", o.stdout);
    let report = json(&std::fs::read_to_string(&report_path).unwrap());
    assert_eq!(report["status"], "rejected");
    assert!(report["transfer"].is_null());
}

#[test]
fn malformed_scales_fail_validation() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(path("scenarios/z2-over-z.example.json")).unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, text.replacen("\"2\",\n      \"3\"", "\"3\",\n      \"2\"", 1)).unwrap();
    let o = cli(&["run", bad.to_str().unwrap()]);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.stderr.contains("invalid scale sequence"), "{}", o.stderr);
    assert!(o.stdout.is_empty());
}

#[test]
fn quasistab_counts_members() {
    let o = cli(&["quasistab", &path("scenarios/z2-over-z.example.json"), "-R", "2", "-N", "4"]);
    assert_eq!(o.code, EXIT_PASS);
    let doc = json(&o.stdout);
    // |a| <= 2 and |a| + |b| <= 4: 5 + 7 + 9 + 7 + 5.
    assert_eq!(doc["size"], 33);
    assert_eq!(doc["members"].as_array().unwrap().len(), 33);
}

#[test]
fn ball_of_radius_zero_is_the_identity() {
    for group in ["lattice:2", "free:2", "lamplighter", "heisenberg"] {
        let o = cli(&["ball", "--group", group, "-N", "0"]);
        assert_eq!(o.code, EXIT_PASS);
        let doc = json(&o.stdout);
        assert_eq!(doc["size"], 1, "{group}");
        assert_eq!(doc["elements"][0]["length"], 0);
    }
    let o = cli(&["ball", "--group", "free:2", "-N", "2"]);
    assert_eq!(json(&o.stdout)["size"], 17);
}

#[test]
fn verify_names_the_violations_of_hand_edited_witnesses() {
    let o = cli(&["verify", &path("fixtures/interval-z.witness.json")]);
    assert_eq!(o.code, EXIT_PASS);
    let o = cli(&["verify", &path("fixtures/interval-z.moved.witness.json")]);
    assert_eq!(o.code, EXIT_FAIL);
    assert!(o.stderr.contains("FAILED disjointness: family 0"), "{}", o.stderr);
    assert_eq!(json(&o.stdout)["families"][0]["min_separation"], "2");
    let o = cli(&["verify", &path("fixtures/product-z2.lowered.witness.json")]);
    assert_eq!(o.code, EXIT_FAIL);
    assert!(o.stderr.contains("FAILED boundedness"));
}

#[test]
fn cover_output_verifies_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.json");
    let o = cli(&[
        "cover",
        "--recipe",
        "interval",
        "-r",
        "2",
        "--window",
        "box:(-6):(8)",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.code, EXIT_PASS);
    let written = std::fs::read_to_string(&out).unwrap();
    assert_eq!(written, std::fs::read_to_string(path("fixtures/interval-z.witness.json")).unwrap());
    assert_eq!(cli(&["verify", out.to_str().unwrap()]).code, EXIT_PASS);

    let o = cli(&["cover", "--recipe", "layers", "--key", "center", "-r", "2", "--window", "group:heisenberg:3"]);
    assert_eq!(o.code, EXIT_PASS, "{}", o.stderr);
    std::fs::write(&out, &o.stdout).unwrap();
    assert_eq!(cli(&["verify", out.to_str().unwrap()]).code, EXIT_PASS);

    let o = cli(&["cover", "--recipe", "strip", "-r", "2", "--window", "box:(0):(3)"]);
    assert_eq!(o.code, EXIT_USAGE);
}

#[test]
fn sfdc_check_passes_and_fails_on_the_shipped_chains() {
    let o = cli(&["sfdc-check", &path("fixtures/sfdc-chain.json")]);
    assert_eq!(o.code, EXIT_PASS);
    let o = cli(&["sfdc-check", &path("fixtures/sfdc-chain.boundary.json")]);
    assert_eq!(o.code, EXIT_FAIL);
    let doc = json(&o.stdout);
    assert_eq!(doc["steps"][0]["passed"], true);
    assert_eq!(doc["steps"][1]["passed"], false);
    assert!(o.stderr.contains("not 4-disjoint"));
}

#[test]
fn transfer_accepts_explicit_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = path("scenarios/lamplighter-over-z.json");
    let o = cli(&["run", &scenario]);
    let report: Report = serde_json::from_str(&o.stdout).unwrap();
    let space = dir.path().join("space.json");
    let qs = dir.path().join("qs.json");
    std::fs::write(&space, to_json(&report.space_witness.witness).unwrap()).unwrap();
    std::fs::write(&qs, to_json(&report.qs_witness.witness).unwrap()).unwrap();
    let args = ["transfer", &scenario, "--space-witness", space.to_str().unwrap(), "--qs-witness", qs.to_str().unwrap()];
    let o = cli(&args);
    assert_eq!(o.code, EXIT_PASS, "{}", o.stderr);
    let again: Report = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(again.transfer, report.transfer);
    assert_eq!(again.space_witness.recipe, "explicit");

    // Splitting one quasi-stabilizer block in two leaves them too close.
    let mut doc: WitnessDoc = report.qs_witness.witness.clone();
    let block = doc.families[0].blocks.remove(0);
    let (a, b) = block.split_at(block.len() / 2);
    doc.families[0].blocks.push(a.to_vec());
    doc.families[0].blocks.push(b.to_vec());
    std::fs::write(&qs, to_json(&doc).unwrap()).unwrap();
    let o = cli(&args);
    assert_eq!(o.code, EXIT_FAIL);
    assert_eq!(json(&o.stdout)["status"], "rejected");
}

#[test]
fn golden_report_is_reproduced() {
    let o = cli(&["run", &path("scenarios/lamplighter-over-z.json")]);
    assert_eq!(o.code, EXIT_PASS);
    let golden = std::fs::read_to_string(path("tests/golden/lamplighter-over-z.report.json")).unwrap();
    assert_eq!(o.stdout, golden);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(cli(&["bogus"]).code, EXIT_USAGE);
    assert_eq!(cli(&["ball", "--group", "torus", "-N", "1"]).code, EXIT_USAGE);
    assert_eq!(cli(&["verify", "/nonexistent/witness.json"]).code, EXIT_USAGE);
    assert_eq!(cli(&["--help"]).code, EXIT_PASS);
}

#[test]
fn binary_honours_the_resource_cap_variable() {
    let bin = env!("CARGO_BIN_EXE_coarse-cover");
    let capped = Command::new(bin)
        .args(["ball", "--group", "lattice:2", "-N", "20"])
        .env("COARSE_COVER_MAX_POINTS", "100")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(EXIT_RESOURCE));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("max_window_points"));

    let bad = Command::new(bin)
        .args(["ball", "--group", "lattice:2", "-N", "2"])
        .env("COARSE_COVER_MAX_POINTS", "lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));

    let ok = Command::new(bin).args(["ball", "--group", "lattice:2", "-N", "2"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_PASS));
}
