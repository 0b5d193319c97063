//! End-to-end behavior of the binary: exit codes, file round-trips and
//! reproducibility of emitted artifacts.

use std::path::{Path, PathBuf};
use std::process::Command;

fn work_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir()
        .join(format!("cycdes-cli-{}", std::process::id()))
        .join(name);
    std::fs::create_dir_all(&dir).expect("create work dir");
    dir
}

fn cycdes(args: &[&str]) -> (i32, String) {
    let output = Command::new(env!("CARGO_BIN_EXE_cycdes"))
        .args(args)
        .output()
        .expect("spawn cycdes");
    let text = String::from_utf8_lossy(&output.stdout).into_owned()
        + &String::from_utf8_lossy(&output.stderr);
    (output.status.code().unwrap_or(-1), text)
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
}

#[test]
fn construct_verify_tomo_chain() {
    let dir = work_dir("chain");
    let out = dir.to_str().unwrap();
    let (code, log) = cycdes(&[
        "construct", "--method", "diffset", "--dim", "3", "--basis", "golden", "--dset",
        "1,2,4", "--modulus", "7", "-o", out,
    ]);
    assert_eq!(code, 0, "{log}");
    let design = dir.join("design.json");
    assert!(design.exists() && dir.join("manifest.json").exists());

    // Verify the emitted design and the pooled constellation separately.
    let vdir = work_dir("chain-verify");
    let (code, _) = cycdes(&[
        "verify", "--input", design.to_str().unwrap(), "--t", "1,2",
        "-o", vdir.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let cdir = work_dir("chain-verify-constellation");
    let constellation = dir.join("constellation.json");
    let (code, _) = cycdes(&[
        "verify", "--input", constellation.to_str().unwrap(), "--t", "2",
        "-o", cdir.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);

    // Tomography against a stored state, then a reconstruct-only rerun from
    // the emitted CSV.
    let state_dir = work_dir("chain-pipe");
    let (code, _) = cycdes(&[
        "pipeline", "--dim", "3", "--shots", "exact", "--seed", "3",
        "-o", state_dir.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let tdir = work_dir("chain-tomo");
    let (code, log) = cycdes(&[
        "tomo",
        "--design", state_dir.join("design.json").to_str().unwrap(),
        "--state", state_dir.join("state.json").to_str().unwrap(),
        "--shots", "exact",
        "-o", tdir.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{log}");
    let report: serde_json::Value = serde_json::from_str(&read(&tdir.join("tomo.json"))).unwrap();
    assert!(report["error_infinity"].as_f64().unwrap() < 1e-8);

    let rdir = work_dir("chain-tomo-csv");
    let (code, _) = cycdes(&[
        "tomo",
        "--design", state_dir.join("design.json").to_str().unwrap(),
        "--probs", tdir.join("probabilities.csv").to_str().unwrap(),
        "-o", rdir.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let rerun: serde_json::Value = serde_json::from_str(&read(&rdir.join("tomo.json"))).unwrap();
    // No true state provided: no error field, but the reconstruction agrees.
    assert!(rerun.get("error_infinity").is_none());
    assert_eq!(rerun["reconstruction"]["re"], report["reconstruction"]["re"]);
}

#[test]
fn exit_codes_follow_outcomes() {
    // Semantic failure: certification fails at t = 4.
    let dir = work_dir("codes");
    let out = dir.to_str().unwrap();
    let (code, _) = cycdes(&["construct", "--method", "u1", "-o", out]);
    assert_eq!(code, 0);
    let design = dir.join("design.json").display().to_string();
    let v4 = work_dir("codes-v4");
    let (code, _) = cycdes(&["verify", "--input", &design, "--t", "4", "-o", v4.to_str().unwrap()]);
    assert_eq!(code, 1);

    // Input error: corrupt file.
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"dim\": 2, \"vectors\": [[[2.0, 0.0], [0.0, 0.0]]], \"weights\": [1.0]}").unwrap();
    let vb = work_dir("codes-bad");
    let (code, log) = cycdes(&[
        "verify", "--input", bad.to_str().unwrap(), "--t", "2", "-o", vb.to_str().unwrap(),
    ]);
    assert_eq!(code, 2, "{log}");

    // Usage error: unknown flag.
    let (code, _) = cycdes(&["verify", "--frobnicate"]);
    assert_eq!(code, 2);

    // Difference-set search outcomes: found = 0, proven not-found = 1.
    let f = work_dir("codes-ds-found");
    let (code, _) = cycdes(&["diffset", "search", "--v", "7", "--k", "3", "-o", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    let nf = work_dir("codes-ds-nf");
    let (code, _) = cycdes(&["diffset", "search", "--v", "22", "--k", "5", "-o", nf.to_str().unwrap()]);
    assert_eq!(code, 1);
}

#[test]
fn basis_file_feeds_construct() {
    let bdir = work_dir("basisfile");
    let (code, _) = cycdes(&[
        "basis", "--kind", "numeric", "--dim", "5", "--seed", "9", "-o", bdir.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let cdir = work_dir("basisfile-construct");
    let (code, log) = cycdes(&[
        "construct", "--method", "diffset", "--dim", "5",
        "--basis-file", bdir.join("basis.json").to_str().unwrap(),
        "-o", cdir.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{log}");
    let design: serde_json::Value =
        serde_json::from_str(&read(&cdir.join("design.json"))).unwrap();
    assert_eq!(design["dim"], 5);
    assert_eq!(design["k"], 26); // Mian-Chowla modulus 27
    let eps = design["certification"][1]["epsilon"].as_f64().unwrap();
    assert!(eps.abs() < 1e-9, "epsilon {eps}");
}

#[test]
fn scan_emits_grid_csv() {
    let dir = work_dir("scan");
    let (code, log) = cycdes(&[
        "scan", "--dims", "2", "--ks", "2:4", "--restarts", "6", "--seed", "5",
        "-o", dir.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{log}");
    let csv = read(&dir.join("scan.csv"));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("k\\d,2"));
    for (line, k) in lines.zip(2..=4) {
        assert!(line.starts_with(&format!("{k},found:")), "line: {line}");
    }
}

#[test]
fn qubit_family_and_construction_one() {
    let dir = work_dir("family");
    let (code, _) = cycdes(&[
        "construct", "--method", "qubit-family", "--k", "10", "--cert-t", "2,3",
        "-o", dir.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let design: serde_json::Value = serde_json::from_str(&read(&dir.join("design.json"))).unwrap();
    assert_eq!(design["k"], 10);
    assert_eq!(design["phases"]["kind"], "rational");
    for cert in design["certification"].as_array().unwrap() {
        assert!(cert["is_design"].as_bool().unwrap());
    }

    let c1 = work_dir("family-c1");
    let (code, _) = cycdes(&[
        "construct", "--method", "construction1", "--n", "1", "--cert-t", "2",
        "-o", c1.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    // Depth 3 would need order 256: rejected as a range error.
    let c3 = work_dir("family-c3");
    let (code, _) = cycdes(&[
        "construct", "--method", "construction1", "--n", "3", "-o", c3.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
}

#[test]
fn manifest_lists_inputs_and_outputs() {
    let dir = work_dir("manifest");
    let (code, _) = cycdes(&["construct", "--method", "u1", "-o", dir.to_str().unwrap()]);
    assert_eq!(code, 0);
    let manifest: serde_json::Value =
        serde_json::from_str(&read(&dir.join("manifest.json"))).unwrap();
    let outputs = manifest["outputs"].as_array().unwrap();
    assert_eq!(outputs.len(), 2); // design.json + constellation.json
    for entry in outputs {
        assert_eq!(entry["sha256"].as_str().unwrap().len(), 64);
    }
    assert!(manifest["wall_clock_seconds"].as_f64().unwrap() >= 0.0);

    // Re-running reproduces the outputs byte for byte.
    let rerun = work_dir("manifest-rerun");
    let (code, _) = cycdes(&["construct", "--method", "u1", "-o", rerun.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(
        read(&dir.join("design.json")),
        read(&rerun.join("design.json"))
    );
}
