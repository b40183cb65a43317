use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hsg_core::doc::{EXIT_CONFLICT, EXIT_IO, EXIT_OK, EXIT_VALIDATION};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn hsg(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hsg"))
        .args(args)
        .current_dir(dir)
        .env_remove("HSG_SEED")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_pack_is_clean() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["check".to_string(), "all".into()];
    let mut files: Vec<PathBuf> = fs::read_dir(fixture("pack")).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    args.extend(files.iter().map(|p| p.to_string_lossy().into_owned()));
    let argv: Vec<&str> = args.iter().map(String::as_str).collect();
    let out = hsg(dir.path(), &argv);
    assert_eq!(code(&out), EXIT_OK, "{}", String::from_utf8_lossy(&out.stdout));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report.is_object());
}

#[test]
fn broken_triangle_is_a_validation_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = hsg(dir.path(), &["check", "adjunction", path(&fixture("broken_triangle.json"))]);
    assert_eq!(code(&out), EXIT_VALIDATION);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("adjunction.triangle"), "{text}");
}

#[test]
fn missing_file_is_io() {
    let dir = tempfile::tempdir().unwrap();
    let out = hsg(dir.path(), &["check", "all", "nope.json"]);
    assert_eq!(code(&out), EXIT_IO);
    let out = hsg(dir.path(), &["render", "table", "nope.json", "--rows", "a", "--cols", "b"]);
    assert_eq!(code(&out), EXIT_IO);
}

#[test]
fn wrong_document_kind_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = hsg(dir.path(), &["sim", "run", path(&fixture("table1.json")), "--ticks", "3"]);
    assert_eq!(code(&out), EXIT_VALIDATION);
}

#[test]
fn registry_lifecycle() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let init = hsg(d, &["registry", "--store", "r.json", "init"]);
    assert_eq!(code(&init), EXIT_OK);
    assert_eq!(fs::read_to_string(d.join("r.json")).unwrap(), fs::read_to_string(fixture("registry_init.json")).unwrap());
    assert_eq!(code(&hsg(d, &["registry", "--store", "r.json", "init"])), EXIT_CONFLICT);
    assert_eq!(code(&hsg(d, &["registry", "--store", "r.json", "init", "--force"])), EXIT_OK);

    let pkg = fixture("pack/package.json");
    assert_eq!(code(&hsg(d, &["registry", "--store", "r.json", "attach", path(&pkg)])), EXIT_OK);
    assert_eq!(code(&hsg(d, &["registry", "--store", "r.json", "attach", path(&pkg)])), EXIT_CONFLICT);

    let order = hsg(d, &["registry", "--store", "r.json", "order"]);
    let ids: Vec<String> = String::from_utf8(order.stdout).unwrap().lines().map(String::from).collect();
    assert_eq!(ids.first().map(String::as_str), Some("ces"));
    assert_eq!(ids.len(), 2);

    let a = hsg(d, &["registry", "--store", "r.json", "attest", "node", "--counter", "2"]);
    let b = hsg(d, &["registry", "--store", "r.json", "attest", "node", "--counter", "2"]);
    assert_eq!(code(&a), EXIT_OK);
    assert_eq!(a.stdout, b.stdout);

    // the root cannot go while something depends on it
    assert_ne!(code(&hsg(d, &["registry", "--store", "r.json", "detach", "ces"])), EXIT_OK);
    assert_eq!(code(&hsg(d, &["registry", "--store", "missing.json", "list"])), EXIT_IO);
}

#[test]
fn single_neuron_trace_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let out = hsg(dir.path(), &["sim", "run", path(&fixture("single_neuron.json")), "--ticks", "5", "--trace", "t.csv"]);
    assert_eq!(code(&out), EXIT_OK);
    assert_eq!(fs::read_to_string(dir.path().join("t.csv")).unwrap(), fs::read_to_string(fixture("single_neuron.trace")).unwrap());
}

#[test]
fn zero_ticks_writes_an_empty_trace() {
    let dir = tempfile::tempdir().unwrap();
    let out = hsg(dir.path(), &["sim", "run", path(&fixture("single_neuron.json")), "--ticks", "0", "--trace", "t.csv"]);
    assert_eq!(code(&out), EXIT_OK);
    assert_eq!(fs::read_to_string(dir.path().join("t.csv")).unwrap(), "");
}

fn summary_seed(out: &Output) -> u64 {
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    v["seed"].as_u64().unwrap()
}

#[test]
fn seed_flag_beats_environment() {
    let dir = tempfile::tempdir().unwrap();
    let world = fixture("pack/world.json");
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_hsg"));
        c.args(["sim", "run", path(&world), "--ticks", "4"]).current_dir(dir.path()).env_remove("HSG_SEED");
        if let Some(s) = env {
            c.env("HSG_SEED", s);
        }
        if let Some(s) = flag {
            c.args(["--seed", s]);
        }
        c.output().unwrap()
    };
    assert_eq!(summary_seed(&run(Some("17"), None)), 17);
    assert_eq!(summary_seed(&run(Some("17"), Some("5"))), 5);
    assert_eq!(run(Some("9"), None).stdout, run(None, Some("9")).stdout);
}

#[test]
fn probe_accepts_negative_magnitudes() {
    let dir = tempfile::tempdir().unwrap();
    let world = fixture("single_neuron.json");
    let args = ["sim", "probe", path(&world), "--point", "n", "--tick", "1", "--magnitude", "-0.25", "--horizon", "10"];
    let out = hsg(dir.path(), &args);
    assert_eq!(code(&out), EXIT_OK);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["perturbation_tick"], 1);
    let bad = hsg(dir.path(), &["sim", "probe", path(&world), "--point", "ghost", "--tick", "1", "--magnitude", "1", "--horizon", "10"]);
    assert_eq!(code(&bad), EXIT_VALIDATION);
}

#[test]
fn table_renders_match_goldens() {
    let dir = tempfile::tempdir().unwrap();
    for (doc, cols, golden) in [("table1.json", "depth", "table1.txt"), ("table2.json", "nf", "table2.txt")] {
        let out = hsg(dir.path(), &["render", "table", path(&fixture(doc)), "--rows", "map_level", "--cols", cols]);
        assert_eq!(code(&out), EXIT_OK);
        assert_eq!(String::from_utf8(out.stdout).unwrap(), fs::read_to_string(fixture(golden)).unwrap());
    }
    let out = hsg(dir.path(), &["render", "table", path(&fixture("table1.json")), "--rows", "map_level", "--cols", "colour"]);
    assert_eq!(code(&out), EXIT_VALIDATION);
}
