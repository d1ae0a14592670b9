use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn tsc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsc")).args(args).env_remove("TSC_CACHE_DIR").output().expect("run tsc")
}

fn tsc_env(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsc")).args(args).env("TSC_CACHE_DIR", cache).output().expect("run tsc")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_of(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = tsc(&all);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn gram_generic_on_uu() {
    let o = tsc(&["gram", "--word", "uu", "--t", "generic"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("t^4 - t^2"), "{out}");
    assert!(out.contains("[-1,0,1]"), "{out}");
    let v = json_of(&["gram", "--word", "uu", "--t", "generic"]);
    assert_eq!(v["determinant"], "t^4 - t^2");
    assert_eq!(v["all_integer"], true);
    assert_eq!(v["integer_roots"], serde_json::json!(["-1", "0", "1"]));
}

#[test]
fn gram_at_a_root_has_a_kernel() {
    let v = json_of(&["gram", "--word", "uu", "--t", "1"]);
    assert_eq!(v["kernel_dim"], 1);
    let v = json_of(&["gram", "--word", "uu", "--t", "1/2"]);
    assert_eq!(v["kernel_dim"], 0);
}

#[test]
fn schur_exterior_square() {
    let o = tsc(&["schur", "--lambda", "1,1", "--kernel", "1,0", "--t", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["vanishes:", "true"]));
    let v = json_of(&["schur", "--lambda", "1,1", "--kernel", "2,1", "--t", "1"]);
    assert_eq!(v["vanishes"], false);
}

#[test]
fn boolean_orthogonalization() {
    let v = json_of(&["boolean", "orth", "--atoms", "3", "--gens", "1,2;2,3"]);
    assert_eq!(v["orthogonal"], serde_json::json!(["{2}", "{1}", "{3}"]));
    assert_eq!(v["principal"], "{1,2,3}");
}

#[test]
fn invalid_parameters_exit_one() {
    for args in [
        vec!["gram", "--word", "ux"],
        vec!["schur", "--lambda", "1,1", "--kernel", "1,0", "--t", "2"],
        vec!["boolean", "orth", "--atoms", "3", "--gens", "1,4"],
        vec!["spec", "--ring", "Z/1"],
        vec!["kernel", "--kernel", "5,4", "--max-word-len", "3"],
        vec!["frobnicate"],
    ] {
        let o = tsc(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn unwitnessed_chain_exits_two() {
    // on words of length <= 1 nothing separates M(0) from M(1)
    let o = tsc(&["chain", "--n", "1", "--max-r", "1", "--max-word-len", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "unknown");
    let o = tsc(&["chain", "--n", "-1", "--max-r", "1", "--max-word-len", "2"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn spectra_commands() {
    let v = json_of(&["spec", "--ring", "Z/12"]);
    assert_eq!(v["verdict"], "verified");
    let v = json_of(&["patch", "--space", "omega-chain", "--set", "N-{0,1}+inf"]);
    assert_eq!(v["zariski_closed"], false);
    assert_eq!(v["patch_closed"], true);
    assert_eq!(v["patch_hausdorff"], true);
    let v = json_of(&["projcat", "--ring", "F2xF3xF5"]);
    assert_eq!(v["count"], 8);
}

#[test]
fn json_output_is_canonical_and_repeatable() {
    let args = ["radical", "--n", "1", "--format", "json"];
    let a = stdout(&tsc(&args));
    let b = stdout(&tsc(&args));
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(format!("{v}\n"), a);
}

#[test]
fn cache_is_transparent_and_verifiable() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["gram", "--word", "ud", "--t", "generic", "--format", "json"];
    let plain = stdout(&tsc(&args));
    let first = tsc_env(&args, dir.path());
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(entries.len(), 1);
    let entry: Value = serde_json::from_str(&std::fs::read_to_string(&entries[0]).unwrap()).unwrap();
    assert_eq!(entry["request"]["command"], "gram");
    assert_eq!(entry["version"], 1);
    let second = tsc_env(&args, dir.path());
    assert_eq!(stdout(&first), plain);
    assert_eq!(stdout(&second), plain);

    let mut verify = args.to_vec();
    verify.push("--verify");
    assert_eq!(tsc_env(&verify, dir.path()).status.code(), Some(0));

    let mut tampered = entry.clone();
    tampered["payload"]["determinant"] = Value::from("t");
    std::fs::write(&entries[0], tampered.to_string()).unwrap();
    let o = tsc_env(&verify, dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("disagrees"));

    let mut bypass = args.to_vec();
    bypass.push("--no-cache");
    assert_eq!(stdout(&tsc_env(&bypass, dir.path())), plain);
}

#[test]
fn cache_dir_flag_takes_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested");
    let o = tsc(&["hom", "--word", "ud", "--cache-dir", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(&path).unwrap().count(), 1);
}
