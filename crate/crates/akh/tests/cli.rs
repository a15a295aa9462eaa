use std::io::Write as _;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn akh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_akh")).args(args).env_remove("AKH_CACHE_DIR").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// `# key<TAB>value` summary lines.
fn note(o: &Output, key: &str) -> String {
    let prefix = format!("# {key}\t");
    stdout(o)
        .lines()
        .find_map(|l| l.strip_prefix(&prefix).map(String::from))
        .unwrap_or_else(|| panic!("no `{key}` in\n{}", stdout(o)))
}

fn rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o).lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split('\t').map(String::from).collect()).collect()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn akh_of_the_essential_unknot() {
    let o = akh(&["akh", "--in", &fixture("essential_unknot.adt")]);
    assert!(o.status.success());
    assert_eq!(rows(&o).len(), 2);
    assert_eq!(note(&o, "max_k"), "1");
}

#[test]
fn akh_of_family_members() {
    let o = akh(&["akh", "--family", "necklace", "--n", "1"]);
    assert_eq!(note(&o, "max_k"), "2");
    let o = akh(&["akh", "--family", "cable", "--base", "necklace", "--n", "1", "--m", "2"]);
    assert_eq!(note(&o, "max_k"), "4");
    let o = akh(&["akh", "--top", "--family", "cable", "--n", "1", "--m", "2"]);
    assert_eq!(note(&o, "max_k"), "4");
}

fn check_wrap_row(args: &[&str]) -> Vec<String> {
    let o = akh(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = rows(&o);
    assert_eq!(r.len(), 1);
    r[0].clone()
}

#[test]
fn check_wrap_examples() {
    let r = check_wrap_row(&["check-wrap", "--family", "necklace", "--n", "2"]);
    assert_eq!((r[0].as_str(), r[1].as_str()), ("VERIFIED", "2"));
    let r = check_wrap_row(&["check-wrap", "--family", "whitehead", "--n", "1"]);
    assert_eq!((r[0].as_str(), r[1].as_str()), ("VERIFIED", "4"));
    // not adequate, so only the bracket decides
    let r = check_wrap_row(&["check-wrap", "--in", &fixture("kinked_unknot.adt")]);
    assert_eq!(r, ["VERIFIED", "1", "1", "-", "false", "UNDECIDED", "VERIFIED", "-"]);
    let r = check_wrap_row(&["check-wrap", "--homology", "--in", &fixture("kinked_unknot.adt")]);
    assert_eq!((r[3].as_str(), r[7].as_str()), ("1", "VERIFIED"));
}

#[test]
fn spectral_sequence_of_the_clasped_pair() {
    let o = akh(&["bs-ss", "--in", &fixture("clasped_pair.adt"), "--weights", "0,1"]);
    assert!(o.status.success());
    assert_eq!(note(&o, "e1_is_akh"), "true");
    assert!(note(&o, "b").parse::<usize>().unwrap() <= 1);
    assert_eq!(note(&o, "split_shift"), note(&o, "t"));
    let o = akh(&["bs-ss", "--in", &fixture("clasped_pair.adt"), "--weights", "equal"]);
    assert_eq!(note(&o, "stabilized_at"), "1");
    let o = akh(&["bs-ss", "--in", &fixture("split_pair.adt"), "--split", &fixture("split_pair.adt")]);
    assert_eq!(note(&o, "b"), "0");
    assert_eq!(note(&o, "split_shift"), "0");
}

#[test]
fn weight_errors_exit_5() {
    let clasped = fixture("clasped_pair.adt");
    let o = akh(&["bs-ss", "--in", &clasped, "--weights", "0,1,2"]);
    assert_eq!(o.status.code(), Some(5));
    assert!(o.stdout.is_empty());
    let o = akh(&["bs-ss", "--field", "gf2", "--in", &clasped, "--weights", "0,1/2"]);
    assert_eq!(o.status.code(), Some(5));
    let o = akh(&["bs-ss", "--in", &clasped, "--weights", "zero,one"]);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn parse_and_cap_errors() {
    let o = akh(&["validate", "--in", &fixture("malformed.adt")]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 1, column 1"), "{err}");
    assert!(o.stdout.is_empty());
    assert_eq!(akh(&["akh", "--family", "spiral"]).status.code(), Some(2));
    assert_eq!(akh(&["akh"]).status.code(), Some(2));
    let o = akh(&["akh", "--cap", "3", "--family", "necklace", "--n", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
    assert_eq!(akh(&["validate", "--in", "/nonexistent.adt"]).status.code(), Some(1));
}

#[test]
fn json_records_are_tagged_and_deterministic() {
    let args = ["akh", "--format", "json", "--family", "necklace", "--n", "2"];
    let mut a = json(&akh(&args));
    let mut b = json(&akh(&args));
    assert_eq!(a["schema"], "akh/1");
    assert_eq!(a["command"], "akh");
    assert_eq!(a["result"]["max_k"], 2);
    assert_eq!(a["diagram"].as_str().unwrap().len(), 64);
    a.as_object_mut().unwrap().remove("wall_clock_ms");
    b.as_object_mut().unwrap().remove("wall_clock_ms");
    assert_eq!(a, b);
    let t1 = akh(&["bracket", "--family", "necklace", "--n", "2"]);
    let t2 = akh(&["bracket", "--family", "necklace", "--n", "2"]);
    assert_eq!(t1.stdout, t2.stdout);
    assert_eq!(note(&t1, "max_z"), "2");
}

#[test]
fn cached_and_fresh_runs_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let clasped = fixture("clasped_pair.adt");
    let runs: Vec<Vec<&str>> = vec![
        vec!["akh", "--in", &clasped],
        vec!["akh", "--field", "rat", "--in", &clasped],
        vec!["bracket", "--in", &clasped],
        vec!["bs-ss", "--in", &clasped, "--weights", "0,1"],
        vec!["rank-check", "--in", &clasped],
        vec!["complex", "--in", &clasped],
        vec!["check-wrap", "--homology", "--in", &clasped],
    ];
    for args in &runs {
        let fresh = akh(args);
        let mut with_cache = args.clone();
        with_cache.extend(["--cache-dir", cache]);
        let first = akh(&with_cache);
        let second = akh(&with_cache);
        assert_eq!(fresh.stdout, first.stdout, "{args:?}");
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
    let entries = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(entries, runs.len());
    // a corrupt entry is a miss
    for e in std::fs::read_dir(dir.path()).unwrap() {
        std::fs::write(e.unwrap().path(), "{").unwrap();
    }
    let again = akh(&["akh", "--in", &clasped, "--cache-dir", cache]);
    assert_eq!(again.stdout, akh(&["akh", "--in", &clasped]).stdout);
}

#[test]
fn cache_dir_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_akh"))
        .args(["bracket", "--in", &fixture("kinked_unknot.adt")])
        .env("AKH_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn config_file_with_flags_winning() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("akh.toml");
    std::fs::write(&cfg, "format = \"json\"\nfield = \"rat\"\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let o = akh(&["akh", "--config", cfg, "--in", &fixture("essential_unknot.adt")]);
    assert_eq!(json(&o)["field"], "rat");
    let o = akh(&["akh", "--config", cfg, "--field", "gf2", "--in", &fixture("essential_unknot.adt")]);
    assert_eq!(json(&o)["field"], "gf2");
    let o = akh(&["akh", "--config", cfg, "--format", "tsv", "--in", &fixture("essential_unknot.adt")]);
    assert_eq!(note(&o, "max_k"), "1");
    std::fs::write(dir.path().join("bad.toml"), "speed = 3\n").unwrap();
    let bad = dir.path().join("bad.toml");
    assert_eq!(akh(&["akh", "--config", bad.to_str().unwrap(), "--in", &fixture("essential_unknot.adt")]).status.code(), Some(2));
}

fn column(o: &Output, name: &str) -> Vec<String> {
    let text = stdout(o);
    let header: Vec<&str> = text.lines().find(|l| !l.starts_with('#')).unwrap().split('\t').collect();
    let c = header.iter().position(|h| *h == name).unwrap();
    rows(o).into_iter().map(|r| r[c].clone()).collect()
}

#[test]
fn sweeps() {
    let o = akh(&["sweep", "--family", "necklace", "--n", "1..3", "--m", "1"]);
    assert!(o.status.success());
    assert_eq!(column(&o, "bracket_max_z"), ["2", "2", "2"]);
    assert_eq!(column(&o, "akh_max_k"), ["2", "2", "2"]);
    let o = akh(&["sweep", "--family", "cable", "--n", "1", "--m", "1..2"]);
    assert_eq!(column(&o, "bracket_max_z"), ["2", "4"]);
    assert_eq!(column(&o, "status"), ["VERIFIED", "VERIFIED"]);
    let o = akh(&["sweep", "--family", "cable", "--n", "1", "--m", "2", "--braid", "s1"]);
    assert_eq!(column(&o, "bracket_max_z"), ["4"]);
    assert_eq!(column(&o, "akh_max_k"), ["4"]);
}

#[test]
fn sweep_output_does_not_depend_on_workers() {
    let base = ["sweep", "--family", "necklace", "--n", "1..3", "--m", "1..2", "--no-homology"];
    let serial = akh(&[&base[..], &["--workers", "1"]].concat());
    let parallel = akh(&[&base[..], &["--workers", "4"]].concat());
    assert!(serial.status.success());
    assert_eq!(serial.stdout, parallel.stdout);
    assert_eq!(rows(&serial).len(), 6);
}

#[test]
fn family_emit_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.adt");
    let b = dir.path().join("b.adt");
    for p in [&a, &b] {
        let o = akh(&["family", "--family", "whitehead", "--n", "1", "--clasp", "-", "--emit", p.to_str().unwrap()]);
        assert!(o.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let printed = akh(&["family", "--family", "whitehead", "--n", "1", "--clasp", "-"]);
    assert_eq!(printed.stdout, std::fs::read(&a).unwrap());
    let v = akh(&["validate", "--in", a.to_str().unwrap()]);
    assert_eq!(rows(&v)[0], ["crossings", "10"]);
}

#[test]
fn resolve_and_adequacy() {
    let o = akh(&["resolve", "--in", &fixture("clasped_pair.adt"), "--state", "11"]);
    assert!(o.status.success());
    assert_eq!(note(&o, "essential").parse::<usize>().unwrap() + note(&o, "trivial").parse::<usize>().unwrap(), rows(&o).len());
    assert_eq!(akh(&["resolve", "--in", &fixture("clasped_pair.adt"), "--state", "1"]).status.code(), Some(2));
    let o = akh(&["adequacy", "--family", "necklace", "--n", "2"]);
    let r = rows(&o);
    assert!(r.contains(&vec!["essential".to_string(), "2".to_string()]));
    assert!(r.contains(&vec!["minus_adequately_wrapped".to_string(), "true".to_string()]));
}

#[test]
fn complex_stats_and_rank_check() {
    let o = akh(&["complex", "--stats", "--in", &fixture("clasped_pair.adt")]);
    assert_eq!(note(&o, "states"), "4");
    let o = akh(&["rank-check", "--in", &fixture("clasped_pair.adt")]);
    assert!(o.status.success());
    assert_eq!(note(&o, "holds"), "true");
}

#[test]
fn diagram_on_standard_input() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_akh"))
        .args(["validate", "--in", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"circle: 1\ncircle: 0\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(o.status.success());
    assert!(rows(&o).contains(&vec!["components".to_string(), "2".to_string()]));
}

#[test]
fn help_documents_exit_codes_and_columns() {
    let o = akh(&["--help"]);
    let text = stdout(&o);
    assert!(text.contains("Exit codes"));
    assert!(text.contains("bracket_max_z"));
}
