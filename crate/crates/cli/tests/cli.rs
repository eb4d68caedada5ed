use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cubical_cli::parse::parse_file;
use cubical_cli::{Decl, Emit, Session};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn cubical(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubical"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).to_string()
}

fn scratch(name: &str, src: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cubical-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, src).unwrap();
    path
}

const FILES: [&str; 4] = ["circle.ctt", "paths.ctt", "glue.ctt", "assume.ctt"];

#[test]
fn sample_files_check() {
    for f in FILES {
        let out = cubical(&["check", data(f).to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{f}: {}", stderr(&out));
    }
}

#[test]
fn normalize_prints_eta_long_forms() {
    let file = data("circle.ctt");
    let out = cubical(&["normalize", file.to_str().unwrap(), "id-id"]);
    assert_eq!(stdout(&out), "\\x -> \\y -> x y");
    let out = cubical(&["normalize", file.to_str().unwrap(), "id-id", "--emit", "nf"]);
    assert_eq!(
        stdout(&out),
        "(lam (lam (lift (= 0 1) (app (var #0) (lift (= 0 1) (var #1) (sys))) (sys))))"
    );
}

#[test]
fn eq_reports_with_exit_codes() {
    let file = data("circle.ctt");
    let file = file.to_str().unwrap();
    let out = cubical(&["eq", file, "trivial-hcom", "base-again"]);
    assert_eq!(
        (stdout(&out).as_str(), out.status.code()),
        ("EQUAL", Some(0))
    );
    let out = cubical(&["eq", file, "refl-base", "loop-path"]);
    assert_eq!(
        (stdout(&out).as_str(), out.status.code()),
        ("DISTINCT", Some(1))
    );
    let out = cubical(&["eq", file, "rot-loop", "loop-path"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn cofibration_entailment() {
    let out = cubical(&["cof", "entails", "i = 0", "i = 0 \\/ j = 1"]);
    assert_eq!(
        (stdout(&out).as_str(), out.status.code()),
        ("ENTAILED", Some(0))
    );
    let out = cubical(&["cof", "entails", "i = 0 \\/ j = 1", "i = 0"]);
    assert_eq!(
        (stdout(&out).as_str(), out.status.code()),
        ("NOT ENTAILED", Some(1))
    );
    let out = cubical(&[
        "cof",
        "entails",
        "i = j /\\ j = 1",
        "forall k. i = 1 \\/ k = 0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = cubical(&["cof", "entails", "i = ", "i = 0"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn errors_use_distinct_exit_codes() {
    let parse = scratch("parse.ctt", "def a : S1 := base\ndef b : S1 := (base\n");
    let out = cubical(&["check", parse.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("3:1"), "{}", stderr(&out));

    let boundary = scratch(
        "boundary.ctt",
        "dim j\ndef bad : Path S1 base (loop j) := <i> base\n",
    );
    let out = cubical(&["check", boundary.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("boundary"), "{}", stderr(&out));

    let dup = scratch("dup.ctt", "def a : S1 := base\ndef a : S1 := base\n");
    assert_eq!(
        cubical(&["check", dup.to_str().unwrap()]).status.code(),
        Some(2)
    );

    let missing = cubical(&["normalize", data("circle.ctt").to_str().unwrap(), "nope"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn assumptions_print_one_line_per_branch() {
    let out = cubical(&["normalize", data("assume.ctt").to_str().unwrap(), "l"]);
    assert_eq!(stdout(&out), "[i = 0] base\n[j = 1] loop i");
}

/// Printing a normal form and checking it again gives the same normal form.
#[test]
fn printed_normal_forms_round_trip() {
    for f in FILES {
        let src = std::fs::read_to_string(data(f)).unwrap();
        let mut session = Session::new();
        session.load(&src).unwrap();
        if session.branches().len() != 1 {
            continue;
        }
        for d in parse_file(&src).unwrap() {
            let Decl::Def { name, .. } = d else { continue };
            let [(_, ty, nf)] = &session.infer(&name, Emit::Surface).unwrap()[..] else {
                unreachable!()
            };
            let extended = format!("{src}\ndef round-trip : {ty} := {nf}\n");
            let mut again = Session::new();
            again
                .load(&extended)
                .unwrap_or_else(|e| panic!("{f} {name}: {e}\n{nf}"));
            let [(_, nf2)] = &again.normalize("round-trip", Emit::Surface).unwrap()[..] else {
                unreachable!()
            };
            assert_eq!(nf, nf2, "{f} {name}");
            assert!(again.equal(&name, "round-trip").unwrap(), "{f} {name}");
        }
    }
}
