use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use cyclekap::{AnyCycleRep, InvariantTable};
use tempfile::TempDir;

const REP_A: &str = "cyclerep v1\nfield Q\nn 2\ndims 1 1\nmap 0\n1\nmap 1\n0\n";
const REP_B: &str = "cyclerep v1\nfield Q\nn 2\ndims 1 1\nmap 0\n0\nmap 1\n1\n";

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("cyclekap").chain(args.iter().copied());
    let code = cyclekap_cli::run(argv, &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn put(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn invariants_of_rep_a() {
    let dir = TempDir::new().unwrap();
    let a = put(&dir, "a.cr", REP_A);
    let r = run(&["invariants", s(&a)]);
    assert_eq!(r.code, 0);
    let t = InvariantTable::parse(&r.out).unwrap();
    assert_eq!(t.to_string(), "kappa 1 1 1\n");
}

#[test]
fn iso_negative_names_first_difference() {
    let dir = TempDir::new().unwrap();
    let a = put(&dir, "a.cr", REP_A);
    let b = put(&dir, "b.cr", REP_B);
    let r = run(&["iso", s(&a), s(&b)]);
    assert_eq!(r.code, 1);
    assert!(r.out.contains("κ_{1,1} differs: 1 vs 0"), "{}", r.out);
}

#[test]
fn iso_self_writes_identity_certificate() {
    let dir = TempDir::new().unwrap();
    let a = put(&dir, "a.cr", REP_A);
    let c = dir.path().join("c.cert");
    let r = run(&["iso", s(&a), s(&a), "-o", s(&c)]);
    assert_eq!(r.code, 0);
    assert!(r.out.contains(s(&c)));
    assert_eq!(fs::read_to_string(&c).unwrap(), "morphism v1\nphi 0\n1\nphi 1\n1\n");
    assert_eq!(run(&["verify-cert", s(&a), s(&a), s(&c)]).code, 0);
}

#[test]
fn build_iso_on_generated_pair_reverifies() {
    let dir = TempDir::new().unwrap();
    let g1 = dir.path().join("g1.cr");
    let g2 = dir.path().join("g2.cr");
    let c = dir.path().join("c.cert");
    for (seed, p) in [("1", &g1), ("2", &g2)] {
        let r = run(&["gen", "--n", "3", "--cells", "0:2,1:4,2:1x2", "--seed", seed, "--field", "Fp:5", "-o", s(p)]);
        assert_eq!(r.code, 0, "{}", r.err);
    }
    let r = run(&["build-iso", s(&g1), s(&g2), "-o", s(&c)]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.contains("certificate verified"));
    assert_eq!(run(&["verify-cert", s(&g1), s(&g2), s(&c)]).code, 0);
}

#[test]
fn wrong_certificate_is_rejected() {
    let dir = TempDir::new().unwrap();
    let a = put(&dir, "a.cr", REP_A);
    let c = put(&dir, "c.cert", "morphism v1\nphi 0\n1\nphi 1\n2\n");
    let r = run(&["verify-cert", s(&a), s(&a), s(&c)]);
    assert_eq!(r.code, 1);
    assert!(r.out.starts_with("certificate invalid"));
}

#[test]
fn gen_is_deterministic_and_decomposes_back() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("g.cr");
    let q = dir.path().join("h.cr");
    run(&["gen", "--n", "2", "--cells", "0:2,1:3x2", "--seed", "9", "-o", s(&p)]);
    run(&["gen", "--n", "2", "--cells", "0:2,1:3x2", "--seed", "9", "-o", s(&q)]);
    assert_eq!(fs::read_to_string(&p).unwrap(), fs::read_to_string(&q).unwrap());
    let r = run(&["decompose", s(&p)]);
    assert_eq!(r.code, 0);
    assert_eq!(r.out, "cells v1\nn 2\ncell 0 2 1\ncell 1 3 2\n");
}

#[test]
fn adapted_basis_output() {
    let dir = TempDir::new().unwrap();
    let a = put(&dir, "a.cr", REP_A);
    let r = run(&["adapted-basis", s(&a)]);
    assert_eq!(r.code, 0);
    assert!(r.out.starts_with("adapted-basis v1\n"));
    assert!(r.out.contains("succ x0_0 -> x1_0"));
}

#[test]
fn single_infinite_point_is_not_admissible() {
    let dir = TempDir::new().unwrap();
    let sup = put(&dir, "s.sup", "support v1\nn 1\npoint 0 w\n");
    let r = run(&["check-admissible", s(&sup)]);
    assert_eq!(r.code, 1);
    assert!(r.out.starts_with("not admissible: counterexample ((0,w), 0, (0,w))"), "{}", r.out);
}

#[test]
fn realize_support_file() {
    let dir = TempDir::new().unwrap();
    let sup = put(&dir, "s.sup", "support v1\nn 2\npoint 1 1 1\npoint 0 2 3\n");
    assert_eq!(run(&["check-admissible", s(&sup)]).code, 0);
    let out = dir.path().join("r.cr");
    let r = run(&["realize", s(&sup), "-o", s(&out), "--field", "Fp:3"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let rep = AnyCycleRep::parse(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(rep.field_spec().to_string(), "Fp 3");
    let inv = run(&["invariants", s(&out)]);
    assert_eq!(inv.out, "kappa 0 2 3\nkappa 1 1 1\n");
}

#[test]
fn parse_error_reports_line() {
    let dir = TempDir::new().unwrap();
    let bad = put(&dir, "bad.cr", "cyclerep v1\nfield Q\nn 2\ndims 1 x\n");
    let r = run(&["invariants", s(&bad)]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("line 4"), "{}", r.err);
}

#[test]
fn field_mismatch_and_bad_flags() {
    let dir = TempDir::new().unwrap();
    let a = put(&dir, "a.cr", REP_A);
    let f = put(&dir, "f.cr", &REP_A.replace("field Q", "field Fp 2"));
    assert_eq!(run(&["iso", s(&a), s(&f)]).code, 2);
    assert_eq!(run(&["gen", "--n", "2", "--cells", "0:1", "--field", "Fp:4", "-o", "x"]).code, 2);
    assert_eq!(run(&["gen", "--n", "2", "--cells", "5:1", "-o", "x"]).code, 2);
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["--help"]).code, 0);
    assert_eq!(run(&["invariants", "/nonexistent/file.cr"]).code, 2);
}

#[test]
fn selfcheck_reports_counts() {
    let r = run(&["selfcheck", "--seed", "5", "--iters", "2"]);
    assert_eq!(r.code, 0);
    assert!(r.out.contains("total: 12 passed, 0 failed"), "{}", r.out);
}

#[test]
fn binary_exit_codes() {
    let dir = TempDir::new().unwrap();
    let a = put(&dir, "a.cr", REP_A);
    let b = put(&dir, "b.cr", REP_B);
    let bin = env!("CARGO_BIN_EXE_cyclekap");
    let st = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(st(&["iso", s(&a), s(&a)]), Some(0));
    assert_eq!(st(&["iso", s(&a), s(&b)]), Some(1));
    assert_eq!(st(&["iso", s(&a)]), Some(2));
}
