use std::path::Path;
use std::process::{Command, Output};

use nlogic::calculus::{check_lk, check_proof, proof_from_json, proof_to_json, LogicId, ProofNode, Rule, Sequent, Split};
use nlogic::formula::parse_formula;
use nlogic::prover::decide;
use serde_json::Value;

fn nlogic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nlogic")).args(args).output().unwrap()
}

fn status(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn prove_exit_codes() {
    assert_eq!(status(&nlogic(&["prove", "--logic", "NA(2,1)", "=> box p -> box box p"])), 0);
    assert_eq!(status(&nlogic(&["prove", "--logic", "NA(0,2)", "box box box false =>"])), 1);
    assert_eq!(status(&nlogic(&["prove", "--logic", "N+A(0,2)", "box box box false =>"])), 0);
}

#[test]
fn usage_and_parse_errors_exit_two() {
    let out = nlogic(&["prove", "--logic", "NA(x)", "=>"]);
    assert_eq!(status(&out), 2);
    assert!(!out.stderr.is_empty());
    assert_eq!(status(&nlogic(&["prove", "=> p &"])), 2);
    assert_eq!(status(&nlogic(&["translate", "--dir", "sideways", "p"])), 2);
    assert_eq!(status(&nlogic(&["check-proof", "/nonexistent/proof.json"])), 2);
}

#[test]
fn translate_example() {
    let out = nlogic(&["translate", "--logic", "NA(2,1)", "--dir", "sharp", "box box p"]);
    assert_eq!(status(&out), 0);
    assert_eq!(stdout(&out).trim(), "q{box box p} | q{box p}");
    let out = nlogic(&["translate", "--logic", "NA(2,1)", "--dir", "sharp", "box box p", "--format", "json"]);
    let v = json(&out);
    let back = parse_formula(v["translation"].as_str().unwrap()).unwrap();
    assert_eq!(back, parse_formula("q{box box p} | q{box p}").unwrap());
}

#[test]
fn proof_json_round_trips_through_check_proof() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("proof.json");
    let out = nlogic(&["prove", "--logic", "NA(2,1)", "=> box p -> box box p", "--proof", path_str(&file), "--format", "json"]);
    assert_eq!(status(&out), 0);
    let v = json(&out);
    assert_eq!(v["provable"], Value::Bool(true));
    let written = proof_from_json(&std::fs::read_to_string(&file).unwrap()).unwrap();
    let inline = proof_from_json(&v["proof"].to_string()).unwrap();
    assert_eq!(written, inline);
    assert!(check_proof(&written, &LogicId::plain(2, 1)).is_valid());
    assert_eq!(status(&nlogic(&["check-proof", "--logic", "NA(2,1)", path_str(&file)])), 0);
    assert_eq!(status(&nlogic(&["check-proof", "--logic", "NA(1,1)", path_str(&file)])), 1);
    let out = nlogic(&["check-proof", "--logic", "NA(1,1)", path_str(&file), "--format", "json"]);
    assert_eq!(json(&out)["valid"], Value::Bool(false));
}

#[test]
fn elim_cut_writes_a_cut_free_proof() {
    let logic = LogicId::plain(0, 2);
    let s = |t: &str| Sequent::parse(t).unwrap();
    let left = decide(&s("box box p => box box p"), &logic).unwrap().proof().unwrap();
    let right = decide(&s("box box p => p"), &logic).unwrap().proof().unwrap();
    let cut = ProofNode::infer(
        Rule::Cut {
            formula: parse_formula("box box p").unwrap(),
            split: Split {
                left_ante: Default::default(),
                left_succ: Default::default(),
            },
        },
        vec![left, right],
    )
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.json");
    let output = dir.path().join("out.json");
    std::fs::write(&input, proof_to_json(&cut)).unwrap();
    let out = nlogic(&["elim-cut", "--logic", "NA(0,2)", path_str(&input), "-o", path_str(&output)]);
    assert_eq!(status(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let result = proof_from_json(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert!(result.is_cut_free());
    assert_eq!(result.conclusion, cut.conclusion);
    assert!(check_proof(&result, &logic).is_valid());
}

#[test]
fn emulate_writes_an_lk_proof() {
    let logic = LogicId::plain(1, 2);
    let proof = decide(&Sequent::parse("box box p => box p").unwrap(), &logic).unwrap().proof().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.json");
    std::fs::write(&input, proof_to_json(&proof)).unwrap();
    let out = nlogic(&["emulate", "--logic", "NA(1,2)", path_str(&input)]);
    assert_eq!(status(&out), 0);
    let lk = proof_from_json(&stdout(&out)).unwrap();
    assert!(check_lk(&lk).is_valid());
    assert_eq!(lk.conclusion, Sequent::parse("q{box box p} & q{box p} => q{box p}").unwrap());
    assert_eq!(status(&nlogic(&["emulate", "--logic", "NA(1,1)", path_str(&input)])), 2);
}

#[test]
fn interpolate_and_uniform() {
    let out = nlogic(&["interpolate", "--logic", "NA(1,1)", "p & box q", "box q | r", "--format", "json"]);
    assert_eq!(status(&out), 0);
    let v = json(&out);
    assert_eq!(parse_formula(v["interpolant"].as_str().unwrap()).unwrap(), parse_formula("box q").unwrap());
    assert_eq!(status(&nlogic(&["interpolate", "--logic", "NA(1,1)", "p", "q"])), 1);
    assert_eq!(status(&nlogic(&["interpolate", "--mode", "craig", "p & q", "p | r"])), 0);

    let out = nlogic(&["uniform", "--logic", "NA(1,1)", "box p & box q", "--ppos", "q", "--format", "json"]);
    assert_eq!(status(&out), 0);
    assert_eq!(json(&out)["interpolant"], Value::String("box p".into()));
    let out = nlogic(&["uniform", "p", "--ppos", "p"]);
    assert_eq!(status(&out), 0);
    assert_eq!(stdout(&out).lines().next(), Some("true"));
}
