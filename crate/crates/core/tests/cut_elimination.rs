mod common;

use nlogic::calculus::{check_proof, CheckResult, LogicId, RuleTag};
use nlogic::cutelim::eliminate_cuts;

#[test]
fn injected_cuts_are_eliminated() {
    let mut modal_cases = 0;
    for (i, logic) in LogicId::grid(2).into_iter().enumerate() {
        for proof in common::cut_corpus(logic, 100 + i as u64, 40) {
            assert_eq!(check_proof(&proof, &logic), CheckResult::Valid);
            let out = eliminate_cuts(&proof, &logic).unwrap_or_else(|e| panic!("{logic}: {e}\n{}", proof.render()));
            assert_eq!(out.conclusion, proof.conclusion);
            assert!(out.is_cut_free());
            assert_eq!(check_proof(&out, &logic), CheckResult::Valid, "{logic}");
            if proof.count_rule(RuleTag::AccL) + proof.count_rule(RuleTag::AccR) > 0 {
                modal_cases += 1;
            }
        }
    }
    assert!(modal_cases > 20, "only {modal_cases} proofs exercise acc rules");
}
