mod common;

use nlogic::calculus::{enumerate_partitions, LogicId};
use nlogic::gen::{self, GenConfig};
use nlogic::interp::{check_partition_interpolant, maehara};
use nlogic::prover::Prover;

#[test]
fn maehara_conditions_hold_on_every_partition() {
    let cfg = GenConfig::modal(2, 4, 3);
    for (i, logic) in LogicId::grid(2).into_iter().enumerate() {
        let mut rng = gen::rng(300 + i as u64);
        let mut prover = Prover::new(logic);
        let proofs = common::provable_corpus(&mut prover, &mut rng, &cfg, 40);
        for proof in proofs {
            for part in enumerate_partitions(&proof.conclusion).take(64) {
                let chi = maehara(&proof, &part, &logic).unwrap();
                assert!(!chi.has_quote_atoms());
                let report = check_partition_interpolant(&mut prover, &part, &chi).unwrap();
                assert!(
                    report.all_passed(),
                    "{logic}: ({:?} ; {:?}) gave {chi}\n{report}",
                    part.left,
                    part.right
                );
            }
        }
    }
}
