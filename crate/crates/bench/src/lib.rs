//! Seeded workloads shared by the benchmarks.

use nlogic::calculus::{LogicId, ProofNode, Rule, Sequent, Split};
use nlogic::formula::Formula;
use nlogic::gen::{self, GenConfig};
use nlogic::prover::Prover;

pub fn sequents(seed: u64, count: usize) -> Vec<Sequent> {
    let cfg = GenConfig::modal(2, 4, 3);
    let mut rng = gen::rng(seed);
    (0..count).map(|_| gen::sequent(&mut rng, &cfg, 12)).collect()
}

pub fn formulas(seed: u64, count: usize) -> Vec<Formula> {
    let cfg = GenConfig::modal(3, 5, 3);
    let mut rng = gen::rng(seed);
    (0..count).map(|_| gen::formula(&mut rng, &cfg)).collect()
}

/// Prover proofs of the provable members of `sequents(seed, count)`.
pub fn proofs(logic: LogicId, seed: u64, count: usize) -> Vec<ProofNode> {
    let mut prover = Prover::new(logic);
    sequents(seed, count)
        .iter()
        .filter_map(|s| prover.decide(s).unwrap().proof())
        .collect()
}

/// Proofs of the form cut(φ) over `Γ ⟹ φ` and `φ ⟹ Δ`, where both sides
/// are provable.
pub fn cut_proofs(logic: LogicId, seed: u64, count: usize) -> Vec<ProofNode> {
    let mut prover = Prover::new(logic);
    let mut out = Vec::new();
    for (i, phi) in formulas(seed, count * 4).into_iter().enumerate() {
        let twin = Formula::boxed(phi.clone());
        let (left, right) = if i % 2 == 0 {
            (Sequent::new([phi.clone()], [phi.clone()]), Sequent::new([phi.clone(), twin.clone()], [phi.clone()]))
        } else {
            (Sequent::new([twin.clone()], [twin.clone()]), Sequent::new([twin], [Formula::or(phi.clone(), Formula::top())]))
        };
        let cut_formula = left.succ.iter().next().unwrap().clone();
        let (Some(l), Some(r)) = (prover.decide(&left).unwrap().proof(), prover.decide(&right).unwrap().proof()) else {
            continue;
        };
        let split = Split {
            left_ante: Default::default(),
            left_succ: Default::default(),
        };
        out.push(ProofNode::infer(Rule::Cut { formula: cut_formula, split }, vec![l, r]).unwrap());
        if out.len() == count {
            break;
        }
    }
    out
}
