#![allow(dead_code)]

use nlogic::calculus::{FormulaSet, LogicId, ProofNode, Rule, Sequent, Split};
use nlogic::gen::{self, GenConfig, GenRng};
use nlogic::prover::Prover;
use rand::seq::SliceRandom;
use rand::Rng;

/// Random provable sequents with their prover-found proofs.
pub fn provable_corpus(prover: &mut Prover, rng: &mut GenRng, cfg: &GenConfig, count: usize) -> Vec<ProofNode> {
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < count {
        tries += 1;
        assert!(tries < count * 400, "could not find {count} provable sequents");
        let s = gen::sequent(rng, cfg, 12);
        if let Some(p) = prover.decide(&s).unwrap().proof() {
            out.push(p);
        }
    }
    out
}

pub fn cut(phi: &nlogic::Formula, l: ProofNode, r: ProofNode) -> ProofNode {
    let split = Split {
        left_ante: FormulaSet::new(),
        left_succ: FormulaSet::new(),
    };
    ProofNode::infer(Rule::Cut { formula: phi.clone(), split }, vec![l, r]).unwrap()
}

/// Proofs with cuts, built by cutting prover-found proofs against each
/// other. Every third proof carries a second, nested cut.
pub fn cut_corpus(logic: LogicId, seed: u64, count: usize) -> Vec<ProofNode> {
    let cfg = GenConfig::modal(2, 4, 3);
    let mut rng = gen::rng(seed);
    let mut prover = Prover::new(logic);
    let mut out: Vec<ProofNode> = Vec::new();
    let mut tries = 0;
    while out.len() < count {
        tries += 1;
        assert!(tries < count * 2000, "{logic}: could not build {count} cut proofs");
        let left = gen::sequent(&mut rng, &cfg, 12);
        let Some(phi) = left.formulas().cloned().collect::<Vec<_>>().choose(&mut rng).cloned() else {
            continue;
        };
        let left = Sequent {
            ante: left.ante.iter().filter(|f| **f != phi).cloned().collect(),
            succ: left.succ.clone(),
        }
        .with_succ(phi.clone());
        let mut right = gen::sequent(&mut rng, &cfg, 12);
        right.succ.remove(&phi);
        right.ante.insert(phi.clone());
        let (Some(l), Some(r)) = (
            prover.decide(&left).unwrap().proof(),
            prover.decide(&right).unwrap().proof(),
        ) else {
            continue;
        };
        let mut proof = cut(&phi, l, r);
        if out.len() % 3 == 2 && rng.gen_bool(0.8) {
            if let Some(psi) = proof.conclusion.succ.iter().next().cloned() {
                let extra = gen::sequent(&mut rng, &cfg, 12).with_ante(psi.clone());
                if let Some(e) = prover.decide(&extra).unwrap().proof() {
                    proof = cut(&psi, proof, e);
                }
            }
        }
        out.push(proof);
    }
    out
}

/// Formula pairs for the translation checks. Some pairs are random, the
/// rest are built so that the implication is often provable.
pub fn formula_pairs(logic: &LogicId, rng: &mut GenRng, cfg: &GenConfig, count: usize) -> Vec<(nlogic::Formula, nlogic::Formula)> {
    use nlogic::Formula;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = gen::formula(rng, cfg);
        let b = gen::formula(rng, cfg);
        let pair = match out.len() % 5 {
            0 => (a, b),
            1 => (Formula::and(a.clone(), b), a),
            2 => (a.clone(), Formula::or(b, a)),
            3 => {
                let (n, m) = (logic.n.min(3), logic.m.min(3));
                (Formula::box_n(n, a.clone()), Formula::box_n(m, a))
            }
            _ => (Formula::boxed(Formula::imp(a.clone(), b.clone())), Formula::imp(Formula::boxed(a), Formula::boxed(b))),
        };
        out.push(pair);
    }
    out
}

/// Random forbidden sets over the first `atoms` base names.
pub fn forbidden(rng: &mut GenRng, atoms: usize) -> nlogic::ulip::ForbiddenSets {
    use nlogic::Atom;
    let names = gen::atom_names(atoms);
    let pick = |rng: &mut GenRng| -> Vec<Atom> {
        names.iter().filter(|_| rng.gen_bool(0.35)).map(|n| Atom::base(n)).collect()
    };
    let ppos = pick(rng);
    let pneg = pick(rng);
    nlogic::ulip::ForbiddenSets::new(ppos, pneg)
}
