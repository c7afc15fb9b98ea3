//! Craig and Lyndon interpolants from cut-free proofs by Maehara's method.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::calculus::{check_proof, CheckResult, LogicId, Partition, ProofNode, Rule, Sequent};
use crate::formula::{Atom, Formula, SignedVarSet};
use crate::prover::{Prover, ProverError};
use crate::report::Report;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error("the proof contains a cut")]
    Cut,
    #[error("partition does not split the proof's conclusion")]
    BadPartition,
    #[error("{0} is not provable")]
    NotProvable(Sequent),
    #[error("malformed proof node: {0}")]
    Malformed(String),
    #[error(transparent)]
    Prover(#[from] ProverError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Craig,
    Lyndon,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Side {
    Left,
    Right,
}

fn or(a: Formula, b: Formula) -> Formula {
    match (&a, &b) {
        (Formula::Bot, _) => b,
        (_, Formula::Bot) => a,
        _ if a.is_top() || b.is_top() => Formula::top(),
        _ if a == b => a,
        _ => Formula::or(a, b),
    }
}

fn and(a: Formula, b: Formula) -> Formula {
    match (&a, &b) {
        (Formula::Bot, _) | (_, Formula::Bot) => Formula::Bot,
        _ if a.is_top() => b,
        _ if b.is_top() => a,
        _ if a == b => a,
        _ => Formula::and(a, b),
    }
}

/// The interpolant of `part` read off the cut-free `proof`.
///
/// For `part = (Γ1 ⟹ Δ1 ; Γ2 ⟹ Δ2)` the result χ satisfies
/// `Γ1 ⟹ Δ1, χ` and `χ, Γ2 ⟹ Δ2`, with the polarity conditions of
/// [`check_partition_interpolant`]. Disjunctions and conjunctions with a
/// constant are folded as they are built.
///
/// Two-premise rules (andR, orL, impL) combine the premise interpolants
/// with `∨` when the principal formula is on the left side and with `∧`
/// when it is on the right. In a premise, formulas of the conclusion keep
/// their side and new auxiliary formulas join the principal's side.
pub fn maehara(proof: &ProofNode, part: &Partition, logic: &LogicId) -> Result<Formula, InterpError> {
    if let CheckResult::Invalid { path, reason } = check_proof(proof, logic) {
        return Err(InterpError::Malformed(format!("invalid proof at {path:?}: {reason}")));
    }
    if !part.is_valid() || part.of != proof.conclusion {
        return Err(InterpError::BadPartition);
    }
    if !proof.is_cut_free() {
        return Err(InterpError::Cut);
    }
    walk(proof, &part.left)
}

/// `left` is the left side of the partition of `node.conclusion`; the right
/// side is the rest.
fn walk(node: &ProofNode, left: &Sequent) -> Result<Formula, InterpError> {
    let c = &node.conclusion;
    let ante_side = |f: &Formula| if left.ante.contains(f) { Side::Left } else { Side::Right };
    let succ_side = |f: &Formula| if left.succ.contains(f) { Side::Left } else { Side::Right };
    let malformed = || InterpError::Malformed(format!("{} at {}", node.rule.tag(), c));

    for p in &node.premises {
        if p.conclusion.is_subsequent_of(c) {
            return walk(p, &restrict(left, &p.conclusion));
        }
    }

    match &node.rule {
        Rule::Init => {
            let f = c.ante.iter().next().ok_or_else(malformed)?;
            Ok(match (ante_side(f), succ_side(f)) {
                (Side::Left, Side::Left) => Formula::Bot,
                (Side::Right, Side::Right) => Formula::top(),
                (Side::Left, Side::Right) => f.clone(),
                (Side::Right, Side::Left) => Formula::not(f.clone()),
            })
        }
        Rule::InitBot => Ok(match ante_side(&Formula::Bot) {
            Side::Left => Formula::Bot,
            Side::Right => Formula::top(),
        }),
        Rule::Nec => {
            let f = c.succ.iter().next().ok_or_else(malformed)?;
            Ok(match succ_side(f) {
                Side::Left => Formula::Bot,
                Side::Right => Formula::top(),
            })
        }
        Rule::Ros | Rule::RosBox => {
            let f = c.ante.iter().next().ok_or_else(malformed)?;
            Ok(match ante_side(f) {
                Side::Left => Formula::Bot,
                Side::Right => Formula::top(),
            })
        }
        Rule::Cut { .. } => Err(InterpError::Cut),
        rule => {
            let principal = rule.principal().ok_or_else(malformed)?;
            let in_ante = matches!(
                rule,
                Rule::AndL { .. } | Rule::OrL { .. } | Rule::ImpL { .. } | Rule::WL { .. } | Rule::AccL { .. }
            );
            let side = if in_ante { ante_side(principal) } else { succ_side(principal) };
            let mut chis = Vec::with_capacity(node.premises.len());
            for p in &node.premises {
                let mut sub = restrict(left, &p.conclusion);
                if side == Side::Left {
                    sub.ante.extend(p.conclusion.ante.iter().filter(|f| !c.ante.contains(*f)).cloned());
                    sub.succ.extend(p.conclusion.succ.iter().filter(|f| !c.succ.contains(*f)).cloned());
                }
                chis.push(walk(p, &sub)?);
            }
            let mut it = chis.into_iter();
            let first = it.next().ok_or_else(malformed)?;
            Ok(match it.next() {
                None => first,
                Some(second) => match side {
                    Side::Left => or(first, second),
                    Side::Right => and(first, second),
                },
            })
        }
    }
}

fn restrict(left: &Sequent, to: &Sequent) -> Sequent {
    Sequent {
        ante: left.ante.intersection(&to.ante).cloned().collect(),
        succ: left.succ.intersection(&to.succ).cloned().collect(),
    }
}

/// An interpolant of the provable implication `phi → psi`.
pub fn lyndon_interpolant(phi: &Formula, psi: &Formula, logic: &LogicId) -> Result<Formula, InterpError> {
    let mut prover = Prover::new(*logic);
    lyndon_interpolant_with(&mut prover, phi, psi)
}

pub fn lyndon_interpolant_with(prover: &mut Prover, phi: &Formula, psi: &Formula) -> Result<Formula, InterpError> {
    let goal = Sequent::new([phi.clone()], [psi.clone()]);
    let Some(proof) = prover.decide(&goal)?.proof() else {
        return Err(InterpError::NotProvable(goal));
    };
    let part = Partition::new(Sequent::new([phi.clone()], []), Sequent::new([], [psi.clone()]))
        .map_err(|_| InterpError::BadPartition)?;
    maehara(&proof, &part, &prover.logic())
}

fn side_vars(s: &Sequent) -> (SignedVarSet, SignedVarSet) {
    (SignedVarSet::of_all(&s.ante), SignedVarSet::of_all(&s.succ))
}

fn fmt_atoms(atoms: &BTreeSet<Atom>) -> String {
    let names: Vec<String> = atoms.iter().map(|a| a.to_string()).collect();
    format!("{{{}}}", names.join(", "))
}

fn inclusion(report: &mut Report, name: &str, sub: &BTreeSet<Atom>, sup: &BTreeSet<Atom>) {
    let extra: BTreeSet<Atom> = sub.difference(sup).cloned().collect();
    if extra.is_empty() {
        report.push(name, true);
    } else {
        report.push_detail(name, false, format!("offending atoms {}", fmt_atoms(&extra)));
    }
}

fn provability(report: &mut Report, prover: &mut Prover, name: &str, s: Sequent) -> Result<(), ProverError> {
    let ok = prover.provable(&s)?;
    report.push(name, ok);
    Ok(())
}

/// Checks conditions (a)–(d) of a partition interpolant.
pub fn check_partition_interpolant(prover: &mut Prover, part: &Partition, chi: &Formula) -> Result<Report, ProverError> {
    let mut report = Report::new();
    let (l, r) = (&part.left, &part.right);
    provability(&mut report, prover, "(a) Γ1 ⟹ Δ1, χ", l.clone().with_succ(chi.clone()))?;
    provability(&mut report, prover, "(b) χ, Γ2 ⟹ Δ2", r.clone().with_ante(chi.clone()))?;
    let (g1, d1) = side_vars(l);
    let (g2, d2) = side_vars(r);
    let v = crate::formula::signed_vars(chi);
    let meet = |a: BTreeSet<Atom>, b: BTreeSet<Atom>| -> BTreeSet<Atom> { a.intersection(&b).cloned().collect() };
    let union = |a: &BTreeSet<Atom>, b: &BTreeSet<Atom>| -> BTreeSet<Atom> { a.union(b).cloned().collect() };
    let pos_bound = meet(union(&g1.pos, &d1.neg), union(&g2.neg, &d2.pos));
    let neg_bound = meet(union(&g1.neg, &d1.pos), union(&g2.pos, &d2.neg));
    inclusion(&mut report, "(c) V⁺(χ) bound", &v.pos, &pos_bound);
    inclusion(&mut report, "(d) V⁻(χ) bound", &v.neg, &neg_bound);
    Ok(report)
}

/// Checks that `chi` interpolates `phi → psi` in `logic`.
pub fn verify_interpolant(phi: &Formula, psi: &Formula, chi: &Formula, logic: &LogicId, mode: Mode) -> Result<Report, ProverError> {
    let mut prover = Prover::new(*logic);
    verify_interpolant_with(&mut prover, phi, psi, chi, mode)
}

pub fn verify_interpolant_with(
    prover: &mut Prover,
    phi: &Formula,
    psi: &Formula,
    chi: &Formula,
    mode: Mode,
) -> Result<Report, ProverError> {
    let mut report = Report::new();
    provability(
        &mut report,
        prover,
        &format!("⊢ {} -> {}", phi, chi),
        Sequent::new([phi.clone()], [chi.clone()]),
    )?;
    provability(
        &mut report,
        prover,
        &format!("⊢ {} -> {}", chi, psi),
        Sequent::new([chi.clone()], [psi.clone()]),
    )?;
    let (vp, vq, vc) = (
        crate::formula::signed_vars(phi),
        crate::formula::signed_vars(psi),
        crate::formula::signed_vars(chi),
    );
    let meet = |a: &BTreeSet<Atom>, b: &BTreeSet<Atom>| -> BTreeSet<Atom> { a.intersection(b).cloned().collect() };
    match mode {
        Mode::Lyndon => {
            inclusion(&mut report, "V⁺(χ) ⊆ V⁺(φ) ∩ V⁺(ψ)", &vc.pos, &meet(&vp.pos, &vq.pos));
            inclusion(&mut report, "V⁻(χ) ⊆ V⁻(φ) ∩ V⁻(ψ)", &vc.neg, &meet(&vp.neg, &vq.neg));
        }
        Mode::Craig => {
            inclusion(&mut report, "V(χ) ⊆ V(φ) ∩ V(ψ)", &vc.all(), &meet(&vp.all(), &vq.all()));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::enumerate_partitions;
    use crate::classical;
    use crate::formula::parse_formula;
    use crate::prover::decide;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn seq(s: &str) -> Sequent {
        Sequent::parse(s).unwrap()
    }

    fn part(l: &str, r: &str) -> Partition {
        Partition::new(seq(l), seq(r)).unwrap()
    }

    fn proof(s: &str, logic: &LogicId) -> ProofNode {
        decide(&seq(s), logic).unwrap().proof().unwrap()
    }

    #[test]
    fn nec_partition_gives_top() {
        let logic = LogicId::n();
        let p = proof("=> box true", &logic);
        assert!(maehara(&p, &part("=>", "=> box true"), &logic).unwrap().is_top());
        assert_eq!(maehara(&p, &part("=> box true", "=>"), &logic).unwrap(), Formula::Bot);
    }

    #[test]
    fn init_partition_gives_the_formula() {
        let logic = LogicId::n();
        let p = ProofNode::init(f("p"));
        assert_eq!(maehara(&p, &part("p =>", "=> p"), &logic).unwrap(), f("p"));
        assert_eq!(maehara(&p, &part("=> p", "p =>"), &logic).unwrap(), f("~p"));
    }

    #[test]
    fn conjunction_to_disjunction() {
        let logic = LogicId::n();
        let p = proof("p & q => p | r", &logic);
        let chi = maehara(&p, &part("p & q =>", "=> p | r"), &logic).unwrap();
        assert!(classical::equivalent(&chi, &f("p")).unwrap(), "{chi}");
    }

    #[test]
    fn lyndon_examples() {
        let logic = LogicId::plain(1, 1);
        let chi = lyndon_interpolant(&f("box p & box q"), &f("box p | r"), &logic).unwrap();
        let report = verify_interpolant(&f("box p & box q"), &f("box p | r"), &chi, &logic, Mode::Lyndon).unwrap();
        assert!(report.all_passed(), "{chi}\n{report}");
        let mut prover = Prover::new(logic);
        assert!(prover.provable(&Sequent::new([chi.clone()], [f("box p")])).unwrap());
        assert!(prover.provable(&Sequent::new([f("box p")], [chi.clone()])).unwrap());

        let chi = lyndon_interpolant(&f("p"), &f("p"), &logic).unwrap();
        assert_eq!(chi, f("p"));
        assert_eq!(lyndon_interpolant(&Formula::Bot, &f("q"), &logic).unwrap(), Formula::Bot);
        assert!(matches!(
            lyndon_interpolant(&f("p"), &f("q"), &logic),
            Err(InterpError::NotProvable(_))
        ));
    }

    #[test]
    fn verify_examples() {
        let n = LogicId::n();
        assert!(verify_interpolant(&f("p & q"), &f("p | r"), &f("p"), &n, Mode::Lyndon).unwrap().all_passed());
        let report = verify_interpolant(&f("p"), &f("q"), &f("true"), &n, Mode::Lyndon).unwrap();
        let failed: Vec<_> = report.failures().map(|c| c.name.clone()).collect();
        assert_eq!(failed, vec!["⊢ true -> q".to_string()]);
        let logic = LogicId::plain(2, 1);
        assert!(verify_interpolant(&f("box p"), &f("box box p"), &f("box p"), &logic, Mode::Lyndon)
            .unwrap()
            .all_passed());
    }

    #[test]
    fn every_partition_of_small_sequents() {
        for (text, logic) in [
            ("box p, p -> q => q, box p", LogicId::n()),
            ("box box p => p", LogicId::plain(0, 2)),
            ("=> box p -> box box p", LogicId::plain(2, 1)),
            ("box box box false =>", LogicId::plus(0, 2)),
            ("box (p & ~p) => r, box false", LogicId::r(0, 0)),
        ] {
            let p = proof(text, &logic);
            let mut prover = Prover::new(logic);
            for part in enumerate_partitions(&p.conclusion) {
                let chi = maehara(&p, &part, &logic).unwrap();
                assert!(!chi.has_quote_atoms());
                let report = check_partition_interpolant(&mut prover, &part, &chi).unwrap();
                assert!(report.all_passed(), "{text} in {logic}, {:?} ; {:?}: {chi}\n{report}", part.left, part.right);
            }
        }
    }
}
