//! Cut elimination for the GNxA(m,n) calculi.
//!
//! Cuts are removed uppermost first. [`cut_admit`] turns cut-free proofs of
//! `Γ1 ⟹ Δ1, φ` and `φ, Γ2 ⟹ Δ2` into a cut-free proof of
//! `Γ1, Γ2 ⟹ Δ1, Δ2` by recursion on the cut formula and then on the two
//! proofs. Rebuilt nodes take the smallest context their premises allow and
//! are weakened back up afterwards.

use thiserror::Error;

use crate::calculus::{check_proof, weaken_to, BuildError, CheckResult, LogicId, ProofNode, Rule, Sequent};
use crate::formula::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CutElimError {
    #[error("input proof is invalid at {path:?}: {reason}")]
    InvalidInput { path: Vec<usize>, reason: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl From<BuildError> for CutElimError {
    fn from(e: BuildError) -> Self {
        CutElimError::Internal(e.to_string())
    }
}

fn internal(msg: impl Into<String>) -> CutElimError {
    CutElimError::Internal(msg.into())
}

/// Returns a cut-free proof of the same end-sequent.
pub fn eliminate_cuts(proof: &ProofNode, logic: &LogicId) -> Result<ProofNode, CutElimError> {
    if let CheckResult::Invalid { path, reason } = check_proof(proof, logic) {
        return Err(CutElimError::InvalidInput {
            path,
            reason: reason.to_string(),
        });
    }
    if proof.is_cut_free() {
        return Ok(proof.clone());
    }
    Eliminator { logic: *logic }.elim(proof)
}

/// Strips `n - m` leading boxes from a cut-free proof of `⟹ □^n ψ`.
pub fn lower_box(proof: &ProofNode, logic: &LogicId) -> Result<ProofNode, CutElimError> {
    if logic.n <= logic.m {
        return Err(CutElimError::Precondition(format!("lower_box needs n > m, got {logic}")));
    }
    let c = &proof.conclusion;
    let ok = c.ante.is_empty() && c.succ.len() == 1 && c.succ.iter().all(|f| f.strip_boxes(logic.n).is_some());
    if !ok {
        return Err(CutElimError::Precondition(format!(
            "conclusion {c} is not ⟹ □^{} ψ",
            logic.n
        )));
    }
    peel(proof, logic.n - logic.m, false)
}

/// Peels `k` nec nodes (or ros nodes when `ante`), skipping no-op weakenings.
fn peel(proof: &ProofNode, k: usize, ante: bool) -> Result<ProofNode, CutElimError> {
    let mut cur = proof;
    let mut left = k;
    while left > 0 {
        match (&cur.rule, ante) {
            (Rule::Nec, false) | (Rule::Ros, true) => {
                cur = &cur.premises[0];
                left -= 1;
            }
            (Rule::WR { .. }, false) | (Rule::WL { .. }, true)
                if cur.premises[0].conclusion == cur.conclusion =>
            {
                cur = &cur.premises[0];
            }
            (rule, _) => {
                return Err(internal(format!(
                    "cannot lower a box through {} at {}",
                    rule.tag(),
                    cur.conclusion
                )))
            }
        }
    }
    Ok(cur.clone())
}

struct Eliminator {
    logic: LogicId,
}

/// Conclusion of a cut on `phi` between sequents `l` and `r`.
fn cut_target(phi: &Formula, l: &Sequent, r: &Sequent) -> Sequent {
    let mut ante = l.ante.clone();
    ante.extend(r.ante.iter().filter(|f| *f != phi).cloned());
    let mut succ: crate::calculus::FormulaSet = l.succ.iter().filter(|f| *f != phi).cloned().collect();
    succ.extend(r.succ.iter().cloned());
    Sequent { ante, succ }
}

fn principal_right(node: &ProofNode, phi: &Formula) -> bool {
    match &node.rule {
        Rule::AndR { principal }
        | Rule::OrR { principal, .. }
        | Rule::ImpR { principal }
        | Rule::WR { principal }
        | Rule::AccR { principal } => principal == phi,
        Rule::Nec | Rule::Init => true,
        _ => false,
    }
}

fn principal_left(node: &ProofNode, phi: &Formula) -> bool {
    match &node.rule {
        Rule::AndL { principal, .. }
        | Rule::OrL { principal }
        | Rule::ImpL { principal, .. }
        | Rule::WL { principal }
        | Rule::AccL { principal } => principal == phi,
        Rule::Ros | Rule::RosBox | Rule::Init | Rule::InitBot => true,
        _ => false,
    }
}

impl Eliminator {
    fn elim(&self, node: &ProofNode) -> Result<ProofNode, CutElimError> {
        let premises = node
            .premises
            .iter()
            .map(|p| if p.is_cut_free() { Ok(p.clone()) } else { self.elim(p) })
            .collect::<Result<Vec<_>, _>>()?;
        match &node.rule {
            Rule::Cut { formula, .. } => {
                let [l, r] = <[ProofNode; 2]>::try_from(premises).map_err(|_| internal("cut arity"))?;
                let proof = self.cut_admit(formula, &l, &r)?;
                Ok(weaken_to(proof, &node.conclusion)?)
            }
            _ => Ok(ProofNode {
                conclusion: node.conclusion.clone(),
                rule: node.rule.clone(),
                premises,
            }),
        }
    }

    /// Rebuilds `rule` over new premises with the smallest context.
    fn rebuild(&self, rule: &Rule, premises: Vec<ProofNode>) -> Result<ProofNode, CutElimError> {
        match rule {
            Rule::AccL { principal } | Rule::AccR { principal } => {
                let left = matches!(rule, Rule::AccL { .. });
                let premise = premises.into_iter().next().ok_or_else(|| internal("acc arity"))?;
                Ok(ProofNode::infer_acc(left, principal.clone(), self.logic.m, self.logic.n, premise)?)
            }
            _ => Ok(ProofNode::infer(rule.clone(), premises)?),
        }
    }

    fn finish(&self, proof: ProofNode, target: &Sequent) -> Result<ProofNode, CutElimError> {
        if !proof.conclusion.is_subsequent_of(target) {
            return Err(internal(format!(
                "reduction produced {} outside the cut conclusion {target}",
                proof.conclusion
            )));
        }
        Ok(weaken_to(proof, target)?)
    }

    /// A cut-free proof of `cut_target(phi, l, r)`.
    fn cut_admit(&self, phi: &Formula, l: &ProofNode, r: &ProofNode) -> Result<ProofNode, CutElimError> {
        let (lc, rc) = (&l.conclusion, &r.conclusion);
        if !lc.succ.contains(phi) || !rc.ante.contains(phi) {
            return Err(internal(format!("cut formula {phi} missing from {lc} or {rc}")));
        }
        let target = cut_target(phi, lc, rc);
        if matches!(l.rule, Rule::Init) {
            return self.finish(r.clone(), &target);
        }
        if matches!(r.rule, Rule::Init) {
            return self.finish(l.clone(), &target);
        }

        // φ is not principal on the left: push the cut into the premises.
        if !principal_right(l, phi) || matches!(l.rule, Rule::WR { .. }) {
            if let Rule::WR { principal } = &l.rule {
                if principal == phi {
                    let p = &l.premises[0];
                    let inner = if p.conclusion.succ.contains(phi) {
                        self.cut_admit(phi, p, r)?
                    } else {
                        p.clone()
                    };
                    return self.finish(inner, &target);
                }
            }
            let mut premises = Vec::with_capacity(l.premises.len());
            for p in &l.premises {
                let q = if p.conclusion.succ.contains(phi) {
                    self.cut_admit(phi, p, r)?
                } else {
                    p.clone()
                };
                if q.conclusion.is_subsequent_of(&target) {
                    return self.finish(q, &target);
                }
                premises.push(q);
            }
            let node = self.rebuild(&l.rule, premises)?;
            return self.finish(node, &target);
        }

        // φ is not principal on the right.
        if !principal_left(r, phi) || matches!(r.rule, Rule::WL { .. }) {
            if let Rule::WL { principal } = &r.rule {
                if principal == phi {
                    let p = &r.premises[0];
                    let inner = if p.conclusion.ante.contains(phi) {
                        self.cut_admit(phi, l, p)?
                    } else {
                        p.clone()
                    };
                    return self.finish(inner, &target);
                }
            }
            let mut premises = Vec::with_capacity(r.premises.len());
            for p in &r.premises {
                let q = if p.conclusion.ante.contains(phi) {
                    self.cut_admit(phi, l, p)?
                } else {
                    p.clone()
                };
                if q.conclusion.is_subsequent_of(&target) {
                    return self.finish(q, &target);
                }
                premises.push(q);
            }
            let node = self.rebuild(&r.rule, premises)?;
            return self.finish(node, &target);
        }

        // Principal on both sides. Premises that still contain φ are cut
        // against the whole other proof first.
        let left_star = |i: usize| -> Result<ProofNode, CutElimError> {
            let p = &l.premises[i];
            if p.conclusion.succ.contains(phi) {
                self.cut_admit(phi, p, r)
            } else {
                Ok(p.clone())
            }
        };
        let right_star = |i: usize| -> Result<ProofNode, CutElimError> {
            let q = &r.premises[i];
            if q.conclusion.ante.contains(phi) {
                self.cut_admit(phi, l, q)
            } else {
                Ok(q.clone())
            }
        };
        let result = match (&l.rule, &r.rule, phi) {
            (Rule::AndR { .. }, Rule::AndL { i, .. }, Formula::And(a, b)) => {
                let (aux, idx) = if *i == 1 { (a, 0) } else { (b, 1) };
                let p = left_star(idx)?;
                let q = right_star(0)?;
                self.cut_admit(aux, &p, &q)?
            }
            (Rule::OrR { i, .. }, Rule::OrL { .. }, Formula::Or(a, b)) => {
                let (aux, idx) = if *i == 1 { (a, 0) } else { (b, 1) };
                let p = left_star(0)?;
                let q = right_star(idx)?;
                self.cut_admit(aux, &p, &q)?
            }
            (Rule::ImpR { .. }, Rule::ImpL { .. }, Formula::Imp(a, b)) => {
                let p = left_star(0)?;
                let q1 = right_star(0)?;
                let q2 = right_star(1)?;
                let x = self.cut_admit(a, &q1, &p)?;
                self.cut_admit(b, &x, &q2)?
            }
            (Rule::Nec, Rule::AccL { .. }, _) => {
                let LogicId { m, n, .. } = self.logic;
                let (k, core) = phi.box_decompose();
                let aux = Formula::box_n(k - n + m, core.clone());
                let q = right_star(0)?;
                let lowered = peel(l, n - m, false)?;
                self.cut_admit(&aux, &lowered, &q)?
            }
            (Rule::AccR { .. }, Rule::Ros, _) => {
                let LogicId { m, n, .. } = self.logic;
                let (k, core) = phi.box_decompose();
                let aux = Formula::box_n(k - m + n, core.clone());
                let p = left_star(0)?;
                let lowered = peel(r, m - n, true)?;
                self.cut_admit(&aux, &p, &lowered)?
            }
            (Rule::Nec, Rule::Ros | Rule::RosBox, _) => {
                return Err(internal(format!(
                    "nec against {} on {phi} would prove the empty sequent",
                    r.rule.tag()
                )))
            }
            (lr, rr, _) => {
                return Err(internal(format!(
                    "no reduction for {} against {} on {phi}",
                    lr.tag(),
                    rr.tag()
                )))
            }
        };
        self.finish(result, &target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{Split, FormulaSet};
    use crate::formula::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn seq(s: &str) -> Sequent {
        Sequent::parse(s).unwrap()
    }

    fn cut(phi: &str, l: ProofNode, r: ProofNode) -> ProofNode {
        let empty = Split {
            left_ante: FormulaSet::new(),
            left_succ: FormulaSet::new(),
        };
        ProofNode::infer(Rule::Cut { formula: f(phi), split: empty }, vec![l, r]).unwrap()
    }

    fn top_proof() -> ProofNode {
        ProofNode::infer(Rule::ImpR { principal: f("true") }, vec![ProofNode::init(Formula::Bot)]).unwrap()
    }

    #[test]
    fn axiom_cut() {
        let logic = LogicId::n();
        let proof = cut("p", ProofNode::init(f("p")), ProofNode::init(f("p")));
        let out = eliminate_cuts(&proof, &logic).unwrap();
        assert_eq!(out, ProofNode::init(f("p")));
    }

    #[test]
    fn nec_against_acc_l() {
        let logic = LogicId::plain(0, 2);
        let nec2 = ProofNode::infer(Rule::Nec, vec![ProofNode::infer(Rule::Nec, vec![top_proof()]).unwrap()]).unwrap();
        assert_eq!(nec2.conclusion, seq("=> box box true"));
        let premise = ProofNode::infer(Rule::WL { principal: f("box box true") }, vec![ProofNode::init(f("true"))]).unwrap();
        let acc = ProofNode::infer_acc(true, f("box box true"), 0, 2, premise).unwrap();
        assert_eq!(acc.conclusion, seq("box box true => true"));
        let proof = cut("box box true", nec2, acc);
        assert!(check_proof(&proof, &logic).is_valid());
        let out = eliminate_cuts(&proof, &logic).unwrap();
        assert_eq!(out.conclusion, seq("=> true"));
        assert!(out.is_cut_free());
        assert!(check_proof(&out, &logic).is_valid());
    }

    #[test]
    fn cut_free_input_is_unchanged() {
        let logic = LogicId::n();
        let p = top_proof();
        assert_eq!(eliminate_cuts(&p, &logic).unwrap(), p);
    }

    #[test]
    fn lower_box_examples() {
        let nec = |p: ProofNode| ProofNode::infer(Rule::Nec, vec![p]).unwrap();
        let two = nec(nec(top_proof()));
        let out = lower_box(&two, &LogicId::plain(0, 2)).unwrap();
        assert_eq!(out.conclusion, seq("=> true"));
        assert!(check_proof(&out, &LogicId::plain(0, 2)).is_valid());
        let three = nec(nec(nec(top_proof())));
        let out = lower_box(&three, &LogicId::plain(1, 3)).unwrap();
        assert_eq!(out.conclusion, seq("=> box true"));
        assert!(matches!(lower_box(&two, &LogicId::plain(2, 2)), Err(CutElimError::Precondition(_))));
    }

    #[test]
    fn acc_r_against_ros() {
        // NRA(1,0): □p ⟹ p∨... uses accR; cut □⊥ between ⟹ □⊥, ⊥ (accR) and □⊥ ⟹ (ros).
        let logic = LogicId::r(1, 0);
        let base = weaken_to(ProofNode::init(f("false")), &seq("false => false, box false")).unwrap();
        let acc = ProofNode::infer_acc(false, f("box false"), 1, 0, base).unwrap();
        assert_eq!(acc.conclusion, seq("false => box false"));
        let ros = ProofNode::infer(Rule::Ros, vec![ProofNode::init_bot()]).unwrap();
        let proof = cut("box false", acc, ros);
        assert!(check_proof(&proof, &logic).is_valid());
        let out = eliminate_cuts(&proof, &logic).unwrap();
        assert_eq!(out.conclusion, seq("false =>"));
        assert!(out.is_cut_free());
        assert!(check_proof(&out, &logic).is_valid());
    }

    #[test]
    fn invalid_input_is_rejected() {
        let bad = ProofNode {
            conclusion: seq("p => q"),
            rule: Rule::Init,
            premises: vec![],
        };
        assert!(matches!(eliminate_cuts(&bad, &LogicId::n()), Err(CutElimError::InvalidInput { .. })));
    }
}
