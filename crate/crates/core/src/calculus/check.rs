use std::collections::BTreeSet;
use std::fmt;

use super::{rule_set, FormulaSet, LogicId, ProofNode, Rule, RuleTag, Sequent, Split};
use crate::formula::Formula;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvalidReason {
    UnknownRule(String),
    InactiveRule(RuleTag),
    SchemaMismatch(String),
    PremiseCount { expected: usize, found: usize },
}

impl InvalidReason {
    pub fn code(&self) -> &'static str {
        match self {
            InvalidReason::UnknownRule(_) => "unknown-rule",
            InvalidReason::InactiveRule(_) => "inactive-rule",
            InvalidReason::SchemaMismatch(_) => "schema-mismatch",
            InvalidReason::PremiseCount { .. } => "premise-count",
        }
    }
}

impl fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvalidReason::UnknownRule(name) => write!(f, "unknown rule {name:?}"),
            InvalidReason::InactiveRule(tag) => write!(f, "rule {tag} is not active in this calculus"),
            InvalidReason::SchemaMismatch(msg) => write!(f, "schema mismatch: {msg}"),
            InvalidReason::PremiseCount { expected, found } => {
                write!(f, "expected {expected} premises, found {found}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckResult {
    Valid,
    /// `path` lists premise indices from the root to the offending node.
    Invalid { path: Vec<usize>, reason: InvalidReason },
}

impl CheckResult {
    pub fn is_valid(&self) -> bool {
        matches!(self, CheckResult::Valid)
    }
}

/// Checks a proof in GNxA(m,n) for the given logic.
pub fn check_proof(proof: &ProofNode, logic: &LogicId) -> CheckResult {
    check_with(proof, &rule_set(logic), logic.m, logic.n)
}

/// Checks a proof in plain LK (cut allowed).
pub fn check_lk(proof: &ProofNode) -> CheckResult {
    check_with(proof, &RuleTag::LK.into_iter().collect(), 0, 0)
}

/// Checks every node against its schema; `m`, `n` parameterise accL/accR.
pub fn check_with(proof: &ProofNode, rules: &BTreeSet<RuleTag>, m: usize, n: usize) -> CheckResult {
    let mut path = Vec::new();
    match walk(proof, rules, m, n, &mut path) {
        Ok(()) => CheckResult::Valid,
        Err(reason) => CheckResult::Invalid { path, reason },
    }
}

fn walk(
    node: &ProofNode,
    rules: &BTreeSet<RuleTag>,
    m: usize,
    n: usize,
    path: &mut Vec<usize>,
) -> Result<(), InvalidReason> {
    check_node(node, rules, m, n)?;
    for (i, p) in node.premises.iter().enumerate() {
        path.push(i);
        walk(p, rules, m, n, path)?;
        path.pop();
    }
    Ok(())
}

fn mismatch(msg: impl Into<String>) -> InvalidReason {
    InvalidReason::SchemaMismatch(msg.into())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Ante,
    Succ,
}

/// Existence of a shared context `ctx` with `premise_i = ctx ∪ aux_i` and
/// `conclusion = ctx ∪ {principal}`, checked side by side. The smallest
/// candidate context works whenever any does.
fn shared_context(
    conclusion: &Sequent,
    principal: Option<(Side, &Formula)>,
    premises: &[(&Sequent, Vec<(Side, &Formula)>)],
) -> bool {
    for side in [Side::Ante, Side::Succ] {
        let pick = |s: &Sequent| -> FormulaSet {
            match side {
                Side::Ante => s.ante.clone(),
                Side::Succ => s.succ.clone(),
            }
        };
        let concl = pick(conclusion);
        let mut ctx = concl.clone();
        if let Some((ps, pf)) = principal {
            if ps == side {
                if !concl.contains(pf) {
                    return false;
                }
                ctx.remove(pf);
            }
        }
        let mut prem_sets = Vec::new();
        for (p, aux) in premises {
            let set = pick(p);
            let mut rest = set.clone();
            for (s, f) in aux {
                if *s == side {
                    if !set.contains(*f) {
                        return false;
                    }
                    rest.remove(*f);
                }
            }
            ctx.extend(rest);
            prem_sets.push(set);
        }
        if !ctx.is_subset(&concl) || prem_sets.iter().any(|s| !ctx.is_subset(s)) {
            return false;
        }
    }
    true
}

fn split_context(conclusion: &Sequent, split: &Split, left: &Sequent, right: &Sequent, left_aux: &Formula, right_aux: &Formula, principal: Option<&Formula>) -> Result<(), InvalidReason> {
    if left.ante != split.left_ante {
        return Err(mismatch("left premise antecedent differs from the recorded split"));
    }
    let mut expected_left_succ = split.left_succ.clone();
    expected_left_succ.insert(left_aux.clone());
    if left.succ != expected_left_succ {
        return Err(mismatch("left premise succedent differs from the recorded split"));
    }
    if !right.ante.contains(right_aux) {
        return Err(mismatch("right premise lacks its auxiliary formula"));
    }
    let succ: FormulaSet = split.left_succ.union(&right.succ).cloned().collect();
    if succ != conclusion.succ {
        return Err(mismatch("succedent is not the union of the split"));
    }
    let mut without = right.ante.clone();
    without.remove(right_aux);
    for gamma2 in [without, right.ante.clone()] {
        let mut ante: FormulaSet = split.left_ante.union(&gamma2).cloned().collect();
        if let Some(p) = principal {
            ante.insert(p.clone());
        }
        if ante == conclusion.ante {
            return Ok(());
        }
    }
    Err(mismatch("antecedent is not the union of the split"))
}

fn check_node(node: &ProofNode, rules: &BTreeSet<RuleTag>, m: usize, n: usize) -> Result<(), InvalidReason> {
    let tag = node.rule.tag();
    let expected = node.rule.arity();
    if node.premises.len() != expected {
        return Err(InvalidReason::PremiseCount {
            expected,
            found: node.premises.len(),
        });
    }
    if !rules.contains(&tag) {
        return Err(InvalidReason::InactiveRule(tag));
    }
    let c = &node.conclusion;
    let prem = |i: usize| &node.premises[i].conclusion;
    let ok = |b: bool, msg: &str| if b { Ok(()) } else { Err(mismatch(msg)) };
    match &node.rule {
        Rule::Init => {
            let mut it = c.ante.iter();
            ok(
                c.ante.len() == 1 && c.succ.len() == 1 && it.next() == c.succ.iter().next(),
                "initial sequent must be exactly φ ⟹ φ",
            )
        }
        Rule::InitBot => ok(
            c.succ.is_empty() && c.ante.len() == 1 && c.ante.contains(&Formula::Bot),
            "initial sequent must be exactly ⊥ ⟹",
        ),
        Rule::AndL { principal, i } => {
            let Formula::And(a, b) = principal else {
                return Err(mismatch("andL principal is not a conjunction"));
            };
            let aux = match i {
                1 => a,
                2 => b,
                _ => return Err(mismatch("andL index must be 1 or 2")),
            };
            ok(
                shared_context(c, Some((Side::Ante, principal)), &[(prem(0), vec![(Side::Ante, aux)])]),
                "andL context mismatch",
            )
        }
        Rule::OrR { principal, i } => {
            let Formula::Or(a, b) = principal else {
                return Err(mismatch("orR principal is not a disjunction"));
            };
            let aux = match i {
                1 => a,
                2 => b,
                _ => return Err(mismatch("orR index must be 1 or 2")),
            };
            ok(
                shared_context(c, Some((Side::Succ, principal)), &[(prem(0), vec![(Side::Succ, aux)])]),
                "orR context mismatch",
            )
        }
        Rule::AndR { principal } => {
            let Formula::And(a, b) = principal else {
                return Err(mismatch("andR principal is not a conjunction"));
            };
            ok(
                shared_context(
                    c,
                    Some((Side::Succ, principal)),
                    &[(prem(0), vec![(Side::Succ, a)]), (prem(1), vec![(Side::Succ, b)])],
                ),
                "andR context mismatch",
            )
        }
        Rule::OrL { principal } => {
            let Formula::Or(a, b) = principal else {
                return Err(mismatch("orL principal is not a disjunction"));
            };
            ok(
                shared_context(
                    c,
                    Some((Side::Ante, principal)),
                    &[(prem(0), vec![(Side::Ante, a)]), (prem(1), vec![(Side::Ante, b)])],
                ),
                "orL context mismatch",
            )
        }
        Rule::ImpR { principal } => {
            let Formula::Imp(a, b) = principal else {
                return Err(mismatch("impR principal is not an implication"));
            };
            ok(
                shared_context(
                    c,
                    Some((Side::Succ, principal)),
                    &[(prem(0), vec![(Side::Ante, a), (Side::Succ, b)])],
                ),
                "impR context mismatch",
            )
        }
        Rule::ImpL { principal, split } => {
            let Formula::Imp(a, b) = principal else {
                return Err(mismatch("impL principal is not an implication"));
            };
            split_context(c, split, prem(0), prem(1), a, b, Some(principal))
        }
        Rule::Cut { formula, split } => split_context(c, split, prem(0), prem(1), formula, formula, None),
        Rule::WL { principal } => ok(
            shared_context(c, Some((Side::Ante, principal)), &[(prem(0), vec![])]),
            "wL context mismatch",
        ),
        Rule::WR { principal } => ok(
            shared_context(c, Some((Side::Succ, principal)), &[(prem(0), vec![])]),
            "wR context mismatch",
        ),
        Rule::Nec => {
            let p = prem(0);
            let ok_shape = c.ante.is_empty()
                && c.succ.len() == 1
                && p.ante.is_empty()
                && p.succ.len() == 1
                && c.succ.iter().next() == p.succ.iter().next().map(|f| Formula::boxed(f.clone())).as_ref();
            ok(ok_shape, "nec must derive exactly ⟹ □φ from ⟹ φ")
        }
        Rule::Ros => {
            let p = prem(0);
            let ok_shape = c.succ.is_empty()
                && c.ante.len() == 1
                && p.succ.is_empty()
                && p.ante.len() == 1
                && c.ante.iter().next() == p.ante.iter().next().map(|f| Formula::boxed(f.clone())).as_ref();
            ok(ok_shape, "ros must derive exactly □φ ⟹ from φ ⟹")
        }
        Rule::RosBox => {
            let p = prem(0);
            let ok_shape = c.succ.is_empty()
                && c.ante.len() == 1
                && p.succ.is_empty()
                && p.ante.len() == 1
                && matches!(p.ante.iter().next(), Some(Formula::Box(_)))
                && c.ante.iter().next() == p.ante.iter().next().map(|f| Formula::boxed(f.clone())).as_ref();
            ok(ok_shape, "rosbox must derive exactly □□φ ⟹ from □φ ⟹")
        }
        Rule::AccL { principal } => {
            let Some(body) = principal.strip_boxes(n) else {
                return Err(mismatch("accL principal has fewer than n boxes"));
            };
            let aux = Formula::box_n(m, body.clone());
            ok(
                shared_context(
                    c,
                    Some((Side::Ante, principal)),
                    &[(prem(0), vec![(Side::Ante, &aux), (Side::Ante, principal)])],
                ),
                "accL context mismatch",
            )
        }
        Rule::AccR { principal } => {
            let Some(body) = principal.strip_boxes(m) else {
                return Err(mismatch("accR principal has fewer than m boxes"));
            };
            let aux = Formula::box_n(n, body.clone());
            ok(
                shared_context(
                    c,
                    Some((Side::Succ, principal)),
                    &[(prem(0), vec![(Side::Succ, &aux), (Side::Succ, principal)])],
                ),
                "accR context mismatch",
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn seq(s: &str) -> Sequent {
        Sequent::parse(s).unwrap()
    }

    #[test]
    fn init_is_valid() {
        let proof = ProofNode::init(f("p"));
        assert!(check_proof(&proof, &LogicId::n()).is_valid());
    }

    #[test]
    fn init_with_side_formula_is_rejected() {
        let node = ProofNode {
            conclusion: seq("p, q => p"),
            rule: Rule::Init,
            premises: vec![],
        };
        assert!(matches!(
            check_proof(&node, &LogicId::n()),
            CheckResult::Invalid { reason: InvalidReason::SchemaMismatch(_), .. }
        ));
    }

    #[test]
    fn nec_over_unprovable_premise_is_rejected() {
        let leaf = ProofNode {
            conclusion: seq("=> p"),
            rule: Rule::Init,
            premises: vec![],
        };
        let node = ProofNode {
            conclusion: seq("=> box p"),
            rule: Rule::Nec,
            premises: vec![leaf],
        };
        match check_proof(&node, &LogicId::n()) {
            CheckResult::Invalid { path, .. } => assert_eq!(path, vec![0]),
            CheckResult::Valid => panic!("accepted a proof of => p"),
        }
    }

    #[test]
    fn inactive_acc_l() {
        let logic = LogicId::plain(2, 1);
        let premise = weaken_init("box p", "box p, box box p => box p");
        let node = ProofNode {
            conclusion: seq("box p => box p"),
            rule: Rule::AccL { principal: f("box p") },
            premises: vec![premise],
        };
        assert_eq!(
            check_proof(&node, &logic),
            CheckResult::Invalid {
                path: vec![],
                reason: InvalidReason::InactiveRule(RuleTag::AccL)
            }
        );
    }

    fn weaken_init(phi: &str, target: &str) -> ProofNode {
        super::super::weaken_to(ProofNode::init(f(phi)), &seq(target)).unwrap()
    }

    #[test]
    fn acc_l_instance() {
        // □p ⟹ p in NA(0,1): premise p, □p ⟹ p.
        let logic = LogicId::plain(0, 1);
        let premise = weaken_init("p", "p, box p => p");
        let node = ProofNode::infer_acc(true, f("box p"), 0, 1, premise).unwrap();
        assert_eq!(node.conclusion, seq("box p => p"));
        assert!(check_proof(&node, &logic).is_valid());
        // Wrong aux formula for NA(0,2).
        assert!(!check_proof(&node, &LogicId::plain(0, 2)).is_valid());
    }

    #[test]
    fn premise_count() {
        let node = ProofNode {
            conclusion: seq("=> box p"),
            rule: Rule::Nec,
            premises: vec![],
        };
        assert!(matches!(
            check_proof(&node, &LogicId::n()),
            CheckResult::Invalid { reason: InvalidReason::PremiseCount { expected: 1, found: 0 }, .. }
        ));
    }

    #[test]
    fn imp_l_split_must_match() {
        let a = f("p");
        let b = f("q");
        let left = ProofNode::init(a.clone());
        let right = ProofNode::init(b.clone());
        let node = ProofNode::infer(
            Rule::ImpL {
                principal: Formula::imp(a, b),
                split: Split { left_ante: FormulaSet::new(), left_succ: FormulaSet::new() },
            },
            vec![left, right],
        )
        .unwrap();
        assert_eq!(node.conclusion, seq("p, p -> q => q"));
        assert!(check_lk(&node).is_valid());
        let mut broken = node.clone();
        if let Rule::ImpL { split, .. } = &mut broken.rule {
            split.left_succ.insert(f("r"));
        }
        assert!(!check_lk(&broken).is_valid());
    }

    #[test]
    fn shared_context_allows_principal_in_context() {
        // p & q, p => r from p & q, p => r via andL with i = 1: context keeps p & q.
        let base = weaken_init("r", "p & q, p, r => r");
        let node = ProofNode {
            conclusion: seq("p & q, r => r"),
            rule: Rule::AndL { principal: f("p & q"), i: 1 },
            premises: vec![base],
        };
        assert!(check_lk(&node).is_valid());
        let no_op = ProofNode {
            conclusion: seq("p => p"),
            rule: Rule::WL { principal: f("p") },
            premises: vec![ProofNode::init(f("p"))],
        };
        assert!(check_lk(&no_op).is_valid());
    }

    #[test]
    fn lk_checker_rejects_modal_rules() {
        let nec = ProofNode::infer(Rule::Nec, vec![ProofNode::infer(Rule::ImpR { principal: f("true") }, vec![ProofNode::init(Formula::Bot)]).unwrap()]).unwrap();
        assert!(check_proof(&nec, &LogicId::n()).is_valid());
        assert!(matches!(
            check_lk(&nec),
            CheckResult::Invalid { reason: InvalidReason::InactiveRule(RuleTag::Nec), .. }
        ));
    }
}
