//! Decision procedures: backward cut-free search returning proofs, forward
//! saturation over a finite closure, and truth tables for classical
//! sequents.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::calculus::{weaken_to, LogicId, ProofNode, Rule, Sequent, Split};
use crate::classical::{self, ClassicalError};
use crate::formula::Formula;

mod saturate;

pub use saturate::{saturate_forward, ProvableSet};

pub const DEFAULT_BUDGET: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProverError {
    #[error("proof search exceeded its budget of {0} sequents")]
    Budget(usize),
    #[error(transparent)]
    Classical(#[from] ClassicalError),
    #[error("universe of {0} formulas is too large for forward saturation")]
    UniverseTooLarge(usize),
}

/// Subformula closure of a sequent. Subformula sets are already closed
/// downward under box prefixes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureSet {
    pub formulas: BTreeSet<Formula>,
}

impl ClosureSet {
    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.formulas.contains(f)
    }
}

pub fn closure(s: &Sequent) -> ClosureSet {
    let mut formulas = BTreeSet::new();
    for f in s.formulas() {
        f.collect_subformulas(&mut formulas);
    }
    ClosureSet { formulas }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Provable(ProofNode),
    Unprovable,
}

impl Decision {
    pub fn is_provable(&self) -> bool {
        matches!(self, Decision::Provable(_))
    }

    pub fn proof(self) -> Option<ProofNode> {
        match self {
            Decision::Provable(p) => Some(p),
            Decision::Unprovable => None,
        }
    }
}

/// Searches with a fresh [`Prover`] and the default budget.
pub fn decide(s: &Sequent, logic: &LogicId) -> Result<Decision, ProverError> {
    Prover::new(*logic).decide(s)
}

pub fn provable(s: &Sequent, logic: &LogicId) -> Result<bool, ProverError> {
    Prover::new(*logic).provable(s)
}

/// Classical validity by truth tables; quote atoms are opaque.
pub fn decide_classical(s: &Sequent) -> Result<bool, ProverError> {
    Ok(classical::valid(s)?)
}

#[derive(Clone, Copy, Debug)]
enum Node {
    Bot,
    Var,
    And(u32, u32),
    Or(u32, u32),
    Imp(u32, u32),
    Box(u32),
}

#[derive(Default)]
struct Interner {
    ids: HashMap<Formula, u32>,
    forms: Vec<Formula>,
    nodes: Vec<Node>,
    depth: Vec<u32>,
}

impl Interner {
    fn intern(&mut self, f: &Formula) -> u32 {
        if let Some(&id) = self.ids.get(f) {
            return id;
        }
        let node = match f {
            Formula::Bot => Node::Bot,
            Formula::Var(_) => Node::Var,
            Formula::And(a, b) => Node::And(self.intern(a), self.intern(b)),
            Formula::Or(a, b) => Node::Or(self.intern(a), self.intern(b)),
            Formula::Imp(a, b) => Node::Imp(self.intern(a), self.intern(b)),
            Formula::Box(a) => Node::Box(self.intern(a)),
        };
        let depth = match node {
            Node::Box(c) => self.depth[c as usize] + 1,
            _ => 0,
        };
        let id = self.forms.len() as u32;
        self.ids.insert(f.clone(), id);
        self.forms.push(f.clone());
        self.nodes.push(node);
        self.depth.push(depth);
        id
    }

    fn strip(&self, mut id: u32, k: usize) -> u32 {
        for _ in 0..k {
            match self.nodes[id as usize] {
                Node::Box(c) => id = c,
                _ => unreachable!("strip past the box prefix"),
            }
        }
        id
    }
}

/// Canonical sequent key: sorted formula ids per side.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Key {
    ante: Vec<u32>,
    succ: Vec<u32>,
}

fn has(v: &[u32], x: u32) -> bool {
    v.binary_search(&x).is_ok()
}

fn with(v: &[u32], x: u32) -> Vec<u32> {
    let mut out = v.to_vec();
    if let Err(pos) = out.binary_search(&x) {
        out.insert(pos, x);
    }
    out
}

impl Key {
    fn add_ante(&self, x: u32) -> Key {
        Key {
            ante: with(&self.ante, x),
            succ: self.succ.clone(),
        }
    }

    fn add_succ(&self, x: u32) -> Key {
        Key {
            ante: self.ante.clone(),
            succ: with(&self.succ, x),
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Step {
    Init(u32),
    InitBot,
    AndL(u32, u8),
    OrR(u32, u8),
    AndR(u32),
    OrL(u32),
    ImpL(u32),
    ImpR(u32),
    AccL(u32),
    AccR(u32),
    Nec,
    Ros,
    RosBox,
}

enum Entry {
    Open,
    Failed,
    Proved(Step, Vec<Key>),
}

enum Expansion {
    Closed(Step),
    Invertible(Step, Vec<Key>),
    Saturated(Vec<(Step, Key)>),
}

/// A proof-search session for one logic. The memo table persists across
/// queries, so repeated questions about related sequents are cheap.
///
/// Search is backward and cut-free. Every propositional rule and accL/accR
/// is applied with its principal formula kept in the premise, which makes
/// the premise a superset of the conclusion and the rule invertible; such
/// rules are applied eagerly and only when they add a formula. A sequent on
/// which none of them adds anything is either initial or must be the
/// weakening of a nec, ros or rosbox conclusion, tried in the order rosbox,
/// ros, nec.
pub struct Prover {
    logic: LogicId,
    interner: Interner,
    memo: HashMap<Key, Entry>,
    budget: usize,
    spent: usize,
    bot: u32,
}

impl Prover {
    pub fn new(logic: LogicId) -> Self {
        Prover::with_budget(logic, DEFAULT_BUDGET)
    }

    /// `budget` bounds the number of new sequents visited per query.
    pub fn with_budget(logic: LogicId, budget: usize) -> Self {
        let mut interner = Interner::default();
        let bot = interner.intern(&Formula::Bot);
        Prover {
            logic,
            interner,
            memo: HashMap::new(),
            budget,
            spent: 0,
            bot,
        }
    }

    pub fn logic(&self) -> LogicId {
        self.logic
    }

    /// Number of sequents in the memo table.
    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    fn key(&mut self, s: &Sequent) -> Key {
        let mut ante: Vec<u32> = s.ante.iter().map(|f| self.interner.intern(f)).collect();
        let mut succ: Vec<u32> = s.succ.iter().map(|f| self.interner.intern(f)).collect();
        ante.sort_unstable();
        succ.sort_unstable();
        Key { ante, succ }
    }

    pub fn provable(&mut self, s: &Sequent) -> Result<bool, ProverError> {
        let key = self.key(s);
        self.run(&key)
    }

    pub fn decide(&mut self, s: &Sequent) -> Result<Decision, ProverError> {
        let key = self.key(s);
        if !self.run(&key)? {
            return Ok(Decision::Unprovable);
        }
        let mut built = HashMap::new();
        Ok(Decision::Provable(self.build(&key, &mut built)))
    }

    fn run(&mut self, key: &Key) -> Result<bool, ProverError> {
        self.spent = 0;
        let result = self.search(key);
        if result.is_err() {
            self.memo.retain(|_, e| !matches!(e, Entry::Open));
        }
        result
    }

    fn search(&mut self, key: &Key) -> Result<bool, ProverError> {
        if let Some(e) = self.memo.get(key) {
            return Ok(matches!(e, Entry::Proved(..)));
        }
        self.spent += 1;
        if self.spent > self.budget {
            return Err(ProverError::Budget(self.budget));
        }
        self.memo.insert(key.clone(), Entry::Open);
        let entry = match self.expand(key) {
            Expansion::Closed(step) => Entry::Proved(step, vec![]),
            Expansion::Invertible(step, premises) => {
                let mut ok = true;
                for p in &premises {
                    if !self.search(p)? {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    Entry::Proved(step, premises)
                } else {
                    Entry::Failed
                }
            }
            Expansion::Saturated(jumps) => {
                let mut entry = Entry::Failed;
                for (step, premise) in jumps {
                    if self.search(&premise)? {
                        entry = Entry::Proved(step, vec![premise]);
                        break;
                    }
                }
                entry
            }
        };
        let proved = matches!(entry, Entry::Proved(..));
        self.memo.insert(key.clone(), entry);
        Ok(proved)
    }

    fn expand(&self, key: &Key) -> Expansion {
        let nodes = &self.interner.nodes;
        if let Some(&x) = key.ante.iter().find(|x| has(&key.succ, **x)) {
            return Expansion::Closed(Step::Init(x));
        }
        if has(&key.ante, self.bot) {
            return Expansion::Closed(Step::InitBot);
        }
        for &x in &key.ante {
            match nodes[x as usize] {
                Node::And(a, b) => {
                    if !has(&key.ante, a) {
                        return Expansion::Invertible(Step::AndL(x, 1), vec![key.add_ante(a)]);
                    }
                    if !has(&key.ante, b) {
                        return Expansion::Invertible(Step::AndL(x, 2), vec![key.add_ante(b)]);
                    }
                }
                Node::Or(a, b) if !has(&key.ante, a) && !has(&key.ante, b) => {
                    return Expansion::Invertible(Step::OrL(x), vec![key.add_ante(a), key.add_ante(b)]);
                }
                Node::Imp(a, b) if !has(&key.succ, a) && !has(&key.ante, b) => {
                    return Expansion::Invertible(Step::ImpL(x), vec![key.add_succ(a), key.add_ante(b)]);
                }
                _ => {}
            }
        }
        for &x in &key.succ {
            match nodes[x as usize] {
                Node::And(a, b) if !has(&key.succ, a) && !has(&key.succ, b) => {
                    return Expansion::Invertible(Step::AndR(x), vec![key.add_succ(a), key.add_succ(b)]);
                }
                Node::Or(a, b) => {
                    if !has(&key.succ, a) {
                        return Expansion::Invertible(Step::OrR(x, 1), vec![key.add_succ(a)]);
                    }
                    if !has(&key.succ, b) {
                        return Expansion::Invertible(Step::OrR(x, 2), vec![key.add_succ(b)]);
                    }
                }
                Node::Imp(a, b) if !has(&key.ante, a) || !has(&key.succ, b) => {
                    return Expansion::Invertible(Step::ImpR(x), vec![key.add_ante(a).add_succ(b)]);
                }
                _ => {}
            }
        }
        let LogicId { m, n, .. } = self.logic;
        if self.logic.has_acc_l() {
            for &x in &key.ante {
                if self.interner.depth[x as usize] as usize >= n {
                    let aux = self.interner.strip(x, n - m);
                    if !has(&key.ante, aux) {
                        return Expansion::Invertible(Step::AccL(x), vec![key.add_ante(aux)]);
                    }
                }
            }
        }
        if self.logic.has_acc_r() {
            for &x in &key.succ {
                if self.interner.depth[x as usize] as usize >= m {
                    let aux = self.interner.strip(x, m - n);
                    if !has(&key.succ, aux) {
                        return Expansion::Invertible(Step::AccR(x), vec![key.add_succ(aux)]);
                    }
                }
            }
        }
        let mut jumps = Vec::new();
        let single = |ante: Option<u32>, succ: Option<u32>| Key {
            ante: ante.into_iter().collect(),
            succ: succ.into_iter().collect(),
        };
        if self.logic.has_rosbox() {
            for &x in &key.ante {
                if let Node::Box(c) = nodes[x as usize] {
                    if matches!(nodes[c as usize], Node::Box(_)) {
                        jumps.push((Step::RosBox, single(Some(c), None)));
                    }
                }
            }
        }
        if self.logic.has_ros() {
            for &x in &key.ante {
                if let Node::Box(c) = nodes[x as usize] {
                    jumps.push((Step::Ros, single(Some(c), None)));
                }
            }
        }
        for &x in &key.succ {
            if let Node::Box(c) = nodes[x as usize] {
                jumps.push((Step::Nec, single(None, Some(c))));
            }
        }
        Expansion::Saturated(jumps)
    }

    fn sequent(&self, key: &Key) -> Sequent {
        let f = |x: &u32| self.interner.forms[*x as usize].clone();
        Sequent {
            ante: key.ante.iter().map(f).collect(),
            succ: key.succ.iter().map(f).collect(),
        }
    }

    fn form(&self, x: u32) -> Formula {
        self.interner.forms[x as usize].clone()
    }

    fn build(&self, key: &Key, built: &mut HashMap<Key, ProofNode>) -> ProofNode {
        if let Some(p) = built.get(key) {
            return p.clone();
        }
        let Some(Entry::Proved(step, premises)) = self.memo.get(key) else {
            unreachable!("reconstructing an unproved sequent");
        };
        let target = self.sequent(key);
        let subs: Vec<ProofNode> = premises.iter().map(|p| self.build(p, built)).collect();
        let empty = Split {
            left_ante: Default::default(),
            left_succ: Default::default(),
        };
        let node = match *step {
            Step::Init(x) => ProofNode::init(self.form(x)),
            Step::InitBot => ProofNode::init_bot(),
            Step::AndL(x, i) => infer(Rule::AndL { principal: self.form(x), i }, subs),
            Step::OrR(x, i) => infer(Rule::OrR { principal: self.form(x), i }, subs),
            Step::AndR(x) => infer(Rule::AndR { principal: self.form(x) }, subs),
            Step::OrL(x) => infer(Rule::OrL { principal: self.form(x) }, subs),
            Step::ImpL(x) => infer(Rule::ImpL { principal: self.form(x), split: empty }, subs),
            Step::ImpR(x) => infer(Rule::ImpR { principal: self.form(x) }, subs),
            Step::AccL(x) | Step::AccR(x) => {
                let left = matches!(step, Step::AccL(_));
                let premise = subs.into_iter().next().expect("acc has one premise");
                ProofNode::infer_acc(left, self.form(x), self.logic.m, self.logic.n, premise)
                    .expect("acc step recorded for a matching principal")
            }
            Step::Nec => infer(Rule::Nec, subs),
            Step::Ros => infer(Rule::Ros, subs),
            Step::RosBox => infer(Rule::RosBox, subs),
        };
        let node = weaken_to(node, &target).expect("search steps conclude inside their sequent");
        built.insert(key.clone(), node.clone());
        node
    }
}

fn infer(rule: Rule, premises: Vec<ProofNode>) -> ProofNode {
    ProofNode::infer(rule, premises).expect("search steps are rule instances")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::check_proof;

    fn s(text: &str) -> Sequent {
        Sequent::parse(text).unwrap()
    }

    fn proves(text: &str, logic: LogicId) -> bool {
        match decide(&s(text), &logic).unwrap() {
            Decision::Provable(p) => {
                assert_eq!(p.conclusion, s(text));
                assert!(p.is_cut_free());
                assert_eq!(check_proof(&p, &logic), crate::calculus::CheckResult::Valid, "{}", p.render());
                true
            }
            Decision::Unprovable => false,
        }
    }

    #[test]
    fn closure_examples() {
        let names = |c: ClosureSet| c.formulas.iter().map(|f| f.to_string()).collect::<BTreeSet<_>>();
        let set = |xs: &[&str]| xs.iter().map(|x| x.to_string()).collect::<BTreeSet<_>>();
        assert_eq!(names(closure(&s("=> box box p"))), set(&["box box p", "box p", "p"]));
        assert_eq!(
            names(closure(&s("box box box false =>"))),
            set(&["box box box false", "box box false", "box false", "false"])
        );
        assert_eq!(names(closure(&s("=> box (p -> q)"))), set(&["box (p -> q)", "p -> q", "p", "q"]));
    }

    #[test]
    fn decide_examples() {
        assert!(proves("=> box p -> box box p", LogicId::plain(2, 1)));
        for logic in LogicId::grid(2) {
            assert!(!proves("=> p", logic));
            assert!(!proves("=>", logic));
        }
        assert!(proves("box box box false =>", LogicId::plus(0, 2)));
        assert!(!proves("box box box false =>", LogicId::plain(0, 2)));
    }

    #[test]
    fn classical_examples() {
        assert!(decide_classical(&s("p & q => p")).unwrap());
        assert!(decide_classical(&s("=> p | ~p")).unwrap());
        assert!(decide_classical(&s("q{box p} & p => q{box p}")).unwrap());
        assert!(decide_classical(&s("box p => box p")).is_err());
    }

    #[test]
    fn modal_shapes() {
        let n = LogicId::n();
        assert!(proves("=> box true", n));
        assert!(proves("=> box (p -> p)", n));
        assert!(!proves("box (p -> q), box p => box q", n));
        assert!(proves("box p => box p", n));
        assert!(proves("box p => p", LogicId::plain(0, 1)));
        assert!(!proves("box p => p", LogicId::plain(1, 1)));
        assert!(proves("box false =>", LogicId::r(1, 1)));
        assert!(!proves("box false =>", LogicId::plain(1, 1)));
        assert!(proves("box box false =>", LogicId::plus(0, 2)));
    }

    #[test]
    fn budget_is_reported() {
        let mut prover = Prover::with_budget(LogicId::n(), 3);
        let goal = s("(p | q) & (r | t) & (u | v) => p & r & u");
        assert_eq!(prover.provable(&goal), Err(ProverError::Budget(3)));
        let mut prover = Prover::with_budget(LogicId::n(), 10_000);
        assert!(!prover.provable(&goal).unwrap());
    }

    #[test]
    fn session_memo_is_reused() {
        let mut prover = Prover::new(LogicId::plain(2, 1));
        assert!(prover.provable(&s("=> box p -> box box p")).unwrap());
        let before = prover.memo_len();
        assert!(prover.provable(&s("=> box p -> box box p")).unwrap());
        assert_eq!(prover.memo_len(), before);
    }
}
