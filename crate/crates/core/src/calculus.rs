//! Sequents, logic configurations and proof objects for LK and the
//! calculi GNA(m,n), GN+A(m,n) and GNRA(m,n).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::formula::{parse_formula, Formula, ParseError};

mod check;
mod json;

pub use check::{check_lk, check_proof, check_with, CheckResult, InvalidReason};
pub use json::{proof_from_json, proof_to_json, ProofJsonError};

pub type FormulaSet = BTreeSet<Formula>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Plain,
    Plus,
    R,
}

/// One of NA(m,n), N+A(m,n), NRA(m,n).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LogicId {
    pub variant: Variant,
    pub m: usize,
    pub n: usize,
}

impl LogicId {
    pub fn new(variant: Variant, m: usize, n: usize) -> Self {
        LogicId { variant, m, n }
    }

    pub fn plain(m: usize, n: usize) -> Self {
        Self::new(Variant::Plain, m, n)
    }

    pub fn plus(m: usize, n: usize) -> Self {
        Self::new(Variant::Plus, m, n)
    }

    pub fn r(m: usize, n: usize) -> Self {
        Self::new(Variant::R, m, n)
    }

    /// The pure logic of necessitation, `NA(0,0)`.
    pub fn n() -> Self {
        Self::plain(0, 0)
    }

    pub fn has_acc_l(&self) -> bool {
        self.n > self.m
    }

    pub fn has_acc_r(&self) -> bool {
        self.m > self.n
    }

    pub fn has_rosbox(&self) -> bool {
        self.variant == Variant::Plus && self.m == 0 && self.n >= 2
    }

    pub fn has_ros(&self) -> bool {
        self.variant == Variant::R
    }

    /// All logics with `m, n <= bound` across the three variants.
    pub fn grid(bound: usize) -> Vec<LogicId> {
        let mut out = Vec::new();
        for variant in [Variant::Plain, Variant::Plus, Variant::R] {
            for m in 0..=bound {
                for n in 0..=bound {
                    out.push(LogicId::new(variant, m, n));
                }
            }
        }
        out
    }
}

impl fmt::Display for LogicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.variant {
            Variant::Plain => "NA",
            Variant::Plus => "N+A",
            Variant::R => "NRA",
        };
        write!(f, "{prefix}({},{})", self.m, self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid logic {0:?}: expected NA(m,n), N+A(m,n), NRA(m,n) or N")]
pub struct LogicParseError(pub String);

impl FromStr for LogicId {
    type Err = LogicParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || LogicParseError(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "N" {
            return Ok(LogicId::n());
        }
        let (variant, rest) = if let Some(r) = t.strip_prefix("N+A") {
            (Variant::Plus, r)
        } else if let Some(r) = t.strip_prefix("NRA") {
            (Variant::R, r)
        } else if let Some(r) = t.strip_prefix("NA") {
            (Variant::Plain, r)
        } else {
            return Err(err());
        };
        let inner = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(err)?;
        let (m, n) = inner.split_once(',').ok_or_else(err)?;
        let m = m.parse().map_err(|_| err())?;
        let n = n.parse().map_err(|_| err())?;
        Ok(LogicId::new(variant, m, n))
    }
}

/// Rule names of LK and the modal extensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleTag {
    Init,
    InitBot,
    AndL,
    AndR,
    OrL,
    OrR,
    ImpL,
    ImpR,
    WL,
    WR,
    Cut,
    Nec,
    AccL,
    AccR,
    RosBox,
    Ros,
}

impl RuleTag {
    pub const LK: [RuleTag; 11] = [
        RuleTag::Init,
        RuleTag::InitBot,
        RuleTag::AndL,
        RuleTag::AndR,
        RuleTag::OrL,
        RuleTag::OrR,
        RuleTag::ImpL,
        RuleTag::ImpR,
        RuleTag::WL,
        RuleTag::WR,
        RuleTag::Cut,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleTag::Init => "init",
            RuleTag::InitBot => "initBot",
            RuleTag::AndL => "andL",
            RuleTag::AndR => "andR",
            RuleTag::OrL => "orL",
            RuleTag::OrR => "orR",
            RuleTag::ImpL => "impL",
            RuleTag::ImpR => "impR",
            RuleTag::WL => "wL",
            RuleTag::WR => "wR",
            RuleTag::Cut => "cut",
            RuleTag::Nec => "nec",
            RuleTag::AccL => "accL",
            RuleTag::AccR => "accR",
            RuleTag::RosBox => "rosbox",
            RuleTag::Ros => "ros",
        }
    }

    pub fn from_name(name: &str) -> Option<RuleTag> {
        const ALL: [RuleTag; 16] = [
            RuleTag::Init,
            RuleTag::InitBot,
            RuleTag::AndL,
            RuleTag::AndR,
            RuleTag::OrL,
            RuleTag::OrR,
            RuleTag::ImpL,
            RuleTag::ImpR,
            RuleTag::WL,
            RuleTag::WR,
            RuleTag::Cut,
            RuleTag::Nec,
            RuleTag::AccL,
            RuleTag::AccR,
            RuleTag::RosBox,
            RuleTag::Ros,
        ];
        ALL.into_iter().find(|t| t.name() == name)
    }
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// LK rules (cut included) plus the extra rules active in `logic`.
pub fn rule_set(logic: &LogicId) -> BTreeSet<RuleTag> {
    let mut rules: BTreeSet<RuleTag> = RuleTag::LK.into_iter().collect();
    rules.insert(RuleTag::Nec);
    if logic.has_acc_l() {
        rules.insert(RuleTag::AccL);
    }
    if logic.has_acc_r() {
        rules.insert(RuleTag::AccR);
    }
    if logic.has_rosbox() {
        rules.insert(RuleTag::RosBox);
    }
    if logic.has_ros() {
        rules.insert(RuleTag::Ros);
    }
    rules
}

/// A pair of finite formula sets.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequent {
    pub ante: FormulaSet,
    pub succ: FormulaSet,
}

impl Sequent {
    pub fn new<A, S>(ante: A, succ: S) -> Self
    where
        A: IntoIterator<Item = Formula>,
        S: IntoIterator<Item = Formula>,
    {
        Sequent {
            ante: ante.into_iter().collect(),
            succ: succ.into_iter().collect(),
        }
    }

    pub fn empty() -> Self {
        Sequent::default()
    }

    pub fn is_empty(&self) -> bool {
        self.ante.is_empty() && self.succ.is_empty()
    }

    pub fn is_subsequent_of(&self, other: &Sequent) -> bool {
        self.ante.is_subset(&other.ante) && self.succ.is_subset(&other.succ)
    }

    pub fn union(&self, other: &Sequent) -> Sequent {
        Sequent {
            ante: self.ante.union(&other.ante).cloned().collect(),
            succ: self.succ.union(&other.succ).cloned().collect(),
        }
    }

    pub fn with_ante(mut self, f: Formula) -> Self {
        self.ante.insert(f);
        self
    }

    pub fn with_succ(mut self, f: Formula) -> Self {
        self.succ.insert(f);
        self
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.ante.iter().chain(self.succ.iter())
    }

    pub fn is_classical(&self) -> bool {
        self.formulas().all(Formula::is_classical)
    }

    /// Parses `"phi1, phi2 => psi1, psi2"`; either side may be empty.
    pub fn parse(text: &str) -> Result<Sequent, ParseError> {
        let Some(at) = text.find("=>") else {
            return Err(ParseError {
                pos: text.len(),
                message: "expected '=>' in sequent".into(),
            });
        };
        let side = |src: &str, offset: usize| -> Result<FormulaSet, ParseError> {
            let mut out = FormulaSet::new();
            if src.trim().is_empty() {
                return Ok(out);
            }
            let mut base = offset;
            for part in src.split(',') {
                let f = parse_formula(part).map_err(|e| ParseError {
                    pos: base + e.pos,
                    message: e.message,
                })?;
                out.insert(f);
                base += part.len() + 1;
            }
            Ok(out)
        };
        Ok(Sequent {
            ante: side(&text[..at], 0)?,
            succ: side(&text[at + 2..], at + 2)?,
        })
    }
}

impl FromStr for Sequent {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Sequent::parse(s)
    }
}

fn join(set: &FormulaSet) -> String {
    set.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ante = join(&self.ante);
        let succ = join(&self.succ);
        match (ante.is_empty(), succ.is_empty()) {
            (true, true) => f.write_str("=>"),
            (true, false) => write!(f, "=> {succ}"),
            (false, true) => write!(f, "{ante} =>"),
            (false, false) => write!(f, "{ante} => {succ}"),
        }
    }
}

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// A disjoint split `(left; right)` of the sequent `of`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub left: Sequent,
    pub right: Sequent,
    pub of: Sequent,
}

impl Partition {
    pub fn new(left: Sequent, right: Sequent) -> Result<Self, PartitionError> {
        if !left.ante.is_disjoint(&right.ante) || !left.succ.is_disjoint(&right.succ) {
            return Err(PartitionError);
        }
        let of = left.union(&right);
        Ok(Partition { left, right, of })
    }

    pub fn is_valid(&self) -> bool {
        self.left.ante.is_disjoint(&self.right.ante)
            && self.left.succ.is_disjoint(&self.right.succ)
            && self.left.union(&self.right) == self.of
    }

    /// The same split viewed from the other side.
    pub fn swapped(&self) -> Partition {
        Partition {
            left: self.right.clone(),
            right: self.left.clone(),
            of: self.of.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("partition sides overlap")]
pub struct PartitionError;

/// Enumerates all `2^(|ante|+|succ|)` partitions of `s`.
///
/// Order: bit `j` of a counter running from `0` selects whether the `j`-th
/// formula (antecedent in sorted order, then succedent in sorted order)
/// goes to the right side. The first partition puts everything on the left.
pub fn enumerate_partitions(s: &Sequent) -> impl Iterator<Item = Partition> + '_ {
    let ante: Vec<&Formula> = s.ante.iter().collect();
    let succ: Vec<&Formula> = s.succ.iter().collect();
    let total = ante.len() + succ.len();
    assert!(total < 64, "sequent too large to enumerate partitions");
    (0u64..(1u64 << total)).map(move |mask| {
        let mut left = Sequent::empty();
        let mut right = Sequent::empty();
        for (j, f) in ante.iter().enumerate() {
            let side = if mask >> j & 1 == 1 { &mut right } else { &mut left };
            side.ante.insert((*f).clone());
        }
        for (j, f) in succ.iter().enumerate() {
            let side = if mask >> (ante.len() + j) & 1 == 1 {
                &mut right
            } else {
                &mut left
            };
            side.succ.insert((*f).clone());
        }
        Partition {
            left,
            right,
            of: s.clone(),
        }
    })
}

/// Context split of a two-premise splitting rule (impL, cut): the left
/// premise is `left_ante => left_succ` plus the rule's left auxiliary
/// formula. The right context is inferred from the right premise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Split {
    pub left_ante: FormulaSet,
    pub left_succ: FormulaSet,
}

/// A rule application together with the data needed to check it locally.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `φ ⟹ φ`.
    Init,
    /// `⊥ ⟹`.
    InitBot,
    AndL { principal: Formula, i: u8 },
    AndR { principal: Formula },
    OrL { principal: Formula },
    OrR { principal: Formula, i: u8 },
    ImpL { principal: Formula, split: Split },
    ImpR { principal: Formula },
    WL { principal: Formula },
    WR { principal: Formula },
    Cut { formula: Formula, split: Split },
    Nec,
    AccL { principal: Formula },
    AccR { principal: Formula },
    RosBox,
    Ros,
}

impl Rule {
    pub fn tag(&self) -> RuleTag {
        match self {
            Rule::Init => RuleTag::Init,
            Rule::InitBot => RuleTag::InitBot,
            Rule::AndL { .. } => RuleTag::AndL,
            Rule::AndR { .. } => RuleTag::AndR,
            Rule::OrL { .. } => RuleTag::OrL,
            Rule::OrR { .. } => RuleTag::OrR,
            Rule::ImpL { .. } => RuleTag::ImpL,
            Rule::ImpR { .. } => RuleTag::ImpR,
            Rule::WL { .. } => RuleTag::WL,
            Rule::WR { .. } => RuleTag::WR,
            Rule::Cut { .. } => RuleTag::Cut,
            Rule::Nec => RuleTag::Nec,
            Rule::AccL { .. } => RuleTag::AccL,
            Rule::AccR { .. } => RuleTag::AccR,
            Rule::RosBox => RuleTag::RosBox,
            Rule::Ros => RuleTag::Ros,
        }
    }

    /// The principal formula, where the rule has one recorded.
    pub fn principal(&self) -> Option<&Formula> {
        match self {
            Rule::AndL { principal, .. }
            | Rule::AndR { principal }
            | Rule::OrL { principal }
            | Rule::OrR { principal, .. }
            | Rule::ImpL { principal, .. }
            | Rule::ImpR { principal }
            | Rule::WL { principal }
            | Rule::WR { principal }
            | Rule::AccL { principal }
            | Rule::AccR { principal } => Some(principal),
            _ => None,
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Rule::Init | Rule::InitBot => 0,
            Rule::AndR { .. } | Rule::OrL { .. } | Rule::ImpL { .. } | Rule::Cut { .. } => 2,
            _ => 1,
        }
    }
}

/// A rule-tagged tree of sequents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProofNode {
    pub conclusion: Sequent,
    pub rule: Rule,
    pub premises: Vec<ProofNode>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("{rule}: {reason}")]
    Shape { rule: RuleTag, reason: String },
    #[error("cannot weaken {from} to {to}")]
    NotWeakening { from: Sequent, to: Sequent },
}

fn shape(rule: RuleTag, reason: impl Into<String>) -> BuildError {
    BuildError::Shape {
        rule,
        reason: reason.into(),
    }
}

fn minus(set: &FormulaSet, f: &Formula) -> FormulaSet {
    let mut out = set.clone();
    out.remove(f);
    out
}

impl ProofNode {
    pub fn init(f: Formula) -> ProofNode {
        ProofNode {
            conclusion: Sequent::new([f.clone()], [f]),
            rule: Rule::Init,
            premises: vec![],
        }
    }

    pub fn init_bot() -> ProofNode {
        ProofNode {
            conclusion: Sequent::new([Formula::Bot], []),
            rule: Rule::InitBot,
            premises: vec![],
        }
    }

    /// Applies `rule` to `premises` and derives the smallest conclusion the
    /// schema allows. Premises of shared-context rules are weakened to a
    /// common context first; auxiliary formulas missing from a premise are
    /// weakened in.
    pub fn infer(rule: Rule, premises: Vec<ProofNode>) -> Result<ProofNode, BuildError> {
        let tag = rule.tag();
        if premises.len() != rule.arity() {
            return Err(shape(tag, format!("expected {} premises", rule.arity())));
        }
        let mut premises = premises;
        let conclusion = match &rule {
            Rule::Init | Rule::InitBot => {
                return Err(shape(tag, "initial sequents have no premises to infer from"))
            }
            Rule::AndL { principal, i } => {
                let Formula::And(a, b) = principal else {
                    return Err(shape(tag, "principal is not a conjunction"));
                };
                let aux = if *i == 1 { a } else { b };
                let p = ensure_ante(&mut premises[0], aux);
                Sequent {
                    ante: minus(&p.ante, aux).into_iter().chain([principal.clone()]).collect(),
                    succ: p.succ.clone(),
                }
            }
            Rule::OrR { principal, i } => {
                let Formula::Or(a, b) = principal else {
                    return Err(shape(tag, "principal is not a disjunction"));
                };
                let aux = if *i == 1 { a } else { b };
                let p = ensure_succ(&mut premises[0], aux);
                Sequent {
                    ante: p.ante.clone(),
                    succ: minus(&p.succ, aux).into_iter().chain([principal.clone()]).collect(),
                }
            }
            Rule::ImpR { principal } => {
                let Formula::Imp(a, b) = principal else {
                    return Err(shape(tag, "principal is not an implication"));
                };
                ensure_ante(&mut premises[0], a);
                let p = ensure_succ(&mut premises[0], b);
                Sequent {
                    ante: minus(&p.ante, a),
                    succ: minus(&p.succ, b).into_iter().chain([principal.clone()]).collect(),
                }
            }
            Rule::AndR { principal } | Rule::OrL { principal } => {
                let (a, b, right) = match principal {
                    Formula::And(a, b) if tag == RuleTag::AndR => (a, b, true),
                    Formula::Or(a, b) if tag == RuleTag::OrL => (a, b, false),
                    _ => return Err(shape(tag, "principal has the wrong connective")),
                };
                if right {
                    ensure_succ(&mut premises[0], a);
                    ensure_succ(&mut premises[1], b);
                } else {
                    ensure_ante(&mut premises[0], a);
                    ensure_ante(&mut premises[1], b);
                }
                let (p1, p2) = (&premises[0].conclusion, &premises[1].conclusion);
                let mut ctx = p1.union(p2);
                if right {
                    ctx.succ = minus(&p1.succ, a).union(&minus(&p2.succ, b)).cloned().collect();
                } else {
                    ctx.ante = minus(&p1.ante, a).union(&minus(&p2.ante, b)).cloned().collect();
                }
                let t1 = if right { ctx.clone().with_succ((**a).clone()) } else { ctx.clone().with_ante((**a).clone()) };
                let t2 = if right { ctx.clone().with_succ((**b).clone()) } else { ctx.clone().with_ante((**b).clone()) };
                let q1 = weaken_to(premises[0].clone(), &t1)?;
                let q2 = weaken_to(premises[1].clone(), &t2)?;
                premises = vec![q1, q2];
                if right {
                    ctx.with_succ(principal.clone())
                } else {
                    ctx.with_ante(principal.clone())
                }
            }
            Rule::ImpL { principal, .. } => {
                let Formula::Imp(a, b) = principal else {
                    return Err(shape(tag, "principal is not an implication"));
                };
                ensure_succ(&mut premises[0], a);
                ensure_ante(&mut premises[1], b);
                let (l, r) = (&premises[0].conclusion, &premises[1].conclusion);
                let split = Split {
                    left_ante: l.ante.clone(),
                    left_succ: minus(&l.succ, a),
                };
                let conclusion = Sequent {
                    ante: split
                        .left_ante
                        .union(&minus(&r.ante, b))
                        .cloned()
                        .chain([principal.clone()])
                        .collect(),
                    succ: split.left_succ.union(&r.succ).cloned().collect(),
                };
                let rule = Rule::ImpL {
                    principal: principal.clone(),
                    split,
                };
                return Ok(ProofNode {
                    conclusion,
                    rule,
                    premises,
                });
            }
            Rule::Cut { formula, .. } => {
                ensure_succ(&mut premises[0], formula);
                ensure_ante(&mut premises[1], formula);
                let (l, r) = (&premises[0].conclusion, &premises[1].conclusion);
                let split = Split {
                    left_ante: l.ante.clone(),
                    left_succ: minus(&l.succ, formula),
                };
                let conclusion = Sequent {
                    ante: split.left_ante.union(&minus(&r.ante, formula)).cloned().collect(),
                    succ: split.left_succ.union(&r.succ).cloned().collect(),
                };
                let rule = Rule::Cut {
                    formula: formula.clone(),
                    split,
                };
                return Ok(ProofNode {
                    conclusion,
                    rule,
                    premises,
                });
            }
            Rule::WL { principal } => premises[0].conclusion.clone().with_ante(principal.clone()),
            Rule::WR { principal } => premises[0].conclusion.clone().with_succ(principal.clone()),
            Rule::Nec => {
                let p = &premises[0].conclusion;
                if !p.ante.is_empty() || p.succ.len() != 1 {
                    return Err(shape(tag, "premise must be a single-succedent sequent with empty antecedent"));
                }
                let f = p.succ.iter().next().unwrap().clone();
                Sequent::new([], [Formula::boxed(f)])
            }
            Rule::Ros => {
                let p = &premises[0].conclusion;
                if !p.succ.is_empty() || p.ante.len() != 1 {
                    return Err(shape(tag, "premise must be a single-antecedent sequent"));
                }
                let f = p.ante.iter().next().unwrap().clone();
                Sequent::new([Formula::boxed(f)], [])
            }
            Rule::RosBox => {
                let p = &premises[0].conclusion;
                match (p.ante.iter().next(), p.ante.len(), p.succ.is_empty()) {
                    (Some(f @ Formula::Box(_)), 1, true) => Sequent::new([Formula::boxed(f.clone())], []),
                    _ => return Err(shape(tag, "premise must be a single boxed antecedent")),
                }
            }
            Rule::AccL { .. } | Rule::AccR { .. } => {
                return Err(shape(tag, "use infer_acc: the aux formula depends on the logic"))
            }
        };
        Ok(ProofNode {
            conclusion,
            rule,
            premises,
        })
    }

    /// accL / accR with the auxiliary formula determined by `(m, n)`.
    pub fn infer_acc(left: bool, principal: Formula, m: usize, n: usize, premise: ProofNode) -> Result<ProofNode, BuildError> {
        let (tag, from, to) = if left { (RuleTag::AccL, n, m) } else { (RuleTag::AccR, m, n) };
        let Some(body) = principal.strip_boxes(from) else {
            return Err(shape(tag, "principal has too few boxes"));
        };
        let aux = Formula::box_n(to, body.clone());
        let mut premise = premise;
        let (conclusion, rule) = if left {
            ensure_ante(&mut premise, &principal);
            let p = ensure_ante(&mut premise, &aux);
            let mut c = p.clone();
            c.ante.remove(&aux);
            (c.with_ante(principal.clone()), Rule::AccL { principal })
        } else {
            ensure_succ(&mut premise, &principal);
            let p = ensure_succ(&mut premise, &aux);
            let mut c = p.clone();
            c.succ.remove(&aux);
            (c.with_succ(principal.clone()), Rule::AccR { principal })
        };
        Ok(ProofNode {
            conclusion,
            rule,
            premises: vec![premise],
        })
    }

    pub fn is_cut_free(&self) -> bool {
        !matches!(self.rule, Rule::Cut { .. }) && self.premises.iter().all(ProofNode::is_cut_free)
    }

    pub fn count_rule(&self, tag: RuleTag) -> usize {
        usize::from(self.rule.tag() == tag) + self.premises.iter().map(|p| p.count_rule(tag)).sum::<usize>()
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(ProofNode::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(ProofNode::height).max().unwrap_or(0)
    }

    /// Formulas occurring in any sequent of the proof.
    pub fn formulas(&self) -> FormulaSet {
        let mut out = FormulaSet::new();
        self.collect_formulas(&mut out);
        out
    }

    fn collect_formulas(&self, out: &mut FormulaSet) {
        out.extend(self.conclusion.formulas().cloned());
        for p in &self.premises {
            p.collect_formulas(out);
        }
    }

    /// Pretty multi-line rendering, premises indented below their conclusion.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(0, &mut out);
        out
    }

    fn render_into(&self, depth: usize, out: &mut String) {
        use std::fmt::Write;
        let _ = writeln!(out, "{}{}   ({})", "  ".repeat(depth), self.conclusion, self.rule.tag());
        for p in &self.premises {
            p.render_into(depth + 1, out);
        }
    }
}

fn ensure_ante<'a>(node: &'a mut ProofNode, f: &Formula) -> &'a Sequent {
    if !node.conclusion.ante.contains(f) {
        let prev = std::mem::replace(node, ProofNode::init_bot());
        let conclusion = prev.conclusion.clone().with_ante(f.clone());
        *node = ProofNode {
            conclusion,
            rule: Rule::WL { principal: f.clone() },
            premises: vec![prev],
        };
    }
    &node.conclusion
}

fn ensure_succ<'a>(node: &'a mut ProofNode, f: &Formula) -> &'a Sequent {
    if !node.conclusion.succ.contains(f) {
        let prev = std::mem::replace(node, ProofNode::init_bot());
        let conclusion = prev.conclusion.clone().with_succ(f.clone());
        *node = ProofNode {
            conclusion,
            rule: Rule::WR { principal: f.clone() },
            premises: vec![prev],
        };
    }
    &node.conclusion
}

/// Extends `proof` with wL/wR nodes (one formula each, antecedent first)
/// until its conclusion is `target`.
pub fn weaken_to(proof: ProofNode, target: &Sequent) -> Result<ProofNode, BuildError> {
    if !proof.conclusion.is_subsequent_of(target) {
        return Err(BuildError::NotWeakening {
            from: proof.conclusion,
            to: target.clone(),
        });
    }
    let mut node = proof;
    for f in &target.ante {
        ensure_ante(&mut node, f);
    }
    for f in &target.succ {
        ensure_succ(&mut node, f);
    }
    Ok(node)
}
