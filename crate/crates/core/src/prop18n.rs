//! Sharp/flat translations of modal formulas into classical formulas over
//! quote atoms, and emulation of modal proofs in LK.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::calculus::{check_proof, weaken_to, BuildError, LogicId, ProofNode, Rule, Sequent, Variant};
use crate::formula::{signed_vars, Atom, Formula};
use crate::prover::{decide_classical, Prover, ProverError};
use crate::report::Report;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Prop18nError {
    #[error("input already contains quote atoms: {0}")]
    QuoteAtom(Formula),
    #[error("input proof is invalid at {path:?}: {reason}")]
    InvalidProof { path: Vec<usize>, reason: String },
    #[error("input proof contains a cut")]
    Cut,
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Prover(#[from] ProverError),
}

impl From<BuildError> for Prop18nError {
    fn from(e: BuildError) -> Self {
        Prop18nError::Internal(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Sharp,
    Flat,
}

impl std::str::FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sharp" => Ok(Direction::Sharp),
            "flat" => Ok(Direction::Flat),
            _ => Err(format!("unknown direction {s:?} (expected sharp or flat)")),
        }
    }
}

/// Memoized translations plus one prover per logic for the side conditions.
#[derive(Default)]
pub struct TranslationCache {
    memo: HashMap<(Direction, Formula, LogicId), Formula>,
    provers: HashMap<LogicId, Prover>,
    budget: Option<usize>,
}

impl TranslationCache {
    pub fn new() -> Self {
        TranslationCache::default()
    }

    /// Side-condition queries stop after `budget` search nodes.
    pub fn with_budget(budget: usize) -> Self {
        TranslationCache {
            budget: Some(budget),
            ..TranslationCache::default()
        }
    }

    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    pub fn prover(&mut self, logic: &LogicId) -> &mut Prover {
        let budget = self.budget;
        self.provers.entry(*logic).or_insert_with(|| match budget {
            Some(b) => Prover::with_budget(*logic, b),
            None => Prover::new(*logic),
        })
    }

    pub fn sharp(&mut self, phi: &Formula, logic: &LogicId) -> Result<Formula, Prop18nError> {
        self.translate(Direction::Sharp, phi, logic)
    }

    pub fn flat(&mut self, phi: &Formula, logic: &LogicId) -> Result<Formula, Prop18nError> {
        self.translate(Direction::Flat, phi, logic)
    }

    pub fn translate(&mut self, dir: Direction, phi: &Formula, logic: &LogicId) -> Result<Formula, Prop18nError> {
        if phi.has_quote_atoms() {
            return Err(Prop18nError::QuoteAtom(phi.clone()));
        }
        self.go(dir, phi, logic)
    }

    fn go(&mut self, dir: Direction, phi: &Formula, logic: &LogicId) -> Result<Formula, Prop18nError> {
        let key = (dir, phi.clone(), *logic);
        if let Some(out) = self.memo.get(&key) {
            return Ok(out.clone());
        }
        let out = match phi {
            Formula::Bot | Formula::Var(_) => phi.clone(),
            Formula::And(a, b) => Formula::and(self.go(dir, a, logic)?, self.go(dir, b, logic)?),
            Formula::Or(a, b) => Formula::or(self.go(dir, a, logic)?, self.go(dir, b, logic)?),
            Formula::Imp(a, b) => {
                let other = match dir {
                    Direction::Sharp => Direction::Flat,
                    Direction::Flat => Direction::Sharp,
                };
                Formula::imp(self.go(other, a, logic)?, self.go(dir, b, logic)?)
            }
            Formula::Box(_) => {
                let (k, core) = phi.box_decompose();
                let core = core.clone();
                let below = Formula::box_n(k - 1, core.clone());
                let (m, n) = (logic.m, logic.n);
                let q = Formula::quote(phi.clone());
                match dir {
                    Direction::Sharp => {
                        if self.prover(logic).provable(&Sequent::new([], [below]))? {
                            Formula::top()
                        } else if k >= m && m > n {
                            let next = Formula::box_n(k - m + n, core);
                            Formula::or(q, self.go(dir, &next, logic)?)
                        } else {
                            q
                        }
                    }
                    Direction::Flat => {
                        if self.condition_c(k, below, logic)? {
                            Formula::Bot
                        } else if k >= n && n > m {
                            let next = Formula::box_n(k - n + m, core);
                            Formula::and(q, self.go(dir, &next, logic)?)
                        } else {
                            q
                        }
                    }
                }
            }
        };
        self.memo.insert(key, out.clone());
        Ok(out)
    }

    /// `C(k, ψ)`, where `below` is `□^{k-1}ψ`.
    fn condition_c(&mut self, k: usize, below: Formula, logic: &LogicId) -> Result<bool, Prop18nError> {
        let applies = match logic.variant {
            Variant::Plus => logic.m == 0 && logic.n >= 2 && k >= 2,
            Variant::R => true,
            Variant::Plain => false,
        };
        if !applies {
            return Ok(false);
        }
        Ok(self.prover(logic).provable(&Sequent::new([below], []))?)
    }

    /// `Γ♭ ⟹ Δ♯`.
    pub fn translate_sequent(&mut self, s: &Sequent, logic: &LogicId) -> Result<Sequent, Prop18nError> {
        let mut ante = Vec::new();
        for f in &s.ante {
            ante.push(self.flat(f, logic)?);
        }
        let mut succ = Vec::new();
        for f in &s.succ {
            succ.push(self.sharp(f, logic)?);
        }
        Ok(Sequent::new(ante, succ))
    }
}

pub fn sharp(phi: &Formula, logic: &LogicId) -> Result<Formula, Prop18nError> {
    TranslationCache::new().sharp(phi, logic)
}

pub fn flat(phi: &Formula, logic: &LogicId) -> Result<Formula, Prop18nError> {
    TranslationCache::new().flat(phi, logic)
}

/// Replaces every quote atom `q{ψ}` by `ψ`.
pub fn std_subst(phi: &Formula) -> Formula {
    match phi {
        Formula::Bot => Formula::Bot,
        Formula::Var(Atom::Quote(payload)) => (**payload).clone(),
        Formula::Var(_) => phi.clone(),
        Formula::And(a, b) => Formula::and(std_subst(a), std_subst(b)),
        Formula::Or(a, b) => Formula::or(std_subst(a), std_subst(b)),
        Formula::Imp(a, b) => Formula::imp(std_subst(a), std_subst(b)),
        Formula::Box(a) => Formula::boxed(std_subst(a)),
    }
}

/// An LK proof of `Γ♭ ⟹ Δ♯` from a cut-free proof of `Γ ⟹ Δ`.
pub fn emulate(proof: &ProofNode, logic: &LogicId) -> Result<ProofNode, Prop18nError> {
    emulate_with(&mut TranslationCache::new(), proof, logic)
}

pub fn emulate_with(cache: &mut TranslationCache, proof: &ProofNode, logic: &LogicId) -> Result<ProofNode, Prop18nError> {
    if let crate::calculus::CheckResult::Invalid { path, reason } = check_proof(proof, logic) {
        return Err(Prop18nError::InvalidProof {
            path,
            reason: reason.to_string(),
        });
    }
    if !proof.is_cut_free() {
        return Err(Prop18nError::Cut);
    }
    if let Some(f) = proof.formulas().iter().find(|f| f.has_quote_atoms()) {
        return Err(Prop18nError::QuoteAtom(f.clone()));
    }
    let mut lk = Prover::new(LogicId::n());
    Emulator { cache, logic: *logic, lk: &mut lk }.node(proof)
}

struct Emulator<'a> {
    cache: &'a mut TranslationCache,
    logic: LogicId,
    lk: &'a mut Prover,
}

fn top_proof() -> Result<ProofNode, BuildError> {
    ProofNode::infer(
        Rule::ImpR {
            principal: Formula::top(),
        },
        vec![ProofNode::init(Formula::Bot)],
    )
}

impl Emulator<'_> {
    fn node(&mut self, node: &ProofNode) -> Result<ProofNode, Prop18nError> {
        let target = self.cache.translate_sequent(&node.conclusion, &self.logic)?;
        let mut premises = Vec::with_capacity(node.premises.len());
        for p in &node.premises {
            premises.push(self.node(p)?);
        }
        if let Some(p) = premises.iter().find(|p| p.conclusion.is_subsequent_of(&target)) {
            return Ok(weaken_to(p.clone(), &target)?);
        }
        let logic = self.logic;
        let built = match &node.rule {
            Rule::InitBot => ProofNode::init_bot(),
            Rule::Init => {
                let f = node.conclusion.ante.iter().next().expect("init has one formula");
                let s = Sequent::new([self.cache.flat(f, &logic)?], [self.cache.sharp(f, &logic)?]);
                self.lk
                    .decide(&s)?
                    .proof()
                    .ok_or_else(|| Prop18nError::Internal(format!("{s} is not classically provable")))?
            }
            Rule::Nec => {
                let f = node.conclusion.succ.iter().next().expect("nec has one formula");
                let t = self.cache.sharp(f, &logic)?;
                if !t.is_top() {
                    return Err(Prop18nError::Internal(format!("sharp of {f} is {t}, not true")));
                }
                top_proof()?
            }
            Rule::Ros | Rule::RosBox => {
                let f = node.conclusion.ante.iter().next().expect("ros has one formula");
                let t = self.cache.flat(f, &logic)?;
                if t != Formula::Bot {
                    return Err(Prop18nError::Internal(format!("flat of {f} is {t}, not false")));
                }
                ProofNode::init_bot()
            }
            Rule::AccL { principal } => {
                let t = self.cache.flat(principal, &logic)?;
                match &t {
                    Formula::Bot => ProofNode::init_bot(),
                    Formula::And(q, x) if matches!(**q, Formula::Var(Atom::Quote(_))) => {
                        let x = (**x).clone();
                        let left = ProofNode::infer(
                            Rule::AndL {
                                principal: t.clone(),
                                i: 2,
                            },
                            vec![ProofNode::init(x.clone())],
                        )?;
                        cut(x, left, premises.pop().expect("one premise"))?
                    }
                    _ => return Err(Prop18nError::Internal(format!("flat of accL principal {principal} is {t}"))),
                }
            }
            Rule::AccR { principal } => {
                let t = self.cache.sharp(principal, &logic)?;
                match &t {
                    t if t.is_top() => top_proof()?,
                    Formula::Or(q, y) if matches!(**q, Formula::Var(Atom::Quote(_))) => {
                        let y = (**y).clone();
                        let right = ProofNode::infer(
                            Rule::OrR {
                                principal: t.clone(),
                                i: 2,
                            },
                            vec![ProofNode::init(y.clone())],
                        )?;
                        cut(y, premises.pop().expect("one premise"), right)?
                    }
                    _ => return Err(Prop18nError::Internal(format!("sharp of accR principal {principal} is {t}"))),
                }
            }
            Rule::Cut { .. } => return Err(Prop18nError::Cut),
            rule => {
                let principal = rule.principal().expect("propositional rules have a principal");
                let on_left = matches!(rule, Rule::AndL { .. } | Rule::OrL { .. } | Rule::ImpL { .. } | Rule::WL { .. });
                let t = if on_left {
                    self.cache.flat(principal, &logic)?
                } else {
                    self.cache.sharp(principal, &logic)?
                };
                let translated = match rule {
                    Rule::AndL { i, .. } => Rule::AndL { principal: t, i: *i },
                    Rule::OrR { i, .. } => Rule::OrR { principal: t, i: *i },
                    Rule::AndR { .. } => Rule::AndR { principal: t },
                    Rule::OrL { .. } => Rule::OrL { principal: t },
                    Rule::ImpL { split, .. } => Rule::ImpL {
                        principal: t,
                        split: split.clone(),
                    },
                    Rule::ImpR { .. } => Rule::ImpR { principal: t },
                    Rule::WL { .. } => Rule::WL { principal: t },
                    Rule::WR { .. } => Rule::WR { principal: t },
                    other => return Err(Prop18nError::Internal(format!("unexpected rule {}", other.tag()))),
                };
                ProofNode::infer(translated, premises)?
            }
        };
        Ok(weaken_to(built, &target)?)
    }
}

fn cut(formula: Formula, left: ProofNode, right: ProofNode) -> Result<ProofNode, BuildError> {
    ProofNode::infer(
        Rule::Cut {
            formula,
            split: crate::calculus::Split {
                left_ante: Default::default(),
                left_succ: Default::default(),
            },
        },
        vec![left, right],
    )
}

fn inclusion(report: &mut Report, name: String, sub: &BTreeSet<Atom>, sup: &BTreeSet<Atom>) {
    let extra: Vec<String> = sub.difference(sup).map(|a| a.to_string()).collect();
    if extra.is_empty() {
        report.push(name, true);
    } else {
        report.push_detail(name, false, format!("extra atoms {}", extra.join(", ")));
    }
}

fn base_only(s: &BTreeSet<Atom>) -> BTreeSet<Atom> {
    s.iter().filter(|a| a.is_base()).cloned().collect()
}

/// Polarity conditions on the atoms of a translation of `phi`.
fn variable_checks(report: &mut Report, phi: &Formula, tag: &str, image: &Formula) {
    let v = signed_vars(phi);
    let w = signed_vars(image);
    for (sign, got, want) in [("+", &w.pos, &v.pos), ("-", &w.neg, &v.neg)] {
        inclusion(report, format!("(3a) V{sign}({tag}) base atoms ⊆ V{sign}({phi})"), &base_only(got), want);
        for atom in got.iter().filter(|a| !a.is_base()) {
            let payload = signed_vars(atom.payload().expect("quote atom"));
            let (same, other): (&BTreeSet<Atom>, &BTreeSet<Atom>) = if sign == "+" {
                (&payload.pos, &payload.neg)
            } else {
                (&payload.neg, &payload.pos)
            };
            let mut r = Report::new();
            inclusion(&mut r, String::new(), same, &v.pos);
            inclusion(&mut r, String::new(), other, &v.neg);
            report.push(format!("(3b) {atom} in V{sign}({tag}) for {phi}"), r.all_passed());
        }
    }
}

/// Checks the propositionalization conditions on every member of `corpus`
/// and the embedding condition on each pair whose implication is provable.
pub fn verify_propositionalization(corpus: &[(Formula, Formula)], logic: &LogicId) -> Result<Report, Prop18nError> {
    verify_propositionalization_with(&mut TranslationCache::new(), corpus, logic)
}

pub fn verify_propositionalization_with(
    cache: &mut TranslationCache,
    corpus: &[(Formula, Formula)],
    logic: &LogicId,
) -> Result<Report, Prop18nError> {
    let mut report = Report::with_header(format!("propositionalization conditions in {logic}"));
    let members: BTreeSet<&Formula> = corpus.iter().flat_map(|(a, b)| [a, b]).collect();
    for phi in members {
        let s = cache.sharp(phi, logic)?;
        let f = cache.flat(phi, logic)?;
        let prover = cache.prover(logic);
        let up = prover.provable(&Sequent::new([std_subst(&s)], [phi.clone()]))?;
        report.push(format!("(1) ⊢ σ(sharp {phi}) -> {phi}"), up);
        let down = prover.provable(&Sequent::new([phi.clone()], [std_subst(&f)]))?;
        report.push(format!("(1) ⊢ {phi} -> σ(flat {phi})"), down);
        let dominated = decide_classical(&Sequent::new([f.clone()], [s.clone()]))?;
        report.push(format!("flat {phi} ⊨ sharp {phi}"), dominated);
        variable_checks(&mut report, phi, "sharp", &s);
        variable_checks(&mut report, phi, "flat", &f);
    }
    for (phi, psi) in corpus {
        if cache.prover(logic).provable(&Sequent::new([phi.clone()], [psi.clone()]))? {
            let s = Sequent::new([cache.flat(phi, logic)?], [cache.sharp(psi, logic)?]);
            report.push(format!("(2) flat {phi} ⊨ sharp {psi}"), decide_classical(&s)?);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::check_lk;
    use crate::formula::parse_formula;
    use crate::prover::decide;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn seq(s: &str) -> Sequent {
        Sequent::parse(s).unwrap()
    }

    #[test]
    fn sharp_of_boxed_top_is_top() {
        for logic in LogicId::grid(2) {
            assert!(sharp(&f("box true"), &logic).unwrap().is_top(), "{logic}");
        }
    }

    #[test]
    fn translation_examples() {
        assert_eq!(sharp(&f("box box p"), &LogicId::plain(2, 1)).unwrap(), f("q{box box p} | q{box p}"));
        assert_eq!(flat(&f("box false"), &LogicId::r(1, 1)).unwrap(), Formula::Bot);
        assert_eq!(flat(&f("box box p"), &LogicId::plain(1, 2)).unwrap(), f("q{box box p} & q{box p}"));
        assert_eq!(sharp(&f("box p"), &LogicId::plain(1, 1)).unwrap(), f("q{box p}"));
    }

    #[test]
    fn implication_swaps_direction() {
        let logic = LogicId::plain(1, 2);
        assert_eq!(
            sharp(&f("box box p -> r"), &logic).unwrap(),
            f("q{box box p} & q{box p} -> r")
        );
        assert_eq!(flat(&f("box box p -> r"), &logic).unwrap(), f("q{box box p} -> r"));
    }

    #[test]
    fn plus_variant_condition_needs_depth_two() {
        let logic = LogicId::plus(0, 2);
        assert_eq!(flat(&f("box box box false"), &logic).unwrap(), Formula::Bot);
        assert_ne!(flat(&f("box box box false"), &LogicId::plain(0, 2)).unwrap(), Formula::Bot);
        assert_ne!(flat(&f("box false"), &logic).unwrap(), Formula::Bot);
    }

    #[test]
    fn quote_atoms_are_rejected() {
        assert!(matches!(sharp(&f("q{p}"), &LogicId::n()), Err(Prop18nError::QuoteAtom(_))));
    }

    #[test]
    fn std_subst_examples() {
        assert_eq!(std_subst(&f("q{box p} | q")), f("box p | q"));
        assert_eq!(std_subst(&f("p")), f("p"));
        let s = sharp(&f("box box p"), &LogicId::plain(2, 1)).unwrap();
        assert_eq!(std_subst(&s), f("box box p | box p"));
    }

    #[test]
    fn cache_is_reproducible() {
        let logic = LogicId::r(2, 1);
        let mut cache = TranslationCache::new();
        let phi = f("box box (p -> box q) & ~box r");
        let a = cache.flat(&phi, &logic).unwrap();
        let b = cache.flat(&phi, &logic).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, flat(&phi, &logic).unwrap());
    }

    fn emulated(s: &str, logic: &LogicId) -> ProofNode {
        let proof = decide(&seq(s), logic).unwrap().proof().unwrap();
        let lk = emulate(&proof, logic).unwrap();
        assert!(check_lk(&lk).is_valid(), "{}", lk.render());
        assert!(decide_classical(&lk.conclusion).unwrap());
        lk
    }

    #[test]
    fn nec_becomes_top() {
        let logic = LogicId::n();
        let proof = ProofNode::infer(Rule::Nec, vec![top_proof().unwrap()]).unwrap();
        let lk = emulate(&proof, &logic).unwrap();
        assert_eq!(lk.conclusion, Sequent::new([], [Formula::top()]));
        assert!(check_lk(&lk).is_valid());
    }

    #[test]
    fn init_becomes_flat_to_sharp() {
        let logic = LogicId::plain(1, 2);
        let lk = emulate(&ProofNode::init(f("box box p")), &logic).unwrap();
        assert_eq!(lk.conclusion, seq("q{box box p} & q{box p} => q{box box p}"));
        assert!(check_lk(&lk).is_valid());
        assert!(decide_classical(&lk.conclusion).unwrap());
    }

    #[test]
    fn acc_left_unfolds_with_a_cut() {
        let logic = LogicId::plain(0, 2);
        let premise = ProofNode::init(f("p"));
        let proof = ProofNode::infer_acc(true, f("box box p"), 0, 2, premise).unwrap();
        assert!(check_proof(&proof, &logic).is_valid());
        let lk = emulate(&proof, &logic).unwrap();
        assert_eq!(lk.conclusion, seq("q{box box p} & p => p"));
        assert!(check_lk(&lk).is_valid());
        assert!(decide_classical(&lk.conclusion).unwrap());
    }

    #[test]
    fn prover_proofs_emulate() {
        emulated("=> box p -> box box p", &LogicId::plain(2, 1));
        emulated("box box p => box p", &LogicId::plain(1, 2));
        emulated("box box box false =>", &LogicId::plus(0, 2));
        emulated("box (p & ~p) =>", &LogicId::r(0, 0));
        emulated("=> box (p -> p) & box true", &LogicId::n());
    }

    #[test]
    fn cut_input_is_rejected() {
        let logic = LogicId::n();
        let proof = cut(f("p"), ProofNode::init(f("p")), ProofNode::init(f("p"))).unwrap();
        assert_eq!(emulate(&proof, &logic).unwrap_err(), Prop18nError::Cut);
    }

    #[test]
    fn verification_examples() {
        let r = verify_propositionalization(&[(f("box p"), f("box p"))], &LogicId::plain(1, 1)).unwrap();
        assert!(r.all_passed(), "{r}");
        let r = verify_propositionalization(&[(f("box box p"), f("box p"))], &LogicId::plain(1, 2)).unwrap();
        assert!(r.checks.iter().any(|c| c.name.starts_with("(2)")), "{r}");
        assert!(r.all_passed(), "{r}");
        let r = verify_propositionalization(&[(f("box (p -> q)"), f("true"))], &LogicId::n()).unwrap();
        assert!(r.checks.iter().any(|c| c.name.starts_with("(3b)")), "{r}");
        assert!(r.all_passed(), "{r}");
    }
}
