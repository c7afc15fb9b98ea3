//! Uniform Lyndon interpolation: a clause-based classical engine and the
//! modal pipeline through the flat translation.

use std::collections::BTreeSet;

use rand::Rng;
use thiserror::Error;

use crate::calculus::{LogicId, Sequent};
use crate::classical::{ClassicalError, Tabulator};
use crate::formula::{signed_vars, Atom, Formula};
use crate::gen::{self, GenConfig, GenRng};
use crate::prop18n::{std_subst, Prop18nError, TranslationCache};
use crate::prover::{Prover, ProverError};
use crate::report::Report;

/// Default cap on the number of allowed literals.
pub const DEFAULT_LITERAL_BOUND: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UlipError {
    #[error("formula is not classical: {0}")]
    Modal(Formula),
    #[error("{found} allowed literals exceed the bound of {bound}")]
    TooManyLiterals { found: usize, bound: usize },
    #[error("forbidden set contains a quote atom: {0}")]
    QuoteInForbidden(Atom),
    #[error(transparent)]
    Classical(#[from] ClassicalError),
    #[error(transparent)]
    Translation(#[from] Prop18nError),
    #[error(transparent)]
    Prover(#[from] ProverError),
}

/// The forbidden positive and negative variables `P⁺`, `P⁻`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ForbiddenSets {
    pub ppos: BTreeSet<Atom>,
    pub pneg: BTreeSet<Atom>,
}

impl ForbiddenSets {
    pub fn new<P, N>(ppos: P, pneg: N) -> Self
    where
        P: IntoIterator<Item = Atom>,
        N: IntoIterator<Item = Atom>,
    {
        ForbiddenSets {
            ppos: ppos.into_iter().collect(),
            pneg: pneg.into_iter().collect(),
        }
    }

    pub fn from_names(ppos: &[&str], pneg: &[&str]) -> Self {
        ForbiddenSets::new(ppos.iter().map(|s| Atom::base(s)), pneg.iter().map(|s| Atom::base(s)))
    }

    /// `V⁺(ψ) ∩ P⁺ = V⁻(ψ) ∩ P⁻ = ∅`.
    pub fn admits(&self, psi: &Formula) -> bool {
        safety(psi, self).0
    }
}

/// `(plus_safe, minus_safe)` of `psi`.
pub fn safety(psi: &Formula, forbidden: &ForbiddenSets) -> (bool, bool) {
    let v = signed_vars(psi);
    let disjoint = |a: &BTreeSet<Atom>, b: &BTreeSet<Atom>| a.is_disjoint(b);
    let plus = disjoint(&forbidden.ppos, &v.pos) && disjoint(&forbidden.pneg, &v.neg);
    let minus = disjoint(&forbidden.ppos, &v.neg) && disjoint(&forbidden.pneg, &v.pos);
    (plus, minus)
}

/// A clause as `(atom, positive)` literals in atom order.
type Clause = Vec<(Atom, bool)>;

fn literal(a: &Atom, positive: bool) -> Formula {
    let v = Formula::Var(a.clone());
    if positive {
        v
    } else {
        Formula::not(v)
    }
}

fn clause_formula(c: &Clause) -> Formula {
    Formula::disj(c.iter().map(|(a, s)| literal(a, *s)))
}

/// Allowed literal atoms `(V⁺(φ)∖P⁺, V⁻(φ)∖P⁻)`.
fn allowed(phi: &Formula, forbidden: &ForbiddenSets) -> (BTreeSet<Atom>, BTreeSet<Atom>) {
    let v = signed_vars(phi);
    (
        v.pos.difference(&forbidden.ppos).cloned().collect(),
        v.neg.difference(&forbidden.pneg).cloned().collect(),
    )
}

/// Every non-tautological clause over the allowed literals, shortest first,
/// then by literal sequence (atom order, positive before negative).
fn all_clauses(pos: &BTreeSet<Atom>, neg: &BTreeSet<Atom>) -> Vec<Clause> {
    let atoms: Vec<&Atom> = pos.union(neg).collect();
    let mut out: Vec<Clause> = vec![Vec::new()];
    for a in atoms {
        let mut next = Vec::with_capacity(out.len() * 3);
        for c in &out {
            next.push(c.clone());
            if pos.contains(a) {
                let mut d = c.clone();
                d.push((a.clone(), true));
                next.push(d);
            }
            if neg.contains(a) {
                let mut d = c.clone();
                d.push((a.clone(), false));
                next.push(d);
            }
        }
        out = next;
    }
    out.sort_by(|x, y| {
        x.len()
            .cmp(&y.len())
            .then_with(|| x.iter().map(|(a, s)| (a, !s)).cmp(y.iter().map(|(a, s)| (a, !s))))
    });
    out
}

/// All clauses whose literals respect the allowed polarities of `phi`, in
/// canonical order, as formulas.
pub fn allowed_clauses(phi: &Formula, forbidden: &ForbiddenSets) -> Vec<Formula> {
    let (pos, neg) = allowed(phi, forbidden);
    all_clauses(&pos, &neg).iter().map(clause_formula).collect()
}

fn subsumes(small: &Clause, big: &Clause) -> bool {
    small.iter().all(|l| big.contains(l))
}

pub fn classical_post_interpolant(phi: &Formula, forbidden: &ForbiddenSets) -> Result<Formula, UlipError> {
    classical_post_interpolant_bounded(phi, forbidden, DEFAULT_LITERAL_BOUND)
}

/// Conjunction of the subsumption-minimal allowed clauses entailed by `phi`.
pub fn classical_post_interpolant_bounded(
    phi: &Formula,
    forbidden: &ForbiddenSets,
    bound: usize,
) -> Result<Formula, UlipError> {
    if !phi.is_classical() {
        return Err(UlipError::Modal(phi.clone()));
    }
    let (pos, neg) = allowed(phi, forbidden);
    if pos.len() + neg.len() > bound {
        return Err(UlipError::TooManyLiterals {
            found: pos.len() + neg.len(),
            bound,
        });
    }
    let tab = Tabulator::for_formulas([phi])?;
    let truth = tab.table(phi)?;
    let columns: std::collections::BTreeMap<&Atom, Vec<u64>> =
        tab.atoms().iter().enumerate().map(|(i, a)| (a, tab.atom_column(i))).collect();
    let mut kept: Vec<Clause> = Vec::new();
    for c in all_clauses(&pos, &neg) {
        if kept.iter().any(|k| subsumes(k, &c)) {
            continue;
        }
        let mut table = vec![0u64; truth.len()];
        for (a, s) in &c {
            for (x, y) in table.iter_mut().zip(&columns[a]) {
                *x |= if *s { *y } else { !*y };
            }
        }
        if truth.iter().zip(&table).all(|(t, c)| t & !c == 0) {
            kept.push(c);
        }
    }
    Ok(match kept.first() {
        None => Formula::top(),
        Some(c) if c.is_empty() => Formula::Bot,
        Some(_) => Formula::conj(kept.iter().map(clause_formula)),
    })
}

/// The translated problem `(φ♭, Q⁺, Q⁻)` solved by the classical engine.
#[derive(Clone, Debug)]
pub struct Lifted {
    pub flat: Formula,
    pub forbidden: ForbiddenSets,
    pub interpolant: Formula,
}

pub fn modal_post_interpolant(phi: &Formula, forbidden: &ForbiddenSets, logic: &LogicId) -> Result<Formula, UlipError> {
    Ok(std_subst(&lift(&mut TranslationCache::new(), phi, forbidden, logic)?.interpolant))
}

pub fn modal_post_interpolant_with(
    cache: &mut TranslationCache,
    phi: &Formula,
    forbidden: &ForbiddenSets,
    logic: &LogicId,
) -> Result<Formula, UlipError> {
    Ok(std_subst(&lift(cache, phi, forbidden, logic)?.interpolant))
}

/// Computes `φ♭`, extends the forbidden sets with the quote atoms whose
/// payload is not safe, and runs the classical engine.
pub fn lift(
    cache: &mut TranslationCache,
    phi: &Formula,
    forbidden: &ForbiddenSets,
    logic: &LogicId,
) -> Result<Lifted, UlipError> {
    if let Some(a) = forbidden.ppos.iter().chain(&forbidden.pneg).find(|a| !a.is_base()) {
        return Err(UlipError::QuoteInForbidden(a.clone()));
    }
    let flat = cache.flat(phi, logic)?;
    let mut q = forbidden.clone();
    for atom in flat.atoms() {
        if let Some(payload) = atom.payload() {
            let (plus, minus) = safety(payload, forbidden);
            if !plus {
                q.ppos.insert(atom.clone());
            }
            if !minus {
                q.pneg.insert(atom.clone());
            }
        }
    }
    let interpolant = classical_post_interpolant(&flat, &q)?;
    Ok(Lifted {
        flat,
        forbidden: q,
        interpolant,
    })
}

/// Candidate consequences for checking uniformity: the allowed clauses of
/// the lifted problem mapped back by the standard substitution, plus
/// `count` random safe formulas entailed by `phi`.
pub fn sample_pool(
    rng: &mut GenRng,
    cache: &mut TranslationCache,
    phi: &Formula,
    forbidden: &ForbiddenSets,
    logic: &LogicId,
    count: usize,
) -> Result<Vec<Formula>, UlipError> {
    let lifted = lift(cache, phi, forbidden, logic)?;
    let mut pool: Vec<Formula> = allowed_clauses(&lifted.flat, &lifted.forbidden)
        .iter()
        .map(std_subst)
        .collect();
    let mut names: Vec<String> = phi
        .atoms()
        .into_iter()
        .filter(|a| a.is_base())
        .map(|a| a.to_string())
        .collect();
    names.push("z".into());
    let cfg = GenConfig {
        atoms: names,
        max_size: 4,
        max_box: 3,
        modal: true,
    };
    let mut entailed: Vec<Formula> = Vec::new();
    for c in &pool {
        if cache.prover(logic).provable(&Sequent::new([phi.clone()], [c.clone()]))? {
            entailed.push(c.clone());
        }
    }
    entailed.push(Formula::top());
    let mut found = 0;
    let mut attempts = 0;
    while found < count && attempts < count * 50 {
        attempts += 1;
        let rho = gen::formula(rng, &cfg);
        if !forbidden.admits(&rho) {
            continue;
        }
        let candidate = match rng.gen_range(0..3) {
            0 => rho,
            1 => Formula::or(entailed[rng.gen_range(0..entailed.len())].clone(), rho),
            _ => Formula::and(
                entailed[rng.gen_range(0..entailed.len())].clone(),
                Formula::or(entailed[rng.gen_range(0..entailed.len())].clone(), rho),
            ),
        };
        if cache.prover(logic).provable(&Sequent::new([phi.clone()], [candidate.clone()]))? {
            pool.push(candidate);
            found += 1;
        }
    }
    Ok(pool)
}

fn inclusion(report: &mut Report, name: &str, sub: &BTreeSet<Atom>, sup: &BTreeSet<Atom>) {
    let extra: Vec<String> = sub.difference(sup).map(|a| a.to_string()).collect();
    if extra.is_empty() {
        report.push(name, true);
    } else {
        report.push_detail(name, false, format!("extra atoms {}", extra.join(", ")));
    }
}

/// Checks the three post-interpolant conditions, the last one only over
/// `psi_pool`.
pub fn verify_post_interpolant(
    phi: &Formula,
    chi: &Formula,
    forbidden: &ForbiddenSets,
    psi_pool: &[Formula],
    logic: &LogicId,
) -> Result<Report, ProverError> {
    verify_post_interpolant_with(&mut Prover::new(*logic), phi, chi, forbidden, psi_pool)
}

pub fn verify_post_interpolant_with(
    prover: &mut Prover,
    phi: &Formula,
    chi: &Formula,
    forbidden: &ForbiddenSets,
    psi_pool: &[Formula],
) -> Result<Report, ProverError> {
    let mut report = Report::with_header(format!(
        "condition 3 checked on a sample of {} formulas, not on all formulas",
        psi_pool.len()
    ));
    let vc = signed_vars(chi);
    let (pos, neg) = allowed(phi, forbidden);
    inclusion(&mut report, "(1) V⁺(χ) ⊆ V⁺(φ) ∖ P⁺", &vc.pos, &pos);
    inclusion(&mut report, "(1) V⁻(χ) ⊆ V⁻(φ) ∖ P⁻", &vc.neg, &neg);
    let ok = prover.provable(&Sequent::new([phi.clone()], [chi.clone()]))?;
    report.push(format!("(2) ⊢ {phi} -> {chi}"), ok);
    for psi in psi_pool {
        if !forbidden.admits(psi) || !prover.provable(&Sequent::new([phi.clone()], [psi.clone()]))? {
            continue;
        }
        let ok = prover.provable(&Sequent::new([chi.clone()], [psi.clone()]))?;
        report.push(format!("(3) ⊢ {chi} -> {psi}"), ok);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn ppos(names: &[&str]) -> ForbiddenSets {
        ForbiddenSets::from_names(names, &[])
    }

    #[test]
    fn classical_examples() {
        assert_eq!(classical_post_interpolant(&f("p & q"), &ppos(&["q"])).unwrap(), f("p"));
        assert!(classical_post_interpolant(&f("p"), &ppos(&["p"])).unwrap().is_top());
        assert_eq!(classical_post_interpolant(&f("false"), &ppos(&["p"])).unwrap(), Formula::Bot);
        assert_eq!(classical_post_interpolant(&f("p & ~p"), &ForbiddenSets::default()).unwrap(), Formula::Bot);
    }

    #[test]
    fn canonical_clause_order() {
        let chi = classical_post_interpolant(&f("(q | ~r) & p"), &ForbiddenSets::default()).unwrap();
        assert_eq!(chi, f("p & (q | ~r)"));
    }

    #[test]
    fn modal_input_is_rejected() {
        assert!(matches!(
            classical_post_interpolant(&f("box p"), &ForbiddenSets::default()),
            Err(UlipError::Modal(_))
        ));
    }

    #[test]
    fn literal_bound_is_enforced() {
        let phi = f("p & q & r");
        assert!(matches!(
            classical_post_interpolant_bounded(&phi, &ForbiddenSets::default(), 2),
            Err(UlipError::TooManyLiterals { found: 3, bound: 2 })
        ));
    }

    #[test]
    fn safety_examples() {
        assert_eq!(safety(&f("box q"), &ppos(&["q"])), (false, true));
        assert_eq!(safety(&f("false"), &ForbiddenSets::from_names(&["p"], &["q"])), (true, true));
        assert_eq!(safety(&f("~q"), &ppos(&["q"])), (true, false));
    }

    #[test]
    fn modal_examples() {
        let logic = LogicId::plain(1, 1);
        let phi = f("box p & box q");
        let chi = modal_post_interpolant(&phi, &ppos(&["q"]), &logic).unwrap();
        assert_eq!(chi, f("box p"));
        let pool = [f("box p"), f("box p | r"), Formula::top()];
        let r = verify_post_interpolant(&phi, &chi, &ppos(&["q"]), &pool, &logic).unwrap();
        assert!(r.all_passed(), "{r}");
        assert_eq!(r.checks.iter().filter(|c| c.name.starts_with("(3)")).count(), 3);

        assert_eq!(modal_post_interpolant(&f("box p"), &ForbiddenSets::default(), &logic).unwrap(), f("box p"));
        assert!(modal_post_interpolant(&f("p"), &ppos(&["p"]), &logic).unwrap().is_top());
    }

    #[test]
    fn verification_examples() {
        let logic = LogicId::n();
        let r = verify_post_interpolant(&f("p"), &Formula::top(), &ppos(&["p"]), &[f("p")], &logic).unwrap();
        assert!(r.all_passed(), "{r}");
        assert!(!r.checks.iter().any(|c| c.name.starts_with("(3)")));
        let r = verify_post_interpolant(&f("p"), &f("p"), &ppos(&["p"]), &[], &logic).unwrap();
        assert!(!r.all_passed());
        assert!(r.failures().any(|c| c.name.starts_with("(1) V⁺")));
    }

    #[test]
    fn quote_atoms_in_forbidden_sets_are_rejected() {
        let forbidden = ForbiddenSets::new([Atom::quote(f("box p"))], []);
        assert!(matches!(
            modal_post_interpolant(&f("box p"), &forbidden, &LogicId::n()),
            Err(UlipError::QuoteInForbidden(_))
        ));
    }

    #[test]
    fn sampled_pool_passes() {
        let logic = LogicId::plain(1, 2);
        let phi = f("box box (p & ~q) | box r");
        let forbidden = ForbiddenSets::from_names(&["r"], &["q"]);
        let mut cache = TranslationCache::new();
        let chi = modal_post_interpolant_with(&mut cache, &phi, &forbidden, &logic).unwrap();
        let pool = sample_pool(&mut gen::rng(3), &mut cache, &phi, &forbidden, &logic, 20).unwrap();
        let r = verify_post_interpolant(&phi, &chi, &forbidden, &pool, &logic).unwrap();
        assert!(r.all_passed(), "{r}");
    }
}
