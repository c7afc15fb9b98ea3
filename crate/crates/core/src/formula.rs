//! Modal formulas over base atoms and quote atoms.
//!
//! `⊤` and `¬φ` are not constructors: `true` is `⊥ → ⊥` and `~φ` is
//! `φ → ⊥`. Every algorithm in the crate sees only the six node kinds of
//! [`Formula`].

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

mod parse;

pub use parse::{parse_formula, ParseError};

/// A propositional variable of the extended language.
///
/// A quote atom `q{φ}` is the fresh variable indexed by the formula `φ`.
/// Two quote atoms are the same atom iff their payloads are structurally
/// equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Base(Arc<str>),
    Quote(Arc<Formula>),
}

impl Atom {
    pub fn base(name: &str) -> Atom {
        Atom::Base(Arc::from(name))
    }

    pub fn quote(payload: Formula) -> Atom {
        Atom::Quote(Arc::new(payload))
    }

    pub fn is_base(&self) -> bool {
        matches!(self, Atom::Base(_))
    }

    pub fn payload(&self) -> Option<&Formula> {
        match self {
            Atom::Quote(f) => Some(f),
            Atom::Base(_) => None,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Base(name) => f.write_str(name),
            Atom::Quote(payload) => write!(f, "q{{{payload}}}"),
        }
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Bot,
    Var(Atom),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Imp(Arc<Formula>, Arc<Formula>),
    Box(Arc<Formula>),
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(Atom::base(name))
    }

    pub fn quote(payload: Formula) -> Formula {
        Formula::Var(Atom::quote(payload))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Arc::new(a), Arc::new(b))
    }

    /// `φ → ⊥`.
    pub fn not(a: Formula) -> Formula {
        Formula::imp(a, Formula::Bot)
    }

    /// `⊥ → ⊥`.
    pub fn top() -> Formula {
        Formula::imp(Formula::Bot, Formula::Bot)
    }

    pub fn boxed(a: Formula) -> Formula {
        Formula::Box(Arc::new(a))
    }

    /// `□^k φ`.
    pub fn box_n(k: usize, a: Formula) -> Formula {
        (0..k).fold(a, |acc, _| Formula::boxed(acc))
    }

    /// Left-nested conjunction; `⊤` for an empty iterator.
    pub fn conj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or_else(Formula::top)
    }

    /// Left-nested disjunction; `⊥` for an empty iterator.
    pub fn disj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items.into_iter().reduce(Formula::or).unwrap_or(Formula::Bot)
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Formula::Imp(a, b) if **a == Formula::Bot && **b == Formula::Bot)
    }

    /// True iff the formula contains no `Box` node.
    pub fn is_classical(&self) -> bool {
        match self {
            Formula::Bot | Formula::Var(_) => true,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.is_classical() && b.is_classical()
            }
            Formula::Box(_) => false,
        }
    }

    pub fn has_quote_atoms(&self) -> bool {
        match self {
            Formula::Bot => false,
            Formula::Var(a) => !a.is_base(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.has_quote_atoms() || b.has_quote_atoms()
            }
            Formula::Box(a) => a.has_quote_atoms(),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Bot | Formula::Var(_) => 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.size() + b.size(),
            Formula::Box(a) => 1 + a.size(),
        }
    }

    /// Maximal nesting of boxes.
    pub fn box_depth(&self) -> usize {
        match self {
            Formula::Bot | Formula::Var(_) => 0,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.box_depth().max(b.box_depth())
            }
            Formula::Box(a) => 1 + a.box_depth(),
        }
    }

    /// Splits `□^k ψ` with `ψ` not a box. `k` may be zero.
    pub fn box_decompose(&self) -> (usize, &Formula) {
        let mut k = 0;
        let mut core = self;
        while let Formula::Box(inner) = core {
            k += 1;
            core = inner;
        }
        (k, core)
    }

    /// Removes exactly `k` leading boxes, if there are at least that many.
    pub fn strip_boxes(&self, k: usize) -> Option<&Formula> {
        let mut cur = self;
        for _ in 0..k {
            match cur {
                Formula::Box(inner) => cur = inner,
                _ => return None,
            }
        }
        Some(cur)
    }

    /// All atoms occurring in the formula (quote atoms are opaque).
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Formula::Bot => {}
            Formula::Var(a) => {
                out.insert(a.clone());
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Formula::Box(a) => a.collect_atoms(out),
        }
    }

    /// Set of all subformulas, including the formula itself.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    pub(crate) fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if !out.insert(self.clone()) {
            return;
        }
        match self {
            Formula::Bot | Formula::Var(_) => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_subformulas(out);
                b.collect_subformulas(out);
            }
            Formula::Box(a) => a.collect_subformulas(out),
        }
    }

    /// Evaluates a classical formula under an assignment of its atoms.
    ///
    /// Returns `None` if a `Box` node is reached.
    pub fn eval<F: Fn(&Atom) -> bool>(&self, val: &F) -> Option<bool> {
        Some(match self {
            Formula::Bot => false,
            Formula::Var(a) => val(a),
            Formula::And(a, b) => a.eval(val)? && b.eval(val)?,
            Formula::Or(a, b) => a.eval(val)? || b.eval(val)?,
            Formula::Imp(a, b) => !a.eval(val)? || b.eval(val)?,
            Formula::Box(_) => return None,
        })
    }
}

/// Free-function form of [`Formula::box_decompose`] returning an owned core.
pub fn box_decompose(f: &Formula) -> (usize, Formula) {
    let (k, core) = f.box_decompose();
    (k, core.clone())
}

/// Positive and negative occurrence sets of atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignedVarSet {
    pub pos: BTreeSet<Atom>,
    pub neg: BTreeSet<Atom>,
}

impl SignedVarSet {
    pub fn all(&self) -> BTreeSet<Atom> {
        self.pos.union(&self.neg).cloned().collect()
    }

    pub fn union(&self, other: &SignedVarSet) -> SignedVarSet {
        SignedVarSet {
            pos: self.pos.union(&other.pos).cloned().collect(),
            neg: self.neg.union(&other.neg).cloned().collect(),
        }
    }

    /// Swaps the two polarities.
    pub fn flipped(&self) -> SignedVarSet {
        SignedVarSet {
            pos: self.neg.clone(),
            neg: self.pos.clone(),
        }
    }

    pub fn of_all<'a, I: IntoIterator<Item = &'a Formula>>(fs: I) -> SignedVarSet {
        fs.into_iter()
            .fold(SignedVarSet::default(), |acc, f| acc.union(&signed_vars(f)))
    }
}

/// Computes `(V⁺(φ), V⁻(φ))`.
pub fn signed_vars(f: &Formula) -> SignedVarSet {
    let mut out = SignedVarSet::default();
    walk_signed(f, true, &mut out);
    out
}

fn walk_signed(f: &Formula, positive: bool, out: &mut SignedVarSet) {
    match f {
        Formula::Bot => {}
        Formula::Var(a) => {
            if positive {
                out.pos.insert(a.clone());
            } else {
                out.neg.insert(a.clone());
            }
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            walk_signed(a, positive, out);
            walk_signed(b, positive, out);
        }
        Formula::Imp(a, b) => {
            walk_signed(a, !positive, out);
            walk_signed(b, positive, out);
        }
        Formula::Box(a) => walk_signed(a, positive, out),
    }
}

/// Prints the canonical text form.
///
/// Canonical choices: `⊥ → ⊥` prints as `true`, any other `φ → ⊥` prints
/// as `~φ`, `∧`/`∨` are left-associative and `→` is right-associative, and
/// parentheses appear only where precedence requires them.
pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

// Binding strength: imp 1, or 2, and 3, unary 4.
fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Bot | Formula::Var(_) | Formula::Box(_) => 4,
        Formula::Imp(_, b) if **b == Formula::Bot => 4,
        Formula::And(..) => 3,
        Formula::Or(..) => 2,
        Formula::Imp(..) => 1,
    }
}

fn write_at(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if prec(f) < min {
        out.write_str("(")?;
        write_formula(f, out)?;
        out.write_str(")")
    } else {
        write_formula(f, out)
    }
}

fn write_formula(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match f {
        Formula::Bot => out.write_str("false"),
        Formula::Var(a) => write!(out, "{a}"),
        _ if f.is_top() => out.write_str("true"),
        Formula::Imp(a, b) if **b == Formula::Bot => {
            out.write_str("~")?;
            write_at(a, 4, out)
        }
        Formula::Box(a) => {
            out.write_str("box ")?;
            write_at(a, 4, out)
        }
        Formula::And(a, b) => {
            write_at(a, 3, out)?;
            out.write_str(" & ")?;
            write_at(b, 4, out)
        }
        Formula::Or(a, b) => {
            write_at(a, 2, out)?;
            out.write_str(" | ")?;
            write_at(b, 3, out)
        }
        Formula::Imp(a, b) => {
            write_at(a, 2, out)?;
            out.write_str(" -> ")?;
            write_at(b, 1, out)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, f)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, f)
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}
