//! Bit-parallel truth tables for classical formulas over base and quote
//! atoms.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::calculus::Sequent;
use crate::formula::{Atom, Formula};

/// Largest atom count a table is built for.
pub const MAX_ATOMS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassicalError {
    #[error("formula {0} contains a box")]
    Modal(Formula),
    #[error("atom {0} is not in the table's vocabulary")]
    UnknownAtom(Atom),
    #[error("{0} atoms exceed the truth-table limit of {MAX_ATOMS}")]
    TooManyAtoms(usize),
}

/// Truth tables over a fixed, ordered atom vocabulary. Row `r` assigns
/// true to atom `i` iff bit `i` of `r` is set.
#[derive(Debug, Clone)]
pub struct Tabulator {
    atoms: Vec<Atom>,
    index: HashMap<Atom, usize>,
    words: usize,
    last_mask: u64,
}

const PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

impl Tabulator {
    pub fn new<I: IntoIterator<Item = Atom>>(atoms: I) -> Result<Self, ClassicalError> {
        let atoms: Vec<Atom> = atoms.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        if atoms.len() > MAX_ATOMS {
            return Err(ClassicalError::TooManyAtoms(atoms.len()));
        }
        let rows = 1usize << atoms.len();
        let words = rows.div_ceil(64);
        let last_mask = if rows >= 64 { u64::MAX } else { (1u64 << rows) - 1 };
        let index = atoms.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
        Ok(Tabulator {
            atoms,
            index,
            words,
            last_mask,
        })
    }

    /// A tabulator over the atoms of all `formulas`.
    pub fn for_formulas<'a, I: IntoIterator<Item = &'a Formula>>(formulas: I) -> Result<Self, ClassicalError> {
        let mut atoms = BTreeSet::new();
        for f in formulas {
            atoms.extend(f.atoms());
        }
        Tabulator::new(atoms)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn rows(&self) -> usize {
        1 << self.atoms.len()
    }

    fn constant(&self, value: bool) -> Vec<u64> {
        let mut v = vec![if value { u64::MAX } else { 0 }; self.words];
        self.normalise(&mut v);
        v
    }

    fn normalise(&self, v: &mut [u64]) {
        if let Some(last) = v.last_mut() {
            *last &= self.last_mask;
        }
    }

    pub fn atom_column(&self, i: usize) -> Vec<u64> {
        let mut v: Vec<u64> = (0..self.words)
            .map(|w| {
                if i < 6 {
                    PATTERNS[i]
                } else if (w >> (i - 6)) & 1 == 1 {
                    u64::MAX
                } else {
                    0
                }
            })
            .collect();
        self.normalise(&mut v);
        v
    }

    /// The table of `f`, one bit per row.
    pub fn table(&self, f: &Formula) -> Result<Vec<u64>, ClassicalError> {
        Ok(match f {
            Formula::Bot => self.constant(false),
            Formula::Var(a) => match self.index.get(a) {
                Some(&i) => self.atom_column(i),
                None => return Err(ClassicalError::UnknownAtom(a.clone())),
            },
            Formula::And(a, b) => zip(self.table(a)?, &self.table(b)?, |x, y| x & y),
            Formula::Or(a, b) => zip(self.table(a)?, &self.table(b)?, |x, y| x | y),
            Formula::Imp(a, b) => {
                let mut v = zip(self.table(a)?, &self.table(b)?, |x, y| !x | y);
                self.normalise(&mut v);
                v
            }
            Formula::Box(_) => return Err(ClassicalError::Modal(f.clone())),
        })
    }

    pub fn is_full(&self, v: &[u64]) -> bool {
        let full = self.constant(true);
        v == full.as_slice()
    }

    /// Value of the table `v` at row `r`.
    pub fn bit(v: &[u64], r: usize) -> bool {
        (v[r / 64] >> (r % 64)) & 1 == 1
    }
}

fn zip(mut a: Vec<u64>, b: &[u64], op: impl Fn(u64, u64) -> u64) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x = op(*x, *y);
    }
    a
}

/// `true` iff `⋀ante → ⋁succ` is a tautology.
pub fn valid(s: &Sequent) -> Result<bool, ClassicalError> {
    let tab = Tabulator::for_formulas(s.formulas())?;
    let mut acc = tab.constant(false);
    for f in &s.ante {
        let t = tab.table(f)?;
        for (x, y) in acc.iter_mut().zip(&t) {
            *x |= !y;
        }
    }
    for f in &s.succ {
        let t = tab.table(f)?;
        for (x, y) in acc.iter_mut().zip(&t) {
            *x |= y;
        }
    }
    tab.normalise(&mut acc);
    Ok(tab.is_full(&acc))
}

/// `⊨ a → b`.
pub fn entails(a: &Formula, b: &Formula) -> Result<bool, ClassicalError> {
    valid(&Sequent::new([a.clone()], [b.clone()]))
}

pub fn equivalent(a: &Formula, b: &Formula) -> Result<bool, ClassicalError> {
    Ok(entails(a, b)? && entails(b, a)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    /// Row-by-row evaluation through `Formula::eval`.
    fn slow_valid(s: &Sequent) -> bool {
        let atoms: Vec<Atom> = s.formulas().flat_map(|f| f.atoms()).collect::<BTreeSet<_>>().into_iter().collect();
        (0..1usize << atoms.len()).all(|r| {
            let val = |a: &Atom| {
                let i = atoms.iter().position(|b| b == a).unwrap();
                r >> i & 1 == 1
            };
            let ante = s.ante.iter().all(|f| f.eval(&val).unwrap());
            let succ = s.succ.iter().any(|f| f.eval(&val).unwrap());
            !ante || succ
        })
    }

    #[test]
    fn small_examples() {
        for (text, expected) in [
            ("p & q => p", true),
            ("=> p | ~p", true),
            ("q{box p} & p => q{box p}", true),
            ("p => q", false),
            ("=>", false),
            ("false =>", true),
            ("=> true", true),
        ] {
            let s = Sequent::parse(text).unwrap();
            assert_eq!(valid(&s).unwrap(), expected, "{text}");
            assert_eq!(slow_valid(&s), expected, "{text}");
        }
    }

    #[test]
    fn many_atoms_cross_word_boundary() {
        let names: Vec<String> = (0..9).map(|i| format!("a{i}")).collect();
        let conj = Formula::conj(names.iter().map(|n| Formula::var(n)));
        let disj = Formula::disj(names.iter().map(|n| Formula::var(n)));
        assert!(entails(&conj, &disj).unwrap());
        assert!(!entails(&disj, &conj).unwrap());
        let last = Formula::var("a8");
        assert!(entails(&conj, &last).unwrap());
        assert!(!entails(&last, &Formula::var("a7")).unwrap());
    }

    #[test]
    fn modal_input_is_rejected() {
        assert!(matches!(valid(&Sequent::parse("box p => box p").unwrap()), Err(ClassicalError::Modal(_))));
    }

    #[test]
    fn agrees_with_row_evaluation() {
        let texts = [
            "(p -> q) -> (q -> r) -> p -> r",
            "((p -> q) -> p) -> p",
            "p & (q | r) -> (p & q) | r",
            "(a0 | a1) & (a2 | a3) & (a4 | a5) & (a6 | ~a0) -> a1 | a2 | a3 | a6",
            "~(a0 & a1 & a2 & a3 & a4 & a5 & a6) | a6",
        ];
        for t in texts {
            let s = Sequent::new([], [f(t)]);
            assert_eq!(valid(&s).unwrap(), slow_valid(&s), "{t}");
        }
    }
}
