use std::collections::HashMap;

use super::{ClosureSet, ProverError};
use crate::calculus::{LogicId, Sequent};
use crate::formula::Formula;

pub const MAX_UNIVERSE: usize = 64;

/// A sequent over the universe as a pair of bit masks.
type Bits = (u64, u64);

fn subset(a: Bits, b: Bits) -> bool {
    a.0 & !b.0 == 0 && a.1 & !b.1 == 0
}

/// The provable sequents over a universe, stored as the antichain of their
/// minimal elements. Weakening makes the provable set upward closed, so a
/// sequent is provable iff it contains a minimal element.
#[derive(Clone, Debug)]
pub struct ProvableSet {
    universe: Vec<Formula>,
    index: HashMap<Formula, usize>,
    minimal: Vec<Bits>,
}

impl ProvableSet {
    /// Membership for sequents over the universe. Formulas outside the
    /// universe can only enter by weakening, so they are ignored.
    pub fn contains(&self, s: &Sequent) -> bool {
        let bits = self.bits(s);
        self.minimal.iter().any(|m| subset(*m, bits))
    }

    fn bits(&self, s: &Sequent) -> Bits {
        let mask = |fs: &crate::calculus::FormulaSet| {
            fs.iter()
                .filter_map(|f| self.index.get(f))
                .fold(0u64, |acc, &i| acc | 1 << i)
        };
        (mask(&s.ante), mask(&s.succ))
    }

    pub fn minimal_sequents(&self) -> Vec<Sequent> {
        let mut out: Vec<Sequent> = self.minimal.iter().map(|b| self.sequent(*b)).collect();
        out.sort();
        out
    }

    pub fn universe(&self) -> &[Formula] {
        &self.universe
    }

    fn sequent(&self, (a, s): Bits) -> Sequent {
        let pick = |mask: u64| {
            (0..self.universe.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| self.universe[i].clone())
                .collect()
        };
        Sequent {
            ante: pick(a),
            succ: pick(s),
        }
    }
}

/// A one-premise instance: premise `Γ ∪ aux ⟹ Δ` (sides in the masks)
/// gives `Γ ∪ {π} ⟹ Δ` on π's side.
#[derive(Clone, Copy)]
struct Unary {
    aux: Bits,
    conclusion: Bits,
}

/// A two-premise instance. `conclusion` holds the principal formula (none
/// for cut).
#[derive(Clone, Copy)]
struct Binary {
    aux1: Bits,
    aux2: Bits,
    conclusion: Bits,
}

/// A rule whose premise is exactly `premise` and whose conclusion is
/// exactly `conclusion` (nec, ros, rosbox).
#[derive(Clone, Copy)]
struct Jump {
    premise: Bits,
    conclusion: Bits,
}

/// Least fixpoint of the active rules of `logic` (cut and weakening
/// included) over sequents built from `universe`.
pub fn saturate_forward(universe: &ClosureSet, logic: &LogicId) -> Result<ProvableSet, ProverError> {
    let forms: Vec<Formula> = universe.formulas.iter().cloned().collect();
    if forms.len() > MAX_UNIVERSE {
        return Err(ProverError::UniverseTooLarge(forms.len()));
    }
    let index: HashMap<Formula, usize> = forms.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
    let bit = |f: &Formula| index.get(f).map(|&i| 1u64 << i);
    let ante = |b: u64| (b, 0u64);
    let succ = |b: u64| (0u64, b);

    let mut seeds = Vec::new();
    let mut unary = Vec::new();
    let mut binary = Vec::new();
    let mut jumps = Vec::new();
    for f in &forms {
        let p = bit(f).expect("universe formula");
        seeds.push((p, p));
        // Cut on f.
        binary.push(Binary {
            aux1: succ(p),
            aux2: ante(p),
            conclusion: (0, 0),
        });
        match f {
            Formula::Bot => seeds.push((p, 0)),
            Formula::Var(_) => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                let (Some(a), Some(b)) = (bit(a), bit(b)) else {
                    continue;
                };
                match f {
                    Formula::And(..) => {
                        unary.push(Unary { aux: ante(a), conclusion: ante(p) });
                        unary.push(Unary { aux: ante(b), conclusion: ante(p) });
                        binary.push(Binary { aux1: succ(a), aux2: succ(b), conclusion: succ(p) });
                    }
                    Formula::Or(..) => {
                        unary.push(Unary { aux: succ(a), conclusion: succ(p) });
                        unary.push(Unary { aux: succ(b), conclusion: succ(p) });
                        binary.push(Binary { aux1: ante(a), aux2: ante(b), conclusion: ante(p) });
                    }
                    _ => {
                        unary.push(Unary { aux: (a, b), conclusion: succ(p) });
                        binary.push(Binary { aux1: succ(a), aux2: ante(b), conclusion: ante(p) });
                    }
                }
            }
            Formula::Box(body) => {
                let Some(c) = bit(body) else { continue };
                jumps.push(Jump { premise: succ(c), conclusion: succ(p) });
                if logic.has_ros() {
                    jumps.push(Jump { premise: ante(c), conclusion: ante(p) });
                }
                if logic.has_rosbox() && matches!(**body, Formula::Box(_)) {
                    jumps.push(Jump { premise: ante(c), conclusion: ante(p) });
                }
                let (k, core) = f.box_decompose();
                if logic.has_acc_l() && k >= logic.n {
                    let aux = Formula::box_n(k - logic.n + logic.m, core.clone());
                    if let Some(x) = bit(&aux) {
                        unary.push(Unary { aux: ante(x), conclusion: ante(p) });
                    }
                }
                if logic.has_acc_r() && k >= logic.m {
                    let aux = Formula::box_n(k - logic.m + logic.n, core.clone());
                    if let Some(x) = bit(&aux) {
                        unary.push(Unary { aux: succ(x), conclusion: succ(p) });
                    }
                }
            }
        }
    }

    let mut state = Antichain::default();
    for s in seeds {
        state.add(s);
    }
    while let Some(i) = state.queue.pop() {
        if !state.alive[i] {
            continue;
        }
        let e = state.items[i];
        let meets = |x: Bits, aux: Bits| x.0 & aux.0 != 0 || x.1 & aux.1 != 0;
        let minus = |x: Bits, aux: Bits| (x.0 & !aux.0, x.1 & !aux.1);
        let or = |x: Bits, y: Bits| (x.0 | y.0, x.1 | y.1);
        for r in &unary {
            // Without an aux formula the conclusion is a weakening of `e`.
            if meets(e, r.aux) {
                state.add(or(minus(e, r.aux), r.conclusion));
            }
        }
        for j in &jumps {
            if subset(e, j.premise) {
                state.add(j.conclusion);
            }
        }
        for r in &binary {
            let first = meets(e, r.aux1);
            let second = meets(e, r.aux2);
            if !first && !second {
                continue;
            }
            for k in 0..state.items.len() {
                if !state.alive[k] {
                    continue;
                }
                let other = state.items[k];
                if first && meets(other, r.aux2) {
                    state.add(or(or(minus(e, r.aux1), minus(other, r.aux2)), r.conclusion));
                }
                if second && meets(other, r.aux1) {
                    state.add(or(or(minus(other, r.aux1), minus(e, r.aux2)), r.conclusion));
                }
                if !state.alive[i] {
                    break;
                }
            }
        }
    }
    let minimal = state
        .items
        .iter()
        .zip(&state.alive)
        .filter(|(_, a)| **a)
        .map(|(b, _)| *b)
        .collect();
    Ok(ProvableSet {
        universe: forms,
        index,
        minimal,
    })
}

#[derive(Default)]
struct Antichain {
    items: Vec<Bits>,
    alive: Vec<bool>,
    queue: Vec<usize>,
}

impl Antichain {
    fn add(&mut self, s: Bits) {
        if self.items.iter().zip(&self.alive).any(|(m, a)| *a && subset(*m, s)) {
            return;
        }
        for (m, a) in self.items.iter().zip(self.alive.iter_mut()) {
            if *a && subset(s, *m) {
                *a = false;
            }
        }
        self.items.push(s);
        self.alive.push(true);
        self.queue.push(self.items.len() - 1);
    }
}
