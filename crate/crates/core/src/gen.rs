//! Seeded random formulas and sequents for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::Sequent;
use crate::formula::Formula;
use crate::prover::closure;

pub type GenRng = ChaCha8Rng;

pub fn rng(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Debug)]
pub struct GenConfig {
    /// Base atom names to draw from.
    pub atoms: Vec<String>,
    /// Upper bound on connective nodes per formula.
    pub max_size: usize,
    /// Upper bound on nested boxes along any path.
    pub max_box: usize,
    /// Whether `box` may be generated at all.
    pub modal: bool,
}

impl GenConfig {
    pub fn modal(atoms: usize, max_size: usize, max_box: usize) -> Self {
        GenConfig {
            atoms: atom_names(atoms),
            max_size,
            max_box,
            modal: true,
        }
    }

    pub fn classical(atoms: usize, max_size: usize) -> Self {
        GenConfig {
            atoms: atom_names(atoms),
            max_size,
            max_box: 0,
            modal: false,
        }
    }
}

pub fn atom_names(k: usize) -> Vec<String> {
    const NAMES: [&str; 8] = ["p", "q", "r", "s", "t", "u", "v", "w"];
    (0..k)
        .map(|i| NAMES.get(i).map(|s| s.to_string()).unwrap_or_else(|| format!("a{i}")))
        .collect()
}

pub fn formula(rng: &mut GenRng, cfg: &GenConfig) -> Formula {
    let size = rng.gen_range(0..=cfg.max_size);
    build(rng, cfg, size, cfg.max_box)
}

fn leaf(rng: &mut GenRng, cfg: &GenConfig) -> Formula {
    if cfg.atoms.is_empty() || rng.gen_bool(0.1) {
        Formula::Bot
    } else {
        Formula::var(cfg.atoms.choose(rng).expect("non-empty"))
    }
}

fn build(rng: &mut GenRng, cfg: &GenConfig, size: usize, boxes: usize) -> Formula {
    if size == 0 {
        return leaf(rng, cfg);
    }
    let can_box = cfg.modal && boxes > 0;
    let choice = rng.gen_range(0..if can_box { 6 } else { 4 });
    match choice {
        0..=2 => {
            let left = rng.gen_range(0..size);
            let a = build(rng, cfg, left, boxes);
            let b = build(rng, cfg, size - 1 - left, boxes);
            match choice {
                0 => Formula::and(a, b),
                1 => Formula::or(a, b),
                _ => Formula::imp(a, b),
            }
        }
        3 => Formula::not(build(rng, cfg, size - 1, boxes)),
        _ => Formula::boxed(build(rng, cfg, size - 1, boxes - 1)),
    }
}

/// A random sequent whose closure has at most `max_closure` formulas.
/// Half of the time a boxed variant of an antecedent subformula is placed
/// in the succedent, which makes the acc rules and nec relevant.
pub fn sequent(rng: &mut GenRng, cfg: &GenConfig, max_closure: usize) -> Sequent {
    loop {
        let na = rng.gen_range(0..=2);
        let ns = rng.gen_range(0..=2);
        let ante: Vec<Formula> = (0..na).map(|_| formula(rng, cfg)).collect();
        let succ: Vec<Formula> = (0..ns).map(|_| formula(rng, cfg)).collect();
        let mut s = Sequent::new(ante, succ);
        if rng.gen_bool(0.5) {
            if let Some(src) = s.formulas().cloned().collect::<Vec<_>>().choose(rng).cloned() {
                let subs: Vec<Formula> = src.subformulas().into_iter().collect();
                let core = subs.choose(rng).expect("subformulas are non-empty").clone();
                let (_, core) = crate::formula::box_decompose(&core);
                let j = rng.gen_range(0..=cfg.max_box);
                let twin = Formula::box_n(j, core);
                if rng.gen_bool(0.5) {
                    s.succ.insert(twin);
                } else {
                    s.ante.insert(twin);
                }
            }
        }
        if closure(&s).len() <= max_closure {
            return s;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_generation_is_reproducible() {
        let cfg = GenConfig::modal(3, 6, 3);
        let a: Vec<Formula> = (0..20).map({
            let mut r = rng(7);
            move |_| formula(&mut r, &cfg)
        }).collect();
        let cfg = GenConfig::modal(3, 6, 3);
        let mut r = rng(7);
        let b: Vec<Formula> = (0..20).map(|_| formula(&mut r, &cfg)).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn bounds_are_respected() {
        let cfg = GenConfig::modal(2, 5, 2);
        let mut r = rng(1);
        for _ in 0..200 {
            let f = formula(&mut r, &cfg);
            assert!(f.subformulas().iter().all(|g| g.box_depth() <= 2));
            let s = sequent(&mut r, &cfg, 12);
            assert!(closure(&s).len() <= 12);
        }
        let cfg = GenConfig::classical(3, 6);
        for _ in 0..100 {
            assert!(formula(&mut r, &cfg).is_classical());
        }
    }
}
