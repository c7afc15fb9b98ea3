//! Proof search, cut elimination, interpolation and propositionalization
//! for the pure-necessitation modal logics NA(m,n), N+A(m,n) and NRA(m,n).

pub mod calculus;
pub mod classical;
pub mod cutelim;
pub mod formula;
pub mod gen;
pub mod interp;
pub mod prop18n;
pub mod prover;
pub mod report;
pub mod ulip;

pub use calculus::{
    check_proof, enumerate_partitions, rule_set, CheckResult, LogicId, Partition, ProofNode, Rule, RuleTag,
    Sequent, Variant,
};
pub use formula::{box_decompose, parse_formula, print_formula, signed_vars, Atom, Formula, SignedVarSet};
