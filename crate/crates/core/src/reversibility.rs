//! Deciding reversibility: the constant-cost coefficient test, a brute-force
//! bijectivity oracle, finite-range classification, and the harness that
//! checks the former against the latter.

mod algebraic;
mod oracle;
mod validate;

pub use algebraic::{check_algebraic, FailedCondition, ReversibilityVerdict};
pub use oracle::{brute_force_reversible, classify_empirical, EmpiricalClass, EmpiricalLabel};
pub use validate::{
    cross_validate, default_options, ValidationMode, ValidationOptions, ValidationReport, Violation,
    DEFAULT_SAMPLE_SIZE, DEFAULT_SEED,
};
