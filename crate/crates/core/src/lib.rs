//! First-degree cellular automata (FDCAs) over `Z_d` under null boundary.
//!
//! A first-degree rule is the local map
//!
//! ```text
//! R(x, y, z) = c0·xyz + c1·xy + c2·xz + c3·yz + c4·x + c5·y + c6·z + c7  (mod d)
//! ```
//!
//! applied to a one-dimensional lattice of `n` cells whose missing neighbours
//! read as state 0. The crate decides whether such a rule is a bijection for
//! every lattice size from its eight coefficients alone, synthesizes every such
//! rule for a given `d`, and carries a brute-force oracle to check both claims
//! against the actual global maps.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod export;
pub mod number;
pub mod reversibility;
pub mod rule;
pub mod synthesis;

pub use dynamics::{build_transition_graph, decode, encode, global_step, trajectory, TransitionGraph};
pub use error::{Error, Result};
pub use reversibility::{
    brute_force_reversible, check_algebraic, classify_empirical, cross_validate, EmpiricalClass,
    EmpiricalLabel, FailedCondition, ReversibilityVerdict, ValidationOptions, ValidationReport,
};
pub use rule::{evaluate_local, format_rule, parse_rule, Configuration, FdcaRule, State, StateCount};
pub use synthesis::{coefficient_domains, count_reversible, enumerate_reversible, table_row, CoefficientDomains};

/// Default node budget for anything that enumerates all `d^n` configurations.
pub const DEFAULT_NODE_CAP: u64 = 1 << 24;
