//! The three coefficient conditions. Nothing here may depend on lattice size:
//! this file only sees the rule's `d` and coefficients.

use std::fmt;

use serde::Serialize;

use crate::number::{gcd, radical};
use crate::rule::FdcaRule;

/// The first condition a rule fails, in checking order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FailedCondition {
    /// `gcd(c5, d) != 1`.
    C5NotCoprime,
    /// One of `c0..c3` (by index) is not a multiple of `rad(d)`.
    DegreeTwoPlusCoefficientNotMultipleOfRad(u8),
    /// `c4 * c6` is not a multiple of `rad(d)`.
    C4C6ProductNotMultipleOfRad,
}

impl FailedCondition {
    /// 1, 2 or 3.
    pub fn number(&self) -> u8 {
        match self {
            FailedCondition::C5NotCoprime => 1,
            FailedCondition::DegreeTwoPlusCoefficientNotMultipleOfRad(_) => 2,
            FailedCondition::C4C6ProductNotMultipleOfRad => 3,
        }
    }
}

impl fmt::Display for FailedCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailedCondition::C5NotCoprime => f.write_str("condition 1 (gcd(c5, d) != 1)"),
            FailedCondition::DegreeTwoPlusCoefficientNotMultipleOfRad(i) => {
                write!(f, "condition 2 (c{i} is not a multiple of rad(d))")
            }
            FailedCondition::C4C6ProductNotMultipleOfRad => {
                f.write_str("condition 3 (c4*c6 is not a multiple of rad(d))")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ReversibilityVerdict {
    failed_condition: Option<FailedCondition>,
}

impl ReversibilityVerdict {
    /// Reversible for every lattice size.
    pub fn is_reversible(&self) -> bool {
        self.failed_condition.is_none()
    }

    pub fn failed_condition(&self) -> Option<FailedCondition> {
        self.failed_condition
    }
}

impl fmt::Display for ReversibilityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.failed_condition {
            None => f.write_str("reversible"),
            Some(c) => write!(f, "not reversible for all n: {c}"),
        }
    }
}

/// Decides reversibility for all lattice sizes from the coefficients alone.
///
/// The rule is reversible iff `gcd(c5, d) = 1`, each of `c0..c3` is a multiple
/// of `rad(d)`, and `c4 * c6` is a multiple of `rad(d)`. Conditions are checked
/// in that order and the first failure is reported.
pub fn check_algebraic(rule: &FdcaRule) -> ReversibilityVerdict {
    let d = rule.d().get() as u64;
    let c = rule.coeffs().map(|c| c as u64);
    let rad = radical(d).expect("StateCount guarantees d >= 2");

    let failed_condition = if gcd(c[5], d) != 1 {
        Some(FailedCondition::C5NotCoprime)
    } else if let Some(i) = (0..4).find(|&i| c[i] % rad != 0) {
        Some(FailedCondition::DegreeTwoPlusCoefficientNotMultipleOfRad(i as u8))
    } else if c[4] * c[6] % rad != 0 {
        Some(FailedCondition::C4C6ProductNotMultipleOfRad)
    } else {
        None
    };
    ReversibilityVerdict { failed_condition }
}
