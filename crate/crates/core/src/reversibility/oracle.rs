//! Exhaustive bijectivity testing of `G_n` for one lattice size at a time.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dynamics::{max_feasible_n, node_count, LocalMap};
use crate::error::{Error, Result};
use crate::rule::FdcaRule;

/// Reusable visited-bitmap for repeated sweeps.
#[derive(Debug, Default)]
pub(crate) struct Oracle {
    visited: Vec<u64>,
}

impl Oracle {
    /// Sweeps all `size = d^n` configurations, marking successors; returns false
    /// at the first successor seen twice.
    pub(crate) fn is_bijective(&mut self, local: &LocalMap<'_>, n: usize, size: u64) -> bool {
        let words = size.div_ceil(64) as usize;
        self.visited.clear();
        self.visited.resize(words, 0);
        let visited = &mut self.visited;
        local.sweep(n, 0, size, |_, next| {
            let (w, bit) = ((next / 64) as usize, 1u64 << (next % 64));
            if visited[w] & bit != 0 {
                return false;
            }
            visited[w] |= bit;
            true
        })
    }
}

/// Whether `G_n` is a bijection on all `d^n` configurations.
///
/// On a finite set injectivity is bijectivity, so the sweep stops at the first
/// configuration whose image was already produced.
pub fn brute_force_reversible(rule: &FdcaRule, n: usize, cap: u64) -> Result<bool> {
    let size = node_count(rule.d(), n, cap)?;
    let local = LocalMap::new(rule, size);
    Ok(Oracle::default().is_bijective(&local, n, size))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EmpiricalLabel {
    AllReversibleTested,
    AllIrreversibleTested,
    MixedTested,
}

impl EmpiricalLabel {
    fn from_results<'a>(results: impl IntoIterator<Item = &'a bool>) -> Self {
        let (mut any_true, mut any_false) = (false, false);
        for &b in results {
            any_true |= b;
            any_false |= !b;
        }
        match (any_true, any_false) {
            (true, false) => EmpiricalLabel::AllReversibleTested,
            (false, true) => EmpiricalLabel::AllIrreversibleTested,
            _ => EmpiricalLabel::MixedTested,
        }
    }
}

/// Bijectivity evidence over a range of lattice sizes. Says nothing about sizes
/// outside the range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmpiricalClass {
    pub n_min: usize,
    pub n_max: usize,
    pub per_n: BTreeMap<usize, bool>,
    pub label: EmpiricalLabel,
}

pub fn classify_empirical(rule: &FdcaRule, n_min: usize, n_max: usize, cap: u64) -> Result<EmpiricalClass> {
    if n_min > n_max {
        return Err(Error::EmptyRange { n_min, n_max });
    }
    if n_min == 0 {
        return Err(Error::EmptyConfiguration);
    }
    let d = rule.d();
    if node_count(d, n_max, cap).is_err() {
        return Err(Error::RangeBudgetExceeded {
            d: d.get(),
            n_max,
            cap,
            largest_feasible: max_feasible_n(d, cap),
        });
    }
    let local = LocalMap::new(rule, node_count(d, n_max, cap)?);
    let mut oracle = Oracle::default();
    let per_n: BTreeMap<usize, bool> = (n_min..=n_max)
        .map(|n| {
            let size = d.pow(n).expect("bounded by cap");
            (n, oracle.is_bijective(&local, n, size))
        })
        .collect();
    let label = EmpiricalLabel::from_results(per_n.values());
    Ok(EmpiricalClass {
        n_min,
        n_max,
        per_n,
        label,
    })
}
