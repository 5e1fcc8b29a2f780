//! Cross-validation of the coefficient test against the brute-force oracle over
//! the whole coefficient space of one `d`, or a seeded sample of it.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::algebraic::check_algebraic;
use super::oracle::Oracle;
use crate::dynamics::{max_feasible_n, node_count, LocalMap};
use crate::error::{Error, Result};
use crate::rule::{FdcaRule, StateCount};

pub const DEFAULT_SEED: u64 = 0x00fd_ca5e_ed00;
pub const DEFAULT_SAMPLE_SIZE: usize = 10_000;

/// Tuples handed to the worker pool at once; bounds memory for large runs.
const BLOCK: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationOptions {
    pub n_max: usize,
    /// `None` tests all `d^8` tuples.
    pub sample: Option<usize>,
    pub seed: u64,
    pub cap: u64,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

/// Bounds used when the caller gives none: exhaustive for `d <= 4` with
/// `n_max` of 10, 7 and 6; otherwise a 10,000-tuple sample up to the largest
/// `n` the cap allows.
pub fn default_options(d: StateCount, cap: u64) -> ValidationOptions {
    let feasible = max_feasible_n(d, cap).unwrap_or(0);
    let (n_max, sample) = match d.get() {
        2 => (10, None),
        3 => (7, None),
        4 => (6, None),
        _ => (feasible, Some(DEFAULT_SAMPLE_SIZE)),
    };
    ValidationOptions {
        n_max: n_max.min(feasible),
        sample,
        seed: DEFAULT_SEED,
        cap,
        jobs: None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ValidationMode {
    Exhaustive,
    Sample { size: usize, seed: u64 },
}

/// A rule that passes the coefficient test but is not bijective at some tested size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: FdcaRule,
    pub non_bijective_at: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub d: StateCount,
    pub n_min: usize,
    pub n_max: usize,
    pub tuples_tested: u64,
    pub mode: ValidationMode,
    /// Ascending tuple order; expected empty.
    pub violations: Vec<Violation>,
    /// Among rules failing the coefficient test, the share the oracle saw
    /// non-bijective at some tested size. `None` when there were no such rules.
    pub witnessed_irreversible_fraction: Option<f64>,
    pub algebraically_reversible: u64,
    pub algebraically_irreversible: u64,
    pub witnessed_irreversible: u64,
    pub elapsed_ms: u64,
}

enum Outcome {
    Reversible { failures: Vec<usize> },
    Irreversible { witnessed: bool },
}

fn examine(rule: &FdcaRule, n_max: usize, oracle: &mut Oracle) -> Outcome {
    let d = rule.d();
    let local = LocalMap::new(rule, d.pow(n_max).unwrap_or(u64::MAX));
    let mut bijective_at = (1..=n_max).map(|n| (n, oracle.is_bijective(&local, n, d.pow(n).unwrap())));
    if check_algebraic(rule).is_reversible() {
        Outcome::Reversible {
            failures: bijective_at.filter(|&(_, ok)| !ok).map(|(n, _)| n).collect(),
        }
    } else {
        Outcome::Irreversible {
            witnessed: bijective_at.any(|(_, ok)| !ok),
        }
    }
}

fn sample_rules(d: StateCount, size: usize, seed: u64) -> Vec<FdcaRule> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match d.pow(8).and_then(|t| usize::try_from(t).ok()) {
        Some(total) => {
            let mut picks = index::sample(&mut rng, total, size.min(total)).into_vec();
            picks.sort_unstable();
            picks.into_iter().map(|i| FdcaRule::from_index(d, i as u64)).collect()
        }
        None => {
            let m = d.get() as u64;
            let mut picks = BTreeSet::new();
            while picks.len() < size {
                let coeffs: [u64; 8] = std::array::from_fn(|_| rng.gen_range(0..m));
                picks.insert(FdcaRule::new(d, coeffs));
            }
            picks.into_iter().collect()
        }
    }
}

/// Compares [`check_algebraic`] with the oracle for `n = 1..=n_max` on every
/// tuple (or a seeded sample). Rules that pass the coefficient test are swept at
/// every size; the others stop at their first non-bijective size.
pub fn cross_validate(d: StateCount, options: &ValidationOptions) -> Result<ValidationReport> {
    let started = Instant::now();
    let n_max = options.n_max;
    if n_max == 0 {
        return Err(Error::EmptyRange { n_min: 1, n_max: 0 });
    }
    if node_count(d, n_max, options.cap).is_err() {
        return Err(Error::RangeBudgetExceeded {
            d: d.get(),
            n_max,
            cap: options.cap,
            largest_feasible: max_feasible_n(d, options.cap),
        });
    }

    let (rules, mode): (Box<dyn Iterator<Item = FdcaRule> + Send>, _) = match options.sample {
        None => {
            let total = d.pow(8).ok_or(Error::EncodingOverflow { d: d.get(), n: 8 })?;
            (Box::new((0..total).map(move |i| FdcaRule::from_index(d, i))), ValidationMode::Exhaustive)
        }
        Some(size) => (
            Box::new(sample_rules(d, size, options.seed).into_iter()),
            ValidationMode::Sample {
                size,
                seed: options.seed,
            },
        ),
    };

    let run = || {
        let mut report = ValidationReport {
            d,
            n_min: 1,
            n_max,
            tuples_tested: 0,
            mode,
            violations: Vec::new(),
            witnessed_irreversible_fraction: None,
            algebraically_reversible: 0,
            algebraically_irreversible: 0,
            witnessed_irreversible: 0,
            elapsed_ms: 0,
        };
        let mut rules = rules;
        loop {
            let block: Vec<FdcaRule> = rules.by_ref().take(BLOCK).collect();
            if block.is_empty() {
                break;
            }
            let outcomes: Vec<Outcome> = block
                .par_iter()
                .map_init(Oracle::default, |oracle, rule| examine(rule, n_max, oracle))
                .collect();
            for (rule, outcome) in block.into_iter().zip(outcomes) {
                report.tuples_tested += 1;
                match outcome {
                    Outcome::Reversible { failures } => {
                        report.algebraically_reversible += 1;
                        if !failures.is_empty() {
                            report.violations.push(Violation {
                                rule,
                                non_bijective_at: failures,
                            });
                        }
                    }
                    Outcome::Irreversible { witnessed } => {
                        report.algebraically_irreversible += 1;
                        report.witnessed_irreversible += witnessed as u64;
                    }
                }
            }
        }
        report
    };

    let mut report = match options.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Io(std::io::Error::other(e)))?
            .install(run),
        None => run(),
    };
    if report.algebraically_irreversible > 0 {
        report.witnessed_irreversible_fraction =
            Some(report.witnessed_irreversible as f64 / report.algebraically_irreversible as f64);
    }
    report.elapsed_ms = started.elapsed().as_millis() as u64;
    Ok(report)
}
