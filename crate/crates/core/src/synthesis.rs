//! Synthesis of every rule that is reversible for all lattice sizes.
//!
//! The three coefficient conditions are independent across coefficient groups,
//! so the reversible set is a product of per-coefficient domains: `c0..c3` range
//! over multiples of `rad(d)`, `c5` over the units of `Z_d`, `c7` over all of
//! `Z_d`, and `c6` over the multiples of `rad(d) / gcd(c4, rad(d))` for each `c4`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::number::{factorize, gcd, radical, totient};
use crate::rule::{FdcaRule, State, StateCount};

/// `Z(d)` is counted by a direct double loop up to this `d`, by the per-prime
/// product formula above it.
pub const DIRECT_PAIR_COUNT_LIMIT: u32 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientDomains {
    d: StateCount,
    rad: u32,
    degree_coeff_values: Vec<State>,
    c5_values: Vec<State>,
}

impl CoefficientDomains {
    pub fn d(&self) -> StateCount {
        self.d
    }

    pub fn radical(&self) -> u32 {
        self.rad
    }

    /// Allowed values of each of `c0..c3`, ascending.
    pub fn degree_coeff_values(&self) -> &[State] {
        &self.degree_coeff_values
    }

    /// Units of `Z_d`, ascending.
    pub fn c5_values(&self) -> &[State] {
        &self.c5_values
    }

    pub fn c7_values(&self) -> std::ops::Range<State> {
        0..self.d.get()
    }

    /// `c6` is allowed with this `c4` iff it is a multiple of the returned step.
    pub fn c6_step(&self, c4: State) -> State {
        let rad = self.rad as u64;
        (rad / gcd(c4 as u64 % rad, rad)) as State
    }

    /// Allowed `c6` for the given `c4`, ascending.
    pub fn c6_values(&self, c4: State) -> Vec<State> {
        (0..self.d.get()).step_by(self.c6_step(c4) as usize).collect()
    }

    /// Every allowed `(c4, c6)` pair in lexicographic order.
    pub fn c4c6_pairs(&self) -> impl Iterator<Item = (State, State)> + '_ {
        (0..self.d.get()).flat_map(move |c4| self.c6_values(c4).into_iter().map(move |c6| (c4, c6)))
    }
}

pub fn coefficient_domains(d: StateCount) -> CoefficientDomains {
    let m = d.get();
    let rad = radical(m as u64).expect("StateCount guarantees d >= 2") as u32;
    CoefficientDomains {
        d,
        rad,
        degree_coeff_values: (0..m).step_by(rad as usize).collect(),
        c5_values: (1..m).filter(|&c| gcd(c as u64, m as u64) == 1).collect(),
    }
}

/// Lazy lexicographic stream of all reversible rules for one `d`.
#[derive(Debug, Clone)]
pub struct ReversibleRules {
    domains: CoefficientDomains,
    // Per position: index into the degree values for c0..c3, the value itself
    // for c4, c6 and c7, an index into the units for c5.
    cursor: [u32; 8],
    done: bool,
}

impl ReversibleRules {
    fn new(domains: CoefficientDomains) -> Self {
        ReversibleRules {
            domains,
            cursor: [0; 8],
            done: false,
        }
    }

    fn current(&self) -> FdcaRule {
        let dom = &self.domains;
        let k = &self.cursor;
        let deg = |i: usize| dom.degree_coeff_values[k[i] as usize] as u64;
        FdcaRule::new(
            dom.d,
            [
                deg(0),
                deg(1),
                deg(2),
                deg(3),
                k[4] as u64,
                dom.c5_values[k[5] as usize] as u64,
                k[6] as u64,
                k[7] as u64,
            ],
        )
    }

    fn advance(&mut self) {
        let dom = &self.domains;
        let d = dom.d.get();
        let k = &mut self.cursor;
        k[7] += 1;
        if k[7] < d {
            return;
        }
        k[7] = 0;
        k[6] += dom.c6_step(k[4]);
        if k[6] < d {
            return;
        }
        k[6] = 0;
        k[5] += 1;
        if (k[5] as usize) < dom.c5_values.len() {
            return;
        }
        k[5] = 0;
        k[4] += 1;
        if k[4] < d {
            return;
        }
        k[4] = 0;
        for i in (0..4).rev() {
            k[i] += 1;
            if (k[i] as usize) < dom.degree_coeff_values.len() {
                return;
            }
            k[i] = 0;
        }
        self.done = true;
    }
}

impl Iterator for ReversibleRules {
    type Item = FdcaRule;

    fn next(&mut self) -> Option<FdcaRule> {
        if self.done {
            return None;
        }
        let rule = self.current();
        self.advance();
        Some(rule)
    }
}

/// Every rule satisfying the three coefficient conditions, once each, in
/// lexicographic coefficient order.
pub fn enumerate_reversible(d: StateCount) -> ReversibleRules {
    ReversibleRules::new(coefficient_domains(d))
}

/// `Z(d) = #{(a, b) in Z_d^2 : a·b ≡ 0 (mod rad(d))}` by direct enumeration.
pub fn zero_product_pairs_direct(d: StateCount) -> u128 {
    let m = d.get() as u64;
    let rad = radical(m).expect("d >= 2");
    let mut count = 0u128;
    for a in 0..m {
        let ar = a % rad;
        for b in 0..m {
            if ar * (b % rad) % rad == 0 {
                count += 1;
            }
        }
    }
    count
}

/// `Z(d)` from the factorization: `∏ p^(2e-2)·(2p-1)` over `p^e || d`.
pub fn zero_product_pairs_by_prime(d: StateCount) -> u128 {
    factorize(d.get() as u64)
        .iter()
        .map(|&(p, e)| {
            let p = p as u128;
            p.pow(2 * e - 2) * (2 * p - 1)
        })
        .product()
}

fn zero_product_pairs(d: StateCount) -> u128 {
    if d.get() <= DIRECT_PAIR_COUNT_LIMIT {
        zero_product_pairs_direct(d)
    } else {
        zero_product_pairs_by_prime(d)
    }
}

/// Number of reversible rules: `(d/rad(d))^4 · φ(d) · d · Z(d)`.
pub fn count_reversible(d: StateCount) -> Result<u128> {
    let m = d.get() as u128;
    let rad = radical(m as u64)? as u128;
    let overflow = || Error::CountOverflow { d: d.get() };
    (m / rad)
        .checked_pow(4)
        .and_then(|x| x.checked_mul(totient(m as u64) as u128))
        .and_then(|x| x.checked_mul(m))
        .and_then(|x| x.checked_mul(zero_product_pairs(d)))
        .ok_or_else(overflow)
}

/// One `c4` line of the coefficient table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct C4Row {
    pub c4: State,
    pub c5: Vec<State>,
    pub c6: Vec<State>,
    pub c7: Vec<State>,
}

/// The coefficient table for one `d`: the shared `c0..c3` set, then one row per `c4`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoefficientTable {
    pub d: StateCount,
    pub prime: bool,
    pub radical: u32,
    pub degree_coeffs: Vec<State>,
    pub rows: Vec<C4Row>,
}

pub fn table_row(d: StateCount) -> CoefficientTable {
    let dom = coefficient_domains(d);
    let rows = (0..d.get())
        .map(|c4| C4Row {
            c4,
            c5: dom.c5_values.clone(),
            c6: dom.c6_values(c4),
            c7: dom.c7_values().collect(),
        })
        .collect();
    CoefficientTable {
        d,
        prime: dom.rad == d.get() && factorize(d.get() as u64).len() == 1,
        radical: dom.rad,
        degree_coeffs: dom.degree_coeff_values.clone(),
        rows,
    }
}

/// Compact set notation: runs of three or more consecutive values become `a-b`.
pub fn format_value_set(values: &[State]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < values.len() {
        let mut j = i;
        while j + 1 < values.len() && values[j + 1] == values[j] + 1 {
            j += 1;
        }
        if j - i >= 2 {
            parts.push(format!("{}-{}", values[i], values[j]));
        } else {
            parts.extend(values[i..=j].iter().map(|v| v.to_string()));
        }
        i = j + 1;
    }
    parts.join(",")
}

impl fmt::Display for CoefficientTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.prime { "prime" } else { "composite" };
        writeln!(f, "d = {} ({kind}, rad(d) = {})", self.d, self.radical)?;
        writeln!(f, "c0,c1,c2,c3: {}", format_value_set(&self.degree_coeffs))?;
        writeln!(f, "c4 | c5 | c6 | c7")?;
        for row in &self.rows {
            writeln!(
                f,
                "{} | {} | {} | {}",
                row.c4,
                format_value_set(&row.c5),
                format_value_set(&row.c6),
                format_value_set(&row.c7)
            )?;
        }
        Ok(())
    }
}
