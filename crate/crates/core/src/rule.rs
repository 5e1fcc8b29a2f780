//! Rules, configurations and the first-degree local map.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A cell state, a residue in `[0, d)`.
pub type State = u32;

/// Largest `d` accepted by [`StateCount::new`]. Factorizing `d` is trial
/// division, so this keeps the reversibility check effectively constant cost.
pub const DEFAULT_MAX_STATES: u64 = 1_000_000;

/// Number of cell states `d`, always at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct StateCount(u32);

impl StateCount {
    pub fn new(d: u64) -> Result<Self> {
        Self::with_cap(d, DEFAULT_MAX_STATES)
    }

    /// Like [`StateCount::new`] with a caller-chosen upper bound. The bound is
    /// clamped to `u32::MAX`.
    pub fn with_cap(d: u64, cap: u64) -> Result<Self> {
        let cap = cap.min(u32::MAX as u64);
        if d < 2 || d > cap {
            return Err(Error::InvalidStateCount { d, cap });
        }
        Ok(StateCount(d as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// `d^n`, or `None` on `u64` overflow.
    pub fn pow(self, n: usize) -> Option<u64> {
        let n = u32::try_from(n).ok()?;
        (self.0 as u64).checked_pow(n)
    }

    fn check_state(self, value: u64) -> Result<State> {
        if value < self.0 as u64 {
            Ok(value as State)
        } else {
            Err(Error::StateOutOfRange { value, d: self.0 })
        }
    }
}

impl TryFrom<u64> for StateCount {
    type Error = Error;

    fn try_from(d: u64) -> Result<Self> {
        StateCount::new(d)
    }
}

impl From<StateCount> for u64 {
    fn from(d: StateCount) -> u64 {
        d.0 as u64
    }
}

impl fmt::Display for StateCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A first-degree rule: `d` and the coefficients `⟨c0, …, c7⟩`, stored
/// reduced mod `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct FdcaRule {
    d: StateCount,
    coeffs: [State; 8],
}

impl FdcaRule {
    /// Builds a rule, reducing every coefficient mod `d`.
    pub fn new(d: StateCount, coeffs: [u64; 8]) -> Self {
        let m = d.get() as u64;
        FdcaRule {
            d,
            coeffs: coeffs.map(|c| (c % m) as State),
        }
    }

    /// The rule whose coefficient tuple has base-`d` rank `index`, with `c0` as
    /// the most significant digit. Ascending index is lexicographic order.
    pub fn from_index(d: StateCount, mut index: u64) -> Self {
        let m = d.get() as u64;
        let mut coeffs = [0u64; 8];
        for c in coeffs.iter_mut().rev() {
            *c = index % m;
            index /= m;
        }
        FdcaRule::new(d, coeffs)
    }

    /// Inverse of [`FdcaRule::from_index`].
    pub fn index(&self) -> u64 {
        let m = self.d.get() as u64;
        self.coeffs.iter().fold(0, |acc, &c| acc * m + c as u64)
    }

    #[inline]
    pub fn d(&self) -> StateCount {
        self.d
    }

    #[inline]
    pub fn coeffs(&self) -> &[State; 8] {
        &self.coeffs
    }

    #[inline]
    pub fn coeff(&self, i: usize) -> State {
        self.coeffs[i]
    }

    /// True when every product term and `c7` vanish.
    pub fn is_linear(&self) -> bool {
        self.coeffs[..4].iter().all(|&c| c == 0) && self.coeffs[7] == 0
    }

    /// The rule acting on the mirrored lattice: `R'(x, y, z) = R(z, y, x)`.
    pub fn mirror(&self) -> Self {
        let [c0, c1, c2, c3, c4, c5, c6, c7] = self.coeffs;
        FdcaRule {
            d: self.d,
            coeffs: [c0, c3, c2, c1, c6, c5, c4, c7],
        }
    }

    /// Local map on states already known to be in range.
    #[inline]
    pub(crate) fn apply(&self, x: State, y: State, z: State) -> State {
        let m = self.d.get() as u64;
        let (x, y, z) = (x as u64, y as u64, z as u64);
        let c = self.coeffs.map(|c| c as u64);
        let xy = x * y % m;
        let xz = x * z % m;
        let yz = y * z % m;
        let xyz = xy * z % m;
        let sum = c[0] * xyz % m
            + c[1] * xy % m
            + c[2] * xz % m
            + c[3] * yz % m
            + c[4] * x % m
            + c[5] * y % m
            + c[6] * z % m
            + c[7];
        (sum % m) as State
    }
}

impl fmt::Display for FdcaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.d)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl From<FdcaRule> for String {
    fn from(rule: FdcaRule) -> String {
        rule.to_string()
    }
}

impl TryFrom<String> for FdcaRule {
    type Error = Error;

    fn try_from(text: String) -> Result<Self> {
        parse_rule(&text)
    }
}

impl FromStr for FdcaRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_rule(s)
    }
}

/// Evaluates `R(x, y, z)`, rejecting states outside `[0, d)`.
pub fn evaluate_local(rule: &FdcaRule, x: u64, y: u64, z: u64) -> Result<State> {
    let d = rule.d();
    let (x, y, z) = (d.check_state(x)?, d.check_state(y)?, d.check_state(z)?);
    Ok(rule.apply(x, y, z))
}

/// Parses `"d:c0,c1,c2,c3,c4,c5,c6,c7"`. Whitespace is ignored and
/// coefficients (negative ones included) are reduced mod `d`.
pub fn parse_rule(text: &str) -> Result<FdcaRule> {
    let err = |reason: &str| Error::ParseRule {
        text: text.to_owned(),
        reason: reason.to_owned(),
    };
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let (d_text, coeff_text) = compact
        .split_once(':')
        .ok_or_else(|| err("expected \"d:c0,c1,c2,c3,c4,c5,c6,c7\""))?;
    let d: u64 = d_text.parse().map_err(|_| err("d is not a decimal integer"))?;
    let d = StateCount::new(d)?;

    let tokens: Vec<&str> = coeff_text.split(',').collect();
    if tokens.len() != 8 {
        return Err(err(&format!("expected 8 coefficients, found {}", tokens.len())));
    }
    let m = d.get() as i128;
    let mut coeffs = [0u64; 8];
    for (slot, token) in coeffs.iter_mut().zip(&tokens) {
        let value: i128 = token
            .parse()
            .map_err(|_| err(&format!("coefficient {token:?} is not a decimal integer")))?;
        *slot = value.rem_euclid(m) as u64;
    }
    Ok(FdcaRule::new(d, coeffs))
}

/// Canonical text form, the inverse of [`parse_rule`].
pub fn format_rule(rule: &FdcaRule) -> String {
    rule.to_string()
}

/// A configuration of `n >= 1` cells, cell 0 leftmost.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    d: StateCount,
    cells: Vec<State>,
}

impl Configuration {
    pub fn new(d: StateCount, cells: Vec<u64>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::EmptyConfiguration);
        }
        let cells = cells
            .into_iter()
            .map(|v| d.check_state(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Configuration { d, cells })
    }

    pub(crate) fn from_states(d: StateCount, cells: Vec<State>) -> Self {
        debug_assert!(!cells.is_empty() && cells.iter().all(|&c| c < d.get()));
        Configuration { d, cells }
    }

    /// Parses comma-separated states, e.g. `"0,0,2"`.
    pub fn parse(d: StateCount, text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::EmptyConfiguration);
        }
        let cells = compact
            .split(',')
            .map(|t| {
                t.parse::<u64>().map_err(|_| Error::ParseConfiguration {
                    text: text.to_owned(),
                    reason: format!("{t:?} is not a non-negative integer"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Configuration::new(d, cells)
    }

    #[inline]
    pub fn d(&self) -> StateCount {
        self.d
    }

    #[inline]
    pub fn cells(&self) -> &[State] {
        &self.cells
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.cells.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
