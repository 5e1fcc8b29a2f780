//! Global transition under null boundary and the functional transition graph.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rule::{Configuration, FdcaRule, State, StateCount};

/// Local rules with `d^3` at most this many entries are tabulated before a sweep.
const LOOKUP_TABLE_LIMIT: u64 = 1 << 21;

/// Configurations per parallel work unit when building a graph.
const GRAPH_CHUNK: usize = 1 << 16;

/// Applies the rule to every cell at once; neighbours beyond either end read 0.
pub fn global_step(rule: &FdcaRule, config: &Configuration) -> Result<Configuration> {
    if rule.d() != config.d() {
        return Err(Error::StateCountMismatch {
            rule: rule.d().get(),
            config: config.d().get(),
        });
    }
    let cells = config.cells();
    let n = cells.len();
    let next = (0..n)
        .map(|i| {
            let left = if i == 0 { 0 } else { cells[i - 1] };
            let right = if i + 1 < n { cells[i + 1] } else { 0 };
            rule.apply(left, cells[i], right)
        })
        .collect();
    Ok(Configuration::from_states(config.d(), next))
}

/// `[config, G(config), …, G^steps(config)]`.
pub fn trajectory(rule: &FdcaRule, config: &Configuration, steps: usize) -> Result<Vec<Configuration>> {
    let mut out = Vec::with_capacity(steps + 1);
    out.push(config.clone());
    for _ in 0..steps {
        let next = global_step(rule, out.last().unwrap())?;
        out.push(next);
    }
    Ok(out)
}

/// Base-`d` code of a configuration, cell 0 most significant.
pub fn encode(config: &Configuration) -> Result<u64> {
    let d = config.d();
    d.pow(config.len()).ok_or(Error::EncodingOverflow {
        d: d.get(),
        n: config.len(),
    })?;
    let m = d.get() as u64;
    Ok(config.cells().iter().fold(0, |acc, &c| acc * m + c as u64))
}

/// Inverse of [`encode`] for an `n`-cell lattice.
pub fn decode(d: StateCount, n: usize, code: u64) -> Result<Configuration> {
    if n == 0 {
        return Err(Error::EmptyConfiguration);
    }
    let size = d.pow(n).ok_or(Error::EncodingOverflow { d: d.get(), n })?;
    if code >= size {
        return Err(Error::CodeOutOfRange { code, d: d.get(), n });
    }
    Ok(Configuration::from_states(d, decode_digits(d, n, code)))
}

fn decode_digits(d: StateCount, n: usize, mut code: u64) -> Vec<State> {
    let m = d.get() as u64;
    let mut cells = vec![0; n];
    for c in cells.iter_mut().rev() {
        *c = (code % m) as State;
        code /= m;
    }
    cells
}

/// `d^n` if it fits within `cap`.
pub fn node_count(d: StateCount, n: usize, cap: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::EmptyConfiguration);
    }
    match d.pow(n) {
        Some(size) if size <= cap => Ok(size),
        _ => Err(Error::BudgetExceeded { d: d.get(), n, cap }),
    }
}

/// Largest `n` with `d^n <= cap`, if any.
pub fn max_feasible_n(d: StateCount, cap: u64) -> Option<usize> {
    let mut n = 0;
    while d.pow(n + 1).is_some_and(|s| s <= cap) {
        n += 1;
    }
    (n > 0).then_some(n)
}

/// The local rule, tabulated over all `d^3` neighbourhoods when that is small.
pub(crate) struct LocalMap<'a> {
    rule: &'a FdcaRule,
    table: Option<Vec<State>>,
}

impl<'a> LocalMap<'a> {
    /// `workload` is the number of configurations the caller expects to visit;
    /// tabulation is skipped when it would cost more than the sweep itself.
    pub(crate) fn new(rule: &'a FdcaRule, workload: u64) -> Self {
        let du = rule.d().get() as usize;
        let entries = (du as u64).pow(3);
        let table = (entries <= LOOKUP_TABLE_LIMIT && entries <= workload.max(512) * 8).then(|| {
            let mut table = vec![0 as State; du * du * du];
            for x in 0..du {
                for y in 0..du {
                    for z in 0..du {
                        table[(x * du + y) * du + z] = rule.apply(x as State, y as State, z as State);
                    }
                }
            }
            table
        });
        LocalMap { rule, table }
    }

    /// Visits `count` consecutive configurations starting at code `start`,
    /// calling `visit(code, successor_code)` for each; stops early when `visit`
    /// returns false. Returns whether the whole range was visited.
    ///
    /// Only outputs next to digits the odometer touched are recomputed, so the
    /// amortized cost per configuration is a few local evaluations regardless of `n`.
    pub(crate) fn sweep(&self, n: usize, start: u64, count: u64, visit: impl FnMut(u64, u64) -> bool) -> bool {
        let d = self.rule.d();
        match &self.table {
            Some(table) => {
                let du = d.get() as usize;
                sweep_with(
                    d,
                    n,
                    start,
                    count,
                    |x, y, z| table[(x as usize * du + y as usize) * du + z as usize],
                    visit,
                )
            }
            None => sweep_with(d, n, start, count, |x, y, z| self.rule.apply(x, y, z), visit),
        }
    }
}

fn sweep_with(
    d: StateCount,
    n: usize,
    start: u64,
    count: u64,
    local: impl Fn(State, State, State) -> State,
    mut visit: impl FnMut(u64, u64) -> bool,
) -> bool {
    let m = d.get();
    let mw = m as u64;
    let mut cells = decode_digits(d, n, start);
    // prefix[i] is the code of the first i output cells.
    let mut prefix = vec![0u64; n + 1];
    let mut dirty = 0;
    let mut code = start;
    for _ in 0..count {
        for i in dirty..n {
            let left = if i == 0 { 0 } else { cells[i - 1] };
            let right = if i + 1 < n { cells[i + 1] } else { 0 };
            prefix[i + 1] = prefix[i] * mw + local(left, cells[i], right) as u64;
        }
        if !visit(code, prefix[n]) {
            return false;
        }
        code += 1;
        let mut i = n;
        while i > 0 {
            i -= 1;
            cells[i] += 1;
            if cells[i] < m {
                break;
            }
            cells[i] = 0;
        }
        dirty = i.saturating_sub(1);
    }
    true
}

/// The global map `G_n` as an explicit successor table over all `d^n` codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionGraph {
    d: StateCount,
    n: usize,
    successor: Vec<u32>,
}

impl TransitionGraph {
    pub fn d(&self) -> StateCount {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn node_count(&self) -> usize {
        self.successor.len()
    }

    pub fn successor(&self, code: u64) -> u64 {
        self.successor[code as usize] as u64
    }

    pub fn successors(&self) -> &[u32] {
        &self.successor
    }

    /// Number of predecessors of every node.
    pub fn in_degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.successor.len()];
        for &s in &self.successor {
            deg[s as usize] += 1;
        }
        deg
    }

    /// True iff every node has exactly one predecessor.
    pub fn is_bijective(&self) -> bool {
        self.in_degrees().iter().all(|&k| k == 1)
    }

    /// Codes visited from `from` until the walk first repeats, `from` included.
    pub fn orbit(&self, from: u64) -> Vec<u64> {
        let mut seen = vec![false; self.successor.len()];
        let mut path = Vec::new();
        let mut cur = from as usize;
        while !seen[cur] {
            seen[cur] = true;
            path.push(cur as u64);
            cur = self.successor[cur] as usize;
        }
        path
    }

    /// Whether `to` is `G^k(from)` for some `k >= 0`.
    pub fn is_reachable(&self, from: u64, to: u64) -> bool {
        self.orbit(from).contains(&to)
    }
}

/// Materializes `G_n` for `rule`. Fails when `d^n` exceeds `cap` (or `2^32`).
pub fn build_transition_graph(rule: &FdcaRule, n: usize, cap: u64) -> Result<TransitionGraph> {
    let size = node_count(rule.d(), n, cap.min(1 << 32))? as usize;
    let local = LocalMap::new(rule, size as u64);
    let mut successor = vec![0u32; size];
    successor
        .par_chunks_mut(GRAPH_CHUNK)
        .enumerate()
        .for_each(|(chunk, out)| {
            let start = (chunk * GRAPH_CHUNK) as u64;
            local.sweep(n, start, out.len() as u64, |code, next| {
                out[(code - start) as usize] = next as u32;
                true
            });
        });
    Ok(TransitionGraph {
        d: rule.d(),
        n,
        successor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rule::parse_rule;
    use proptest::prelude::*;

    fn cfg(d: u64, cells: &[u64]) -> Configuration {
        Configuration::new(StateCount::new(d).unwrap(), cells.to_vec()).unwrap()
    }

    #[test]
    fn worked_transitions() {
        let r = parse_rule("6:0,0,0,0,0,3,0,1").unwrap();
        assert_eq!(global_step(&r, &cfg(6, &[0, 0, 2])).unwrap(), cfg(6, &[1, 1, 1]));
        assert_eq!(global_step(&r, &cfg(6, &[0, 0, 4])).unwrap(), cfg(6, &[1, 1, 1]));
        let r = parse_rule("8:0,1,0,0,5,1,2,0").unwrap();
        assert_eq!(global_step(&r, &cfg(8, &[7, 0])).unwrap(), cfg(8, &[7, 3]));
        assert_eq!(global_step(&r, &cfg(8, &[7, 4])).unwrap(), cfg(8, &[7, 3]));
        let r = parse_rule("12:0,0,0,0,5,1,1,0").unwrap();
        assert_eq!(global_step(&r, &cfg(12, &[6, 3])).unwrap(), cfg(12, &[9, 9]));
        assert_eq!(global_step(&r, &cfg(12, &[3, 6])).unwrap(), cfg(12, &[9, 9]));
    }

    #[test]
    fn step_rejects_mismatched_state_count() {
        let r = parse_rule("6:0,0,0,0,0,3,0,1").unwrap();
        assert!(matches!(
            global_step(&r, &cfg(5, &[0, 1])),
            Err(Error::StateCountMismatch { rule: 6, config: 5 })
        ));
    }

    #[test]
    fn trajectories() {
        let r = parse_rule("6:0,0,0,0,0,3,0,1").unwrap();
        let c = cfg(6, &[0, 0, 2]);
        assert_eq!(trajectory(&r, &c, 0).unwrap(), vec![c.clone()]);
        assert_eq!(trajectory(&r, &c, 1).unwrap(), vec![c.clone(), cfg(6, &[1, 1, 1])]);
        // R = x + y + 1 mod 2
        let r = parse_rule("2:0,0,0,0,1,1,0,1").unwrap();
        let t = trajectory(&r, &cfg(2, &[0, 0, 0, 0]), 1).unwrap();
        assert_eq!(t[1], cfg(2, &[1, 1, 1, 1]));
    }

    #[test]
    fn encoding_examples() {
        assert_eq!(encode(&cfg(2, &[1, 0, 1, 0])).unwrap(), 10);
        assert_eq!(encode(&cfg(2, &[0, 0, 0, 0])).unwrap(), 0);
        assert_eq!(encode(&cfg(5, &[4, 4, 4])).unwrap(), 124);
        let d5 = StateCount::new(5).unwrap();
        assert_eq!(decode(d5, 3, 124).unwrap(), cfg(5, &[4, 4, 4]));
        assert!(matches!(decode(d5, 3, 125), Err(Error::CodeOutOfRange { .. })));
        assert!(decode(d5, 0, 0).is_err());
        let huge = cfg(2, &[1; 64]);
        assert!(matches!(encode(&huge), Err(Error::EncodingOverflow { .. })));
    }

    #[test]
    fn single_cell_graph_is_affine_map_of_centre() {
        let d2 = StateCount::new(2).unwrap();
        for i in 0..256 {
            let r = FdcaRule::from_index(d2, i);
            let g = build_transition_graph(&r, 1, 1 << 24).unwrap();
            assert_eq!(g.node_count(), 2);
            for y in 0..2u64 {
                assert_eq!(g.successor(y), (r.coeff(5) as u64 * y + r.coeff(7) as u64) % 2);
            }
        }
    }

    #[test]
    fn four_cell_xor_graph_is_a_permutation_with_expected_reachability() {
        let r = parse_rule("2:0,0,0,0,1,1,0,1").unwrap();
        let g = build_transition_graph(&r, 4, 1 << 24).unwrap();
        assert_eq!(g.node_count(), 16);
        assert!(g.in_degrees().iter().all(|&k| k == 1));
        assert!(g.is_reachable(0, 10));
        assert!(!g.is_reachable(0, 8));
    }

    #[test]
    fn irreversible_graph_has_collision() {
        let r = parse_rule("5:2,0,0,0,2,3,0,4").unwrap();
        let g = build_transition_graph(&r, 3, 1 << 24).unwrap();
        assert!(g.in_degrees().iter().any(|&k| k >= 2));
        assert!(!g.is_bijective());
    }

    #[test]
    fn budget_is_enforced() {
        let r = parse_rule("10:0,0,0,0,0,1,0,0").unwrap();
        assert!(matches!(
            build_transition_graph(&r, 4, 9_999),
            Err(Error::BudgetExceeded { d: 10, n: 4, cap: 9_999 })
        ));
        assert!(build_transition_graph(&r, 4, 10_000).is_ok());
        assert_eq!(max_feasible_n(StateCount::new(12).unwrap(), 1 << 24), Some(6));
        assert_eq!(max_feasible_n(StateCount::new(8).unwrap(), 1 << 24), Some(8));
        assert_eq!(max_feasible_n(StateCount::new(8).unwrap(), 7), None);
    }

    #[test]
    fn chunked_build_matches_naive_step() {
        // 4^9 spans several parallel chunks.
        let r = parse_rule("4:2,1,3,0,1,3,2,1").unwrap();
        let n = 9;
        let g = build_transition_graph(&r, n, 1 << 24).unwrap();
        let d = r.d();
        for code in (0..g.node_count() as u64).step_by(97).chain([0, 65_535, 65_536, 262_143]) {
            let c = decode(d, n, code).unwrap();
            let next = encode(&global_step(&r, &c).unwrap()).unwrap();
            assert_eq!(g.successor(code), next, "code {code}");
        }
    }

    #[test]
    fn large_d_sweep_without_table() {
        let r = parse_rule("200:3,5,7,11,13,17,19,23").unwrap();
        let g = build_transition_graph(&r, 2, 1 << 24).unwrap();
        for code in (0..40_000u64).step_by(37) {
            let c = decode(r.d(), 2, code).unwrap();
            assert_eq!(g.successor(code), encode(&global_step(&r, &c).unwrap()).unwrap());
        }
    }

    fn rule_and_config() -> impl Strategy<Value = (FdcaRule, Configuration)> {
        (2u64..=12, prop::array::uniform8(0u64..12), prop::collection::vec(0u64..12, 1..8)).prop_map(
            |(d, c, cells)| {
                let sc = StateCount::new(d).unwrap();
                let cells = cells.into_iter().map(|v| v % d).collect();
                (FdcaRule::new(sc, c), Configuration::new(sc, cells).unwrap())
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn encode_decode_round_trip((_r, c) in rule_and_config()) {
            let code = encode(&c).unwrap();
            prop_assert_eq!(decode(c.d(), c.len(), code).unwrap(), c);
        }

        #[test]
        fn step_preserves_shape((r, c) in rule_and_config()) {
            let next = global_step(&r, &c).unwrap();
            prop_assert_eq!(next.len(), c.len());
            prop_assert!(next.cells().iter().all(|&v| v < r.d().get()));
        }

        #[test]
        fn linear_rules_fix_zero((r, c) in rule_and_config()) {
            let c4 = r.coeff(4) as u64;
            let c5 = r.coeff(5) as u64;
            let c6 = r.coeff(6) as u64;
            let lin = FdcaRule::new(r.d(), [0, 0, 0, 0, c4, c5, c6, 0]);
            let zero = Configuration::new(c.d(), vec![0; c.len()]).unwrap();
            prop_assert_eq!(global_step(&lin, &zero).unwrap(), zero);
        }
    }
}
