//! The recursive (McNaughton-Zielonka) solver and its optional layers:
//! memoization of solved subgames, SCC decomposition and brute-force
//! dominion preprocessing.

mod dominion;
mod scc;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;

pub use dominion::{find_dominion, Dominion, DominionSearch};
pub use scc::{scc_split, terminal_scc};

use crate::error::{Error, Result};
use crate::game::{Player, PositionSet, Regions, Subgame};

/// `⌈√n⌉`, the default dominion size bound.
pub fn ceil_sqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r.max(1)
}

#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub memoization: bool,
    pub scc_decomposition: bool,
    pub dominion_decomposition: bool,
    /// Largest dominion searched for in a subgame of the given size.
    pub dominion_bound: fn(usize) -> usize,
    pub call_limit: Option<u64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            memoization: false,
            scc_decomposition: false,
            dominion_decomposition: false,
            dominion_bound: ceil_sqrt,
            call_limit: None,
        }
    }
}

impl SolverConfig {
    pub fn plain() -> Self {
        Self::default()
    }

    pub fn with_memoization(mut self, on: bool) -> Self {
        self.memoization = on;
        self
    }

    pub fn with_scc(mut self, on: bool) -> Self {
        self.scc_decomposition = on;
        self
    }

    pub fn with_dominions(mut self, on: bool) -> Self {
        self.dominion_decomposition = on;
        self
    }

    pub fn with_call_limit(mut self, limit: u64) -> Self {
        self.call_limit = Some(limit);
        self
    }

    /// All eight on/off combinations of the three layers.
    pub fn combinations() -> Vec<SolverConfig> {
        (0..8)
            .map(|bits| {
                SolverConfig::plain()
                    .with_memoization(bits & 1 != 0)
                    .with_scc(bits & 2 != 0)
                    .with_dominions(bits & 4 != 0)
            })
            .collect()
    }
}

/// The named configurations reported by the benchmark driver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Plain,
    Memo,
    Scc,
    MemoScc,
    MemoSccDom,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::Plain,
        Variant::Memo,
        Variant::Scc,
        Variant::MemoScc,
        Variant::MemoSccDom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Plain => "plain",
            Variant::Memo => "memo",
            Variant::Scc => "scc",
            Variant::MemoScc => "memo+scc",
            Variant::MemoSccDom => "memo+scc+dom",
        }
    }

    pub fn config(self) -> SolverConfig {
        let (memo, scc, dom) = match self {
            Variant::Plain => (false, false, false),
            Variant::Memo => (true, false, false),
            Variant::Scc => (false, true, false),
            Variant::MemoScc => (true, true, false),
            Variant::MemoSccDom => (true, true, true),
        };
        SolverConfig::plain()
            .with_memoization(memo)
            .with_scc(scc)
            .with_dominions(dom)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| format!("unknown variant {s:?}"))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    /// Every entry into the recursive procedure, memo hits included.
    pub total_calls: u64,
    /// Distinct alive-sets the procedure was entered with.
    pub distinct_subgames: u64,
    pub memo_hits: u64,
    pub max_depth: u64,
    pub dominion_probes: u64,
    #[serde(skip)]
    pub wall_time: Duration,
}

/// Regions, counters and the alive-sets of every call.
#[derive(Debug, Clone)]
pub struct Solution {
    pub regions: Regions,
    pub stats: SolveStats,
    pub visited: HashSet<PositionSet>,
}

/// Solved subgames keyed by their alive-set, scoped to one solve.
#[derive(Debug, Default)]
pub struct MemoTable {
    entries: HashMap<PositionSet, Regions>,
}

impl MemoTable {
    pub fn get(&self, alive: &PositionSet) -> Option<&Regions> {
        self.entries.get(alive)
    }

    pub fn insert(&mut self, alive: PositionSet, regions: Regions) {
        debug_assert!(regions.partitions(&alive));
        self.entries.insert(alive, regions);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Removes the attractor to the top priority: returns the remaining
/// subgame, the player favoured by that priority, and the removed set.
pub fn left_step<'g>(g: &Subgame<'g>) -> Result<(Subgame<'g>, Player, PositionSet)> {
    let (top, holders) = g.max_priority()?;
    let player = Player::from_priority(top);
    let removed = g.attractor(&holders, player)?;
    Ok((g.remove(&removed)?, player, removed))
}

/// Removes the `opponent` attractor to `won_by_opponent`.
pub fn right_step<'g>(
    g: &Subgame<'g>,
    won_by_opponent: &PositionSet,
    opponent: Player,
) -> Result<Subgame<'g>> {
    let removed = g.attractor(won_by_opponent, opponent)?;
    g.remove(&removed)
}

pub fn solve(g: &Subgame<'_>, cfg: &SolverConfig) -> Result<(Regions, SolveStats)> {
    let s = solve_full(g, cfg)?;
    Ok((s.regions, s.stats))
}

/// Same as [`solve`] with SCC decomposition switched on.
pub fn solve_scc_wise(g: &Subgame<'_>, cfg: &SolverConfig) -> Result<(Regions, SolveStats)> {
    solve(g, &cfg.with_scc(true))
}

/// Winning regions with every enhancement off.
pub fn solve_plain(g: &Subgame<'_>) -> Result<Regions> {
    Ok(solve_full(g, &SolverConfig::plain())?.regions)
}

pub fn solve_full(g: &Subgame<'_>, cfg: &SolverConfig) -> Result<Solution> {
    let started = Instant::now();
    let mut rec = Recursion {
        cfg: *cfg,
        stats: SolveStats::default(),
        visited: HashSet::new(),
        memo: MemoTable::default(),
    };
    let outcome = rec.call(g, 1);
    rec.stats.wall_time = started.elapsed();
    match outcome {
        Ok(regions) => Ok(Solution {
            regions,
            stats: rec.stats,
            visited: rec.visited,
        }),
        Err(Error::CallLimitExceeded { limit, .. }) => Err(Error::CallLimitExceeded {
            limit,
            stats: Box::new(rec.stats),
        }),
        Err(e) => Err(e),
    }
}

struct Recursion {
    cfg: SolverConfig,
    stats: SolveStats,
    visited: HashSet<PositionSet>,
    memo: MemoTable,
}

impl Recursion {
    fn call(&mut self, g: &Subgame<'_>, depth: u64) -> Result<Regions> {
        self.stats.total_calls += 1;
        if let Some(limit) = self.cfg.call_limit {
            if self.stats.total_calls > limit {
                return Err(Error::CallLimitExceeded {
                    limit,
                    stats: Box::default(),
                });
            }
        }
        self.stats.max_depth = self.stats.max_depth.max(depth);
        if self.cfg.memoization {
            if let Some(hit) = self.memo.get(g.alive()) {
                self.stats.memo_hits += 1;
                return Ok(hit.clone());
            }
        }
        if self.visited.insert(g.alive().clone()) {
            self.stats.distinct_subgames += 1;
        }
        let regions = self.body(g, depth)?;
        if self.cfg.memoization {
            self.memo.insert(g.alive().clone(), regions.clone());
        }
        Ok(regions)
    }

    fn body(&mut self, g: &Subgame<'_>, depth: u64) -> Result<Regions> {
        let n = g.master().len();
        if g.is_empty() {
            return Ok(Regions::empty(n));
        }
        if self.cfg.dominion_decomposition {
            let bound = (self.cfg.dominion_bound)(g.len());
            let (found, probes) = find_dominion(g, bound)?;
            self.stats.dominion_probes += probes;
            if let Some((dominion, player)) = found {
                let won = g.attractor(&dominion, player)?;
                let rest = g.remove(&won)?;
                let mut regions = self.call(&rest, depth + 1)?;
                regions.won_by_mut(player).union_with(&won);
                return Ok(regions);
            }
        }
        if self.cfg.scc_decomposition {
            let terminal = terminal_scc(g).expect("non-empty subgame has a component");
            if terminal.len() < g.len() {
                return self.by_components(g, terminal, depth);
            }
        }
        self.split(g, depth)
    }

    /// One left call, the termination test, and possibly one right call.
    fn split(&mut self, g: &Subgame<'_>, depth: u64) -> Result<Regions> {
        let (left, player, _) = left_step(g)?;
        let opponent = player.dual();
        let left_regions = self.call(&left, depth + 1)?;
        let lost = left_regions.won_by(opponent);
        let escapes = g.predecessor(lost, opponent)?;
        if escapes.is_subset(lost) {
            let won = g.alive().difference(lost);
            return Ok(Regions::assign(player, won, lost.clone()));
        }
        let right = right_step(g, lost, opponent)?;
        let right_regions = self.call(&right, depth + 1)?;
        let won = right_regions.won_by(player).clone();
        let rest = g.alive().difference(&won);
        Ok(Regions::assign(player, won, rest))
    }

    /// Solves a terminal component, attracts its regions in the remaining
    /// game, removes them, and repeats until nothing is left.
    fn by_components(
        &mut self,
        g: &Subgame<'_>,
        first: PositionSet,
        depth: u64,
    ) -> Result<Regions> {
        let mut regions = Regions::empty(g.master().len());
        let mut remaining = g.clone();
        let mut next = Some(first);
        while let Some(terminal) = next {
            let component = remaining.restrict(&terminal)?;
            let solved = self.call(&component, depth + 1)?;
            for player in Player::BOTH {
                let won = remaining.attractor(solved.won_by(player), player)?;
                remaining = remaining.remove(&won)?;
                regions.won_by_mut(player).union_with(&won);
            }
            next = terminal_scc(&remaining);
        }
        Ok(regions)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{gen_core, gen_scc, random_game, FamilyLabel::*};
    use crate::game::ParityGame;

    fn labels(g: &ParityGame, set: &PositionSet) -> Vec<String> {
        set.iter()
            .map(|v| g.label(v).unwrap().to_string())
            .collect()
    }

    #[test]
    fn ceil_sqrt_values() {
        let got: Vec<usize> = [0, 1, 2, 4, 5, 9, 10, 14, 31, 383].map(ceil_sqrt).to_vec();
        assert_eq!(got, vec![1, 1, 2, 2, 3, 3, 4, 4, 6, 20]);
    }

    #[test]
    fn variant_names_round_trip() {
        for v in Variant::ALL {
            assert_eq!(v.name().parse::<Variant>(), Ok(v));
        }
        assert!("dom".parse::<Variant>().is_err());
    }

    #[test]
    fn left_step_on_core_one_root() {
        let g = gen_core(1).unwrap();
        let (sub, p, removed) = left_step(&g.full()).unwrap();
        assert_eq!(p, Player::Odd);
        assert_eq!(labels(&g, &removed), vec!["alpha_2"]);
        assert_eq!(sub.len(), 8);
    }

    #[test]
    fn left_step_on_even_self_loop_takes_everything() {
        let g = ParityGame::new(vec![Player::Odd], vec![2], vec![vec![0]]).unwrap();
        let (sub, p, removed) = left_step(&g.full()).unwrap();
        assert!(sub.is_empty());
        assert_eq!(p, Player::Even);
        assert_eq!(removed, g.positions());
        assert!(matches!(left_step(&sub), Err(Error::EmptyGame)));
    }

    #[test]
    fn left_step_on_hat_left_of_core_two() {
        // Removing alpha_4 from the root, then the top of the hat node
        // (alpha_3, even) drags beta_4 along: beta_4 only escapes to alpha_3
        // or gamma_4, and player 0 owns it.
        let g = gen_core(2).unwrap();
        let (hat_l, _, _) = left_step(&g.full()).unwrap();
        let (_, p, removed) = left_step(&hat_l).unwrap();
        assert_eq!(p, Player::Even);
        assert_eq!(labels(&g, &removed), vec!["alpha_3", "beta_4"]);
    }

    #[test]
    fn right_step_on_core_one_root() {
        let g = gen_core(1).unwrap();
        let won = PositionSet::from_positions(
            g.len(),
            [Beta(2), Gamma(2)].map(|l| g.position_of(l).unwrap()),
        );
        let sub = right_step(&g.full(), &won, Player::Even).unwrap();
        let gone = g.positions().difference(sub.alive());
        assert_eq!(
            labels(&g, &gone),
            vec!["gamma_1", "alpha_2", "beta_2", "gamma_2"]
        );
        let same = right_step(&g.full(), &PositionSet::empty(g.len()), Player::Odd).unwrap();
        assert_eq!(same, g.full());
    }

    #[test]
    fn empty_subgame_is_one_call() {
        let g = gen_core(1).unwrap();
        let empty = g.full().remove(&g.positions()).unwrap();
        let (regions, stats) = solve(&empty, &SolverConfig::plain()).unwrap();
        assert!(regions.w0.is_empty() && regions.w1.is_empty());
        assert_eq!(stats.total_calls, 1);
    }

    #[test]
    fn families_are_won_by_even() {
        for k in 1..=4 {
            for g in [gen_core(k).unwrap(), gen_scc(k).unwrap()] {
                for cfg in SolverConfig::combinations() {
                    let (regions, _) = solve(&g.full(), &cfg).unwrap();
                    assert!(regions.w1.is_empty(), "k={k} cfg={cfg:?}");
                    assert_eq!(regions.w0, g.positions());
                }
            }
        }
    }

    #[test]
    fn configurations_agree_on_random_games() {
        for seed in 0..150 {
            let g = random_game(10, 6, seed);
            let reference = solve_plain(&g.full()).unwrap();
            assert!(reference.partitions(&g.positions()));
            for cfg in SolverConfig::combinations() {
                let (regions, stats) = solve(&g.full(), &cfg).unwrap();
                assert_eq!(regions, reference, "seed {seed} cfg {cfg:?}");
                assert!(stats.distinct_subgames <= stats.total_calls);
                if cfg.memoization {
                    assert_eq!(stats.memo_hits + stats.distinct_subgames, stats.total_calls);
                } else {
                    assert_eq!(stats.memo_hits, 0);
                }
            }
        }
    }

    #[test]
    fn memoization_is_repeatable() {
        let g = gen_core(4).unwrap();
        let cfg = Variant::Memo.config();
        let (a, sa) = solve(&g.full(), &cfg).unwrap();
        let (b, sb) = solve(&g.full(), &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(sa.distinct_subgames, sb.distinct_subgames);
        assert_eq!(sa.total_calls, sb.total_calls);
        let (_, plain) = solve(&g.full(), &SolverConfig::plain()).unwrap();
        assert_eq!(plain.distinct_subgames, sa.distinct_subgames);
        assert!(sa.total_calls <= plain.total_calls);
    }

    #[test]
    fn call_limit_reports_partial_stats() {
        let g = gen_core(3).unwrap();
        let err = solve(&g.full(), &SolverConfig::plain().with_call_limit(10)).unwrap_err();
        match err {
            Error::CallLimitExceeded { limit, stats } => {
                assert_eq!(limit, 10);
                assert_eq!(stats.total_calls, 11);
                assert!(stats.distinct_subgames >= 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn scc_wise_on_complete_digraph_matches_plain_calls() {
        // every induced subgraph of a complete digraph is strongly connected,
        // so the decomposition never splits anything
        let n = 6;
        let g = ParityGame::new(
            (0..n).map(|v| Player::from_parity(v * 7 % 3)).collect(),
            (0..n as u32).map(|v| (v * 5) % 7).collect(),
            (0..n).map(|_| (0..n).collect()).collect(),
        )
        .unwrap();
        let (a, plain) = solve(&g.full(), &SolverConfig::plain()).unwrap();
        let (b, scc) = solve_scc_wise(&g.full(), &SolverConfig::plain()).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            plain,
            SolveStats {
                wall_time: plain.wall_time,
                ..scc
            }
        );
    }

    #[test]
    fn memo_table_round_trip() {
        let mut table = MemoTable::default();
        assert!(table.is_empty());
        let alive = PositionSet::full(3);
        let regions = Regions::assign(Player::Even, alive.clone(), PositionSet::empty(3));
        table.insert(alive.clone(), regions.clone());
        assert_eq!(table.get(&alive), Some(&regions));
        assert_eq!(table.len(), 1);
    }
}
