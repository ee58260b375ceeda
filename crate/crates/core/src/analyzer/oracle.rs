//! Brute-force reference solver over positional strategies.
//!
//! Shares nothing with the recursive solver beyond the game representation:
//! a position is won by `p` iff some positional strategy of `p` keeps every
//! cycle reachable from it (opponent moving freely) at a top priority of
//! `p`'s parity. Cycles are enumerated explicitly.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::game::{ParityGame, Player, PositionSet, Regions, Subgame};

/// Largest position count the oracle accepts.
pub const ORACLE_LIMIT: usize = 12;

/// A positional strategy: one chosen move per position of its player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strategy {
    pub player: Player,
    pub choice: BTreeMap<usize, usize>,
}

/// Local arena: positions `0..len` plus, per position, the allowed moves.
struct Arena<'a> {
    game: &'a ParityGame,
    nodes: Vec<usize>,
    moves: Vec<Vec<usize>>,
}

impl<'a> Arena<'a> {
    fn over(game: &'a ParityGame, set: &PositionSet) -> Self {
        let nodes: Vec<usize> = set.iter().collect();
        let local = |v: usize| nodes.iter().position(|&u| u == v);
        let moves = nodes
            .iter()
            .map(|&v| {
                game.successors(v)
                    .iter()
                    .filter_map(|&u| local(u))
                    .collect()
            })
            .collect();
        Arena { game, nodes, moves }
    }

    /// Local positions won by `player`, trying every positional strategy.
    fn winning(&self, player: Player) -> Vec<bool> {
        let n = self.nodes.len();
        let mine: Vec<usize> = (0..n)
            .filter(|&v| self.game.owner(self.nodes[v]) == player)
            .collect();
        let mut won = vec![false; n];
        let mut pick = vec![0usize; mine.len()];
        loop {
            let mut graph = self.moves.clone();
            for (slot, &v) in mine.iter().enumerate() {
                graph[v] = vec![self.moves[v][pick[slot]]];
            }
            let bad = self.bad_positions(&graph, player);
            for v in 0..n {
                if !bad[v] {
                    won[v] = true;
                }
            }
            if won.iter().all(|&w| w) || !advance(&mut pick, &mine, &self.moves) {
                return won;
            }
        }
    }

    /// Positions that can reach a cycle whose top priority favours the
    /// opponent of `player`.
    fn bad_positions(&self, graph: &[Vec<usize>], player: Player) -> Vec<bool> {
        let n = graph.len();
        let mut on_bad_cycle = vec![false; n];
        let mut path = Vec::new();
        for start in 0..n {
            path.clear();
            path.push(start);
            self.cycles_from(graph, start, start, &mut path, player, &mut on_bad_cycle);
        }
        let mut bad = on_bad_cycle;
        let mut changed = true;
        while changed {
            changed = false;
            for v in 0..n {
                if !bad[v] && graph[v].iter().any(|&u| bad[u]) {
                    bad[v] = true;
                    changed = true;
                }
            }
        }
        bad
    }

    /// Simple cycles through `start` using only positions above it.
    fn cycles_from(
        &self,
        graph: &[Vec<usize>],
        start: usize,
        v: usize,
        path: &mut Vec<usize>,
        player: Player,
        marks: &mut [bool],
    ) {
        for &u in &graph[v] {
            if u == start {
                let top = path
                    .iter()
                    .map(|&x| self.game.priority(self.nodes[x]))
                    .max()
                    .expect("path holds the start");
                if Player::from_priority(top) != player {
                    for &x in path.iter() {
                        marks[x] = true;
                    }
                }
            } else if u > start && !path.contains(&u) {
                path.push(u);
                self.cycles_from(graph, start, u, path, player, marks);
                path.pop();
            }
        }
    }
}

/// Odometer step over strategy choices; false once every choice was seen.
fn advance(pick: &mut [usize], mine: &[usize], moves: &[Vec<usize>]) -> bool {
    for (slot, &v) in mine.iter().enumerate() {
        pick[slot] += 1;
        if pick[slot] < moves[v].len() {
            return true;
        }
        pick[slot] = 0;
    }
    false
}

/// Winning regions by exhaustive positional-strategy enumeration.
pub fn oracle_solve(g: &Subgame<'_>) -> Result<Regions> {
    if g.len() > ORACLE_LIMIT {
        return Err(Error::TooLarge(g.len()));
    }
    let arena = Arena::over(g.master(), g.alive());
    let won = arena.winning(Player::Even);
    let n = g.master().len();
    let mut regions = Regions::empty(n);
    for (local, &v) in arena.nodes.iter().enumerate() {
        regions
            .won_by_mut(Player::from_parity(usize::from(!won[local])))
            .insert(v);
    }
    Ok(regions)
}

/// A winning strategy of `player` on the whole of `g`, if one exists.
pub fn oracle_strategy(g: &Subgame<'_>, player: Player) -> Result<Option<Strategy>> {
    if g.len() > ORACLE_LIMIT {
        return Err(Error::TooLarge(g.len()));
    }
    let arena = Arena::over(g.master(), g.alive());
    let n = arena.nodes.len();
    let mine: Vec<usize> = (0..n)
        .filter(|&v| arena.game.owner(arena.nodes[v]) == player)
        .collect();
    let mut pick = vec![0usize; mine.len()];
    loop {
        let mut graph = arena.moves.clone();
        for (slot, &v) in mine.iter().enumerate() {
            graph[v] = vec![arena.moves[v][pick[slot]]];
        }
        if arena.bad_positions(&graph, player).iter().all(|&b| !b) {
            let choice = mine
                .iter()
                .zip(&pick)
                .map(|(&v, &i)| (arena.nodes[v], arena.nodes[arena.moves[v][i]]))
                .collect();
            return Ok(Some(Strategy { player, choice }));
        }
        if !advance(&mut pick, &mine, &arena.moves) {
            return Ok(None);
        }
    }
}

/// Whether `player` can win from all of `set` while never leaving it: the
/// opponent cannot exit and some positional strategy with moves inside
/// `set` wins everywhere.
pub fn oracle_is_dominion(g: &Subgame<'_>, set: &PositionSet, player: Player) -> Result<bool> {
    if set.is_empty() {
        return Err(Error::EmptyGame);
    }
    if !set.is_subset(g.alive()) {
        return Err(Error::OutOfSubgame);
    }
    if set.len() > ORACLE_LIMIT {
        return Err(Error::TooLarge(set.len()));
    }
    let game = g.master();
    for v in set.iter() {
        let mut inside = g.moves(v).map(|u| set.contains(u));
        let closed = if game.owner(v) == player {
            inside.any(|b| b)
        } else {
            inside.all(|b| b)
        };
        if !closed {
            return Ok(false);
        }
    }
    let sub = Subgame::new(game, set.clone())?;
    Ok(oracle_strategy(&sub, player)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{gen_core, random_game};

    #[test]
    fn even_self_loop() {
        let g = ParityGame::new(vec![Player::Odd], vec![0], vec![vec![0]]).unwrap();
        let r = oracle_solve(&g.full()).unwrap();
        assert_eq!(r.w0.len(), 1);
    }

    #[test]
    fn odd_choice_matters() {
        // Even at 0 picks between an odd loop (1) and an even loop (2).
        let g = ParityGame::new(
            vec![Player::Even, Player::Odd, Player::Odd],
            vec![0, 1, 2],
            vec![vec![1, 2], vec![1], vec![2]],
        )
        .unwrap();
        let r = oracle_solve(&g.full()).unwrap();
        assert_eq!(r.w0.iter().collect::<Vec<_>>(), [0, 2]);
        assert_eq!(r.w1.iter().collect::<Vec<_>>(), [1]);
        let s = oracle_strategy(&g.full().restrict(&r.w0).unwrap(), Player::Even)
            .unwrap()
            .unwrap();
        assert_eq!(s.choice[&0], 2);
    }

    #[test]
    fn core_one_won_by_even() {
        let g = gen_core(1).unwrap();
        assert!(oracle_solve(&g.full()).unwrap().w1.is_empty());
    }

    #[test]
    fn too_large() {
        let g = random_game(13, 4, 0);
        assert!(matches!(oracle_solve(&g.full()), Err(Error::TooLarge(13))));
    }

    #[test]
    fn regions_partition() {
        for seed in 0..50 {
            let g = random_game(7, 4, seed);
            let r = oracle_solve(&g.full()).unwrap();
            assert!(r.partitions(&g.positions()));
        }
    }

    #[test]
    fn dominion_matches_library_check() {
        for seed in 0..100 {
            let g = random_game(6, 4, seed);
            let full = g.full();
            for mask in 1u32..(1 << 6) {
                let set = PositionSet::from_positions(6, (0..6).filter(|i| mask >> i & 1 == 1));
                for p in Player::BOTH {
                    assert_eq!(
                        oracle_is_dominion(&full, &set, p).unwrap(),
                        full.is_dominion(&set, p).unwrap(),
                        "seed {seed} mask {mask:b} player {p}"
                    );
                }
            }
        }
    }
}
