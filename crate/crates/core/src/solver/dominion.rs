//! Exhaustive search for small dominions.
//!
//! A smallest dominion `D` of player `p` is strongly connected under any
//! winning positional strategy `σ` of `p` restricted to `D`, so `D` is exactly
//! the set reachable from any of its members when `p` follows `σ` and the
//! opponent moves freely. The search therefore grows candidates from a seed:
//! opponent positions pull in all of their moves, `p` positions branch over
//! one move each. Seeds are taken in ascending order and no position ranked
//! below the seed may join, so every set is rooted at its minimum.
//!
//! A branch dies as soon as its fully expanded part closes a cycle whose top
//! priority has the opponent's parity: the strategy being built is losing,
//! and a winning strategy for the same set is explored on another branch.
//!
//! When a seed domain is given (say, the core of a family game), only sets
//! meeting it are considered and rooted at their smallest member of the
//! domain. A smallest dominion meeting the domain is reachable from each of
//! its domain members under a winning strategy, so the same argument holds.

use std::collections::HashSet;

use crate::error::Result;
use crate::game::{Player, PositionSet, Subgame};

/// A dominion together with the player winning it.
pub type Dominion = (PositionSet, Player);

pub struct DominionSearch<'a, 'g> {
    game: &'a Subgame<'g>,
    players: Vec<Player>,
    seeds: PositionSet,
    probes: u64,
}

impl<'a, 'g> DominionSearch<'a, 'g> {
    pub fn new(game: &'a Subgame<'g>) -> Self {
        DominionSearch {
            game,
            players: Player::BOTH.to_vec(),
            seeds: game.alive().clone(),
            probes: 0,
        }
    }

    /// Restricts the search to dominions of the given players.
    pub fn players(mut self, players: &[Player]) -> Self {
        self.players = players.to_vec();
        self
    }

    /// Restricts the search to dominions meeting `domain`.
    pub fn meeting(mut self, domain: &PositionSet) -> Self {
        self.seeds = domain.intersection(self.game.alive());
        self
    }

    /// Number of complete candidate sets tested so far.
    pub fn probes(&self) -> u64 {
        self.probes
    }

    /// The smallest dominion of size at most `max_size`; ties are broken by
    /// the lexicographic order of the sorted positions, then by player.
    pub fn smallest(&mut self, max_size: usize) -> Result<Option<Dominion>> {
        let mut run = Run {
            game: self.game,
            seeds: &self.seeds,
            player: Player::Even,
            bound: max_size,
            best: None,
            tested: HashSet::new(),
            probes: 0,
            members: PositionSet::empty(self.game.master().len()),
            order: Vec::new(),
            choice: vec![None; self.game.master().len()],
            slot: vec![0; self.game.master().len()],
            excluded: PositionSet::empty(self.game.master().len()),
            scratch: Scratch::default(),
            floor: 0,
        };
        let mut players = self.players.clone();
        players.sort();
        players.dedup();
        for &player in &players {
            run.player = player;
            run.excluded = excluded(self.game, player, max_size)?;
            for seed in self.seeds.iter() {
                if run.excluded.contains(seed) {
                    continue;
                }
                run.floor = seed;
                run.tested.clear();
                run.members.insert(seed);
                run.order.push(seed);
                run.grow(0)?;
                run.members.remove(seed);
                run.order.pop();
            }
        }
        self.probes += run.probes;
        Ok(run.best.map(|(_, set, player)| (set, player)))
    }
}

/// Reusable buffers of the cycle check.
#[derive(Default)]
struct Scratch {
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    prio: Vec<u32>,
    levels: Vec<u32>,
    forward: Vec<bool>,
    backward: Vec<bool>,
    stack: Vec<usize>,
}

/// Marks positions reachable from `v` in one or more steps through
/// positions of priority at most `q`.
fn reach(
    adj: &[Vec<usize>],
    prio: &[u32],
    q: u32,
    v: usize,
    seen: &mut Vec<bool>,
    stack: &mut Vec<usize>,
) {
    seen.clear();
    seen.resize(adj.len(), false);
    stack.clear();
    stack.push(v);
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if prio[y] <= q && !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
}

/// Opponent attractor to the opponent positions with more than `max_size`
/// moves. A dominion of `player` is closed under opponent moves, so it holds
/// none of those positions, nothing the opponent can force into them, and no
/// `player` position whose moves all lead there.
fn excluded(g: &Subgame<'_>, player: Player, max_size: usize) -> Result<PositionSet> {
    let opponent = player.dual();
    let wide = g
        .alive()
        .iter()
        .filter(|&v| g.master().owner(v) == opponent && g.moves(v).count() > max_size);
    let wide = PositionSet::from_positions(g.master().len(), wide);
    g.attractor(&wide, opponent)
}

/// First dominion (by size, then lexicographically, then player) of at most
/// `max_size` positions, with the number of candidates probed.
pub fn find_dominion(g: &Subgame<'_>, max_size: usize) -> Result<(Option<Dominion>, u64)> {
    let mut search = DominionSearch::new(g);
    let found = search.smallest(max_size)?;
    Ok((found, search.probes()))
}

struct Run<'a, 'g> {
    game: &'a Subgame<'g>,
    seeds: &'a PositionSet,
    player: Player,
    bound: usize,
    /// (sorted members, set, player) of the best dominion so far
    best: Option<(Vec<usize>, PositionSet, Player)>,
    tested: HashSet<PositionSet>,
    probes: u64,
    members: PositionSet,
    /// members in insertion order; `order[..cursor]` are expanded
    order: Vec<usize>,
    /// strategy choice of expanded positions owned by the searching player
    choice: Vec<Option<usize>>,
    /// scratch: index of a position within `order`, valid only if it matches
    slot: Vec<usize>,
    /// positions no dominion of the current player within the bound can hold
    excluded: PositionSet,
    floor: usize,
    scratch: Scratch,
}

impl Run<'_, '_> {
    fn admissible(&self, u: usize) -> bool {
        (u >= self.floor || !self.seeds.contains(u)) && !self.excluded.contains(u)
    }

    fn grow(&mut self, cursor: usize) -> Result<()> {
        if self.order.len() > self.bound {
            return Ok(());
        }
        let Some(&v) = self.order.get(cursor) else {
            return self.complete();
        };
        let game = self.game;
        let successors = game.master().successors(v);
        if game.master().owner(v) != self.player {
            let start = self.order.len();
            let mut fits = true;
            for &u in successors {
                if !game.contains(u) || self.members.contains(u) {
                    continue;
                }
                if !self.admissible(u) || self.order.len() >= self.bound {
                    fits = false;
                    break;
                }
                self.members.insert(u);
                self.order.push(u);
            }
            if fits {
                self.expand(v, None, cursor)?;
            }
            for i in start..self.order.len() {
                self.members.remove(self.order[i]);
            }
            self.order.truncate(start);
            return Ok(());
        }
        // Staying inside: every member target leads to the same set, but the
        // cycle check depends on which one is picked.
        for &u in successors {
            if game.contains(u) && self.members.contains(u) {
                self.expand(v, Some(u), cursor)?;
            }
        }
        for &u in successors {
            if !game.contains(u)
                || self.members.contains(u)
                || !self.admissible(u)
                || self.order.len() >= self.bound
            {
                continue;
            }
            self.members.insert(u);
            self.order.push(u);
            self.expand(v, Some(u), cursor)?;
            self.order.pop();
            self.members.remove(u);
        }
        Ok(())
    }

    fn expand(&mut self, v: usize, pick: Option<usize>, cursor: usize) -> Result<()> {
        self.choice[v] = pick;
        if !self.closes_losing_cycle(cursor) {
            self.grow(cursor + 1)?;
        }
        self.choice[v] = None;
        Ok(())
    }

    /// Whether some closed walk through `v` in the expanded graph (strategy
    /// picks plus all opponent moves among expanded positions) has a top
    /// priority of the opponent's parity. Expanded positions are exactly
    /// `order[..=cursor]` and `v = order[cursor]`.
    fn closes_losing_cycle(&mut self, cursor: usize) -> bool {
        let mut scratch = std::mem::take(&mut self.scratch);
        let found = self.losing_cycle_in(cursor, &mut scratch);
        self.scratch = scratch;
        found
    }

    fn losing_cycle_in(&mut self, cursor: usize, sc: &mut Scratch) -> bool {
        let game = self.game.master();
        let opponent = self.player.dual();
        let nodes = &self.order[..=cursor];
        let len = nodes.len();
        let v = cursor;
        for (i, &x) in nodes.iter().enumerate() {
            self.slot[x] = i;
        }
        let slot = &self.slot;
        let local = |u: usize| {
            let i = slot[u];
            (i < len && nodes[i] == u).then_some(i)
        };
        if sc.succ.len() < len {
            sc.succ.resize_with(len, Vec::new);
            sc.pred.resize_with(len, Vec::new);
        }
        for i in 0..len {
            sc.succ[i].clear();
            sc.pred[i].clear();
        }
        sc.prio.clear();
        sc.levels.clear();
        for (i, &x) in nodes.iter().enumerate() {
            let q = game.priority(x);
            sc.prio.push(q);
            if q >= game.priority(nodes[v]) && Player::from_priority(q) == opponent {
                sc.levels.push(q);
            }
            if game.owner(x) == self.player {
                if let Some(j) = self.choice[x].and_then(local) {
                    sc.succ[i].push(j);
                    sc.pred[j].push(i);
                }
            } else {
                for &u in game.successors(x) {
                    if let Some(j) = local(u) {
                        sc.succ[i].push(j);
                        sc.pred[j].push(i);
                    }
                }
            }
        }
        sc.levels.sort_unstable();
        sc.levels.dedup();
        for li in 0..sc.levels.len() {
            let q = sc.levels[li];
            reach(
                &sc.succ[..len],
                &sc.prio,
                q,
                v,
                &mut sc.forward,
                &mut sc.stack,
            );
            if !sc.forward[v] {
                continue;
            }
            reach(
                &sc.pred[..len],
                &sc.prio,
                q,
                v,
                &mut sc.backward,
                &mut sc.stack,
            );
            if (0..len).any(|x| sc.forward[x] && sc.backward[x] && sc.prio[x] == q) {
                return true;
            }
        }
        false
    }

    fn complete(&mut self) -> Result<()> {
        let mut sorted: Vec<usize> = self.members.iter().collect();
        sorted.sort_unstable();
        if let Some((best, _, best_player)) = &self.best {
            let key = (sorted.len(), &sorted, self.player);
            if key >= (best.len(), best, *best_player) {
                return Ok(());
            }
        }
        if !self.tested.insert(self.members.clone()) {
            return Ok(());
        }
        self.probes += 1;
        if self.game.is_dominion(&self.members, self.player)? {
            self.bound = self.bound.min(sorted.len());
            self.best = Some((sorted, self.members.clone(), self.player));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{gen_core, gen_scc, random_game, FamilyLabel};
    use crate::game::ParityGame;

    /// Plain lexicographic enumeration of every subset up to `max_size`.
    fn brute_force(g: &Subgame<'_>, max_size: usize, players: &[Player]) -> Option<Dominion> {
        fn combos(pool: &[usize], size: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if prefix.len() == size {
                out.push(prefix.clone());
                return;
            }
            for (i, &v) in pool.iter().enumerate() {
                prefix.push(v);
                combos(&pool[i + 1..], size, prefix, out);
                prefix.pop();
            }
        }
        let alive: Vec<usize> = g.alive().iter().collect();
        for size in 1..=max_size.min(alive.len()) {
            let mut all = Vec::new();
            combos(&alive, size, &mut Vec::new(), &mut all);
            for members in all {
                let set = PositionSet::from_positions(g.master().len(), members);
                for &p in players {
                    if g.is_dominion(&set, p).unwrap() {
                        return Some((set, p));
                    }
                }
            }
        }
        None
    }

    #[test]
    fn even_self_loop_is_found_at_size_one() {
        let g = ParityGame::new(
            vec![Player::Odd, Player::Even, Player::Odd],
            vec![1, 2, 3],
            vec![vec![1], vec![1, 0], vec![0, 2]],
        )
        .unwrap();
        let (found, probes) = find_dominion(&g.full(), 1).unwrap();
        let (set, p) = found.unwrap();
        assert_eq!(set.iter().collect::<Vec<_>>(), vec![1]);
        assert_eq!(p, Player::Even);
        assert!(probes >= 1);
    }

    #[test]
    fn matches_lexicographic_brute_force_on_random_games() {
        for seed in 0..300 {
            let g = random_game(7, 4, seed);
            let full = g.full();
            for size in 1..=4 {
                let (found, _) = find_dominion(&full, size).unwrap();
                assert_eq!(
                    found,
                    brute_force(&full, size, &Player::BOTH),
                    "seed {seed} size {size}"
                );
            }
        }
    }

    #[test]
    fn single_player_search_matches_brute_force() {
        for seed in 300..400 {
            let g = random_game(8, 5, seed);
            let full = g.full();
            for p in Player::BOTH {
                let found = DominionSearch::new(&full)
                    .players(&[p])
                    .smallest(8)
                    .unwrap();
                assert_eq!(found, brute_force(&full, 8, &[p]), "seed {seed}");
            }
        }
    }

    #[test]
    fn core_game_has_a_two_element_dominion() {
        let g = gen_core(2).unwrap();
        let (found, _) = find_dominion(&g.full(), 3).unwrap();
        let (set, p) = found.unwrap();
        assert_eq!(p, Player::Even);
        assert_eq!(set.len(), 2);
        let beta4 = g.position_of(FamilyLabel::Beta(4)).unwrap();
        let gamma4 = g.position_of(FamilyLabel::Gamma(4)).unwrap();
        assert_eq!(set.iter().collect::<Vec<_>>(), vec![beta4, gamma4]);
    }

    #[test]
    fn smallest_scc_one_dominion_has_four_positions() {
        let g = gen_scc(1).unwrap();
        let full = g.full();
        let found = DominionSearch::new(&full)
            .players(&[Player::Even])
            .smallest(g.len())
            .unwrap();
        let (set, _) = found.unwrap();
        assert_eq!(set.len(), 4);
        assert_eq!(
            Some((set, Player::Even)),
            brute_force(&full, 4, &[Player::Even])
        );
        let odd = DominionSearch::new(&full)
            .players(&[Player::Odd])
            .smallest(g.len())
            .unwrap();
        assert_eq!(odd, None);
    }

    #[test]
    fn meeting_restricts_to_the_domain() {
        for seed in 0..100 {
            let g = random_game(7, 4, seed);
            let full = g.full();
            let domain = PositionSet::from_positions(g.len(), [0, 1, 2]);
            let found = DominionSearch::new(&full)
                .meeting(&domain)
                .smallest(7)
                .unwrap();
            // brute force over sets meeting the domain
            let mut expected: Option<(usize, Vec<usize>, Player)> = None;
            for mask in 1u32..(1 << 7) {
                let set = PositionSet::from_positions(7, (0..7).filter(|i| mask & (1 << i) != 0));
                if set.is_disjoint(&domain) {
                    continue;
                }
                for p in Player::BOTH {
                    if full.is_dominion(&set, p).unwrap() {
                        let key = (set.len(), set.iter().collect::<Vec<_>>(), p);
                        if expected.as_ref().is_none_or(|e| key < *e) {
                            expected = Some(key);
                        }
                    }
                }
            }
            let got = found.map(|(s, p)| (s.len(), s.iter().collect::<Vec<_>>(), p));
            assert_eq!(got, expected, "seed {seed}");
        }
    }
}
