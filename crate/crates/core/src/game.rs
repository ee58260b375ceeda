//! Parity game arenas and the set-theoretic primitives the solvers are built
//! from: predecessors, attractors and induced subgames.
//!
//! Every subgame is a mask over one master [`ParityGame`]. Positions are dense
//! indices into the master, so a [`PositionSet`] fully determines a subgame and
//! doubles as a cache key.

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::families::FamilyLabel;

pub type Priority = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Even = 0,
    Odd = 1,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::Even, Player::Odd];

    pub fn dual(self) -> Player {
        match self {
            Player::Even => Player::Odd,
            Player::Odd => Player::Even,
        }
    }

    /// The player favoured by `priority`.
    pub fn from_priority(priority: Priority) -> Player {
        Self::from_parity(priority as usize)
    }

    pub fn from_parity(value: usize) -> Player {
        if value.is_multiple_of(2) {
            Player::Even
        } else {
            Player::Odd
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// A subset of the positions of one master game.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PositionSet(FixedBitSet);

impl PositionSet {
    pub fn empty(capacity: usize) -> Self {
        PositionSet(FixedBitSet::with_capacity(capacity))
    }

    pub fn full(capacity: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(capacity);
        bits.insert_range(..);
        PositionSet(bits)
    }

    pub fn from_positions(capacity: usize, positions: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(capacity);
        for v in positions {
            set.insert(v);
        }
        set
    }

    /// Size of the master game this set lives in.
    pub fn capacity(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(v)
    }

    pub fn insert(&mut self, v: usize) {
        self.0.insert(v);
    }

    pub fn remove(&mut self, v: usize) {
        self.0.set(v, false);
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    /// Positions in ascending index order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.minimum()
    }

    pub fn union(&self, other: &PositionSet) -> PositionSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn difference(&self, other: &PositionSet) -> PositionSet {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    pub fn intersection(&self, other: &PositionSet) -> PositionSet {
        let mut out = self.clone();
        out.0.intersect_with(&other.0);
        out
    }

    pub fn union_with(&mut self, other: &PositionSet) {
        self.0.union_with(&other.0);
    }

    pub fn difference_with(&mut self, other: &PositionSet) {
        self.0.difference_with(&other.0);
    }

    pub fn is_subset(&self, other: &PositionSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &PositionSet) -> bool {
        self.0.is_disjoint(&other.0)
    }
}

impl fmt::Debug for PositionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// An explicit max-parity game over positions `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityGame {
    owner: Vec<Player>,
    priority: Vec<Priority>,
    successors: Vec<Vec<usize>>,
    predecessors: Vec<Vec<usize>>,
    labels: Vec<Option<FamilyLabel>>,
}

impl ParityGame {
    /// Builds a game, rejecting dangling successors and positions without moves.
    pub fn new(
        owner: Vec<Player>,
        priority: Vec<Priority>,
        successors: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = owner.len();
        if priority.len() != n || successors.len() != n {
            return Err(Error::BadIndex(format!(
                "{} owners, {} priorities and {} successor lists",
                n,
                priority.len(),
                successors.len()
            )));
        }
        let mut predecessors = vec![Vec::new(); n];
        for (v, succ) in successors.iter().enumerate() {
            if succ.is_empty() {
                return Err(Error::NotLeftTotal(v));
            }
            for &u in succ {
                if u >= n {
                    return Err(Error::BadIndex(format!(
                        "position {v} moves to {u}, game has {n} positions"
                    )));
                }
                if !predecessors[u].contains(&v) {
                    predecessors[u].push(v);
                }
            }
        }
        Ok(ParityGame {
            owner,
            priority,
            successors,
            predecessors,
            labels: vec![None; n],
        })
    }

    pub fn with_labels(mut self, labels: Vec<Option<FamilyLabel>>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::BadIndex(format!(
                "{} labels for {} positions",
                labels.len(),
                self.len()
            )));
        }
        self.labels = labels;
        Ok(self)
    }

    /// Copy of the game with the priority of `v` replaced.
    pub fn with_priority(&self, v: usize, priority: Priority) -> ParityGame {
        let mut out = self.clone();
        out.priority[v] = priority;
        out
    }

    /// Copy of the game with the move list of `v` replaced.
    pub fn with_successors(&self, v: usize, successors: Vec<usize>) -> Result<ParityGame> {
        let mut lists = self.successors.clone();
        lists[v] = successors;
        ParityGame::new(self.owner.clone(), self.priority.clone(), lists)?
            .with_labels(self.labels.clone())
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    pub fn num_moves(&self) -> usize {
        self.successors.iter().map(Vec::len).sum()
    }

    pub fn owner(&self, v: usize) -> Player {
        self.owner[v]
    }

    pub fn priority(&self, v: usize) -> Priority {
        self.priority[v]
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.successors[v]
    }

    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.predecessors[v]
    }

    pub fn label(&self, v: usize) -> Option<FamilyLabel> {
        self.labels[v]
    }

    pub fn position_of(&self, label: FamilyLabel) -> Option<usize> {
        self.labels.iter().position(|l| *l == Some(label))
    }

    pub fn positions(&self) -> PositionSet {
        PositionSet::full(self.len())
    }

    pub fn full(&self) -> Subgame<'_> {
        Subgame {
            master: self,
            alive: self.positions(),
        }
    }
}

/// The maximal subgame of a master game restricted to `alive`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgame<'g> {
    master: &'g ParityGame,
    alive: PositionSet,
}

impl<'g> Subgame<'g> {
    /// Validates that every alive position keeps an alive successor.
    pub fn new(master: &'g ParityGame, alive: PositionSet) -> Result<Self> {
        if alive.capacity() != master.len() {
            return Err(Error::BadIndex(format!(
                "position set sized for {} positions, game has {}",
                alive.capacity(),
                master.len()
            )));
        }
        let sub = Subgame { master, alive };
        if let Some(position) = sub.alive.iter().find(|&v| sub.moves(v).next().is_none()) {
            return Err(Error::NotAGame { position });
        }
        Ok(sub)
    }

    pub fn master(&self) -> &'g ParityGame {
        self.master
    }

    pub fn alive(&self) -> &PositionSet {
        &self.alive
    }

    pub fn len(&self) -> usize {
        self.alive.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alive.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.alive.contains(v)
    }

    /// Alive successors of `v`.
    pub fn moves(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.master
            .successors(v)
            .iter()
            .copied()
            .filter(|&u| self.alive.contains(u))
    }

    pub fn num_moves(&self) -> usize {
        self.alive.iter().map(|v| self.moves(v).count()).sum()
    }

    fn check_within(&self, set: &PositionSet) -> Result<()> {
        if set.capacity() != self.alive.capacity() || !set.is_subset(&self.alive) {
            return Err(Error::OutOfSubgame);
        }
        Ok(())
    }

    /// The maximal alive priority together with the positions carrying it.
    pub fn max_priority(&self) -> Result<(Priority, PositionSet)> {
        let top = self
            .alive
            .iter()
            .map(|v| self.master.priority(v))
            .max()
            .ok_or(Error::EmptyGame)?;
        let holders = PositionSet::from_positions(
            self.master.len(),
            self.alive
                .iter()
                .filter(|&v| self.master.priority(v) == top),
        );
        Ok((top, holders))
    }

    /// Positions from which `player` forces the token into `target` in one move.
    pub fn predecessor(&self, target: &PositionSet, player: Player) -> Result<PositionSet> {
        self.check_within(target)?;
        let mut out = PositionSet::empty(self.master.len());
        // Left-totality: only positions with a move into `target` can qualify.
        for t in target.iter() {
            for &v in self.master.predecessors(t) {
                if !self.alive.contains(v) || out.contains(v) {
                    continue;
                }
                if self.master.owner(v) == player || self.moves(v).all(|u| target.contains(u)) {
                    out.insert(v);
                }
            }
        }
        Ok(out)
    }

    /// Least superset of `seed` closed under [`Subgame::predecessor`] for `player`.
    pub fn attractor(&self, seed: &PositionSet, player: Player) -> Result<PositionSet> {
        self.check_within(seed)?;
        let mut attracted = seed.clone();
        // Opponent positions count down their alive escapes, initialised on
        // first contact; zero means forced.
        const UNSEEN: u32 = u32::MAX;
        let mut escapes = vec![UNSEEN; self.master.len()];
        let mut pending: Vec<usize> = seed.iter().collect();
        while let Some(v) = pending.pop() {
            for &u in self.master.predecessors(v) {
                if !self.alive.contains(u) || attracted.contains(u) {
                    continue;
                }
                let forced = if self.master.owner(u) == player {
                    true
                } else {
                    if escapes[u] == UNSEEN {
                        escapes[u] = self.moves(u).count() as u32;
                    }
                    escapes[u] -= 1;
                    escapes[u] == 0
                };
                if forced {
                    attracted.insert(u);
                    pending.push(u);
                }
            }
        }
        Ok(attracted)
    }

    /// The maximal subgame on `alive \ removed`.
    ///
    /// Fails with [`Error::NotAGame`] when `removed` was not attractor closed
    /// and some survivor lost all of its moves.
    pub fn remove(&self, removed: &PositionSet) -> Result<Subgame<'g>> {
        self.check_within(removed)?;
        Subgame::new(self.master, self.alive.difference(removed))
    }

    /// Subgame induced by `alive`, which must be a subset of this one.
    pub fn restrict(&self, alive: &PositionSet) -> Result<Subgame<'g>> {
        self.check_within(alive)?;
        Subgame::new(self.master, alive.clone())
    }

    /// Whether `set` is a trap for the opponent of `player`: opponent
    /// positions cannot leave it and `player` positions can stay in it.
    pub fn is_trap_for_opponent(&self, set: &PositionSet, player: Player) -> Result<bool> {
        self.check_within(set)?;
        Ok(set.iter().all(|v| {
            if self.master.owner(v) == player {
                self.moves(v).any(|u| set.contains(u))
            } else {
                self.moves(v).all(|u| set.contains(u))
            }
        }))
    }

    /// Whether `player` wins from every position of `set` without leaving it.
    ///
    /// `set` must be a trap for the opponent and `player` must win the whole
    /// subgame it induces.
    pub fn is_dominion(&self, set: &PositionSet, player: Player) -> Result<bool> {
        if set.is_empty() {
            return Err(Error::EmptyGame);
        }
        if !self.is_trap_for_opponent(set, player)? {
            return Ok(false);
        }
        let inner = self.restrict(set)?;
        let regions = crate::solver::solve_plain(&inner)?;
        Ok(regions.won_by(player) == set)
    }
}

/// Winning regions of a solved (sub)game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Regions {
    pub w0: PositionSet,
    pub w1: PositionSet,
}

impl Regions {
    pub fn empty(capacity: usize) -> Self {
        Regions {
            w0: PositionSet::empty(capacity),
            w1: PositionSet::empty(capacity),
        }
    }

    /// Regions with `won` assigned to `player` and `lost` to the opponent.
    pub fn assign(player: Player, won: PositionSet, lost: PositionSet) -> Self {
        match player {
            Player::Even => Regions { w0: won, w1: lost },
            Player::Odd => Regions { w0: lost, w1: won },
        }
    }

    pub fn won_by(&self, player: Player) -> &PositionSet {
        match player {
            Player::Even => &self.w0,
            Player::Odd => &self.w1,
        }
    }

    pub fn won_by_mut(&mut self, player: Player) -> &mut PositionSet {
        match player {
            Player::Even => &mut self.w0,
            Player::Odd => &mut self.w1,
        }
    }

    pub fn winner(&self, v: usize) -> Option<Player> {
        if self.w0.contains(v) {
            Some(Player::Even)
        } else if self.w1.contains(v) {
            Some(Player::Odd)
        } else {
            None
        }
    }

    /// Whether the regions partition exactly `positions`.
    pub fn partitions(&self, positions: &PositionSet) -> bool {
        self.w0.is_disjoint(&self.w1) && self.w0.union(&self.w1) == *positions
    }
}
