//! Generators for the worst-case game families and the core-extension check.
//!
//! Layout of a level-`k` core game: gadget `i` in `0..=2k` occupies indices
//! `3i` (alpha), `3i + 1` (beta) and `3i + 2` (gamma). Connector positions of
//! the SCC family follow after index `6k + 2`, sorted by `(i, j, player)`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{ParityGame, Player, Priority};

/// Role of a position in a family game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyLabel {
    Alpha(usize),
    Beta(usize),
    Gamma(usize),
    /// Connector between gamma `i` and gamma `j` (`i < j`) owned by the player.
    Delta(usize, usize, Player),
}

impl FamilyLabel {
    pub fn is_core(&self) -> bool {
        !matches!(self, FamilyLabel::Delta(..))
    }
}

impl fmt::Display for FamilyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilyLabel::Alpha(i) => write!(f, "alpha_{i}"),
            FamilyLabel::Beta(i) => write!(f, "beta_{i}"),
            FamilyLabel::Gamma(i) => write!(f, "gamma_{i}"),
            FamilyLabel::Delta(i, j, p) => write!(f, "delta_{i}_{j}_p{p}"),
        }
    }
}

impl FromStr for FamilyLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let bad = || format!("unrecognised family label {s:?}");
        let (kind, rest) = s.split_once('_').ok_or_else(bad)?;
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        match kind {
            "alpha" => Ok(FamilyLabel::Alpha(num(rest)?)),
            "beta" => Ok(FamilyLabel::Beta(num(rest)?)),
            "gamma" => Ok(FamilyLabel::Gamma(num(rest)?)),
            "delta" => {
                let parts: Vec<&str> = rest.split('_').collect();
                let [i, j, p] = parts[..] else {
                    return Err(bad());
                };
                let player = match p {
                    "p0" => Player::Even,
                    "p1" => Player::Odd,
                    _ => return Err(bad()),
                };
                let (i, j) = (num(i)?, num(j)?);
                if i >= j || (i % 2 == j % 2 && Player::from_parity(i) != player) {
                    return Err(bad());
                }
                Ok(FamilyLabel::Delta(i, j, player))
            }
            _ => Err(bad()),
        }
    }
}

/// Connector positions of the level-`k` SCC family, in generator order.
pub fn connectors(k: usize) -> Vec<(usize, usize, Player)> {
    let mut out = Vec::new();
    for i in 0..=2 * k {
        for j in i + 1..=2 * k {
            if i % 2 == j % 2 {
                out.push((i, j, Player::from_parity(i)));
            } else {
                out.push((i, j, Player::Even));
                out.push((i, j, Player::Odd));
            }
        }
    }
    out
}

fn check_level(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::BadIndex("family level must be at least 1".into()));
    }
    Ok(())
}

struct Draft {
    owner: Vec<Player>,
    priority: Vec<Priority>,
    successors: Vec<Vec<usize>>,
    labels: Vec<Option<FamilyLabel>>,
}

impl Draft {
    fn core(k: usize) -> Draft {
        let top = 2 * k;
        let (alpha, beta, gamma) = (|i: usize| 3 * i, |i: usize| 3 * i + 1, |i: usize| 3 * i + 2);
        let mut d = Draft {
            owner: Vec::new(),
            priority: Vec::new(),
            successors: Vec::new(),
            labels: Vec::new(),
        };
        for i in 0..=top {
            let p = Player::from_parity(i);
            let pr = i as Priority;

            d.owner.push(p);
            d.priority.push((2 * k + i + 1) as Priority);
            d.successors.push(vec![beta(i)]);
            d.labels.push(Some(FamilyLabel::Alpha(i)));

            let mut moves = vec![gamma(i)];
            if i > 0 {
                moves.push(alpha(i - 1));
            }
            d.owner.push(p);
            d.priority.push(pr);
            d.successors.push(moves);
            d.labels.push(Some(FamilyLabel::Beta(i)));

            let mut moves = vec![gamma(i), beta(i)];
            if i < top {
                moves.push(alpha(i + 1));
            }
            d.owner.push(p.dual());
            d.priority.push(pr);
            d.successors.push(moves);
            d.labels.push(Some(FamilyLabel::Gamma(i)));
        }
        d
    }

    fn build(self) -> Result<ParityGame> {
        ParityGame::new(self.owner, self.priority, self.successors)?.with_labels(self.labels)
    }
}

/// The level-`k` core game: `6k + 3` positions, `12k + 4` moves.
pub fn gen_core(k: usize) -> Result<ParityGame> {
    check_level(k)?;
    Draft::core(k).build()
}

/// The level-`k` SCC game: the core plus clique-like connectors between
/// every pair of gammas, `3k² + 8k + 3` positions in total.
pub fn gen_scc(k: usize) -> Result<ParityGame> {
    check_level(k)?;
    let mut d = Draft::core(k);
    let base = d.owner.len();
    let conns = connectors(k);
    let index_of = |i: usize, j: usize, p: Player| {
        base + conns
            .iter()
            .position(|&c| c == (i, j, p))
            .expect("connector exists")
    };
    for (n, &(i, j, p)) in conns.iter().enumerate() {
        let v = base + n;
        for end in [i, j] {
            if Player::from_parity(end) == p {
                d.successors[3 * end + 2].push(v);
            }
        }
        let mut moves = Vec::new();
        for end in [i, j] {
            if Player::from_parity(end) == p {
                moves.push(3 * end + 2);
            }
        }
        if i % 2 != j % 2 {
            moves.push(index_of(i, j, p.dual()));
        }
        d.owner.push(p);
        d.priority.push(0);
        d.successors.push(moves);
        d.labels.push(Some(FamilyLabel::Delta(i, j, p)));
    }
    d.build()
}

/// Uniform random left-total game with 1 to 3 distinct successors per position.
pub fn random_game(n: usize, max_priority: Priority, seed: u64) -> ParityGame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut owner = Vec::with_capacity(n);
    let mut priority = Vec::with_capacity(n);
    let mut successors = Vec::with_capacity(n);
    for _ in 0..n {
        owner.push(if rng.gen_bool(0.5) {
            Player::Odd
        } else {
            Player::Even
        });
        priority.push(rng.gen_range(0..=max_priority));
        let out = rng.gen_range(1..=3.min(n));
        let mut succ = BTreeSet::new();
        while succ.len() < out {
            succ.insert(rng.gen_range(0..n));
        }
        successors.push(succ.into_iter().collect());
    }
    ParityGame::new(owner, priority, successors).expect("generated game is left-total")
}

/// Positions of a labelled game grouped by their core role.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreMap {
    pub k: usize,
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
    pub gamma: Vec<usize>,
    /// Every non-core position; labelled connectors carry their indices.
    pub extension: Vec<(usize, Option<FamilyLabel>)>,
}

impl CoreMap {
    /// Locates the level-`k` core through position labels.
    pub fn locate(game: &ParityGame, k: usize) -> std::result::Result<CoreMap, String> {
        let gadgets = 2 * k + 1;
        let mut alpha = vec![None; gadgets];
        let mut beta = vec![None; gadgets];
        let mut gamma = vec![None; gadgets];
        let mut extension = Vec::new();
        for v in 0..game.len() {
            let slot = match game.label(v) {
                Some(FamilyLabel::Alpha(i)) if i < gadgets => &mut alpha[i],
                Some(FamilyLabel::Beta(i)) if i < gadgets => &mut beta[i],
                Some(FamilyLabel::Gamma(i)) if i < gadgets => &mut gamma[i],
                other => {
                    extension.push((v, other));
                    continue;
                }
            };
            if let Some(prev) = slot.replace(v) {
                return Err(format!(
                    "positions {prev} and {v} share label {}",
                    game.label(v).unwrap()
                ));
            }
        }
        let collect = |slots: Vec<Option<usize>>, name: &str| {
            slots
                .into_iter()
                .enumerate()
                .map(|(i, s)| s.ok_or_else(|| format!("no position labelled {name}_{i}")))
                .collect::<std::result::Result<Vec<_>, _>>()
        };
        Ok(CoreMap {
            k,
            alpha: collect(alpha, "alpha")?,
            beta: collect(beta, "beta")?,
            gamma: collect(gamma, "gamma")?,
            extension,
        })
    }

    pub fn core_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.alpha
            .iter()
            .chain(&self.beta)
            .chain(&self.gamma)
            .copied()
    }

    pub fn is_extension(&self, v: usize) -> bool {
        self.extension.iter().any(|&(u, _)| u == v)
    }
}

/// Outcome of one core-extension condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionResult {
    pub pass: bool,
    /// First offending position or structural mismatch, if any.
    pub witness: Option<String>,
}

impl ConditionResult {
    fn from_witness(witness: Option<String>) -> Self {
        ConditionResult {
            pass: witness.is_none(),
            witness,
        }
    }
}

/// Per-condition verdicts of [`check_core_extension`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreExtensionReport {
    pub k: usize,
    /// Conditions in order: core restriction, priorities below the alphas,
    /// no alpha/beta contact, and bounce-back gamma escapes.
    pub conditions: [ConditionResult; 4],
    pub extension_size: usize,
}

impl CoreExtensionReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<String> {
        self.conditions.iter().enumerate().find_map(|(n, c)| {
            (!c.pass).then(|| {
                format!(
                    "condition {}: {}",
                    n + 1,
                    c.witness.clone().unwrap_or_default()
                )
            })
        })
    }
}

impl fmt::Display for CoreExtensionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 4] = [
            "core restriction",
            "extension priorities",
            "alpha/beta isolation",
            "gamma bounce-back",
        ];
        for (n, c) in self.conditions.iter().enumerate() {
            write!(
                f,
                "core-extension {} ({}): {}",
                n + 1,
                NAMES[n],
                if c.pass { "pass" } else { "FAIL" }
            )?;
            if let Some(w) = &c.witness {
                write!(f, " [{w}]")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Checks the four conditions under which `game` extends the level-`k` core.
pub fn check_core_extension(game: &ParityGame, k: usize) -> CoreExtensionReport {
    let fail_all = |why: String| CoreExtensionReport {
        k,
        conditions: std::array::from_fn(|n| {
            ConditionResult::from_witness(Some(if n == 0 {
                why.clone()
            } else {
                "core not located".to_string()
            }))
        }),
        extension_size: 0,
    };
    if k == 0 {
        return fail_all("level must be at least 1".into());
    }
    let map = match CoreMap::locate(game, k) {
        Ok(map) => map,
        Err(why) => return fail_all(why),
    };
    let core = gen_core(k).expect("k >= 1");
    // core index (3i + role) -> position in `game`
    let to_game: Vec<usize> = (0..core.len())
        .map(|c| match c % 3 {
            0 => map.alpha[c / 3],
            1 => map.beta[c / 3],
            _ => map.gamma[c / 3],
        })
        .collect();
    let name = |v: usize| {
        game.label(v)
            .map(|l| l.to_string())
            .unwrap_or_else(|| format!("#{v}"))
    };
    let in_core = |v: usize| !map.is_extension(v);

    let cond1 = (0..core.len()).find_map(|c| {
        let v = to_game[c];
        if game.owner(v) != core.owner(c) || game.priority(v) != core.priority(c) {
            return Some(format!("{} differs in owner or priority", name(v)));
        }
        let expected: BTreeSet<usize> = core.successors(c).iter().map(|&u| to_game[u]).collect();
        let actual: BTreeSet<usize> = game
            .successors(v)
            .iter()
            .copied()
            .filter(|&u| in_core(u))
            .collect();
        (expected != actual).then(|| format!("{} has different core moves", name(v)))
    });

    let alpha0 = game.priority(map.alpha[0]);
    let cond2 = map
        .extension
        .iter()
        .find(|&&(v, _)| game.priority(v) >= alpha0)
        .map(|&(v, _)| {
            format!(
                "{} has priority {} >= {}",
                name(v),
                game.priority(v),
                alpha0
            )
        });

    let leading: BTreeSet<usize> = map.alpha.iter().chain(&map.beta).copied().collect();
    let cond3 = map.extension.iter().find_map(|&(v, _)| {
        if let Some(&u) = game.successors(v).iter().find(|u| leading.contains(u)) {
            return Some(format!("{} moves to {}", name(v), name(u)));
        }
        game.predecessors(v)
            .iter()
            .find(|u| leading.contains(u))
            .map(|&u| format!("{} moves to {}", name(u), name(v)))
    });

    let cond4 = map.gamma.iter().enumerate().find_map(|(i, &g)| {
        game.successors(g)
            .iter()
            .copied()
            .filter(|&q| map.is_extension(q))
            .find_map(|q| {
                if game.owner(q) != Player::from_parity(i) {
                    Some(format!(
                        "{} escapes to {} owned by the wrong player",
                        name(g),
                        name(q)
                    ))
                } else if !game.successors(q).contains(&g) {
                    Some(format!("{} has no move back to {}", name(q), name(g)))
                } else if game.priority(q) as usize > i {
                    Some(format!("{} has priority above {}", name(q), i))
                } else {
                    None
                }
            })
    });

    CoreExtensionReport {
        k,
        conditions: [cond1, cond2, cond3, cond4].map(ConditionResult::from_witness),
        extension_size: map.extension.len(),
    }
}
