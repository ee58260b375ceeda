use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::families::{check_core_extension, CoreMap};
use crate::game::{ParityGame, Player, PositionSet, Subgame};
use crate::solver::solve_plain;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    L,
    R,
}

/// Address of a tree node: the word of left/right steps leading to it and
/// whether it is a hat node (entered right after a left or right step) or a
/// plain one (after the following top-alpha removal).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreeLabel {
    pub word: Vec<Step>,
    pub hat: bool,
}

impl TreeLabel {
    pub fn root() -> Self {
        TreeLabel {
            word: Vec::new(),
            hat: false,
        }
    }

    pub fn plain(word: &[Step]) -> Self {
        TreeLabel {
            word: word.to_vec(),
            hat: false,
        }
    }

    pub fn hat(word: &[Step]) -> Self {
        TreeLabel {
            word: word.to_vec(),
            hat: true,
        }
    }

    /// Parses `G` / `G^` followed by a word over `L` and `R`, e.g. `G^LR`.
    pub fn parse(s: &str) -> Option<Self> {
        let rest = s.strip_prefix('G')?;
        let (hat, rest) = match rest.strip_prefix('^') {
            Some(r) => (true, r),
            None => (false, rest),
        };
        let word = rest
            .chars()
            .map(|c| match c {
                'L' => Some(Step::L),
                'R' => Some(Step::R),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Some(TreeLabel { word, hat })
    }

    pub fn depth(&self) -> usize {
        self.word.len()
    }

    pub fn last(&self) -> Option<Step> {
        self.word.last().copied()
    }

    /// `2(k - |w|)`, negative for the deepest hat nodes.
    pub fn z(&self, k: usize) -> i64 {
        2 * (k as i64 - self.word.len() as i64)
    }

    pub fn child(&self, step: Step) -> TreeLabel {
        let mut word = self.word.clone();
        word.push(step);
        TreeLabel { word, hat: true }
    }
}

impl Ord for TreeLabel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.word.len(), &self.word, self.hat).cmp(&(other.word.len(), &other.word, other.hat))
    }
}

impl PartialOrd for TreeLabel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TreeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.hat { "G^" } else { "G" })?;
        for s in &self.word {
            f.write_str(match s {
                Step::L => "L",
                Step::R => "R",
            })?;
        }
        Ok(())
    }
}

/// The subgames a core-extension game of level `k` passes through.
#[derive(Debug, Clone)]
pub struct InducedTree<'g> {
    pub k: usize,
    pub game: &'g ParityGame,
    pub core: CoreMap,
    nodes: BTreeMap<TreeLabel, Subgame<'g>>,
}

impl<'g> InducedTree<'g> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn get(&self, label: &TreeLabel) -> Option<&Subgame<'g>> {
        self.nodes.get(label)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&TreeLabel, &Subgame<'g>)> {
        self.nodes.iter()
    }

    /// Number of nodes the tree must have: `3(2^(k+1) - 1)`.
    pub fn expected_len(k: usize) -> u64 {
        3 * ((1u64 << (k + 1)) - 1)
    }

    pub fn core_set(&self) -> PositionSet {
        PositionSet::from_positions(self.game.len(), self.core.core_positions())
    }

    /// Position of alpha `i`, if `i` is a valid gadget index.
    pub fn alpha(&self, i: i64) -> Option<usize> {
        usize::try_from(i)
            .ok()
            .and_then(|i| self.core.alpha.get(i).copied())
    }

    pub fn beta(&self, i: i64) -> Option<usize> {
        usize::try_from(i)
            .ok()
            .and_then(|i| self.core.beta.get(i).copied())
    }

    pub fn gamma(&self, i: i64) -> Option<usize> {
        usize::try_from(i)
            .ok()
            .and_then(|i| self.core.gamma.get(i).copied())
    }
}

/// Builds the tree after checking that `game` is a core extension of level `k`.
pub fn build_induced_tree(game: &ParityGame, k: usize) -> Result<InducedTree<'_>> {
    let report = check_core_extension(game, k);
    if let Some(reason) = report.first_failure() {
        return Err(Error::NotCoreExtension { k, reason });
    }
    build_induced_tree_unchecked(game, k)
}

/// Builds the tree on any game whose positions carry the level-`k` core
/// labels. Alpha seeds missing from a node are skipped, so broken games still
/// produce a tree for the checks to reject.
pub fn build_induced_tree_unchecked(game: &ParityGame, k: usize) -> Result<InducedTree<'_>> {
    let core = CoreMap::locate(game, k).map_err(|reason| Error::NotCoreExtension { k, reason })?;
    let mut tree = InducedTree {
        k,
        game,
        core,
        nodes: BTreeMap::new(),
    };
    let n = game.len();
    let mut plain = vec![TreeLabel::root()];
    tree.nodes.insert(TreeLabel::root(), game.full());

    while let Some(label) = plain.pop() {
        let g = tree.nodes[&label].clone();
        let z = label.z(k);
        let seed = |pos: Option<usize>, within: &Subgame<'_>| {
            PositionSet::from_positions(n, pos.filter(|&v| within.contains(v)))
        };

        let left = g.remove(&g.attractor(&seed(tree.alpha(z), &g), Player::Odd)?)?;
        let won = solve_plain(&left)?.w0;
        let right = g.remove(&g.attractor(&won, Player::Even)?)?;

        for (step, hat) in [(Step::L, left), (Step::R, right)] {
            let hat_label = label.child(step);
            if hat_label.depth() <= k {
                let z = hat_label.z(k);
                let next =
                    hat.remove(&hat.attractor(&seed(tree.alpha(z + 1), &hat), Player::Even)?)?;
                let plain_label = TreeLabel::plain(&hat_label.word);
                tree.nodes.insert(plain_label.clone(), next);
                plain.push(plain_label);
            }
            tree.nodes.insert(hat_label, hat);
        }
    }
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{gen_core, gen_scc, FamilyLabel};

    fn labels(t: &InducedTree<'_>, label: &str) -> Vec<String> {
        let g = t.get(&TreeLabel::parse(label).unwrap()).unwrap();
        g.alive()
            .iter()
            .map(|v| t.game.label(v).unwrap().to_string())
            .collect()
    }

    #[test]
    fn label_parse_and_display() {
        for s in ["G", "G^L", "GLR", "G^RRL"] {
            assert_eq!(TreeLabel::parse(s).unwrap().to_string(), s);
        }
        assert!(TreeLabel::parse("GX").is_none());
        assert!(TreeLabel::parse("H").is_none());
    }

    #[test]
    fn node_counts() {
        for k in 1..=4 {
            let g = gen_core(k).unwrap();
            let t = build_induced_tree(&g, k).unwrap();
            assert_eq!(t.len() as u64, InducedTree::expected_len(k));
        }
        assert_eq!(InducedTree::expected_len(1), 9);
        assert_eq!(InducedTree::expected_len(6), 381);
    }

    #[test]
    fn core_one_children_of_root() {
        let g = gen_core(1).unwrap();
        let t = build_induced_tree(&g, 1).unwrap();
        assert_eq!(t.get(&TreeLabel::parse("G^L").unwrap()).unwrap().len(), 8);
        let right = labels(&t, "G^R");
        assert_eq!(right, ["alpha_0", "beta_0", "gamma_0", "alpha_1", "beta_1"]);
    }

    #[test]
    fn scc_two_nodes_are_games() {
        let g = gen_scc(2).unwrap();
        let t = build_induced_tree(&g, 2).unwrap();
        assert_eq!(t.len(), 21);
        for (_, node) in t.nodes() {
            assert!(Subgame::new(&g, node.alive().clone()).is_ok());
        }
    }

    #[test]
    fn rejects_non_extension() {
        let g = gen_core(2).unwrap();
        let gamma = g.position_of(FamilyLabel::Gamma(1)).unwrap();
        let broken = g.with_priority(gamma, 7);
        assert!(matches!(
            build_induced_tree(&broken, 2),
            Err(Error::NotCoreExtension { k: 2, .. })
        ));
        assert!(build_induced_tree_unchecked(&broken, 2).is_ok());
    }
}
