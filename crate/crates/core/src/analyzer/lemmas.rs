//! Finite-instance checks of the structural properties of induced trees.

use std::collections::HashSet;

use crate::analyzer::tree::{InducedTree, Step, TreeLabel};
use crate::analyzer::{Finding, Report};
use crate::error::Result;
use crate::families::FamilyLabel;
use crate::game::{Player, PositionSet, Subgame};
use crate::solver::{
    left_step, right_step, scc_split, solve_full, solve_plain, DominionSearch, SolverConfig,
};

fn names(t: &InducedTree<'_>, set: &PositionSet) -> String {
    let items: Vec<String> = set
        .iter()
        .map(|v| match t.game.label(v) {
            Some(l) => l.to_string(),
            None => v.to_string(),
        })
        .collect();
    format!("{{{}}}", items.join(", "))
}

/// Membership of indexed alphas (or gammas) against an expected predicate;
/// reports the first mismatch.
fn membership(
    g: &Subgame<'_>,
    positions: &[usize],
    kind: &str,
    expected: impl Fn(i64) -> Option<bool>,
) -> Option<String> {
    positions.iter().enumerate().find_map(|(j, &v)| {
        let want = expected(j as i64)?;
        let got = g.contains(v);
        (want != got).then(|| {
            format!(
                "{kind}_{j} {} but should {}",
                if got { "present" } else { "absent" },
                if want { "be present" } else { "be absent" }
            )
        })
    })
}

fn check_subgame(g: &Subgame<'_>) -> Option<String> {
    Subgame::new(g.master(), g.alive().clone())
        .err()
        .map(|e| e.to_string())
}

/// Per-node invariants: every node is a game, alphas present exactly on
/// `[0, z]` (plain) or `[0, z + 1]` (hat), the listed gammas present, and on
/// trailing-`L` hat nodes the winning core positions of Even are exactly the
/// betas and gammas with index `z + 2j`, `j` in `1..=|w|`.
pub fn verify_tree_invariants(t: &InducedTree<'_>) -> Result<Report> {
    let mut report = Report::new("tree invariants");
    let k = t.k;
    for (label, g) in t.nodes() {
        let z = label.z(k);
        let trailing_l = label.last() == Some(Step::L);
        if !label.hat {
            report.push(Finding::new(label, "is a subgame", check_subgame(g)));
            report.push(Finding::new(
                label,
                "alphas exactly on [0, z]",
                membership(g, &t.core.alpha, "alpha", |j| Some(j <= z)),
            ));
            let gamma_need = |j: i64| (j <= z || (trailing_l && j == z + 1)).then_some(true);
            report.push(Finding::new(
                label,
                "gammas required",
                membership(g, &t.core.gamma, "gamma", gamma_need),
            ));
            continue;
        }
        report.push(Finding::new(label, "is a subgame", check_subgame(g)));
        report.push(Finding::new(
            label,
            "alphas exactly on [0, z+1]",
            membership(g, &t.core.alpha, "alpha", |j| Some(j <= z + 1)),
        ));
        let extra = if label.depth() <= k { z + 1 } else { 0 };
        let gamma_need = |j: i64| (j <= z || (trailing_l && j == extra)).then_some(true);
        report.push(Finding::new(
            label,
            "gammas required",
            membership(g, &t.core.gamma, "gamma", gamma_need),
        ));
        if trailing_l {
            let won = solve_plain(g)?.w0.intersection(&t.core_set());
            let mut expected = PositionSet::empty(t.game.len());
            for j in 1..=label.depth() as i64 {
                for v in [t.beta(z + 2 * j), t.gamma(z + 2 * j)]
                    .into_iter()
                    .flatten()
                {
                    if g.contains(v) {
                        expected.insert(v);
                    }
                }
            }
            let witness = (won != expected).then(|| {
                format!(
                    "core part of W0 is {} but expected {}",
                    names(t, &won),
                    names(t, &expected)
                )
            });
            report.push(Finding::new(label, "core winning region of Even", witness));
        }
    }
    Ok(report)
}

fn compare(
    t: &InducedTree<'_>,
    got: &Subgame<'_>,
    expected: Option<&Subgame<'_>>,
) -> Option<String> {
    match expected {
        None => Some("expected node missing from the tree".into()),
        Some(e) if e.alive() == got.alive() => None,
        Some(e) => Some(format!(
            "derived {} differs from stored {}",
            names(t, got.alive()),
            names(t, e.alive())
        )),
    }
}

/// Re-derives every child through the solver's own left and right steps.
pub fn verify_algorithm_correspondence(t: &InducedTree<'_>) -> Result<Report> {
    let mut report = Report::new("algorithm correspondence");
    for (label, g) in t.nodes() {
        if label.hat {
            if label.depth() > t.k {
                continue;
            }
            let (sub, player, _) = left_step(g)?;
            let mut witness = compare(t, &sub, t.get(&TreeLabel::plain(&label.word)));
            if player != Player::Even {
                witness.get_or_insert_with(|| format!("left step favours {player}, expected 0"));
            }
            report.push(Finding::new(label, "left step of hat node", witness));
            continue;
        }
        let left_label = label.child(Step::L);
        let (left, player, _) = left_step(g)?;
        let mut witness = compare(t, &left, t.get(&left_label));
        if player != Player::Odd {
            witness.get_or_insert_with(|| format!("left step favours {player}, expected 1"));
        }
        report.push(Finding::new(label, "left step", witness));

        let Some(stored_left) = t.get(&left_label) else {
            continue;
        };
        let won = solve_plain(stored_left)?.w0;
        let right = right_step(g, &won, Player::Even)?;
        let witness = compare(t, &right, t.get(&label.child(Step::R)));
        report.push(Finding::new(label, "right step", witness));
    }
    Ok(report)
}

/// Distinct alive-sets of a tree plus the gamma separation between the left
/// and right subtree of every branching point.
#[derive(Debug, Clone)]
pub struct Distinctness {
    pub distinct_count: usize,
    pub node_count: usize,
    pub witness_failures: Vec<Finding>,
}

impl Distinctness {
    pub fn passed(&self, k: usize) -> bool {
        self.witness_failures.is_empty()
            && self.distinct_count == self.node_count
            && self.distinct_count as u64 == InducedTree::expected_len(k)
    }
}

/// For a node `w X v` (`X` the branch at depth `|w|`), the separating gamma is
/// `gamma_z` with `z = 2(k - |w|) - 1`, or `gamma_0` when `|w| = k` (then `v`
/// is empty and the node is a leaf); it must be present iff `X = L`.
pub fn verify_distinctness(t: &InducedTree<'_>) -> Distinctness {
    let k = t.k;
    let distinct: HashSet<&PositionSet> = t.nodes().map(|(_, g)| g.alive()).collect();
    let mut witness_failures = Vec::new();
    for (label, g) in t.nodes() {
        for (m, &branch) in label.word.iter().enumerate() {
            let index = if m < k {
                2 * (k as i64 - m as i64) - 1
            } else {
                0
            };
            let Some(gamma) = t.gamma(index) else {
                continue;
            };
            let want = branch == Step::L;
            if g.contains(gamma) != want {
                let split: String = label.word[..m]
                    .iter()
                    .map(|s| if *s == Step::L { 'L' } else { 'R' })
                    .collect();
                witness_failures.push(Finding::new(
                    label,
                    format!("branch after '{split}'"),
                    Some(format!(
                        "gamma_{index} should be {}",
                        if want { "present" } else { "absent" }
                    )),
                ));
            }
        }
    }
    Distinctness {
        distinct_count: distinct.len(),
        node_count: t.len(),
        witness_failures,
    }
}

/// Every node forms one strongly connected component, and each connector is
/// present exactly when both of its gammas are.
pub fn verify_single_scc(t: &InducedTree<'_>) -> Report {
    let mut report = Report::new("single scc");
    for (label, g) in t.nodes() {
        let comps = scc_split(g).len();
        let witness = (comps != 1).then(|| format!("{comps} components"));
        report.push(Finding::new(label, "single scc", witness));

        let mismatch = t.core.extension.iter().find_map(|&(v, l)| {
            let Some(FamilyLabel::Delta(i, j, _)) = l else {
                return None;
            };
            let ends = g.contains(t.core.gamma[i]) && g.contains(t.core.gamma[j]);
            (ends != g.contains(v)).then(|| {
                format!(
                    "{} {} while gamma_{i}, gamma_{j} {}",
                    l.expect("labelled"),
                    if g.contains(v) { "present" } else { "absent" },
                    if ends {
                        "both present"
                    } else {
                        "not both present"
                    }
                )
            })
        });
        report.push(Finding::new(label, "connector pairing", mismatch));
    }
    report
}

/// Size of the smallest dominion (either player) meeting `core`, or `None`
/// if there is none of size at most `size_cap`.
pub fn min_core_dominion(
    g: &Subgame<'_>,
    core: &PositionSet,
    size_cap: usize,
) -> Result<Option<usize>> {
    let found = DominionSearch::new(g).meeting(core).smallest(size_cap)?;
    Ok(found.map(|(d, _)| d.len()))
}

/// The plain solver, run on the whole game, enters every tree node.
pub fn verify_visited_by_solver(t: &InducedTree<'_>) -> Result<Report> {
    let mut report = Report::new("visited by solver");
    let solution = solve_full(&t.game.full(), &SolverConfig::plain())?;
    for (label, g) in t.nodes() {
        let witness = (!solution.visited.contains(g.alive())).then(|| "never entered".to_string());
        report.push(Finding::new(label, "entered by plain solver", witness));
    }
    Ok(report)
}

/// Invariants, correspondence and gamma separation in one report.
pub fn verify_lemmas(t: &InducedTree<'_>) -> Result<Report> {
    let mut report = Report::new(format!("structural checks, k = {}", t.k));
    report.merge(verify_tree_invariants(t)?);
    report.merge(verify_algorithm_correspondence(t)?);
    let d = verify_distinctness(t);
    report.push(Finding::new(
        "tree",
        "pairwise distinct nodes",
        (d.distinct_count != d.node_count
            || d.distinct_count as u64 != InducedTree::expected_len(t.k))
        .then(|| {
            format!(
                "{} distinct out of {} nodes, expected {}",
                d.distinct_count,
                d.node_count,
                InducedTree::expected_len(t.k)
            )
        }),
    ));
    report.findings.extend(d.witness_failures);
    Ok(report)
}
