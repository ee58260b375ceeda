//! Induced subgame trees of worst-case games, the structural checks run on
//! them, and a brute-force solver used as an independent reference.

use std::fmt;

pub mod lemmas;
pub mod oracle;
pub mod tree;

pub use lemmas::{
    min_core_dominion, verify_algorithm_correspondence, verify_distinctness, verify_lemmas,
    verify_single_scc, verify_tree_invariants, verify_visited_by_solver, Distinctness,
};
pub use oracle::{oracle_is_dominion, oracle_solve, Strategy, ORACLE_LIMIT};
pub use tree::{build_induced_tree, build_induced_tree_unchecked, InducedTree, Step, TreeLabel};

/// One checked item at one tree node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub node: String,
    pub item: String,
    pub pass: bool,
    pub witness: Option<String>,
}

impl Finding {
    pub fn new(node: impl fmt::Display, item: impl Into<String>, witness: Option<String>) -> Self {
        Finding {
            node: node.to_string(),
            item: item.into(),
            pass: witness.is_none(),
            witness,
        }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "ok" } else { "FAIL" };
        write!(f, "{:<6} {:<14} {}", verdict, self.node, self.item)?;
        if let Some(w) = &self.witness {
            write!(f, ": {w}")?;
        }
        Ok(())
    }
}

/// A named batch of findings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub name: String,
    pub findings: Vec<Finding>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Report {
            name: name.into(),
            findings: Vec::new(),
        }
    }

    pub fn push(&mut self, finding: Finding) {
        self.findings.push(finding);
    }

    pub fn passed(&self) -> bool {
        self.findings.iter().all(|f| f.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| !f.pass)
    }

    pub fn merge(&mut self, other: Report) {
        self.findings.extend(other.findings);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let failed = self.failures().count();
        writeln!(
            f,
            "{}: {} checks, {} failed",
            self.name,
            self.findings.len(),
            failed
        )?;
        for finding in self.failures() {
            writeln!(f, "  {finding}")?;
        }
        Ok(())
    }
}
