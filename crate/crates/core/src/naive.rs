//! Baseline that does not use the tree reformulation: depth-first search
//! over ordered sequences of alternating steps, then deduplication and
//! filtering.
//!
//! Each sequence assigns one incoming step to every reached equation, in
//! every possible order. The same set is therefore generated once per
//! ordering, and sets that are not connected to the exposed equation (or
//! contain cycles) are generated too; both are removed afterwards.

use std::collections::{BTreeSet, HashSet};
use std::time::Instant;

use crate::connections::{verify_connection, Connection, Triple};
use crate::error::{Error, Result};
use crate::graphs::ShiftingGraph;
use crate::matching::{alternating_reach, Matching, ReachReport};

#[derive(Debug, Clone, Copy, Default)]
pub struct NaiveLimits {
    /// Maximum number of DFS steps before giving up with `LimitExceeded`.
    pub max_steps: Option<u64>,
    pub deadline: Option<Instant>,
}

struct Search<'a> {
    steps: Vec<Triple>,
    covered: Vec<bool>,
    target: usize,
    current: Vec<Triple>,
    seen: HashSet<Connection>,
    work: u64,
    limits: &'a NaiveLimits,
}

impl Search<'_> {
    fn dfs(&mut self) -> Result<()> {
        self.work += 1;
        if self.limits.max_steps.is_some_and(|cap| self.work > cap) {
            return Err(Error::LimitExceeded(self.work - 1));
        }
        if self.work & 0xfff == 0 && self.limits.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(Error::LimitExceeded(self.work));
        }
        if self.current.len() == self.target {
            self.seen.insert(Connection::new(self.current.iter().copied()));
            return Ok(());
        }
        for idx in 0..self.steps.len() {
            let step = self.steps[idx];
            if self.covered[step.to] {
                continue;
            }
            self.covered[step.to] = true;
            self.current.push(step);
            let r = self.dfs();
            self.current.pop();
            self.covered[step.to] = false;
            r?;
        }
        Ok(())
    }
}

/// All connections of `exposed`, computed the slow way. Returns the same set
/// as the tree-based enumeration.
pub fn naive_all_connections(
    g: &ShiftingGraph,
    m: &Matching,
    exposed: usize,
    limits: &NaiveLimits,
) -> Result<BTreeSet<Connection>> {
    let reach = alternating_reach(g, m, exposed)?;
    let steps = candidate_steps(g, m, &reach);
    let mut search = Search {
        steps,
        covered: vec![false; g.n_equations() + 1],
        target: reach.reached_eqs.len(),
        current: Vec::with_capacity(reach.reached_eqs.len()),
        seen: HashSet::new(),
        work: 0,
        limits,
    };
    search.dfs()?;
    Ok(search
        .seen
        .into_iter()
        .filter(|c| verify_connection(c, g, m, exposed, &reach))
        .collect())
}

/// Every alternating step `(F_i, v, F_l)` with `F_i` in scope, `v` adjacent to
/// `F_i` through a non-matching edge and matched to the reached `F_l`.
fn candidate_steps(g: &ShiftingGraph, m: &Matching, reach: &ReachReport) -> Vec<Triple> {
    let mut out = Vec::new();
    let scope = std::iter::once(reach.exposed).chain(reach.reached_eqs.iter().copied());
    for from in scope {
        for group in g.neighbors(from) {
            if m.group_of(from) == Some(group) {
                continue;
            }
            if let Some(to) = m.eq_of(group).filter(|to| reach.reached_eqs.contains(to)) {
                out.push(Triple::new(from, group, to));
            }
        }
    }
    out
}
