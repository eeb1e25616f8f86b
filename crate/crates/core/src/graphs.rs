//! Bipartite structural graphs: the shifting graph over variable groups and
//! the graph of the system over concrete occurrences.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::ddae::{DdaeStructure, VarOccurrence};
use crate::error::{Error, Result};

/// All derivative orders of `x_var` at one delay multiple, collapsed into one node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarGroup {
    pub var: u32,
    pub shift: i32,
}

impl VarGroup {
    pub const fn new(var: u32, shift: i32) -> Self {
        Self { var, shift }
    }
}

impl From<VarOccurrence> for VarGroup {
    fn from(o: VarOccurrence) -> Self {
        Self::new(o.var, o.shift)
    }
}

impl fmt::Display for VarGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shift == 0 {
            write!(f, "[x{}]", self.var)
        } else {
            write!(f, "[D[{}]x{}]", self.shift, self.var)
        }
    }
}

// Serialized as the pair `[k, p]`.
impl Serialize for VarGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.var, self.shift).serialize(s)
    }
}

/// Bipartite graph between equations `1..=n` and variable groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftingGraph {
    adj: Vec<BTreeSet<VarGroup>>,
    groups: BTreeSet<VarGroup>,
}

impl ShiftingGraph {
    /// Builds the graph from explicit `(equation, group)` edges. Group nodes are
    /// exactly the groups touched by some edge.
    pub fn from_edges(
        n_equations: usize,
        edges: impl IntoIterator<Item = (usize, VarGroup)>,
    ) -> Result<Self> {
        let mut adj = vec![BTreeSet::new(); n_equations];
        let mut groups = BTreeSet::new();
        for (eq, group) in edges {
            let slot = eq
                .checked_sub(1)
                .and_then(|i| adj.get_mut(i))
                .ok_or(Error::UnknownEquation(eq))?;
            slot.insert(group);
            groups.insert(group);
        }
        Ok(Self { adj, groups })
    }

    pub fn n_equations(&self) -> usize {
        self.adj.len()
    }

    pub fn eq_nodes(&self) -> impl Iterator<Item = usize> {
        1..=self.adj.len()
    }

    pub fn group_nodes(&self) -> &BTreeSet<VarGroup> {
        &self.groups
    }

    pub fn contains_eq(&self, eq: usize) -> bool {
        (1..=self.adj.len()).contains(&eq)
    }

    /// Groups adjacent to `eq`, ascending by `(k, p)`. Empty for unknown equations.
    pub fn neighbors(&self, eq: usize) -> impl Iterator<Item = VarGroup> + '_ {
        eq.checked_sub(1)
            .and_then(|i| self.adj.get(i))
            .into_iter()
            .flat_map(|s| s.iter().copied())
    }

    pub fn has_edge(&self, eq: usize, group: VarGroup) -> bool {
        eq.checked_sub(1)
            .and_then(|i| self.adj.get(i))
            .is_some_and(|s| s.contains(&group))
    }

    /// All edges ordered by `(i, k, p)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, VarGroup)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.iter().map(move |&g| (i + 1, g)))
    }

    pub fn n_edges(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum()
    }

    pub fn dump(&self) -> GraphDump {
        GraphDump {
            eq_nodes: self.eq_nodes().collect(),
            group_nodes: self.groups.iter().copied().collect(),
            edges: self.edges().collect(),
        }
    }
}

/// JSON form of the shifting graph.
#[derive(Debug, Clone, Serialize)]
pub struct GraphDump {
    pub eq_nodes: Vec<usize>,
    pub group_nodes: Vec<VarGroup>,
    pub edges: Vec<(usize, VarGroup)>,
}

pub fn build_shifting_graph(s: &DdaeStructure) -> ShiftingGraph {
    let edges = s.equations.iter().flat_map(|eq| {
        eq.occurrences
            .iter()
            .map(move |&o| (eq.index, VarGroup::from(o)))
    });
    ShiftingGraph::from_edges(s.n_equations, edges).expect("validated structure")
}

/// Bipartite graph between equations and concrete variable occurrences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DdaeGraph {
    adj: Vec<BTreeSet<VarOccurrence>>,
    vars: BTreeSet<VarOccurrence>,
}

impl DdaeGraph {
    pub fn n_equations(&self) -> usize {
        self.adj.len()
    }

    pub fn var_nodes(&self) -> &BTreeSet<VarOccurrence> {
        &self.vars
    }

    pub fn neighbors(&self, eq: usize) -> impl Iterator<Item = VarOccurrence> + '_ {
        eq.checked_sub(1)
            .and_then(|i| self.adj.get(i))
            .into_iter()
            .flat_map(|s| s.iter().copied())
    }

    pub fn has_edge(&self, eq: usize, occ: VarOccurrence) -> bool {
        eq.checked_sub(1)
            .and_then(|i| self.adj.get(i))
            .is_some_and(|s| s.contains(&occ))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, VarOccurrence)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.iter().map(move |&o| (i + 1, o)))
    }
}

pub fn build_ddae_graph(s: &DdaeStructure) -> DdaeGraph {
    let mut adj = vec![BTreeSet::new(); s.n_equations];
    let mut vars = BTreeSet::new();
    for eq in &s.equations {
        for &o in &eq.occurrences {
            adj[eq.index - 1].insert(o);
            vars.insert(o);
        }
    }
    DdaeGraph { adj, vars }
}

/// Groups that may be matched: shift `p >= 0` and no group of the same
/// variable with a larger shift.
pub fn highest_shift_groups(g: &ShiftingGraph) -> BTreeSet<VarGroup> {
    // Groups are ordered by (var, shift), so the last group of each var has the top shift.
    let mut out = BTreeSet::new();
    let mut iter = g.group_nodes().iter().peekable();
    while let Some(&grp) = iter.next() {
        let is_last_of_var = !iter.peek().is_some_and(|next| next.var == grp.var);
        if is_last_of_var && grp.shift >= 0 {
            out.insert(grp);
        }
    }
    out
}
