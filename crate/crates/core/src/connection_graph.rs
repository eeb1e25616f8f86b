use std::collections::{BTreeMap, BTreeSet};

use crate::arborescence::{Arc, Digraph, DigraphDoc};
use crate::error::{Error, Result};
use crate::graphs::{ShiftingGraph, VarGroup};
use crate::matching::{Matching, ReachReport};

/// Directed graph on `C(F_j) ∪ {F_j}` with an arc `(i, l)` for every
/// alternating step `F_i - v - F_l` where `v` is matched to `F_l`. Each arc
/// carries the connecting group as its weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionGraph {
    root: usize,
    nodes: BTreeSet<usize>,
    arcs: BTreeMap<Arc, VarGroup>,
}

impl ConnectionGraph {
    pub fn root(&self) -> usize {
        self.root
    }

    pub fn nodes(&self) -> &BTreeSet<usize> {
        &self.nodes
    }

    /// Arcs ascending by `(from, to)`.
    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.arcs.keys().copied()
    }

    pub fn n_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn weight(&self, arc: Arc) -> Option<VarGroup> {
        self.arcs.get(&arc).copied()
    }

    pub fn weighted_arcs(&self) -> impl Iterator<Item = (Arc, VarGroup)> + '_ {
        self.arcs.iter().map(|(&a, &g)| (a, g))
    }

    pub fn to_digraph(&self) -> Digraph {
        Digraph::new(self.nodes.iter().copied(), self.arcs())
            .expect("connection graph has no self-loops")
    }

    pub fn to_doc(&self) -> DigraphDoc {
        DigraphDoc {
            nodes: self.nodes.iter().copied().collect(),
            root: Some(self.root),
            arcs: self.arcs().collect(),
        }
    }
}

pub fn build_connection_graph(
    g: &ShiftingGraph,
    m: &Matching,
    report: &ReachReport,
) -> Result<ConnectionGraph> {
    let root = report.exposed;
    if !g.contains_eq(root) {
        return Err(Error::InconsistentReport(format!("exposed equation {root} not in graph")));
    }
    if m.is_matched(root) {
        return Err(Error::InconsistentReport(format!("exposed equation {root} is matched")));
    }
    let mut heads = BTreeMap::new();
    for &eq in &report.reached_eqs {
        if !g.contains_eq(eq) {
            return Err(Error::InconsistentReport(format!("equation {eq} not in graph")));
        }
        let group = m.group_of(eq).ok_or_else(|| {
            Error::InconsistentReport(format!("reached equation {eq} is unmatched"))
        })?;
        heads.insert(group, eq);
    }

    let mut nodes = report.reached_eqs.clone();
    nodes.insert(root);
    let mut arcs = BTreeMap::new();
    for &from in &nodes {
        let own = m.group_of(from);
        for group in g.neighbors(from) {
            if Some(group) == own {
                continue;
            }
            if let Some(&to) = heads.get(&group) {
                arcs.insert((from, to), group);
            }
        }
    }
    Ok(ConnectionGraph { root, nodes, arcs })
}
