//! Spanning arborescences (out-trees) of directed graphs.
//!
//! [`enumerate_arborescences`] streams every spanning arborescence rooted at a
//! given node using depth-first growth with a nondescendant bridge test. Two
//! independent oracles live in [`oracle`]: a brute-force subset enumerator and
//! an exact matrix-tree determinant count.

mod grow;
pub mod oracle;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use grow::{
    enumerate_arborescences, enumerate_arborescences_with, BridgeRecord, EnumOptions,
    EnumOutcome, Grower,
};
pub use oracle::{brute_force_arborescences, count_arborescences, DEFAULT_BRUTE_FORCE_CAP};

pub type NodeId = usize;
pub type Arc = (NodeId, NodeId);

/// Simple directed graph: no self-loops, no parallel arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    nodes: Vec<NodeId>,
    arcs: Vec<Arc>,
}

impl Digraph {
    /// Nodes and arcs are sorted; duplicates among `nodes` are merged.
    pub fn new(nodes: impl IntoIterator<Item = NodeId>, arcs: impl IntoIterator<Item = Arc>) -> Result<Self> {
        let nodes: BTreeSet<NodeId> = nodes.into_iter().collect();
        let mut seen = BTreeSet::new();
        for (u, v) in arcs {
            if u == v {
                return Err(Error::InvalidDigraph(format!("self-loop at {u}")));
            }
            if !nodes.contains(&u) || !nodes.contains(&v) {
                return Err(Error::InvalidDigraph(format!("arc ({u}, {v}) has an unknown endpoint")));
            }
            if !seen.insert((u, v)) {
                return Err(Error::InvalidDigraph(format!("parallel arc ({u}, {v})")));
            }
        }
        Ok(Self {
            nodes: nodes.into_iter().collect(),
            arcs: seen.into_iter().collect(),
        })
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    /// Arcs ascending by `(from, to)`.
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn contains_node(&self, v: NodeId) -> bool {
        self.nodes.binary_search(&v).is_ok()
    }

    pub fn contains_arc(&self, a: Arc) -> bool {
        self.arcs.binary_search(&a).is_ok()
    }

    /// Copy of the graph without the given arcs.
    pub fn without_arcs(&self, removed: &[Arc]) -> Self {
        Self {
            nodes: self.nodes.clone(),
            arcs: self.arcs.iter().copied().filter(|a| !removed.contains(a)).collect(),
        }
    }

    pub fn to_doc(&self, root: Option<NodeId>) -> DigraphDoc {
        DigraphDoc {
            nodes: self.nodes.clone(),
            root,
            arcs: self.arcs.clone(),
        }
    }
}

/// JSON form shared by the connection-graph dump and the arborescence CLI:
/// `{ "nodes": [...], "root": id, "arcs": [[from, to], ...] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DigraphDoc {
    pub nodes: Vec<NodeId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<NodeId>,
    pub arcs: Vec<Arc>,
}

impl DigraphDoc {
    pub fn to_digraph(&self) -> Result<Digraph> {
        Digraph::new(self.nodes.iter().copied(), self.arcs.iter().copied())
    }
}

/// A spanning out-tree, arcs kept ascending by `(from, to)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Arborescence {
    pub root: NodeId,
    pub arcs: Vec<Arc>,
}

impl Arborescence {
    pub fn new(root: NodeId, mut arcs: Vec<Arc>) -> Self {
        arcs.sort_unstable();
        Self { root, arcs }
    }

    /// The trivial tree of a single-node graph.
    pub fn trivial(root: NodeId) -> Self {
        Self { root, arcs: Vec::new() }
    }

    pub fn parent_of(&self, v: NodeId) -> Option<NodeId> {
        self.arcs.iter().find(|a| a.1 == v).map(|a| a.0)
    }

    pub fn children_of(&self, u: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.arcs.iter().filter(move |a| a.0 == u).map(|a| a.1)
    }
}

/// Checks that `t` is a spanning arborescence of `host` rooted at `t.root`:
/// `|V| - 1` host arcs, one in-arc per non-root node, none into the root, and
/// every node reachable from the root.
pub fn check_arborescence(host: &Digraph, t: &Arborescence) -> std::result::Result<(), String> {
    let n = host.nodes().len();
    if !host.contains_node(t.root) {
        return Err(format!("root {} not in host", t.root));
    }
    if t.arcs.len() + 1 != n {
        return Err(format!("{} arcs for {} nodes", t.arcs.len(), n));
    }
    let mut parent: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    for &(u, v) in &t.arcs {
        if !host.contains_arc((u, v)) {
            return Err(format!("arc ({u}, {v}) not in host"));
        }
        if v == t.root {
            return Err(format!("arc ({u}, {v}) enters the root"));
        }
        if parent.insert(v, u).is_some() {
            return Err(format!("node {v} has two in-arcs"));
        }
    }
    let mut reached = BTreeSet::from([t.root]);
    let mut stack = vec![t.root];
    while let Some(u) = stack.pop() {
        for c in t.children_of(u) {
            if reached.insert(c) {
                stack.push(c);
            }
        }
    }
    if reached.len() != n {
        return Err(format!("only {} of {} nodes reachable from the root", reached.len(), n));
    }
    Ok(())
}

/// `v` together with every node reachable from it along arcs of `t`.
pub fn descendants(t: &Arborescence, v: NodeId) -> BTreeSet<NodeId> {
    let mut out = BTreeSet::from([v]);
    let mut stack = vec![v];
    while let Some(u) = stack.pop() {
        for c in t.children_of(u) {
            if out.insert(c) {
                stack.push(c);
            }
        }
    }
    out
}

/// Nondescendant bridge test. `working` is the current graph with `e` (and
/// every other processed arc) already deleted; `last` is the most recently
/// emitted tree containing `e`. Returns true iff no remaining arc enters the
/// head of `e` from a nondescendant of that head in `last`.
pub fn is_bridge(working: &Digraph, e: Arc, last: &Arborescence) -> bool {
    let v = e.1;
    let desc = descendants(last, v);
    !working
        .arcs()
        .iter()
        .any(|&(u, w)| w == v && (u, w) != e && !desc.contains(&u))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_h() -> Digraph {
        Digraph::new([1, 2, 3], [(2, 1), (3, 1), (3, 2)]).unwrap()
    }

    #[test]
    fn rejects_bad_digraphs() {
        assert!(Digraph::new([1], [(1, 1)]).is_err());
        assert!(Digraph::new([1, 2], [(1, 3)]).is_err());
        assert!(Digraph::new([1, 2], [(1, 2), (1, 2)]).is_err());
    }

    #[test]
    fn bridge_examples() {
        let h = small_h();
        let last = Arborescence::new(3, vec![(3, 1), (3, 2)]);
        // (3,2) deleted, (3,1) still present: nothing else enters 2.
        assert!(is_bridge(&h.without_arcs(&[(3, 2)]), (3, 2), &last));
        // (3,1) deleted: (2,1) remains and 2 is a nondescendant of 1.
        assert!(!is_bridge(&h.without_arcs(&[(3, 1)]), (3, 1), &last));
        // Single entry into a node.
        let path = Digraph::new([1, 2], [(1, 2)]).unwrap();
        let t = Arborescence::new(1, vec![(1, 2)]);
        assert!(is_bridge(&path.without_arcs(&[(1, 2)]), (1, 2), &t));
    }

    #[test]
    fn descendant_examples() {
        let t = Arborescence::new(3, vec![(3, 2), (2, 1)]);
        assert_eq!(descendants(&t, 2), BTreeSet::from([2, 1]));
        assert_eq!(descendants(&t, 1), BTreeSet::from([1]));
        assert_eq!(descendants(&t, 3), BTreeSet::from([1, 2, 3]));
    }

    #[test]
    fn checker_catches_violations() {
        let h = small_h();
        assert!(check_arborescence(&h, &Arborescence::new(3, vec![(3, 1), (3, 2)])).is_ok());
        assert!(check_arborescence(&h, &Arborescence::new(3, vec![(3, 1)])).is_err());
        assert!(check_arborescence(&h, &Arborescence::new(3, vec![(3, 1), (2, 1)])).is_err());
        assert!(check_arborescence(&h, &Arborescence::new(3, vec![(1, 2), (3, 1)])).is_err());
    }

    #[test]
    fn digraph_doc_round_trip() {
        let doc: DigraphDoc =
            serde_json::from_str(r#"{"nodes":[1,2,3],"root":3,"arcs":[[3,2],[2,1],[3,1]]}"#).unwrap();
        let g = doc.to_digraph().unwrap();
        assert_eq!(g, small_h());
        assert_eq!(
            serde_json::to_string(&g.to_doc(Some(3))).unwrap(),
            r#"{"nodes":[1,2,3],"root":3,"arcs":[[2,1],[3,1],[3,2]]}"#
        );
    }
}
