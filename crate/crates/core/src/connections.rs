//! Finding every connection of an exposed equation.
//!
//! A connection is a set of alternating steps `(F_i, v, F_l)` that reaches
//! every equation of the alternating reach exactly once from the exposed
//! equation. Connections correspond one-to-one to spanning arborescences of
//! the connection graph rooted at the exposed equation, so they are produced
//! by enumerating those trees and labelling each arc with its group.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::arborescence::{Arborescence, EnumOptions, EnumOutcome, Grower};
use crate::connection_graph::{build_connection_graph, ConnectionGraph};
use crate::ddae::{DdaeStructure, VarOccurrence};
use crate::error::{Error, Result};
use crate::graphs::{build_ddae_graph, build_shifting_graph, DdaeGraph, ShiftingGraph, VarGroup};
use crate::matching::{alternating_reach, compute_matching, Matching, ReachReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub from: usize,
    pub group: VarGroup,
    pub to: usize,
}

impl Triple {
    pub const fn new(from: usize, group: VarGroup, to: usize) -> Self {
        Self { from, group, to }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(F{}, {}, F{})", self.from, self.group, self.to)
    }
}

// `[i, [k, p], l]`
impl Serialize for Triple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.from, self.group, self.to).serialize(s)
    }
}

/// Set of alternating steps, kept sorted by `(to, from, group)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Connection {
    triples: Vec<Triple>,
}

impl Connection {
    pub fn new(triples: impl IntoIterator<Item = Triple>) -> Self {
        let mut triples: Vec<_> = triples.into_iter().collect();
        triples.sort_unstable_by_key(|t| (t.to, t.from, t.group));
        Self { triples }
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }
}

impl fmt::Display for Connection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, t) in self.triples.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConnectionClass {
    Explicit,
    Implicit,
}

impl fmt::Display for ConnectionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConnectionClass::Explicit => "explicit",
            ConnectionClass::Implicit => "implicit",
        })
    }
}

/// Class plus, per triple, a concrete occurrence shared by both equations
/// (`None` marks the steps that exist only through the group).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub class: ConnectionClass,
    pub witnesses: Vec<Option<VarOccurrence>>,
}

pub fn tree_to_connection(t: &Arborescence, h: &ConnectionGraph) -> Result<Connection> {
    let triples = t
        .arcs
        .iter()
        .map(|&(from, to)| {
            h.weight((from, to))
                .map(|group| Triple::new(from, group, to))
                .ok_or(Error::ArcNotInGraph(from, to))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Connection::new(triples))
}

/// Checks a candidate connection directly against the shifting graph and
/// matching: every step is a non-matching edge followed by a matching edge,
/// every reached equation is entered exactly once, nothing else is entered,
/// and every step is connected back to `exposed` without cycles.
pub fn verify_connection(
    c: &Connection,
    g: &ShiftingGraph,
    m: &Matching,
    exposed: usize,
    reach: &ReachReport,
) -> bool {
    if reach.exposed != exposed || m.is_matched(exposed) || !g.contains_eq(exposed) {
        return false;
    }
    let mut entered_by: BTreeMap<usize, usize> = BTreeMap::new();
    for t in c.triples() {
        let non_matching = g.has_edge(t.from, t.group) && m.group_of(t.from) != Some(t.group);
        let matching = m.group_of(t.to) == Some(t.group);
        let in_scope = t.from == exposed || reach.reached_eqs.contains(&t.from);
        if !non_matching || !matching || !in_scope || !reach.reached_eqs.contains(&t.to) {
            return false;
        }
        if entered_by.insert(t.to, t.from).is_some() {
            return false;
        }
    }
    if entered_by.len() != reach.reached_eqs.len() {
        return false;
    }
    if !reach.reached_eqs.is_empty() && !c.triples().iter().any(|t| t.from == exposed) {
        return false;
    }
    // Each reached equation has exactly one predecessor; following them must
    // end at the exposed equation.
    reach.reached_eqs.iter().all(|&start| {
        let mut cur = start;
        for _ in 0..=entered_by.len() {
            match entered_by.get(&cur) {
                Some(&prev) if prev == exposed => return true,
                Some(&prev) => cur = prev,
                None => return false,
            }
        }
        false
    })
}

/// A step is realized when some concrete occurrence of its group appears in
/// both equations; a connection is explicit iff all of its steps are.
pub fn classify_connection(c: &Connection, gd: &DdaeGraph) -> Classification {
    let witnesses: Vec<_> = c
        .triples()
        .iter()
        .map(|t| {
            gd.neighbors(t.from)
                .filter(|o| VarGroup::from(*o) == t.group)
                .find(|&o| gd.has_edge(t.to, o))
        })
        .collect();
    let class = if witnesses.iter().all(Option::is_some) {
        ConnectionClass::Explicit
    } else {
        ConnectionClass::Implicit
    };
    Classification { class, witnesses }
}

/// Streams every connection of `exposed`. The connection graph used is
/// returned together with the run outcome.
pub fn find_connections_with<V: FnMut(&Connection)>(
    g: &ShiftingGraph,
    m: &Matching,
    exposed: usize,
    opts: EnumOptions,
    mut visitor: V,
) -> Result<(ConnectionGraph, EnumOutcome)> {
    let reach = alternating_reach(g, m, exposed)?;
    let h = build_connection_graph(g, m, &reach)?;
    let digraph = h.to_digraph();
    let mut grower = Grower::new(&digraph, exposed)?;
    let outcome = grower.run(opts, |t| {
        let c = tree_to_connection(t, &h).expect("tree arcs come from the connection graph");
        visitor(&c);
    });
    Ok((h, outcome))
}

pub fn find_all_connections<V: FnMut(&Connection)>(
    g: &ShiftingGraph,
    m: &Matching,
    exposed: usize,
    visitor: V,
) -> Result<u64> {
    Ok(find_connections_with(g, m, exposed, EnumOptions::default(), visitor)?.1.count)
}

/// Every connection of one exposed equation of a system, with classification.
#[derive(Debug, Clone)]
pub struct ConnectionReport {
    pub exposed: usize,
    /// The alternating reach is empty; the single connection is the empty set.
    pub degenerate: bool,
    pub connections: Vec<Connection>,
    pub classes: Vec<Classification>,
    pub completed: bool,
}

/// Builds both graphs, matches equations in ascending order and collects the
/// classified connections of `exposed`.
pub fn connection_report(
    s: &DdaeStructure,
    exposed: usize,
    limit: Option<u64>,
) -> Result<ConnectionReport> {
    let g = build_shifting_graph(s);
    let gd = build_ddae_graph(s);
    let (m, _) = compute_matching(&g);
    let mut connections = Vec::new();
    let (h, outcome) = find_connections_with(
        &g,
        &m,
        exposed,
        EnumOptions { limit, deadline: None },
        |c| connections.push(c.clone()),
    )?;
    let classes = connections.iter().map(|c| classify_connection(c, &gd)).collect();
    Ok(ConnectionReport {
        exposed,
        degenerate: h.nodes().len() == 1,
        connections,
        classes,
        completed: outcome.completed,
    })
}

/// Distinct connections as a set, for comparisons in tests and tools.
pub fn connection_set(
    g: &ShiftingGraph,
    m: &Matching,
    exposed: usize,
) -> Result<BTreeSet<Connection>> {
    let mut out = BTreeSet::new();
    find_all_connections(g, m, exposed, |c| {
        out.insert(c.clone());
    })?;
    Ok(out)
}
