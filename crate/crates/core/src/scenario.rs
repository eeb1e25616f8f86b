//! Synthetic shifting graphs for benchmarking.
//!
//! Every scenario has `n` equations and `n - 1` groups `v_k = (k, 0)`, with
//! `F_i` matched to `v_i` for `i < n` and `F_n` exposed and adjacent to every
//! group. The rows of `F_1..F_{n-1}` differ by kind:
//!
//! * banded: `v_{i-1}, v_i, v_{i+1}` (clipped to `1..n-1`)
//! * triangular: `v_i..v_{n-1}`
//! * complete: every group

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{ShiftingGraph, VarGroup};
use crate::matching::Matching;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    Banded,
    Triangular,
    Complete,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 3] = [Self::Banded, Self::Triangular, Self::Complete];

    pub fn name(self) -> &'static str {
        match self {
            Self::Banded => "banded",
            Self::Triangular => "triangular",
            Self::Complete => "complete",
        }
    }

    fn adjacent(self, i: usize, k: usize, n: usize) -> bool {
        if i == n {
            return true;
        }
        match self {
            Self::Banded => i.abs_diff(k) <= 1,
            Self::Triangular => k >= i,
            Self::Complete => true,
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown scenario '{s}'"))
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioInstance {
    pub kind: ScenarioKind,
    pub n: usize,
    pub graph: ShiftingGraph,
    pub matching: Matching,
    pub exposed: usize,
}

pub fn generate_scenario(kind: ScenarioKind, n: usize) -> Result<ScenarioInstance> {
    if n < 2 {
        return Err(Error::BadSize(n));
    }
    let group = |k: usize| VarGroup::new(k as u32, 0);
    let edges = (1..=n).flat_map(|i| {
        (1..n)
            .filter(move |&k| kind.adjacent(i, k, n))
            .map(move |k| (i, group(k)))
    });
    let graph = ShiftingGraph::from_edges(n, edges)?;
    let matching = Matching::from_pairs((1..n).map(|i| (i, group(i))))?;
    Ok(ScenarioInstance { kind, n, graph, matching, exposed: n })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::connection_graph::build_connection_graph;
    use crate::matching::alternating_reach;

    fn row(inst: &ScenarioInstance, i: usize) -> Vec<u32> {
        inst.graph.neighbors(i).map(|g| g.var).collect()
    }

    #[test]
    fn banded_five() {
        let s = generate_scenario(ScenarioKind::Banded, 5).unwrap();
        assert_eq!(s.graph.group_nodes().len(), 4);
        assert_eq!(row(&s, 1), vec![1, 2]);
        assert_eq!(row(&s, 2), vec![1, 2, 3]);
        assert_eq!(row(&s, 3), vec![2, 3, 4]);
        assert_eq!(row(&s, 4), vec![3, 4]);
        assert_eq!(row(&s, 5), vec![1, 2, 3, 4]);
    }

    #[test]
    fn triangular_rows() {
        let s = generate_scenario(ScenarioKind::Triangular, 5).unwrap();
        for i in 1..5 {
            assert_eq!(row(&s, i).len(), 5 - i);
        }
        assert_eq!(row(&s, 5), vec![1, 2, 3, 4]);
        let smallest = generate_scenario(ScenarioKind::Triangular, 2).unwrap();
        assert_eq!(row(&smallest, 1), vec![1]);
        assert_eq!(row(&smallest, 2), vec![1]);
    }

    #[test]
    fn complete_rows() {
        let s = generate_scenario(ScenarioKind::Complete, 5).unwrap();
        for i in 1..=5 {
            assert_eq!(row(&s, i), vec![1, 2, 3, 4]);
        }
    }

    #[test]
    fn bad_size() {
        assert!(matches!(generate_scenario(ScenarioKind::Banded, 1), Err(Error::BadSize(1))));
    }

    #[test]
    fn matching_is_valid_and_root_has_no_in_arcs() {
        for kind in ScenarioKind::ALL {
            for n in 2..8 {
                let s = generate_scenario(kind, n).unwrap();
                s.matching.check_against(&s.graph).unwrap();
                let reach = alternating_reach(&s.graph, &s.matching, n).unwrap();
                assert_eq!(reach.reached_eqs, (1..n).collect::<BTreeSet<_>>());
                let h = build_connection_graph(&s.graph, &s.matching, &reach).unwrap();
                assert!(h.arcs().all(|(_, to)| to != n));
            }
        }
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("banded".parse::<ScenarioKind>().unwrap(), ScenarioKind::Banded);
        assert!("dense".parse::<ScenarioKind>().is_err());
    }
}
