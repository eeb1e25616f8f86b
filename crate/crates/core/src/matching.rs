//! Augmenting-path matching of equations to highest-shift variable groups
//! and the alternating-path reach of exposed equations.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{highest_shift_groups, ShiftingGraph, VarGroup};

/// Injective assignment of equations to variable groups.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Matching {
    by_eq: BTreeMap<usize, VarGroup>,
    by_group: BTreeMap<VarGroup, usize>,
}

impl Matching {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a matching from explicit pairs, rejecting non-injective input.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, VarGroup)>) -> Result<Self> {
        let mut m = Self::new();
        for (eq, group) in pairs {
            if m.by_eq.contains_key(&eq) {
                return Err(Error::InvalidMatching(format!("equation {eq} matched twice")));
            }
            if let Some(other) = m.by_group.get(&group) {
                return Err(Error::InvalidMatching(format!(
                    "group {group} matched to both {other} and {eq}"
                )));
            }
            m.assign(eq, group);
        }
        Ok(m)
    }

    /// Checks that every pair is a shifting-graph edge to a matchable group.
    pub fn check_against(&self, g: &ShiftingGraph) -> Result<()> {
        let matchable = highest_shift_groups(g);
        for (&eq, &group) in &self.by_eq {
            if !g.has_edge(eq, group) {
                return Err(Error::InvalidMatching(format!(
                    "pair ({eq}, {group}) is not an edge"
                )));
            }
            if !matchable.contains(&group) {
                return Err(Error::InvalidMatching(format!(
                    "group {group} is not of highest shift"
                )));
            }
        }
        Ok(())
    }

    fn assign(&mut self, eq: usize, group: VarGroup) {
        if let Some(old) = self.by_eq.insert(eq, group) {
            self.by_group.remove(&old);
        }
        if let Some(old_eq) = self.by_group.insert(group, eq) {
            if old_eq != eq {
                self.by_eq.remove(&old_eq);
            }
        }
    }

    pub fn group_of(&self, eq: usize) -> Option<VarGroup> {
        self.by_eq.get(&eq).copied()
    }

    pub fn eq_of(&self, group: VarGroup) -> Option<usize> {
        self.by_group.get(&group).copied()
    }

    pub fn is_matched(&self, eq: usize) -> bool {
        self.by_eq.contains_key(&eq)
    }

    pub fn len(&self) -> usize {
        self.by_eq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_eq.is_empty()
    }

    /// Pairs ascending by equation.
    pub fn iter(&self) -> impl Iterator<Item = (usize, VarGroup)> + '_ {
        self.by_eq.iter().map(|(&e, &g)| (e, g))
    }
}

/// Equations (and the matched groups through which they were reached)
/// connected to an exposed equation by alternating paths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReachReport {
    #[serde(rename = "eq")]
    pub exposed: usize,
    #[serde(rename = "reach")]
    pub reached_eqs: BTreeSet<usize>,
    #[serde(skip)]
    pub reached_groups: BTreeSet<VarGroup>,
}

impl ReachReport {
    fn empty(exposed: usize) -> Self {
        Self {
            exposed,
            reached_eqs: BTreeSet::new(),
            reached_groups: BTreeSet::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AugmentOutcome {
    pub success: bool,
    pub matching: Matching,
    /// Nodes coloured by the search. On failure this is exactly the
    /// alternating reach of the start equation.
    pub report: ReachReport,
}

struct Augmenter<'a> {
    g: &'a ShiftingGraph,
    matchable: &'a BTreeSet<VarGroup>,
    m: Matching,
    colored_eqs: BTreeSet<usize>,
    colored_groups: BTreeSet<VarGroup>,
}

impl Augmenter<'_> {
    // Pantelides' Augmentpath: first look for a free matchable neighbour, then
    // recurse through uncoloured matched neighbours.
    fn search(&mut self, eq: usize) -> bool {
        self.colored_eqs.insert(eq);
        let g = self.g;
        for group in g.neighbors(eq) {
            if self.matchable.contains(&group) && self.m.eq_of(group).is_none() {
                self.m.assign(eq, group);
                return true;
            }
        }
        for group in g.neighbors(eq) {
            if !self.matchable.contains(&group) || self.colored_groups.contains(&group) {
                continue;
            }
            self.colored_groups.insert(group);
            let Some(owner) = self.m.eq_of(group) else { continue };
            if self.colored_eqs.contains(&owner) {
                continue;
            }
            if self.search(owner) {
                self.m.assign(eq, group);
                return true;
            }
        }
        false
    }
}

/// Tries to extend `m` by an augmenting path starting at the unmatched equation `eq`.
pub fn augment_path(
    g: &ShiftingGraph,
    m: &Matching,
    eq: usize,
    matchable: &BTreeSet<VarGroup>,
) -> Result<AugmentOutcome> {
    if !g.contains_eq(eq) {
        return Err(Error::UnknownEquation(eq));
    }
    if m.is_matched(eq) {
        return Err(Error::InvalidMatching(format!("equation {eq} is already matched")));
    }
    let mut aug = Augmenter {
        g,
        matchable,
        m: m.clone(),
        colored_eqs: BTreeSet::new(),
        colored_groups: BTreeSet::new(),
    };
    let success = aug.search(eq);
    aug.colored_eqs.remove(&eq);
    let report = ReachReport {
        exposed: eq,
        reached_eqs: aug.colored_eqs,
        reached_groups: aug.colored_groups,
    };
    let matching = if success { aug.m } else { m.clone() };
    Ok(AugmentOutcome { success, matching, report })
}

/// Processes equations in ascending order, matching each one if an augmenting
/// path exists and recording a reach report for every exposed equation.
pub fn compute_matching(g: &ShiftingGraph) -> (Matching, Vec<ReachReport>) {
    let matchable = highest_shift_groups(g);
    let mut m = Matching::new();
    let mut exposed = Vec::new();
    for eq in g.eq_nodes() {
        let out = augment_path(g, &m, eq, &matchable).expect("unmatched equation of g");
        if out.success {
            m = out.matching;
        } else {
            exposed.push(out.report);
        }
    }
    (m, exposed)
}

/// Equations reachable from the unmatched `eq` by alternating paths that
/// start with a non-matching edge.
pub fn alternating_reach(g: &ShiftingGraph, m: &Matching, eq: usize) -> Result<ReachReport> {
    if !g.contains_eq(eq) {
        return Err(Error::UnknownEquation(eq));
    }
    if m.is_matched(eq) {
        return Err(Error::NotExposed(eq));
    }
    let mut report = ReachReport::empty(eq);
    let mut stack = vec![eq];
    while let Some(cur) = stack.pop() {
        let own = m.group_of(cur);
        for group in g.neighbors(cur) {
            if Some(group) == own {
                continue;
            }
            let Some(next) = m.eq_of(group) else { continue };
            if next == eq || report.reached_eqs.contains(&next) {
                continue;
            }
            report.reached_groups.insert(group);
            report.reached_eqs.insert(next);
            stack.push(next);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{coupled_system, small_system};
    use crate::graphs::build_shifting_graph;

    fn g(k: u32, p: i32) -> VarGroup {
        VarGroup::new(k, p)
    }

    #[test]
    fn small_system_matching() {
        let sg = build_shifting_graph(&small_system());
        let (m, exposed) = compute_matching(&sg);
        assert_eq!(m.iter().collect::<Vec<_>>(), vec![(1, g(1, 0)), (2, g(2, 0))]);
        assert_eq!(exposed.len(), 1);
        assert_eq!(exposed[0].exposed, 3);
        assert_eq!(exposed[0].reached_eqs, BTreeSet::from([1, 2]));
    }

    #[test]
    fn coupled_system_matching() {
        let sg = build_shifting_graph(&coupled_system());
        let (m, exposed) = compute_matching(&sg);
        assert_eq!(
            m.iter().collect::<Vec<_>>(),
            vec![(1, g(1, 0)), (2, g(2, 0)), (3, g(3, 0))]
        );
        assert_eq!(exposed.len(), 1);
        assert_eq!(exposed[0].exposed, 4);
        assert_eq!(exposed[0].reached_eqs, BTreeSet::from([1, 2, 3]));
        assert_eq!(exposed[0].reached_groups, BTreeSet::from([g(1, 0), g(2, 0), g(3, 0)]));
    }

    #[test]
    fn augment_fails_for_exposed() {
        let sg = build_shifting_graph(&small_system());
        let m = Matching::from_pairs([(1, g(1, 0)), (2, g(2, 0))]).unwrap();
        let out = augment_path(&sg, &m, 3, &highest_shift_groups(&sg)).unwrap();
        assert!(!out.success);
        assert_eq!(out.matching, m);
        assert_eq!(out.report.reached_eqs, BTreeSet::from([1, 2]));
    }

    #[test]
    fn augment_from_empty() {
        let sg = build_shifting_graph(&small_system());
        let out = augment_path(&sg, &Matching::new(), 1, &highest_shift_groups(&sg)).unwrap();
        assert!(out.success);
        assert_eq!(out.matching.iter().collect::<Vec<_>>(), vec![(1, g(1, 0))]);
    }

    #[test]
    fn augment_isolated_equation() {
        let sg = ShiftingGraph::from_edges(2, [(2, g(1, 0))]).unwrap();
        let out = augment_path(&sg, &Matching::new(), 1, &highest_shift_groups(&sg)).unwrap();
        assert!(!out.success);
        assert!(out.report.reached_eqs.is_empty());
        let r = alternating_reach(&sg, &Matching::new(), 1).unwrap();
        assert!(r.reached_eqs.is_empty());
    }

    #[test]
    fn augment_reroutes() {
        // F1-{a,b}, F2-{a}: F1 takes a first, F2 pushes it onto b.
        let a = g(1, 0);
        let b = g(2, 0);
        let sg = ShiftingGraph::from_edges(2, [(1, a), (1, b), (2, a)]).unwrap();
        let (m, exposed) = compute_matching(&sg);
        assert!(exposed.is_empty());
        assert_eq!(m.iter().collect::<Vec<_>>(), vec![(1, b), (2, a)]);
    }

    #[test]
    fn perfect_single() {
        let sg = ShiftingGraph::from_edges(1, [(1, g(1, 0))]).unwrap();
        let (m, exposed) = compute_matching(&sg);
        assert_eq!(m.len(), 1);
        assert!(exposed.is_empty());
    }

    #[test]
    fn reach_examples() {
        let sg = build_shifting_graph(&small_system());
        let (m, _) = compute_matching(&sg);
        assert_eq!(alternating_reach(&sg, &m, 3).unwrap().reached_eqs, BTreeSet::from([1, 2]));
        assert!(matches!(alternating_reach(&sg, &m, 1), Err(Error::NotExposed(1))));

        let sg = build_shifting_graph(&coupled_system());
        let (m, _) = compute_matching(&sg);
        assert_eq!(
            alternating_reach(&sg, &m, 4).unwrap().reached_eqs,
            BTreeSet::from([1, 2, 3])
        );
    }

    #[test]
    fn from_pairs_rejects_shared_group() {
        assert!(Matching::from_pairs([(1, g(1, 0)), (2, g(1, 0))]).is_err());
    }

    #[test]
    fn check_against_rejects_low_shift() {
        let sg = build_shifting_graph(&small_system());
        let m = Matching::from_pairs([(3, g(3, -1))]).unwrap();
        assert!(m.check_against(&sg).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn graph() -> impl Strategy<Value = ShiftingGraph> {
            (1usize..7, 1u32..6).prop_flat_map(|(n_eq, n_var)| {
                let edge = (1..=n_eq, 1..=n_var, -1i32..2).prop_map(|(i, k, p)| (i, g(k, p)));
                proptest::collection::vec(edge, 0..20)
                    .prop_map(move |edges| ShiftingGraph::from_edges(n_eq, edges).unwrap())
            })
        }

        proptest! {
            #[test]
            fn matching_invariants(sg in graph()) {
                let (m, exposed) = compute_matching(&sg);
                m.check_against(&sg).unwrap();
                prop_assert_eq!(m.len() + exposed.len(), sg.n_equations());
                let matchable = highest_shift_groups(&sg);
                for r in &exposed {
                    let again = augment_path(&sg, &m, r.exposed, &matchable).unwrap();
                    prop_assert!(!again.success);
                    let reach = alternating_reach(&sg, &m, r.exposed).unwrap();
                    prop_assert_eq!(&reach.reached_eqs, &again.report.reached_eqs);
                    prop_assert!(!reach.reached_eqs.contains(&r.exposed));
                    for grp in &reach.reached_groups {
                        let owner = m.eq_of(*grp);
                        prop_assert!(owner.is_some_and(|e| reach.reached_eqs.contains(&e)));
                    }
                    for e in &reach.reached_eqs {
                        prop_assert!(m.is_matched(*e));
                    }
                }
            }

            #[test]
            fn reach_is_monotone_in_edges(
                sg in graph(),
                extra in (1usize..7, 1u32..6, -1i32..2),
            ) {
                let (m, exposed) = compute_matching(&sg);
                let (i, k, p) = extra;
                prop_assume!(i <= sg.n_equations());
                let bigger = ShiftingGraph::from_edges(
                    sg.n_equations(),
                    sg.edges().chain([(i, g(k, p))]),
                ).unwrap();
                for r in &exposed {
                    let before = alternating_reach(&sg, &m, r.exposed).unwrap();
                    let after = alternating_reach(&bigger, &m, r.exposed).unwrap();
                    prop_assert!(before.reached_eqs.is_subset(&after.reached_eqs));
                }
            }
        }
    }
}
