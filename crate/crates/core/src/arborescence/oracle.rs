//! Independent checks for the enumerator.

use std::collections::BTreeSet;

use itertools::Itertools;

use super::{check_arborescence, Arborescence, Digraph, NodeId};
use crate::error::{Error, Result};

pub const DEFAULT_BRUTE_FORCE_CAP: usize = 8;

/// Every `(|V| - 1)`-subset of arcs that forms a spanning arborescence rooted
/// at `root`. Refuses graphs with more than `max_nodes` nodes.
pub fn brute_force_arborescences(
    g: &Digraph,
    root: NodeId,
    max_nodes: usize,
) -> Result<BTreeSet<Arborescence>> {
    if !g.contains_node(root) {
        return Err(Error::RootNotInGraph(root));
    }
    let n = g.nodes().len();
    if n > max_nodes {
        return Err(Error::CapExceeded(format!("{n} nodes, cap is {max_nodes}")));
    }
    Ok(g.arcs()
        .iter()
        .copied()
        .combinations(n - 1)
        .map(|arcs| Arborescence::new(root, arcs))
        .filter(|t| check_arborescence(g, t).is_ok())
        .collect())
}

/// Number of spanning arborescences rooted at `root`, by the directed
/// matrix-tree theorem: the determinant of the in-degree Laplacian with the
/// root's row and column removed, evaluated exactly with fraction-free
/// (Bareiss) elimination.
pub fn count_arborescences(g: &Digraph, root: NodeId) -> Result<u128> {
    let nodes = g.nodes();
    let r = nodes.binary_search(&root).map_err(|_| Error::RootNotInGraph(root))?;
    // Reduced index: skip the root.
    let reduced = |v: NodeId| -> Option<usize> {
        let i = nodes.binary_search(&v).expect("arc endpoint is a node");
        match i.cmp(&r) {
            std::cmp::Ordering::Less => Some(i),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(i - 1),
        }
    };
    let dim = nodes.len() - 1;
    let mut lap = vec![vec![0i128; dim]; dim];
    for &(u, v) in g.arcs() {
        let Some(vi) = reduced(v) else { continue };
        lap[vi][vi] += 1;
        if let Some(ui) = reduced(u) {
            lap[ui][vi] -= 1;
        }
    }
    let det = bareiss_determinant(lap)?;
    u128::try_from(det).map_err(|_| Error::CountOverflow)
}

fn bareiss_determinant(mut a: Vec<Vec<i128>>) -> Result<i128> {
    let n = a.len();
    if n == 0 {
        return Ok(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return Ok(0);
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j]
                    .checked_mul(a[k][k])
                    .and_then(|x| a[i][k].checked_mul(a[k][j]).and_then(|y| x.checked_sub(y)))
                    .ok_or(Error::CountOverflow)?;
                a[i][j] = num / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    Ok(sign * a[n - 1][n - 1])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Digraph {
        let arcs: Vec<_> = (1..=n)
            .flat_map(|u| (1..=n).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        Digraph::new(1..=n, arcs).unwrap()
    }

    #[test]
    fn determinant_small_matrices() {
        assert_eq!(bareiss_determinant(vec![vec![2, 1], vec![1, 3]]).unwrap(), 5);
        assert_eq!(bareiss_determinant(vec![vec![0, 1], vec![1, 0]]).unwrap(), -1);
        assert_eq!(
            bareiss_determinant(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]).unwrap(),
            -3
        );
        assert_eq!(bareiss_determinant(vec![vec![1, 2], vec![2, 4]]).unwrap(), 0);
    }

    #[test]
    fn connection_graph_counts() {
        let small = Digraph::new([1, 2, 3], [(2, 1), (3, 1), (3, 2)]).unwrap();
        assert_eq!(count_arborescences(&small, 3).unwrap(), 2);
        assert_eq!(count_arborescences(&small, 1).unwrap(), 0);
        let coupled = Digraph::new(
            [1, 2, 3, 4],
            [(1, 2), (1, 3), (2, 3), (3, 2), (4, 1), (4, 2), (4, 3)],
        )
        .unwrap();
        assert_eq!(count_arborescences(&coupled, 4).unwrap(), 8);
        assert_eq!(brute_force_arborescences(&coupled, 4, 8).unwrap().len(), 8);
    }

    #[test]
    fn cayley_counts_for_complete_digraphs() {
        for n in 1..=9usize {
            let expected = if n == 1 { 1 } else { (n as u128).pow(n as u32 - 2) };
            assert_eq!(count_arborescences(&complete(n), 1).unwrap(), expected);
        }
    }

    #[test]
    fn single_node() {
        let g = Digraph::new([5], []).unwrap();
        assert_eq!(count_arborescences(&g, 5).unwrap(), 1);
        let trees = brute_force_arborescences(&g, 5, 8).unwrap();
        assert_eq!(trees.into_iter().collect::<Vec<_>>(), vec![Arborescence::trivial(5)]);
    }

    #[test]
    fn cap_and_root_errors() {
        assert!(matches!(
            brute_force_arborescences(&complete(9), 1, 8),
            Err(Error::CapExceeded(_))
        ));
        assert!(matches!(count_arborescences(&complete(3), 4), Err(Error::RootNotInGraph(4))));
    }
}
