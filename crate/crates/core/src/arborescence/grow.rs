//! Depth-first growth enumeration of spanning arborescences with a
//! nondescendant bridge test.
//!
//! The tree `T` grows from the root by popping arcs off the frontier stack
//! `F` (arcs from `T` to non-`T` nodes). After all trees containing `T + e`
//! have been produced, `e` is deleted from the working graph and pushed on the
//! processed stack `FF`; the loop stops once `e` turns out to be a bridge.
//! Deleted arcs are put back on `F` before the call returns.
//!
//! `F` is a doubly linked list over arc ids. Arcs removed from its interior
//! keep their own links, so they can be spliced back into exactly the same
//! position as long as restorations happen in reverse removal order. All
//! scratch space is allocated once up front; a run in count-only mode does not
//! allocate per tree.

use std::time::Instant;

use super::{Arborescence, Arc, Digraph, NodeId};
use crate::error::{Error, Result};

const NIL: u32 = u32::MAX;

/// How often (in emitted trees) the deadline is polled.
const DEADLINE_POLL_MASK: u64 = 0x3ff;

#[derive(Debug, Clone, Copy, Default)]
pub struct EnumOptions {
    /// Stop before emitting tree number `limit + 1`.
    pub limit: Option<u64>,
    pub deadline: Option<Instant>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumOutcome {
    pub count: u64,
    /// False if the run was cut short by the limit or the deadline; `count`
    /// is then a lower bound.
    pub completed: bool,
}

/// One bridge test as it happened during a run (recorded only on request).
#[derive(Debug, Clone)]
pub struct BridgeRecord {
    pub arc: Arc,
    /// Arcs of `T` when the test ran (without `arc`).
    pub tree: Vec<Arc>,
    /// Arcs of the working graph after deleting `arc`.
    pub working: Vec<Arc>,
    pub last: Arborescence,
    pub is_bridge: bool,
}

/// Reusable enumeration state for one graph and root.
pub struct Grower<'g> {
    graph: &'g Digraph,
    root: u32,
    rooted: bool,
    tail: Vec<u32>,
    head: Vec<u32>,
    // Out-arcs sorted by descending head so that they pop in ascending order.
    out_arcs: Vec<Vec<u32>>,
    in_arcs: Vec<Vec<u32>>,
    present: Vec<bool>,
    // Frontier list; index `n_arcs` is the sentinel, `prev[sentinel]` is the top.
    prev: Vec<u32>,
    next: Vec<u32>,
    in_frontier: Vec<bool>,
    in_tree: Vec<bool>,
    parent_arc: Vec<u32>,
    tree_size: usize,
    last_parent: Vec<u32>,
    removed: Vec<u32>,
    processed: Vec<u32>,
    scratch: Arborescence,
    count: u64,
    opts: EnumOptions,
    stopped: bool,
    bridge_log: Option<Vec<BridgeRecord>>,
}

impl<'g> Grower<'g> {
    pub fn new(graph: &'g Digraph, root: NodeId) -> Result<Self> {
        let nodes = graph.nodes();
        let root_idx = nodes.binary_search(&root).map_err(|_| Error::RootNotInGraph(root))?;
        let n = nodes.len();
        let m = graph.arcs().len();
        assert!(m < NIL as usize && n < NIL as usize, "graph too large");
        let index = |v: NodeId| nodes.binary_search(&v).expect("arc endpoint is a node") as u32;

        let mut tail = Vec::with_capacity(m);
        let mut head = Vec::with_capacity(m);
        let mut out_arcs = vec![Vec::new(); n];
        let mut in_arcs = vec![Vec::new(); n];
        for (a, &(u, v)) in graph.arcs().iter().enumerate() {
            let (u, v) = (index(u), index(v));
            tail.push(u);
            head.push(v);
            out_arcs[u as usize].push(a as u32);
            in_arcs[v as usize].push(a as u32);
        }
        for list in &mut out_arcs {
            list.sort_unstable_by(|&a, &b| head[b as usize].cmp(&head[a as usize]));
        }

        let mut g = Self {
            graph,
            root: root_idx as u32,
            rooted: false,
            tail,
            head,
            out_arcs,
            in_arcs,
            present: vec![true; m],
            prev: vec![NIL; m + 1],
            next: vec![NIL; m + 1],
            in_frontier: vec![false; m],
            in_tree: vec![false; n],
            parent_arc: vec![NIL; n],
            tree_size: 1,
            last_parent: vec![NIL; n],
            removed: Vec::with_capacity(m),
            processed: Vec::with_capacity(m),
            scratch: Arborescence { root, arcs: Vec::with_capacity(n.saturating_sub(1)) },
            count: 0,
            opts: EnumOptions::default(),
            stopped: false,
            bridge_log: None,
        };
        g.prev[m] = m as u32;
        g.next[m] = m as u32;
        g.in_tree[root_idx] = true;
        for i in 0..g.out_arcs[root_idx].len() {
            let a = g.out_arcs[root_idx][i];
            g.push(a);
        }
        g.rooted = g.all_reachable();
        Ok(g)
    }

    /// Keep a log of every bridge test of subsequent runs.
    pub fn record_bridges(&mut self, on: bool) {
        self.bridge_log = on.then(Vec::new);
    }

    pub fn bridge_log(&self) -> &[BridgeRecord] {
        self.bridge_log.as_deref().unwrap_or(&[])
    }

    /// Arcs currently present in the working graph.
    pub fn working_arcs(&self) -> Vec<Arc> {
        (0..self.present.len())
            .filter(|&a| self.present[a])
            .map(|a| self.arc(a as u32))
            .collect()
    }

    /// Frontier contents from bottom to top.
    pub fn frontier(&self) -> Vec<Arc> {
        let sentinel = self.sentinel();
        let mut out = Vec::new();
        let mut a = self.next[sentinel as usize];
        while a != sentinel {
            out.push(self.arc(a));
            a = self.next[a as usize];
        }
        out
    }

    pub fn run<V: FnMut(&Arborescence)>(&mut self, opts: EnumOptions, mut visitor: V) -> EnumOutcome {
        self.count = 0;
        self.stopped = false;
        self.opts = opts;
        if self.rooted {
            self.grow(&mut visitor);
        }
        EnumOutcome { count: self.count, completed: !self.stopped }
    }

    fn grow<V: FnMut(&Arborescence)>(&mut self, visitor: &mut V) {
        if self.tree_size == self.in_tree.len() {
            self.emit(visitor);
            return;
        }
        let ff_mark = self.processed.len();
        loop {
            let Some(e) = self.pop() else {
                debug_assert!(false, "frontier exhausted in a rooted graph");
                break;
            };
            let v = self.head[e as usize] as usize;
            self.in_tree[v] = true;
            self.parent_arc[v] = e;
            self.tree_size += 1;

            let rm_mark = self.removed.len();
            for i in 0..self.in_arcs[v].len() {
                let a = self.in_arcs[v][i];
                if self.in_frontier[a as usize] {
                    self.unlink(a);
                    self.removed.push(a);
                }
            }
            let mut pushed = 0usize;
            for i in 0..self.out_arcs[v].len() {
                let a = self.out_arcs[v][i];
                if self.present[a as usize] && !self.in_tree[self.head[a as usize] as usize] {
                    self.push(a);
                    pushed += 1;
                }
            }

            self.grow(visitor);

            for _ in 0..pushed {
                self.pop();
            }
            while self.removed.len() > rm_mark {
                let a = self.removed.pop().expect("journal entry");
                self.relink(a);
            }
            self.in_tree[v] = false;
            self.parent_arc[v] = NIL;
            self.tree_size -= 1;
            self.present[e as usize] = false;
            self.processed.push(e);

            if self.stopped || self.bridge_test(e) {
                break;
            }
        }
        while self.processed.len() > ff_mark {
            let e = self.processed.pop().expect("journal entry");
            self.present[e as usize] = true;
            self.push(e);
        }
    }

    fn emit<V: FnMut(&Arborescence)>(&mut self, visitor: &mut V) {
        if self.opts.limit.is_some_and(|l| self.count >= l) {
            self.stopped = true;
            return;
        }
        let nodes = self.graph.nodes();
        self.scratch.arcs.clear();
        for v in 0..self.parent_arc.len() {
            let a = self.parent_arc[v];
            self.last_parent[v] = if a == NIL { NIL } else { self.tail[a as usize] };
            if a != NIL {
                self.scratch.arcs.push((nodes[self.tail[a as usize] as usize], nodes[v]));
            }
        }
        self.scratch.arcs.sort_unstable();
        visitor(&self.scratch);
        self.count += 1;
        if self.count & DEADLINE_POLL_MASK == 0
            && self.opts.deadline.is_some_and(|d| Instant::now() >= d)
        {
            self.stopped = true;
        }
    }

    /// True iff no present arc enters head(e) from a nondescendant of head(e)
    /// in the last emitted tree. `e` must already be deleted.
    fn bridge_test(&mut self, e: u32) -> bool {
        let v = self.head[e as usize];
        let mut bridge = true;
        for &a in &self.in_arcs[v as usize] {
            if self.present[a as usize] && !self.descends_in_last(self.tail[a as usize], v) {
                bridge = false;
                break;
            }
        }
        if let Some(mut log) = self.bridge_log.take() {
            log.push(self.bridge_record(e, bridge));
            self.bridge_log = Some(log);
        }
        bridge
    }

    fn descends_in_last(&self, mut x: u32, v: u32) -> bool {
        loop {
            if x == v {
                return true;
            }
            if x == self.root || x == NIL {
                return false;
            }
            x = self.last_parent[x as usize];
        }
    }

    fn bridge_record(&self, e: u32, is_bridge: bool) -> BridgeRecord {
        let nodes = self.graph.nodes();
        let last_arcs = (0..self.last_parent.len())
            .filter(|&v| self.last_parent[v] != NIL)
            .map(|v| (nodes[self.last_parent[v] as usize], nodes[v]))
            .collect();
        BridgeRecord {
            arc: self.arc(e),
            tree: (0..self.parent_arc.len())
                .filter(|&v| self.parent_arc[v] != NIL)
                .map(|v| self.arc(self.parent_arc[v]))
                .collect(),
            working: self.working_arcs(),
            last: Arborescence::new(self.scratch.root, last_arcs),
            is_bridge,
        }
    }

    fn all_reachable(&self) -> bool {
        let n = self.in_tree.len();
        let mut seen = vec![false; n];
        let mut stack = vec![self.root];
        seen[self.root as usize] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &a in &self.out_arcs[u as usize] {
                let w = self.head[a as usize];
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    fn arc(&self, a: u32) -> Arc {
        let nodes = self.graph.nodes();
        (nodes[self.tail[a as usize] as usize], nodes[self.head[a as usize] as usize])
    }

    fn sentinel(&self) -> u32 {
        self.present.len() as u32
    }

    fn push(&mut self, a: u32) {
        let s = self.sentinel();
        let top = self.prev[s as usize];
        self.next[top as usize] = a;
        self.prev[a as usize] = top;
        self.next[a as usize] = s;
        self.prev[s as usize] = a;
        self.in_frontier[a as usize] = true;
    }

    fn pop(&mut self) -> Option<u32> {
        let s = self.sentinel();
        let top = self.prev[s as usize];
        if top == s {
            return None;
        }
        self.unlink(top);
        Some(top)
    }

    fn unlink(&mut self, a: u32) {
        let (p, n) = (self.prev[a as usize], self.next[a as usize]);
        self.next[p as usize] = n;
        self.prev[n as usize] = p;
        self.in_frontier[a as usize] = false;
    }

    fn relink(&mut self, a: u32) {
        let (p, n) = (self.prev[a as usize], self.next[a as usize]);
        self.next[p as usize] = a;
        self.prev[n as usize] = a;
        self.in_frontier[a as usize] = true;
    }
}

/// Calls `visitor` once per spanning arborescence of `g` rooted at `root` and
/// returns how many there were. Graphs in which some node is unreachable from
/// the root have none.
pub fn enumerate_arborescences<V: FnMut(&Arborescence)>(
    g: &Digraph,
    root: NodeId,
    visitor: V,
) -> Result<u64> {
    Ok(Grower::new(g, root)?.run(EnumOptions::default(), visitor).count)
}

pub fn enumerate_arborescences_with<V: FnMut(&Arborescence)>(
    g: &Digraph,
    root: NodeId,
    opts: EnumOptions,
    visitor: V,
) -> Result<EnumOutcome> {
    Ok(Grower::new(g, root)?.run(opts, visitor))
}
