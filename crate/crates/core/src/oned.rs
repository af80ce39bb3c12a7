//! Exact solver for one-dimensional instances, where every subset is a
//! contiguous interval of the line `0..n`.
//!
//! A cover is then a chain of intervals walking the line left to right
//! without gaps, and pairwise disjoint covers are vertex-disjoint paths in a
//! DAG over the intervals.  Unit-capacity max flow counts those paths, and on
//! unit batteries the fractional optimum collapses to the same integer, so
//! both the cover-packing and the lifetime problem are solved exactly.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::instance::{CoverFamily, Instance};

/// Interpret every subset as an inclusive interval `(left, right)`.
pub fn as_intervals(inst: &Instance) -> Result<Vec<(usize, usize)>> {
    inst.subsets()
        .iter()
        .enumerate()
        .map(|(j, s)| {
            for w in s.windows(2) {
                if w[1] != w[0] + 1 {
                    return Err(Error::NotInterval(j));
                }
            }
            Ok((s[0], *s.last().unwrap()))
        })
        .collect()
}

/// Arcs of the chain DAG: `a -> b` when `b` can extend a left-to-right chain
/// after `a`, i.e. `b` starts no earlier than `a` and leaves no gap.
pub fn interval_arcs(intervals: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut arcs = Vec::new();
    for (a, &(la, ra)) in intervals.iter().enumerate() {
        for (b, &(lb, _)) in intervals.iter().enumerate() {
            if a != b && la <= lb && lb <= ra + 1 {
                arcs.push((a, b));
            }
        }
    }
    arcs
}

/// Unit-capacity max flow (breadth-first augmentation).
struct Flow {
    // edges[i] = (to, capacity); edges[i ^ 1] is the reverse edge.
    edges: Vec<(usize, u32)>,
    adj: Vec<Vec<usize>>,
}

impl Flow {
    fn new(nodes: usize) -> Self {
        Flow {
            edges: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    fn add_edge(&mut self, from: usize, to: usize) {
        self.adj[from].push(self.edges.len());
        self.edges.push((to, 1));
        self.adj[to].push(self.edges.len());
        self.edges.push((from, 0));
    }

    fn max_flow(&mut self, s: usize, t: usize) -> usize {
        let mut total = 0;
        loop {
            let mut parent_edge = vec![usize::MAX; self.adj.len()];
            let mut queue = VecDeque::from([s]);
            parent_edge[s] = usize::MAX - 1;
            while let Some(v) = queue.pop_front() {
                if v == t {
                    break;
                }
                for &eid in &self.adj[v] {
                    let (to, cap) = self.edges[eid];
                    if cap > 0 && parent_edge[to] == usize::MAX {
                        parent_edge[to] = eid;
                        queue.push_back(to);
                    }
                }
            }
            if parent_edge[t] == usize::MAX {
                return total;
            }
            let mut v = t;
            while v != s {
                let eid = parent_edge[v];
                self.edges[eid].1 -= 1;
                self.edges[eid ^ 1].1 += 1;
                v = self.edges[eid ^ 1].0;
            }
            total += 1;
        }
    }
}

#[derive(Clone, Debug)]
pub struct OneDReport {
    /// Maximum number of disjoint covers; also the exact lifetime.
    pub value: usize,
    pub family: CoverFamily,
}

/// Solve an interval instance exactly via vertex-disjoint path packing.
///
/// Node layout: interval `j` splits into `in = 2j`, `out = 2j + 1` joined by
/// a unit edge (its battery); the source feeds intervals touching the left
/// end of the line, intervals touching the right end drain into the sink.
pub fn solve_1d(inst: &Instance) -> Result<OneDReport> {
    if !inst.has_unit_batteries() {
        return Err(Error::UnitBatteriesRequired);
    }
    let intervals = as_intervals(inst)?;
    let m = inst.subset_count();
    let (s, t) = (2 * m, 2 * m + 1);
    let mut flow = Flow::new(2 * m + 2);
    for j in 0..m {
        flow.add_edge(2 * j, 2 * j + 1);
        if intervals[j].0 == 0 {
            flow.add_edge(s, 2 * j);
        }
        if intervals[j].1 == inst.n() - 1 {
            flow.add_edge(2 * j + 1, t);
        }
    }
    for (a, b) in interval_arcs(&intervals) {
        flow.add_edge(2 * a + 1, 2 * b);
    }
    let value = flow.max_flow(s, t);

    // Walk the saturated edges from the source; each walk is one chain.
    // Residual cancellations cannot leave stray cycles through a unit-width
    // interval node, so every walk reaches the sink.
    let mut covers = Vec::new();
    for &eid in &flow.adj[s] {
        let (to, cap) = flow.edges[eid];
        if eid % 2 == 0 && cap == 0 {
            let mut cover = Vec::new();
            let mut v = to;
            while v != t {
                if v % 2 == 0 && v < 2 * m {
                    cover.push(v / 2);
                }
                let next = flow.adj[v]
                    .iter()
                    .find(|&&e| e % 2 == 0 && flow.edges[e].1 == 0)
                    .expect("flow conservation");
                // Restore the capacity so the edge is not followed twice.
                flow.edges[*next].1 = 1;
                v = flow.edges[*next].0;
            }
            cover.sort_unstable();
            covers.push(cover);
        }
    }
    debug_assert_eq!(covers.len(), value);
    Ok(OneDReport {
        value,
        family: CoverFamily { covers },
    })
}
