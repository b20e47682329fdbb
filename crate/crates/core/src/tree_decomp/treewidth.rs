//! Exact treewidth of small graphs by searching elimination orderings.
//!
//! `tw(G) <= t` iff the vertices can be eliminated one at a time so that
//! every eliminated vertex `v` has `|Q(S, v)| <= t`, where `S` is the set
//! eliminated before `v` and `Q(S, v)` is the set of vertices outside
//! `S ∪ {v}` reachable from `v` through `S`. Sets `S` that cannot be
//! completed are memoized.

use std::collections::HashSet;

use thiserror::Error;

use super::TreeDecomposition;
use crate::graph::{Graph, Vertex, VertexSet};

pub const DEFAULT_TREEWIDTH_CAP: usize = 25;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreewidthError {
    #[error("graph has {n} vertices, above the cap of {cap}")]
    OverCap { n: usize, cap: usize },
}

#[derive(Clone, Debug)]
pub struct TreewidthResult {
    pub width: usize,
    /// Decomposition of exactly `width`, built from `order`.
    pub decomposition: TreeDecomposition,
    pub order: Vec<Vertex>,
}

pub fn exact_treewidth(g: &Graph) -> Result<TreewidthResult, TreewidthError> {
    exact_treewidth_capped(g, DEFAULT_TREEWIDTH_CAP)
}

/// `cap` is clamped to 64, the width of the bitmask state.
pub fn exact_treewidth_capped(g: &Graph, cap: usize) -> Result<TreewidthResult, TreewidthError> {
    let cap = cap.min(64);
    if g.n() > cap {
        return Err(TreewidthError::OverCap { n: g.n(), cap });
    }
    let mut width = 0;
    let mut order = Vec::with_capacity(g.n());
    for comp in g.components() {
        let (sub, ids) = g.induced(&comp);
        let (w, local) = component_treewidth(&sub);
        width = width.max(w);
        order.extend(local.into_iter().map(|v| ids[v]));
    }
    let decomposition = elimination_decomposition(g, &order);
    debug_assert_eq!(decomposition.width(), width);
    Ok(TreewidthResult {
        width,
        decomposition,
        order,
    })
}

/// Decomposition induced by eliminating vertices in `order` (a permutation
/// of the vertex set): bag of `v` is `v` plus its later neighbors in the
/// filled graph, linked to the bag of the earliest of those neighbors.
pub fn elimination_decomposition(g: &Graph, order: &[Vertex]) -> TreeDecomposition {
    let n = g.n();
    assert_eq!(order.len(), n, "order must list every vertex");
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut fill: Vec<HashSet<Vertex>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut bags = Vec::with_capacity(n);
    let mut links = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        let later: Vec<Vertex> = fill[v].iter().copied().filter(|&u| pos[u] > i).collect();
        for (a, &x) in later.iter().enumerate() {
            for &y in &later[a + 1..] {
                fill[x].insert(y);
                fill[y].insert(x);
            }
        }
        if let Some(&next) = later.iter().min_by_key(|&&u| pos[u]) {
            links.push((i, pos[next]));
        }
        let mut bag = later;
        bag.push(v);
        bags.push(VertexSet::from(bag));
    }
    TreeDecomposition::new(bags, links)
}

fn component_treewidth(g: &Graph) -> (usize, Vec<Vertex>) {
    let n = g.n();
    if n <= 1 {
        return (0, (0..n).collect());
    }
    let adj: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u))
        .collect();
    let min_degree = (0..n).map(|v| g.degree(v)).min().unwrap_or(0);
    for t in min_degree.max(1)..n {
        let mut search = Search {
            adj: &adj,
            all: if n == 64 { u64::MAX } else { (1u64 << n) - 1 },
            t,
            failed: HashSet::new(),
            order: Vec::with_capacity(n),
        };
        if search.run(0) {
            return (t, search.order);
        }
    }
    unreachable!("eliminating in any order gives width at most n - 1")
}

struct Search<'a> {
    adj: &'a [u64],
    all: u64,
    t: usize,
    failed: HashSet<u64>,
    order: Vec<Vertex>,
}

impl Search<'_> {
    fn run(&mut self, s: u64) -> bool {
        let rest = self.all & !s;
        if rest.count_ones() as usize <= self.t + 1 {
            self.order.extend(bits(rest));
            return true;
        }
        if self.failed.contains(&s) {
            return false;
        }
        for v in bits(rest) {
            if q_size(self.adj, s, v) <= self.t {
                self.order.push(v);
                if self.run(s | 1 << v) {
                    return true;
                }
                self.order.pop();
            }
        }
        self.failed.insert(s);
        false
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let i = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(i)
    })
}

/// `|Q(S, v)|`: vertices outside `S ∪ {v}` adjacent to the component of `v`
/// in `G[S ∪ {v}]`.
fn q_size(adj: &[u64], s: u64, v: usize) -> usize {
    let mut comp = 1u64 << v;
    let mut frontier = comp;
    loop {
        let reach = bits(frontier).fold(0u64, |m, u| m | adj[u]);
        let new = reach & s & !comp;
        if new == 0 {
            break;
        }
        comp |= new;
        frontier = new;
    }
    let out = bits(comp).fold(0u64, |m, u| m | adj[u]);
    (out & !s & !comp).count_ones() as usize
}
