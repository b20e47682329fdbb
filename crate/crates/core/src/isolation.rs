//! Cut-size, vertex conductance and the isolated-neighborhood predicate.
//!
//! For `S ⊆ V`, the outer boundary `N(S)` is the set of vertices outside `S`
//! adjacent to some member of `S`; the cut-size is `|N(S)|` and the vertex
//! conductance is `|N(S)| / |S|`.

use num_rational::Ratio;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::query::Adjacency;
use crate::rational::Rational;

/// Outer vertex boundary `N(S)`.
pub fn boundary_with<A: Adjacency>(adj: &mut A, set: &VertexSet) -> VertexSet {
    let mut out = Vec::new();
    for v in set.iter() {
        out.extend(adj.adjacent(v).iter().copied().filter(|&w| !set.contains(w)));
    }
    out.into()
}

pub fn boundary(g: &Graph, set: &VertexSet) -> VertexSet {
    boundary_with(&mut &*g, set)
}

pub fn cut_size(g: &Graph, set: &VertexSet) -> usize {
    boundary(g, set).len()
}

/// Exact `cut_size(S) / |S|`. Panics on the empty set.
pub fn conductance(g: &Graph, set: &VertexSet) -> Rational {
    assert!(!set.is_empty(), "conductance of the empty set is undefined");
    Ratio::new(cut_size(g, set) as u64, set.len() as u64)
}

/// Whether `G[S]` is connected (the empty set is not).
pub fn is_connected_with<A: Adjacency>(adj: &mut A, set: &VertexSet) -> bool {
    let Some(start) = set.smallest() else {
        return false;
    };
    let mut reached = vec![false; set.len()];
    reached[0] = true;
    let mut stack = vec![start];
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &w in adj.adjacent(u) {
            if let Ok(i) = set.as_slice().binary_search(&w) {
                if !reached[i] {
                    reached[i] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
    }
    count == set.len()
}

pub fn is_connected_set(g: &Graph, set: &VertexSet) -> bool {
    is_connected_with(&mut &*g, set)
}

/// Whether `set` is a `(k, delta, c)`-isolated neighborhood of `v`:
/// it contains `v`, induces a connected subgraph, has at most `k` vertices,
/// cut-size at most `c`, and conductance at most `delta`.
pub fn is_isolated_with<A: Adjacency>(
    adj: &mut A,
    v: Vertex,
    set: &VertexSet,
    k: usize,
    delta: Rational,
    c: usize,
) -> bool {
    if !set.contains(v) || set.len() > k {
        return false;
    }
    let eta = boundary_with(adj, set).len();
    if eta > c || Ratio::new(eta as u64, set.len() as u64) > delta {
        return false;
    }
    is_connected_with(adj, set)
}

pub fn is_isolated_neighborhood(
    g: &Graph,
    v: Vertex,
    set: &VertexSet,
    k: usize,
    delta: Rational,
    c: usize,
) -> bool {
    is_isolated_with(&mut &*g, v, set, k, delta, c)
}
