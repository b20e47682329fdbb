//! Size and degree checks on normalized decompositions.
//!
//! For every rooted subtree `T'` of the bag forest, the number of vertices
//! appearing in its bags must lie between `|T'|` and `(h+1)|T'|`, and every
//! bag may have at most `d(h+1)` links.

use super::TreeDecomposition;
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructuralIssue {
    /// The input is not normalized; names the failing condition.
    NotNormalized(&'static str),
    /// The subtree rooted at `root` has `bags` bags but `vertices` vertices.
    SizeSandwich {
        root: usize,
        bags: usize,
        vertices: usize,
        width: usize,
    },
    DegreeBound { bag: usize, degree: usize, bound: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructuralReport {
    pub issues: Vec<StructuralIssue>,
    pub subtrees_checked: usize,
}

impl StructuralReport {
    pub fn passed(&self) -> bool {
        self.issues.is_empty()
    }
}

pub fn check_structural_lemmas(g: &Graph, d: &TreeDecomposition) -> StructuralReport {
    let mut report = StructuralReport::default();
    let pre = if d.validate(g).is_err() {
        Some("invalid decomposition")
    } else if !d.is_non_repeated() {
        Some("non-repeated")
    } else if !d.is_edge_overlapping() {
        Some("edge-overlapping")
    } else if !d.is_minimal(g) {
        Some("minimal")
    } else {
        None
    };
    if let Some(what) = pre {
        report.issues.push(StructuralIssue::NotNormalized(what));
        return report;
    }

    let h = d.width();
    let b = d.bags().len();
    let adj = d.link_adjacency();
    let bound = g.max_degree() * (h + 1);
    for (bag, nbrs) in adj.iter().enumerate() {
        if nbrs.len() > bound {
            report.issues.push(StructuralIssue::DegreeBound {
                bag,
                degree: nbrs.len(),
                bound,
            });
        }
    }

    // root each tree at its smallest bag; `order` lists parents before children
    let mut parent = vec![usize::MAX; b];
    let mut depth = vec![0usize; b];
    let mut seen = vec![false; b];
    let mut order = Vec::with_capacity(b);
    for root in 0..b {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let start = order.len();
        order.push(root);
        let mut head = start;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = x;
                    depth[y] = depth[x] + 1;
                    order.push(y);
                }
            }
        }
    }

    // each vertex is counted once, at the shallowest bag holding it
    let mut top = vec![usize::MAX; g.n()];
    for &x in &order {
        for v in d.bags()[x].iter() {
            if top[v] == usize::MAX || depth[x] < depth[top[v]] {
                top[v] = x;
            }
        }
    }
    let mut tops_below = vec![0usize; b];
    let mut bags_below = vec![1usize; b];
    for &t in &top {
        tops_below[t] += 1;
    }
    for &x in order.iter().rev() {
        if parent[x] != usize::MAX {
            tops_below[parent[x]] += tops_below[x];
            bags_below[parent[x]] += bags_below[x];
        }
    }
    for x in 0..b {
        let vertices = tops_below[x] + d.bags()[x].iter().filter(|&v| top[v] != x).count();
        let bags = bags_below[x];
        report.subtrees_checked += 1;
        if vertices > (h + 1) * bags || bags > vertices {
            report.issues.push(StructuralIssue::SizeSandwich {
                root: x,
                bags,
                vertices,
                width: h,
            });
        }
    }
    report
}
