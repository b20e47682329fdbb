//! Per-component property checks.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Vertex};
use crate::tree_decomp::{exact_treewidth_capped, TreewidthError};

/// A hereditary property checked component by component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Forest,
    Cactus,
    TreewidthLeH(usize),
    KColorable(usize),
}

pub const TREEWIDTH_CHECK_CAP: usize = 25;
pub const COLORING_CAP: usize = 64;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{property} check accepts at most {cap} vertices, got {size}")]
pub struct MembershipCapExceeded {
    pub property: Property,
    pub size: usize,
    pub cap: usize,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::Forest => write!(f, "forest"),
            Property::Cactus => write!(f, "cactus"),
            Property::TreewidthLeH(h) => write!(f, "treewidth_le_{h}"),
            Property::KColorable(k) => write!(f, "{k}_colorable"),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("unknown property {0:?} (expected forest, cactus, treewidth_le_<h> or <k>_colorable)")]
pub struct UnknownProperty(pub String);

impl FromStr for Property {
    type Err = UnknownProperty;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || UnknownProperty(s.to_string());
        match s {
            "forest" => Ok(Property::Forest),
            "cactus" => Ok(Property::Cactus),
            _ => {
                if let Some(h) = s.strip_prefix("treewidth_le_") {
                    h.parse().map(Property::TreewidthLeH).map_err(|_| bad())
                } else if let Some(k) = s.strip_suffix("_colorable") {
                    k.parse().map(Property::KColorable).map_err(|_| bad())
                } else {
                    Err(bad())
                }
            }
        }
    }
}

impl Property {
    pub fn cap(self) -> Option<usize> {
        match self {
            Property::Forest | Property::Cactus => None,
            Property::TreewidthLeH(_) => Some(TREEWIDTH_CHECK_CAP),
            Property::KColorable(_) => Some(COLORING_CAP),
        }
    }
}

pub fn check_component_membership(property: Property, c: &Graph) -> Result<bool, MembershipCapExceeded> {
    if let Some(cap) = property.cap() {
        if c.n() > cap {
            return Err(MembershipCapExceeded { property, size: c.n(), cap });
        }
    }
    Ok(match property {
        Property::Forest => c.is_forest(),
        Property::Cactus => is_cactus(c),
        Property::TreewidthLeH(h) => match exact_treewidth_capped(c, TREEWIDTH_CHECK_CAP) {
            Ok(r) => r.width <= h,
            Err(TreewidthError::OverCap { .. }) => unreachable!("size checked above"),
        },
        Property::KColorable(k) => colorable(c, k),
    })
}

/// Every block is a single edge or a cycle.
fn is_cactus(c: &Graph) -> bool {
    blocks(c).into_iter().all(|(vertices, edges)| edges == 1 || edges == vertices)
}

/// `(vertex count, edge count)` of each biconnected block, by an iterative
/// Tarjan walk with an edge stack.
fn blocks(c: &Graph) -> Vec<(usize, usize)> {
    let n = c.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut edge_stack: Vec<(Vertex, Vertex)> = Vec::new();
    let mut out = Vec::new();
    let mut pop_block = |edge_stack: &mut Vec<(Vertex, Vertex)>, until: (Vertex, Vertex)| {
        let mut verts = Vec::new();
        let mut count = 0;
        while let Some(e) = edge_stack.pop() {
            verts.extend([e.0, e.1]);
            count += 1;
            if e == until {
                break;
            }
        }
        verts.sort_unstable();
        verts.dedup();
        out.push((verts.len(), count));
    };
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // (vertex, parent, next neighbor index)
        let mut stack = vec![(root, usize::MAX, 0usize)];
        while let Some(&mut (u, parent, ref mut next)) = stack.last_mut() {
            if let Some(&w) = c.neighbors(u).get(*next) {
                *next += 1;
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    edge_stack.push((u, w));
                    stack.push((w, u, 0));
                } else if w != parent && disc[w] < disc[u] {
                    low[u] = low[u].min(disc[w]);
                    edge_stack.push((u, w));
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[u]);
                    if low[u] >= disc[p] {
                        pop_block(&mut edge_stack, (p, u));
                    }
                }
            }
        }
    }
    out
}

fn colorable(c: &Graph, k: usize) -> bool {
    fn place(c: &Graph, order: &[Vertex], color: &mut [usize], i: usize, k: usize, used: usize) -> bool {
        let Some(&v) = order.get(i) else {
            return true;
        };
        // a fresh color is interchangeable with any other fresh one
        for col in 0..k.min(used + 1) {
            if c.neighbors(v).iter().all(|&u| color[u] != col) {
                color[v] = col;
                if place(c, order, color, i + 1, k, used.max(col + 1)) {
                    return true;
                }
                color[v] = usize::MAX;
            }
        }
        false
    }
    if c.n() == 0 {
        return true;
    }
    if k == 0 {
        return false;
    }
    let mut order: Vec<Vertex> = (0..c.n()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(c.degree(v)));
    place(c, &order, &mut vec![usize::MAX; c.n()], 0, k, 0)
}
