//! Turning a bounded-width decomposition into a partition of `G` whose parts
//! are mostly isolated neighborhoods.
//!
//! The bag forest of the normalized decomposition is partitioned with the
//! forest partitioner (parameters `ε/(h+1)`, `δε/(60d(h+1))`, degree bound
//! `d(h+1)`). A vertex is kept when all of its bags lie in one component,
//! that component is good, and no bag of it is adjacent to a good component
//! it does not belong to. Kept vertices are grouped by connectivity in `G`;
//! every other vertex is a singleton.

use num_rational::Ratio;
use thiserror::Error;

use super::{normalize, TreeDecomposition, Violation};
use crate::forest_partition::{check_open_half, stronger_tree_partition, ForestPartition, ForestPartitionError};
use crate::graph::{Graph, VertexSet};
use crate::isolation::is_isolated_neighborhood;
use crate::rational::{self, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecompositionPartitionError {
    #[error("invalid decomposition: {0}")]
    Invalid(#[from] Violation),
    #[error(transparent)]
    Forest(#[from] ForestPartitionError),
}

#[derive(Clone, Debug)]
pub struct DecompositionPartition {
    /// `g[v]`: the part containing `v`.
    pub g: Vec<VertexSet>,
    /// Vertices whose part is a `(k_bound, δ, 2(h+1))`-isolated neighborhood, verified.
    pub good: VertexSet,
    /// `⌈28860 d³ (h+1)⁵ / (δ ε²)⌉`.
    pub k_bound: u64,
    pub width: usize,
    pub normalized: TreeDecomposition,
    pub forest: ForestPartition,
}

impl DecompositionPartition {
    /// Whether `|good| >= (1 - ε/20) n`.
    pub fn good_fraction_met(&self, epsilon: Rational) -> bool {
        let n = self.g.len() as u64;
        let lhs = Ratio::from_integer(self.good.len() as u64) * 20;
        lhs >= (Ratio::from_integer(20) - epsilon) * n
    }
}

pub fn decomposition_partition(
    graph: &Graph,
    d: &TreeDecomposition,
    epsilon: Rational,
    delta: Rational,
) -> Result<DecompositionPartition, DecompositionPartitionError> {
    check_open_half(&epsilon, "epsilon")?;
    check_open_half(&delta, "delta")?;
    let normalized = normalize(graph, d)?;
    let h = normalized.width();
    let deg = graph.max_degree().max(1);
    let hp = (h + 1) as u64;
    let overflow = || DecompositionPartitionError::Forest(ForestPartitionError::Overflow);

    let eps_t = rational::div(&epsilon, &Ratio::from_integer(hp)).ok_or_else(overflow)?;
    let de = rational::mul(&delta, &epsilon).ok_or_else(overflow)?;
    let delta_t = rational::div(&de, &Ratio::from_integer(60 * deg as u64 * hp)).ok_or_else(overflow)?;
    let forest_degree = (deg * (h + 1)).max(2);
    let bag_forest = normalized.link_graph();
    let forest = stronger_tree_partition(&bag_forest, eps_t, delta_t, forest_degree)?;

    let n = graph.n();
    let comp_of_bag = |b: usize| forest.partition.component_of(b);
    let mut home = vec![usize::MAX; n];
    let mut keep = vec![true; n];
    for (b, bag) in normalized.bags().iter().enumerate() {
        let c = comp_of_bag(b);
        let near_other_good = bag_forest
            .neighbors(b)
            .iter()
            .any(|&nb| comp_of_bag(nb) != c && forest.good_components[comp_of_bag(nb)]);
        for v in bag.iter() {
            if home[v] == usize::MAX {
                home[v] = c;
            } else if home[v] != c {
                keep[v] = false;
            }
            if !forest.good_components[c] || near_other_good {
                keep[v] = false;
            }
        }
    }

    let mut g: Vec<VertexSet> = vec![VertexSet::new(); n];
    let mut done = vec![false; n];
    for s in 0..n {
        if done[s] {
            continue;
        }
        if !keep[s] {
            done[s] = true;
            g[s] = VertexSet::singleton(s);
            continue;
        }
        let mut part = vec![s];
        done[s] = true;
        let mut head = 0;
        while head < part.len() {
            let u = part[head];
            head += 1;
            for &w in graph.neighbors(u) {
                if keep[w] && !done[w] {
                    done[w] = true;
                    part.push(w);
                }
            }
        }
        let set = VertexSet::from(part);
        for v in set.iter() {
            g[v] = set.clone();
        }
    }

    let k_bound = k_bound(deg as u64, hp, &epsilon, &delta).ok_or_else(overflow)?;
    let c = 2 * (h + 1);
    let k_cap = usize::try_from(k_bound).unwrap_or(usize::MAX);
    let mut good = Vec::new();
    for v in 0..n {
        if g[v].smallest() == Some(v) && is_isolated_neighborhood(graph, v, &g[v], k_cap, delta, c) {
            good.extend(g[v].iter());
        }
    }

    Ok(DecompositionPartition {
        g,
        good: VertexSet::from(good),
        k_bound,
        width: h,
        normalized,
        forest,
    })
}

fn k_bound(d: u64, hp: u64, epsilon: &Rational, delta: &Rational) -> Option<u64> {
    let num = 28860u64.checked_mul(d.checked_pow(3)?)?.checked_mul(hp.checked_pow(5)?)?;
    let denom = rational::mul(delta, &rational::mul(epsilon, epsilon)?)?;
    Some(rational::ceil_u64(&rational::div(&Ratio::from_integer(num), &denom)?))
}
