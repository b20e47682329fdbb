//! Normalization: repeatedly apply four local rules until none fires.
//!
//! 1. drop an empty bag;
//! 2. absorb a bag into a linked superset bag, relinking its other neighbors;
//! 3. cut a link between bags with empty intersection;
//! 4. drop a vertex from a bag when the decomposition stays valid.
//!
//! Rules are tried in the order 1, 2, 3, 4, each sweeping bags by ascending
//! index, and the cycle repeats until a full pass changes nothing.

use std::collections::BTreeSet;

use super::{TreeDecomposition, Violation};
use crate::graph::{Graph, Vertex, VertexSet};

pub fn normalize(g: &Graph, d: &TreeDecomposition) -> Result<TreeDecomposition, Violation> {
    normalize_traced(g, d).map(|(out, _)| out)
}

/// Like [`normalize`], also returning the size metric after every rule
/// application (the first entry is the input's metric).
pub fn normalize_traced(
    g: &Graph,
    d: &TreeDecomposition,
) -> Result<(TreeDecomposition, Vec<usize>), Violation> {
    d.validate(g)?;
    let mut w = Work::new(g, d);
    let mut trace = vec![w.metric()];
    loop {
        let mut changed = false;
        changed |= w.drop_empty(&mut trace);
        changed |= w.absorb_subsets(&mut trace);
        changed |= w.cut_disjoint_links(&mut trace);
        changed |= w.shrink_bags(&mut trace);
        if !changed {
            break;
        }
    }
    Ok((w.finish(), trace))
}

struct Work<'a> {
    g: &'a Graph,
    alive: Vec<bool>,
    bags: Vec<VertexSet>,
    adj: Vec<BTreeSet<usize>>,
    bags_of: Vec<BTreeSet<usize>>,
}

impl<'a> Work<'a> {
    fn new(g: &'a Graph, d: &TreeDecomposition) -> Self {
        let b = d.bags().len();
        let mut adj = vec![BTreeSet::new(); b];
        for &(x, y) in d.links() {
            adj[x].insert(y);
            adj[y].insert(x);
        }
        let mut bags_of = vec![BTreeSet::new(); g.n()];
        for (i, bag) in d.bags().iter().enumerate() {
            for v in bag.iter() {
                bags_of[v].insert(i);
            }
        }
        Work {
            g,
            alive: vec![true; b],
            bags: d.bags().to_vec(),
            adj,
            bags_of,
        }
    }

    fn metric(&self) -> usize {
        let live = self.alive.iter().filter(|&&a| a).count();
        let links: usize = self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2;
        let sizes: usize = (0..self.bags.len())
            .filter(|&i| self.alive[i])
            .map(|i| self.bags[i].len())
            .sum();
        live + links + sizes
    }

    fn kill(&mut self, i: usize) {
        for j in std::mem::take(&mut self.adj[i]) {
            self.adj[j].remove(&i);
        }
        for v in self.bags[i].iter() {
            self.bags_of[v].remove(&i);
        }
        self.bags[i] = VertexSet::new();
        self.alive[i] = false;
    }

    fn drop_empty(&mut self, trace: &mut Vec<usize>) -> bool {
        let mut changed = false;
        for i in 0..self.bags.len() {
            if self.alive[i] && self.bags[i].is_empty() {
                self.kill(i);
                trace.push(self.metric());
                changed = true;
            }
        }
        changed
    }

    fn absorb_subsets(&mut self, trace: &mut Vec<usize>) -> bool {
        let mut changed = false;
        for j in 0..self.bags.len() {
            if !self.alive[j] {
                continue;
            }
            let target = self.adj[j]
                .iter()
                .copied()
                .find(|&i| self.bags[j].is_subset(&self.bags[i]));
            if let Some(i) = target {
                let others: Vec<usize> = self.adj[j].iter().copied().filter(|&x| x != i).collect();
                self.kill(j);
                for x in others {
                    self.adj[x].insert(i);
                    self.adj[i].insert(x);
                }
                trace.push(self.metric());
                changed = true;
            }
        }
        changed
    }

    fn cut_disjoint_links(&mut self, trace: &mut Vec<usize>) -> bool {
        let mut changed = false;
        for i in 0..self.bags.len() {
            let later: Vec<usize> = self.adj[i].iter().copied().filter(|&j| j > i).collect();
            for j in later {
                if !self.bags[i].iter().any(|v| self.bags[j].contains(v)) {
                    self.adj[i].remove(&j);
                    self.adj[j].remove(&i);
                    trace.push(self.metric());
                    changed = true;
                }
            }
        }
        changed
    }

    fn shrink_bags(&mut self, trace: &mut Vec<usize>) -> bool {
        let mut changed = false;
        for i in 0..self.bags.len() {
            if !self.alive[i] {
                continue;
            }
            let members: Vec<Vertex> = self.bags[i].iter().collect();
            for x in members {
                if self.can_drop(i, x) {
                    self.bags[i] = self.bags[i].iter().filter(|&v| v != x).collect();
                    self.bags_of[x].remove(&i);
                    trace.push(self.metric());
                    changed = true;
                }
            }
        }
        changed
    }

    fn can_drop(&self, i: usize, x: Vertex) -> bool {
        let bags_of_x: Vec<usize> = self.bags_of[x].iter().copied().collect();
        let adj_i: Vec<usize> = self.adj[i].iter().copied().collect();
        if bags_of_x.len() < 2 {
            return false;
        }
        if adj_i.iter().filter(|&&j| self.bags[j].contains(x)).count() > 1 {
            return false;
        }
        self.g
            .neighbors(x)
            .iter()
            .all(|&y| bags_of_x.iter().any(|&j| j != i && self.bags[j].contains(y)))
    }

    fn finish(self) -> TreeDecomposition {
        let mut index = vec![usize::MAX; self.bags.len()];
        let mut bags = Vec::new();
        for i in 0..self.bags.len() {
            if self.alive[i] {
                index[i] = bags.len();
                bags.push(self.bags[i].clone());
            }
        }
        let mut links = Vec::new();
        for (i, nbrs) in self.adj.iter().enumerate() {
            for &j in nbrs {
                if i < j {
                    links.push((index[i], index[j]));
                }
            }
        }
        TreeDecomposition::new(bags, links)
    }
}

// keep the shared predicate and this module's incremental version in step
#[cfg(test)]
fn can_drop_reference(g: &Graph, d: &TreeDecomposition, i: usize, x: Vertex) -> bool {
    let bags_of = d.bags_of(g.n());
    super::removable(g, d.bags(), &bags_of, &d.link_adjacency(), i, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build;

    fn td(bags: &[&[usize]], links: &[(usize, usize)]) -> TreeDecomposition {
        TreeDecomposition::new(
            bags.iter().map(|b| b.iter().copied().collect()).collect(),
            links.to_vec(),
        )
    }

    #[test]
    fn equal_linked_bags_merge() {
        let g = build::path(2);
        let out = normalize(&g, &td(&[&[0, 1], &[0, 1]], &[(0, 1)])).unwrap();
        assert_eq!(out, td(&[&[0, 1]], &[]));
    }

    #[test]
    fn disjoint_link_is_cut() {
        let g = Graph::empty(2);
        let out = normalize(&g, &td(&[&[0], &[1]], &[(0, 1)])).unwrap();
        assert_eq!(out, td(&[&[0], &[1]], &[]));
    }

    #[test]
    fn redundant_vertex_is_stripped() {
        // edge {0,1} plus isolated 2, with 2 appearing twice: absorption runs
        // before stripping, so {2} merges into {0,1,2}
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        let out = normalize(&g, &td(&[&[0, 1, 2], &[2]], &[(0, 1)])).unwrap();
        assert_eq!(out, TreeDecomposition::single_bag(3));
        // alone, bag {0,1,2} cannot shrink
        let alone = normalize(&g, &TreeDecomposition::single_bag(3)).unwrap();
        assert_eq!(alone, TreeDecomposition::single_bag(3));
        // no bag is a subset of its neighbor, so 2 is stripped from bag 0
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let out = normalize(&g, &td(&[&[0, 1, 2], &[2, 3]], &[(0, 1)])).unwrap();
        assert_eq!(out, td(&[&[0, 1], &[2, 3]], &[]));
    }

    #[test]
    fn empty_bags_are_dropped_and_reindexed() {
        let g = build::path(3);
        let out = normalize(&g, &td(&[&[], &[0, 1], &[1, 2]], &[(0, 1), (1, 2)])).unwrap();
        assert_eq!(out, td(&[&[0, 1], &[1, 2]], &[(0, 1)]));
    }

    #[test]
    fn invalid_input_is_rejected() {
        let g = build::path(3);
        assert!(normalize(&g, &td(&[&[0, 1]], &[])).is_err());
    }

    #[test]
    fn incremental_drop_check_matches_reference() {
        let g = build::path(4);
        let d = td(&[&[0, 1, 2], &[1, 2, 3], &[2, 3]], &[(0, 1), (1, 2)]);
        let w = Work::new(&g, &d);
        for (i, bag) in d.bags().iter().enumerate() {
            for x in bag.iter() {
                assert_eq!(w.can_drop(i, x), can_drop_reference(&g, &d, i, x), "bag {i} vertex {x}");
            }
        }
    }

    #[test]
    fn metric_strictly_decreases() {
        let g = build::path(4);
        let d = td(
            &[&[0, 1, 2, 3], &[1, 2, 3], &[], &[2, 3], &[3]],
            &[(0, 1), (1, 2), (1, 3), (3, 4)],
        );
        let (out, trace) = normalize_traced(&g, &d).unwrap();
        assert!(trace.windows(2).all(|w| w[1] < w[0]), "{trace:?}");
        assert_eq!(*trace.last().unwrap(), out.size_metric());
        assert!(out.is_edge_overlapping() && out.is_non_repeated() && out.is_minimal(&g));
    }
}
