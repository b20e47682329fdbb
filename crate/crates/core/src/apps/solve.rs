//! Exact optima on small graphs.

use petgraph::algo::maximum_matching;
use petgraph::graph::UnGraph;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Problem {
    Matching,
    VertexCover,
    DominatingSet,
}

impl Problem {
    pub const ALL: [Problem; 3] = [Problem::Matching, Problem::VertexCover, Problem::DominatingSet];

    /// Largest graph the exact solver accepts.
    pub fn cap(self) -> usize {
        match self {
            Problem::Matching => MATCHING_CAP,
            Problem::VertexCover | Problem::DominatingSet => BRANCHING_CAP,
        }
    }
}

pub const MATCHING_CAP: usize = 64;
pub const BRANCHING_CAP: usize = 30;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{problem:?} solver accepts at most {cap} vertices, got {size}")]
pub struct SolverCapExceeded {
    pub problem: Problem,
    pub size: usize,
    pub cap: usize,
}

pub fn exact_component_optimum(problem: Problem, c: &Graph) -> Result<usize, SolverCapExceeded> {
    let cap = problem.cap();
    if c.n() > cap {
        return Err(SolverCapExceeded { problem, size: c.n(), cap });
    }
    Ok(match problem {
        Problem::Matching => matching(c),
        Problem::VertexCover => c.n() - independence_number(c),
        Problem::DominatingSet => domination_number(c),
    })
}

fn matching(c: &Graph) -> usize {
    let mut h = UnGraph::<(), ()>::with_capacity(c.n(), c.m());
    let nodes: Vec<_> = (0..c.n()).map(|_| h.add_node(())).collect();
    for (u, v) in c.edges() {
        h.add_edge(nodes[u], nodes[v], ());
    }
    maximum_matching(&h).len()
}

fn masks(c: &Graph) -> Vec<u64> {
    (0..c.n())
        .map(|v| c.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u))
        .collect()
}

fn independence_number(c: &Graph) -> usize {
    fn mis(nbr: &[u64], live: u64) -> usize {
        if live == 0 {
            return 0;
        }
        let degree = |v: usize| (nbr[v] & live).count_ones();
        let members = (0..nbr.len()).filter(|&v| live >> v & 1 == 1);
        let low = members.clone().min_by_key(|&v| degree(v)).expect("live is non-empty");
        // a vertex of degree <= 1 belongs to some maximum independent set
        if degree(low) <= 1 {
            return 1 + mis(nbr, live & !nbr[low] & !(1 << low));
        }
        let high = members.max_by_key(|&v| degree(v)).expect("live is non-empty");
        let without = mis(nbr, live & !(1 << high));
        let with = 1 + mis(nbr, live & !nbr[high] & !(1 << high));
        without.max(with)
    }
    let all = if c.n() == 64 { u64::MAX } else { (1u64 << c.n()) - 1 };
    mis(&masks(c), all)
}

fn domination_number(c: &Graph) -> usize {
    struct Bnb {
        closed: Vec<u64>,
        all: u64,
        reach: u32,
        best: usize,
    }
    impl Bnb {
        fn go(&mut self, dominated: u64, used: usize) {
            if dominated == self.all {
                self.best = self.best.min(used);
                return;
            }
            let open = (self.all & !dominated).count_ones();
            if used + open.div_ceil(self.reach) as usize >= self.best {
                return;
            }
            // the undominated vertex with the fewest ways to be dominated
            let x = (0..self.closed.len())
                .filter(|&v| dominated >> v & 1 == 0)
                .min_by_key(|&v| self.closed[v].count_ones())
                .expect("something is undominated");
            let mut options: Vec<usize> = (0..self.closed.len()).filter(|&y| self.closed[x] >> y & 1 == 1).collect();
            options.sort_by_key(|&y| std::cmp::Reverse((self.closed[y] & !dominated).count_ones()));
            for y in options {
                self.go(dominated | self.closed[y], used + 1);
            }
        }
    }
    if c.n() == 0 {
        return 0;
    }
    let closed: Vec<u64> = masks(c).iter().enumerate().map(|(v, m)| m | 1 << v).collect();
    let mut b = Bnb {
        all: if c.n() == 64 { u64::MAX } else { (1u64 << c.n()) - 1 },
        reach: c.max_degree() as u32 + 1,
        best: c.n(),
        closed,
    };
    b.go(0, 0);
    b.best
}
