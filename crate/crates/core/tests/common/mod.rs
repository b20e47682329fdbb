//! Independent reference implementations for integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_rational::Ratio;
use twpart::apps::Problem;
use twpart::graph::{Graph, Vertex, VertexSet};

/// Cut size of `s` by direct neighbor scan.
pub fn boundary(g: &Graph, s: &BTreeSet<Vertex>) -> usize {
    s.iter()
        .flat_map(|&x| g.neighbors(x).iter().copied())
        .filter(|y| !s.contains(y))
        .collect::<BTreeSet<_>>()
        .len()
}

fn connected(g: &Graph, s: &BTreeSet<Vertex>) -> bool {
    let Some(&start) = s.iter().next() else { return false };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for &y in g.neighbors(x) {
            if s.contains(&y) && seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen.len() == s.len()
}

/// Every connected set containing `v` with at most `max_size` vertices,
/// with its cut size, by scanning all vertex subsets (n <= 16).
pub fn connected_subsets(g: &Graph, v: Vertex, max_size: usize) -> Vec<(VertexSet, usize)> {
    assert!(g.n() <= 16);
    let mut out = Vec::new();
    for mask in 0u32..1 << g.n() {
        if mask >> v & 1 == 0 || mask.count_ones() as usize > max_size {
            continue;
        }
        let s: BTreeSet<Vertex> = (0..g.n()).filter(|&x| mask >> x & 1 == 1).collect();
        if connected(g, &s) {
            let eta = boundary(g, &s);
            out.push((s.into_iter().collect(), eta));
        }
    }
    out.sort();
    out
}

pub fn passes(set: &VertexSet, eta: usize, k: usize, delta: Ratio<u64>, c: usize) -> bool {
    set.len() <= k && eta <= c && Ratio::from_integer(eta as u64) <= delta * Ratio::from_integer(set.len() as u64)
}

/// Every isolated neighborhood of `v`, by brute force.
pub fn brute_neighborhoods(g: &Graph, v: Vertex, k: usize, delta: Ratio<u64>, c: usize) -> Vec<VertexSet> {
    connected_subsets(g, v, k)
        .into_iter()
        .filter(|(s, eta)| passes(s, *eta, k, delta, c))
        .map(|(s, _)| s)
        .collect()
}

/// Smallest subfamily with the same union, by DP over subsets of the
/// universe (vertex ids below 16).
pub fn min_cover_dp(family: &[VertexSet]) -> usize {
    let masks: Vec<u32> = family.iter().map(|s| s.iter().fold(0u32, |m, x| m | 1 << x)).collect();
    let full = masks.iter().fold(0, |a, &m| a | m);
    let mut best = vec![usize::MAX; (full as usize) + 1];
    best[0] = 0;
    let mut order: Vec<u32> = (0..=full).filter(|&m| m & !full == 0).collect();
    order.sort_by_key(|m| m.count_ones());
    for m in order {
        let here = best[m as usize];
        if here == usize::MAX {
            continue;
        }
        for &s in &masks {
            let next = (m | s) as usize;
            if best[next] > here + 1 {
                best[next] = here + 1;
            }
        }
    }
    best[full as usize]
}

/// The search exactly as first described: BFS from `v` in `G - R` collecting
/// up to `k` vertices; accept if isolated in `G`; otherwise, with budget left,
/// delete each non-root collected vertex in ascending id order and recurse.
pub fn literal_search(g: &Graph, v: Vertex, k: usize, delta: Ratio<u64>, c: usize) -> Option<VertexSet> {
    fn go(g: &Graph, v: Vertex, k: usize, delta: Ratio<u64>, c: usize, left: usize, removed: &mut BTreeSet<Vertex>) -> Option<VertexSet> {
        let mut s = vec![v];
        let mut seen = BTreeSet::from([v]);
        let mut i = 0;
        while i < s.len() && s.len() < k {
            for &y in g.neighbors(s[i]) {
                if s.len() < k && !removed.contains(&y) && seen.insert(y) {
                    s.push(y);
                }
            }
            i += 1;
        }
        let set: BTreeSet<Vertex> = s.iter().copied().collect();
        let eta = boundary(g, &set) as u64;
        if eta as usize <= c && Ratio::from_integer(eta) <= delta * Ratio::from_integer(set.len() as u64) {
            return Some(set.into_iter().collect());
        }
        if left == 0 {
            return None;
        }
        for &w in set.iter().filter(|&&w| w != v) {
            removed.insert(w);
            let found = go(g, v, k, delta, c, left - 1, removed);
            removed.remove(&w);
            if found.is_some() {
                return found;
            }
        }
        None
    }
    go(g, v, k, delta, c, c, &mut BTreeSet::new())
}

/// Random connected graph: a random tree plus up to `extra` edges, degrees
/// capped at `max_degree`.
pub fn random_connected(n: usize, extra: usize, max_degree: usize, seed: u64) -> Graph {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut edges = BTreeSet::new();
    let mut deg = vec![0; n];
    for x in 1..n {
        let choices: Vec<Vertex> = (0..x).filter(|&y| deg[y] < max_degree).collect();
        let y = choices[rng.gen_range(0..choices.len())];
        edges.insert((y, x));
        deg[x] += 1;
        deg[y] += 1;
    }
    for _ in 0..extra * 4 {
        if edges.len() >= n - 1 + extra {
            break;
        }
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let (a, b) = (a.min(b), a.max(b));
        if a != b && deg[a] < max_degree && deg[b] < max_degree && edges.insert((a, b)) {
            deg[a] += 1;
            deg[b] += 1;
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

const INF: i64 = i64::MAX / 4;

struct Factor {
    scope: Vec<Vertex>,
    table: Vec<i64>,
}

/// Whole-graph optimum by variable elimination along a min-degree order.
///
/// Each vertex carries a label: in/out for vertex cover; "in" or "dominated
/// by neighbor j" for dominating set; "unmatched" or "matched to neighbor j"
/// for matching. All constraints are then pairwise along edges, so the cost
/// is exponential only in the width of the elimination order.
pub fn whole_graph_optimum(g: &Graph, problem: Problem) -> usize {
    let n = g.n();
    let dom: Vec<usize> = (0..n)
        .map(|x| match problem {
            Problem::VertexCover => 2,
            _ => g.degree(x) + 1,
        })
        .collect();
    let unary = |l: usize| -> i64 {
        match problem {
            Problem::VertexCover => l as i64,
            Problem::DominatingSet => (l == 0) as i64,
            Problem::Matching => -((l != 0) as i64),
        }
    };
    // pair cost for labels (a of x, b of y), with x < y adjacent
    let pair = |x: Vertex, a: usize, y: Vertex, b: usize| -> i64 {
        let ok = match problem {
            Problem::VertexCover => a == 1 || b == 1,
            Problem::DominatingSet => {
                let x_needs_y = a != 0 && g.neighbors(x)[a - 1] == y;
                let y_needs_x = b != 0 && g.neighbors(y)[b - 1] == x;
                (!x_needs_y || b == 0) && (!y_needs_x || a == 0)
            }
            Problem::Matching => {
                let x_to_y = a != 0 && g.neighbors(x)[a - 1] == y;
                let y_to_x = b != 0 && g.neighbors(y)[b - 1] == x;
                x_to_y == y_to_x
            }
        };
        if ok {
            0
        } else {
            INF
        }
    };
    let mut factors: Vec<Factor> = Vec::new();
    for x in 0..n {
        factors.push(Factor {
            scope: vec![x],
            table: (0..dom[x]).map(unary).collect(),
        });
    }
    for (x, y) in g.edges() {
        let (x, y) = (x.min(y), x.max(y));
        let mut table = vec![0; dom[x] * dom[y]];
        for a in 0..dom[x] {
            for b in 0..dom[y] {
                table[a * dom[y] + b] = pair(x, a, y, b);
            }
        }
        factors.push(Factor { scope: vec![x, y], table });
    }
    let mut nbrs: Vec<BTreeSet<Vertex>> = (0..n).map(|x| g.neighbors(x).iter().copied().collect()).collect();
    let mut alive: BTreeSet<Vertex> = (0..n).collect();
    let mut total = 0i64;
    while let Some(&x) = alive.iter().min_by_key(|&&x| (nbrs[x].len(), x)) {
        alive.remove(&x);
        let (mine, rest): (Vec<Factor>, Vec<Factor>) = factors.into_iter().partition(|f| f.scope.contains(&x));
        factors = rest;
        let scope: Vec<Vertex> = mine
            .iter()
            .flat_map(|f| f.scope.iter().copied())
            .filter(|&y| y != x)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let size: usize = scope.iter().map(|&y| dom[y]).product();
        assert!(size <= 1 << 22, "elimination order too wide");
        let mut table = vec![INF; size];
        let mut labels = vec![0usize; n];
        for idx in 0..size {
            let mut r = idx;
            for &y in scope.iter().rev() {
                labels[y] = r % dom[y];
                r /= dom[y];
            }
            for l in 0..dom[x] {
                labels[x] = l;
                let mut cost = 0i64;
                for f in &mine {
                    let mut pos = 0;
                    for &z in &f.scope {
                        pos = pos * dom[z] + labels[z];
                    }
                    cost = (cost + f.table[pos]).min(INF);
                }
                table[idx] = table[idx].min(cost);
            }
        }
        if scope.is_empty() {
            total += table[0];
        } else {
            factors.push(Factor { scope: scope.clone(), table });
        }
        for &y in &scope {
            nbrs[y].remove(&x);
            for &z in &scope {
                if z != y {
                    nbrs[y].insert(z);
                }
            }
        }
    }
    assert!(total < INF / 2, "infeasible labelling");
    match problem {
        Problem::Matching => (-total / 2) as usize,
        _ => total as usize,
    }
}

/// Random validity-preserving edits that add redundancy to a decomposition:
/// duplicate bags spliced into links, empty leaves, vertices copied from a
/// linked bag, and leaf bags holding a subset of their parent.
pub fn inflate(d: &twpart::tree_decomp::TreeDecomposition, rounds: usize, seed: u64) -> twpart::tree_decomp::TreeDecomposition {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut bags: Vec<Vec<Vertex>> = d.bags().iter().map(|b| b.iter().collect()).collect();
    let mut links: Vec<(usize, usize)> = d.links().to_vec();
    for _ in 0..rounds {
        let i = rng.gen_range(0..bags.len());
        match rng.gen_range(0..4) {
            0 => {
                // copy bag i and put the copy between i and one of its links
                let copy = bags.len();
                bags.push(bags[i].clone());
                if let Some(pos) = links.iter().position(|&(a, b)| a == i || b == i) {
                    let (a, b) = links[pos];
                    let other = if a == i { b } else { a };
                    links[pos] = (copy, other);
                }
                links.push((i, copy));
            }
            1 => {
                bags.push(Vec::new());
                links.push((i, bags.len() - 1));
            }
            2 => {
                let linked: Vec<usize> = links
                    .iter()
                    .filter_map(|&(a, b)| if a == i { Some(b) } else if b == i { Some(a) } else { None })
                    .collect();
                if !linked.is_empty() {
                    let j = linked[rng.gen_range(0..linked.len())];
                    if !bags[j].is_empty() {
                        let x = bags[j][rng.gen_range(0..bags[j].len())];
                        if !bags[i].contains(&x) {
                            bags[i].push(x);
                        }
                    }
                }
            }
            _ => {
                let sub: Vec<Vertex> = bags[i].iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
                bags.push(sub);
                links.push((i, bags.len() - 1));
            }
        }
    }
    twpart::tree_decomp::TreeDecomposition::new(bags.into_iter().map(VertexSet::from).collect(), links)
}
