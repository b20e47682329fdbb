//! Estimators and property testers built on the partitioning oracle.
//!
//! Both only ever look at `f(v)` for sampled vertices and solve or check the
//! component exactly.
//!
//! Sample sizes, with ε the target additive error as a fraction of `n`:
//!
//! * estimators: `s = ⌈4.5 · ln 40 / ε²⌉` vertices, so by Hoeffding the mean of
//!   `y_v ∈ [0, 1]` is within `ε/3` of its expectation with probability at
//!   least `1 - 2/40^(1/2)`, comfortably above 3/4;
//! * tester, cut stage: `s₁ = ⌈32 / ε²⌉` trials, each a uniform vertex `v` and
//!   a uniform slot `j ∈ [1, d]`; the trial hits when `j ≤ deg(v)` and the
//!   `j`-th neighbor lies outside `f(v)`. A hit has probability exactly
//!   `2 · cut / (d n)`, so the hit rate estimates the cut in units of `d n / 2`.
//!   The tester rejects when the hit rate exceeds `ε`, i.e. when the estimated
//!   cut exceeds `ε d n / 2`, half the edit distance that makes a graph ε-far;
//! * tester, component stage: `s₂ = ⌈16 / ε⌉` vertices whose components are
//!   checked exactly.

mod membership;
mod solve;

pub use membership::{
    check_component_membership, MembershipCapExceeded, Property, UnknownProperty, COLORING_CAP,
    TREEWIDTH_CHECK_CAP,
};
pub use solve::{exact_component_optimum, Problem, SolverCapExceeded, BRANCHING_CAP, MATCHING_CAP};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Vertex, VertexSet};
use crate::oracle::OracleSession;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub problem: Problem,
    pub estimate: f64,
    pub samples: usize,
    pub epsilon: f64,
    pub seed: u64,
}

pub fn estimator_samples(epsilon: f64) -> usize {
    (4.5 * 40f64.ln() / (epsilon * epsilon)).ceil() as usize
}

pub fn cut_stage_samples(epsilon: f64) -> usize {
    (32.0 / (epsilon * epsilon)).ceil() as usize
}

pub fn component_stage_samples(epsilon: f64) -> usize {
    (16.0 / epsilon).ceil() as usize
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum AppError {
    #[error("epsilon must lie in (0, 1], got {0}")]
    Epsilon(f64),
    #[error(transparent)]
    Solver(#[from] SolverCapExceeded),
    #[error(transparent)]
    Membership(#[from] MembershipCapExceeded),
}

fn check_epsilon(epsilon: f64) -> Result<(), AppError> {
    if epsilon > 0.0 && epsilon <= 1.0 {
        Ok(())
    } else {
        Err(AppError::Epsilon(epsilon))
    }
}

fn sample_vertices(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<Vertex> {
    (0..count).map(|_| rng.gen_range(0..n)).collect()
}

fn answer(session: &OracleSession<'_>, v: Vertex) -> VertexSet {
    session.query(v).expect("sampled vertex is in range")
}

/// Additive estimate of the optimum of `problem` on the session's graph.
pub fn estimate_optimum(
    session: &OracleSession<'_>,
    problem: Problem,
    epsilon: f64,
    seed: u64,
) -> Result<EstimateReport, AppError> {
    check_epsilon(epsilon)?;
    let g = session.graph();
    let samples = estimator_samples(epsilon);
    let mut report = EstimateReport {
        problem,
        estimate: 0.0,
        samples,
        epsilon,
        seed,
    };
    if g.n() == 0 {
        return Ok(report);
    }
    let picks = sample_vertices(&mut ChaCha8Rng::seed_from_u64(seed), g.n(), samples);
    let ys = picks
        .par_iter()
        .map(|&v| {
            let comp = answer(session, v);
            let (sub, _) = g.induced(&comp);
            exact_component_optimum(problem, &sub).map(|opt| opt as f64 / comp.len() as f64)
        })
        .collect::<Result<Vec<f64>, _>>()?;
    report.estimate = g.n() as f64 * ys.iter().sum::<f64>() / samples as f64;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    /// A sampled component that fails the property.
    ViolatingComponent { vertex: Vertex, component: VertexSet },
    /// The cut stage: hit count over trials, and the implied cut size.
    CutEstimate { hits: usize, trials: usize, cut_edges: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestVerdict {
    pub property: Property,
    pub accept: bool,
    pub evidence: Option<Evidence>,
}

/// Two-stage tester; `d` is the degree bound of the model.
pub fn test_property(
    session: &OracleSession<'_>,
    property: Property,
    epsilon: f64,
    seed: u64,
) -> Result<TestVerdict, AppError> {
    check_epsilon(epsilon)?;
    let g = session.graph();
    let n = g.n();
    let accept = TestVerdict {
        property,
        accept: true,
        evidence: None,
    };
    if n == 0 {
        return Ok(accept);
    }
    let d = session.params().d.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let trials = cut_stage_samples(epsilon);
    let draws: Vec<(Vertex, usize)> = (0..trials).map(|_| (rng.gen_range(0..n), rng.gen_range(0..d))).collect();
    let hits = draws
        .par_iter()
        .filter(|&&(v, j)| match g.neighbors(v).get(j) {
            Some(&u) => !answer(session, v).contains(u),
            None => false,
        })
        .count();
    if hits as f64 > epsilon * trials as f64 {
        let cut_edges = hits as f64 / trials as f64 * (d * n) as f64 / 2.0;
        return Ok(TestVerdict {
            property,
            accept: false,
            evidence: Some(Evidence::CutEstimate { hits, trials, cut_edges }),
        });
    }

    let picks = sample_vertices(&mut rng, n, component_stage_samples(epsilon));
    for v in picks {
        let comp = answer(session, v);
        let (sub, _) = g.induced(&comp);
        if !check_component_membership(property, &sub)? {
            return Ok(TestVerdict {
                property,
                accept: false,
                evidence: Some(Evidence::ViolatingComponent { vertex: v, component: comp }),
            });
        }
    }
    Ok(accept)
}
