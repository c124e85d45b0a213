use alloc::vec::Vec;

use super::{check_observation, observation_set, Observation};
use crate::corpus::SituationGraph;
use crate::math::{dot, logit, sigmoid};
use crate::model::FdsModel;
use crate::space::MeanFieldVector;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanFieldOptions {
    /// Stop once no component moves by this much over a full sweep.
    pub tolerance: f64,
    pub max_iters: usize,
}

impl Default for MeanFieldOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-4,
            max_iters: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanFieldResult {
    /// One vector per graph node, in graph order.
    pub vectors: Vec<MeanFieldVector>,
    /// Number of full sweeps performed.
    pub iterations: usize,
    /// Largest component change in the last sweep.
    pub max_delta: f64,
    pub converged: bool,
}

/// Sigmoids of the logits shifted by the unique `s` that makes the
/// components sum to `card`. The shift is found by bisection.
pub fn cardinality_project(logits: &[f64], card: usize) -> MeanFieldVector {
    let d = logits.len();
    let target = card as f64;
    let hi_logit = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo_logit = logits.iter().copied().fold(f64::INFINITY, f64::min);
    if hi_logit == lo_logit {
        return MeanFieldVector::from_probs_unchecked(alloc::vec![target / d as f64; d]);
    }
    let base = logit(target / d as f64);
    let total = |s: f64| logits.iter().map(|&l| sigmoid(l + s)).sum::<f64>();
    // At `lo` every shifted logit is at most `base`, so the sum is at most
    // `card`; symmetrically at `hi`.
    let (mut lo, mut hi) = (base - hi_logit, base - lo_logit);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if total(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s = if (total(lo) - target).abs() <= (total(hi) - target).abs() {
        lo
    } else {
        hi
    };
    MeanFieldVector::from_probs_unchecked(logits.iter().map(|&l| sigmoid(l + s)).collect())
}

/// Coordinate ascent over nodes in graph order, starting from the uniform
/// mean field.
///
/// A node's logit for dimension `i` collects the couplings to the current
/// mean fields of its neighbours (rows of the matrix for outgoing links,
/// columns for incoming ones) and, for each predicate observed on it,
/// `w_i · (1 − σ(w·q + b))`. The logits are then projected back onto the
/// expected-cardinality constraint. Non-convergence is reported in the
/// result, never as an error.
pub fn mean_field(
    model: &FdsModel,
    graph: &SituationGraph,
    observations: &[Observation],
    opts: MeanFieldOptions,
) -> Result<MeanFieldResult> {
    let obs = observation_set(model, graph, observations)?;
    let config = model.config();
    let (d, card) = (config.dim(), config.card());
    let n = graph.len();
    let mut q: Vec<Vec<f64>> = (0..n).map(|_| config.uniform_mean_field().into_probs()).collect();
    let per_node: Vec<Vec<_>> = (0..n)
        .map(|node| {
            obs.iter()
                .filter(|o| o.node == node)
                .map(|o| model.function(o.pred))
                .collect()
        })
        .collect();

    let mut logits = alloc::vec![0.0; d];
    let mut iterations = 0;
    let mut max_delta = f64::INFINITY;
    while iterations < opts.max_iters.max(1) {
        iterations += 1;
        max_delta = 0.0f64;
        for node in 0..n {
            logits.iter_mut().for_each(|l| *l = 0.0);
            for link in graph.links() {
                let m = model.link(link.label);
                if link.source == node {
                    m.accumulate(&q[link.target], false, &mut logits);
                }
                if link.target == node {
                    m.accumulate(&q[link.source], true, &mut logits);
                }
            }
            for f in &per_node[node] {
                let slack = 1.0 - sigmoid(dot(f.weights(), &q[node]) + f.bias());
                for (l, &w) in logits.iter_mut().zip(f.weights()) {
                    *l += w * slack;
                }
            }
            let updated = cardinality_project(&logits, card).into_probs();
            let delta = updated
                .iter()
                .zip(&q[node])
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            max_delta = max_delta.max(delta);
            q[node] = updated;
        }
        if max_delta < opts.tolerance {
            break;
        }
    }
    Ok(MeanFieldResult {
        vectors: q.into_iter().map(MeanFieldVector::from_probs_unchecked).collect(),
        iterations,
        converged: max_delta < opts.tolerance,
        max_delta,
    })
}

/// Approximate `P(t_query | observations)`: the query's semantic function
/// applied to the mean field of the query node.
pub fn conditional_truth_mf(
    model: &FdsModel,
    graph: &SituationGraph,
    observations: &[Observation],
    query: Observation,
    opts: MeanFieldOptions,
) -> Result<(f64, MeanFieldResult)> {
    check_observation(model, graph, &query)?;
    let result = mean_field(model, graph, observations, opts)?;
    let p = model
        .function(query.pred)
        .truth_probability_mf(&result.vectors[query.node])?;
    Ok((p, result))
}
