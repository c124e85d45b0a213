use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::{check_observation, observation_set, Observation};
use crate::corpus::SituationGraph;
use crate::math::{exp, ln, sigmoid};
use crate::model::FdsModel;
use crate::space::Pixie;
use crate::{Error, Result};

/// Exact posterior over every joint assignment of pixies to nodes.
///
/// Assignment `k` is decoded in mixed radix over the lexicographic pixie
/// list, node 0 most significant, so the support is implicit and covers the
/// joint space exactly once.
#[derive(Debug, Clone)]
pub struct PosteriorTable {
    dim: usize,
    pixies: Vec<Pixie>,
    nodes: usize,
    probs: Vec<f64>,
}

impl PosteriorTable {
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn pixies(&self) -> &[Pixie] {
        &self.pixies
    }

    /// Pixie indices (into [`Self::pixies`]) of assignment `k`, in node order.
    pub fn assignment_indices(&self, k: usize) -> Vec<usize> {
        decode(k, self.pixies.len(), self.nodes)
    }

    pub fn assignment(&self, k: usize) -> Vec<&Pixie> {
        self.assignment_indices(k)
            .into_iter()
            .map(|i| &self.pixies[i])
            .collect()
    }

    /// Posterior activation probability of every dimension at `node`.
    pub fn marginals(&self, node: usize) -> Vec<f64> {
        let n = self.pixies.len();
        let stride = n.pow((self.nodes - 1 - node) as u32);
        let mut per_pixie = alloc::vec![0.0; n];
        for (k, &p) in self.probs.iter().enumerate() {
            per_pixie[(k / stride) % n] += p;
        }
        let mut out = alloc::vec![0.0; self.dim];
        for (x, p) in self.pixies.iter().zip(per_pixie) {
            for &i in x.active() {
                out[i] += p;
            }
        }
        out
    }
}

fn decode(mut k: usize, base: usize, nodes: usize) -> Vec<usize> {
    let mut digits = alloc::vec![0; nodes];
    for d in digits.iter_mut().rev() {
        *d = k % base;
        k /= base;
    }
    digits
}

/// Log weights `score + Σ log P(truth)` of every joint assignment.
struct JointSpace {
    pixies: Vec<Pixie>,
    nodes: usize,
    prior: Vec<f64>,
}

impl JointSpace {
    fn new(model: &FdsModel, graph: &SituationGraph, cap: u64) -> Result<Self> {
        let config = model.config();
        let n = graph.len();
        let too_large = || Error::TooLarge {
            log10_size: config.count_pixies() * n as f64,
            cap,
        };
        let total = config
            .pixie_count()
            .and_then(|c| c.checked_pow(n as u32))
            .filter(|&t| t <= cap as u128)
            .ok_or_else(too_large)?;
        let pixies: Vec<Pixie> = config.enumerate_pixies_capped(cap)?.collect();
        let base = pixies.len();
        // Pairwise scores per link, indexed [source pixie * base + target pixie].
        let pair_tables: Vec<Vec<f64>> = graph
            .links()
            .iter()
            .map(|l| {
                let m = model.link(l.label);
                let mut t = Vec::with_capacity(base * base);
                for s in &pixies {
                    for u in &pixies {
                        t.push(m.pair_score(s, u));
                    }
                }
                t
            })
            .collect();
        let prior = (0..total as usize)
            .map(|k| {
                let a = decode(k, base, n);
                graph
                    .links()
                    .iter()
                    .zip(&pair_tables)
                    .map(|(l, t)| t[a[l.source] * base + a[l.target]])
                    .sum()
            })
            .collect();
        Ok(Self {
            pixies,
            nodes: n,
            prior,
        })
    }

    fn log_weights(&self, model: &FdsModel, observations: &BTreeSet<Observation>) -> Vec<f64> {
        let base = self.pixies.len();
        let log_truth: Vec<(usize, Vec<f64>)> = observations
            .iter()
            .map(|o| {
                let f = model.function(o.pred);
                (
                    o.node,
                    self.pixies.iter().map(|x| ln(sigmoid(f.activation(x)))).collect(),
                )
            })
            .collect();
        self.prior
            .iter()
            .enumerate()
            .map(|(k, &s)| {
                let a = decode(k, base, self.nodes);
                s + log_truth.iter().map(|(node, lt)| lt[a[*node]]).sum::<f64>()
            })
            .collect()
    }
}

fn normalise(log_w: &[f64], shift: f64) -> (Vec<f64>, f64) {
    let w: Vec<f64> = log_w.iter().map(|&l| exp(l - shift)).collect();
    let z = w.iter().sum();
    (w, z)
}

fn max(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Posterior ∝ exp(score) · Π P(t_obs | pixie), by full enumeration.
pub fn exact_posterior(
    model: &FdsModel,
    graph: &SituationGraph,
    observations: &[Observation],
    cap: u64,
) -> Result<PosteriorTable> {
    let obs = observation_set(model, graph, observations)?;
    let space = JointSpace::new(model, graph, cap)?;
    let log_w = space.log_weights(model, &obs);
    let (w, z) = normalise(&log_w, max(&log_w));
    Ok(PosteriorTable {
        dim: model.config().dim(),
        probs: w.into_iter().map(|x| x / z).collect(),
        pixies: space.pixies,
        nodes: space.nodes,
    })
}

/// `P(t_query | observations)` as the ratio of the joint evidence with and
/// without the query's truth variable. A query that is already observed
/// yields exactly 1.
pub fn exact_conditional_truth(
    model: &FdsModel,
    graph: &SituationGraph,
    observations: &[Observation],
    query: Observation,
    cap: u64,
) -> Result<f64> {
    check_observation(model, graph, &query)?;
    let obs = observation_set(model, graph, observations)?;
    let mut with_query = obs.clone();
    with_query.insert(query);
    let space = JointSpace::new(model, graph, cap)?;
    let den_log = space.log_weights(model, &obs);
    let num_log = space.log_weights(model, &with_query);
    let shift = max(&den_log);
    let (_, den) = normalise(&den_log, shift);
    let (_, num) = normalise(&num_log, shift);
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Role, Vocabulary};
    use crate::model::SemanticFunction;
    use crate::space::{SpaceConfig, DEFAULT_ENUMERATION_CAP};
    use alloc::vec;

    fn one_pred_model(d: usize, c: usize, w: Vec<f64>, b: f64) -> FdsModel {
        let vocab = Vocabulary::from_counts([("p", Role::Noun, 1), ("a", Role::Noun, 1)], 1);
        let mut m = FdsModel::zeros(SpaceConfig::new(d, c).unwrap(), vocab);
        let p = m.vocab().get("p", Role::Noun).unwrap();
        m.set_function(p, SemanticFunction::new(w, b).unwrap()).unwrap();
        m
    }

    #[test]
    fn uniform_without_information() {
        let m = one_pred_model(5, 2, vec![0.0; 5], 0.0);
        let g = SituationGraph::single("x", None);
        let p = m.vocab().get("p", Role::Noun).unwrap();
        let t = exact_posterior(&m, &g, &[Observation { node: 0, pred: p }], DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(t.len(), 10);
        for &q in t.probs() {
            assert!((q - 0.1).abs() < 1e-15);
        }
        for q in t.marginals(0) {
            assert!((q - 0.4).abs() < 1e-12);
        }
    }

    #[test]
    fn single_node_posterior_is_proportional_to_truth() {
        let w = vec![1.0, -0.5, 2.0, 0.0];
        let m = one_pred_model(4, 2, w.clone(), -0.3);
        let p = m.vocab().get("p", Role::Noun).unwrap();
        let g = SituationGraph::single("x", None);
        let t = exact_posterior(&m, &g, &[Observation { node: 0, pred: p }], DEFAULT_ENUMERATION_CAP).unwrap();
        let raw: Vec<f64> = m
            .config()
            .enumerate_pixies()
            .unwrap()
            .map(|x| sigmoid(x.active().iter().map(|&i| w[i]).sum::<f64>() - 0.3))
            .collect();
        let z: f64 = raw.iter().sum();
        for (a, b) in t.probs().iter().zip(&raw) {
            assert!((a - b / z).abs() < 1e-14);
        }
    }

    #[test]
    fn repeated_conditioning_is_idempotent() {
        let m = one_pred_model(6, 2, vec![0.4, -1.0, 2.0, 0.1, 0.0, -0.7], 0.2);
        let p = m.vocab().get("p", Role::Noun).unwrap();
        let g = SituationGraph::single("x", None);
        let o = Observation { node: 0, pred: p };
        let v = exact_conditional_truth(&m, &g, &[o, o], o, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn too_large_space_is_refused() {
        let m = one_pred_model(40, 10, vec![0.0; 40], 0.0);
        let g = SituationGraph::single("x", None);
        assert!(matches!(
            exact_posterior(&m, &g, &[], DEFAULT_ENUMERATION_CAP),
            Err(Error::TooLarge { .. })
        ));
    }
}
