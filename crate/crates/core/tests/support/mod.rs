//! Test-only oracles. These recompute posteriors by brute force over
//! bitmasks with dense vectors, independent of the library's enumeration
//! and sparse scoring paths.
#![allow(dead_code)]

use fds_core::corpus::{ArgLabel, Node, Role, SituationGraph, Vocabulary};
use fds_core::model::{FdsModel, LinkMatrix, SemanticFunction};
use fds_core::{Observation, SpaceConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Every D-bit mask with exactly C bits set, as dense 0/1 vectors.
pub fn dense_pixies(d: usize, c: usize) -> Vec<Vec<f64>> {
    (0u32..(1 << d))
        .filter(|m| m.count_ones() as usize == c)
        .map(|m| (0..d).map(|i| ((m >> i) & 1) as f64).collect())
        .collect()
}

fn dense_matrix(m: &LinkMatrix) -> Vec<Vec<f64>> {
    let d = m.dim();
    (0..d).map(|i| (0..d).map(|j| m.get(i, j)).collect()).collect()
}

fn quad(x: &[f64], w: &[Vec<f64>], y: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..x.len() {
        for j in 0..y.len() {
            s += x[i] * w[i][j] * y[j];
        }
    }
    s
}

fn truth(f: &SemanticFunction, x: &[f64]) -> f64 {
    sigmoid(f.weights().iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + f.bias())
}

/// Brute-force joint enumeration over all nodes.
pub struct NaiveJoint {
    pub pixies: Vec<Vec<f64>>,
    pub assignments: Vec<Vec<usize>>,
    pub weights: Vec<f64>,
}

impl NaiveJoint {
    pub fn new(model: &FdsModel, graph: &SituationGraph, obs: &[Observation]) -> Self {
        let c = model.config();
        let pixies = dense_pixies(c.dim(), c.card());
        let n = graph.len();
        let mats = [
            dense_matrix(model.link(ArgLabel::Arg1)),
            dense_matrix(model.link(ArgLabel::Arg2)),
        ];
        let mut obs: Vec<Observation> = obs.to_vec();
        obs.sort();
        obs.dedup();
        let mut assignments = vec![vec![]];
        for _ in 0..n {
            assignments = assignments
                .into_iter()
                .flat_map(|a| (0..pixies.len()).map(move |p| [a.clone(), vec![p]].concat()))
                .collect();
        }
        let weights = assignments
            .iter()
            .map(|a| {
                let score: f64 = graph
                    .links()
                    .iter()
                    .map(|l| quad(&pixies[a[l.source]], &mats[l.label as usize], &pixies[a[l.target]]))
                    .sum();
                let lik: f64 = obs
                    .iter()
                    .map(|o| truth(model.function(o.pred), &pixies[a[o.node]]))
                    .product();
                score.exp() * lik
            })
            .collect();
        Self {
            pixies,
            assignments,
            weights,
        }
    }

    pub fn marginals(&self, node: usize) -> Vec<f64> {
        let z: f64 = self.weights.iter().sum();
        let d = self.pixies[0].len();
        let mut m = vec![0.0; d];
        for (a, w) in self.assignments.iter().zip(&self.weights) {
            for i in 0..d {
                m[i] += w * self.pixies[a[node]][i] / z;
            }
        }
        m
    }

    /// E[P(t_query)] under the posterior.
    pub fn expected_truth(&self, model: &FdsModel, query: Observation) -> f64 {
        let z: f64 = self.weights.iter().sum();
        self.assignments
            .iter()
            .zip(&self.weights)
            .map(|(a, w)| w * truth(model.function(query.pred), &self.pixies[a[query.node]]))
            .sum::<f64>()
            / z
    }

    pub fn posterior(&self) -> Vec<f64> {
        let z: f64 = self.weights.iter().sum();
        self.weights.iter().map(|w| w / z).collect()
    }
}

pub const NOUNS: [&str; 4] = ["n0", "n1", "n2", "n3"];
pub const VERBS: [&str; 2] = ["v0", "v1"];

pub fn toy_vocab() -> Vocabulary {
    let entries = NOUNS
        .iter()
        .map(|&n| (n, Role::Noun, 1))
        .chain(VERBS.iter().map(|&v| (v, Role::Verb, 1)));
    Vocabulary::from_counts(entries, 1)
}

/// Seeded random model: function weights in [-2, 2], biases in [-1, 1],
/// link couplings in [-1, 1].
pub fn random_model(seed: u64, d: usize, c: usize) -> FdsModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let config = SpaceConfig::new(d, c).unwrap();
    let vocab = toy_vocab();
    let functions = (0..vocab.len())
        .map(|_| {
            let w = (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect();
            SemanticFunction::new(w, rng.gen_range(-1.0..1.0)).unwrap()
        })
        .collect();
    let mut link = |label| {
        let w = (0..d * d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        LinkMatrix::new(label, d, w).unwrap()
    };
    let arg1 = link(ArgLabel::Arg1);
    let arg2 = link(ArgLabel::Arg2);
    FdsModel::new(config, vocab, functions, arg1, arg2).unwrap()
}

/// 1: a lone pixie; 2: verb with ARG1; 3: full SVO. Every node observes a
/// predicate of the right role.
pub fn svo_situation(model: &FdsModel, nodes: usize, seed: u64) -> (SituationGraph, Vec<Observation>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let v = model.vocab();
    let mut noun = || v.get(NOUNS[rng.gen_range(0..NOUNS.len())], Role::Noun).unwrap();
    let (subj, obj) = (noun(), noun());
    let verb = v.get(VERBS[(seed % 2) as usize], Role::Verb).unwrap();
    let graph = match nodes {
        1 => SituationGraph::single("x", Some(subj)),
        2 => SituationGraph::from_named(
            vec![Node::new("x", Some(subj)), Node::new("y", Some(verb))],
            [("y", "x", ArgLabel::Arg1)],
        )
        .unwrap(),
        _ => SituationGraph::from_named(
            vec![
                Node::new("x", Some(subj)),
                Node::new("y", Some(verb)),
                Node::new("z", Some(obj)),
            ],
            [("y", "x", ArgLabel::Arg1), ("y", "z", ArgLabel::Arg2)],
        )
        .unwrap(),
    };
    let obs = Observation::from_graph(&graph);
    (graph, obs)
}

/// Largest per-dimension gap between two marginal vectors.
pub fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
