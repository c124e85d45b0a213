//! Trained artifacts and the elementary probabilities of the model
//! structure.
//!
//! A predicate's standing meaning is a one-layer sigmoid unit over the pixie
//! (its *semantic function*). The prior over the pixies of a situation is
//! proportional to `exp(score)`, where the score sums link-matrix entries
//! over co-active (source, target) dimension pairs of every link. With all
//! link weights zero the prior is uniform over cardinality-C assignments.

use alloc::format;
use alloc::vec::Vec;

use crate::corpus::{ArgLabel, PredicateId, SituationGraph, Vocabulary};
use crate::math::{dot, sigmoid};
use crate::space::{MeanFieldVector, Pixie, SpaceConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SemanticFunction {
    weights: Vec<f64>,
    bias: f64,
}

impl SemanticFunction {
    pub fn new(weights: Vec<f64>, bias: f64) -> Result<Self> {
        if !bias.is_finite() || weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InconsistentModel(
                "non-finite semantic function parameter".into(),
            ));
        }
        Ok(Self { weights, bias })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            weights: alloc::vec![0.0; dim],
            bias: 0.0,
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// Pre-activation at a pixie: active weights plus bias.
    pub fn activation(&self, x: &Pixie) -> f64 {
        x.active().iter().map(|&i| self.weights[i]).sum::<f64>() + self.bias
    }

    /// Probability that the predicate is true of `x`.
    pub fn truth_probability(&self, x: &Pixie) -> Result<f64> {
        self.check_pixie(x)?;
        Ok(sigmoid(self.activation(x)))
    }

    /// Plug-in truth probability at a mean-field vector: the sigmoid of the
    /// mean input, not the mean of the sigmoid.
    pub fn truth_probability_mf(&self, q: &MeanFieldVector) -> Result<f64> {
        if q.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: q.dim(),
            });
        }
        Ok(sigmoid(dot(&self.weights, q.probs()) + self.bias))
    }

    fn check_pixie(&self, x: &Pixie) -> Result<()> {
        match x.active().last() {
            Some(&i) if i >= self.dim() => Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: i + 1,
            }),
            _ => Ok(()),
        }
    }
}

pub fn truth_probability(f: &SemanticFunction, x: &Pixie) -> Result<f64> {
    f.truth_probability(x)
}

pub fn truth_probability_mf(f: &SemanticFunction, q: &MeanFieldVector) -> Result<f64> {
    f.truth_probability_mf(q)
}

/// D x D couplings for one link label, row = source dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkMatrix {
    label: ArgLabel,
    dim: usize,
    weights: Vec<f64>,
}

impl LinkMatrix {
    pub fn new(label: ArgLabel, dim: usize, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != dim * dim {
            return Err(Error::InconsistentModel(format!(
                "{label} matrix has {} entries, expected {dim}x{dim}",
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InconsistentModel(format!("non-finite {label} weight")));
        }
        Ok(Self { label, dim, weights })
    }

    pub fn zeros(label: ArgLabel, dim: usize) -> Self {
        Self {
            label,
            dim,
            weights: alloc::vec![0.0; dim * dim],
        }
    }

    pub fn from_rows(label: ArgLabel, rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::InconsistentModel(format!(
                "{label} matrix row of length {} in a {dim}-row matrix",
                r.len()
            )));
        }
        Self::new(label, dim, rows.into_iter().flatten().collect())
    }

    pub fn label(&self) -> ArgLabel {
        self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, source: usize, target: usize) -> f64 {
        self.weights[source * self.dim + target]
    }

    pub fn set(&mut self, source: usize, target: usize, value: f64) {
        self.weights[source * self.dim + target] = value;
    }

    pub fn row(&self, source: usize) -> &[f64] {
        &self.weights[source * self.dim..(source + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    /// Sum of couplings over all co-active (source, target) pairs.
    pub fn pair_score(&self, source: &Pixie, target: &Pixie) -> f64 {
        source
            .active()
            .iter()
            .map(|&i| {
                let row = self.row(i);
                target.active().iter().map(|&j| row[j]).sum::<f64>()
            })
            .sum()
    }

    /// Accumulates `W q` (`transpose == false`) or `Wᵀ q` into `out`.
    pub(crate) fn accumulate(&self, q: &[f64], transpose: bool, out: &mut [f64]) {
        if transpose {
            for (j, &qj) in q.iter().enumerate() {
                if qj == 0.0 {
                    continue;
                }
                for (o, &w) in out.iter_mut().zip(self.row(j)) {
                    *o += w * qj;
                }
            }
        } else {
            for (i, o) in out.iter_mut().enumerate() {
                *o += dot(self.row(i), q);
            }
        }
    }
}

/// A full model: space, vocabulary, one semantic function per predicate and
/// one link matrix per label.
#[derive(Debug, Clone, PartialEq)]
pub struct FdsModel {
    config: SpaceConfig,
    vocab: Vocabulary,
    functions: Vec<SemanticFunction>,
    arg1: LinkMatrix,
    arg2: LinkMatrix,
}

impl FdsModel {
    pub fn new(
        config: SpaceConfig,
        vocab: Vocabulary,
        functions: Vec<SemanticFunction>,
        arg1: LinkMatrix,
        arg2: LinkMatrix,
    ) -> Result<Self> {
        if functions.len() != vocab.len() {
            return Err(Error::InconsistentModel(format!(
                "{} semantic functions for {} vocabulary entries",
                functions.len(),
                vocab.len()
            )));
        }
        if let Some((i, f)) = functions.iter().enumerate().find(|(_, f)| f.dim() != config.dim()) {
            return Err(Error::InconsistentModel(format!(
                "semantic function for `{}` has {} weights, dim is {}",
                vocab.entries()[i].form,
                f.dim(),
                config.dim()
            )));
        }
        for (m, label) in [(&arg1, ArgLabel::Arg1), (&arg2, ArgLabel::Arg2)] {
            if m.label() != label || m.dim() != config.dim() {
                return Err(Error::InconsistentModel(format!(
                    "expected a {label} matrix of side {}, found {} of side {}",
                    config.dim(),
                    m.label(),
                    m.dim()
                )));
            }
        }
        Ok(Self {
            config,
            vocab,
            functions,
            arg1,
            arg2,
        })
    }

    /// Every semantic function zero and no link couplings.
    pub fn zeros(config: SpaceConfig, vocab: Vocabulary) -> Self {
        let d = config.dim();
        Self {
            functions: (0..vocab.len()).map(|_| SemanticFunction::zero(d)).collect(),
            vocab,
            config,
            arg1: LinkMatrix::zeros(ArgLabel::Arg1, d),
            arg2: LinkMatrix::zeros(ArgLabel::Arg2, d),
        }
    }

    pub fn config(&self) -> SpaceConfig {
        self.config
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn functions(&self) -> &[SemanticFunction] {
        &self.functions
    }

    pub fn function(&self, pred: PredicateId) -> &SemanticFunction {
        &self.functions[pred.index()]
    }

    pub fn try_function(&self, pred: PredicateId) -> Result<&SemanticFunction> {
        self.functions
            .get(pred.index())
            .ok_or_else(|| Error::UnknownPredicate(format!("#{}", pred.index())))
    }

    pub fn link(&self, label: ArgLabel) -> &LinkMatrix {
        match label {
            ArgLabel::Arg1 => &self.arg1,
            ArgLabel::Arg2 => &self.arg2,
        }
    }

    pub fn set_function(&mut self, pred: PredicateId, f: SemanticFunction) -> Result<()> {
        if f.dim() != self.config.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.config.dim(),
                found: f.dim(),
            });
        }
        self.functions[pred.index()] = f;
        Ok(())
    }

    pub fn set_link(&mut self, m: LinkMatrix) -> Result<()> {
        if m.dim() != self.config.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.config.dim(),
                found: m.dim(),
            });
        }
        match m.label() {
            ArgLabel::Arg1 => self.arg1 = m,
            ArgLabel::Arg2 => self.arg2 = m,
        }
        Ok(())
    }

    /// Unnormalised log prior of a situation. `assignment[k]` is the pixie
    /// of node `k` in graph order.
    pub fn situation_score(&self, graph: &SituationGraph, assignment: &[Pixie]) -> Result<f64> {
        if assignment.len() != graph.len() {
            return Err(Error::IncompleteAssignment {
                expected: graph.len(),
                found: assignment.len(),
            });
        }
        Ok(graph
            .links()
            .iter()
            .map(|l| {
                self.link(l.label)
                    .pair_score(&assignment[l.source], &assignment[l.target])
            })
            .sum())
    }

    /// The same model with dimension `i` renamed `perm[i]` everywhere.
    pub fn relabel_dimensions(&self, perm: &[usize]) -> Result<Self> {
        let d = self.config.dim();
        let mut seen = alloc::vec![false; d];
        if perm.len() != d || perm.iter().any(|&p| p >= d || core::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidParameter("not a permutation of the dimensions".into()));
        }
        let functions = self
            .functions
            .iter()
            .map(|f| {
                let mut w = alloc::vec![0.0; d];
                for (i, &wi) in f.weights.iter().enumerate() {
                    w[perm[i]] = wi;
                }
                SemanticFunction {
                    weights: w,
                    bias: f.bias,
                }
            })
            .collect();
        let relabel = |m: &LinkMatrix| {
            let mut out = LinkMatrix::zeros(m.label, d);
            for i in 0..d {
                for j in 0..d {
                    out.set(perm[i], perm[j], m.get(i, j));
                }
            }
            out
        };
        Ok(Self {
            config: self.config,
            vocab: self.vocab.clone(),
            functions,
            arg1: relabel(&self.arg1),
            arg2: relabel(&self.arg2),
        })
    }
}

pub fn situation_score(model: &FdsModel, graph: &SituationGraph, assignment: &[Pixie]) -> Result<f64> {
    model.situation_score(graph, assignment)
}
