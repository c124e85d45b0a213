//! Occasion meanings: exact posteriors on enumerable spaces, mean-field
//! posteriors in general, and conditional probabilities of truth.

mod exact;
mod mean_field;

pub use exact::{exact_conditional_truth, exact_posterior, PosteriorTable};
pub use mean_field::{cardinality_project, conditional_truth_mf, mean_field, MeanFieldOptions, MeanFieldResult};

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use crate::corpus::{PredicateId, SituationGraph};
use crate::model::FdsModel;
use crate::{Error, Result};

/// A predicate observed true of the pixie at a node (by node index).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Observation {
    pub node: usize,
    pub pred: PredicateId,
}

impl Observation {
    pub fn new(graph: &SituationGraph, node_id: &str, pred: PredicateId) -> Result<Self> {
        Ok(Self {
            node: graph.index_of(node_id)?,
            pred,
        })
    }

    /// One observation per node that carries a predicate.
    pub fn from_graph(graph: &SituationGraph) -> Vec<Self> {
        graph
            .nodes()
            .iter()
            .enumerate()
            .filter_map(|(node, n)| n.pred.map(|pred| Self { node, pred }))
            .collect()
    }
}

/// Conditioning on the same truth variable twice is the same as once, so
/// observations are treated as a set.
pub(crate) fn observation_set(
    model: &FdsModel,
    graph: &SituationGraph,
    observations: &[Observation],
) -> Result<BTreeSet<Observation>> {
    for o in observations {
        check_observation(model, graph, o)?;
    }
    Ok(observations.iter().copied().collect())
}

pub(crate) fn check_observation(model: &FdsModel, graph: &SituationGraph, o: &Observation) -> Result<()> {
    if o.node >= graph.len() {
        return Err(Error::UnknownNode(format!("#{}", o.node)));
    }
    if !model.vocab().contains(o.pred) {
        return Err(Error::UnknownPredicate(format!("#{}", o.pred.index())));
    }
    Ok(())
}
