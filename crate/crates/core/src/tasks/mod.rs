//! Evaluation procedures: lexical similarity, similarity of verbs in
//! context, relative-clause retrieval, plus rank metrics and an ensemble
//! with external embeddings.

mod embeddings;
mod metrics;

pub use embeddings::{cosine, ensemble_score, ExternalEmbeddings};
pub use metrics::{average_precision, mean_average_precision, spearman};

use alloc::vec::Vec;

use crate::corpus::{triple_to_graph, PredicateId, SituationGraph, SvoTriple, OBJECT_NODE, SUBJECT_NODE, VERB_NODE};
use crate::inference::{conditional_truth_mf, exact_conditional_truth, mean_field, MeanFieldOptions, Observation};
use crate::model::FdsModel;
use crate::space::MeanFieldVector;
use crate::{Error, Result};

fn known(model: &FdsModel, preds: &[PredicateId]) -> Result<()> {
    match preds.iter().find(|p| !model.vocab().contains(**p)) {
        Some(p) => Err(Error::UnknownPredicate(alloc::format!("#{}", p.index()))),
        None => Ok(()),
    }
}

/// `P(t_a | t_b) · P(t_b | t_a)` on a single pixie, each direction by mean
/// field.
pub fn lexical_similarity(model: &FdsModel, a: PredicateId, b: PredicateId, opts: MeanFieldOptions) -> Result<f64> {
    known(model, &[a, b])?;
    let g = SituationGraph::single("x", None);
    let dir = |given: PredicateId, query: PredicateId| {
        conditional_truth_mf(
            model,
            &g,
            &[Observation { node: 0, pred: given }],
            Observation { node: 0, pred: query },
            opts,
        )
        .map(|(p, _)| p)
    };
    Ok(dir(b, a)? * dir(a, b)?)
}

/// [`lexical_similarity`] with both conditionals computed by enumeration.
pub fn lexical_similarity_exact(model: &FdsModel, a: PredicateId, b: PredicateId, cap: u64) -> Result<f64> {
    known(model, &[a, b])?;
    let g = SituationGraph::single("x", None);
    let dir = |given: PredicateId, query: PredicateId| {
        exact_conditional_truth(
            model,
            &g,
            &[Observation { node: 0, pred: given }],
            Observation { node: 0, pred: query },
            cap,
        )
    };
    Ok(dir(b, a)? * dir(a, b)?)
}

/// Two SVO triples differing only in the verb.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvoComparison {
    pub subject: PredicateId,
    pub verb1: PredicateId,
    pub object: PredicateId,
    pub verb2: PredicateId,
    pub gold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scored {
    pub score: f64,
    /// False if any mean-field run hit its iteration cap.
    pub converged: bool,
}

/// Mean field of the verb conditioned on subject, verb and object, with the
/// other verb's function applied to it; the product of both directions.
pub fn contextual_verb_similarity(model: &FdsModel, cmp: &SvoComparison, opts: MeanFieldOptions) -> Result<Scored> {
    known(model, &[cmp.subject, cmp.verb1, cmp.object, cmp.verb2])?;
    let one_way = |verb: PredicateId, other: PredicateId| -> Result<(f64, bool)> {
        let triple = SvoTriple::new(Some(cmp.subject), verb, Some(cmp.object))?;
        let g = triple_to_graph(&triple);
        let y = g.index_of(VERB_NODE)?;
        let (p, r) = conditional_truth_mf(
            model,
            &g,
            &Observation::from_graph(&g),
            Observation { node: y, pred: other },
            opts,
        )?;
        Ok((p, r.converged))
    };
    let (s1, c1) = one_way(cmp.verb1, cmp.verb2)?;
    let (s2, c2) = one_way(cmp.verb2, cmp.verb1)?;
    Ok(Scored {
        score: s1 * s2,
        converged: c1 && c2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClauseKind {
    /// The hypernym is the subject (ARG1) of the verb.
    Sbj,
    /// The hypernym is the object (ARG2) of the verb.
    Obj,
}

/// A hypernym modified by a relative clause with a transitive verb.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelpronProperty {
    /// The term this property describes.
    pub term: PredicateId,
    pub clause: ClauseKind,
    pub hypernym: PredicateId,
    pub verb: PredicateId,
    pub argument: PredicateId,
}

impl RelpronProperty {
    /// The three-pixie situation and the hypernym's node index.
    pub fn situation(&self) -> Result<(SituationGraph, usize)> {
        let (triple, node) = match self.clause {
            ClauseKind::Sbj => (
                SvoTriple::new(Some(self.hypernym), self.verb, Some(self.argument))?,
                SUBJECT_NODE,
            ),
            ClauseKind::Obj => (
                SvoTriple::new(Some(self.argument), self.verb, Some(self.hypernym))?,
                OBJECT_NODE,
            ),
        };
        let g = triple_to_graph(&triple);
        let idx = g.index_of(node)?;
        Ok((g, idx))
    }

    /// Mean field of the hypernym's pixie given all three predicates.
    pub fn hypernym_mean_field(&self, model: &FdsModel, opts: MeanFieldOptions) -> Result<(MeanFieldVector, bool)> {
        known(model, &[self.hypernym, self.verb, self.argument])?;
        let (g, node) = self.situation()?;
        let mut r = mean_field(model, &g, &Observation::from_graph(&g), opts)?;
        Ok((r.vectors.swap_remove(node), r.converged))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankedProperty {
    /// Position of the property in the input list.
    pub index: usize,
    pub score: f64,
}

/// Sorts scores descending; ties keep input order.
pub fn rank_scores(scores: &[f64]) -> Vec<RankedProperty> {
    let mut ranked: Vec<RankedProperty> = scores
        .iter()
        .enumerate()
        .map(|(index, &score)| RankedProperty { index, score })
        .collect();
    ranked.sort_by(|a, b| b.score.total_cmp(&a.score));
    ranked
}

/// Ranks precomputed hypernym mean fields by the term's truth probability.
pub fn rank_by_mean_fields(
    model: &FdsModel,
    term: PredicateId,
    fields: &[MeanFieldVector],
) -> Result<Vec<RankedProperty>> {
    known(model, &[term])?;
    let f = model.function(term);
    let scores = fields
        .iter()
        .map(|q| f.truth_probability_mf(q))
        .collect::<Result<Vec<_>>>()?;
    Ok(rank_scores(&scores))
}

/// Scores every property by the term's semantic function applied to the
/// hypernym's contextual mean field, best first.
pub fn relpron_rank(
    model: &FdsModel,
    term: PredicateId,
    properties: &[RelpronProperty],
    opts: MeanFieldOptions,
) -> Result<Vec<RankedProperty>> {
    let fields = properties
        .iter()
        .map(|p| p.hypernym_mean_field(model, opts).map(|(q, _)| q))
        .collect::<Result<Vec<_>>>()?;
    rank_by_mean_fields(model, term, &fields)
}
