//! Dataset-level evaluation: scoring in parallel, metrics, coverage.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use fds_core::corpus::{PredicateId, Role};
use fds_core::tasks::{
    average_precision, contextual_verb_similarity, cosine, ensemble_score, lexical_similarity, rank_by_mean_fields,
    rank_scores, spearman, ExternalEmbeddings, RelpronProperty, SvoComparison,
};
use fds_core::{FdsModel, MeanFieldOptions, MeanFieldVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::io::{RelpronItem, SimItem, SvoItem};
use crate::{Error, Result};

/// External vectors mixed into the model's scores.
#[derive(Debug, Clone, Copy)]
pub struct Ensemble<'a> {
    pub embeddings: &'a ExternalEmbeddings,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermAp {
    pub term: String,
    pub ap: f64,
    pub gold: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub task: &'static str,
    pub metric: &'static str,
    pub value: f64,
    pub coverage: f64,
    pub n: usize,
    pub skipped: usize,
    /// Items whose mean-field runs hit the iteration cap.
    pub nonconverged: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub per_term: Vec<TermAp>,
}

impl Report {
    fn new(task: &'static str, metric: &'static str, value: f64, n: usize, total: usize) -> Self {
        Report {
            task,
            metric,
            value,
            coverage: n as f64 / total as f64,
            n,
            skipped: total - n,
            nonconverged: 0,
            alpha: None,
            per_term: Vec::new(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:<14}{}", "task", self.task);
        let _ = writeln!(s, "{:<14}{}", "metric", self.metric);
        let _ = writeln!(s, "{:<14}{:.6}", "value", self.value);
        let _ = writeln!(
            s,
            "{:<14}{:.6} ({} of {})",
            "coverage",
            self.coverage,
            self.n,
            self.n + self.skipped
        );
        let _ = writeln!(s, "{:<14}{}", "nonconverged", self.nonconverged);
        if let Some(a) = self.alpha {
            let _ = writeln!(s, "{:<14}{a}", "alpha");
        }
        let width = self.per_term.iter().map(|t| t.term.len()).max().unwrap_or(0);
        for t in &self.per_term {
            let _ = writeln!(s, "ap  {:<width$}  {:.6}", t.term, t.ap);
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn lookup(model: &FdsModel, form: &str, role: Option<Role>) -> Result<Option<PredicateId>> {
    let v = model.vocab();
    match role {
        Some(r) => Ok(v.get(form, r)),
        None => match v.resolve(form, None) {
            Ok(id) => Ok(Some(id)),
            Err(fds_core::Error::UnknownPredicate(_)) => Ok(None),
            Err(e) => Err(e.into()),
        },
    }
}

fn in_embeddings(ens: Option<Ensemble<'_>>, words: &[&str]) -> bool {
    ens.is_none_or(|e| words.iter().all(|w| e.embeddings.get(w).is_some()))
}

fn sum_vec(e: &ExternalEmbeddings, words: &[&str]) -> Vec<f64> {
    e.sum(words).expect("coverage checked")
}

/// Spearman correlation of `P(a|b)·P(b|a)` with gold similarity.
pub fn eval_sim(
    model: &FdsModel,
    data: &Path,
    items: &[SimItem],
    role: Option<Role>,
    ensemble: Option<Ensemble<'_>>,
    opts: MeanFieldOptions,
) -> Result<Report> {
    let mut covered = Vec::new();
    for it in items {
        if let (Some(a), Some(b)) = (lookup(model, &it.word1, role)?, lookup(model, &it.word2, role)?) {
            if in_embeddings(ensemble, &[&it.word1, &it.word2]) {
                covered.push((it, a, b));
            }
        }
    }
    if covered.is_empty() {
        return Err(Error::NoCoverage { path: data.into() });
    }
    let mut scores = covered
        .par_iter()
        .map(|&(_, a, b)| lexical_similarity(model, a, b, opts))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(e) = ensemble {
        let ext: Vec<f64> = covered
            .iter()
            .map(|(it, ..)| e.embeddings.cosine(&it.word1, &it.word2).expect("coverage checked"))
            .collect();
        scores = ensemble_score(&scores, &ext, e.alpha)?;
    }
    let gold: Vec<f64> = covered.iter().map(|(it, ..)| it.gold).collect();
    let mut r = Report::new("sim", "spearman", spearman(&scores, &gold)?, covered.len(), items.len());
    r.alpha = ensemble.map(|e| e.alpha);
    Ok(r)
}

/// Spearman correlation of contextual verb similarity with gold.
pub fn eval_svo(
    model: &FdsModel,
    data: &Path,
    items: &[SvoItem],
    ensemble: Option<Ensemble<'_>>,
    opts: MeanFieldOptions,
) -> Result<Report> {
    let mut covered = Vec::new();
    for it in items {
        let ids = (
            lookup(model, &it.subject, Some(Role::Noun))?,
            lookup(model, &it.verb1, Some(Role::Verb))?,
            lookup(model, &it.object, Some(Role::Noun))?,
            lookup(model, &it.verb2, Some(Role::Verb))?,
        );
        if let (Some(subject), Some(verb1), Some(object), Some(verb2)) = ids {
            if in_embeddings(ensemble, &[&it.subject, &it.verb1, &it.object, &it.verb2]) {
                let cmp = SvoComparison {
                    subject,
                    verb1,
                    object,
                    verb2,
                    gold: it.gold,
                };
                covered.push((it, cmp));
            }
        }
    }
    if covered.is_empty() {
        return Err(Error::NoCoverage { path: data.into() });
    }
    let scored = covered
        .par_iter()
        .map(|(_, cmp)| contextual_verb_similarity(model, cmp, opts))
        .collect::<Result<Vec<_>, _>>()?;
    let mut scores: Vec<f64> = scored.iter().map(|s| s.score).collect();
    if let Some(e) = ensemble {
        let ext: Vec<f64> = covered
            .iter()
            .map(|(it, _)| {
                let a = sum_vec(e.embeddings, &[&it.subject, &it.verb1, &it.object]);
                let b = sum_vec(e.embeddings, &[&it.subject, &it.verb2, &it.object]);
                cosine(&a, &b)
            })
            .collect();
        scores = ensemble_score(&scores, &ext, e.alpha)?;
    }
    let gold: Vec<f64> = covered.iter().map(|(_, c)| c.gold).collect();
    let mut r = Report::new("svo", "spearman", spearman(&scores, &gold)?, covered.len(), items.len());
    r.nonconverged = scored.iter().filter(|s| !s.converged).count();
    r.alpha = ensemble.map(|e| e.alpha);
    Ok(r)
}

/// Every term ranks every covered property; a term's correct properties are
/// the ones listed for it. Reports MAP over the distinct terms.
pub fn eval_relpron(
    model: &FdsModel,
    data: &Path,
    items: &[RelpronItem],
    ensemble: Option<Ensemble<'_>>,
    opts: MeanFieldOptions,
) -> Result<Report> {
    let mut covered: Vec<(&RelpronItem, RelpronProperty)> = Vec::new();
    for it in items {
        let ids = (
            lookup(model, &it.term, Some(Role::Noun))?,
            lookup(model, &it.hypernym, Some(Role::Noun))?,
            lookup(model, &it.verb, Some(Role::Verb))?,
            lookup(model, &it.argument, Some(Role::Noun))?,
        );
        if let (Some(term), Some(hypernym), Some(verb), Some(argument)) = ids {
            if in_embeddings(ensemble, &[&it.term, &it.hypernym, &it.verb, &it.argument]) {
                let prop = RelpronProperty {
                    term,
                    clause: it.clause,
                    hypernym,
                    verb,
                    argument,
                };
                covered.push((it, prop));
            }
        }
    }
    if covered.is_empty() {
        return Err(Error::NoCoverage { path: data.into() });
    }
    let fields: Vec<(MeanFieldVector, bool)> = covered
        .par_iter()
        .map(|(_, p)| p.hypernym_mean_field(model, opts))
        .collect::<Result<Vec<_>, _>>()?;
    let (fields, converged): (Vec<_>, Vec<_>) = fields.into_iter().unzip();

    let mut terms: Vec<(&str, PredicateId)> = Vec::new();
    for (it, p) in &covered {
        if !terms.iter().any(|(t, _)| *t == it.term) {
            terms.push((&it.term, p.term));
        }
    }
    let ext_props: Option<Vec<Vec<f64>>> = ensemble.map(|e| {
        covered
            .iter()
            .map(|(it, _)| sum_vec(e.embeddings, &[&it.hypernym, &it.verb, &it.argument]))
            .collect()
    });
    let per_term = terms
        .par_iter()
        .map(|&(form, id)| {
            let ranked = rank_by_mean_fields(model, id, &fields)?;
            let ranked = match (ensemble, &ext_props) {
                (Some(e), Some(props)) if covered.len() > 1 => {
                    let mut own = vec![0.0; covered.len()];
                    for r in &ranked {
                        own[r.index] = r.score;
                    }
                    let t = e.embeddings.get(form).expect("coverage checked");
                    let ext: Vec<f64> = props.iter().map(|p| cosine(t, p)).collect();
                    rank_scores(&ensemble_score(&own, &ext, e.alpha)?)
                }
                _ => ranked,
            };
            let order: Vec<usize> = ranked.iter().map(|r| r.index).collect();
            let gold: BTreeSet<usize> = (0..covered.len()).filter(|&i| covered[i].0.term == form).collect();
            Ok(TermAp {
                term: form.to_string(),
                ap: average_precision(&order, &gold)?,
                gold: gold.len(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let map = per_term.iter().map(|t| t.ap).sum::<f64>() / per_term.len() as f64;
    let mut r = Report::new("relpron", "map", map, covered.len(), items.len());
    r.nonconverged = converged.iter().filter(|c| !**c).count();
    r.alpha = ensemble.map(|e| e.alpha);
    r.per_term = per_term;
    Ok(r)
}

/// Runs `f` on a pool of `threads` workers; 0 means one per core.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| fds_core::Error::InvalidParameter(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}
