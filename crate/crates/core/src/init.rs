//! Parameter fitting from a triple corpus.
//!
//! 1. Every context (a neighbouring predicate tagged with the link label and
//!    direction) is hashed to one of the D dimensions.
//! 2. Each predicate counts how often each dimension occurs as its context.
//! 3. Semantic-function weights are the scaled PPMI of those counts; the
//!    bias calibrates the truth probability at the uniform mean field.
//! 4. Link matrices are the PPMI of averaged outer products of no-context
//!    mean fields of linked predicates, against the `(C/D)²` chance level.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::corpus::{ArgLabel, PredicateId, SituationGraph, SvoTriple, Vocabulary};
use crate::inference::{mean_field, MeanFieldOptions, Observation};
use crate::math::{ln, logit};
use crate::model::{FdsModel, LinkMatrix, SemanticFunction};
use crate::space::{MeanFieldVector, SpaceConfig};
use crate::{Error, Result};

/// Position of the context predicate relative to the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ContextRole {
    /// The context heads an ARG1 link to the target.
    Arg1Head,
    /// The context is the ARG1 dependent of the target.
    Arg1Dependent,
    Arg2Head,
    Arg2Dependent,
}

impl ContextRole {
    pub const ALL: [ContextRole; 4] = [
        ContextRole::Arg1Head,
        ContextRole::Arg1Dependent,
        ContextRole::Arg2Head,
        ContextRole::Arg2Dependent,
    ];

    fn head(label: ArgLabel) -> Self {
        match label {
            ArgLabel::Arg1 => ContextRole::Arg1Head,
            ArgLabel::Arg2 => ContextRole::Arg2Head,
        }
    }

    fn dependent(label: ArgLabel) -> Self {
        match label {
            ArgLabel::Arg1 => ContextRole::Arg1Dependent,
            ArgLabel::Arg2 => ContextRole::Arg2Dependent,
        }
    }

    fn tag(self) -> u8 {
        self as u8
    }
}

/// Random positive-only projection: each context maps to one dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionMap {
    seed: u64,
    dim: usize,
    // Indexed by predicate * 4 + role.
    assignment: Vec<usize>,
}

impl ProjectionMap {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dimension(&self, context: PredicateId, role: ContextRole) -> usize {
        self.assignment[context.index() * 4 + role.tag() as usize]
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(mut h: u64, bytes: &[u8]) -> u64 {
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seeded, platform-independent 64-bit hash of a context.
pub fn context_hash(seed: u64, form: &str, pred_role: crate::corpus::Role, role: ContextRole) -> u64 {
    let mut h = fnv1a(FNV_OFFSET, &seed.to_le_bytes());
    h = fnv1a(h, &[pred_role as u8, role.tag()]);
    h = fnv1a(h, form.as_bytes());
    splitmix64(h)
}

pub fn build_projection(vocab: &Vocabulary, config: SpaceConfig, seed: u64) -> ProjectionMap {
    let dim = config.dim();
    let assignment = vocab
        .entries()
        .iter()
        .flat_map(|e| {
            ContextRole::ALL
                .into_iter()
                .map(move |r| (context_hash(seed, &e.form, e.role, r) % dim as u64) as usize)
        })
        .collect();
    ProjectionMap { seed, dim, assignment }
}

/// Co-occurrence counts of targets with projected context dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    dim: usize,
    counts: Vec<u64>,
    target_totals: Vec<u64>,
    dim_totals: Vec<u64>,
    grand_total: u64,
}

impl CountTable {
    pub fn new(targets: usize, dim: usize) -> Self {
        Self {
            dim,
            counts: alloc::vec![0; targets * dim],
            target_totals: alloc::vec![0; targets],
            dim_totals: alloc::vec![0; dim],
            grand_total: 0,
        }
    }

    pub fn add(&mut self, target: PredicateId, dimension: usize, n: u64) {
        self.counts[target.index() * self.dim + dimension] += n;
        self.target_totals[target.index()] += n;
        self.dim_totals[dimension] += n;
        self.grand_total += n;
    }

    pub fn count(&self, target: PredicateId, dimension: usize) -> u64 {
        self.counts[target.index() * self.dim + dimension]
    }

    pub fn row(&self, target: PredicateId) -> &[u64] {
        &self.counts[target.index() * self.dim..(target.index() + 1) * self.dim]
    }

    pub fn target_total(&self, target: PredicateId) -> u64 {
        self.target_totals[target.index()]
    }

    pub fn dim_total(&self, dimension: usize) -> u64 {
        self.dim_totals[dimension]
    }

    pub fn grand_total(&self) -> u64 {
        self.grand_total
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn targets(&self) -> usize {
        self.target_totals.len()
    }

    /// Adds another table of the same shape. Associative and commutative,
    /// so shards can be counted independently.
    pub fn merge(&mut self, other: &CountTable) -> Result<()> {
        if other.dim != self.dim || other.targets() != self.targets() {
            return Err(Error::LengthMismatch(self.counts.len(), other.counts.len()));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        for (a, b) in self.target_totals.iter_mut().zip(&other.target_totals) {
            *a += b;
        }
        for (a, b) in self.dim_totals.iter_mut().zip(&other.dim_totals) {
            *a += b;
        }
        self.grand_total += other.grand_total;
        Ok(())
    }
}

/// Every predicate of a triple is a target once, with each graph neighbour
/// as a context.
pub fn accumulate_counts(triples: &[SvoTriple], projection: &ProjectionMap) -> CountTable {
    let targets = projection.len() / 4;
    let mut table = CountTable::new(targets, projection.dim());
    for t in triples {
        for (head, dep, label) in t.links() {
            table.add(dep, projection.dimension(head, ContextRole::head(label)), 1);
            table.add(head, projection.dimension(dep, ContextRole::dependent(label)), 1);
        }
    }
    table
}

/// `max(0, log(count(t,i) N / (count(t) count(i))))`, with no negative shift.
pub fn ppmi_vector(table: &CountTable, target: PredicateId) -> Result<Vec<f64>> {
    let ct = table.target_total(target);
    if ct == 0 {
        return Err(Error::UndefinedTarget(format!("#{}", target.index())));
    }
    let n = table.grand_total() as f64;
    Ok(table
        .row(target)
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            if c == 0 {
                0.0
            } else {
                let pmi = ln(c as f64 * n / (ct as f64 * table.dim_total(i) as f64));
                pmi.max(0.0)
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionParams {
    /// Multiplier from PPMI to weights.
    pub scale: f64,
    /// Truth probability of every predicate at the uniform mean field.
    pub target_truth: f64,
}

impl Default for FunctionParams {
    fn default() -> Self {
        Self {
            scale: 1.0,
            target_truth: 0.5,
        }
    }
}

impl FunctionParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "scale must be positive, got {}",
                self.scale
            )));
        }
        if !(self.target_truth > 0.0 && self.target_truth < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "target truth must lie in (0, 1), got {}",
                self.target_truth
            )));
        }
        Ok(())
    }
}

/// Semantic function from a PPMI vector: `w = scale · ppmi`, with the bias
/// chosen so the truth probability at the uniform mean field is exactly
/// `target_truth`.
pub fn semantic_function_from_ppmi(ppmi: &[f64], config: SpaceConfig, params: FunctionParams) -> SemanticFunction {
    let weights: Vec<f64> = ppmi.iter().map(|p| params.scale * p).collect();
    let mean_input: f64 = weights.iter().map(|w| w * config.density()).sum();
    SemanticFunction::new(weights, logit(params.target_truth) - mean_input)
        .expect("finite ppmi gives finite parameters")
}

pub fn init_semantic_functions(
    table: &CountTable,
    vocab: &Vocabulary,
    config: SpaceConfig,
    params: FunctionParams,
) -> Result<Vec<SemanticFunction>> {
    params.validate()?;
    vocab
        .ids()
        .map(|id| {
            let ppmi = ppmi_vector(table, id).map_err(|_| Error::UndefinedTarget(vocab.form(id).into()))?;
            Ok(semantic_function_from_ppmi(&ppmi, config, params))
        })
        .collect()
}

/// Mean field of a single pixie of which only `pred` is known to be true.
pub fn no_context_mean_field(model: &FdsModel, pred: PredicateId, opts: MeanFieldOptions) -> Result<MeanFieldVector> {
    let graph = SituationGraph::single("x", None);
    let mut r = mean_field(model, &graph, &[Observation { node: 0, pred }], opts)?;
    Ok(r.vectors.swap_remove(0))
}

/// Link PPMI of an average pair activation `f`: `max(0, log f − 2 log(C/D))`.
pub fn link_ppmi(avg_activation: f64, config: SpaceConfig) -> f64 {
    if avg_activation <= 0.0 {
        return 0.0;
    }
    (ln(avg_activation) - 2.0 * ln(config.density())).max(0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkInit {
    pub arg1: LinkMatrix,
    pub arg2: LinkMatrix,
    /// Labels with no corpus links; their matrix is all zeros.
    pub missing: Vec<ArgLabel>,
}

/// Link matrices from the average outer product `f` of no-context mean
/// fields over every corpus link, pushed through [`link_ppmi`]. The
/// average is taken over mean fields divided by `C/D`, which is the same
/// quantity and makes the uniform case exactly zero.
pub fn init_links(model: &FdsModel, triples: &[SvoTriple], opts: MeanFieldOptions) -> Result<LinkInit> {
    let config = model.config();
    let d = config.dim();
    let density = config.density();
    // Pair multiplicities per label, in a fixed order.
    let mut pairs: [BTreeMap<(PredicateId, PredicateId), u64>; 2] = [BTreeMap::new(), BTreeMap::new()];
    for t in triples {
        for (head, dep, label) in t.links() {
            *pairs[label as usize].entry((head, dep)).or_default() += 1;
        }
    }
    // Mean fields relative to chance, q / (C/D); exactly 1 for a uniform field.
    let mut relative: BTreeMap<PredicateId, Vec<f64>> = BTreeMap::new();
    for (&(a, b), _) in pairs.iter().flat_map(|p| p.iter()) {
        for id in [a, b] {
            if let alloc::collections::btree_map::Entry::Vacant(slot) = relative.entry(id) {
                let q = no_context_mean_field(model, id, opts)?;
                slot.insert(q.probs().iter().map(|p| p / density).collect());
            }
        }
    }
    let mut missing = Vec::new();
    let mut build = |label: ArgLabel| {
        let counts = &pairs[label as usize];
        let mut m = LinkMatrix::zeros(label, d);
        let total: u64 = counts.values().sum();
        if total == 0 {
            missing.push(label);
            return m;
        }
        let mut acc = alloc::vec![0.0; d * d];
        for (&(a, b), &n) in counts {
            let (qa, qb) = (&relative[&a], &relative[&b]);
            let n = n as f64;
            for i in 0..d {
                let row = &mut acc[i * d..(i + 1) * d];
                let s = n * qa[i];
                for (cell, &qbj) in row.iter_mut().zip(qb) {
                    *cell += s * qbj;
                }
            }
        }
        let total = total as f64;
        for i in 0..d {
            for j in 0..d {
                let ratio = acc[i * d + j] / total;
                let v = if ratio > 0.0 { ln(ratio).max(0.0) } else { 0.0 };
                m.set(i, j, v);
            }
        }
        m
    };
    let arg1 = build(ArgLabel::Arg1);
    let arg2 = build(ArgLabel::Arg2);
    Ok(LinkInit { arg1, arg2, missing })
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FitParams {
    pub seed: u64,
    pub functions: FunctionParams,
    pub mean_field: MeanFieldOptions,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fitted {
    pub model: FdsModel,
    pub missing_links: Vec<ArgLabel>,
}

/// The whole pipeline: projection, counts, semantic functions, links.
pub fn fit(triples: &[SvoTriple], vocab: Vocabulary, config: SpaceConfig, params: FitParams) -> Result<Fitted> {
    if triples.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let projection = build_projection(&vocab, config, params.seed);
    let table = accumulate_counts(triples, &projection);
    let functions = init_semantic_functions(&table, &vocab, config, params.functions)?;
    let d = config.dim();
    let mut model = FdsModel::new(
        config,
        vocab,
        functions,
        LinkMatrix::zeros(ArgLabel::Arg1, d),
        LinkMatrix::zeros(ArgLabel::Arg2, d),
    )?;
    let links = init_links(&model, triples, params.mean_field)?;
    model.set_link(links.arg1)?;
    model.set_link(links.arg2)?;
    Ok(Fitted {
        model,
        missing_links: links.missing,
    })
}
