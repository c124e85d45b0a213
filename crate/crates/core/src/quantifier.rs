//! Generalized quantifiers over a probabilistic model structure.
//!
//! A quantifier with restriction `R` and body `B` over variable `v` looks
//! at `q(V) = P(B | R, V)`, where `V` is the assignment of the variables
//! bound further out. `v` is marginalised under the situation prior
//! (conditioned on `V`, with inner variables summed out of the full joint).
//! Sharp quantifiers turn `q` into a 0/1 truth value; fuzzy ones into a
//! sigmoid of `q`. Evaluation runs bottom-up and the root, having no free
//! variables, yields a single probability.
//!
//! Every semantic function is strictly between 0 and 1, so a literal
//! reading of `every` (`q = 1`) would never hold. The sharp cutoffs are
//! therefore applied with a tolerance of [`SHARP_TOLERANCE`].
//!
//! Evaluation is exact and enumerates the joint space; it is refused when
//! `binomial(D, C)^nodes` exceeds the cap.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use crate::corpus::{NodeId, PredicateId, SituationGraph};
use crate::math::{exp, sigmoid};
use crate::model::FdsModel;
use crate::space::Pixie;
use crate::{Error, Result};

pub const SHARP_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_MANY_THETA: f64 = 0.5;
pub const DEFAULT_FEW_THETA: f64 = 0.25;
pub const DEFAULT_TAU: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuantifierKind {
    Every,
    Some,
    Most,
    No,
    Few { theta: f64, tau: f64 },
    Many { theta: f64, tau: f64 },
}

impl QuantifierKind {
    pub fn few() -> Self {
        QuantifierKind::Few {
            theta: DEFAULT_FEW_THETA,
            tau: DEFAULT_TAU,
        }
    }

    pub fn many() -> Self {
        QuantifierKind::Many {
            theta: DEFAULT_MANY_THETA,
            tau: DEFAULT_TAU,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            QuantifierKind::Every => "every",
            QuantifierKind::Some => "some",
            QuantifierKind::Most => "most",
            QuantifierKind::No => "no",
            QuantifierKind::Few { .. } => "few",
            QuantifierKind::Many { .. } => "many",
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let QuantifierKind::Few { theta, tau } | QuantifierKind::Many { theta, tau } = *self {
            if !(theta > 0.0 && theta < 1.0) || !(tau > 0.0 && tau.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{} needs theta in (0, 1) and tau > 0, got theta {theta}, tau {tau}",
                    self.name()
                )));
            }
        }
        Ok(())
    }
}

/// Probability that a quantified expression is true given its `q` value.
pub fn quantifier_truth(kind: QuantifierKind, q: f64) -> f64 {
    let indicator = |b: bool| if b { 1.0 } else { 0.0 };
    match kind {
        QuantifierKind::Every => indicator(q >= 1.0 - SHARP_TOLERANCE),
        QuantifierKind::Some => indicator(q > SHARP_TOLERANCE),
        QuantifierKind::Most => indicator(q > 0.5),
        QuantifierKind::No => indicator(q <= SHARP_TOLERANCE),
        QuantifierKind::Many { theta, tau } => sigmoid((q - theta) / tau),
        QuantifierKind::Few { theta, tau } => 1.0 - sigmoid((q - theta) / tau),
    }
}

/// A fully scoped logical form.
#[derive(Debug, Clone, PartialEq)]
pub enum ScopeTree {
    Quantifier {
        kind: QuantifierKind,
        var: NodeId,
        restriction: alloc::boxed::Box<ScopeTree>,
        body: alloc::boxed::Box<ScopeTree>,
    },
    /// Conjunction of predications; empty means trivially true.
    Leaf { preds: Vec<(PredicateId, NodeId)> },
}

impl ScopeTree {
    pub fn quantifier(kind: QuantifierKind, var: &str, restriction: ScopeTree, body: ScopeTree) -> Self {
        ScopeTree::Quantifier {
            kind,
            var: var.into(),
            restriction: alloc::boxed::Box::new(restriction),
            body: alloc::boxed::Box::new(body),
        }
    }

    pub fn leaf<I: IntoIterator<Item = (PredicateId, &'static str)>>(preds: I) -> Self {
        ScopeTree::Leaf {
            preds: preds.into_iter().map(|(p, v)| (p, NodeId::from(v))).collect(),
        }
    }

    pub fn empty() -> Self {
        ScopeTree::Leaf { preds: Vec::new() }
    }

    fn quantifier_count(&self) -> usize {
        match self {
            ScopeTree::Quantifier { restriction, body, .. } => {
                1 + restriction.quantifier_count() + body.quantifier_count()
            }
            ScopeTree::Leaf { .. } => 0,
        }
    }
}

/// A scope tree together with the links between its variables.
#[derive(Debug, Clone, PartialEq)]
pub struct ScopedSituation {
    graph: SituationGraph,
    tree: ScopeTree,
}

impl ScopedSituation {
    /// Checks that every graph node is bound by exactly one quantifier and
    /// every predication uses a variable bound above it. The graph's
    /// observed predicates, if any, are dropped.
    pub fn new(graph: SituationGraph, tree: ScopeTree) -> Result<Self> {
        let graph = graph.without_predicates();
        let mut bound = BTreeSet::new();
        let mut scope = Vec::new();
        check_scopes(&tree, &graph, &mut scope, &mut bound)?;
        if let Some(n) = graph.nodes().iter().find(|n| !bound.contains(n.id.as_str())) {
            return Err(Error::InvalidScopeTree(format!("node `{}` has no quantifier", n.id)));
        }
        Ok(Self { graph, tree })
    }

    pub fn graph(&self) -> &SituationGraph {
        &self.graph
    }

    pub fn tree(&self) -> &ScopeTree {
        &self.tree
    }

    pub fn quantifier_count(&self) -> usize {
        self.tree.quantifier_count()
    }
}

fn check_scopes<'t>(
    tree: &'t ScopeTree,
    graph: &SituationGraph,
    scope: &mut Vec<&'t str>,
    bound: &mut BTreeSet<&'t str>,
) -> Result<()> {
    match tree {
        ScopeTree::Leaf { preds } => {
            for (_, v) in preds {
                if !scope.contains(&v.as_str()) {
                    return Err(Error::UnboundVariable(v.0.clone()));
                }
            }
            Ok(())
        }
        ScopeTree::Quantifier {
            kind,
            var,
            restriction,
            body,
        } => {
            kind.validate()?;
            if !bound.insert(var.as_str()) {
                return Err(Error::DuplicateQuantifier(var.0.clone()));
            }
            if graph.index_of(var.as_str()).is_err() {
                return Err(Error::InvalidScopeTree(format!(
                    "quantified variable `{var}` is not a node of the graph"
                )));
            }
            scope.push(var.as_str());
            check_scopes(restriction, graph, scope, bound)?;
            check_scopes(body, graph, scope, bound)?;
            scope.pop();
            Ok(())
        }
    }
}

/// The `q` values of one quantifier, for every assignment of the
/// variables bound above it.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantifierTrace {
    pub var: NodeId,
    pub kind: QuantifierKind,
    /// Outer variables, outermost first.
    pub outer: Vec<NodeId>,
    /// Indexed in mixed radix over [`Evaluation::pixies`], outermost most
    /// significant.
    pub q_values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub probability: f64,
    pub pixies: Vec<Pixie>,
    /// Quantifiers in pre-order.
    pub trace: Vec<QuantifierTrace>,
}

struct Evaluator<'a> {
    model: &'a FdsModel,
    situation: &'a ScopedSituation,
    pixies: Vec<Pixie>,
    /// Unnormalised prior weight of every joint assignment (graph order).
    joint: Vec<f64>,
    trace: Vec<QuantifierTrace>,
}

impl<'a> Evaluator<'a> {
    fn new(model: &'a FdsModel, situation: &'a ScopedSituation, cap: u64) -> Result<Self> {
        let config = model.config();
        let graph = &situation.graph;
        let n = graph.len();
        let total = config
            .pixie_count()
            .and_then(|c| c.checked_pow(n as u32))
            .filter(|&t| t <= cap as u128)
            .ok_or(Error::TooLarge {
                log10_size: config.count_pixies() * n as f64,
                cap,
            })? as usize;
        let pixies: Vec<Pixie> = config.enumerate_pixies_capped(cap)?.collect();
        let base = pixies.len();
        let mut scores = Vec::with_capacity(total);
        let mut assignment = Vec::with_capacity(n);
        for k in 0..total {
            assignment.clear();
            assignment.extend(digits(k, base, n).into_iter().map(|i| pixies[i].clone()));
            scores.push(model.situation_score(graph, &assignment)?);
        }
        let shift = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let joint = scores.into_iter().map(|s| exp(s - shift)).collect();
        Ok(Self {
            model,
            situation,
            pixies,
            joint,
            trace: Vec::new(),
        })
    }

    fn node(&self, var: &NodeId) -> usize {
        self.situation.graph.index_of(var.as_str()).expect("validated")
    }

    /// Prior weight marginalised onto the nodes in `vars` (in that order).
    fn marginal(&self, vars: &[usize]) -> Vec<f64> {
        let base = self.pixies.len();
        let n = self.situation.graph.len();
        let mut out = alloc::vec![0.0; base.pow(vars.len() as u32)];
        for (k, &w) in self.joint.iter().enumerate() {
            let d = digits(k, base, n);
            let idx = vars.iter().fold(0, |acc, &v| acc * base + d[v]);
            out[idx] += w;
        }
        out
    }

    /// Truth probability of each subtree in `parts` jointly, for every
    /// assignment of `bound`. Predications of leaf parts are pooled so a
    /// truth variable shared between parts is counted once.
    fn conjunction(&mut self, parts: &[&ScopeTree], bound: &[usize]) -> Result<Vec<f64>> {
        let base = self.pixies.len();
        let size = base.pow(bound.len() as u32);
        let mut preds = BTreeSet::new();
        let mut out = alloc::vec![1.0; size];
        for part in parts {
            match part {
                ScopeTree::Leaf { preds: p } => {
                    for (pred, var) in p {
                        preds.insert((*pred, self.node(var)));
                    }
                }
                q @ ScopeTree::Quantifier { .. } => {
                    let t = self.truth(q, bound)?;
                    out.iter_mut().zip(t).for_each(|(o, x)| *o *= x);
                }
            }
        }
        for (pred, node) in preds {
            let pos = bound.iter().position(|&b| b == node).expect("validated scope");
            let f = self.model.function(pred);
            let truth: Vec<f64> = self.pixies.iter().map(|x| sigmoid(f.activation(x))).collect();
            for (k, o) in out.iter_mut().enumerate() {
                *o *= truth[digits(k, base, bound.len())[pos]];
            }
        }
        Ok(out)
    }

    /// Truth probability of a quantified subtree for every assignment of
    /// the variables bound above it.
    fn truth(&mut self, tree: &ScopeTree, bound: &[usize]) -> Result<Vec<f64>> {
        let ScopeTree::Quantifier {
            kind,
            var,
            restriction,
            body,
        } = tree
        else {
            return self.conjunction(&[tree], bound);
        };
        let slot = self.trace.len();
        self.trace.push(QuantifierTrace {
            var: var.clone(),
            kind: *kind,
            outer: bound
                .iter()
                .map(|&b| self.situation.graph.nodes()[b].id.clone())
                .collect(),
            q_values: Vec::new(),
        });
        let mut inner = bound.to_vec();
        inner.push(self.node(var));
        let prior = self.marginal(&inner);
        let both = self.conjunction(&[restriction, body], &inner)?;
        let restr = self.conjunction(&[restriction], &inner)?;
        let base = self.pixies.len();
        let mut q_values = Vec::with_capacity(prior.len() / base);
        for outer in 0..prior.len() / base {
            let (mut num, mut den) = (0.0, 0.0);
            for v in 0..base {
                let k = outer * base + v;
                num += prior[k] * both[k];
                den += prior[k] * restr[k];
            }
            if den <= 0.0 {
                return Err(Error::DegenerateRestriction);
            }
            q_values.push((num / den).min(1.0));
        }
        let out = q_values.iter().map(|&q| quantifier_truth(*kind, q)).collect();
        self.trace[slot].q_values = q_values;
        Ok(out)
    }
}

fn digits(mut k: usize, base: usize, len: usize) -> Vec<usize> {
    let mut d = alloc::vec![0; len];
    for slot in d.iter_mut().rev() {
        *slot = k % base;
        k /= base;
    }
    d
}

/// Probability that the whole scoped expression is true.
pub fn evaluate(model: &FdsModel, situation: &ScopedSituation, cap: u64) -> Result<Evaluation> {
    let mut ev = Evaluator::new(model, situation, cap)?;
    let root = ev.truth(&situation.tree, &[])?;
    Ok(Evaluation {
        probability: root[0],
        pixies: ev.pixies,
        trace: ev.trace,
    })
}

/// `q = P(B | R, V)` for the quantifier binding `var`, given pixies for
/// exactly the variables bound above it.
pub fn q_value(
    model: &FdsModel,
    situation: &ScopedSituation,
    var: &str,
    outer: &[(NodeId, Pixie)],
    cap: u64,
) -> Result<f64> {
    let eval = evaluate(model, situation, cap)?;
    let trace = eval
        .trace
        .iter()
        .find(|t| t.var.as_str() == var)
        .ok_or_else(|| Error::UnknownNode(var.into()))?;
    if outer.len() != trace.outer.len() {
        return Err(Error::IncompleteAssignment {
            expected: trace.outer.len(),
            found: outer.len(),
        });
    }
    let base = eval.pixies.len();
    let mut idx = 0;
    for id in &trace.outer {
        let (_, x) = outer
            .iter()
            .find(|(o, _)| o == id)
            .ok_or_else(|| Error::UnboundVariable(id.0.clone()))?;
        let pos = eval
            .pixies
            .iter()
            .position(|p| p == x)
            .ok_or_else(|| Error::InvalidPixie(format!("{:?} is not in the space", x.active())))?;
        idx = idx * base + pos;
    }
    Ok(trace.q_values[idx])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{ArgLabel, Node, Role, Vocabulary};
    use crate::model::SemanticFunction;
    use crate::space::{SpaceConfig, DEFAULT_ENUMERATION_CAP};
    use alloc::vec;

    const CAP: u64 = DEFAULT_ENUMERATION_CAP;

    #[test]
    fn sharp_cutoffs() {
        use QuantifierKind::*;
        let cases = [0.0, 0.49, 0.5, 0.51, 0.99, 1.0];
        let every: Vec<_> = cases.iter().map(|&q| quantifier_truth(Every, q)).collect();
        let some: Vec<_> = cases.iter().map(|&q| quantifier_truth(Some, q)).collect();
        let most: Vec<_> = cases.iter().map(|&q| quantifier_truth(Most, q)).collect();
        let no: Vec<_> = cases.iter().map(|&q| quantifier_truth(No, q)).collect();
        assert_eq!(every, [0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(some, [0.0, 1.0, 1.0, 1.0, 1.0, 1.0]);
        assert_eq!(most, [0.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        assert_eq!(no, [1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn fuzzy_quantifiers() {
        let many = QuantifierKind::Many { theta: 0.5, tau: 0.1 };
        assert_eq!(quantifier_truth(many, 0.5), 0.5);
        let few = QuantifierKind::Few { theta: 0.5, tau: 0.1 };
        for q in [0.0, 0.2, 0.5, 0.77, 1.0] {
            assert_eq!(quantifier_truth(many, q) + quantifier_truth(few, q), 1.0);
        }
        assert!(QuantifierKind::Many { theta: 1.5, tau: 0.1 }.validate().is_err());
        assert!(QuantifierKind::Few { theta: 0.5, tau: 0.0 }.validate().is_err());
    }

    fn model() -> (FdsModel, PredicateId, PredicateId) {
        let vocab = Vocabulary::from_counts([("p", Role::Noun, 1), ("a", Role::Noun, 1)], 1);
        let mut m = FdsModel::zeros(SpaceConfig::new(4, 1).unwrap(), vocab);
        let p = m.vocab().get("p", Role::Noun).unwrap();
        let a = m.vocab().get("a", Role::Noun).unwrap();
        m.set_function(p, SemanticFunction::new(vec![2.0, -1.0, 0.5, 0.0], 0.0).unwrap())
            .unwrap();
        (m, p, a)
    }

    fn single(tree: ScopeTree) -> ScopedSituation {
        ScopedSituation::new(SituationGraph::single("x", None), tree).unwrap()
    }

    #[test]
    fn restriction_equal_to_body_gives_certainty() {
        let (m, p, _) = model();
        let s = single(ScopeTree::quantifier(
            QuantifierKind::Every,
            "x",
            ScopeTree::leaf([(p, "x")]),
            ScopeTree::leaf([(p, "x")]),
        ));
        let e = evaluate(&m, &s, CAP).unwrap();
        assert_eq!(e.trace[0].q_values, vec![1.0]);
        assert_eq!(e.probability, 1.0);
    }

    #[test]
    fn constant_body_gives_half() {
        let (m, _, a) = model();
        let s = single(ScopeTree::quantifier(
            QuantifierKind::Most,
            "x",
            ScopeTree::empty(),
            ScopeTree::leaf([(a, "x")]),
        ));
        assert_eq!(q_value(&m, &s, "x", &[], CAP).unwrap(), 0.5);
        assert_eq!(evaluate(&m, &s, CAP).unwrap().probability, 0.0);
    }

    #[test]
    fn hand_enumerated_ratio() {
        let (m, p, a) = model();
        let mut m = m;
        m.set_function(a, SemanticFunction::new(vec![0.0, 1.0, -2.0, 3.0], -0.5).unwrap())
            .unwrap();
        let s = single(ScopeTree::quantifier(
            QuantifierKind::Some,
            "x",
            ScopeTree::leaf([(p, "x")]),
            ScopeTree::leaf([(a, "x")]),
        ));
        // Uniform prior over 4 one-hot pixies.
        let rp = [2.0, -1.0, 0.5, 0.0].map(sigmoid);
        let ba = [-0.5, 0.5, -2.5, 2.5].map(sigmoid);
        let num: f64 = (0..4).map(|i| rp[i] * ba[i]).sum();
        let den: f64 = rp.iter().sum();
        assert!((q_value(&m, &s, "x", &[], CAP).unwrap() - num / den).abs() < 1e-12);
    }

    #[test]
    fn validation_errors_are_distinct() {
        let (_, p, _) = model();
        let g = SituationGraph::from_named(
            vec![Node::new("x", None), Node::new("y", None)],
            [("y", "x", ArgLabel::Arg1)],
        )
        .unwrap();
        let unbound = ScopeTree::quantifier(
            QuantifierKind::Some,
            "x",
            ScopeTree::empty(),
            ScopeTree::leaf([(p, "y")]),
        );
        assert!(matches!(ScopedSituation::new(g.clone(), unbound), Err(Error::UnboundVariable(v)) if v == "y"));
        let dup = ScopeTree::quantifier(
            QuantifierKind::Some,
            "x",
            ScopeTree::empty(),
            ScopeTree::quantifier(QuantifierKind::Some, "x", ScopeTree::empty(), ScopeTree::empty()),
        );
        assert!(matches!(
            ScopedSituation::new(g.clone(), dup),
            Err(Error::DuplicateQuantifier(_))
        ));
        let missing = ScopeTree::quantifier(
            QuantifierKind::Some,
            "x",
            ScopeTree::empty(),
            ScopeTree::leaf([(p, "x")]),
        );
        assert!(matches!(
            ScopedSituation::new(g, missing),
            Err(Error::InvalidScopeTree(_))
        ));
    }
}
