//! Scope trees: `{"quant","var","restriction","body"}` nodes, `{"preds":[[pred, var]]}`
//! leaves, and the situation's links in a `"graph"` key on the root.

use std::collections::BTreeSet;
use std::path::Path;

use fds_core::corpus::{NodeId, Vocabulary};
use fds_core::quantifier::{
    QuantifierKind, ScopeTree, ScopedSituation, DEFAULT_FEW_THETA, DEFAULT_MANY_THETA, DEFAULT_TAU,
};
use serde_json::{json, Map, Value};

use super::graph::{role_hint, GraphFile};
use super::read_to_string;
use crate::{Error, Result};

/// Parameters for `few`/`many` nodes that do not set their own.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuzzyDefaults {
    pub many_theta: f64,
    pub few_theta: f64,
    pub tau: f64,
}

impl Default for FuzzyDefaults {
    fn default() -> Self {
        Self {
            many_theta: DEFAULT_MANY_THETA,
            few_theta: DEFAULT_FEW_THETA,
            tau: DEFAULT_TAU,
        }
    }
}

struct Parser<'a> {
    path: &'a Path,
    vocab: &'a Vocabulary,
    heads: BTreeSet<String>,
    fuzzy: FuzzyDefaults,
}

impl Parser<'_> {
    fn err(&self, loc: &str, msg: impl std::fmt::Display) -> Error {
        Error::format(self.path, format!("at {loc}: {msg}"))
    }

    fn tree(&self, v: &Value, loc: &str) -> Result<ScopeTree> {
        let obj = v.as_object().ok_or_else(|| self.err(loc, "expected an object"))?;
        if obj.contains_key("preds") {
            return self.leaf(obj, loc);
        }
        let allowed = ["quant", "var", "restriction", "body", "theta", "tau", "graph"];
        if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(self.err(loc, format!("unexpected key `{k}`")));
        }
        let field = |k: &str| obj.get(k).ok_or_else(|| self.err(loc, format!("missing `{k}`")));
        let string = |k: &str| {
            field(k)?
                .as_str()
                .ok_or_else(|| self.err(loc, format!("`{k}` must be a string")))
        };
        let kind = self.kind(obj, string("quant")?, loc)?;
        Ok(ScopeTree::Quantifier {
            kind,
            var: NodeId::from(string("var")?),
            restriction: Box::new(self.tree(field("restriction")?, &format!("{loc}.restriction"))?),
            body: Box::new(self.tree(field("body")?, &format!("{loc}.body"))?),
        })
    }

    fn kind(&self, obj: &Map<String, Value>, name: &str, loc: &str) -> Result<QuantifierKind> {
        let num = |k: &str, default: f64| match obj.get(k) {
            None => Ok(default),
            Some(v) => v
                .as_f64()
                .ok_or_else(|| self.err(loc, format!("`{k}` must be a number"))),
        };
        let f = self.fuzzy;
        let kind = match name.to_ascii_lowercase().as_str() {
            "every" => QuantifierKind::Every,
            "some" | "a" | "exists" => QuantifierKind::Some,
            "most" => QuantifierKind::Most,
            "no" => QuantifierKind::No,
            "few" => QuantifierKind::Few {
                theta: num("theta", f.few_theta)?,
                tau: num("tau", f.tau)?,
            },
            "many" => QuantifierKind::Many {
                theta: num("theta", f.many_theta)?,
                tau: num("tau", f.tau)?,
            },
            other => return Err(self.err(loc, format!("unknown quantifier `{other}`"))),
        };
        if !matches!(kind, QuantifierKind::Few { .. } | QuantifierKind::Many { .. })
            && (obj.contains_key("theta") || obj.contains_key("tau"))
        {
            return Err(self.err(loc, format!("`{}` takes no theta/tau", kind.name())));
        }
        kind.validate().map_err(|e| self.err(loc, e))?;
        Ok(kind)
    }

    fn leaf(&self, obj: &Map<String, Value>, loc: &str) -> Result<ScopeTree> {
        if obj.len() != 1 {
            return Err(self.err(loc, "a leaf holds only `preds`"));
        }
        let items = obj["preds"]
            .as_array()
            .ok_or_else(|| self.err(loc, "`preds` must be an array"))?;
        let preds = items
            .iter()
            .enumerate()
            .map(|(i, item)| {
                let pair = item
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .and_then(|a| Some((a[0].as_str()?, a[1].as_str()?)))
                    .ok_or_else(|| self.err(&format!("{loc}.preds[{i}]"), "expected [predicate, variable]"))?;
                let hint = role_hint(self.heads.contains(pair.1));
                let pred = self
                    .vocab
                    .resolve(pair.0, Some(hint))
                    .map_err(|e| Error::data(self.path, e))?;
                Ok((pred, NodeId::from(pair.1)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ScopeTree::Leaf { preds })
    }
}

pub fn parse_scope(path: &Path, text: &str, vocab: &Vocabulary, fuzzy: FuzzyDefaults) -> Result<ScopedSituation> {
    let root: Value = serde_json::from_str(text).map_err(|e| Error::json(path, &e))?;
    let graph = root
        .get("graph")
        .ok_or_else(|| Error::format(path, "at $: missing `graph`"))?;
    let graph: GraphFile =
        serde_json::from_value(graph.clone()).map_err(|e| Error::format(path, format!("at $.graph: {e}")))?;
    let parser = Parser {
        path,
        vocab,
        heads: graph.heads().into_iter().map(String::from).collect(),
        fuzzy,
    };
    let tree = parser.tree(&root, "$")?;
    let graph = graph.build(vocab).map_err(|e| Error::data(path, e))?;
    ScopedSituation::new(graph, tree).map_err(|e| Error::data(path, e))
}

pub fn load_scope(path: &Path, vocab: &Vocabulary, fuzzy: FuzzyDefaults) -> Result<ScopedSituation> {
    parse_scope(path, &read_to_string(path)?, vocab, fuzzy)
}

fn tree_value(tree: &ScopeTree, vocab: &Vocabulary) -> Value {
    match tree {
        ScopeTree::Leaf { preds } => json!({
            "preds": preds.iter().map(|(p, v)| json!([vocab.form(*p), v.as_str()])).collect::<Vec<_>>()
        }),
        ScopeTree::Quantifier {
            kind,
            var,
            restriction,
            body,
        } => {
            let mut node = json!({
                "quant": kind.name(),
                "var": var.as_str(),
                "restriction": tree_value(restriction, vocab),
                "body": tree_value(body, vocab),
            });
            if let QuantifierKind::Few { theta, tau } | QuantifierKind::Many { theta, tau } = *kind {
                node["theta"] = json!(theta);
                node["tau"] = json!(tau);
            }
            node
        }
    }
}

pub fn scope_to_json(situation: &ScopedSituation, vocab: &Vocabulary) -> String {
    let mut root = tree_value(situation.tree(), vocab);
    root["graph"] = serde_json::to_value(GraphFile::from_graph(situation.graph(), vocab)).expect("graph serializes");
    serde_json::to_string_pretty(&root).expect("scope tree serializes")
}
