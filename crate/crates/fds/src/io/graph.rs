//! `{"nodes":[{"id","pred"}],"links":[{"from","to","label"}]}`.

use std::collections::BTreeSet;
use std::path::Path;

use fds_core::corpus::{ArgLabel, Node, Role, SituationGraph, Vocabulary};
use fds_core::Error as CoreError;
use serde::{Deserialize, Serialize};

use super::{read_to_string, write_string};
use crate::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct GraphFile {
    pub nodes: Vec<NodeRecord>,
    #[serde(default)]
    pub links: Vec<LinkRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct NodeRecord {
    pub id: String,
    #[serde(default)]
    pub pred: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct LinkRecord {
    pub from: String,
    pub to: String,
    pub label: String,
}

impl GraphFile {
    /// Nodes that are the source of some link; their predicates resolve
    /// as verbs when a form exists in both namespaces.
    pub fn heads(&self) -> BTreeSet<&str> {
        self.links.iter().map(|l| l.from.as_str()).collect()
    }

    pub fn build(&self, vocab: &Vocabulary) -> Result<SituationGraph, CoreError> {
        let heads = self.heads();
        let nodes = self
            .nodes
            .iter()
            .map(|n| {
                let hint = role_hint(heads.contains(n.id.as_str()));
                let pred = n.pred.as_deref().map(|p| vocab.resolve(p, Some(hint))).transpose()?;
                Ok(Node::new(n.id.as_str(), pred))
            })
            .collect::<Result<Vec<_>, CoreError>>()?;
        let links = self
            .links
            .iter()
            .map(|l| {
                let label = ArgLabel::parse(&l.label)
                    .ok_or_else(|| CoreError::InvalidGraph(format!("unknown link label `{}`", l.label)))?;
                Ok((l.from.as_str(), l.to.as_str(), label))
            })
            .collect::<Result<Vec<_>, CoreError>>()?;
        SituationGraph::from_named(nodes, links)
    }

    pub fn from_graph(graph: &SituationGraph, vocab: &Vocabulary) -> Self {
        let id = |i: usize| graph.nodes()[i].id.as_str().to_string();
        GraphFile {
            nodes: graph
                .nodes()
                .iter()
                .map(|n| NodeRecord {
                    id: n.id.as_str().to_string(),
                    pred: n.pred.map(|p| vocab.form(p).to_string()),
                })
                .collect(),
            links: graph
                .links()
                .iter()
                .map(|l| LinkRecord {
                    from: id(l.source),
                    to: id(l.target),
                    label: l.label.as_str().to_string(),
                })
                .collect(),
        }
    }
}

pub(crate) fn role_hint(is_head: bool) -> Role {
    if is_head {
        Role::Verb
    } else {
        Role::Noun
    }
}

pub fn parse_graph(path: &Path, text: &str, vocab: &Vocabulary) -> Result<SituationGraph> {
    let f: GraphFile = serde_json::from_str(text).map_err(|e| Error::json(path, &e))?;
    f.build(vocab).map_err(|e| Error::data(path, e))
}

pub fn load_graph(path: &Path, vocab: &Vocabulary) -> Result<SituationGraph> {
    parse_graph(path, &read_to_string(path)?, vocab)
}

pub fn graph_to_json(graph: &SituationGraph, vocab: &Vocabulary) -> String {
    serde_json::to_string_pretty(&GraphFile::from_graph(graph, vocab)).expect("graph serializes")
}

pub fn save_graph(path: &Path, graph: &SituationGraph, vocab: &Vocabulary) -> Result<()> {
    write_string(path, &(graph_to_json(graph, vocab) + "\n"))
}
