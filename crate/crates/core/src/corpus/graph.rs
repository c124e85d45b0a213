use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::PredicateId;
use crate::{Error, Result};

/// Argument label of a link from a head (verb) pixie to a dependent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArgLabel {
    Arg1,
    Arg2,
}

impl ArgLabel {
    pub const ALL: [ArgLabel; 2] = [ArgLabel::Arg1, ArgLabel::Arg2];

    pub fn as_str(self) -> &'static str {
        match self {
            ArgLabel::Arg1 => "ARG1",
            ArgLabel::Arg2 => "ARG2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ARG1" => Some(ArgLabel::Arg1),
            "ARG2" => Some(ArgLabel::Arg2),
            _ => None,
        }
    }
}

impl fmt::Display for ArgLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub String);

impl NodeId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId(s.into())
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: NodeId,
    pub pred: Option<PredicateId>,
}

impl Node {
    pub fn new(id: impl Into<NodeId>, pred: Option<PredicateId>) -> Self {
        Self { id: id.into(), pred }
    }
}

/// A labelled link between two nodes, by node index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Link {
    pub source: usize,
    pub target: usize,
    pub label: ArgLabel,
}

/// Pixie-valued nodes joined by ARG1/ARG2 links. Always connected, with
/// unique node ids and no repeated link.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SituationGraph {
    nodes: Vec<Node>,
    links: Vec<Link>,
}

impl SituationGraph {
    pub fn new(nodes: Vec<Node>, links: Vec<Link>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidGraph("graph has no nodes".into()));
        }
        let mut ids = BTreeSet::new();
        for n in &nodes {
            if !ids.insert(&n.id) {
                return Err(Error::InvalidGraph(format!("duplicate node id `{}`", n.id)));
            }
        }
        let mut seen = BTreeSet::new();
        for l in &links {
            for end in [l.source, l.target] {
                if end >= nodes.len() {
                    return Err(Error::InvalidGraph(format!("link endpoint #{end} does not exist")));
                }
            }
            if !seen.insert(*l) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate link {} -> {} ({})",
                    nodes[l.source].id, nodes[l.target].id, l.label
                )));
            }
        }
        let graph = Self { nodes, links };
        if !graph.is_connected() {
            return Err(Error::InvalidGraph("graph is not connected".into()));
        }
        Ok(graph)
    }

    /// Builds a graph whose links name their endpoints by node id.
    pub fn from_named<I, S>(nodes: Vec<Node>, links: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, S, ArgLabel)>,
        S: AsRef<str>,
    {
        let find = |id: &str| {
            nodes
                .iter()
                .position(|n| n.id.as_str() == id)
                .ok_or_else(|| Error::InvalidGraph(format!("link endpoint `{id}` does not exist")))
        };
        let links = links
            .into_iter()
            .map(|(s, t, label)| {
                Ok(Link {
                    source: find(s.as_ref())?,
                    target: find(t.as_ref())?,
                    label,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(nodes, links)
    }

    pub fn single(id: impl Into<NodeId>, pred: Option<PredicateId>) -> Self {
        Self {
            nodes: alloc::vec![Node::new(id, pred)],
            links: Vec::new(),
        }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.nodes
            .iter()
            .position(|n| n.id.as_str() == id)
            .ok_or_else(|| Error::UnknownNode(id.into()))
    }

    /// True if some link leaves this node, i.e. it is a head.
    pub fn is_head(&self, node: usize) -> bool {
        self.links.iter().any(|l| l.source == node)
    }

    /// The same topology with every observed predicate removed.
    pub fn without_predicates(&self) -> Self {
        Self {
            nodes: self.nodes.iter().map(|n| Node::new(n.id.clone(), None)).collect(),
            links: self.links.clone(),
        }
    }

    /// The same graph minus the link at `index`, unless that disconnects it.
    pub fn without_link(&self, index: usize) -> Result<Self> {
        let mut links = self.links.clone();
        links.remove(index);
        Self::new(self.nodes.clone(), links)
    }

    fn is_connected(&self) -> bool {
        let n = self.nodes.len();
        let mut reached = alloc::vec![false; n];
        let mut stack = alloc::vec![0usize];
        reached[0] = true;
        while let Some(u) = stack.pop() {
            for l in &self.links {
                let other = if l.source == u {
                    l.target
                } else if l.target == u {
                    l.source
                } else {
                    continue;
                };
                if !reached[other] {
                    reached[other] = true;
                    stack.push(other);
                }
            }
        }
        reached.into_iter().all(|r| r)
    }
}
