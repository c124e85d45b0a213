use alloc::string::String;
use alloc::vec::Vec;

use super::{ArgLabel, Node, PredicateId, Role, SituationGraph, Vocabulary, OBJECT_NODE, SUBJECT_NODE, VERB_NODE};
use crate::{Error, Result};

/// A triple of surface forms, before vocabulary resolution.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SurfaceTriple {
    pub subject: Option<String>,
    pub verb: String,
    pub object: Option<String>,
}

impl SurfaceTriple {
    pub fn new(subject: Option<String>, verb: String, object: Option<String>) -> Result<Self> {
        if subject.is_none() && object.is_none() {
            return Err(Error::InvalidTriple("both arguments absent".into()));
        }
        Ok(Self { subject, verb, object })
    }
}

/// A verb with a nominal ARG1 and/or ARG2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SvoTriple {
    subject: Option<PredicateId>,
    verb: PredicateId,
    object: Option<PredicateId>,
}

impl SvoTriple {
    pub fn new(subject: Option<PredicateId>, verb: PredicateId, object: Option<PredicateId>) -> Result<Self> {
        if subject.is_none() && object.is_none() {
            return Err(Error::InvalidTriple("both arguments absent".into()));
        }
        Ok(Self { subject, verb, object })
    }

    pub fn subject(&self) -> Option<PredicateId> {
        self.subject
    }

    pub fn verb(&self) -> PredicateId {
        self.verb
    }

    pub fn object(&self) -> Option<PredicateId> {
        self.object
    }

    /// (head, dependent, label) for each argument link present.
    pub fn links(&self) -> impl Iterator<Item = (PredicateId, PredicateId, ArgLabel)> + '_ {
        let arg1 = self.subject.map(|s| (self.verb, s, ArgLabel::Arg1));
        let arg2 = self.object.map(|o| (self.verb, o, ArgLabel::Arg2));
        arg1.into_iter().chain(arg2)
    }
}

#[derive(Debug, Clone)]
pub enum VocabPolicy {
    /// Count the corpus and keep forms seen at least `min_count` times.
    Build { min_count: u64 },
    /// Resolve against an existing vocabulary; unknown forms are filtered.
    Reuse(Vocabulary),
}

/// Resolves surface triples against a vocabulary. A filtered argument is
/// nulled; a triple is dropped when its verb is filtered or both arguments
/// are gone.
pub fn resolve_triples(raw: &[SurfaceTriple], policy: VocabPolicy) -> Result<(Vec<SvoTriple>, Vocabulary)> {
    let vocab = match policy {
        VocabPolicy::Reuse(v) => v,
        VocabPolicy::Build { min_count } => {
            let tokens = raw.iter().flat_map(|t| {
                let s = t.subject.as_deref().map(|s| (s, Role::Noun, 1u64));
                let o = t.object.as_deref().map(|o| (o, Role::Noun, 1u64));
                s.into_iter()
                    .chain(o)
                    .chain(core::iter::once((t.verb.as_str(), Role::Verb, 1)))
            });
            Vocabulary::from_counts(tokens, min_count)
        }
    };
    let noun = |s: &Option<String>| s.as_deref().and_then(|s| vocab.get(s, Role::Noun));
    let triples: Vec<SvoTriple> = raw
        .iter()
        .filter_map(|t| {
            let verb = vocab.get(&t.verb, Role::Verb)?;
            SvoTriple::new(noun(&t.subject), verb, noun(&t.object)).ok()
        })
        .collect();
    if triples.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Ok((triples, vocab))
}

/// The verb node heads an ARG1 link to the subject and an ARG2 link to the
/// object, with each node observing its predicate. Node order is subject,
/// verb, object.
pub fn triple_to_graph(triple: &SvoTriple) -> SituationGraph {
    let mut nodes = Vec::with_capacity(3);
    let mut links: Vec<(&str, &str, ArgLabel)> = Vec::with_capacity(2);
    if let Some(s) = triple.subject {
        nodes.push(Node::new(SUBJECT_NODE, Some(s)));
        links.push((VERB_NODE, SUBJECT_NODE, ArgLabel::Arg1));
    }
    nodes.push(Node::new(VERB_NODE, Some(triple.verb)));
    if let Some(o) = triple.object {
        nodes.push(Node::new(OBJECT_NODE, Some(o)));
        links.push((VERB_NODE, OBJECT_NODE, ArgLabel::Arg2));
    }
    SituationGraph::from_named(nodes, links).expect("svo topology is always valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn st(s: Option<&str>, v: &str, o: Option<&str>) -> SurfaceTriple {
        SurfaceTriple::new(s.map(Into::into), v.into(), o.map(Into::into)).unwrap()
    }

    #[test]
    fn both_arguments_absent_is_rejected() {
        assert!(SurfaceTriple::new(None, "bark".into(), None).is_err());
    }

    #[test]
    fn min_count_nulls_rare_arguments() {
        // cat appears once, everything else twice or more.
        let raw = vec![
            st(Some("dog"), "chase", Some("cat")),
            st(Some("dog"), "chase", Some("ball")),
            st(None, "chase", Some("ball")),
        ];
        let (triples, vocab) = resolve_triples(&raw, VocabPolicy::Build { min_count: 2 }).unwrap();
        assert_eq!(vocab.len(), 3);
        assert!(vocab.get("cat", Role::Noun).is_none());
        assert_eq!(triples.len(), 3);
        let dog = vocab.get("dog", Role::Noun);
        assert_eq!(triples[0].subject(), dog);
        assert_eq!(triples[0].object(), None);
        assert_eq!(triples[1].object(), vocab.get("ball", Role::Noun));
    }

    #[test]
    fn filtered_verb_or_both_arguments_drops_the_triple() {
        let raw = vec![
            st(Some("dog"), "chase", Some("cat")),
            st(Some("dog"), "chase", Some("cat")),
            st(Some("emu"), "chase", Some("gnu")),
            st(Some("dog"), "bite", Some("cat")),
        ];
        let (triples, _) = resolve_triples(&raw, VocabPolicy::Build { min_count: 2 }).unwrap();
        assert_eq!(triples.len(), 2);
    }

    #[test]
    fn nothing_left_is_an_empty_corpus() {
        let raw = vec![st(Some("dog"), "chase", Some("cat"))];
        assert_eq!(
            resolve_triples(&raw, VocabPolicy::Build { min_count: 5 }).unwrap_err(),
            Error::EmptyCorpus
        );
    }

    #[test]
    fn svo_graph_topology() {
        let vocab = Vocabulary::from_counts(
            [("dog", Role::Noun, 1), ("cat", Role::Noun, 1), ("chase", Role::Verb, 1)],
            1,
        );
        let dog = vocab.get("dog", Role::Noun).unwrap();
        let cat = vocab.get("cat", Role::Noun).unwrap();
        let chase = vocab.get("chase", Role::Verb).unwrap();
        let g = triple_to_graph(&SvoTriple::new(Some(dog), chase, Some(cat)).unwrap());
        assert_eq!(g.len(), 3);
        let y = g.index_of("y").unwrap();
        assert_eq!(g.nodes()[y].pred, Some(chase));
        let labels: Vec<_> = g
            .links()
            .iter()
            .map(|l| (g.nodes()[l.source].pred, g.nodes()[l.target].pred, l.label))
            .collect();
        assert_eq!(
            labels,
            vec![
                (Some(chase), Some(dog), ArgLabel::Arg1),
                (Some(chase), Some(cat), ArgLabel::Arg2)
            ]
        );

        let g = triple_to_graph(&SvoTriple::new(Some(dog), chase, None).unwrap());
        assert_eq!(g.len(), 2);
        assert_eq!(g.links().len(), 1);
        assert_eq!(g.links()[0].label, ArgLabel::Arg1);
    }
}
