//! Vocabularies, SVO triples, situation graphs and seeded micro-world
//! corpora.

mod graph;
mod synth;
mod triples;
mod vocab;

pub use graph::{ArgLabel, Link, Node, NodeId, SituationGraph};
pub use synth::{generate_synthetic_corpus, Frame, WorldSpec};
pub use triples::{resolve_triples, triple_to_graph, SurfaceTriple, SvoTriple, VocabPolicy};
pub use vocab::{PredicateId, Role, VocabEntry, Vocabulary, DEFAULT_MIN_COUNT};

/// Node ids used when a triple is turned into a graph.
pub const SUBJECT_NODE: &str = "x";
pub const VERB_NODE: &str = "y";
pub const OBJECT_NODE: &str = "z";
