//! Functional distributional semantics over a sparse binary semantic space.
//!
//! Predicates are probabilistic truth-conditional functions of *pixies*
//! (binary vectors with a fixed number of active dimensions). Linked pixies
//! form a situation whose prior is a cardinality-restricted Boltzmann
//! machine. Occasion meanings are posteriors over pixies, computed exactly on
//! small spaces and by mean-field coordinate ascent in general. Quantifiers,
//! similarity and composition are all conditional probabilities in the same
//! graphical model.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, evaluation
//! drivers and the command-line tool live in the companion `fds` crate.

#![no_std]
#![warn(rust_2018_idioms, unused_qualifications)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod corpus;
mod error;
pub mod inference;
pub mod init;
pub mod math;
pub mod model;
pub mod quantifier;
pub mod space;
pub mod tasks;

pub use corpus::{ArgLabel, Link, Node, NodeId, PredicateId, Role, SituationGraph, SvoTriple, Vocabulary};
pub use error::{Error, Result};
pub use inference::{MeanFieldOptions, MeanFieldResult, Observation, PosteriorTable};
pub use model::{FdsModel, LinkMatrix, SemanticFunction};
pub use space::{MeanFieldVector, Pixie, SpaceConfig};
