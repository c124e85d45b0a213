//! File formats.

mod datasets;
mod embeddings;
mod graph;
mod model;
mod scope;
mod triples;
mod world;

use std::path::Path;

pub use datasets::{load_relpron, load_sim, load_svo, RelpronItem, SimItem, SvoItem};
pub use embeddings::{load_embeddings, parse_embeddings};
pub use graph::{graph_to_json, load_graph, parse_graph, save_graph};
pub use model::{load_model, model_to_json, parse_model, save_model, SUPPORTED_VERSIONS};
pub use scope::{load_scope, parse_scope, scope_to_json, FuzzyDefaults};
pub use triples::{load_triples, parse_triples, read_triples, triples_tsv, write_triples};
pub use world::{load_world, parse_world};

pub(crate) fn read_to_string(path: &Path) -> crate::Result<String> {
    std::fs::read_to_string(path).map_err(|e| crate::Error::io(path, e))
}

pub(crate) fn write_string(path: &Path, s: &str) -> crate::Result<()> {
    std::fs::write(path, s).map_err(|e| crate::Error::io(path, e))
}

/// Non-blank, non-comment lines with 1-based line numbers.
pub(crate) fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}

pub(crate) fn tab_fields<'a>(path: &Path, line: usize, text: &'a str, n: usize) -> crate::Result<Vec<&'a str>> {
    let fields: Vec<&str> = text.split('\t').map(str::trim).collect();
    if fields.len() != n {
        return Err(crate::Error::parse(
            path,
            line,
            format!("expected {n} tab-separated fields, found {}", fields.len()),
        ));
    }
    Ok(fields)
}
