//! Whitespace text vectors: an optional `count dim` header, then `word v1 ... vD`.

use std::collections::BTreeMap;
use std::path::Path;

use fds_core::tasks::ExternalEmbeddings;

use super::{data_lines, read_to_string};
use crate::{Error, Result};

pub fn parse_embeddings(path: &Path, text: &str) -> Result<ExternalEmbeddings> {
    let mut lines = data_lines(text).peekable();
    let mut header = None;
    if let Some(&(_, first)) = lines.peek() {
        let t: Vec<&str> = first.split_whitespace().collect();
        if let [a, b] = t[..] {
            if let (Ok(count), Ok(dim)) = (a.parse::<usize>(), b.parse::<usize>()) {
                header = Some((count, dim));
                lines.next();
            }
        }
    }
    let mut vectors = BTreeMap::new();
    let mut dim = header.map(|h| h.1);
    for (line, l) in lines {
        let mut t = l.split_whitespace();
        let word = t.next().expect("data lines are non-blank");
        let v = t
            .map(|x| x.parse::<f64>().ok().filter(|v| v.is_finite()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::parse(path, line, "invalid number"))?;
        match dim {
            Some(d) if d != v.len() => {
                return Err(Error::parse(
                    path,
                    line,
                    format!("expected {d} components, found {}", v.len()),
                ));
            }
            _ => dim = Some(v.len()),
        }
        if v.is_empty() {
            return Err(Error::parse(path, line, "vector has no components"));
        }
        if vectors.insert(word.to_string(), v).is_some() {
            return Err(Error::parse(path, line, format!("duplicate word `{word}`")));
        }
    }
    if let Some((count, _)) = header {
        if count != vectors.len() {
            return Err(Error::format(
                path,
                format!("header announces {count} vectors, found {}", vectors.len()),
            ));
        }
    }
    ExternalEmbeddings::new(vectors).map_err(|e| Error::data(path, e))
}

pub fn load_embeddings(path: &Path) -> Result<ExternalEmbeddings> {
    parse_embeddings(path, &read_to_string(path)?)
}
