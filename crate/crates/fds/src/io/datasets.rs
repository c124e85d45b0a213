//! Evaluation datasets as tab-separated files of surface forms.

use std::path::Path;

use fds_core::tasks::ClauseKind;

use super::{data_lines, read_to_string, tab_fields};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SimItem {
    pub word1: String,
    pub word2: String,
    pub gold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvoItem {
    pub subject: String,
    pub verb1: String,
    pub object: String,
    pub verb2: String,
    pub gold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelpronItem {
    pub term: String,
    pub clause: ClauseKind,
    pub hypernym: String,
    pub verb: String,
    pub argument: String,
}

fn gold(path: &Path, line: usize, s: &str) -> Result<f64> {
    s.parse::<f64>()
        .ok()
        .filter(|g| g.is_finite())
        .ok_or_else(|| Error::parse(path, line, format!("invalid gold score `{s}`")))
}

fn parse_rows<T>(path: &Path, text: &str, n: usize, row: impl Fn(usize, Vec<&str>) -> Result<T>) -> Result<Vec<T>> {
    data_lines(text)
        .map(|(line, l)| {
            let f = tab_fields(path, line, l, n)?;
            if f.iter().any(|s| s.is_empty()) {
                return Err(Error::parse(path, line, "empty field"));
            }
            row(line, f)
        })
        .collect()
}

/// `word1<TAB>word2<TAB>gold`.
pub fn load_sim(path: &Path) -> Result<Vec<SimItem>> {
    parse_rows(path, &read_to_string(path)?, 3, |line, f| {
        Ok(SimItem {
            word1: f[0].into(),
            word2: f[1].into(),
            gold: gold(path, line, f[2])?,
        })
    })
}

/// `subject<TAB>verb1<TAB>object<TAB>verb2<TAB>gold`.
pub fn load_svo(path: &Path) -> Result<Vec<SvoItem>> {
    parse_rows(path, &read_to_string(path)?, 5, |line, f| {
        Ok(SvoItem {
            subject: f[0].into(),
            verb1: f[1].into(),
            object: f[2].into(),
            verb2: f[3].into(),
            gold: gold(path, line, f[4])?,
        })
    })
}

/// `term<TAB>SBJ|OBJ<TAB>hypernym<TAB>verb<TAB>argument`.
pub fn load_relpron(path: &Path) -> Result<Vec<RelpronItem>> {
    parse_rows(path, &read_to_string(path)?, 5, |line, f| {
        let clause = match f[1] {
            "SBJ" => ClauseKind::Sbj,
            "OBJ" => ClauseKind::Obj,
            other => {
                return Err(Error::parse(
                    path,
                    line,
                    format!("clause must be SBJ or OBJ, found `{other}`"),
                ))
            }
        };
        Ok(RelpronItem {
            term: f[0].into(),
            clause,
            hypernym: f[2].into(),
            verb: f[3].into(),
            argument: f[4].into(),
        })
    })
}
