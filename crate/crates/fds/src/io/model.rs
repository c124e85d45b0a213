//! Versioned JSON model files.

use std::collections::BTreeMap;
use std::path::Path;

use fds_core::corpus::{ArgLabel, Role, VocabEntry, Vocabulary};
use fds_core::model::{LinkMatrix, SemanticFunction};
use fds_core::{FdsModel, SpaceConfig};
use serde::{Deserialize, Serialize};

use super::{read_to_string, write_string};
use crate::{Error, Result};

pub const SUPPORTED_VERSIONS: &[u64] = &[1];

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    version: u64,
    dim: usize,
    card: usize,
    vocab: Vec<VocabRecord>,
    functions: Vec<FunctionRecord>,
    links: Links,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VocabRecord {
    form: String,
    role: String,
    count: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionRecord {
    pred: String,
    role: String,
    w: Vec<f64>,
    b: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Links {
    #[serde(rename = "ARG1")]
    arg1: Vec<Vec<f64>>,
    #[serde(rename = "ARG2")]
    arg2: Vec<Vec<f64>>,
}

pub fn model_to_json(model: &FdsModel) -> String {
    let v = model.vocab();
    let rows = |m: &LinkMatrix| (0..m.dim()).map(|i| m.row(i).to_vec()).collect();
    let file = ModelFile {
        version: SUPPORTED_VERSIONS[SUPPORTED_VERSIONS.len() - 1],
        dim: model.config().dim(),
        card: model.config().card(),
        vocab: v
            .entries()
            .iter()
            .map(|e| VocabRecord {
                form: e.form.clone(),
                role: e.role.as_str().into(),
                count: e.count,
            })
            .collect(),
        functions: v
            .ids()
            .map(|id| {
                let f = model.function(id);
                FunctionRecord {
                    pred: v.form(id).into(),
                    role: v.role(id).as_str().into(),
                    w: f.weights().to_vec(),
                    b: f.bias(),
                }
            })
            .collect(),
        links: Links {
            arg1: rows(model.link(ArgLabel::Arg1)),
            arg2: rows(model.link(ArgLabel::Arg2)),
        },
    };
    serde_json::to_string(&file).expect("model serializes") + "\n"
}

pub fn save_model(path: &Path, model: &FdsModel) -> Result<()> {
    write_string(path, &model_to_json(model))
}

/// Version errors, corrupt files and structurally inconsistent contents are
/// reported as distinct errors.
pub fn parse_model(path: &Path, text: &str) -> Result<FdsModel> {
    let corrupt = |msg: String| Error::CorruptModel { path: path.into(), msg };
    let inconsistent = |msg: String| Error::InconsistentModel { path: path.into(), msg };

    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| {
        if e.is_eof() {
            corrupt("file is truncated".into())
        } else {
            corrupt(e.to_string())
        }
    })?;
    let version = value
        .get("version")
        .ok_or_else(|| corrupt("missing `version` field".into()))?;
    if !version.as_u64().is_some_and(|v| SUPPORTED_VERSIONS.contains(&v)) {
        return Err(Error::Version {
            path: path.into(),
            found: version.to_string(),
            supported: SUPPORTED_VERSIONS
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(", "),
        });
    }
    let file: ModelFile = serde_json::from_value(value).map_err(|e| corrupt(e.to_string()))?;

    let config = SpaceConfig::new(file.dim, file.card).map_err(|e| inconsistent(e.to_string()))?;
    let role = |s: &str| Role::parse(s).ok_or_else(|| corrupt(format!("unknown role `{s}`")));
    let entries = file
        .vocab
        .into_iter()
        .map(|r| {
            Ok(VocabEntry {
                role: role(&r.role)?,
                form: r.form,
                count: r.count,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let vocab = Vocabulary::from_entries(entries).map_err(|e| inconsistent(e.to_string()))?;

    let mut by_pred: BTreeMap<usize, SemanticFunction> = BTreeMap::new();
    for r in file.functions {
        let id = vocab.get(&r.pred, role(&r.role)?).ok_or_else(|| {
            inconsistent(format!(
                "function for `{}` ({}) has no vocabulary entry",
                r.pred, r.role
            ))
        })?;
        let f = SemanticFunction::new(r.w, r.b).map_err(|e| inconsistent(e.to_string()))?;
        if by_pred.insert(id.index(), f).is_some() {
            return Err(inconsistent(format!(
                "duplicate function for `{}` ({})",
                r.pred, r.role
            )));
        }
    }
    if let Some(id) = vocab.ids().find(|id| !by_pred.contains_key(&id.index())) {
        return Err(inconsistent(format!(
            "no function for `{}` ({})",
            vocab.form(id),
            vocab.role(id)
        )));
    }
    let functions = by_pred.into_values().collect();

    let matrix = |label, rows: Vec<Vec<f64>>| {
        if rows.len() != config.dim() || rows.iter().any(|r| r.len() != config.dim()) {
            return Err(inconsistent(format!("{label} matrix is not {0}x{0}", config.dim())));
        }
        LinkMatrix::from_rows(label, rows).map_err(|e| inconsistent(e.to_string()))
    };
    let arg1 = matrix(ArgLabel::Arg1, file.links.arg1)?;
    let arg2 = matrix(ArgLabel::Arg2, file.links.arg2)?;
    FdsModel::new(config, vocab, functions, arg1, arg2).map_err(|e| inconsistent(e.to_string()))
}

pub fn load_model(path: &Path) -> Result<FdsModel> {
    parse_model(path, &read_to_string(path)?)
}
