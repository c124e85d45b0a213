use std::collections::BTreeMap;
use std::path::Path;

use fds_core::corpus::{Frame, WorldSpec};
use serde::Deserialize;

use super::read_to_string;
use crate::{Error, Result};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WorldFile {
    categories: BTreeMap<String, Vec<String>>,
    frames: Vec<FrameRecord>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameRecord {
    verb: String,
    #[serde(default)]
    subj: Option<String>,
    #[serde(default)]
    obj: Option<String>,
    weight: f64,
}

pub fn parse_world(path: &Path, text: &str) -> Result<WorldSpec> {
    let f: WorldFile = serde_json::from_str(text).map_err(|e| Error::json(path, &e))?;
    let spec = WorldSpec {
        categories: f.categories,
        frames: f
            .frames
            .into_iter()
            .map(|r| Frame {
                verb: r.verb,
                subj: r.subj,
                obj: r.obj,
                weight: r.weight,
            })
            .collect(),
    };
    spec.validate().map_err(|e| Error::data(path, e))?;
    Ok(spec)
}

pub fn load_world(path: &Path) -> Result<WorldSpec> {
    parse_world(path, &read_to_string(path)?)
}
