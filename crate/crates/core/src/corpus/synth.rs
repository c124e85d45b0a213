use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SurfaceTriple;
use crate::{Error, Result};

/// A verb with the noun categories allowed in its argument slots.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub verb: String,
    pub subj: Option<String>,
    pub obj: Option<String>,
    pub weight: f64,
}

/// Noun categories plus weighted verb frames over them.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WorldSpec {
    pub categories: BTreeMap<String, Vec<String>>,
    pub frames: Vec<Frame>,
}

impl WorldSpec {
    pub fn validate(&self) -> Result<()> {
        if self.frames.is_empty() {
            return Err(Error::InvalidWorld("no frames".into()));
        }
        for f in &self.frames {
            if !(f.weight.is_finite() && f.weight > 0.0) {
                return Err(Error::InvalidWorld(format!(
                    "frame `{}` has non-positive weight {}",
                    f.verb, f.weight
                )));
            }
            if f.subj.is_none() && f.obj.is_none() {
                return Err(Error::InvalidWorld(format!("frame `{}` has no arguments", f.verb)));
            }
            for cat in f.subj.iter().chain(&f.obj) {
                match self.categories.get(cat) {
                    None => {
                        return Err(Error::InvalidWorld(format!(
                            "frame `{}` references unknown category `{cat}`",
                            f.verb
                        )))
                    }
                    Some(nouns) if nouns.is_empty() => {
                        return Err(Error::InvalidWorld(format!(
                            "frame `{}` references empty category `{cat}`",
                            f.verb
                        )))
                    }
                    Some(_) => {}
                }
            }
        }
        Ok(())
    }
}

/// Samples `n` triples: a frame by weight, then each argument uniformly
/// from its category. A pure function of `(spec, seed, n)`.
pub fn generate_synthetic_corpus(spec: &WorldSpec, seed: u64, n: usize) -> Result<Vec<SurfaceTriple>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let frames =
        WeightedIndex::new(spec.frames.iter().map(|f| f.weight)).map_err(|e| Error::InvalidWorld(format!("{e}")))?;
    let pick = |cat: &Option<String>, rng: &mut ChaCha8Rng| {
        cat.as_ref().map(|c| {
            let nouns = &spec.categories[c];
            nouns[rng.gen_range(0..nouns.len() as u64) as usize].clone()
        })
    };
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let f = &spec.frames[frames.sample(&mut rng)];
        let subject = pick(&f.subj, &mut rng);
        let object = pick(&f.obj, &mut rng);
        out.push(SurfaceTriple::new(subject, f.verb.clone(), object)?);
    }
    Ok(out)
}
