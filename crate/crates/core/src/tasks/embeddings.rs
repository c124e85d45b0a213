use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::math::{dot, sqrt};
use crate::{Error, Result};

/// Pre-trained word vectors of uniform dimensionality.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExternalEmbeddings {
    dim: usize,
    vectors: BTreeMap<String, Vec<f64>>,
}

impl ExternalEmbeddings {
    pub fn new(vectors: BTreeMap<String, Vec<f64>>) -> Result<Self> {
        let dim = vectors.values().next().map_or(0, Vec::len);
        for (w, v) in &vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            if dot(v, v) == 0.0 {
                return Err(Error::ZeroNorm(w.clone()));
            }
        }
        Ok(Self { dim, vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.vectors.get(word).map(Vec::as_slice)
    }

    /// Cosine between two stored words; `None` if either is missing.
    pub fn cosine(&self, w1: &str, w2: &str) -> Option<f64> {
        Some(cosine(self.get(w1)?, self.get(w2)?))
    }

    /// Sum of the vectors of `words`, `None` if any is missing.
    pub fn sum(&self, words: &[&str]) -> Option<Vec<f64>> {
        let mut acc = alloc::vec![0.0; self.dim];
        for w in words {
            for (a, x) in acc.iter_mut().zip(self.get(w)?) {
                *a += x;
            }
        }
        Some(acc)
    }
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    dot(a, b) / (sqrt(dot(a, a)) * sqrt(dot(b, b)))
}

fn zscores(xs: &[f64]) -> Result<Vec<f64>> {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    if var == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let sd = sqrt(var);
    Ok(xs.iter().map(|x| (x - mean) / sd).collect())
}

/// `α · z(a) + (1 − α) · z(b)`, each list standardised (population standard
/// deviation) over the candidates.
pub fn ensemble_score(scores_a: &[f64], scores_b: &[f64], alpha: f64) -> Result<Vec<f64>> {
    if scores_a.len() != scores_b.len() {
        return Err(Error::LengthMismatch(scores_a.len(), scores_b.len()));
    }
    if scores_a.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(alloc::format!("alpha {alpha} outside [0, 1]")));
    }
    let (za, zb) = (zscores(scores_a)?, zscores(scores_b)?);
    Ok(za.iter().zip(&zb).map(|(a, b)| alpha * a + (1.0 - alpha) * b).collect())
}
