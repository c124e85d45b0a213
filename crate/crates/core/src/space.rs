//! The semantic space: fixed-cardinality sparse binary pixies and mean-field
//! vectors over them.

use alloc::format;
use alloc::vec::Vec;

use crate::math;
use crate::{Error, Result};

/// Default bound on the number of items an exhaustive enumeration may visit.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// Tolerance on the sum-to-cardinality invariant of a mean-field vector.
pub const MEAN_FIELD_SUM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpaceConfig {
    dim: usize,
    card: usize,
}

impl SpaceConfig {
    pub fn new(dim: usize, card: usize) -> Result<Self> {
        if card == 0 || card >= dim {
            return Err(Error::InvalidSpace { dim, card });
        }
        Ok(Self { dim, card })
    }

    /// Total number of dimensions.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of active dimensions in every pixie.
    pub fn card(&self) -> usize {
        self.card
    }

    /// Activation rate `C / D` of a dimension under the uniform distribution.
    pub fn density(&self) -> f64 {
        self.card as f64 / self.dim as f64
    }

    /// log10 of the number of pixies, `binomial(D, C)`, summed in log space.
    pub fn count_pixies(&self) -> f64 {
        log10_binomial(self.dim, self.card)
    }

    /// Exact pixie count, `None` if it does not fit in a `u128`.
    pub fn pixie_count(&self) -> Option<u128> {
        binomial(self.dim, self.card)
    }

    pub fn enumerate_pixies(&self) -> Result<PixieIter> {
        self.enumerate_pixies_capped(DEFAULT_ENUMERATION_CAP)
    }

    /// Lexicographic enumeration of all pixies, refused when the count
    /// exceeds `cap`.
    pub fn enumerate_pixies_capped(&self, cap: u64) -> Result<PixieIter> {
        match self.pixie_count() {
            Some(n) if n <= cap as u128 => Ok(PixieIter {
                dim: self.dim,
                next: Some((0..self.card).collect()),
            }),
            _ => Err(Error::TooLarge {
                log10_size: self.count_pixies(),
                cap,
            }),
        }
    }

    pub fn uniform_mean_field(&self) -> MeanFieldVector {
        MeanFieldVector {
            probs: alloc::vec![self.density(); self.dim],
        }
    }
}

pub fn count_pixies(config: SpaceConfig) -> f64 {
    config.count_pixies()
}

pub fn uniform_mean_field(config: SpaceConfig) -> MeanFieldVector {
    config.uniform_mean_field()
}

fn log10_binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (1..=k)
        .map(|i| math::log10((n - k + i) as f64) - math::log10(i as f64))
        .sum()
}

/// Exact binomial coefficient with overflow detection.
pub fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        // acc * (n - k + i) is divisible by i at every step.
        acc = acc.checked_mul(n as u128 - k as u128 + i)? / i;
    }
    Some(acc)
}

/// A point of the semantic space, stored as its sorted active dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pixie {
    active: Vec<usize>,
}

impl Pixie {
    pub fn new(config: SpaceConfig, mut active: Vec<usize>) -> Result<Self> {
        active.sort_unstable();
        if active.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPixie(format!("repeated dimension in {active:?}")));
        }
        if active.len() != config.card() {
            return Err(Error::InvalidPixie(format!(
                "{} active dimensions, cardinality is {}",
                active.len(),
                config.card()
            )));
        }
        if let Some(&i) = active.iter().find(|&&i| i >= config.dim()) {
            return Err(Error::InvalidPixie(format!(
                "dimension {i} out of range for dim {}",
                config.dim()
            )));
        }
        Ok(Self { active })
    }

    pub fn active(&self) -> &[usize] {
        &self.active
    }

    pub fn is_active(&self, dim: usize) -> bool {
        self.active.binary_search(&dim).is_ok()
    }

    /// Dense 0/1 indicator vector of length `dim`.
    pub fn indicator(&self, dim: usize) -> Vec<f64> {
        let mut v = alloc::vec![0.0; dim];
        for &i in &self.active {
            v[i] = 1.0;
        }
        v
    }
}

/// Iterator over cardinality-C subsets of `0..D` in lexicographic order.
#[derive(Debug, Clone)]
pub struct PixieIter {
    dim: usize,
    next: Option<Vec<usize>>,
}

impl Iterator for PixieIter {
    type Item = Pixie;

    fn next(&mut self) -> Option<Pixie> {
        let current = self.next.take()?;
        let k = current.len();
        let mut succ = current.clone();
        // Rightmost position that can still be incremented.
        let mut pos = k;
        while pos > 0 {
            pos -= 1;
            if succ[pos] < self.dim - k + pos {
                succ[pos] += 1;
                for j in pos + 1..k {
                    succ[j] = succ[j - 1] + 1;
                }
                self.next = Some(succ);
                break;
            }
        }
        Some(Pixie { active: current })
    }
}

/// Independent per-dimension activation probabilities summing to the
/// cardinality: an occasion meaning.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanFieldVector {
    probs: Vec<f64>,
}

impl MeanFieldVector {
    pub fn new(config: SpaceConfig, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != config.dim() {
            return Err(Error::DimensionMismatch {
                expected: config.dim(),
                found: probs.len(),
            });
        }
        if let Some(p) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidMeanField(format!("component {p} outside [0, 1]")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - config.card() as f64).abs() > MEAN_FIELD_SUM_TOLERANCE {
            return Err(Error::InvalidMeanField(format!(
                "components sum to {sum}, cardinality is {}",
                config.card()
            )));
        }
        Ok(Self { probs })
    }

    pub(crate) fn from_probs_unchecked(probs: Vec<f64>) -> Self {
        Self { probs }
    }

    /// The indicator of a pixie seen as a degenerate mean field.
    pub fn from_pixie(config: SpaceConfig, pixie: &Pixie) -> Self {
        Self {
            probs: pixie.indicator(config.dim()),
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    pub fn sum(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.probs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn cfg(d: usize, c: usize) -> SpaceConfig {
        SpaceConfig::new(d, c).unwrap()
    }

    #[test]
    fn rejects_degenerate_configs() {
        assert!(SpaceConfig::new(4, 0).is_err());
        assert!(SpaceConfig::new(4, 4).is_err());
        assert!(SpaceConfig::new(0, 0).is_err());
    }

    #[test]
    fn count_matches_known_magnitudes() {
        let big = cfg(1000, 40).count_pixies();
        assert!((71.0..=72.5).contains(&big), "{big}");
        let sub = cfg(200, 40).count_pixies();
        assert!((41.5..=43.0).contains(&sub), "{sub}");
        assert!((cfg(4, 2).count_pixies() - math::log10(6.0)).abs() < 1e-12);
        // No overflow at a million dimensions.
        assert!(cfg(1_000_000, 40).count_pixies().is_finite());
    }

    #[test]
    fn enumerates_lexicographically() {
        let all: Vec<_> = cfg(3, 2).enumerate_pixies().unwrap().collect();
        let actives: Vec<_> = all.iter().map(|p| p.active().to_vec()).collect();
        assert_eq!(actives, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(cfg(4, 2).enumerate_pixies().unwrap().count(), 6);
    }

    #[test]
    fn enumeration_refuses_huge_spaces() {
        match cfg(1000, 40).enumerate_pixies() {
            Err(Error::TooLarge { log10_size, .. }) => assert!(log10_size > 71.0),
            other => panic!("expected TooLarge, got {other:?}"),
        }
    }

    #[test]
    fn enumeration_count_matches_binomial_for_small_dims() {
        for d in 2..=16 {
            for c in 1..d {
                let config = cfg(d, c);
                let n = config.enumerate_pixies().unwrap().count() as u128;
                assert_eq!(n, binomial(d, c).unwrap());
                let rounded = libm::round(libm::pow(10.0, config.count_pixies())) as u128;
                assert_eq!(n, rounded, "d={d} c={c}");
            }
        }
    }

    #[test]
    fn uniform_mean_field_is_symmetric() {
        let q = cfg(10, 2).uniform_mean_field();
        assert!(q.probs().iter().all(|&p| p == 0.2));
        assert!((q.sum() - 2.0).abs() < 1e-12);
        assert_eq!(cfg(2, 1).uniform_mean_field().probs(), &[0.5, 0.5]);
    }

    #[test]
    fn pixie_validation() {
        let c = cfg(4, 2);
        assert!(Pixie::new(c, vec![1, 0]).is_ok());
        assert!(Pixie::new(c, vec![1]).is_err());
        assert!(Pixie::new(c, vec![1, 1]).is_err());
        assert!(Pixie::new(c, vec![1, 4]).is_err());
    }

    #[test]
    fn mean_field_validation() {
        let c = cfg(4, 2);
        assert!(MeanFieldVector::new(c, vec![0.5; 4]).is_ok());
        assert!(MeanFieldVector::new(c, vec![0.5; 3]).is_err());
        assert!(MeanFieldVector::new(c, vec![1.5, 0.5, 0.0, 0.0]).is_err());
        assert!(MeanFieldVector::new(c, vec![0.1; 4]).is_err());
    }
}
