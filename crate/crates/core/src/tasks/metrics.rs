use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::math::sqrt;
use crate::{Error, Result};

/// Average ranks (1-based), ties sharing the mean of their positions.
fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut out = alloc::vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            out[k] = avg;
        }
        i = j + 1;
    }
    out
}

/// Spearman's rho: Pearson correlation of average ranks.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (rx, ry) = (ranks(xs), ranks(ys));
    let n = xs.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((sxy / sqrt(sxx * syy)).clamp(-1.0, 1.0))
}

/// Mean of precision-at-rank over the gold items; gold items missing from
/// the ranking contribute zero.
pub fn average_precision<T: Ord>(ranking: &[T], gold: &BTreeSet<T>) -> Result<f64> {
    if gold.is_empty() {
        return Err(Error::EmptyGoldSet);
    }
    let mut hits = 0usize;
    let mut total = 0.0;
    for (rank, item) in ranking.iter().enumerate() {
        if gold.contains(item) {
            hits += 1;
            total += hits as f64 / (rank + 1) as f64;
        }
    }
    Ok(total / gold.len() as f64)
}

pub fn mean_average_precision<T: Ord>(rankings: &[Vec<T>], gold: &[BTreeSet<T>]) -> Result<f64> {
    if rankings.len() != gold.len() {
        return Err(Error::LengthMismatch(rankings.len(), gold.len()));
    }
    if rankings.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sum = 0.0;
    for (r, g) in rankings.iter().zip(gold) {
        sum += average_precision(r, g)?;
    }
    Ok(sum / rankings.len() as f64)
}
