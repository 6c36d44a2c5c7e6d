use std::collections::HashMap;
use std::hash::Hash;

use super::EntropyError;

/// Tolerance on the total mass of a distribution.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// A probability distribution on finitely many outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDistribution<K> {
    weights: Vec<(K, f64)>,
}

impl<K: Clone + Eq + Hash> FiniteDistribution<K> {
    /// Validates weights; duplicate outcomes are merged.
    pub fn new<I: IntoIterator<Item = (K, f64)>>(weights: I) -> Result<Self, EntropyError> {
        let mut merged: Vec<(K, f64)> = Vec::new();
        let mut pos: HashMap<K, usize> = HashMap::new();
        let mut total = 0.0;
        for (k, w) in weights {
            if !(w >= 0.0) || !w.is_finite() {
                return Err(EntropyError::InvalidDistribution(format!(
                    "weight {w} is not a nonnegative number"
                )));
            }
            total += w;
            match pos.get(&k) {
                Some(&i) => merged[i].1 += w,
                None => {
                    pos.insert(k.clone(), merged.len());
                    merged.push((k, w));
                }
            }
        }
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(EntropyError::InvalidDistribution(format!(
                "weights sum to {total}"
            )));
        }
        Ok(FiniteDistribution { weights: merged })
    }

    pub fn uniform<I: IntoIterator<Item = K>>(outcomes: I) -> Result<Self, EntropyError> {
        let v: Vec<K> = outcomes.into_iter().collect();
        if v.is_empty() {
            return Err(EntropyError::InvalidDistribution("no outcomes".into()));
        }
        let p = 1.0 / v.len() as f64;
        FiniteDistribution::new(v.into_iter().map(|k| (k, p)))
    }

    /// Normalizes nonnegative counts.
    pub fn from_counts<I: IntoIterator<Item = (K, u64)>>(counts: I) -> Result<Self, EntropyError> {
        let v: Vec<(K, u64)> = counts.into_iter().collect();
        let total: u64 = v.iter().map(|c| c.1).sum();
        if total == 0 {
            return Err(EntropyError::InvalidDistribution("all counts are zero".into()));
        }
        FiniteDistribution::new(v.into_iter().map(|(k, c)| (k, c as f64 / total as f64)))
    }

    pub fn weights(&self) -> &[(K, f64)] {
        &self.weights
    }

    pub fn prob(&self, k: &K) -> f64 {
        self.weights.iter().find(|(o, _)| o == k).map_or(0.0, |w| w.1)
    }

    /// Outcomes of positive mass.
    pub fn support_size(&self) -> usize {
        self.weights.iter().filter(|w| w.1 > 0.0).count()
    }

    pub fn is_uniform(&self, tol: f64) -> bool {
        let n = self.support_size();
        n > 0
            && self
                .weights
                .iter()
                .filter(|w| w.1 > 0.0)
                .all(|w| (w.1 - 1.0 / n as f64).abs() <= tol)
    }

    /// Push-forward along `f`.
    pub fn map<J: Clone + Eq + Hash>(&self, mut f: impl FnMut(&K) -> J) -> FiniteDistribution<J> {
        let mut out: Vec<(J, f64)> = Vec::new();
        let mut pos: HashMap<J, usize> = HashMap::new();
        for (k, w) in &self.weights {
            let j = f(k);
            match pos.get(&j) {
                Some(&i) => out[i].1 += w,
                None => {
                    pos.insert(j.clone(), out.len());
                    out.push((j, *w));
                }
            }
        }
        FiniteDistribution { weights: out }
    }

    /// Total variation distance to `other`.
    pub fn total_variation(&self, other: &FiniteDistribution<K>) -> f64 {
        let mut diff: HashMap<&K, f64> = HashMap::new();
        for (k, w) in &self.weights {
            *diff.entry(k).or_default() += w;
        }
        for (k, w) in &other.weights {
            *diff.entry(k).or_default() -= w;
        }
        0.5 * diff.values().map(|d| d.abs()).sum::<f64>()
    }
}

/// Shannon entropy in nats, with `0 log 0 = 0`.
pub fn shannon_entropy<K>(d: &FiniteDistribution<K>) -> f64 {
    let h: f64 = d
        .weights
        .iter()
        .filter(|w| w.1 > 0.0)
        .map(|w| -w.1 * w.1.ln())
        .sum();
    h.max(0.0)
}

/// Marginal of a joint distribution on words to the coordinates in `block`.
pub fn marginal(d: &FiniteDistribution<Vec<u32>>, block: &[usize]) -> FiniteDistribution<Vec<u32>> {
    d.map(|w| block.iter().map(|&i| w[i]).collect())
}
