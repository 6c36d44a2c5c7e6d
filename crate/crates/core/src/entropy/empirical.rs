use std::collections::HashMap;

use crate::grid::{Pattern, Symbol};

use super::distribution::{shannon_entropy, FiniteDistribution};
use super::EntropyError;

/// Counts of `N × N` windows, keyed by their row-major symbol sequence.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EmpiricalMeasure {
    n: usize,
    counts: HashMap<Vec<Symbol>, u64>,
    total: u64,
}

impl EmpiricalMeasure {
    pub fn new(n: usize) -> Self {
        EmpiricalMeasure {
            n,
            counts: HashMap::new(),
            total: 0,
        }
    }

    pub fn window_size(&self) -> usize {
        self.n
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &HashMap<Vec<Symbol>, u64> {
        &self.counts
    }

    /// Records one window given as `N²` row-major symbols.
    pub fn add(&mut self, window: Vec<Symbol>) {
        assert_eq!(window.len(), self.n * self.n, "window has the wrong size");
        *self.counts.entry(window).or_default() += 1;
        self.total += 1;
    }

    /// Records every `N × N` window of a rectangular pattern.
    pub fn add_windows_of(&mut self, p: &Pattern) {
        let Some((_, w, h)) = p.shape().rect_dims() else {
            return;
        };
        let n = self.n;
        if w < n || h < n {
            return;
        }
        let v = p.values();
        for y in 0..=h - n {
            for x in 0..=w - n {
                let mut win = Vec::with_capacity(n * n);
                for dy in 0..n {
                    let s = (y + dy) * w + x;
                    win.extend_from_slice(&v[s..s + n]);
                }
                self.add(win);
            }
        }
    }

    pub fn distribution(&self) -> Result<FiniteDistribution<Vec<Symbol>>, EntropyError> {
        if self.total == 0 {
            return Err(EntropyError::EmptyMeasure);
        }
        FiniteDistribution::from_counts(self.counts.iter().map(|(k, &c)| (k.clone(), c)))
    }
}

/// `(1/N²) H` of the normalized window distribution.
pub fn block_entropy_rate(e: &EmpiricalMeasure) -> Result<f64, EntropyError> {
    let d = e.distribution()?;
    Ok(shannon_entropy(&d) / (e.n * e.n) as f64)
}
