//! Normalized discrete distributions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the total mass of a normalized histogram.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// A normalized histogram: nonnegative bin masses that sum to one.
///
/// `edges` carries the interior cut points when the histogram was produced by
/// discretizing continuous samples; there are `bins.len() - 1` of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    bins: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<f64>>,
}

impl Histogram {
    /// Builds a histogram from already-normalized masses, validating them.
    pub fn new(bins: Vec<f64>) -> Result<Self> {
        let h = Self { bins, edges: None };
        h.validate()?;
        Ok(h)
    }

    /// Normalizes raw nonnegative counts. All-zero counts are rejected.
    pub fn from_counts(counts: &[f64]) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidHistogram("no bins".into()));
        }
        if counts.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::InvalidHistogram("negative or non-finite count".into()));
        }
        let total: f64 = counts.iter().sum();
        if total <= 0.0 {
            return Err(Error::EmptyInput);
        }
        let bins = counts.iter().map(|c| c / total).collect();
        Ok(Self { bins, edges: None })
    }

    /// A point mass at `index` over `len` bins.
    pub fn point_mass(len: usize, index: usize) -> Result<Self> {
        if index >= len {
            return Err(Error::InvalidArgument(format!("bin {index} out of {len}")));
        }
        let mut bins = vec![0.0; len];
        bins[index] = 1.0;
        Ok(Self { bins, edges: None })
    }

    pub fn uniform(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidHistogram("no bins".into()));
        }
        Ok(Self { bins: vec![1.0 / len as f64; len], edges: None })
    }

    /// Attaches interior cut points; they must be strictly increasing and
    /// number one fewer than the bins.
    pub fn with_edges(mut self, edges: Vec<f64>) -> Result<Self> {
        if edges.len() + 1 != self.bins.len() {
            return Err(Error::InvalidHistogram(format!(
                "{} edges for {} bins",
                edges.len(),
                self.bins.len()
            )));
        }
        if edges.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidHistogram("edges not strictly increasing".into()));
        }
        self.edges = Some(edges);
        Ok(self)
    }

    pub fn bins(&self) -> &[f64] {
        &self.bins
    }

    pub fn edges(&self) -> Option<&[f64]> {
        self.edges.as_deref()
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.bins.is_empty() {
            return Err(Error::InvalidHistogram("no bins".into()));
        }
        if self.bins.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(Error::InvalidHistogram("negative or non-finite mass".into()));
        }
        let total: f64 = self.bins.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidHistogram(format!("total mass {total}")));
        }
        Ok(())
    }

    /// Redistributes mass onto `target` equal-width bins over the unit
    /// interval, treating bin `i` of `n` as covering `[i/n, (i+1)/n)`.
    pub fn resample(&self, target: usize) -> Result<Self> {
        if target == 0 {
            return Err(Error::DegenerateBinning("resample to zero bins".into()));
        }
        let n = self.bins.len();
        if n == target {
            return Ok(Self { bins: self.bins.clone(), edges: None });
        }
        let mut out = vec![0.0; target];
        // Work in units of 1/(n*target) so every boundary is an integer.
        for (i, &mass) in self.bins.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            let lo = i * target;
            let hi = (i + 1) * target;
            let mut j = lo / n;
            while j < target && j * n < hi {
                let overlap = hi.min((j + 1) * n) - lo.max(j * n);
                out[j] += mass * overlap as f64 / target as f64;
                j += 1;
            }
        }
        Self::renormalized(out)
    }

    /// Raises every mass to `exponent` and renormalizes.
    pub fn tilt(&self, exponent: f64) -> Result<Self> {
        if !(exponent > 0.0) || !exponent.is_finite() {
            return Err(Error::InvalidArgument(format!("tilt exponent {exponent}")));
        }
        if exponent == 1.0 {
            return Ok(Self { bins: self.bins.clone(), edges: None });
        }
        Self::renormalized(self.bins.iter().map(|m| m.powf(exponent)).collect())
    }

    /// Concatenates histograms with equal weight and renormalizes.
    pub fn concat(parts: &[Histogram]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::EmptyInput);
        }
        let bins: Vec<f64> = parts.iter().flat_map(|h| h.bins.iter().copied()).collect();
        Self::renormalized(bins)
    }

    fn renormalized(bins: Vec<f64>) -> Result<Self> {
        let total: f64 = bins.iter().sum();
        if !(total > 0.0) {
            return Err(Error::EmptyInput);
        }
        Ok(Self { bins: bins.into_iter().map(|m| m / total).collect(), edges: None })
    }
}
