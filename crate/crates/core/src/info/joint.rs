use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::histogram::MASS_TOLERANCE;

/// A dense joint distribution over the product of several discrete axes.
///
/// Mass is stored row-major: the last axis varies fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointTable {
    dims: Vec<usize>,
    mass: Vec<f64>,
}

impl JointTable {
    pub fn new(dims: Vec<usize>, mass: Vec<f64>) -> Result<Self> {
        if dims.is_empty() || dims.iter().any(|&d| d == 0) {
            return Err(Error::DimensionMismatch(format!("bad dims {dims:?}")));
        }
        let cells: usize = dims.iter().product();
        if cells != mass.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} cells for dims {dims:?}, got {} masses",
                cells,
                mass.len()
            )));
        }
        if mass.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(Error::InvalidHistogram("negative or non-finite joint mass".into()));
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidHistogram(format!("joint total mass {total}")));
        }
        Ok(Self { dims, mass })
    }

    /// Normalizes nonnegative counts laid out like [`JointTable::new`].
    pub fn from_counts(dims: Vec<usize>, counts: &[f64]) -> Result<Self> {
        let total: f64 = counts.iter().sum();
        if !(total > 0.0) {
            return Err(Error::EmptyInput);
        }
        Self::new(dims, counts.iter().map(|c| c / total).collect())
    }

    /// Joint of paired discrete observations `(x_i, y_i)`.
    pub fn from_pairs(x: &[usize], x_bins: usize, y: &[usize], y_bins: usize) -> Result<Self> {
        if x.len() != y.len() || x.is_empty() {
            return Err(Error::DimensionMismatch("paired samples differ in length".into()));
        }
        let mut counts = vec![0.0; x_bins * y_bins];
        for (&a, &b) in x.iter().zip(y) {
            if a >= x_bins || b >= y_bins {
                return Err(Error::DimensionMismatch(format!("cell ({a}, {b}) out of range")));
            }
            counts[a * y_bins + b] += 1.0;
        }
        Self::from_counts(vec![x_bins, y_bins], &counts)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    /// Returns the same joint with its axes reordered: output axis `k` is
    /// input axis `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.dims.len()];
        if order.len() != self.dims.len() || order.iter().any(|&a| a >= seen.len() || std::mem::replace(&mut seen[a], true)) {
            return Err(Error::InvalidArgument(format!("bad axis order {order:?}")));
        }
        let new_dims: Vec<usize> = order.iter().map(|&a| self.dims[a]).collect();
        let mut out = vec![0.0; self.mass.len()];
        let mut idx = vec![0usize; self.dims.len()];
        for (flat, &m) in self.mass.iter().enumerate() {
            self.unflatten(flat, &mut idx);
            let mut target = 0;
            for (k, &a) in order.iter().enumerate() {
                target = target * new_dims[k] + idx[a];
            }
            out[target] = m;
        }
        Ok(Self { dims: new_dims, mass: out })
    }

    /// Marginal over the listed axes (in the listed order), flattened
    /// row-major.
    pub fn marginal(&self, axes: &[usize]) -> Vec<f64> {
        let size: usize = axes.iter().map(|&a| self.dims[a]).product();
        let mut out = vec![0.0; size];
        let mut idx = vec![0usize; self.dims.len()];
        for (flat, &m) in self.mass.iter().enumerate() {
            if m == 0.0 {
                continue;
            }
            self.unflatten(flat, &mut idx);
            let mut target = 0;
            for &a in axes {
                target = target * self.dims[a] + idx[a];
            }
            out[target] += m;
        }
        out
    }

    /// Entropy (bits) of the marginal over `axes`.
    pub fn entropy_over(&self, axes: &[usize]) -> f64 {
        super::entropy_of(&self.marginal(axes))
    }

    fn unflatten(&self, mut flat: usize, idx: &mut [usize]) {
        for (k, &d) in self.dims.iter().enumerate().rev() {
            idx[k] = flat % d;
            flat /= d;
        }
    }
}
