use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Margin an MI value must clear to count as an improvement, so that
/// round-off never decides acceptance.
pub const IMPROVEMENT_TOLERANCE: f64 = 1e-12;

/// Resolution, in bits, of MI values and the running mean. Values on this
/// dyadic grid subtract exactly, so `regret + MI_t` reproduces `MI'_{t-1}`
/// bit for bit.
pub const MI_GRID: f64 = 1.0 / (1u64 << 40) as f64;

pub fn on_mi_grid(x: f64) -> f64 {
    (x / MI_GRID).round() * MI_GRID
}

pub fn improves(candidate: f64, best: f64) -> bool {
    candidate > best + IMPROVEMENT_TOLERANCE
}

/// Per-step policy context: the step index and whether feedback was observed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Phi {
    pub step: u64,
    pub alpha: bool,
}

/// Hyperplane `w . x + bias` separating Up from Down units, with margin
/// `gamma = 2 / |w|` (0 while `w` is zero).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Separator {
    pub w: Vec<f64>,
    pub bias: f64,
    pub gamma: f64,
}

impl Separator {
    pub fn zeros(dim: usize) -> Self {
        Self { w: vec![0.0; dim], bias: 0.0, gamma: 0.0 }
    }

    pub fn norm(&self) -> f64 {
        self.w.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub(crate) fn refresh_gamma(&mut self) {
        let n = self.norm();
        self.gamma = if n > 0.0 { 2.0 / n } else { 0.0 };
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MizoState {
    pub theta_mix: Vec<f64>,
    pub phi: Vec<Phi>,
    pub mi_running_mean: f64,
    /// Number of MI values folded into `mi_running_mean`.
    pub accepted_count: u64,
    pub loss_history: Vec<f64>,
    pub separator: Separator,
    pub rng_seed: u64,
    pub step: u64,
}

impl MizoState {
    pub fn new(sources: usize, separator_dim: usize, rng_seed: u64) -> Self {
        Self {
            theta_mix: vec![1.0 / sources as f64; sources],
            phi: Vec::new(),
            mi_running_mean: 0.0,
            accepted_count: 0,
            loss_history: Vec::new(),
            separator: Separator::zeros(separator_dim),
            rng_seed,
            step: 0,
        }
    }

    /// Folds `mi` into the running mean if it exceeds the mean (by more than
    /// [`IMPROVEMENT_TOLERANCE`]), which raises it. Returns whether it was
    /// folded.
    pub fn fold_if_improves(&mut self, mi: f64) -> bool {
        let k = self.accepted_count as f64;
        let next = on_mi_grid(self.mi_running_mean + (mi - self.mi_running_mean) / (k + 1.0));
        if improves(mi, self.mi_running_mean) && next > self.mi_running_mean {
            self.mi_running_mean = next;
            self.accepted_count += 1;
            true
        } else {
            false
        }
    }

    /// Folds `mi` into the running mean unconditionally.
    pub fn fold(&mut self, mi: f64) {
        let k = self.accepted_count as f64;
        self.mi_running_mean = on_mi_grid(self.mi_running_mean + (mi - self.mi_running_mean) / (k + 1.0));
        self.accepted_count += 1;
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// `MI'_{t-1} - mi_t`; negative when the step beats the running mean.
pub fn regret(state: &MizoState, mi_t: f64) -> f64 {
    state.mi_running_mean - mi_t
}
