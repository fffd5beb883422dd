//! Benchmark metrics, score-separation statistics and the posterior
//! concentration dispersion diagnostic.

mod bayes;

pub use bayes::{gibbs_logistic, pc_dispersion, GibbsConfig, PosteriorSummary, SIGMA_FLOOR};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn record(&mut self, predicted: bool, actual: bool) {
        match (predicted, actual) {
            (true, true) => self.tp += 1,
            (true, false) => self.fp += 1,
            (false, false) => self.tn += 1,
            (false, true) => self.fn_ += 1,
        }
    }
}

/// Balanced error rate `(FPR + FNR) / 2`.
pub fn ber(c: &ConfusionCounts) -> Result<f64> {
    if c.fp + c.tn == 0 || c.fn_ + c.tp == 0 {
        return Err(Error::UndefinedRate("both classes must be present".into()));
    }
    let fpr = c.fp as f64 / (c.fp + c.tn) as f64;
    let fnr = c.fn_ as f64 / (c.fn_ + c.tp) as f64;
    Ok(0.5 * (fpr + fnr))
}

/// `100 *` mean over scenes of the fraction of correct decisions.
pub fn acc_sq(per_scene: &[(u64, u64)]) -> Result<f64> {
    if per_scene.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut total = 0.0;
    for &(correct, incorrect) in per_scene {
        if correct + incorrect == 0 {
            return Err(Error::InvalidArgument("a scene has no decisions".into()));
        }
        total += correct as f64 / (correct + incorrect) as f64;
    }
    Ok(100.0 * total / per_scene.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparationStats {
    pub median_correct: f64,
    pub median_incorrect: f64,
    /// `median_correct - median_incorrect`.
    pub median_gap: f64,
    /// Excess kurtosis per class; 0 when a class has zero variance.
    pub kurtosis_correct: f64,
    pub kurtosis_incorrect: f64,
    /// Probability that a correct sample outscores an incorrect one, ties
    /// counting half.
    pub auc: f64,
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        (s[n / 2 - 1] + s[n / 2]) / 2.0
    }
}

pub fn excess_kurtosis(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let m2 = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m4 = v.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    if m2 <= 0.0 {
        0.0
    } else {
        m4 / (m2 * m2) - 3.0
    }
}

/// Rank-based AUC (Mann-Whitney) with midranks for ties.
pub fn auc(scores: &[(f64, bool)]) -> Result<f64> {
    let pos = scores.iter().filter(|s| s.1).count();
    let neg = scores.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::DegenerateTarget("both classes are needed".into()));
    }
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[a].0.total_cmp(&scores[b].0));
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && scores[idx[j + 1]].0 == scores[idx[i]].0 {
            j += 1;
        }
        let midrank = (i + j) as f64 / 2.0 + 1.0;
        rank_sum += idx[i..=j].iter().filter(|&&k| scores[k].1).count() as f64 * midrank;
        i = j + 1;
    }
    let (p, q) = (pos as f64, neg as f64);
    Ok((rank_sum - p * (p + 1.0) / 2.0) / (p * q))
}

pub fn separation_stats(scores: &[(f64, bool)]) -> Result<SeparationStats> {
    let correct: Vec<f64> = scores.iter().filter(|s| s.1).map(|s| s.0).collect();
    let incorrect: Vec<f64> = scores.iter().filter(|s| !s.1).map(|s| s.0).collect();
    if correct.is_empty() || incorrect.is_empty() {
        return Err(Error::DegenerateTarget("both classes are needed".into()));
    }
    let (mc, mi) = (median(&correct), median(&incorrect));
    Ok(SeparationStats {
        median_correct: mc,
        median_incorrect: mi,
        median_gap: mc - mi,
        kurtosis_correct: excess_kurtosis(&correct),
        kurtosis_incorrect: excess_kurtosis(&incorrect),
        auc: auc(scores)?,
    })
}
