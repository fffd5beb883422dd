use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SIGMA_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GibbsConfig {
    pub prior_sigma: f64,
    pub iterations: usize,
    pub burn_in: usize,
    /// Proposal standard deviation relative to the Laplace approximation.
    pub proposal_scale: f64,
}

impl Default for GibbsConfig {
    fn default() -> Self {
        Self { prior_sigma: 2.0, iterations: 1000, burn_in: 200, proposal_scale: 1.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorSummary {
    pub beta_samples: Vec<f64>,
    /// `1 / max(sd(beta_samples), SIGMA_FLOOR)`.
    pub dispersion: f64,
}

impl PosteriorSummary {
    pub fn mean(&self) -> f64 {
        self.beta_samples.iter().sum::<f64>() / self.beta_samples.len() as f64
    }

    pub fn sd(&self) -> f64 {
        let m = self.mean();
        let n = self.beta_samples.len() as f64;
        (self.beta_samples.iter().map(|b| (b - m).powi(2)).sum::<f64>() / n).sqrt()
    }

    /// Empirical `q`-quantile of the retained samples.
    pub fn quantile(&self, q: f64) -> f64 {
        let mut s = self.beta_samples.clone();
        s.sort_by(f64::total_cmp);
        let i = ((q * (s.len() - 1) as f64).round() as usize).min(s.len() - 1);
        s[i]
    }
}

fn log_posterior(beta: f64, x: &[f64], y: &[bool], prior_var: f64) -> f64 {
    let ll: f64 = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| {
            let t = beta * xi;
            // log p(y | t) = y t - log(1 + e^t)
            let log1pexp = if t > 0.0 { t + (-t).exp().ln_1p() } else { t.exp().ln_1p() };
            if yi { t - log1pexp } else { -log1pexp }
        })
        .sum();
    ll - beta * beta / (2.0 * prior_var)
}

/// Posterior mode and curvature of the one-coefficient model, by Newton.
fn laplace(x: &[f64], y: &[bool], prior_var: f64) -> (f64, f64) {
    let mut beta = 0.0;
    let mut precision = 1.0 / prior_var;
    for _ in 0..100 {
        let mut grad = -beta / prior_var;
        precision = 1.0 / prior_var;
        for (&xi, &yi) in x.iter().zip(y) {
            let p = 1.0 / (1.0 + (-beta * xi).exp());
            grad += xi * (if yi { 1.0 } else { 0.0 } - p);
            precision += xi * xi * p * (1.0 - p);
        }
        let step = grad / precision;
        beta += step;
        if step.abs() < 1e-12 {
            break;
        }
    }
    (beta, precision)
}

/// Samples the coefficient of `P(y = 1) = 1 / (1 + exp(-beta x))` under a
/// normal prior with an independence Metropolis kernel whose proposal is the
/// Laplace approximation widened by `proposal_scale`.
pub fn gibbs_logistic(x: &[f64], y: &[bool], seed: u64, config: &GibbsConfig) -> Result<PosteriorSummary> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch("scores and labels differ in length".into()));
    }
    if config.iterations < 100 || config.burn_in >= config.iterations {
        return Err(Error::InvalidArgument("at least 100 iterations beyond burn-in are required".into()));
    }
    let ones = y.iter().filter(|&&v| v).count();
    if !y.is_empty() && (ones == 0 || ones == y.len()) {
        return Err(Error::DegenerateTarget("both labels are needed".into()));
    }
    let prior_var = config.prior_sigma * config.prior_sigma;
    let (mode, precision) = laplace(x, y, prior_var);
    let q_sd = config.proposal_scale / precision.sqrt();
    let log_q = |b: f64| -0.5 * ((b - mode) / q_sd).powi(2);
    let log_target = |b: f64| log_posterior(b, x, y, prior_var);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut beta = mode;
    let mut weight = log_target(beta) - log_q(beta);
    let mut samples = Vec::with_capacity(config.iterations - config.burn_in);
    for it in 0..config.iterations {
        let z: f64 = StandardNormal.sample(&mut rng);
        let proposal = mode + q_sd * z;
        let w = log_target(proposal) - log_q(proposal);
        let u: f64 = rng.random();
        if u.ln() < w - weight {
            beta = proposal;
            weight = w;
        }
        if it >= config.burn_in {
            samples.push(beta);
        }
    }
    let mut summary = PosteriorSummary { beta_samples: samples, dispersion: 0.0 };
    summary.dispersion = 1.0 / summary.sd().max(SIGMA_FLOOR);
    Ok(summary)
}

/// Spread (max - min) of posterior concentration `1 / sd(beta)` across
/// cumulative prefixes of the stream, taken every `increment` samples from
/// the first prefix holding both labels. Scores are standardized over the
/// whole stream first.
pub fn pc_dispersion(scores: &[f64], labels: &[bool], increment: usize, seed: u64, config: &GibbsConfig) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::DimensionMismatch("scores and labels differ in length".into()));
    }
    if increment == 0 {
        return Err(Error::InvalidArgument("increment must be positive".into()));
    }
    let n = scores.len() as f64;
    let mean = scores.iter().sum::<f64>() / n;
    let sd = (scores.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / n).sqrt();
    let x: Vec<f64> = scores.iter().map(|s| if sd > 0.0 { (s - mean) / sd } else { 0.0 }).collect();

    let mut concentrations = Vec::new();
    let mut len = increment;
    while len <= scores.len() {
        let y = &labels[..len];
        if y.iter().any(|&v| v) && y.iter().any(|&v| !v) {
            concentrations.push(gibbs_logistic(&x[..len], y, seed, config)?.dispersion);
        }
        len += increment;
    }
    if concentrations.len() < 2 {
        return Err(Error::InsufficientSupport(format!(
            "{} prefixes with both labels; at least 2 are needed",
            concentrations.len()
        )));
    }
    let max = concentrations.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = concentrations.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(max - min)
}
