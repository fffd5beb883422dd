use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::mixture::{mixture_score, view_scores, ViewSources, GRID_BINS};
use super::separator::{classify_units, max_margin_step};
use super::state::{improves, on_mi_grid, regret, MizoState, Phi};
use super::zo::{floored, propose, zo_coefficient, zo_update_with, PERTURBATION_SCALE};
use crate::error::{Error, Result};
use crate::histogram::Histogram;
use crate::info::{estimate_intervals, mutual_information, JointTable, DEFAULT_PROPOSALS};

/// Dimension of unit features: `(p(bin), p(Y=1|bin), PMI)`.
pub const UNIT_FEATURES: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MizoConfig {
    /// Online steps `tau`.
    pub rounds: usize,
    /// Random directions averaged per zeroth-order step.
    pub directions: usize,
    /// Smallest magnitude of the zeroth-order step coefficient.
    pub perturbation: f64,
    /// Separator step size, decayed as `eta / sqrt(t)`.
    pub eta: f64,
    /// Intervals used to discretize scores before estimating MI.
    pub score_bins: usize,
    /// Fraction of steps on which feedback is observed.
    pub feedback_fraction: f64,
    /// Accept-if-improves weight updates and unit separation. When false the
    /// weights stay uniform.
    pub active_regret: bool,
    pub seed: u64,
}

impl Default for MizoConfig {
    fn default() -> Self {
        Self {
            rounds: 50,
            directions: 4,
            perturbation: PERTURBATION_SCALE,
            eta: 0.1,
            score_bins: 4,
            feedback_fraction: 1.0,
            active_regret: true,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MizoInput {
    pub views: Vec<ViewSources>,
    /// Correctness of the system response on each view.
    pub y: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepLog {
    pub step: u64,
    pub alpha: bool,
    /// Best MI reached on this step (`None` without feedback).
    pub mi: Option<f64>,
    pub regret: Option<f64>,
    /// Running mean before this step.
    pub running_mean_before: f64,
    pub running_mean: f64,
    pub theta: Vec<f64>,
    pub weights_updated: bool,
    pub separator_updated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MizoRun {
    pub state: MizoState,
    /// Score of every input view under the final weights.
    pub scores: Vec<f64>,
    pub log: Vec<StepLog>,
}

/// Resolution scores are quantized to before discretization.
pub const SCORE_RESOLUTION: f64 = 1e-9;

/// MI between a discretized score and a binary target.
///
/// Scores are quantized to [`SCORE_RESOLUTION`] and cut into `bins`
/// intervals by [`estimate_intervals`] (fewer if the scores take fewer
/// distinct values; a constant score carries 0 bits). The result is rounded
/// to [`MI_GRID`](super::MI_GRID).
pub fn mi_of_score(samples: &[(f64, bool)], bins: usize) -> Result<f64> {
    let ones = samples.iter().filter(|s| s.1).count();
    if samples.len() < 2 || ones == 0 || ones == samples.len() {
        return Err(Error::DegenerateTarget("both labels are needed".into()));
    }
    let scores: Vec<f64> = samples.iter().map(|s| (s.0 / SCORE_RESOLUTION).round() * SCORE_RESOLUTION).collect();
    let mut sorted = scores.clone();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let bins = bins.min(sorted.len());
    if bins < 2 {
        return Ok(0.0);
    }
    let cuts = estimate_intervals(&scores, bins, DEFAULT_PROPOSALS)?;
    let x: Vec<usize> = scores.iter().map(|&s| cuts.bin_of(s)).collect();
    let y: Vec<usize> = samples.iter().map(|s| s.1 as usize).collect();
    let joint = JointTable::from_pairs(&x, cuts.bin_count(), &y, 2)?;
    Ok(on_mi_grid(mutual_information(&joint)?.max(0.0)))
}

fn mi_under(input: &MizoInput, theta: &[f64], bins: usize) -> Result<f64> {
    let scores = view_scores(&input.views, theta)?;
    let samples: Vec<(f64, bool)> = scores.into_iter().zip(input.y.iter().copied()).collect();
    mi_of_score(&samples, bins)
}

/// Exactly `floor(fraction * rounds)` steps observe feedback, chosen by a
/// seeded permutation.
pub fn feedback_schedule(rounds: usize, fraction: f64, seed: u64) -> Vec<bool> {
    let k = ((fraction * rounds as f64) + 1e-9).floor() as usize;
    let mut order: Vec<usize> = (0..rounds).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::MAX);
    order.shuffle(&mut rng);
    let mut alpha = vec![false; rounds];
    for &i in &order[..k.min(rounds)] {
        alpha[i] = true;
    }
    alpha
}

/// Joint of mixture bins with `Y`: `p(b, y) = (1/n) sum_{v : y_v = y} S_v(b)`.
fn unit_joint(input: &MizoInput, theta: &[f64]) -> Result<(Histogram, JointTable)> {
    let n = input.views.len() as f64;
    let mut mass = vec![0.0; GRID_BINS * 2];
    for (view, &y) in input.views.iter().zip(&input.y) {
        let s = mixture_score(view, theta)?.distribution;
        for (b, &p) in s.bins().iter().enumerate() {
            mass[b * 2 + y as usize] += p / n;
        }
    }
    let joint = JointTable::from_counts(vec![GRID_BINS, 2], &mass)?;
    let source = Histogram::new(joint.marginal(&[0]))?;
    Ok((source, joint))
}

/// The online loop over `config.rounds` steps.
///
/// On a step with feedback the current weights are scored, one global
/// zeroth-order proposal and one signed coordinate proposal per source are
/// tried (each kept only if it raises the step's MI), the step's best MI is
/// folded into the running mean if it raises it, and the unit separator takes
/// one gated step. Steps without feedback leave the state untouched apart
/// from the step counter. Randomness is drawn per feedback step, so a run
/// with less feedback follows a prefix of the trajectory of a run with more.
pub fn run_mizo(input: &MizoInput, config: &MizoConfig) -> Result<MizoRun> {
    if config.rounds == 0 {
        return Err(Error::InvalidArgument("rounds must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&config.feedback_fraction) {
        return Err(Error::InvalidArgument(format!("feedback fraction {}", config.feedback_fraction)));
    }
    let n_sources = input.views.first().map(|v| v.sources.len()).ok_or(Error::EmptyInput)?;
    if n_sources == 0 {
        return Err(Error::EmptyInput);
    }
    if input.views.iter().any(|v| v.sources.len() != n_sources) {
        return Err(Error::DimensionMismatch("views carry different source counts".into()));
    }
    if input.views.len() != input.y.len() {
        return Err(Error::DimensionMismatch("one response per view is required".into()));
    }

    let mut state = MizoState::new(n_sources, UNIT_FEATURES, config.seed);
    let schedule = feedback_schedule(config.rounds, config.feedback_fraction, config.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut log = Vec::with_capacity(config.rounds);
    let mut feedback_steps = 0u64;

    for &alpha in &schedule {
        state.step += 1;
        let t = state.step;
        state.phi.push(Phi { step: t, alpha });
        let before = state.mi_running_mean;
        let mut entry = StepLog {
            step: t,
            alpha,
            mi: None,
            regret: None,
            running_mean_before: before,
            running_mean: before,
            theta: state.theta_mix.clone(),
            weights_updated: false,
            separator_updated: false,
        };
        if !alpha {
            log.push(entry);
            continue;
        }
        feedback_steps += 1;
        rng.set_stream(feedback_steps);
        let mut best = mi_under(input, &state.theta_mix, config.score_bins)?;

        if config.active_regret {
            let loss = -best;
            let coefficient = zo_coefficient(&state.loss_history, loss).map(|c| floored(c, config.perturbation));
            let global = zo_update_with(&mut state, loss, config.directions, config.perturbation, &mut rng, best, |theta| {
                mi_under(input, theta, config.score_bins)
            })?;
            if global.accepted {
                best = global.candidate_mi.expect("accepted candidates carry their MI");
                entry.weights_updated = true;
            }
            if let Some(c) = coefficient {
                for i in 0..n_sources {
                    let mut e = vec![0.0; n_sources];
                    e[i] = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                    let candidate = propose(&state.theta_mix, c, &e);
                    if candidate == state.theta_mix {
                        continue;
                    }
                    let mi = mi_under(input, &candidate, config.score_bins)?;
                    if improves(mi, best) {
                        best = mi;
                        state.theta_mix = candidate;
                        entry.weights_updated = true;
                    }
                }
            }
            entry.regret = Some(regret(&state, best));
            state.fold_if_improves(best);

            let (source, joint) = unit_joint(input, &state.theta_mix)?;
            let units = classify_units(&source, &joint)?;
            let eta_t = config.eta / (feedback_steps as f64).sqrt();
            entry.separator_updated = max_margin_step(&mut state.separator, &units, eta_t, true)?;
        } else {
            entry.regret = Some(regret(&state, best));
            state.loss_history.push(-best);
            state.fold(best);
        }
        entry.mi = Some(best);
        entry.running_mean = state.mi_running_mean;
        entry.theta = state.theta_mix.clone();
        log.push(entry);
    }

    let scores = view_scores(&input.views, &state.theta_mix)?;
    Ok(MizoRun { state, scores, log })
}
