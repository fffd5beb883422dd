use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{MetricVariant, RunConfig};
use super::orientation;
use super::episode::{observe, OpCounters, ViewObservation};
use crate::error::{Error, Result};
use crate::metrics::{pc_dispersion, separation_stats, GibbsConfig, SeparationStats};
use crate::mizo::{run_mizo, view_scores, MizoConfig, MizoInput};
use crate::scene::{generate_scene, CameraState, OracleStream, SceneSpec};

/// Every camera state of every scene, observed once.
pub fn observe_all_states(dataset: &[SceneSpec], config: &RunConfig, seed: u64) -> Result<Vec<ViewObservation>> {
    let kinds = config.metric.kinds();
    let per_scene = dataset
        .par_iter()
        .enumerate()
        .map(|(i, spec)| {
            let scene = generate_scene(spec)?;
            let mut stream = OracleStream::new(seed, i as u64);
            let mut ops = OpCounters::default();
            CameraState::all()
                .map(|s| observe(&scene, s, None, &kinds, config, &mut stream, &mut ops))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_scene.into_iter().flatten().collect())
}

/// Learned and fixed (uniform) weights on the same views.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredViews {
    pub correct: Vec<bool>,
    pub learned: Vec<f64>,
    pub fixed: Vec<f64>,
    pub theta: Vec<f64>,
    pub orientation: f64,
    pub running_mean: f64,
}

pub fn score_views(views: &[ViewObservation], variant: MetricVariant, mizo_rounds: usize, seed: u64) -> Result<ScoredViews> {
    let input = MizoInput { views: views.iter().map(|v| v.sources.clone()).collect(), y: views.iter().map(|v| v.correct).collect() };
    let config = MizoConfig { rounds: mizo_rounds, active_regret: true, seed, ..Default::default() };
    let run = run_mizo(&input, &config)?;
    let n = variant.kinds().len();
    let fixed = view_scores(&input.views, &vec![1.0 / n as f64; n])?;
    let sign = orientation(&run.scores.iter().copied().zip(input.y.iter().copied()).collect::<Vec<_>>());
    Ok(ScoredViews {
        correct: input.y,
        learned: run.scores.iter().map(|s| sign * s).collect(),
        orientation: sign,
        fixed,
        theta: run.state.theta_mix,
        running_mean: run.state.mi_running_mean,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationSeed {
    pub seed: u64,
    pub theta: Vec<f64>,
    pub learned: SeparationStats,
    pub fixed: SeparationStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub metric: MetricVariant,
    pub views_per_seed: usize,
    pub per_seed: Vec<SeparationSeed>,
    pub mean_auc_learned: f64,
    pub mean_auc_fixed: f64,
}

/// Score separation of correct and incorrect oracle answers under learned
/// versus uniform source weights.
pub fn diag_separation(dataset: &[SceneSpec], config: &RunConfig) -> Result<SeparationReport> {
    if !config.metric.active_regret() {
        return Err(Error::InvalidArgument(format!("{} does not learn weights", config.metric)));
    }
    let mut per_seed = Vec::new();
    let mut views_per_seed = 0;
    for &seed in &config.seeds {
        let views = observe_all_states(dataset, config, seed)?;
        views_per_seed = views.len();
        let s = score_views(&views, config.metric, config.mizo_rounds, seed)?;
        let pair = |scores: &[f64]| separation_stats(&scores.iter().copied().zip(s.correct.iter().copied()).collect::<Vec<_>>());
        per_seed.push(SeparationSeed { seed, theta: s.theta.clone(), learned: pair(&s.learned)?, fixed: pair(&s.fixed)? });
    }
    let n = per_seed.len() as f64;
    Ok(SeparationReport {
        metric: config.metric,
        views_per_seed,
        mean_auc_learned: per_seed.iter().map(|s| s.learned.auc).sum::<f64>() / n,
        mean_auc_fixed: per_seed.iter().map(|s| s.fixed.auc).sum::<f64>() / n,
        per_seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcdSeed {
    pub seed: u64,
    pub learned: f64,
    pub fixed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcdReport {
    pub metric: MetricVariant,
    pub fixed_metric: MetricVariant,
    pub increment: usize,
    pub per_seed: Vec<PcdSeed>,
}

/// Posterior-concentration dispersion of the score stream (views in scene
/// order) under learned and uniform weights.
pub fn diag_pcd(dataset: &[SceneSpec], config: &RunConfig, increment: usize) -> Result<PcdReport> {
    if !config.metric.active_regret() {
        return Err(Error::InvalidArgument(format!("{} does not learn weights", config.metric)));
    }
    let gibbs = GibbsConfig::default();
    let mut per_seed = Vec::new();
    for &seed in &config.seeds {
        let views = observe_all_states(dataset, config, seed)?;
        let s = score_views(&views, config.metric, config.mizo_rounds, seed)?;
        per_seed.push(PcdSeed {
            seed,
            learned: pc_dispersion(&s.learned, &s.correct, increment, seed, &gibbs)?,
            fixed: pc_dispersion(&s.fixed, &s.correct, increment, seed, &gibbs)?,
        });
    }
    Ok(PcdReport { metric: config.metric, fixed_metric: config.metric.without_regret(), increment, per_seed })
}
