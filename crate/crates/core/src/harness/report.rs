use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use super::episode::{run_demonstrations, run_episode, EpisodeRecord, OpCounters};
use crate::controller::default_tour;
use crate::error::{Error, Result};
use crate::metrics::{acc_sq, ber, ConfusionCounts};
use crate::scene::SceneSpec;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedAggregate {
    pub seed: u64,
    pub acc_r1: f64,
    pub acc_r2: f64,
    pub delta_on_r1: f64,
    pub summary_acc: f64,
    /// Balanced error rate of the summary answers; `None` when the dataset
    /// holds only one answer class.
    pub summary_ber: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub metric: String,
    /// Mean over seeds of the correction-round accuracy.
    pub mean: f64,
    /// Sample standard deviation over seeds (0 for a single seed).
    pub sigma: f64,
    /// Mean over seeds of correction minus measurement accuracy.
    pub delta_on_r1: f64,
    pub per_seed: Vec<SeedAggregate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub ops: OpCounters,
    pub demo_ops: OpCounters,
    /// Only filled when the run asks for wall-clock capture.
    pub wall_clock_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub config: RunConfig,
    /// Measurement-round action labels.
    pub default_tour: Vec<String>,
    pub demo_scenes: Vec<String>,
    pub per_episode: Vec<EpisodeRecord>,
    pub aggregate: Aggregate,
    pub timing: Timing,
}

pub fn mean_and_sigma(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn seed_aggregate(seed: u64, episodes: &[EpisodeRecord]) -> Result<SeedAggregate> {
    let round = |r: usize| -> Vec<(u64, u64)> {
        episodes.iter().map(|e| (e.rounds[r].correct, e.rounds[r].incorrect)).collect()
    };
    let acc_r1 = acc_sq(&round(0))?;
    let acc_r2 = acc_sq(&round(1))?;
    let mut counts = ConfusionCounts::default();
    for e in episodes {
        counts.record(e.summary_decision, e.matches);
    }
    let summary_acc = 100.0 * episodes.iter().filter(|e| e.summary_correct).count() as f64 / episodes.len() as f64;
    Ok(SeedAggregate {
        seed,
        acc_r1,
        acc_r2,
        delta_on_r1: acc_r2 - acc_r1,
        summary_acc,
        summary_ber: ber(&counts).ok(),
    })
}

/// Runs every scene under every seed. Episodes run in parallel and are
/// merged in (seed, scene id) order.
pub fn run_benchmark(dataset: &[SceneSpec], config: &RunConfig) -> Result<Report> {
    config.validate()?;
    if dataset.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut scenes: Vec<&SceneSpec> = dataset.iter().collect();
    scenes.sort_by(|a, b| a.id.cmp(&b.id));
    let ordered: Vec<SceneSpec> = scenes.into_iter().cloned().collect();

    let started = Instant::now();
    let mut per_episode = Vec::new();
    let mut per_seed = Vec::new();
    let mut ops = OpCounters::default();
    let mut demo_ops = OpCounters::default();
    let mut demo_scenes = Vec::new();
    for &seed in &config.seeds {
        let demos = run_demonstrations(&ordered, config, seed)?;
        demo_ops.add(&demos.ops);
        demo_scenes = demos.scene_ids.clone();
        let episodes = ordered
            .par_iter()
            .enumerate()
            .map(|(i, spec)| run_episode(spec, i as u64, config, &demos, seed))
            .collect::<Result<Vec<_>>>()?;
        for e in &episodes {
            ops.add(&e.ops);
        }
        per_seed.push(seed_aggregate(seed, &episodes)?);
        per_episode.extend(episodes);
    }
    let (mean, sigma) = mean_and_sigma(&per_seed.iter().map(|s| s.acc_r2).collect::<Vec<_>>());
    let delta = per_seed.iter().map(|s| s.delta_on_r1).sum::<f64>() / per_seed.len() as f64;
    let wall_clock_ms = config.wall_clock.then(|| started.elapsed().as_secs_f64() * 1e3);

    Ok(Report {
        schema_version: REPORT_SCHEMA_VERSION,
        config: config.clone(),
        default_tour: default_tour(config.start, config.budget)?.iter().map(|a| a.label()).collect(),
        demo_scenes,
        per_episode,
        aggregate: Aggregate { metric: "acc_sq".into(), mean, sigma, delta_on_r1: delta, per_seed },
        timing: Timing { ops, demo_ops, wall_clock_ms },
    })
}

impl Report {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// One row per episode.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("scene_id,seed,r1_correct,r1_total,r2_correct,r2_total,r1_accuracy,r2_accuracy,summary_correct\n");
        for e in &self.per_episode {
            let [r1, r2] = &e.rounds;
            out.push_str(&format!(
                "{},{},{},{},{},{},{:.4},{:.4},{}\n",
                e.scene_id,
                e.seed,
                r1.correct,
                r1.correct + r1.incorrect,
                r2.correct,
                r2.correct + r2.incorrect,
                r1.accuracy(),
                r2.accuracy(),
                e.summary_correct as u8
            ));
        }
        out
    }
}
