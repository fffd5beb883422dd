//! Two-round benchmark protocol, diagnostics and report emission.

mod config;
mod diagnostics;
mod episode;
mod report;

pub use config::{ControllerKind, MetricVariant, RunConfig, DEFAULT_BUDGET, DEFAULT_DEMO_FRACTION, FEEDBACK_FRACTIONS, SHORT_BUDGET};
pub use diagnostics::{diag_pcd, diag_separation, observe_all_states, score_views, PcdReport, PcdSeed, ScoredViews, SeparationReport, SeparationSeed};
pub use episode::{
    demo_count, execute_round, feedback_mask, observe, run_demonstrations, run_episode, DemoStore, EpisodeRecord, OpCounters, RoundRecord,
    StepRecord, ViewObservation,
};
pub use report::{mean_and_sigma, run_benchmark, Aggregate, Report, SeedAggregate, Timing, REPORT_SCHEMA_VERSION};

use std::path::Path;

use crate::error::{Error, Result};
use crate::metrics::auc;
use crate::scene::SceneSpec;

/// `-1` when higher scores go with incorrect answers on the labelled
/// samples (AUC below one half), else `1`. MI is blind to the direction of
/// the association, so learned scores are oriented with this sign before
/// being read as a correctness signal.
pub fn orientation(samples: &[(f64, bool)]) -> f64 {
    match auc(samples) {
        Ok(a) if a < 0.5 => -1.0,
        _ => 1.0,
    }
}

/// Loads every `*.json` scene in a directory, sorted by scene id.
pub fn load_dataset(dir: &Path) -> Result<Vec<SceneSpec>> {
    let mut scenes = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "json") {
            scenes.push(SceneSpec::load(&path)?);
        }
    }
    if scenes.is_empty() {
        return Err(Error::EmptyInput);
    }
    scenes.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(scenes)
}

/// Writes each scene as `<id>.json`.
pub fn save_dataset(dir: &Path, scenes: &[SceneSpec]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for s in scenes {
        s.save(&dir.join(format!("{}.json", s.id)))?;
    }
    Ok(())
}
