//! Noisy decision oracle standing in for a vision-language model.

use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::camera::CameraState;
use super::spec::{FeatureRef, Scene};
use crate::error::{Error, Result};

/// Information multiplier per zoom level, nearest first.
pub const ZOOM_FACTORS: [f64; 4] = [1.0, 0.75, 0.5, 0.25];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Error log-odds with no information.
    pub a: f64,
    /// Drop in error log-odds per unit of information.
    pub b: f64,
    /// Overrides the logistic model with a constant error probability.
    pub forced_p_err: Option<f64>,
    /// Simulated inference latency per call, in microseconds.
    pub latency_us: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { a: 0.0, b: 6.0, forced_p_err: None, latency_us: 0 }
    }
}

impl OracleConfig {
    /// `logistic(a - b * info)`, or the forced value.
    pub fn p_err(&self, info: f64) -> f64 {
        if let Some(p) = self.forced_p_err {
            return p;
        }
        let drop = if info == 0.0 { 0.0 } else { self.b * info };
        1.0 / (1.0 + (drop - self.a).exp())
    }
}

/// Question templates the oracle answers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Query {
    /// Does this view match the scene description?
    Match,
    /// Final scene-summary question.
    Summary,
    /// Evidence about a specific feature.
    Feature(FeatureRef),
}

impl Query {
    /// Parses `match`, `summary` or `feature <object> <feature>`.
    pub fn parse(text: &str) -> Result<Self> {
        let words: Vec<&str> = text.split_whitespace().collect();
        match words.as_slice() {
            ["match"] => Ok(Query::Match),
            ["summary"] => Ok(Query::Summary),
            ["feature", o, f] => {
                let parse = |s: &str| s.parse::<usize>().map_err(|_| Error::UnknownQuery(text.to_string()));
                Ok(Query::Feature(FeatureRef { object: parse(o)?, feature: parse(f)? }))
            }
            _ => Err(Error::UnknownQuery(text.to_string())),
        }
    }
}

/// Visible fraction of the queried feature, scaled by zoom proximity.
pub fn ground_truth_info(scene: &Scene, state: CameraState, query: Query) -> Result<f64> {
    let feature = match query {
        Query::Match | Query::Summary => scene.spec.key_feature,
        Query::Feature(f) => f,
    };
    if scene.spec.objects.get(feature.object).and_then(|o| o.features.get(feature.feature)).is_none() {
        return Err(Error::UnknownQuery(format!("no feature {}:{}", feature.object, feature.feature)));
    }
    Ok(scene.feature_visibility(feature, state.viewpoint) * ZOOM_FACTORS[state.z_level as usize])
}

/// Per-episode random stream; every oracle call consumes exactly one draw.
#[derive(Debug, Clone)]
pub struct OracleStream {
    rng: ChaCha8Rng,
    draws: u64,
}

impl OracleStream {
    pub fn new(seed: u64, episode: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(episode);
        Self { rng, draws: 0 }
    }

    pub fn draws(&self) -> u64 {
        self.draws
    }

    fn uniform(&mut self) -> f64 {
        self.draws += 1;
        self.rng.random::<f64>()
    }

    /// `truth`, flipped with probability `p_err`.
    pub fn decide(&mut self, truth: bool, p_err: f64, config: &OracleConfig) -> bool {
        if config.latency_us > 0 {
            std::thread::sleep(Duration::from_micros(config.latency_us));
        }
        let flip = self.uniform() < p_err;
        truth ^ flip
    }
}

/// The oracle's boolean answer to `query` from `state`.
pub fn oracle_respond(
    scene: &Scene,
    state: CameraState,
    query: &str,
    config: &OracleConfig,
    stream: &mut OracleStream,
) -> Result<bool> {
    let info = ground_truth_info(scene, state, Query::parse(query)?)?;
    Ok(stream.decide(scene.spec.matches, config.p_err(info), config))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_err_limits() {
        let c = OracleConfig { b: f64::INFINITY, ..Default::default() };
        assert_eq!(c.p_err(1.0), 0.0);
        assert_eq!(c.p_err(0.0), 0.5);
        let forced = OracleConfig { forced_p_err: Some(1.0), ..Default::default() };
        assert_eq!(forced.p_err(0.7), 1.0);
    }

    #[test]
    fn flip_rate_matches_p_err() {
        let cfg = OracleConfig::default();
        let mut s = OracleStream::new(11, 0);
        let flips = (0..10_000).filter(|_| !s.decide(true, 0.3, &cfg)).count();
        assert!((2900..=3100).contains(&flips), "{flips}");
        assert_eq!(s.draws(), 10_000);
    }

    #[test]
    fn query_templates() {
        assert_eq!(Query::parse("match").unwrap(), Query::Match);
        assert_eq!(Query::parse("feature 1 0").unwrap(), Query::Feature(FeatureRef { object: 1, feature: 0 }));
        assert!(matches!(Query::parse("how many cubes"), Err(Error::UnknownQuery(_))));
    }
}
