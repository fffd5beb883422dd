use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::{ControllerKind, RunConfig};
use crate::controller::{default_tour, plan_correction, GatedPriorities, Observation};
use crate::error::{Error, Result};
use crate::mizo::{mixture_score, run_mizo, MizoConfig, MizoInput, ViewSources};
use crate::scene::{apply_action, generate_scene, oracle_respond, render_view, CameraAction, CameraState, OracleStream, Scene, SceneSpec};
use crate::sources::{extract_sources, SourceConfig, SourceKind};

/// Oracle streams for demonstrations live above this offset so they never
/// collide with episode streams.
const DEMO_STREAM_OFFSET: u64 = 1 << 32;
/// Stream used for feedback masking permutations.
const MASK_STREAM: u64 = u64::MAX - 1;

/// Deterministic work counters for one episode.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCounters {
    pub renders: u64,
    pub oracle_calls: u64,
    pub mizo_steps: u64,
    pub actions: u64,
}

impl OpCounters {
    pub fn add(&mut self, other: &OpCounters) {
        self.renders += other.renders;
        self.oracle_calls += other.oracle_calls;
        self.mizo_steps += other.mizo_steps;
        self.actions += other.actions;
    }
}

/// One observed view: where the camera was, what the oracle answered, and
/// the entropy sources of the rendered frame.
#[derive(Debug, Clone)]
pub struct ViewObservation {
    pub state: CameraState,
    pub action: Option<CameraAction>,
    pub decision: bool,
    pub correct: bool,
    pub sources: ViewSources,
}

/// Renders `state`, extracts the sources for `kinds` and queries the oracle.
pub fn observe(
    scene: &Scene,
    state: CameraState,
    action: Option<CameraAction>,
    kinds: &[SourceKind],
    config: &RunConfig,
    stream: &mut OracleStream,
    ops: &mut OpCounters,
) -> Result<ViewObservation> {
    let raster = render_view(scene, state)?;
    ops.renders += 1;
    let set = extract_sources(&raster, &scene.spec.description, &SourceConfig::default())?;
    let sources = ViewSources::from_source_set(&set, kinds)?;
    let decision = oracle_respond(scene, state, "match", &config.oracle, stream)?;
    ops.oracle_calls += 1;
    Ok(ViewObservation { state, action, decision, correct: decision == scene.spec.matches, sources })
}

/// Executes `actions` from `start`, observing after every action.
pub fn execute_round(
    scene: &Scene,
    start: CameraState,
    actions: &[CameraAction],
    kinds: &[SourceKind],
    config: &RunConfig,
    stream: &mut OracleStream,
    ops: &mut OpCounters,
) -> Result<Vec<ViewObservation>> {
    let mut state = start;
    let mut views = Vec::with_capacity(actions.len());
    for &a in actions {
        state = apply_action(state, a)?;
        ops.actions += 1;
        views.push(observe(scene, state, Some(a), kinds, config, stream, ops)?);
    }
    Ok(views)
}

/// Labelled views from the demonstration scenes.
#[derive(Debug, Clone)]
pub struct DemoStore {
    pub scene_ids: Vec<String>,
    pub views: Vec<ViewObservation>,
    pub ops: OpCounters,
}

/// Number of demonstration scenes: `ceil(fraction * n)`.
pub fn demo_count(n: usize, fraction: f64) -> Result<usize> {
    let k = (fraction * n as f64 - 1e-9).ceil().max(0.0) as usize;
    if k == 0 {
        return Err(Error::InvalidArgument(format!("demonstration fraction {fraction} of {n} scenes selects none")));
    }
    Ok(k.min(n))
}

/// Runs the default tour on the first `ceil(fraction * n)` scenes (in id
/// order) and keeps every view with its true correctness label.
pub fn run_demonstrations(dataset: &[SceneSpec], config: &RunConfig, seed: u64) -> Result<DemoStore> {
    if dataset.is_empty() {
        return Err(Error::EmptyInput);
    }
    let count = demo_count(dataset.len(), config.demo_fraction)?;
    let kinds = config.metric.kinds();
    let tour = default_tour(config.start, config.budget)?;
    let mut ops = OpCounters::default();
    let mut views = Vec::new();
    let mut ids = Vec::new();
    for (i, spec) in dataset.iter().take(count).enumerate() {
        let scene = generate_scene(spec)?;
        let mut stream = OracleStream::new(seed, DEMO_STREAM_OFFSET + i as u64);
        views.extend(execute_round(&scene, config.start, &tour, &kinds, config, &mut stream, &mut ops)?);
        ids.push(spec.id.clone());
    }
    Ok(DemoStore { scene_ids: ids, views, ops })
}

/// Reveals exactly `floor(fraction * k)` of `k` labels, chosen by a seeded
/// permutation.
pub fn feedback_mask(k: usize, fraction: f64, seed: u64, episode: u64) -> Vec<bool> {
    let reveal = ((fraction * k as f64) + 1e-9).floor() as usize;
    let mut order: Vec<usize> = (0..k).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ episode.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.set_stream(MASK_STREAM);
    order.shuffle(&mut rng);
    let mut mask = vec![false; k];
    for &i in &order[..reveal.min(k)] {
        mask[i] = true;
    }
    mask
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub state: CameraState,
    pub action: String,
    pub decision: bool,
    pub correct: bool,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub steps: Vec<StepRecord>,
    pub correct: u64,
    pub incorrect: u64,
}

impl RoundRecord {
    fn new(views: &[ViewObservation], theta: &[f64], sign: f64) -> Result<Self> {
        let steps = views
            .iter()
            .map(|v| {
                Ok(StepRecord {
                    state: v.state,
                    action: v.action.map(|a| a.label()).unwrap_or_default(),
                    decision: v.decision,
                    correct: v.correct,
                    score: sign * mixture_score(&v.sources, theta)?.score,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let correct = views.iter().filter(|v| v.correct).count() as u64;
        Ok(Self { steps, correct, incorrect: views.len() as u64 - correct })
    }

    /// Percentage of correct decisions.
    pub fn accuracy(&self) -> f64 {
        100.0 * self.correct as f64 / (self.correct + self.incorrect).max(1) as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRecord {
    pub scene_id: String,
    pub seed: u64,
    pub matches: bool,
    pub theta: Vec<f64>,
    /// Sign applied to the mixture entropy to obtain the view score.
    pub orientation: f64,
    pub mizo_running_mean: f64,
    pub revealed: Vec<bool>,
    pub gates: Option<GatedPriorities>,
    pub rounds: [RoundRecord; 2],
    /// Answer to the scene-summary question, asked from the round-2 view with
    /// the highest score.
    pub summary_decision: bool,
    pub summary_correct: bool,
    pub ops: OpCounters,
}

struct Fit {
    theta: Vec<f64>,
    orientation: f64,
    running_mean: f64,
    steps: u64,
}

/// MI-ZO weights on the labelled views. Learned variants also orient the
/// score against the labels; fixed variants keep uniform weights and the raw
/// entropy.
fn fit_weights(train: &[&ViewObservation], config: &RunConfig, seed: u64) -> Result<Fit> {
    let n_sources = config.metric.kinds().len();
    let uniform = vec![1.0 / n_sources as f64; n_sources];
    let positives = train.iter().filter(|v| v.correct).count();
    if !config.metric.active_regret() && n_sources == 1 || positives == 0 || positives == train.len() {
        return Ok(Fit { theta: uniform, orientation: 1.0, running_mean: 0.0, steps: 0 });
    }
    let input = MizoInput {
        views: train.iter().map(|v| v.sources.clone()).collect(),
        y: train.iter().map(|v| v.correct).collect(),
    };
    let mizo = MizoConfig {
        rounds: config.mizo_rounds,
        feedback_fraction: config.feedback_fraction,
        active_regret: config.metric.active_regret(),
        seed,
        ..Default::default()
    };
    let run = run_mizo(&input, &mizo)?;
    let steps = run.log.iter().filter(|s| s.alpha).count() as u64;
    let orientation = if config.metric.active_regret() {
        super::orientation(&run.scores.iter().copied().zip(input.y.iter().copied()).collect::<Vec<_>>())
    } else {
        1.0
    };
    Ok(Fit { theta: run.state.theta_mix, orientation, running_mean: run.state.mi_running_mean, steps })
}

/// The two-round protocol for one scene: the default tour, MI-ZO on the
/// demonstrations plus the revealed round-1 labels, controller planning, the
/// correction round and the summary question.
pub fn run_episode(spec: &SceneSpec, index: u64, config: &RunConfig, demos: &DemoStore, seed: u64) -> Result<EpisodeRecord> {
    let scene = generate_scene(spec)?;
    let kinds = config.metric.kinds();
    let mut ops = OpCounters::default();
    let mut stream = OracleStream::new(seed, index);

    let tour = default_tour(config.start, config.budget)?;
    let round1 = execute_round(&scene, config.start, &tour, &kinds, config, &mut stream, &mut ops)?;
    let revealed = feedback_mask(round1.len(), config.feedback_fraction, seed, index);

    let train: Vec<&ViewObservation> =
        demos.views.iter().chain(round1.iter().zip(&revealed).filter(|(_, &r)| r).map(|(v, _)| v)).collect();
    let fit = fit_weights(&train, config, seed.wrapping_add(index))?;
    ops.mizo_steps += fit.steps;
    let theta = &fit.theta;

    let (actions, gates) = match config.controller {
        ControllerKind::DefaultTour => (tour.clone(), None),
        ControllerKind::Ours => {
            let scores = round1
                .iter()
                .map(|v| Ok((v.state, fit.orientation * mixture_score(&v.sources, theta)?.score)))
                .collect::<Result<Vec<_>>>()?;
            let history: Vec<Observation> = demos
                .views
                .iter()
                .map(|v| Observation { state: v.state, correct: Some(v.correct), weight: 1.0 })
                .chain(round1.iter().zip(&revealed).map(|(v, &r)| Observation {
                    state: v.state,
                    correct: r.then_some(v.correct),
                    weight: 1.0,
                }))
                .collect();
            let (actions, log) = plan_correction(&scores, &history, config.gate_tau, config.start, config.budget)?;
            (actions, Some(log.gates))
        }
    };
    let round2 = execute_round(&scene, config.start, &actions, &kinds, config, &mut stream, &mut ops)?;

    let r1 = RoundRecord::new(&round1, theta, fit.orientation)?;
    let r2 = RoundRecord::new(&round2, theta, fit.orientation)?;
    let best = r2
        .steps
        .iter()
        .enumerate()
        .fold(0, |b, (i, s)| if s.score > r2.steps[b].score { i } else { b });
    let summary_state = r2.steps.get(best).map(|s| s.state).unwrap_or(config.start);
    let summary_decision = oracle_respond(&scene, summary_state, "summary", &config.oracle, &mut stream)?;
    ops.oracle_calls += 1;

    Ok(EpisodeRecord {
        scene_id: spec.id.clone(),
        seed,
        matches: spec.matches,
        theta: fit.theta.clone(),
        orientation: fit.orientation,
        mizo_running_mean: fit.running_mean,
        revealed,
        gates,
        rounds: [r1, r2],
        summary_decision,
        summary_correct: summary_decision == spec.matches,
        ops,
    })
}
