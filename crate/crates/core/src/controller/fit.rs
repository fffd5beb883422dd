use serde::{Deserialize, Serialize};

use crate::scene::{CameraState, Viewpoint, N_VIEWPOINTS, N_Z_LEVELS};

/// Error probability assumed for a viewpoint with no observations.
pub const UNSEEN_ERROR_PRIOR: f64 = 0.5;

/// Per-view proxy correctness labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProxyLabels {
    pub labels: Vec<(CameraState, bool)>,
    pub threshold: f64,
}

impl ProxyLabels {
    /// Label of the most recent occurrence of `state`.
    pub fn get(&self, state: CameraState) -> Option<bool> {
        self.labels.iter().rev().find(|(s, _)| *s == state).map(|&(_, l)| l)
    }
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Label 1 iff a view's score is at least the median of all scores in the
/// batch (ties label 1).
pub fn generate_proxy_labels(view_scores: &[(CameraState, f64)]) -> ProxyLabels {
    if view_scores.is_empty() {
        return ProxyLabels { labels: Vec::new(), threshold: 0.0 };
    }
    let scores: Vec<f64> = view_scores.iter().map(|v| v.1).collect();
    let threshold = median(&scores);
    ProxyLabels { labels: view_scores.iter().map(|&(s, x)| (s, x >= threshold)).collect(), threshold }
}

/// One decision in the feedback history. `correct` is `None` when the label
/// was not revealed; the proxy label stands in for it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub state: CameraState,
    pub correct: Option<bool>,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentFit {
    pub coefficients: Vec<f64>,
    pub residual_trace: f64,
    /// CM1: error probability per viewpoint. CM2: confidence per node
    /// (`z * 6 + viewpoint`).
    pub outputs: Vec<f64>,
    /// Whether each output's group had any observation.
    pub observed: Vec<bool>,
}

/// `(group, target, weight)` rows with resolved correctness.
fn rows(history: &[Observation], proxy: &ProxyLabels, group: impl Fn(CameraState) -> usize) -> Vec<(usize, f64, f64)> {
    history
        .iter()
        .filter(|o| o.weight > 0.0)
        .filter_map(|o| {
            let correct = o.correct.or_else(|| proxy.get(o.state))?;
            Some((group(o.state), if correct { 1.0 } else { 0.0 }, o.weight))
        })
        .collect()
}

/// Weighted least squares of `target` on a one-hot group design. The normal
/// equations are diagonal, so each coefficient is its group's weighted mean.
fn one_hot_least_squares(rows: &[(usize, f64, f64)], groups: usize, prior: f64) -> (Vec<f64>, Vec<bool>, f64) {
    let mut num = vec![0.0; groups];
    let mut den = vec![0.0; groups];
    for &(g, t, w) in rows {
        num[g] += w * t;
        den[g] += w;
    }
    let observed: Vec<bool> = den.iter().map(|&d| d > 0.0).collect();
    let coef: Vec<f64> = num.iter().zip(&den).map(|(&n, &d)| if d > 0.0 { n / d } else { prior }).collect();
    let trace = rows.iter().map(|&(g, t, w)| w * (t - coef[g]).powi(2)).sum();
    (coef, observed, trace)
}

/// Component model 1: per-viewpoint probability that a decision is wrong.
/// The target for each decision is its squared residual against a correct
/// answer, `(1 - correct)^2`.
pub fn fit_cm1(history: &[Observation], proxy: &ProxyLabels) -> ComponentFit {
    let rows: Vec<_> = rows(history, proxy, |s| s.viewpoint.index())
        .into_iter()
        .map(|(g, c, w)| (g, (1.0 - c) * (1.0 - c), w))
        .collect();
    let (coef, observed, trace) = one_hot_least_squares(&rows, N_VIEWPOINTS, UNSEEN_ERROR_PRIOR);
    let outputs = coef.iter().map(|p| p.clamp(0.0, 1.0)).collect();
    ComponentFit { coefficients: coef, residual_trace: trace, outputs, observed }
}

/// Component model 2: per (viewpoint, z-level) confidence that a decision is
/// correct.
pub fn fit_cm2(history: &[Observation], proxy: &ProxyLabels) -> ComponentFit {
    let rows = rows(history, proxy, CameraState::index);
    let (coef, observed, trace) = one_hot_least_squares(&rows, N_VIEWPOINTS * N_Z_LEVELS, 0.5);
    let outputs = coef.iter().map(|p| p.clamp(0.0, 1.0)).collect();
    ComponentFit { coefficients: coef, residual_trace: trace, outputs, observed }
}

/// Z-levels of a viewpoint ordered best first: observed levels by
/// descending confidence, then unobserved levels; ties by level index.
pub fn rank_z_levels(cm2: &ComponentFit, viewpoint: Viewpoint) -> Vec<u8> {
    let node = |z: usize| z * N_VIEWPOINTS + viewpoint.index();
    let mut levels: Vec<usize> = (0..N_Z_LEVELS).collect();
    levels.sort_by(|&a, &b| {
        cm2.observed[node(b)]
            .cmp(&cm2.observed[node(a)])
            .then(cm2.outputs[node(b)].total_cmp(&cm2.outputs[node(a)]))
            .then(a.cmp(&b))
    });
    levels.into_iter().map(|z| z as u8).collect()
}
