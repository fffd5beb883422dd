use rand::Rng;

use super::state::{improves, MizoState};
use crate::error::{Error, Result};

/// Smallest magnitude of the step coefficient applied by [`zo_update`].
pub const PERTURBATION_SCALE: f64 = 0.3;

/// Euclidean projection onto the probability simplex.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut shift = 0.0;
    for (k, &x) in u.iter().enumerate() {
        cumulative += x;
        let t = (cumulative - 1.0) / (k + 1) as f64;
        if x - t > 0.0 {
            shift = t;
        }
    }
    let mut out: Vec<f64> = v.iter().map(|&x| (x - shift).max(0.0)).collect();
    let total: f64 = out.iter().sum();
    for x in &mut out {
        *x /= total;
    }
    out
}

/// `mean(loss_history) - current_loss`, the finite difference between the
/// historical and current loss. `None` with no history.
pub fn zo_coefficient(loss_history: &[f64], current_loss: f64) -> Option<f64> {
    if loss_history.is_empty() {
        return None;
    }
    let mean = loss_history.iter().sum::<f64>() / loss_history.len() as f64;
    Some(mean - current_loss)
}

/// Pushes `c` away from zero to at least `floor` in magnitude, keeping its
/// sign (zero counts as positive).
pub fn floored(c: f64, floor: f64) -> f64 {
    if c.abs() >= floor {
        c
    } else if c < 0.0 {
        -floor
    } else {
        floor
    }
}

/// `r` random signed basis vectors of dimension `dim`.
pub fn random_directions<R: Rng>(rng: &mut R, dim: usize, r: usize) -> Vec<Vec<f64>> {
    (0..r)
        .map(|_| {
            let mut v = vec![0.0; dim];
            v[rng.random_range(0..dim)] = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            v
        })
        .collect()
}

pub fn mean_direction(directions: &[Vec<f64>]) -> Vec<f64> {
    let dim = directions.first().map_or(0, Vec::len);
    let mut v = vec![0.0; dim];
    for d in directions {
        for (a, b) in v.iter_mut().zip(d) {
            *a += b;
        }
    }
    let r = directions.len() as f64;
    v.iter().map(|x| x / r).collect()
}

pub fn propose(theta: &[f64], coefficient: f64, direction: &[f64]) -> Vec<f64> {
    let moved: Vec<f64> = theta.iter().zip(direction).map(|(t, d)| t + coefficient * d).collect();
    project_simplex(&moved)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZoOutcome {
    pub coefficient: Option<f64>,
    pub direction: Vec<f64>,
    pub candidate_mi: Option<f64>,
    pub accepted: bool,
}

/// One zeroth-order step on the mixture weights.
///
/// Draws `r` directions, proposes `project_simplex(theta + c * v)` with `c`
/// the [`zo_coefficient`] floored at [`PERTURBATION_SCALE`], and keeps
/// it only if `objective` (the MI the weights would achieve) beats `best_mi`.
/// `current_loss` is appended to the history either way.
pub fn zo_update<R: Rng>(
    state: &mut MizoState,
    current_loss: f64,
    r: usize,
    rng: &mut R,
    best_mi: f64,
    objective: impl FnMut(&[f64]) -> Result<f64>,
) -> Result<ZoOutcome> {
    zo_update_with(state, current_loss, r, PERTURBATION_SCALE, rng, best_mi, objective)
}

/// [`zo_update`] with an explicit coefficient floor.
pub fn zo_update_with<R: Rng>(
    state: &mut MizoState,
    current_loss: f64,
    r: usize,
    floor: f64,
    rng: &mut R,
    best_mi: f64,
    mut objective: impl FnMut(&[f64]) -> Result<f64>,
) -> Result<ZoOutcome> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    let direction = mean_direction(&random_directions(rng, state.theta_mix.len(), r));
    let coefficient = zo_coefficient(&state.loss_history, current_loss).map(|c| floored(c, floor));
    let mut outcome = ZoOutcome { coefficient, direction, candidate_mi: None, accepted: false };
    if let Some(c) = coefficient {
        let candidate = propose(&state.theta_mix, c, &outcome.direction);
        if candidate != state.theta_mix {
            let mi = objective(&candidate)?;
            outcome.candidate_mi = Some(mi);
            if improves(mi, best_mi) {
                state.theta_mix = candidate;
                outcome.accepted = true;
            }
        }
    }
    state.loss_history.push(current_loss);
    Ok(outcome)
}
