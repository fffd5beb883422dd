use serde::{Deserialize, Serialize};

use super::fit::{rank_z_levels, ComponentFit};
use crate::scene::{Viewpoint, N_VIEWPOINTS, N_Z_LEVELS};

pub const TRACE_EPSILON: f64 = 1e-6;
pub const DEFAULT_GATE_TAU: f64 = 1e7;
/// Priority multiplier for zoom levels other than the selected one.
pub const OFF_LEVEL_FACTOR: f64 = 0.5;
/// Viewpoint priority when component model 1 is rejected.
pub const PRIOR_PRIORITY: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GatedPriorities {
    pub cm1_score: f64,
    pub cm2_score: f64,
    pub cm1_accepted: bool,
    pub cm2_accepted: bool,
    pub viewpoint_priority: Vec<f64>,
    pub selected_z: Vec<u8>,
    /// Per node `z * 6 + viewpoint`.
    pub node_priority: Vec<f64>,
}

/// Aggregate output scaled by the inverse residual trace.
pub fn gate_score(aggregate: f64, trace: f64) -> f64 {
    aggregate / (trace + TRACE_EPSILON)
}

/// Accepts each component iff its gate score is at most `tau`, and turns the
/// accepted evidence into node priorities.
///
/// Accepted CM1 gives viewpoint `v` priority `1 - P(v)`, so viewpoints where
/// decisions tend to be right are visited first; rejected, every viewpoint
/// gets [`PRIOR_PRIORITY`]. Accepted CM2 selects each viewpoint's top-ranked
/// zoom level; rejected, level 0. Nodes off the selected level are scaled by
/// [`OFF_LEVEL_FACTOR`].
pub fn central_unit(cm1: &ComponentFit, cm2: &ComponentFit, tau: f64) -> GatedPriorities {
    let cm1_score = gate_score(cm1.outputs.iter().sum(), cm1.residual_trace);
    let ranks: Vec<Vec<u8>> = Viewpoint::ALL.iter().map(|&v| rank_z_levels(cm2, v)).collect();
    let top_sum: f64 = Viewpoint::ALL
        .iter()
        .zip(&ranks)
        .map(|(v, r)| cm2.outputs[r[0] as usize * N_VIEWPOINTS + v.index()])
        .sum();
    let cm2_score = gate_score(top_sum, cm2.residual_trace);
    let cm1_accepted = cm1_score <= tau;
    let cm2_accepted = cm2_score <= tau;

    let viewpoint_priority: Vec<f64> = if cm1_accepted {
        cm1.outputs.iter().map(|p| 1.0 - p).collect()
    } else {
        vec![PRIOR_PRIORITY; N_VIEWPOINTS]
    };
    let selected_z: Vec<u8> = if cm2_accepted { ranks.iter().map(|r| r[0]).collect() } else { vec![0; N_VIEWPOINTS] };
    let node_priority = (0..N_VIEWPOINTS * N_Z_LEVELS)
        .map(|i| {
            let (v, z) = (i % N_VIEWPOINTS, (i / N_VIEWPOINTS) as u8);
            viewpoint_priority[v] * if z == selected_z[v] { 1.0 } else { OFF_LEVEL_FACTOR }
        })
        .collect();
    GatedPriorities { cm1_score, cm2_score, cm1_accepted, cm2_accepted, viewpoint_priority, selected_z, node_priority }
}
