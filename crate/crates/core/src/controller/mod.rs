//! Camera controller: proxy labels from view scores, two least-squares
//! component models of decision quality, a trace-gated central unit, and a
//! greedy walk over the strong product of the viewpoint cycle and the zoom
//! levels.

mod central;
mod fit;
mod matrix;
mod plan;

pub use central::{central_unit, gate_score, GatedPriorities, DEFAULT_GATE_TAU, OFF_LEVEL_FACTOR, PRIOR_PRIORITY, TRACE_EPSILON};
pub use fit::{fit_cm1, fit_cm2, generate_proxy_labels, rank_z_levels, ComponentFit, Observation, ProxyLabels, UNSEEN_ERROR_PRIOR};
pub use matrix::{build_interaction_matrix, InteractionMatrix};
pub use plan::{greedy_walk, plan_actions, LOOKAHEAD};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::scene::{CameraAction, CameraState, N_VIEWPOINTS, N_Z_LEVELS};

/// What the controller saw and decided for one planning call.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionLog {
    pub proxy: ProxyLabels,
    pub error_probability: Vec<f64>,
    pub confidence: Vec<f64>,
    pub cm1_trace: f64,
    pub cm2_trace: f64,
    pub gates: GatedPriorities,
    pub actions: Vec<String>,
}

/// Runs the whole pipeline: proxy labels, both component fits, the central
/// unit and the walk.
pub fn plan_correction(
    view_scores: &[(CameraState, f64)],
    history: &[Observation],
    tau: f64,
    start: CameraState,
    budget: usize,
) -> Result<(Vec<CameraAction>, DecisionLog)> {
    let proxy = generate_proxy_labels(view_scores);
    let cm1 = fit_cm1(history, &proxy);
    let cm2 = fit_cm2(history, &proxy);
    let gates = central_unit(&cm1, &cm2, tau);
    let mut matrix = build_interaction_matrix(N_VIEWPOINTS, N_Z_LEVELS)?;
    matrix.node_values = gates.node_priority.clone();
    let actions = plan_actions(&matrix, &matrix.node_values, start, budget)?;
    let log = DecisionLog {
        proxy,
        error_probability: cm1.outputs.clone(),
        confidence: cm2.outputs.clone(),
        cm1_trace: cm1.residual_trace,
        cm2_trace: cm2.residual_trace,
        gates,
        actions: actions.iter().map(|a| a.label()).collect(),
    };
    Ok((actions, log))
}

/// The measurement-round tour: the walk under uniform priorities.
pub fn default_tour(start: CameraState, budget: usize) -> Result<Vec<CameraAction>> {
    let matrix = build_interaction_matrix(N_VIEWPOINTS, N_Z_LEVELS)?;
    plan_actions(&matrix, &vec![1.0; matrix.len()], start, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{apply_action, Viewpoint};

    fn st(v: Viewpoint, z: u8) -> CameraState {
        CameraState::new(v, z).unwrap()
    }

    fn obs(v: Viewpoint, z: u8, correct: bool) -> Observation {
        Observation { state: st(v, z), correct: Some(correct), weight: 1.0 }
    }

    fn no_proxy() -> ProxyLabels {
        generate_proxy_labels(&[])
    }

    #[test]
    fn proxy_examples() {
        let a = st(Viewpoint::Front, 0);
        let b = st(Viewpoint::Right, 0);
        let p = generate_proxy_labels(&[(a, 0.3), (b, 0.3)]);
        assert!(p.labels.iter().all(|l| l.1));
        let p = generate_proxy_labels(&[(a, 0.1), (b, 0.9)]);
        assert_eq!(p.threshold, 0.5);
        assert_eq!(p.labels.iter().map(|l| l.1).collect::<Vec<_>>(), vec![false, true]);
    }

    #[test]
    fn cm1_extremes_and_prior() {
        let h = vec![obs(Viewpoint::Front, 0, false), obs(Viewpoint::Front, 1, false), obs(Viewpoint::Back, 0, true)];
        let f = fit_cm1(&h, &no_proxy());
        assert_eq!(f.outputs[Viewpoint::Front.index()], 1.0);
        assert_eq!(f.outputs[Viewpoint::Back.index()], 0.0);
        assert_eq!(f.outputs[Viewpoint::Left.index()], UNSEEN_ERROR_PRIOR);
        assert_eq!(f.residual_trace, 0.0);
    }

    #[test]
    fn cm1_hand_solved() {
        // Front: wrong, right, right -> 1/3. Right: wrong, wrong -> 1. Left: right -> 0.
        let h = vec![
            obs(Viewpoint::Front, 0, false),
            obs(Viewpoint::Front, 0, true),
            obs(Viewpoint::Front, 2, true),
            obs(Viewpoint::Right, 0, false),
            obs(Viewpoint::Right, 1, false),
            obs(Viewpoint::Left, 3, true),
        ];
        let f = fit_cm1(&h, &no_proxy());
        assert!((f.outputs[0] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(f.outputs[Viewpoint::Right.index()], 1.0);
        assert_eq!(f.outputs[Viewpoint::Left.index()], 0.0);
        // Residuals only on front: (1 - 1/3)^2 + 2 (1/3)^2 = 2/3.
        assert!((f.residual_trace - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn masked_labels_use_proxies() {
        let s = st(Viewpoint::Back, 0);
        let proxy = generate_proxy_labels(&[(s, 0.2), (st(Viewpoint::Front, 0), 0.9)]);
        let h = vec![Observation { state: s, correct: None, weight: 1.0 }];
        assert_eq!(fit_cm1(&h, &proxy).outputs[Viewpoint::Back.index()], 1.0);
    }

    #[test]
    fn cm2_ranking() {
        let h = vec![
            obs(Viewpoint::Left, 2, true),
            obs(Viewpoint::Left, 2, true),
            obs(Viewpoint::Left, 2, true),
            obs(Viewpoint::Left, 2, true),
            obs(Viewpoint::Left, 0, false),
            obs(Viewpoint::Left, 0, false),
            obs(Viewpoint::Left, 0, false),
            obs(Viewpoint::Left, 0, false),
            obs(Viewpoint::Right, 3, false),
        ];
        let f = fit_cm2(&h, &no_proxy());
        assert_eq!(rank_z_levels(&f, Viewpoint::Left), vec![2, 0, 1, 3]);
        // A single observed level ranks first even with zero confidence.
        assert_eq!(rank_z_levels(&f, Viewpoint::Right), vec![3, 0, 1, 2]);
    }

    #[test]
    fn gate_arithmetic() {
        let h = vec![obs(Viewpoint::Front, 0, false)];
        let cm1 = fit_cm1(&h, &no_proxy());
        let cm2 = fit_cm2(&h, &no_proxy());
        // Perfect fit: sum of P = 1 + 5 * 0.5 = 3.5, scaled by 1e6.
        let g = central_unit(&cm1, &cm2, DEFAULT_GATE_TAU);
        assert!((g.cm1_score - 3.5e6).abs() < 1e-3);
        assert!(g.cm1_accepted);
        let g = central_unit(&cm1, &cm2, 1.0);
        assert!(!g.cm1_accepted && !g.cm2_accepted);
        assert_eq!(g.viewpoint_priority, vec![PRIOR_PRIORITY; 6]);
        assert_eq!(g.selected_z, vec![0; 6]);
    }

    #[test]
    fn strong_product_counts() {
        let m = build_interaction_matrix(3, 2).unwrap();
        assert_eq!((m.len(), m.edge_count()), (6, 15));
        let m = build_interaction_matrix(6, 4).unwrap();
        assert_eq!((m.len(), m.edge_count()), (24, 132));
        assert_eq!(build_interaction_matrix(4, 1).unwrap().edge_count(), 4);
        assert!(build_interaction_matrix(2, 3).is_err());
    }

    #[test]
    fn default_tour_order() {
        let start = st(Viewpoint::Front, 0);
        let tour = default_tour(start, 8).unwrap();
        assert_eq!(tour.len(), 8);
        let mut s = start;
        let mut seen = Vec::new();
        for a in &tour {
            s = apply_action(s, *a).unwrap();
            seen.push(s.viewpoint);
        }
        use Viewpoint::*;
        assert_eq!(seen, vec![FrontUp, Front, Left, Back, BackUp, Back, Right, Front]);
    }

    #[test]
    fn planted_node_two_hops_away() {
        let m = build_interaction_matrix(6, 4).unwrap();
        let mut p = vec![0.5; 24];
        let target = st(Viewpoint::Back, 0);
        p[target.index()] = 1.0;
        let actions = plan_actions(&m, &p, st(Viewpoint::Front, 0), 8).unwrap();
        let mut s = st(Viewpoint::Front, 0);
        let reached = actions.iter().take(2).any(|a| {
            s = apply_action(s, *a).unwrap();
            s == target
        });
        assert!(reached, "{actions:?}");
    }
}
