use mizo_core::controller::{build_interaction_matrix, fit_cm1, fit_cm2, generate_proxy_labels, plan_actions, rank_z_levels, Observation};
use mizo_core::histogram::Histogram;
use mizo_core::info::{entropy, estimate_intervals, multi_information, multi_information_pair, mutual_information, JointTable};
use mizo_core::metrics::{acc_sq, auc, ber, pc_dispersion, ConfusionCounts, GibbsConfig};
use mizo_core::mizo::{max_margin_step, planted_task, project_simplex, run_mizo, MizoConfig, Orientation, Separator, UnitSample, ViewSources};
use mizo_core::scene::{apply_action, CameraAction, CameraState, OracleConfig, OracleStream, Viewpoint};
use mizo_core::sources::{extract_global_color_hist, extract_local_edge_density, ColorSpace, Mask, RasterView, ScalingFactors};
use proptest::prelude::*;

fn counts(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..10.0, 1..max_len).prop_filter("some mass", |v| v.iter().sum::<f64>() > 1e-6)
}

fn joint2(max: usize) -> impl Strategy<Value = (usize, usize, Vec<f64>)> {
    (1..max, 1..max).prop_flat_map(|(a, b)| {
        (Just(a), Just(b), prop::collection::vec(0.0f64..1.0, a * b).prop_filter("mass", |v| v.iter().sum::<f64>() > 1e-6))
    })
}

fn any_state() -> impl Strategy<Value = CameraState> {
    (0usize..24).prop_map(|i| CameraState::from_index(i).unwrap())
}

fn any_action() -> impl Strategy<Value = CameraAction> {
    (0usize..CameraAction::ALL.len()).prop_map(|i| CameraAction::ALL[i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn histograms_are_normalized(c in counts(40), target in 1usize..64, exp in 0.1f64..5.0) {
        let h = Histogram::from_counts(&c).unwrap();
        prop_assert!((h.bins().iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert!(h.bins().iter().all(|&m| m >= 0.0));
        for derived in [h.resample(target).unwrap(), h.tilt(exp).unwrap()] {
            prop_assert!((derived.bins().iter().sum::<f64>() - 1.0).abs() < 1e-9);
            prop_assert!(derived.bins().iter().all(|&m| m >= 0.0));
        }
    }

    #[test]
    fn entropy_is_bounded(c in counts(40)) {
        let h = Histogram::from_counts(&c).unwrap();
        let e = entropy(&h);
        prop_assert!(e >= 0.0);
        prop_assert!(e <= (c.len() as f64).log2() + 1e-12);
    }

    #[test]
    fn mutual_information_is_nonnegative_and_symmetric((a, b, m) in joint2(7)) {
        let j = JointTable::from_counts(vec![a, b], &m).unwrap();
        let mi = mutual_information(&j).unwrap();
        prop_assert!(mi >= -1e-12);
        let swapped = mutual_information(&j.permuted(&[1, 0]).unwrap()).unwrap();
        prop_assert!((mi - swapped).abs() < 1e-12);
    }

    #[test]
    fn multi_information_reduces_for_two_sources(m in prop::collection::vec(0.0f64..1.0, 8).prop_filter("mass", |v| v.iter().sum::<f64>() > 1e-6)) {
        let j = JointTable::from_counts(vec![2, 2, 2], &m).unwrap();
        let mi = multi_information(&j).unwrap();
        let def2 = multi_information_pair(&j).unwrap();
        prop_assert!((mi - def2).abs() < 1e-12);
    }

    #[test]
    fn cuts_stay_inside_the_data(samples in prop::collection::vec(-100.0f64..100.0, 8..80), bins in 2usize..5) {
        let mut distinct = samples.clone();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup();
        prop_assume!(distinct.len() >= bins);
        let cuts = estimate_intervals(&samples, bins, 64).unwrap();
        let (lo, hi) = (distinct[0], *distinct.last().unwrap());
        prop_assert_eq!(cuts.points().len(), bins - 1);
        prop_assert!(cuts.points().iter().all(|&c| c >= lo && c <= hi));
        prop_assert!(cuts.points().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn projection_lands_on_the_simplex(v in prop::collection::vec(-5.0f64..5.0, 1..8)) {
        let p = project_simplex(&v);
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert!(p.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn separator_stays_in_the_unit_ball(
        pts in prop::collection::vec((prop::collection::vec(-3.0f64..3.0, 3), any::<bool>()), 2..20),
        eta in 0.01f64..5.0,
        steps in 1usize..20,
    ) {
        let units: Vec<UnitSample> = pts
            .into_iter()
            .map(|(f, up)| UnitSample { feature: f, orientation: if up { Orientation::Up } else { Orientation::Down } })
            .collect();
        let mut sep = Separator::zeros(3);
        for _ in 0..steps {
            max_margin_step(&mut sep, &units, eta, true).unwrap();
            let n = sep.norm();
            prop_assert!(n <= 1.0 + 1e-12);
            if n > 0.0 {
                prop_assert!((sep.gamma * n - 2.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn planned_actions_have_budget_length_and_are_legal(
        start in any_state(),
        priorities in prop::collection::vec(0.0f64..1.0, 24),
        budget in 1usize..16,
    ) {
        let m = build_interaction_matrix(6, 4).unwrap();
        let actions = plan_actions(&m, &priorities, start, budget).unwrap();
        prop_assert_eq!(actions.len(), budget);
        let mut s = start;
        for a in actions {
            s = apply_action(s, a).unwrap();
        }
    }

    #[test]
    fn camera_actions_yield_legal_states_or_errors(start in any_state(), seq in prop::collection::vec(any_action(), 0..30)) {
        let mut s = start;
        for a in seq {
            if let Ok(next) = apply_action(s, a) {
                prop_assert!(CameraState::from_index(next.index()) == Some(next));
                s = next;
            }
        }
    }

    #[test]
    fn rates_are_bounded(tp in 0u64..50, fp in 0u64..50, tn in 0u64..50, fn_ in 0u64..50) {
        let c = ConfusionCounts { tp, fp, tn, fn_ };
        if let Ok(b) = ber(&c) {
            prop_assert!((0.0..=1.0).contains(&b));
        }
        if tp + fp + tn + fn_ > 0 {
            let a = acc_sq(&[(tp + tn, fp + fn_)]).unwrap();
            prop_assert!((0.0..=100.0).contains(&a));
        }
    }

    #[test]
    fn auc_is_bounded_and_flips_under_negation(s in prop::collection::vec((-5i32..5, any::<bool>()), 2..60)) {
        let samples: Vec<(f64, bool)> = s.iter().map(|&(x, y)| (x as f64, y)).collect();
        prop_assume!(samples.iter().any(|p| p.1) && samples.iter().any(|p| !p.1));
        let a = auc(&samples).unwrap();
        prop_assert!((0.0..=1.0).contains(&a));
        let neg: Vec<(f64, bool)> = samples.iter().map(|&(x, y)| (-x, y)).collect();
        prop_assert!((auc(&neg).unwrap() - (1.0 - a)).abs() < 1e-12);
    }

    #[test]
    fn lambda_is_monotone(np in 0u32..50, desc in 0u32..50) {
        let base = ScalingFactors::from_counts(np, desc).lambda_value;
        prop_assert!(base >= 1.0);
        prop_assert!(ScalingFactors::from_counts(np + 1, desc).lambda_value >= base);
        prop_assert!(ScalingFactors::from_counts(np, desc + 1).lambda_value >= base);
    }

    #[test]
    fn controller_outputs_are_probabilities_and_rankings(
        obs in prop::collection::vec((0usize..24, prop::option::of(any::<bool>())), 1..40),
        scores in prop::collection::vec(0.0f64..1.0, 1..12),
    ) {
        let history: Vec<Observation> = obs
            .iter()
            .map(|&(i, c)| Observation { state: CameraState::from_index(i).unwrap(), correct: c, weight: 1.0 })
            .collect();
        let view_scores: Vec<(CameraState, f64)> = scores.iter().enumerate().map(|(i, &s)| (CameraState::from_index(i).unwrap(), s)).collect();
        let proxy = generate_proxy_labels(&view_scores);
        let cm1 = fit_cm1(&history, &proxy);
        prop_assert!(cm1.outputs.iter().all(|p| (0.0..=1.0).contains(p)));
        prop_assert!(cm1.residual_trace >= 0.0);
        let cm2 = fit_cm2(&history, &proxy);
        prop_assert!(cm2.residual_trace >= 0.0);
        for v in Viewpoint::ALL {
            let mut r = rank_z_levels(&cm2, v);
            r.sort_unstable();
            prop_assert_eq!(r, vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn more_errors_never_lower_error_probability(
        obs in prop::collection::vec((0usize..6, any::<bool>()), 0..30),
        vp in 0usize..6,
    ) {
        let mk = |v: usize, c: bool| Observation { state: CameraState::new(Viewpoint::ALL[v], 0).unwrap(), correct: Some(c), weight: 1.0 };
        let mut history: Vec<Observation> = obs.iter().map(|&(v, c)| mk(v, c)).collect();
        let proxy = generate_proxy_labels(&[]);
        let before = fit_cm1(&history, &proxy).outputs[Viewpoint::ALL[vp].index()];
        history.push(mk(vp, false));
        let after = fit_cm1(&history, &proxy).outputs[Viewpoint::ALL[vp].index()];
        prop_assert!(after >= before - 1e-12);
    }

    #[test]
    fn hue_ignores_value_scaling(
        colours in prop::collection::vec((0u8..64, 0u8..64, 0u8..64), 16),
        k in 1u8..=4,
    ) {
        // Channels are multiples of 4 and the scale is k/4, so scaled pixels
        // are exact and every channel ratio is preserved.
        let px: Vec<[u8; 3]> = colours.iter().map(|&(r, g, b)| [r * 4, g * 4, b * 4]).collect();
        let scaled: Vec<[u8; 3]> = px.iter().map(|c| c.map(|v| v / 4 * k)).collect();
        let a = RasterView::new(4, 4, px, vec![]).unwrap();
        let b = RasterView::new(4, 4, scaled, vec![]).unwrap();
        prop_assert_eq!(
            extract_global_color_hist(&a, ColorSpace::HsvHue, 8).unwrap(),
            extract_global_color_hist(&b, ColorSpace::HsvHue, 8).unwrap()
        );
    }

    #[test]
    fn constant_images_have_no_edges(c in (0u8..=255, 0u8..=255, 0u8..=255), w in 3usize..12, h in 3usize..12) {
        let px = vec![[c.0, c.1, c.2]; w * h];
        let mask = Mask::new(w, h, vec![true; w * h]).unwrap();
        let view = RasterView::new(w, h, px, vec![mask]).unwrap();
        let led = extract_local_edge_density(&view, 16).unwrap();
        prop_assert_eq!(led.bins()[0], 1.0);
    }

    #[test]
    fn extraction_is_pure(px in prop::collection::vec((0u8..=255, 0u8..=255, 0u8..=255), 36)) {
        let pixels: Vec<[u8; 3]> = px.iter().map(|&(r, g, b)| [r, g, b]).collect();
        let mask = Mask::new(6, 6, (0..36).map(|i| i % 3 != 0).collect()).unwrap();
        let view = RasterView::new(6, 6, pixels, vec![mask]).unwrap();
        let a = mizo_core::sources::extract_sources(&view, "a red cube", &Default::default()).unwrap();
        let b = mizo_core::sources::extract_sources(&view, "a red cube", &Default::default()).unwrap();
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn mizo_run_invariants(seed in 0u64..1000, fraction_index in 0usize..3) {
        let f = [1.0, 0.5, 0.2][fraction_index];
        let input = planted_task(40, 3, 1, 0.1, seed).unwrap();
        let config = MizoConfig { rounds: 20, feedback_fraction: f, seed, ..Default::default() };
        let run = run_mizo(&input, &config).unwrap();
        let mut prev = 0.0;
        for step in &run.log {
            prop_assert!((step.theta.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            prop_assert!(step.theta.iter().all(|&t| t >= 0.0));
            prop_assert!(step.running_mean >= prev);
            prev = step.running_mean;
            if let (Some(r), Some(mi)) = (step.regret, step.mi) {
                prop_assert_eq!(r, step.running_mean_before - mi);
                prop_assert_eq!(r + mi, step.running_mean_before);
            }
        }
        let sep = &run.state.separator;
        if sep.norm() > 0.0 {
            prop_assert!((sep.gamma * sep.norm() - 2.0).abs() < 1e-12);
        }
        prop_assert_eq!(run_mizo(&input, &config).unwrap().state, run.state);
    }

    #[test]
    fn scaling_raw_counts_changes_nothing(seed in 0u64..1000, k in 0.01f64..100.0) {
        let input = planted_task(30, 3, 2, 0.1, seed).unwrap();
        let mut scaled = input.clone();
        scaled.views = input
            .views
            .iter()
            .map(|v| {
                let sources = v
                    .sources
                    .iter()
                    .map(|s| s.as_ref().map(|h| Histogram::from_counts(&h.bins().iter().map(|m| m * k).collect::<Vec<_>>()).unwrap()))
                    .collect();
                ViewSources::new(sources, v.lambda).unwrap()
            })
            .collect();
        let config = MizoConfig { rounds: 10, seed, ..Default::default() };
        let a = run_mizo(&input, &config).unwrap();
        let b = run_mizo(&scaled, &config).unwrap();
        let thetas = |r: &mizo_core::mizo::MizoRun| r.log.iter().map(|s| s.theta.clone()).collect::<Vec<_>>();
        let ta = thetas(&a);
        let tb = thetas(&b);
        for (x, y) in ta.iter().zip(&tb) {
            for (p, q) in x.iter().zip(y) {
                prop_assert!((p - q).abs() < 1e-9);
            }
        }
        prop_assert!((a.state.mi_running_mean - b.state.mi_running_mean).abs() < 1e-9);
        let rank = |s: &[f64]| {
            let mut i: Vec<usize> = (0..s.len()).collect();
            i.sort_by(|&p, &q| s[p].total_cmp(&s[q]).then(p.cmp(&q)));
            i
        };
        let rounded = |s: &[f64]| s.iter().map(|x| (x * 1e9).round() / 1e9).collect::<Vec<_>>();
        prop_assert_eq!(rank(&rounded(&a.scores)), rank(&rounded(&b.scores)));
    }

    #[test]
    fn no_feedback_leaves_the_separator_alone(seed in 0u64..1000) {
        let input = planted_task(20, 3, 0, 0.0, seed).unwrap();
        let config = MizoConfig { rounds: 15, feedback_fraction: 0.0, seed, ..Default::default() };
        let run = run_mizo(&input, &config).unwrap();
        prop_assert_eq!(run.state.separator, Separator::zeros(3));
        prop_assert!(run.log.iter().all(|s| !s.separator_updated));
    }

    #[test]
    fn oracle_uses_one_draw_per_call(seed in any::<u64>(), calls in 1u64..200, p in 0.0f64..1.0) {
        let cfg = OracleConfig::default();
        let mut s = OracleStream::new(seed, 3);
        for _ in 0..calls {
            s.decide(true, p, &cfg);
        }
        prop_assert_eq!(s.draws(), calls);
    }

    #[test]
    fn pc_dispersion_is_nonnegative(xs in prop::collection::vec((-3.0f64..3.0, any::<bool>()), 24..48)) {
        let scores: Vec<f64> = xs.iter().map(|p| p.0).collect();
        let labels: Vec<bool> = xs.iter().map(|p| p.1).collect();
        if let Ok(d) = pc_dispersion(&scores, &labels, 6, 1, &GibbsConfig::default()) {
            prop_assert!(d >= 0.0);
        }
    }
}
