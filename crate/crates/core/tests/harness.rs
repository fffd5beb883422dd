use mizo_core::controller::default_tour;
use mizo_core::harness::{
    demo_count, load_dataset, run_benchmark, run_demonstrations, save_dataset, ControllerKind, MetricVariant, Report, RunConfig,
    REPORT_SCHEMA_VERSION,
};
use mizo_core::scene::{apply_action, feature_id_set, occlusion_set, OracleConfig, Viewpoint};

fn config(controller: ControllerKind, seeds: Vec<u64>) -> RunConfig {
    RunConfig { controller, seeds, ..Default::default() }
}

#[test]
fn default_tour_repeats_round_one() {
    let ds = occlusion_set(20, 1);
    let report = run_benchmark(&ds, &config(ControllerKind::DefaultTour, vec![0])).unwrap();
    for e in &report.per_episode {
        let r1: Vec<_> = e.rounds[0].steps.iter().map(|s| (&s.action, s.state)).collect();
        let r2: Vec<_> = e.rounds[1].steps.iter().map(|s| (&s.action, s.state)).collect();
        assert_eq!(r1, r2, "{}", e.scene_id);
    }
}

#[test]
fn round_one_is_the_default_tour_for_every_method() {
    let ds = feature_id_set(20, 2);
    let tour: Vec<String> = default_tour(RunConfig::default().start, 5).unwrap().iter().map(|a| a.label()).collect();
    for (metric, controller) in [
        ("go-led-ol-ar", ControllerKind::Ours),
        ("gh-led", ControllerKind::Ours),
        ("led", ControllerKind::DefaultTour),
    ] {
        let cfg = RunConfig { metric: metric.parse().unwrap(), budget: 5, ..config(controller, vec![3]) };
        let report = run_benchmark(&ds, &cfg).unwrap();
        assert_eq!(report.default_tour, tour);
        for e in &report.per_episode {
            let r1: Vec<String> = e.rounds[0].steps.iter().map(|s| s.action.clone()).collect();
            assert_eq!(r1, tour);
            assert_eq!(e.rounds[1].steps.len(), 5);
        }
    }
}

#[test]
fn error_free_oracle_gives_perfect_rounds() {
    let ds = occlusion_set(20, 4);
    let cfg = RunConfig {
        oracle: OracleConfig { forced_p_err: Some(0.0), ..Default::default() },
        ..config(ControllerKind::Ours, vec![0])
    };
    let report = run_benchmark(&ds, &cfg).unwrap();
    for e in &report.per_episode {
        assert_eq!(e.rounds[0].incorrect + e.rounds[1].incorrect, 0);
    }
    let a = &report.aggregate;
    assert_eq!(a.mean, 100.0);
    assert_eq!(a.delta_on_r1, 0.0);
}

fn first_back_view(steps: &[mizo_core::harness::StepRecord]) -> usize {
    steps
        .iter()
        .position(|s| matches!(s.state.viewpoint, Viewpoint::Back | Viewpoint::BackUp))
        .unwrap_or(steps.len())
}

#[test]
fn controller_reaches_the_hidden_side_earlier() {
    let ds = occlusion_set(60, 0);
    let ours = run_benchmark(&ds, &config(ControllerKind::Ours, vec![0])).unwrap();
    let tour = run_benchmark(&ds, &config(ControllerKind::DefaultTour, vec![0])).unwrap();
    let mut earlier = 0;
    for (a, b) in ours.per_episode.iter().zip(&tour.per_episode) {
        assert_eq!(a.scene_id, b.scene_id);
        earlier += (first_back_view(&a.rounds[1].steps) < first_back_view(&b.rounds[1].steps)) as usize;
    }
    // The first scene is a planted occlusion case on its own.
    let (a, b) = (&ours.per_episode[0], &tour.per_episode[0]);
    assert!(first_back_view(&a.rounds[1].steps) < first_back_view(&b.rounds[1].steps));
    assert!(earlier * 2 > ours.per_episode.len(), "{earlier} of {}", ours.per_episode.len());
}

#[test]
fn identical_runs_serialize_identically() {
    let ds = feature_id_set(20, 5);
    let cfg = config(ControllerKind::Ours, vec![0, 1]);
    let a = run_benchmark(&ds, &cfg).unwrap().to_json().unwrap();
    let b = run_benchmark(&ds, &cfg).unwrap().to_json().unwrap();
    assert_eq!(a, b);
    let parsed = Report::from_json(&a).unwrap();
    assert_eq!(parsed.schema_version, REPORT_SCHEMA_VERSION);
    assert_eq!(parsed.to_json().unwrap(), a);
}

#[test]
fn single_scene_aggregate_is_that_episode() {
    let ds = occlusion_set(1, 6);
    let report = run_benchmark(&ds, &config(ControllerKind::Ours, vec![2])).unwrap();
    assert_eq!(report.per_episode.len(), 1);
    let e = &report.per_episode[0];
    let r1 = e.rounds[0].accuracy();
    let r2 = e.rounds[1].accuracy();
    let a = &report.aggregate;
    assert!((a.mean - r2).abs() < 1e-12);
    assert!((a.delta_on_r1 - (r2 - r1)).abs() < 1e-12);
    assert_eq!(a.sigma, 0.0);
}

#[test]
fn ten_seeds_report_mean_and_sigma() {
    let ds = occlusion_set(20, 7);
    let report = run_benchmark(&ds, &config(ControllerKind::Ours, (0..10).collect())).unwrap();
    let a = &report.aggregate;
    assert_eq!(a.per_seed.len(), 10);
    let r2: Vec<f64> = a.per_seed.iter().map(|s| s.acc_r2).collect();
    let mean = r2.iter().sum::<f64>() / 10.0;
    let sigma = (r2.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 9.0).sqrt();
    assert!((a.mean - mean).abs() < 1e-9);
    assert!((a.sigma - sigma).abs() < 1e-9);
    let json: serde_json::Value = serde_json::from_str(&report.to_json().unwrap()).unwrap();
    for key in ["metric", "mean", "sigma", "delta_on_r1"] {
        assert!(json["aggregate"].get(key).is_some(), "{key}");
    }
    assert!(json.get("timing").is_some() && json["per_episode"].is_array() && json.get("config").is_some());
}

#[test]
fn demonstrations_use_the_ceiling_of_the_fraction() {
    assert_eq!(demo_count(60, 0.05).unwrap(), 3);
    assert_eq!(demo_count(20, 0.05).unwrap(), 1);
    let ds = occlusion_set(60, 8);
    let cfg = RunConfig::default();
    let a = run_demonstrations(&ds, &cfg, 0).unwrap();
    let b = run_demonstrations(&ds, &cfg, 0).unwrap();
    assert_eq!(a.scene_ids, vec!["occl-000", "occl-001", "occl-002"]);
    assert_eq!(a.views.len(), 3 * cfg.budget);
    let key = |s: &mizo_core::harness::DemoStore| s.views.iter().map(|v| (v.state, v.decision, v.correct)).collect::<Vec<_>>();
    assert_eq!(key(&a), key(&b));
}

#[test]
fn demonstration_states_follow_the_tour() {
    let ds = occlusion_set(20, 9);
    let cfg = RunConfig::default();
    let store = run_demonstrations(&ds, &cfg, 0).unwrap();
    let mut state = cfg.start;
    for (action, view) in default_tour(cfg.start, cfg.budget).unwrap().into_iter().zip(&store.views) {
        state = apply_action(state, action).unwrap();
        assert_eq!(view.state, state);
    }
}

#[test]
fn dataset_round_trips_through_a_directory() {
    let dir = tempfile::tempdir().unwrap();
    let ds = feature_id_set(12, 10);
    save_dataset(dir.path(), &ds).unwrap();
    assert_eq!(load_dataset(dir.path()).unwrap(), ds);
    let empty = tempfile::tempdir().unwrap();
    assert!(load_dataset(empty.path()).is_err());
}

#[test]
fn invalid_configs_are_rejected() {
    let ds = occlusion_set(5, 11);
    for cfg in [
        RunConfig { budget: 0, ..Default::default() },
        RunConfig { feedback_fraction: 0.3, ..Default::default() },
        RunConfig { demo_fraction: 0.0, ..Default::default() },
        RunConfig { seeds: vec![], ..Default::default() },
    ] {
        assert!(run_benchmark(&ds, &cfg).is_err());
    }
    assert!("go-led".parse::<MetricVariant>().is_err());
}
