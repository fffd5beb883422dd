use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use mizo_core::error::Error;
use mizo_core::harness::{
    diag_pcd, diag_separation, load_dataset, run_benchmark, run_demonstrations, save_dataset, ControllerKind, MetricVariant, Report,
    RunConfig,
};
use mizo_core::scene::{diagnostic_set, feature_id_set, occlusion_set, CameraState, OracleConfig, SceneSpec, Viewpoint};

const EXIT_CONFIG: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(name = "mizo", version, about = "MI-ZO scene benchmarks and diagnostics")]
struct Cli {
    /// Output directory.
    #[arg(long, global = true, env = "MIZO_OUT_DIR", default_value = "mizo-out")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic scene dataset as one JSON file per scene.
    GenScenes {
        #[arg(long, value_enum)]
        kind: SceneKind,
        /// Scene count (the diagnostic set always has 48).
        #[arg(long, default_value_t = 60)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the demonstration scenes and write their labelled views.
    Demo(RunArgs),
    /// Run the two-round benchmark and write a JSON report and CSV summary.
    Bench(RunArgs),
    /// Score separation of correct and incorrect answers, learned vs fixed weights.
    DiagSeparation(RunArgs),
    /// Posterior-concentration dispersion, learned vs fixed weights.
    DiagPcd {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 6)]
        increment: usize,
    },
    /// Print the aggregate of a saved benchmark report.
    Report {
        /// Report JSON written by `bench`.
        input: PathBuf,
        /// Print the per-episode CSV instead.
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SceneKind {
    Diagnostic,
    Occlusion,
    FeatureId,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Directory of scene JSON files. Diagnostics generate the 48-scene
    /// diagnostic set when omitted.
    #[arg(long)]
    dataset: Option<PathBuf>,
    #[arg(long, default_value = "go-led-ol-ar", value_parser = parse_metric)]
    metric: MetricVariant,
    #[arg(long, default_value = "ours", value_parser = parse_controller)]
    controller: ControllerKind,
    /// Actions per round.
    #[arg(long, default_value_t = 8)]
    budget: usize,
    #[arg(long, default_value_t = 0.05)]
    demo_fraction: f64,
    /// One of 1.0, 0.5, 0.2.
    #[arg(long, default_value_t = 1.0)]
    feedback: f64,
    /// First seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of consecutive seeds starting at --seed.
    #[arg(long, default_value_t = 1)]
    runs: u64,
    #[arg(long, default_value_t = 0.0)]
    oracle_a: f64,
    #[arg(long, default_value_t = 6.0)]
    oracle_b: f64,
    /// Constant error probability overriding the logistic oracle.
    #[arg(long)]
    forced_p_err: Option<f64>,
    /// Simulated oracle latency per call.
    #[arg(long, default_value_t = 0)]
    latency_us: u64,
    #[arg(long, default_value_t = 50)]
    mizo_rounds: usize,
    #[arg(long, default_value_t = 1e7)]
    gate_tau: f64,
    /// Zoom level of the front-view start state (0 is nearest).
    #[arg(long, default_value_t = 0)]
    start_z: u8,
    /// Record wall-clock time in the report (makes it non-reproducible).
    #[arg(long)]
    wall_clock: bool,
}

fn parse_metric(s: &str) -> Result<MetricVariant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_controller(s: &str) -> Result<ControllerKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl RunArgs {
    fn config(&self) -> Result<RunConfig, Failure> {
        let start = CameraState::new(Viewpoint::Front, self.start_z)?;
        Ok(RunConfig {
            dataset: self.dataset.as_ref().map(|p| p.display().to_string()),
            metric: self.metric,
            controller: self.controller,
            budget: self.budget,
            demo_fraction: self.demo_fraction,
            feedback_fraction: self.feedback,
            seeds: (self.seed..self.seed + self.runs).collect(),
            oracle: OracleConfig { a: self.oracle_a, b: self.oracle_b, forced_p_err: self.forced_p_err, latency_us: self.latency_us },
            mizo_rounds: self.mizo_rounds,
            gate_tau: self.gate_tau,
            wall_clock: self.wall_clock,
            start,
            ..Default::default()
        })
    }

    fn dataset(&self, fallback: Option<fn(u64) -> Vec<SceneSpec>>) -> Result<Vec<SceneSpec>, Failure> {
        match (&self.dataset, fallback) {
            (Some(dir), _) => load_dataset(dir).with_context(|| format!("loading dataset {}", dir.display())).map_err(Failure::Config),
            (None, Some(generate)) => Ok(generate(self.seed)),
            (None, None) => Err(Failure::Config(anyhow::anyhow!("--dataset is required"))),
        }
    }
}

enum Failure {
    Config(anyhow::Error),
    Runtime(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) => Failure::Config(e.into()),
            _ => Failure::Runtime(e.into()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

fn write(out: &Path, name: &str, text: &str) -> Result<PathBuf, Failure> {
    std::fs::create_dir_all(out)?;
    let path = out.join(name);
    std::fs::write(&path, text)?;
    Ok(path)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let out = &cli.out;
    match cli.command {
        Command::GenScenes { kind, count, seed } => {
            let scenes = match kind {
                SceneKind::Diagnostic => diagnostic_set(seed),
                SceneKind::Occlusion => occlusion_set(count, seed),
                SceneKind::FeatureId => feature_id_set(count, seed),
            };
            save_dataset(out, &scenes)?;
            println!("wrote {} scenes to {}", scenes.len(), out.display());
        }
        Command::Demo(args) => {
            let config = args.config()?;
            config.validate()?;
            let dataset = args.dataset(None)?;
            let mut records = Vec::new();
            for &seed in &config.seeds {
                let store = run_demonstrations(&dataset, &config, seed)?;
                let views: Vec<_> = store
                    .views
                    .iter()
                    .map(|v| serde_json::json!({"state": v.state, "decision": v.decision, "correct": v.correct}))
                    .collect();
                records.push(serde_json::json!({"seed": seed, "scenes": store.scene_ids, "views": views}));
            }
            let path = write(out, "demo.json", &(serde_json::to_string_pretty(&records)? + "\n"))?;
            println!("wrote {}", path.display());
        }
        Command::Bench(args) => {
            let config = args.config()?;
            config.validate()?;
            let dataset = args.dataset(None)?;
            let report = run_benchmark(&dataset, &config)?;
            let json = write(out, "report.json", &report.to_json()?)?;
            write(out, "report.csv", &report.to_csv())?;
            let a = &report.aggregate;
            println!("{}: mean {:.2} sigma {:.2} delta_on_r1 {:+.2}", a.metric, a.mean, a.sigma, a.delta_on_r1);
            println!("wrote {}", json.display());
        }
        Command::DiagSeparation(args) => {
            let config = args.config()?;
            config.validate()?;
            let dataset = args.dataset(Some(diagnostic_set))?;
            let report = diag_separation(&dataset, &config)?;
            let path = write(out, "separation.json", &(serde_json::to_string_pretty(&report)? + "\n"))?;
            println!("auc learned {:.3} fixed {:.3}", report.mean_auc_learned, report.mean_auc_fixed);
            println!("wrote {}", path.display());
        }
        Command::DiagPcd { run, increment } => {
            let config = run.config()?;
            config.validate()?;
            let dataset = run.dataset(Some(diagnostic_set))?;
            let report = diag_pcd(&dataset, &config, increment)?;
            let path = write(out, "pcd.json", &(serde_json::to_string_pretty(&report)? + "\n"))?;
            for s in &report.per_seed {
                println!("seed {}: {} {:.3}, {} {:.3}", s.seed, report.metric, s.learned, report.fixed_metric, s.fixed);
            }
            println!("wrote {}", path.display());
        }
        Command::Report { input, csv } => {
            let text = std::fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))
                .map_err(Failure::Config)?;
            let report = Report::from_json(&text).map_err(|e| Failure::Config(e.into()))?;
            if csv {
                print!("{}", report.to_csv());
            } else {
                println!("metric {} budget {} controller {:?}", report.config.metric, report.config.budget, report.config.controller);
                println!("seed,acc_r1,acc_r2,delta_on_r1,summary_acc,summary_ber");
                for s in &report.aggregate.per_seed {
                    let ber = s.summary_ber.map(|b| format!("{b:.4}")).unwrap_or_else(|| "-".into());
                    println!("{},{:.2},{:.2},{:+.2},{:.2},{}", s.seed, s.acc_r1, s.acc_r2, s.delta_on_r1, s.summary_acc, ber);
                }
                let a = &report.aggregate;
                println!("mean {:.2} sigma {:.2} delta_on_r1 {:+.2}", a.mean, a.sigma, a.delta_on_r1);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_CONFIG) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
