use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::controller::DEFAULT_GATE_TAU;
use crate::error::{Error, Result};
use crate::scene::{CameraState, OracleConfig, Viewpoint};
use crate::sources::SourceKind;

pub const FEEDBACK_FRACTIONS: [f64; 3] = [1.0, 0.5, 0.2];
pub const DEFAULT_BUDGET: usize = 8;
pub const SHORT_BUDGET: usize = 5;
pub const DEFAULT_DEMO_FRACTION: f64 = 0.05;

/// Which entropy sources feed the score, and whether weights are learned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum MetricVariant {
    GoLedOl { active_regret: bool },
    GhLed { active_regret: bool },
    Single(SourceKind),
}

impl MetricVariant {
    pub const NAMES: [&'static str; 8] = ["go-led-ol-ar", "go-led-ol", "gh-led-ar", "gh-led", "go", "led", "ol", "gh"];

    pub fn kinds(self) -> Vec<SourceKind> {
        match self {
            MetricVariant::GoLedOl { .. } => vec![SourceKind::Go, SourceKind::Led, SourceKind::Ol],
            MetricVariant::GhLed { .. } => vec![SourceKind::Gh, SourceKind::Led],
            MetricVariant::Single(k) => vec![k],
        }
    }

    pub fn active_regret(self) -> bool {
        match self {
            MetricVariant::GoLedOl { active_regret } | MetricVariant::GhLed { active_regret } => active_regret,
            MetricVariant::Single(_) => false,
        }
    }

    /// The same sources with learning switched off.
    pub fn without_regret(self) -> Self {
        match self {
            MetricVariant::GoLedOl { .. } => MetricVariant::GoLedOl { active_regret: false },
            MetricVariant::GhLed { .. } => MetricVariant::GhLed { active_regret: false },
            s => s,
        }
    }
}

impl fmt::Display for MetricVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MetricVariant::GoLedOl { active_regret: true } => "go-led-ol-ar",
            MetricVariant::GoLedOl { active_regret: false } => "go-led-ol",
            MetricVariant::GhLed { active_regret: true } => "gh-led-ar",
            MetricVariant::GhLed { active_regret: false } => "gh-led",
            MetricVariant::Single(SourceKind::Go) => "go",
            MetricVariant::Single(SourceKind::Led) => "led",
            MetricVariant::Single(SourceKind::Ol) => "ol",
            MetricVariant::Single(SourceKind::Gh) => "gh",
        };
        f.write_str(s)
    }
}

impl FromStr for MetricVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "go-led-ol-ar" => MetricVariant::GoLedOl { active_regret: true },
            "go-led-ol" => MetricVariant::GoLedOl { active_regret: false },
            "gh-led-ar" => MetricVariant::GhLed { active_regret: true },
            "gh-led" => MetricVariant::GhLed { active_regret: false },
            "go" => MetricVariant::Single(SourceKind::Go),
            "led" => MetricVariant::Single(SourceKind::Led),
            "ol" => MetricVariant::Single(SourceKind::Ol),
            "gh" => MetricVariant::Single(SourceKind::Gh),
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "unknown metric '{s}'; valid variants: {}",
                    Self::NAMES.join(", ")
                )))
            }
        })
    }
}

impl From<MetricVariant> for String {
    fn from(m: MetricVariant) -> String {
        m.to_string()
    }
}

impl TryFrom<String> for MetricVariant {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ControllerKind {
    Ours,
    DefaultTour,
}

impl FromStr for ControllerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ours" => Ok(ControllerKind::Ours),
            "default-tour" => Ok(ControllerKind::DefaultTour),
            _ => Err(Error::InvalidArgument(format!("unknown controller '{s}'; valid: ours, default-tour"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub dataset: Option<String>,
    pub metric: MetricVariant,
    pub controller: ControllerKind,
    /// Actions per round.
    pub budget: usize,
    pub demo_fraction: f64,
    pub feedback_fraction: f64,
    pub seeds: Vec<u64>,
    pub oracle: OracleConfig,
    /// Online MI-ZO steps per episode.
    pub mizo_rounds: usize,
    pub gate_tau: f64,
    /// Camera state at the start of each round.
    pub start: CameraState,
    /// Store wall-clock durations in the report. Off by default so that
    /// reports are byte-reproducible.
    pub wall_clock: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dataset: None,
            metric: MetricVariant::GoLedOl { active_regret: true },
            controller: ControllerKind::Ours,
            budget: DEFAULT_BUDGET,
            demo_fraction: DEFAULT_DEMO_FRACTION,
            feedback_fraction: 1.0,
            seeds: vec![0],
            oracle: OracleConfig::default(),
            mizo_rounds: 50,
            gate_tau: DEFAULT_GATE_TAU,
            start: CameraState { viewpoint: Viewpoint::Front, z_level: 0 },
            wall_clock: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::InvalidArgument("budget must be at least 1".into()));
        }
        if !FEEDBACK_FRACTIONS.contains(&self.feedback_fraction) {
            return Err(Error::InvalidArgument(format!(
                "feedback fraction {} is not one of 1.0, 0.5, 0.2",
                self.feedback_fraction
            )));
        }
        if !(self.demo_fraction > 0.0 && self.demo_fraction < 1.0) {
            return Err(Error::InvalidArgument(format!("demonstration fraction {} outside (0, 1)", self.demo_fraction)));
        }
        if self.seeds.is_empty() {
            return Err(Error::InvalidArgument("at least one seed is required".into()));
        }
        if self.mizo_rounds == 0 {
            return Err(Error::InvalidArgument("mizo rounds must be at least 1".into()));
        }
        if let Some(p) = self.oracle.forced_p_err {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!("forced error probability {p}")));
            }
        }
        Ok(())
    }
}
