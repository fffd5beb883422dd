//! Entropy sources extracted from a rendered view and its description.
//!
//! Four histogram families are produced: the global chromatic `(a, b)` joint
//! ([`SourceKind::Go`]), the global hue ([`SourceKind::Gh`]), the pooled local
//! edge density inside object masks ([`SourceKind::Led`]) and per-object LAB
//! histograms ([`SourceKind::Ol`]). Text descriptions contribute scaling
//! factors.

pub mod color;
pub mod edge;
pub mod lexicon;
pub mod raster;

use serde::{Deserialize, Serialize};

pub use color::{extract_global_color_hist, extract_object_level_hists, ColorSpace, ObjectHists};
pub use edge::{extract_local_edge_density, DEFAULT_EDGE_BINS};
pub use lexicon::{compute_scaling_factors, Lexicon, ScalingFactors};
pub use raster::{Mask, RasterView};

use crate::error::{Error, Result};
use crate::histogram::Histogram;

pub const DEFAULT_COLOR_BINS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SourceKind {
    Go,
    Gh,
    Led,
    Ol,
}

impl SourceKind {
    pub fn name(self) -> &'static str {
        match self {
            SourceKind::Go => "GO",
            SourceKind::Gh => "GH",
            SourceKind::Led => "LED",
            SourceKind::Ol => "OL",
        }
    }
}

/// All sources of one view.
///
/// `edge_density` is `None` and `object_lab` empty when no object is visible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceSet {
    pub global_ab: Histogram,
    pub global_hue: Histogram,
    pub edge_density: Option<Histogram>,
    pub object_lab: Vec<Histogram>,
    pub lambda: ScalingFactors,
    /// Mask indices skipped for covering no pixels.
    pub skipped_masks: Vec<usize>,
}

impl SourceSet {
    /// The histogram for one source kind, or `None` if unavailable in this
    /// view. The object-level source is the mean of the per-object histograms.
    pub fn get(&self, kind: SourceKind) -> Option<Histogram> {
        match kind {
            SourceKind::Go => Some(self.global_ab.clone()),
            SourceKind::Gh => Some(self.global_hue.clone()),
            SourceKind::Led => self.edge_density.clone(),
            SourceKind::Ol => mean_histogram(&self.object_lab),
        }
    }
}

fn mean_histogram(hists: &[Histogram]) -> Option<Histogram> {
    let first = hists.first()?;
    let mut sum = vec![0.0; first.len()];
    for h in hists {
        for (s, m) in sum.iter_mut().zip(h.bins()) {
            *s += m;
        }
    }
    Histogram::from_counts(&sum).ok()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceConfig {
    pub color_bins: usize,
    pub edge_bins: usize,
}

impl Default for SourceConfig {
    fn default() -> Self {
        Self { color_bins: DEFAULT_COLOR_BINS, edge_bins: DEFAULT_EDGE_BINS }
    }
}

pub fn extract_sources(view: &RasterView, description: &str, config: &SourceConfig) -> Result<SourceSet> {
    let global_ab = extract_global_color_hist(view, ColorSpace::LabAb, config.color_bins)?;
    let global_hue = extract_global_color_hist(view, ColorSpace::HsvHue, config.color_bins)?;
    let (edge_density, object_lab, skipped_masks) = match extract_object_level_hists(view, config.color_bins) {
        Ok(objects) => {
            let led = match extract_local_edge_density(view, config.edge_bins) {
                Ok(h) => Some(h),
                Err(Error::NoObjects) => None,
                Err(e) => return Err(e),
            };
            (led, objects.hists.into_iter().map(|(_, h)| h).collect(), objects.skipped)
        }
        Err(Error::NoObjects) => (None, Vec::new(), Vec::new()),
        Err(e) => return Err(e),
    };
    Ok(SourceSet {
        global_ab,
        global_hue,
        edge_density,
        object_lab,
        lambda: compute_scaling_factors(description),
        skipped_masks,
    })
}
