use crate::error::{Error, Result};
use crate::histogram::Histogram;
use crate::info::entropy;
use crate::sources::{SourceKind, SourceSet};

/// Common support every source is resampled onto before mixing.
pub const GRID_BINS: usize = 32;

/// The sources of one view on the common grid, plus its text scaling.
/// `None` marks a source that is unavailable in this view.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewSources {
    pub sources: Vec<Option<Histogram>>,
    pub lambda: f64,
}

impl ViewSources {
    /// Resamples each available source onto `GRID_BINS` bins.
    pub fn new(sources: Vec<Option<Histogram>>, lambda: f64) -> Result<Self> {
        let sources = sources
            .into_iter()
            .map(|s| s.map(|h| h.resample(GRID_BINS)).transpose())
            .collect::<Result<_>>()?;
        Ok(Self { sources, lambda })
    }

    pub fn from_source_set(set: &SourceSet, kinds: &[SourceKind]) -> Result<Self> {
        Self::new(kinds.iter().map(|&k| set.get(k)).collect(), set.lambda.lambda_value)
    }

    pub fn available(&self) -> Vec<bool> {
        self.sources.iter().map(Option::is_some).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixtureScore {
    pub distribution: Histogram,
    /// Entropy of `distribution`, in bits.
    pub score: f64,
}

/// Mixing weights: `theta` restricted to the available sources and
/// renormalized. If every weighted source is missing, the available ones
/// share the mass equally.
pub fn mixing_weights(theta: &[f64], available: &[bool]) -> Result<Vec<f64>> {
    if theta.len() != available.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} weights for {} sources",
            theta.len(),
            available.len()
        )));
    }
    let masked: Vec<f64> = theta.iter().zip(available).map(|(&t, &a)| if a { t } else { 0.0 }).collect();
    let total: f64 = masked.iter().sum();
    if total > 0.0 {
        return Ok(masked.iter().map(|m| m / total).collect());
    }
    let count = available.iter().filter(|&&a| a).count();
    if count == 0 {
        return Err(Error::EmptyInput);
    }
    Ok(available.iter().map(|&a| if a { 1.0 / count as f64 } else { 0.0 }).collect())
}

/// `S_t`: the weighted mixture of a view's sources, tilted by the view's
/// scaling factor (`mass^lambda`, renormalized).
pub fn mixture_score(view: &ViewSources, theta: &[f64]) -> Result<MixtureScore> {
    let pi = mixing_weights(theta, &view.available())?;
    let mut len = None;
    for h in view.sources.iter().flatten() {
        if *len.get_or_insert(h.len()) != h.len() {
            return Err(Error::DimensionMismatch("sources are on different grids".into()));
        }
    }
    let mut mix = vec![0.0; len.ok_or(Error::EmptyInput)?];
    for (h, &p) in view.sources.iter().zip(&pi) {
        if let (Some(h), true) = (h, p > 0.0) {
            for (m, &b) in mix.iter_mut().zip(h.bins()) {
                *m += p * b;
            }
        }
    }
    let distribution = Histogram::new(mix)?.tilt(view.lambda)?;
    let score = entropy(&distribution);
    Ok(MixtureScore { distribution, score })
}

/// Scalar score of every view under `theta`.
pub fn view_scores(views: &[ViewSources], theta: &[f64]) -> Result<Vec<f64>> {
    views.iter().map(|v| mixture_score(v, theta).map(|m| m.score)).collect()
}
