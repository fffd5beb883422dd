use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::mixture::{ViewSources, GRID_BINS};
use super::run::MizoInput;
use crate::error::{Error, Result};
use crate::histogram::Histogram;

/// Synthetic views where exactly one source predicts the response.
///
/// Every source of a view is a flat block of bins at a random offset on the
/// common grid. The informative source's block is wide when the response is
/// correct and narrow otherwise; the other sources draw their width
/// independently of the response. `label_noise` flips that fraction of
/// responses after the sources are drawn.
pub fn planted_task(
    views: usize,
    sources: usize,
    informative: usize,
    label_noise: f64,
    seed: u64,
) -> Result<MizoInput> {
    if informative >= sources {
        return Err(Error::InvalidArgument(format!("informative source {informative} of {sources}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(views);
    let mut y = Vec::with_capacity(views);
    for v in 0..views {
        let correct = v % 2 == 0;
        let mut hs = Vec::with_capacity(sources);
        for s in 0..sources {
            let width = if s == informative {
                if correct {
                    rng.random_range(14..=24)
                } else {
                    rng.random_range(2..=10)
                }
            } else {
                rng.random_range(2..=24)
            };
            let offset = rng.random_range(0..=GRID_BINS - width);
            let counts: Vec<f64> = (0..GRID_BINS)
                .map(|b| if (offset..offset + width).contains(&b) { 1.0 } else { 0.0 })
                .collect();
            hs.push(Some(Histogram::from_counts(&counts)?));
        }
        out.push(ViewSources::new(hs, 1.0)?);
        y.push(correct ^ rng.random_bool(label_noise));
    }
    Ok(MizoInput { views: out, y })
}
