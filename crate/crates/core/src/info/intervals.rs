//! Entropy-maximising interval estimation with Halton cut-point proposals.

use serde::{Deserialize, Serialize};

use super::halton::{halton, PRIMES};
use crate::error::{Error, Result};
use crate::histogram::Histogram;

/// Default number of Halton cut-point proposals.
pub const DEFAULT_PROPOSALS: usize = 256;

/// Interior cut points splitting the real line into `target_bin_count`
/// adjacent intervals `[c_{k-1}, c_k)`; the last interval is closed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutPoints {
    points: Vec<f64>,
    target_bin_count: usize,
}

impl CutPoints {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidArgument("non-finite cut point".into()));
        }
        if points.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument("cut points not strictly increasing".into()));
        }
        let target_bin_count = points.len() + 1;
        Ok(Self { points, target_bin_count })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn bin_count(&self) -> usize {
        self.target_bin_count
    }

    /// Interval index of `x`. A value equal to a cut belongs to the interval
    /// on its right.
    pub fn bin_of(&self, x: f64) -> usize {
        self.points.partition_point(|&c| c <= x)
    }
}

/// Counts samples per interval and normalizes. The returned histogram carries
/// the cut points as its edges.
pub fn discretize(samples: &[f64], cuts: &CutPoints) -> Result<Histogram> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut counts = vec![0.0; cuts.bin_count()];
    for &x in samples {
        counts[cuts.bin_of(x)] += 1.0;
    }
    Histogram::from_counts(&counts)?.with_edges(cuts.points.clone())
}

/// Chooses `bin_count - 1` cut points that maximise the plug-in entropy of the
/// induced histogram.
///
/// The first proposal cuts at equal ranks `k n / bin_count`. Proposal `p`
/// then takes the `p`-th point of a Halton sequence with one prime base per
/// cut (2, 3, 5, ...), maps each coordinate through the empirical
/// quantile function of the samples to the midpoint between the two order
/// statistics it lands between, and sorts the result. Every proposal whose
/// entropy (rounded to 1e-9) equals the maximum contributes to an elementwise
/// mean, which is returned.
pub fn estimate_intervals(samples: &[f64], bin_count: usize, proposal_count: usize) -> Result<CutPoints> {
    if bin_count == 0 {
        return Err(Error::DegenerateBinning("zero bins requested".into()));
    }
    if proposal_count == 0 {
        return Err(Error::InvalidArgument("proposal_count must be at least 1".into()));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("non-finite sample".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let distinct = distinct_count(&sorted);
    if distinct < bin_count {
        return Err(Error::InsufficientSupport(format!(
            "{distinct} distinct samples for {bin_count} bins"
        )));
    }
    let n_cuts = bin_count - 1;
    if n_cuts == 0 {
        return CutPoints::new(Vec::new());
    }
    if n_cuts > PRIMES.len() {
        return Err(Error::DegenerateBinning(format!("at most {} bins supported", PRIMES.len() + 1)));
    }

    let n = sorted.len();
    let mut best_key = i64::MIN;
    let mut sum = vec![0.0; n_cuts];
    let mut ties = 0usize;
    let mut proposal = vec![0.0; n_cuts];
    // Proposal 0 is the equal-rank split; the rest come from Halton.
    for p in 0..=proposal_count as u64 {
        if p == 0 {
            proposal.copy_from_slice(&quantile_cuts(&sorted, bin_count));
        } else {
            for (j, slot) in proposal.iter_mut().enumerate() {
                let u = halton(p, PRIMES[j]);
                let k = ((u * n as f64).round() as usize).clamp(1, n - 1);
                *slot = cut_between(sorted[k - 1], sorted[k]);
            }
        }
        proposal.sort_by(f64::total_cmp);
        if proposal.windows(2).any(|w| !(w[0] < w[1])) {
            continue;
        }
        let key = entropy_key(&sorted, &proposal);
        if key > best_key {
            best_key = key;
            sum.copy_from_slice(&proposal);
            ties = 1;
        } else if key == best_key {
            for (s, c) in sum.iter_mut().zip(&proposal) {
                *s += c;
            }
            ties += 1;
        }
    }
    if ties == 0 {
        return CutPoints::new(distinct_quantiles(&sorted, bin_count));
    }
    let mean: Vec<f64> = sum.iter().map(|s| s / ties as f64).collect();
    CutPoints::new(mean)
}

fn cut_between(lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        lo + (hi - lo) / 2.0
    }
}

fn distinct_count(sorted: &[f64]) -> usize {
    if sorted.is_empty() {
        return 0;
    }
    1 + sorted.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Entropy of the induced histogram, rounded to 1e-9 bits so ties are exact.
fn entropy_key(sorted: &[f64], cuts: &[f64]) -> i64 {
    let n = sorted.len() as f64;
    let mut prev = 0usize;
    let mut h = 0.0;
    for k in 0..=cuts.len() {
        let end = if k == cuts.len() {
            sorted.len()
        } else {
            sorted.partition_point(|&x| x < cuts[k])
        };
        let c = (end - prev) as f64;
        if c > 0.0 {
            let p = c / n;
            h -= p * p.log2();
        }
        prev = end;
    }
    (h * 1e9).round() as i64
}

/// Cuts at equal ranks of the samples, between order statistics.
fn quantile_cuts(sorted: &[f64], bin_count: usize) -> Vec<f64> {
    let n = sorted.len();
    (1..bin_count)
        .map(|k| {
            let idx = (k * n / bin_count).clamp(1, n - 1);
            cut_between(sorted[idx - 1], sorted[idx])
        })
        .collect()
}

/// Cuts at equally spaced ranks over the distinct values; used when every
/// proposal collapses onto tied samples.
fn distinct_quantiles(sorted: &[f64], bin_count: usize) -> Vec<f64> {
    let mut distinct = sorted.to_vec();
    distinct.dedup();
    let m = distinct.len();
    (1..bin_count)
        .map(|k| {
            let idx = (k * m / bin_count).clamp(1, m - 1);
            cut_between(distinct[idx - 1], distinct[idx])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::entropy;

    #[test]
    fn bimodal_cut_lands_between_modes() {
        let mut s = vec![0.1; 50];
        s.extend(vec![0.9; 50]);
        let cuts = estimate_intervals(&s, 2, DEFAULT_PROPOSALS).unwrap();
        let c = cuts.points()[0];
        assert!(c > 0.1 && c < 0.9, "cut {c}");
        let h = discretize(&s, &cuts).unwrap();
        assert!((entropy(&h) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_grid_is_split_evenly() {
        let s: Vec<f64> = (0..100).map(|i| i as f64 / 100.0).collect();
        let cuts = estimate_intervals(&s, 2, DEFAULT_PROPOSALS).unwrap();
        let below = s.iter().filter(|&&x| x < cuts.points()[0]).count();
        assert!((below as i64 - 50).abs() <= 1, "{below} below the cut");
    }

    #[test]
    fn insufficient_support() {
        let s = vec![1.0, 1.0, 2.0];
        assert!(matches!(estimate_intervals(&s, 3, 8), Err(Error::InsufficientSupport(_))));
    }

    #[test]
    fn discretize_tie_rule_and_point_mass() {
        let cuts = CutPoints::new(vec![1.0, 2.0]).unwrap();
        let h = discretize(&[0.0, 0.5, -3.0], &cuts).unwrap();
        assert_eq!(h.bins(), &[1.0, 0.0, 0.0]);
        let h = discretize(&[1.0, 2.0], &cuts).unwrap();
        assert_eq!(h.bins(), &[0.0, 0.5, 0.5]);
        assert_eq!(h.edges().unwrap(), &[1.0, 2.0]);
    }

    #[test]
    fn round_trip_on_uniform_data_is_near_uniform() {
        // Simulation: an evenly spread sample discretized with estimated cuts.
        let s: Vec<f64> = (0..400).map(|i| ((i * 7919) % 400) as f64 / 400.0).collect();
        for bins in [2usize, 4, 8] {
            let cuts = estimate_intervals(&s, bins, DEFAULT_PROPOSALS).unwrap();
            let h = discretize(&s, &cuts).unwrap();
            assert!(entropy(&h) >= (bins as f64).log2() - 0.1, "bins {bins}: {}", entropy(&h));
        }
    }
}
