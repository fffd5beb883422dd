//! Plug-in information measures over discrete distributions, and adaptive
//! discretization of continuous samples.
//!
//! All quantities are in bits and use the maximum-likelihood (plug-in)
//! estimator with the convention `0 * log 0 = 0`.

mod halton;
mod intervals;
mod joint;

pub use halton::{halton, HaltonSequence, PRIMES};
pub use intervals::{discretize, estimate_intervals, CutPoints, DEFAULT_PROPOSALS};
pub use joint::JointTable;

use crate::error::{Error, Result};
use crate::histogram::Histogram;

/// Shannon entropy of a slice of probabilities, in bits.
pub(crate) fn entropy_of(masses: &[f64]) -> f64 {
    let h: f64 = masses
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    // Rounding can leave a point mass at -0.0 or a hair below zero.
    h.max(0.0)
}

/// Shannon entropy of a histogram in bits.
pub fn entropy(h: &Histogram) -> f64 {
    entropy_of(h.bins())
}

/// Bivariate mutual information `H(x) + H(y) - H(x, y)` of a 2-D joint.
pub fn mutual_information(j: &JointTable) -> Result<f64> {
    if j.dims().len() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "mutual information needs a 2-D joint, got {} axes",
            j.dims().len()
        )));
    }
    let hx = j.entropy_over(&[0]);
    let hy = j.entropy_over(&[1]);
    let hxy = j.entropy_over(&[0, 1]);
    Ok(hx + hy - hxy)
}

/// Multi-information between inputs `x_1..x_n` (all axes but the last) and
/// the target `y` (the last axis).
///
/// Inclusion-exclusion over every nonempty subset `I` of the inputs of the
/// information each subset carries about the target:
///
/// `MI = sum_k (-1)^(k+1) sum_{|I| = k} [H(X_I) - H(X_I | y)]`
///
/// Unlike bivariate mutual information the result is signed. Synergistic
/// inputs (for example `y = x_1 XOR x_2`) drive it negative.
pub fn multi_information(j: &JointTable) -> Result<f64> {
    let axes = j.dims().len();
    if axes < 3 {
        return Err(Error::InvalidArgument(format!(
            "multi-information needs at least 2 inputs plus a target, got {axes} axes"
        )));
    }
    let n = axes - 1;
    let y = n;
    let hy = j.entropy_over(&[y]);
    let mut total = 0.0;
    for subset in 1u64..(1u64 << n) {
        let mut members: Vec<usize> = (0..n).filter(|i| subset & (1 << i) != 0).collect();
        let sign = if members.len() % 2 == 1 { 1.0 } else { -1.0 };
        let hx = j.entropy_over(&members);
        members.push(y);
        let hxy = j.entropy_over(&members);
        // H(X_I) - H(X_I | y) = H(X_I) + H(y) - H(X_I, y)
        total += sign * (hx + hy - hxy);
    }
    Ok(total)
}

/// Closed-form two-input multi-information written directly in entropies:
///
/// `H(x1) + H(x2) + H(y) - H(x1,y) - H(x2,y) - H(x1,x2) + H(x1,x2,y)`
///
/// This is an independent route to [`multi_information`] for `n = 2`.
pub fn multi_information_pair(j: &JointTable) -> Result<f64> {
    if j.dims().len() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "pairwise form needs a 3-D joint, got {} axes",
            j.dims().len()
        )));
    }
    let h = |axes: &[usize]| j.entropy_over(axes);
    Ok(h(&[0]) + h(&[1]) + h(&[2]) - h(&[0, 2]) - h(&[1, 2]) - h(&[0, 1]) + h(&[0, 1, 2]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&Histogram::uniform(4).unwrap()), 2.0);
        assert_eq!(entropy(&Histogram::point_mass(5, 2).unwrap()), 0.0);
        let h = Histogram::new(vec![0.5, 0.25, 0.25]).unwrap();
        assert!((entropy(&h) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn mi_independent_and_correlated() {
        let px = [0.3, 0.7];
        let py = [0.6, 0.4];
        let mass: Vec<f64> = px.iter().flat_map(|a| py.iter().map(move |b| a * b)).collect();
        let j = JointTable::new(vec![2, 2], mass).unwrap();
        assert!(mutual_information(&j).unwrap().abs() < 1e-12);

        let j = JointTable::new(vec![2, 2], vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!((mutual_information(&j).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mi_of_variable_with_itself_is_entropy() {
        let p = [0.1, 0.2, 0.3, 0.4];
        let mut mass = vec![0.0; 16];
        for (i, v) in p.iter().enumerate() {
            mass[i * 4 + i] = *v;
        }
        let j = JointTable::new(vec![4, 4], mass).unwrap();
        let hx = entropy(&Histogram::new(p.to_vec()).unwrap());
        assert!((mutual_information(&j).unwrap() - hx).abs() < 1e-12);
    }

    #[test]
    fn mi_rejects_wrong_rank() {
        let j = JointTable::new(vec![2, 2, 2], vec![0.125; 8]).unwrap();
        assert!(mutual_information(&j).is_err());
        let j = JointTable::new(vec![2, 2], vec![0.25; 4]).unwrap();
        assert!(multi_information(&j).is_err());
    }

    #[test]
    fn xor_multi_information_by_enumeration() {
        // Oracle: enumerate the 8 cells of (x1, x2, y = x1 ^ x2) and compute
        // I(x1;y) + I(x2;y) - I(x1,x2;y) from marginal sums by hand.
        let mut mass = vec![0.0; 8];
        for x1 in 0..2 {
            for x2 in 0..2 {
                let y = x1 ^ x2;
                mass[(x1 * 2 + x2) * 2 + y] = 0.25;
            }
        }
        // Each single input is independent of y: I = 0. The pair determines
        // y: I = H(y) = 1 bit. Oracle value: 0 + 0 - 1 = -1.
        let oracle = -1.0;
        let j = JointTable::new(vec![2, 2, 2], mass).unwrap();
        assert!((multi_information(&j).unwrap() - oracle).abs() < 1e-12);
        assert!((multi_information_pair(&j).unwrap() - oracle).abs() < 1e-12);
    }
}
