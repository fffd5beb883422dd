use serde::{Deserialize, Serialize};

use super::state::Separator;
use crate::error::{Error, Result};
use crate::histogram::Histogram;
use crate::info::JointTable;

/// Bound on the PMI coordinate of a unit feature; bins never seen with
/// `Y = 1` would otherwise sit at minus infinity.
pub const PMI_CLAMP: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Up,
    Down,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitSample {
    /// `(p(bin), p(Y = 1 | bin), PMI(bin; Y = 1))`.
    pub feature: Vec<f64>,
    pub orientation: Orientation,
}

/// Labels every bin with nonzero joint mass Up when `p(bin, Y=1)` exceeds
/// `p(bin) p(Y=1)` and Down otherwise. `joint_with_y` has shape
/// `[source bins, 2]` with axis 1 indexing `Y = 0, 1`.
pub fn classify_units(source: &Histogram, joint_with_y: &JointTable) -> Result<Vec<UnitSample>> {
    let dims = joint_with_y.dims();
    if dims.len() != 2 || dims[1] != 2 || dims[0] != source.len() {
        return Err(Error::DimensionMismatch(format!(
            "joint {:?} against a {}-bin source",
            dims,
            source.len()
        )));
    }
    let p_bin = joint_with_y.marginal(&[0]);
    let p_y1 = joint_with_y.marginal(&[1])[1];
    let mass = joint_with_y.mass();
    let mut units = Vec::new();
    for b in 0..dims[0] {
        if p_bin[b] <= 0.0 {
            continue;
        }
        let joint = mass[b * 2 + 1];
        let independent = p_bin[b] * p_y1;
        let orientation = if joint > independent { Orientation::Up } else { Orientation::Down };
        let pmi = if joint == independent {
            0.0
        } else if joint == 0.0 {
            -PMI_CLAMP
        } else {
            (joint / independent).log2().clamp(-PMI_CLAMP, PMI_CLAMP)
        };
        units.push(UnitSample {
            feature: vec![source.bins()[b], joint / p_bin[b], pmi],
            orientation,
        });
    }
    Ok(units)
}

/// One projected-subgradient step of the hinge loss `mean(max(0, 1 -
/// y (w . x + bias)))` with `y = +1` for Up, followed by projection onto
/// `|w| <= 1`. Returns `false` (separator untouched) when `alpha` is false or
/// either orientation is missing.
pub fn max_margin_step(separator: &mut Separator, units: &[UnitSample], eta: f64, alpha: bool) -> Result<bool> {
    if !alpha {
        return Ok(false);
    }
    let has = |o| units.iter().any(|u| u.orientation == o);
    if !has(Orientation::Up) || !has(Orientation::Down) {
        return Ok(false);
    }
    let dim = separator.w.len();
    if units.iter().any(|u| u.feature.len() != dim) {
        return Err(Error::DimensionMismatch("unit feature length differs from w".into()));
    }
    let m = units.len() as f64;
    let mut grad_w = vec![0.0; dim];
    let mut grad_b = 0.0;
    for u in units {
        let y = if u.orientation == Orientation::Up { 1.0 } else { -1.0 };
        let margin: f64 = u.feature.iter().zip(&separator.w).map(|(x, w)| x * w).sum::<f64>() + separator.bias;
        if y * margin < 1.0 {
            for (g, x) in grad_w.iter_mut().zip(&u.feature) {
                *g -= y * x / m;
            }
            grad_b -= y / m;
        }
    }
    for (w, g) in separator.w.iter_mut().zip(&grad_w) {
        *w -= eta * g;
    }
    separator.bias -= eta * grad_b;
    let norm = separator.norm();
    if norm > 1.0 {
        for w in &mut separator.w {
            *w /= norm;
        }
    }
    separator.refresh_gamma();
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(x: f64, o: Orientation) -> UnitSample {
        UnitSample { feature: vec![x], orientation: o }
    }

    #[test]
    fn pmi_sign_decides_orientation() {
        // p(b, y): rows are bins.
        let j = JointTable::new(vec![4, 2], vec![0.05, 0.20, 0.20, 0.05, 0.125, 0.125, 0.25, 0.0]).unwrap();
        let src = Histogram::new(vec![0.25; 4]).unwrap();
        let units = classify_units(&src, &j).unwrap();
        // p(Y=1) = 0.375. Bin 0: 0.20 > 0.25 * 0.375; bin 1: 0.05 < ...;
        // bin 2: 0.125 > 0.09375; bin 3: 0 < ...
        let o: Vec<_> = units.iter().map(|u| u.orientation).collect();
        use Orientation::*;
        assert_eq!(o, vec![Up, Down, Up, Down]);
        assert!((units[0].feature[2] - (0.20f64 / (0.25 * 0.375)).log2()).abs() < 1e-12);
        assert_eq!(units[3].feature[2], -PMI_CLAMP);
    }

    #[test]
    fn independent_joint_is_all_down() {
        let px = [0.1, 0.2, 0.3, 0.4];
        let mass: Vec<f64> = px.iter().flat_map(|&p| [p * 0.5, p * 0.5]).collect();
        let j = JointTable::new(vec![4, 2], mass).unwrap();
        let units = classify_units(&Histogram::new(px.to_vec()).unwrap(), &j).unwrap();
        assert!(units.iter().all(|u| u.orientation == Orientation::Down && u.feature[2] == 0.0));
    }

    #[test]
    fn gated_step_is_noop() {
        let mut s = Separator::zeros(1);
        let units = vec![unit(-1.0, Orientation::Down), unit(1.0, Orientation::Up)];
        assert!(!max_margin_step(&mut s, &units, 0.1, false).unwrap());
        assert_eq!(s, Separator::zeros(1));
        assert!(!max_margin_step(&mut s, &units[..1], 0.1, true).unwrap());
    }

    #[test]
    fn one_dimensional_margin_converges() {
        let mut s = Separator::zeros(1);
        let units = vec![unit(-1.0, Orientation::Down), unit(1.0, Orientation::Up)];
        for t in 1..=5000 {
            max_margin_step(&mut s, &units, 0.1 / (t as f64).sqrt(), true).unwrap();
            assert!(s.norm() <= 1.0 + 1e-12);
        }
        assert!((s.w[0] - 1.0).abs() < 1e-9, "w {}", s.w[0]);
        assert!(s.bias.abs() < 1e-2, "bias {}", s.bias);
        assert!((s.gamma - 2.0).abs() < 1e-9);
    }
}
