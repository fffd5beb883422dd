//! Colour-space conversions and colour histograms.

use serde::{Deserialize, Serialize};

use super::raster::RasterView;
use crate::error::{Error, Result};
use crate::histogram::Histogram;

/// Saturation at or below which a pixel's hue is treated as undefined.
pub const ACHROMATIC_SATURATION: f64 = 0.05;

/// Range covered by the binned chromatic axes of CIELAB.
pub const AB_RANGE: (f64, f64) = (-128.0, 128.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColorSpace {
    /// Joint histogram over the `a` and `b` axes of CIELAB.
    LabAb,
    /// Hue histogram in HSV, with one extra bin for achromatic pixels.
    HsvHue,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lab {
    pub l: f64,
    pub a: f64,
    pub b: f64,
}

fn srgb_to_linear(c: u8) -> f64 {
    let c = c as f64 / 255.0;
    if c <= 0.04045 {
        c / 12.92
    } else {
        ((c + 0.055) / 1.055).powf(2.4)
    }
}

/// sRGB (D65) to CIELAB.
pub fn rgb_to_lab(rgb: [u8; 3]) -> Lab {
    let [r, g, b] = rgb.map(srgb_to_linear);
    let x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
    let y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
    let z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;
    const WHITE: [f64; 3] = [0.95047, 1.0, 1.08883];
    let f = |t: f64| {
        const DELTA: f64 = 6.0 / 29.0;
        if t > DELTA * DELTA * DELTA {
            t.cbrt()
        } else {
            t / (3.0 * DELTA * DELTA) + 4.0 / 29.0
        }
    };
    let (fx, fy, fz) = (f(x / WHITE[0]), f(y / WHITE[1]), f(z / WHITE[2]));
    Lab { l: 116.0 * fy - 16.0, a: 500.0 * (fx - fy), b: 200.0 * (fy - fz) }
}

/// Hue in degrees `[0, 360)`, or `None` when saturation is at or below
/// [`ACHROMATIC_SATURATION`].
///
/// Computed from integer channel differences so that scaling all channels by
/// a common factor leaves the result bit-for-bit unchanged.
pub fn rgb_to_hue(rgb: [u8; 3]) -> Option<f64> {
    let [r, g, b] = rgb.map(i32::from);
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    if max == 0 {
        return None;
    }
    let d = max - min;
    let saturation = d as f64 / max as f64;
    if saturation <= ACHROMATIC_SATURATION {
        return None;
    }
    let h = if max == r {
        60.0 * ((g - b) as f64 / d as f64)
    } else if max == g {
        60.0 * ((b - r) as f64 / d as f64 + 2.0)
    } else {
        60.0 * ((r - g) as f64 / d as f64 + 4.0)
    };
    Some(if h < 0.0 { h + 360.0 } else { h })
}

fn axis_bin(value: f64, lo: f64, hi: f64, bins: usize) -> usize {
    let t = (value - lo) / (hi - lo);
    ((t * bins as f64).floor().max(0.0) as usize).min(bins - 1)
}

/// Bin of a LAB colour on the flattened `a x b` grid.
pub fn lab_ab_bin(lab: Lab, bins_per_axis: usize) -> usize {
    let a = axis_bin(lab.a, AB_RANGE.0, AB_RANGE.1, bins_per_axis);
    let b = axis_bin(lab.b, AB_RANGE.0, AB_RANGE.1, bins_per_axis);
    a * bins_per_axis + b
}

pub fn lab_l_bin(lab: Lab, bins: usize) -> usize {
    axis_bin(lab.l, 0.0, 100.0, bins)
}

/// Hue bin in `0..bins`, or `bins` for the achromatic bin.
pub fn hue_bin(rgb: [u8; 3], bins: usize) -> usize {
    match rgb_to_hue(rgb) {
        Some(h) => axis_bin(h, 0.0, 360.0, bins),
        None => bins,
    }
}

fn check_bins(bins_per_axis: usize) -> Result<()> {
    if bins_per_axis < 2 {
        return Err(Error::DegenerateBinning(format!("{bins_per_axis} bins per axis")));
    }
    Ok(())
}

/// Whole-image colour histogram.
///
/// `LabAb` yields `bins_per_axis^2` bins (row index `a`, column index `b`);
/// `HsvHue` yields `bins_per_axis + 1` bins, the last one achromatic.
pub fn extract_global_color_hist(view: &RasterView, space: ColorSpace, bins_per_axis: usize) -> Result<Histogram> {
    check_bins(bins_per_axis)?;
    if view.pixels().is_empty() {
        return Err(Error::EmptyInput);
    }
    let counts = match space {
        ColorSpace::LabAb => {
            let mut c = vec![0.0; bins_per_axis * bins_per_axis];
            for &p in view.pixels() {
                c[lab_ab_bin(rgb_to_lab(p), bins_per_axis)] += 1.0;
            }
            c
        }
        ColorSpace::HsvHue => {
            let mut c = vec![0.0; bins_per_axis + 1];
            for &p in view.pixels() {
                c[hue_bin(p, bins_per_axis)] += 1.0;
            }
            c
        }
    };
    Histogram::from_counts(&counts)
}

/// Per-object LAB histograms and the objects skipped for having no pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectHists {
    /// `(mask index, histogram)` for every non-empty mask.
    pub hists: Vec<(usize, Histogram)>,
    /// Mask indices skipped because they cover zero pixels.
    pub skipped: Vec<usize>,
}

/// One histogram per object mask: the joint `(a, b)` histogram concatenated
/// with a 1-D `L` histogram, renormalized so each half carries mass 1/2.
pub fn extract_object_level_hists(view: &RasterView, bins_per_axis: usize) -> Result<ObjectHists> {
    check_bins(bins_per_axis)?;
    if view.masks().is_empty() {
        return Err(Error::NoObjects);
    }
    let mut hists = Vec::new();
    let mut skipped = Vec::new();
    for (k, mask) in view.masks().iter().enumerate() {
        if mask.pixel_count() == 0 {
            skipped.push(k);
            continue;
        }
        let mut ab = vec![0.0; bins_per_axis * bins_per_axis];
        let mut l = vec![0.0; bins_per_axis];
        for i in mask.indices() {
            let lab = rgb_to_lab(view.pixels()[i]);
            ab[lab_ab_bin(lab, bins_per_axis)] += 1.0;
            l[lab_l_bin(lab, bins_per_axis)] += 1.0;
        }
        let h = Histogram::concat(&[Histogram::from_counts(&ab)?, Histogram::from_counts(&l)?])?;
        hists.push((k, h));
    }
    Ok(ObjectHists { hists, skipped })
}
