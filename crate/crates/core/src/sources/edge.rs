//! Local edge density: pooled Sobel gradient magnitudes inside object masks.

use super::raster::RasterView;
use crate::error::{Error, Result};
use crate::histogram::Histogram;

pub const DEFAULT_EDGE_BINS: usize = 16;

/// Largest Sobel magnitude reachable on 8-bit intensities.
pub const MAX_MAGNITUDE: f64 = 4.0 * 255.0 * std::f64::consts::SQRT_2;

pub fn luma(rgb: [u8; 3]) -> f64 {
    0.299 * rgb[0] as f64 + 0.587 * rgb[1] as f64 + 0.114 * rgb[2] as f64
}

/// Sobel magnitude at every pixel of every mask, in mask order.
///
/// Neighbours beyond the image border replicate the nearest edge pixel;
/// neighbours outside the mask take the centre pixel's intensity, so the
/// mask boundary itself produces no response.
pub fn masked_sobel_magnitudes(view: &RasterView) -> Vec<f64> {
    let (w, h) = (view.width(), view.height());
    let gray: Vec<f64> = view.pixels().iter().map(|&p| luma(p)).collect();
    let mut out = Vec::new();
    for mask in view.masks() {
        for i in mask.indices() {
            let (x, y) = ((i % w) as isize, (i / w) as isize);
            let centre = gray[i];
            let at = |dx: isize, dy: isize| {
                let nx = (x + dx).clamp(0, w as isize - 1) as usize;
                let ny = (y + dy).clamp(0, h as isize - 1) as usize;
                if mask.contains(nx, ny) {
                    gray[ny * w + nx]
                } else {
                    centre
                }
            };
            let gx = (at(1, -1) + 2.0 * at(1, 0) + at(1, 1)) - (at(-1, -1) + 2.0 * at(-1, 0) + at(-1, 1));
            let gy = (at(-1, 1) + 2.0 * at(0, 1) + at(1, 1)) - (at(-1, -1) + 2.0 * at(0, -1) + at(1, -1));
            out.push(gx.hypot(gy));
        }
    }
    out
}

/// Histogram of pooled Sobel magnitudes over `[0, MAX_MAGNITUDE]` in `bins`
/// equal intervals. Every masked pixel counts once, whichever mask it is in.
pub fn extract_local_edge_density(view: &RasterView, bins: usize) -> Result<Histogram> {
    if view.masks().is_empty() {
        return Err(Error::NoObjects);
    }
    if bins < 1 {
        return Err(Error::DegenerateBinning("zero edge bins".into()));
    }
    let mags = masked_sobel_magnitudes(view);
    if mags.is_empty() {
        return Err(Error::NoObjects);
    }
    let width = MAX_MAGNITUDE / bins as f64;
    let mut counts = vec![0.0; bins];
    for m in mags {
        counts[((m / width) as usize).min(bins - 1)] += 1.0;
    }
    Histogram::from_counts(&counts)
}
