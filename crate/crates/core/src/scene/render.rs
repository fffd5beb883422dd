//! Procedural flat-shaded raster renderer.

use std::f64::consts::PI;

use super::camera::{CameraState, NEAREST_DISTANCE};
use super::spec::{Scene, FLOOR_COLOR};
use crate::error::Result;
use crate::sources::{Mask, RasterView};

pub const RASTER_SIZE: usize = 128;

const PIXELS_PER_UNIT: f64 = 12.0;
const BASE_RADIUS: f64 = 14.0;
const STRIPE_PERIOD: usize = 2;
const STRIPE_DARKEN: f64 = 0.3;
const WALL_COLOR: [u8; 3] = [110, 110, 110];
const WALL_HALF_WIDTH: usize = 6;

fn inside_polygon(dx: f64, dy: f64, sides: u8, radius: f64) -> bool {
    let d = dx.hypot(dy);
    if d > radius {
        return false;
    }
    let sector = 2.0 * PI / sides as f64;
    // First vertex points straight up.
    let angle = (dx.atan2(-dy)).rem_euclid(sector);
    d <= radius * (sector / 2.0).cos() / (angle - sector / 2.0).cos()
}

fn shade(c: [u8; 3], factor: f64) -> [u8; 3] {
    c.map(|v| (v as f64 * factor).round().clamp(0.0, 255.0) as u8)
}

/// Renders the scene from a camera state. Objects are drawn far to near, so a
/// nearer object owns the pixels it shares with a farther one.
pub fn render_view(scene: &Scene, state: CameraState) -> Result<RasterView> {
    let n = RASTER_SIZE;
    let scale = NEAREST_DISTANCE / state.distance();
    let elevated = state.viewpoint.is_elevated();
    let mut pixels = vec![FLOOR_COLOR; n * n];
    let mut owner: Vec<Option<usize>> = vec![None; n * n];

    if scene.spec.occluder && !matches!(state.viewpoint, super::camera::Viewpoint::Back | super::camera::Viewpoint::BackUp) {
        let c = n / 2;
        for y in 0..n {
            for x in c - WALL_HALF_WIDTH..c + WALL_HALF_WIDTH {
                pixels[y * n + x] = WALL_COLOR;
            }
        }
    }

    let layout = scene.layout(state.viewpoint);
    let mut order: Vec<usize> = (0..layout.len()).collect();
    order.sort_by(|&a, &b| layout[a].nearness.total_cmp(&layout[b].nearness).then(a.cmp(&b)));
    let shading = 1.0 - 0.06 * state.z_level as f64;

    for k in order {
        let obj = &scene.spec.objects[k];
        let lay = layout[k];
        if lay.visibility <= 0.0 {
            continue;
        }
        let r = BASE_RADIUS * scale * (1.0 + 0.08 * lay.nearness);
        let cx = n as f64 / 2.0 + lay.lateral * PIXELS_PER_UNIT * scale;
        let depth_shift = if elevated { 14.0 } else { 5.0 };
        let cy = n as f64 / 2.0 + 8.0 + lay.nearness * depth_shift * scale;
        let right_edge = cx - r + lay.visibility * 2.0 * r;
        let body = shade(obj.color, shading);
        let stripe = shade(obj.color, shading * STRIPE_DARKEN);
        // Feature bands fill the top of the object; one plain band below.
        let bands = (obj.features.len() + 1) as f64;

        let y0 = (cy - r).floor().max(0.0) as usize;
        let y1 = ((cy + r).ceil() as usize).min(n - 1);
        let x0 = (cx - r).floor().max(0.0) as usize;
        let x1 = ((cx + r).ceil() as usize).min(n - 1);
        for y in y0..=y1 {
            for x in x0..=x1 {
                let (px, py) = (x as f64 + 0.5, y as f64 + 0.5);
                if px >= right_edge || !inside_polygon(px - cx, py - cy, obj.sides, r) {
                    continue;
                }
                let band = ((py - (cy - r)) / (2.0 * r) * bands).floor() as usize;
                let striped = obj.features.get(band).is_some_and(|f| {
                    let fv = f.visibility[state.viewpoint.index()].min(lay.visibility);
                    px < cx - r + fv * 2.0 * r && (x / STRIPE_PERIOD) % 2 == 0
                });
                pixels[y * n + x] = if striped { stripe } else { body };
                owner[y * n + x] = Some(k);
            }
        }
    }

    let masks = (0..scene.spec.objects.len())
        .map(|k| Mask::new(n, n, owner.iter().map(|o| *o == Some(k)).collect()))
        .collect::<Result<Vec<_>>>()?;
    RasterView::new(n, n, pixels, masks)
}
