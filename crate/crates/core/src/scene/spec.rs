//! Scene specifications and their materialized per-viewpoint layouts.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::camera::{Viewpoint, N_VIEWPOINTS};
use crate::error::{Error, Result};

pub const N_POSITION_GROUPS: u8 = 6;
pub const FLOOR_COLOR: [u8; 3] = [230, 230, 179];

/// Radius of the circle the position groups sit on, in world units.
const GROUP_RADIUS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Complexity {
    Uniform,
    Complex,
}

/// A striped marking on an object, visible from each viewpoint (in
/// [`Viewpoint::ALL`] order) over the given fraction of the object's width.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub name: String,
    pub visibility: [f64; N_VIEWPOINTS],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectSpec {
    pub sides: u8,
    pub color: [u8; 3],
    /// Position group `0..6`, evenly spaced around the scene centre; group 0
    /// faces the front camera.
    pub position: u8,
    /// Visible fraction of the object's width from each viewpoint.
    pub visibility: [f64; N_VIEWPOINTS],
    pub features: Vec<FeatureSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureRef {
    pub object: usize,
    pub feature: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneSpec {
    pub id: String,
    pub objects: Vec<ObjectSpec>,
    /// A partition hiding object 1 from every viewpoint except back and
    /// back_up45.
    pub occluder: bool,
    pub complexity: Complexity,
    pub description: String,
    pub seed: u64,
    /// Ground truth for the description-match question.
    pub matches: bool,
    /// The feature whose visibility drives the oracle.
    pub key_feature: FeatureRef,
}

impl SceneSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidScene(format!("{}: {m}", self.id)));
        if self.objects.is_empty() {
            return bad("no objects".into());
        }
        if self.occluder && self.objects.len() < 2 {
            return bad("an occluder needs an object to hide".into());
        }
        let fraction_ok = |v: &[f64; N_VIEWPOINTS]| v.iter().all(|x| (0.0..=1.0).contains(x));
        for (k, o) in self.objects.iter().enumerate() {
            if !(3..=12).contains(&o.sides) {
                return bad(format!("object {k} has {} sides", o.sides));
            }
            if o.color == FLOOR_COLOR {
                return bad(format!("object {k} has the floor colour"));
            }
            if o.position >= N_POSITION_GROUPS {
                return bad(format!("object {k} in position group {}", o.position));
            }
            if !fraction_ok(&o.visibility) || !o.features.iter().all(|f| fraction_ok(&f.visibility)) {
                return bad(format!("object {k} has a visibility outside [0, 1]"));
            }
        }
        let key = self.key_feature;
        if self.objects.get(key.object).and_then(|o| o.features.get(key.feature)).is_none() {
            return bad("key feature does not exist".into());
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let spec: Self = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }
}

/// Where an object sits as seen from one viewpoint, before zoom scaling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectLayout {
    /// Offset from the image centre along the image x axis, in world units.
    pub lateral: f64,
    /// `1` when the object faces the camera, `-1` on the far side.
    pub nearness: f64,
    /// Visible fraction of the width after occlusion.
    pub visibility: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub spec: SceneSpec,
    /// `layouts[viewpoint][object]`.
    pub layouts: Vec<Vec<ObjectLayout>>,
}

impl Scene {
    pub fn layout(&self, viewpoint: Viewpoint) -> &[ObjectLayout] {
        &self.layouts[viewpoint.index()]
    }

    /// Visible fraction of an object from a viewpoint, after occlusion.
    pub fn object_visibility(&self, object: usize, viewpoint: Viewpoint) -> f64 {
        self.layouts[viewpoint.index()][object].visibility
    }

    /// Visible fraction of a feature: its own visibility capped by its
    /// object's.
    pub fn feature_visibility(&self, feature: FeatureRef, viewpoint: Viewpoint) -> f64 {
        let f = &self.spec.objects[feature.object].features[feature.feature];
        f.visibility[viewpoint.index()].min(self.object_visibility(feature.object, viewpoint))
    }
}

pub fn occluded(spec: &SceneSpec, object: usize, viewpoint: Viewpoint) -> bool {
    spec.occluder && object == 1 && !matches!(viewpoint, Viewpoint::Back | Viewpoint::BackUp)
}

pub fn generate_scene(spec: &SceneSpec) -> Result<Scene> {
    spec.validate()?;
    let layouts = Viewpoint::ALL
        .iter()
        .map(|&vp| {
            spec.objects
                .iter()
                .enumerate()
                .map(|(k, o)| {
                    let phi = (o.position as f64 * 60.0 - vp.azimuth()).to_radians();
                    let visibility = if occluded(spec, k, vp) { 0.0 } else { o.visibility[vp.index()] };
                    ObjectLayout { lateral: GROUP_RADIUS * phi.sin(), nearness: phi.cos(), visibility }
                })
                .collect()
        })
        .collect();
    Ok(Scene { spec: spec.clone(), layouts })
}
