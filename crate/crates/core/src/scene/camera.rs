//! Discrete camera: six viewpoints by four zoom levels.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const N_VIEWPOINTS: usize = 6;
pub const N_Z_LEVELS: usize = 4;
pub const N_STATES: usize = N_VIEWPOINTS * N_Z_LEVELS;

/// Camera distance at zoom level 0; each level adds `ZOOM_STEP`.
pub const NEAREST_DISTANCE: f64 = 10.0;
pub const ZOOM_STEP: f64 = 5.0;

/// Viewpoints in cycle order; adjacent entries (cyclically) are neighbours in
/// the controller's viewpoint graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Viewpoint {
    Front,
    FrontUp,
    Left,
    BackUp,
    Back,
    Right,
}

impl Viewpoint {
    pub const ALL: [Viewpoint; N_VIEWPOINTS] = [
        Viewpoint::Front,
        Viewpoint::FrontUp,
        Viewpoint::Left,
        Viewpoint::BackUp,
        Viewpoint::Back,
        Viewpoint::Right,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn is_elevated(self) -> bool {
        matches!(self, Viewpoint::FrontUp | Viewpoint::BackUp)
    }

    /// Horizontal angle of the camera around the scene, in degrees.
    pub fn azimuth(self) -> f64 {
        match self {
            Viewpoint::Front | Viewpoint::FrontUp => 0.0,
            Viewpoint::Right => 90.0,
            Viewpoint::Back | Viewpoint::BackUp => 180.0,
            Viewpoint::Left => 270.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Viewpoint::Front => "front",
            Viewpoint::FrontUp => "front_up45",
            Viewpoint::Left => "left",
            Viewpoint::BackUp => "back_up45",
            Viewpoint::Back => "back",
            Viewpoint::Right => "right",
        }
    }
}

/// Camera pose. `z_level` 0 is the nearest distance, 3 the farthest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CameraState {
    pub viewpoint: Viewpoint,
    pub z_level: u8,
}

impl CameraState {
    pub fn new(viewpoint: Viewpoint, z_level: u8) -> Result<Self> {
        if z_level as usize >= N_Z_LEVELS {
            return Err(Error::InvalidArgument(format!("z level {z_level}")));
        }
        Ok(Self { viewpoint, z_level })
    }

    pub fn distance(self) -> f64 {
        NEAREST_DISTANCE + ZOOM_STEP * self.z_level as f64
    }

    /// Node index used by the controller: `z * 6 + viewpoint`.
    pub fn index(self) -> usize {
        self.z_level as usize * N_VIEWPOINTS + self.viewpoint.index()
    }

    pub fn from_index(i: usize) -> Option<Self> {
        if i >= N_STATES {
            return None;
        }
        Some(Self { viewpoint: Viewpoint::ALL[i % N_VIEWPOINTS], z_level: (i / N_VIEWPOINTS) as u8 })
    }

    pub fn all() -> impl Iterator<Item = CameraState> {
        (0..N_STATES).filter_map(Self::from_index)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CameraAction {
    /// `+1` is +90 degrees (front to right), `-1` is -90.
    RotateX(i8),
    /// `+1` is +45 degrees (up), `-1` is -45.
    RotateY(i8),
    /// `-1` moves 5 units closer, `+1` moves 5 units away.
    Zoom(i8),
}

impl CameraAction {
    pub const ALL: [CameraAction; 6] = [
        CameraAction::RotateX(1),
        CameraAction::RotateX(-1),
        CameraAction::RotateY(1),
        CameraAction::RotateY(-1),
        CameraAction::Zoom(-1),
        CameraAction::Zoom(1),
    ];

    pub fn label(self) -> String {
        match self {
            CameraAction::RotateX(s) => format!("rotate_x({:+})", 90 * s as i32),
            CameraAction::RotateY(s) => format!("rotate_y({:+})", 45 * s as i32),
            CameraAction::Zoom(s) => format!("zoom({:+})", 5 * s as i32),
        }
    }
}

const LEVEL_CYCLE: [Viewpoint; 4] = [Viewpoint::Front, Viewpoint::Right, Viewpoint::Back, Viewpoint::Left];

pub fn apply_action(state: CameraState, action: CameraAction) -> Result<CameraState> {
    let vp = state.viewpoint;
    match action {
        CameraAction::RotateX(s) if s == 1 || s == -1 => {
            let pos = LEVEL_CYCLE
                .iter()
                .position(|&v| v == vp)
                .ok_or_else(|| Error::IllegalAction("x-rotation requires a level viewpoint".into()))?;
            let next = (pos as i32 + s as i32).rem_euclid(4) as usize;
            Ok(CameraState { viewpoint: LEVEL_CYCLE[next], ..state })
        }
        CameraAction::RotateY(s) if s == 1 || s == -1 => {
            let next = match (vp, s) {
                (Viewpoint::Left | Viewpoint::Right, _) => {
                    return Err(Error::IllegalAction("y-rotation constrained to front or back".into()))
                }
                (Viewpoint::Front, 1) => Viewpoint::FrontUp,
                (Viewpoint::Back, 1) => Viewpoint::BackUp,
                (Viewpoint::FrontUp, -1) => Viewpoint::Front,
                (Viewpoint::BackUp, -1) => Viewpoint::Back,
                _ => return Err(Error::IllegalAction("y-rotation bound".into())),
            };
            Ok(CameraState { viewpoint: next, ..state })
        }
        CameraAction::Zoom(s) if s == 1 || s == -1 => {
            let z = state.z_level as i32 + s as i32;
            if !(0..N_Z_LEVELS as i32).contains(&z) {
                return Err(Error::IllegalAction("zoom bound".into()));
            }
            Ok(CameraState { z_level: z as u8, ..state })
        }
        other => Err(Error::IllegalAction(format!("malformed action {other:?}"))),
    }
}

/// Shortest legal action sequence from `from` to `to` (actions tried in
/// [`CameraAction::ALL`] order, so the result is deterministic).
pub fn shortest_path(from: CameraState, to: CameraState) -> Option<Vec<CameraAction>> {
    let mut prev: Vec<Option<(usize, CameraAction)>> = vec![None; N_STATES];
    let mut seen = [false; N_STATES];
    let mut queue = VecDeque::from([from.index()]);
    seen[from.index()] = true;
    while let Some(i) = queue.pop_front() {
        if i == to.index() {
            let mut path = Vec::new();
            let mut cur = i;
            while let Some((p, a)) = prev[cur] {
                path.push(a);
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        let s = CameraState::from_index(i)?;
        for a in CameraAction::ALL {
            if let Ok(n) = apply_action(s, a) {
                if !seen[n.index()] {
                    seen[n.index()] = true;
                    prev[n.index()] = Some((i, a));
                    queue.push_back(n.index());
                }
            }
        }
    }
    None
}
