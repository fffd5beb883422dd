//! Generators for the synthetic scene collections.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::camera::{Viewpoint, N_VIEWPOINTS};
use super::spec::{Complexity, FeatureRef, FeatureSpec, ObjectSpec, SceneSpec};

const PALETTE: [(&str, [u8; 3]); 7] = [
    ("red", [200, 40, 40]),
    ("green", [40, 160, 60]),
    ("blue", [40, 70, 200]),
    ("purple", [130, 50, 170]),
    ("orange", [230, 120, 30]),
    ("cyan", [40, 170, 190]),
    ("brown", [120, 80, 40]),
];

const SHAPES: [(&str, u8); 5] = [("triangle", 3), ("square", 4), ("pentagon", 5), ("hexagon", 6), ("octagon", 8)];

const LEVELS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

fn vis_from(pairs: &[(Viewpoint, f64)], rest: f64) -> [f64; N_VIEWPOINTS] {
    let mut v = [rest; N_VIEWPOINTS];
    for &(vp, x) in pairs {
        v[vp.index()] = x;
    }
    v
}

fn random_levels(rng: &mut ChaCha8Rng) -> [f64; N_VIEWPOINTS] {
    std::array::from_fn(|_| LEVELS[rng.random_range(0..LEVELS.len())])
}

fn object(colour: usize, shape: usize, position: u8, feature: [f64; N_VIEWPOINTS]) -> ObjectSpec {
    ObjectSpec {
        sides: SHAPES[shape].1,
        color: PALETTE[colour].1,
        position,
        visibility: [1.0; N_VIEWPOINTS],
        features: vec![FeatureSpec { name: "stripes".into(), visibility: feature }],
    }
}

fn describe(objects: &[(usize, usize)], extra: &str) -> String {
    let parts: Vec<String> = objects
        .iter()
        .map(|&(c, s)| format!("a {} {}", PALETTE[c].0, SHAPES[s].0))
        .collect();
    let mut text = parts.join(" and ");
    if !extra.is_empty() {
        text.push(' ');
        text.push_str(extra);
    }
    text
}

/// 48 scenes: 24 uniform (two objects sharing colour and shape) and 24
/// complex (three distinct objects). The key feature is striping on object
/// 0 whose visibility varies randomly by viewpoint; the other objects are
/// plain.
pub fn diagnostic_set(seed: u64) -> Vec<SceneSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..48)
        .map(|i| {
            let uniform = i < 24;
            let count = if uniform { 2 } else { 3 };
            let mut positions: Vec<u8> = (0..6).collect();
            positions.shuffle(&mut rng);
            let mut colours: Vec<usize> = (0..PALETTE.len()).collect();
            colours.shuffle(&mut rng);
            let mut shapes: Vec<usize> = (0..SHAPES.len()).collect();
            shapes.shuffle(&mut rng);
            let picks: Vec<(usize, usize)> = (0..count)
                .map(|k| if uniform { (colours[0], shapes[0]) } else { (colours[k], shapes[k]) })
                .collect();
            let objects = picks
                .iter()
                .enumerate()
                .map(|(k, &(c, s))| {
                    let feature = if k == 0 { random_levels(&mut rng) } else { [0.0; N_VIEWPOINTS] };
                    object(c, s, positions[k], feature)
                })
                .collect();
            SceneSpec {
                id: format!("diag-{i:03}"),
                objects,
                occluder: false,
                complexity: if uniform { Complexity::Uniform } else { Complexity::Complex },
                description: describe(&picks, "with striped markings"),
                seed: seed.wrapping_mul(1000).wrapping_add(i as u64),
                matches: rng.random_bool(0.5),
                key_feature: FeatureRef { object: 0, feature: 0 },
            }
        })
        .collect()
}

/// Scenes with two objects on opposite sides of a partition; the key
/// feature is on object 1, which only the back and back_up45 views see.
pub fn occlusion_set(n: usize, seed: u64) -> Vec<SceneSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let mut colours: Vec<usize> = (0..PALETTE.len()).collect();
            colours.shuffle(&mut rng);
            let picks = [(colours[0], rng.random_range(0..SHAPES.len())), (colours[1], rng.random_range(0..SHAPES.len()))];
            let front = random_levels(&mut rng);
            let hidden = vis_from(&[(Viewpoint::Back, 1.0), (Viewpoint::BackUp, 1.0)], 0.0);
            let objects = vec![
                object(picks[0].0, picks[0].1, 0, front),
                object(picks[1].0, picks[1].1, 3, hidden),
            ];
            SceneSpec {
                id: format!("occl-{i:03}"),
                objects,
                occluder: true,
                complexity: Complexity::Complex,
                description: describe(&picks, "on opposite sides of a partition"),
                seed: seed.wrapping_mul(1000).wrapping_add(i as u64),
                matches: rng.random_bool(0.5),
                key_feature: FeatureRef { object: 1, feature: 0 },
            }
        })
        .collect()
}

/// Scenes whose key feature faces the right and back of the scene, with
/// distractor objects striped in random directions.
pub fn feature_id_set(n: usize, seed: u64) -> Vec<SceneSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let count = rng.random_range(2..=3);
            let mut positions: Vec<u8> = (0..6).collect();
            positions.shuffle(&mut rng);
            let mut colours: Vec<usize> = (0..PALETTE.len()).collect();
            colours.shuffle(&mut rng);
            let picks: Vec<(usize, usize)> = (0..count).map(|k| (colours[k], rng.random_range(0..SHAPES.len()))).collect();
            let key = vis_from(
                &[(Viewpoint::Right, 1.0), (Viewpoint::Back, 0.75), (Viewpoint::BackUp, 0.5), (Viewpoint::Front, 0.25)],
                0.0,
            );
            let objects = picks
                .iter()
                .enumerate()
                .map(|(k, &(c, s))| {
                    let feature = if k == 0 { key } else { random_levels(&mut rng) };
                    object(c, s, positions[k], feature)
                })
                .collect();
            SceneSpec {
                id: format!("feat-{i:03}"),
                objects,
                occluder: false,
                complexity: if count == 2 { Complexity::Uniform } else { Complexity::Complex },
                description: describe(&picks, "with a striped feature"),
                seed: seed.wrapping_mul(1000).wrapping_add(i as u64),
                matches: rng.random_bool(0.5),
                key_feature: FeatureRef { object: 0, feature: 0 },
            }
        })
        .collect()
}
