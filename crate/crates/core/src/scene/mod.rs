//! Deterministic synthetic scenes, a discrete camera, a raster renderer and
//! a noisy decision oracle.

pub mod camera;
pub mod datasets;
pub mod oracle;
pub mod render;
pub mod spec;

pub use camera::{apply_action, shortest_path, CameraAction, CameraState, Viewpoint, N_STATES, N_VIEWPOINTS, N_Z_LEVELS};
pub use datasets::{diagnostic_set, feature_id_set, occlusion_set};
pub use oracle::{ground_truth_info, oracle_respond, OracleConfig, OracleStream, Query, ZOOM_FACTORS};
pub use render::{render_view, RASTER_SIZE};
pub use spec::{generate_scene, Complexity, FeatureRef, FeatureSpec, ObjectSpec, Scene, SceneSpec, FLOOR_COLOR};

#[cfg(test)]
mod tests {
    use super::*;

    fn occlusion_scene() -> Scene {
        generate_scene(&occlusion_set(1, 3)[0]).unwrap()
    }

    #[test]
    fn occluded_object_has_no_pixels() {
        let scene = occlusion_scene();
        let mut hidden = 0;
        for vp in Viewpoint::ALL {
            let view = render_view(&scene, CameraState::new(vp, 0).unwrap()).unwrap();
            let px = view.masks()[1].pixel_count();
            if scene.object_visibility(1, vp) == 0.0 {
                hidden += 1;
                assert_eq!(px, 0, "{vp:?}");
            } else {
                assert!(px > 0, "{vp:?}");
            }
        }
        assert_eq!(hidden, 4);
    }

    #[test]
    fn zooming_in_grows_objects() {
        let scene = generate_scene(&diagnostic_set(1)[0]).unwrap();
        for vp in Viewpoint::ALL {
            let area = |z| {
                let v = render_view(&scene, CameraState::new(vp, z).unwrap()).unwrap();
                v.masks().iter().map(|m| m.pixel_count()).sum::<usize>()
            };
            for z in 1..4u8 {
                assert!(area(z - 1) > area(z), "{vp:?} z{z}");
            }
        }
    }

    #[test]
    fn generation_and_rendering_are_deterministic() {
        let a = generate_scene(&diagnostic_set(5)[7]).unwrap();
        let b = generate_scene(&diagnostic_set(5)[7]).unwrap();
        assert_eq!(a, b);
        let s = CameraState::new(Viewpoint::Left, 2).unwrap();
        assert_eq!(render_view(&a, s).unwrap(), render_view(&b, s).unwrap());
    }

    #[test]
    fn uniform_scenes_share_colour_and_shape() {
        for spec in diagnostic_set(2).iter().filter(|s| s.complexity == Complexity::Uniform) {
            let o = &spec.objects;
            assert_eq!((o[0].color, o[0].sides), (o[1].color, o[1].sides));
        }
    }

    #[test]
    fn info_examples() {
        let scene = occlusion_scene();
        let front = CameraState::new(Viewpoint::Front, 0).unwrap();
        let back = CameraState::new(Viewpoint::Back, 0).unwrap();
        assert_eq!(ground_truth_info(&scene, front, Query::Match).unwrap(), 0.0);
        assert_eq!(ground_truth_info(&scene, back, Query::Match).unwrap(), 1.0);
        let mut spec = diagnostic_set(1)[0].clone();
        spec.objects[0].features[0].visibility = [0.5; 6];
        let scene = generate_scene(&spec).unwrap();
        let mid = CameraState::new(Viewpoint::Left, 2).unwrap();
        assert_eq!(ground_truth_info(&scene, mid, Query::Match).unwrap(), 0.5 * ZOOM_FACTORS[2]);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let mut spec = diagnostic_set(1)[0].clone();
        spec.objects[0].sides = 2;
        assert!(generate_scene(&spec).is_err());
        let mut spec = diagnostic_set(1)[0].clone();
        spec.objects[0].color = FLOOR_COLOR;
        assert!(generate_scene(&spec).is_err());
    }

    #[test]
    fn spec_json_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.json");
        let spec = occlusion_set(1, 9).remove(0);
        spec.save(&path).unwrap();
        assert_eq!(SceneSpec::load(&path).unwrap(), spec);
    }
}
