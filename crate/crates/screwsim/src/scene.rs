//! Seeded synthetic bin scenes: screws resting flat on a table or tilted
//! against a block, plus the camera models consumed by the renderers.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{segment_segment_distance, PixelPoint, Pose6D, Quat, UnitVec3, Vec3};

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("screw count must be at least 1")]
    EmptyCount,
    #[error("could not place screw {index} without overlap after {attempts} attempts")]
    PlacementFailure { index: usize, attempts: usize },
    #[error("camera model invalid: {0}")]
    BadCamera(String),
    #[error("scene file version {got} unsupported (expected {expected})")]
    BadVersion { got: u32, expected: u32 },
    #[error("scene parse error: {0}")]
    Parse(String),
}

/// Screw dimensions in meters. The head is modeled as a coaxial cylinder
/// sitting on top of the shaft.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScrewSpec {
    pub shaft_length: f64,
    pub shaft_radius: f64,
    pub head_radius: f64,
    pub head_height: f64,
}

impl Default for ScrewSpec {
    /// M6x40 proportions.
    fn default() -> Self {
        ScrewSpec {
            shaft_length: 0.040,
            shaft_radius: 0.003,
            head_radius: 0.005,
            head_height: 0.004,
        }
    }
}

impl ScrewSpec {
    pub fn validate(&self) -> Result<(), SceneError> {
        let ok = self.shaft_length > 0.0
            && self.shaft_radius > 0.0
            && self.head_radius > self.shaft_radius
            && self.head_height > 0.0;
        if ok {
            Ok(())
        } else {
            Err(SceneError::Parse("screw dimensions invalid".into()))
        }
    }

    /// Total length from tail tip to head top.
    pub fn total_length(&self) -> f64 {
        self.shaft_length + self.head_height
    }

    /// Distance from the tail tip to the head center, along the axis.
    pub fn head_center_offset(&self) -> f64 {
        self.shaft_length + self.head_height / 2.0
    }
}

/// What the screw rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Support {
    Flat,
    TiltedOnBlock,
}

/// Posture sampling mode for scene generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlacementMode {
    Flat,
    Tilted,
    Mixed,
}

/// A screw instance in the scene. The local frame has the shaft along +z
/// with the tail tip at the origin and the head at the +z end; `pose`
/// maps that frame into the world.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlacedScrew {
    pub spec: ScrewSpec,
    pub pose: Pose6D,
    pub support: Support,
}

impl PlacedScrew {
    /// World-space screw axis direction, tail toward head.
    pub fn axis_dir(&self) -> Vec3 {
        self.pose.transform_dir(Vec3::new(0.0, 0.0, 1.0))
    }

    /// World position of the tail tip.
    pub fn tail(&self) -> Vec3 {
        self.pose.position
    }

    /// World position of the top of the head.
    pub fn head_top(&self) -> Vec3 {
        self.pose
            .transform_point(Vec3::new(0.0, 0.0, self.spec.total_length()))
    }

    /// World position of the head center.
    pub fn head_center(&self) -> Vec3 {
        self.pose
            .transform_point(Vec3::new(0.0, 0.0, self.spec.head_center_offset()))
    }

    /// Midpoint of the full axis span, used as a ground-truth centroid.
    pub fn axis_midpoint(&self) -> Vec3 {
        self.pose
            .transform_point(Vec3::new(0.0, 0.0, self.spec.total_length() / 2.0))
    }

    /// Elevation of the axis above the horizontal plane, in [0, π/2].
    pub fn pitch(&self) -> f64 {
        let d = self.axis_dir();
        d.z.abs().asin()
    }

    /// World yaw of the axis direction projected to the table plane.
    pub fn yaw(&self) -> f64 {
        let d = self.axis_dir();
        d.y.atan2(d.x)
    }
}

/// Assembly hole: pose of the hole axis (pointing up out of the part) and
/// its radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hole {
    pub pose: Pose6D,
    pub radius: f64,
}

/// A generated scene. Deterministic per seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub screws: Vec<PlacedScrew>,
    pub table_height: f64,
    pub hole: Hole,
    pub seed: u64,
}

/// Pinhole camera. The camera looks along its local +z; image x is local
/// x and image y is local y (x right, y down in the raster).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CameraModel {
    pub pose: Pose6D,
    pub focal: f64,
    pub principal: PixelPoint,
    pub resolution: (u32, u32),
}

impl CameraModel {
    pub fn validate(&self) -> Result<(), SceneError> {
        if self.focal <= 0.0 {
            return Err(SceneError::BadCamera("focal must be positive".into()));
        }
        let (w, h) = self.resolution;
        if self.principal.x < 0.0
            || self.principal.y < 0.0
            || self.principal.x >= w as f64
            || self.principal.y >= h as f64
        {
            return Err(SceneError::BadCamera(
                "principal point outside resolution".into(),
            ));
        }
        Ok(())
    }

    /// Top-down camera centered above the work area.
    pub fn top_down(height: f64, focal: f64, resolution: u32) -> Self {
        let half = resolution as f64 / 2.0;
        // Rotate 180 deg about x: local +z maps to world -z.
        let orientation = Quat::from_axis_angle(
            UnitVec3::normalize(Vec3::new(1.0, 0.0, 0.0)).unwrap(),
            std::f64::consts::PI,
        );
        CameraModel {
            pose: Pose6D {
                position: Vec3::new(0.0, 0.0, height),
                orientation,
            },
            focal,
            principal: PixelPoint::new(half, half),
            resolution: (resolution, resolution),
        }
    }

    /// Project a world point. Returns pixel coordinates and camera-frame
    /// depth; `None` when the point is behind the camera.
    pub fn project(&self, p: Vec3) -> Option<(PixelPoint, f64)> {
        let pc = self.pose.inverse().transform_point(p);
        if pc.z <= 1e-9 {
            return None;
        }
        let px = self.principal.x + self.focal * pc.x / pc.z;
        let py = self.principal.y + self.focal * pc.y / pc.z;
        Some((PixelPoint::new(px, py), pc.z))
    }

    /// World-space ray through the center of pixel `(px, py)`: origin and
    /// unit direction.
    pub fn pixel_ray(&self, px: f64, py: f64) -> (Vec3, Vec3) {
        let dir_cam = Vec3::new(
            (px - self.principal.x) / self.focal,
            (py - self.principal.y) / self.focal,
            1.0,
        );
        let dir_world = self.pose.transform_dir(dir_cam);
        let n = dir_world.norm();
        (self.pose.position, dir_world.scale(1.0 / n))
    }
}

/// Geometry bounds used when sampling screw placements.
const PLACEMENT_HALF_EXTENT: f64 = 0.11;
const TILT_PITCH_MIN_DEG: f64 = 15.0;
const TILT_PITCH_MAX_DEG: f64 = 60.0;
const PLACEMENT_ATTEMPTS: usize = 200;
/// Minimum clearance between bounding capsules, meters.
const CAPSULE_CLEARANCE: f64 = 0.001;

/// Default clearance ratio of the hole radius over the shaft radius.
pub const DEFAULT_CLEARANCE_RATIO: f64 = 1.1;

fn default_hole(spec: &ScrewSpec) -> Hole {
    Hole {
        pose: Pose6D {
            position: Vec3::new(0.20, 0.20, 0.0),
            orientation: Quat::identity(),
        },
        radius: spec.shaft_radius * DEFAULT_CLEARANCE_RATIO,
    }
}

/// Orientation whose local +z axis points at elevation `pitch` above the
/// horizontal, heading `yaw`.
fn screw_orientation(pitch: f64, yaw: f64) -> Quat {
    let y_axis = UnitVec3::normalize(Vec3::new(0.0, 1.0, 0.0)).unwrap();
    let tilt = Quat::from_axis_angle(y_axis, std::f64::consts::FRAC_PI_2 - pitch);
    Quat::from_yaw(yaw).mul(tilt)
}

fn bounding_capsule(s: &PlacedScrew) -> (Vec3, Vec3, f64) {
    (s.tail(), s.head_top(), s.spec.head_radius)
}

fn capsules_clear(a: &PlacedScrew, b: &PlacedScrew) -> bool {
    let (a0, a1, ra) = bounding_capsule(a);
    let (b0, b1, rb) = bounding_capsule(b);
    segment_segment_distance(a0, a1, b0, b1) > ra + rb + CAPSULE_CLEARANCE
}

/// Generate a seeded scene of `count` screws.
///
/// Flat screws lie with the axis horizontal, resting on the head rim;
/// tilted screws lean on a block with pitch in [15°, 60°] and the tail
/// tip on the table. Identical arguments produce identical scenes.
pub fn generate_bin_scene(
    spec: &ScrewSpec,
    count: usize,
    mode: PlacementMode,
    seed: u64,
) -> Result<Scene, SceneError> {
    spec.validate()?;
    if count == 0 {
        return Err(SceneError::EmptyCount);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut screws: Vec<PlacedScrew> = Vec::with_capacity(count);

    for index in 0..count {
        let mut placed = None;
        for _ in 0..PLACEMENT_ATTEMPTS {
            let tilted = match mode {
                PlacementMode::Flat => false,
                PlacementMode::Tilted => true,
                PlacementMode::Mixed => rng.gen_bool(0.5),
            };
            let px = rng.gen_range(-PLACEMENT_HALF_EXTENT..PLACEMENT_HALF_EXTENT);
            let py = rng.gen_range(-PLACEMENT_HALF_EXTENT..PLACEMENT_HALF_EXTENT);
            let yaw = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);

            let candidate = if tilted {
                let pitch = rng
                    .gen_range(TILT_PITCH_MIN_DEG.to_radians()..TILT_PITCH_MAX_DEG.to_radians());
                // Tail-tip disk rim touches the table.
                let tip_z = spec.shaft_radius * pitch.cos();
                PlacedScrew {
                    spec: *spec,
                    pose: Pose6D {
                        position: Vec3::new(px, py, tip_z),
                        orientation: screw_orientation(pitch, yaw),
                    },
                    support: Support::TiltedOnBlock,
                }
            } else {
                // Horizontal axis at head-radius height: the head rim is
                // the lowest point and touches the table.
                PlacedScrew {
                    spec: *spec,
                    pose: Pose6D {
                        position: Vec3::new(px, py, spec.head_radius),
                        orientation: screw_orientation(0.0, yaw),
                    },
                    support: Support::Flat,
                }
            };

            if screws.iter().all(|s| capsules_clear(s, &candidate)) {
                placed = Some(candidate);
                break;
            }
        }
        match placed {
            Some(s) => screws.push(s),
            None => {
                return Err(SceneError::PlacementFailure {
                    index,
                    attempts: PLACEMENT_ATTEMPTS,
                })
            }
        }
    }

    Ok(Scene {
        screws,
        table_height: 0.0,
        hole: default_hole(spec),
        seed,
    })
}

const SCENE_FILE_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct SceneFile {
    version: u32,
    #[serde(flatten)]
    scene: Scene,
}

/// Serialize a scene to the versioned JSON document used for replay.
pub fn scene_to_json(scene: &Scene) -> String {
    serde_json::to_string_pretty(&SceneFile {
        version: SCENE_FILE_VERSION,
        scene: scene.clone(),
    })
    .expect("scene serialization cannot fail")
}

/// Parse a versioned scene document.
pub fn scene_from_json(text: &str) -> Result<Scene, SceneError> {
    let file: SceneFile =
        serde_json::from_str(text).map_err(|e| SceneError::Parse(e.to_string()))?;
    if file.version != SCENE_FILE_VERSION {
        return Err(SceneError::BadVersion {
            got: file.version,
            expected: SCENE_FILE_VERSION,
        });
    }
    Ok(file.scene)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_mode_forces_horizontal() {
        let scene = generate_bin_scene(&ScrewSpec::default(), 1, PlacementMode::Flat, 7).unwrap();
        assert_eq!(scene.screws.len(), 1);
        assert!(scene.screws[0].pitch().abs() < 1e-9);
        assert_eq!(scene.screws[0].support, Support::Flat);
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate_bin_scene(&ScrewSpec::default(), 5, PlacementMode::Mixed, 7).unwrap();
        let b = generate_bin_scene(&ScrewSpec::default(), 5, PlacementMode::Mixed, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn capsules_never_touch() {
        // Brute-force pairwise capsule distance over a dense scene.
        let scene = generate_bin_scene(&ScrewSpec::default(), 20, PlacementMode::Mixed, 3).unwrap();
        for i in 0..scene.screws.len() {
            for j in i + 1..scene.screws.len() {
                let (a0, a1, ra) = bounding_capsule(&scene.screws[i]);
                let (b0, b1, rb) = bounding_capsule(&scene.screws[j]);
                let gap = segment_segment_distance(a0, a1, b0, b1) - ra - rb;
                assert!(gap > 0.0, "screws {i} and {j} overlap (gap {gap})");
            }
        }
    }

    #[test]
    fn screws_rest_on_support() {
        let scene = generate_bin_scene(&ScrewSpec::default(), 10, PlacementMode::Mixed, 11).unwrap();
        for s in &scene.screws {
            // Lowest rim point among the tail disk and the two head rims.
            let d = s.axis_dir();
            let sin_perp = (1.0 - d.z * d.z).max(0.0).sqrt();
            let tail_low = s.tail().z - s.spec.shaft_radius * sin_perp;
            let half_head = s.spec.head_height / 2.0;
            let head_rim_low = (s.head_center().z - half_head * d.z.abs())
                .min(s.head_center().z + half_head * d.z.abs())
                - s.spec.head_radius * sin_perp;
            let lowest = tail_low.min(head_rim_low);
            assert!(
                lowest > -1e-9 && lowest < 0.0011,
                "screw lowest point {lowest} not within 1 mm of the table"
            );
        }
    }

    #[test]
    fn tilted_pitch_in_range() {
        let scene = generate_bin_scene(&ScrewSpec::default(), 8, PlacementMode::Tilted, 5).unwrap();
        for s in &scene.screws {
            let deg = s.pitch().to_degrees();
            assert!((15.0..=60.0).contains(&deg), "pitch {deg} out of range");
        }
    }

    #[test]
    fn zero_count_rejected() {
        assert!(matches!(
            generate_bin_scene(&ScrewSpec::default(), 0, PlacementMode::Flat, 1),
            Err(SceneError::EmptyCount)
        ));
    }

    #[test]
    fn scene_json_round_trip() {
        let scene = generate_bin_scene(&ScrewSpec::default(), 4, PlacementMode::Mixed, 42).unwrap();
        let text = scene_to_json(&scene);
        let back = scene_from_json(&text).unwrap();
        assert_eq!(scene, back);
        assert!(text.contains("\"version\": 1"));
    }

    #[test]
    fn scene_json_rejects_future_version() {
        let scene = generate_bin_scene(&ScrewSpec::default(), 1, PlacementMode::Flat, 1).unwrap();
        let text = scene_to_json(&scene).replace("\"version\": 1", "\"version\": 9");
        assert!(matches!(
            scene_from_json(&text),
            Err(SceneError::BadVersion { got: 9, .. })
        ));
    }

    #[test]
    fn camera_validation() {
        let cam = CameraModel::top_down(0.8, 1000.0, 320);
        assert!(cam.validate().is_ok());
        let mut bad = cam;
        bad.focal = -1.0;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn camera_projection_geometry() {
        let cam = CameraModel::top_down(0.8, 1000.0, 320);
        // Point right of center on the table projects right of principal.
        let (px, depth) = cam.project(Vec3::new(0.1, 0.0, 0.0)).unwrap();
        assert!((depth - 0.8).abs() < 1e-12);
        assert!((px.x - (160.0 + 1000.0 * 0.1 / 0.8)).abs() < 1e-9);
        // Ray through that pixel returns to the same table point.
        let (origin, dir) = cam.pixel_ray(px.x, px.y);
        let t = -origin.z / dir.z;
        let hit = origin.add(dir.scale(t));
        assert!(hit.distance(Vec3::new(0.1, 0.0, 0.0)) < 1e-9);
    }
}
