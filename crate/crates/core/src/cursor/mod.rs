//! The depth-adaptive cursor: 2D deltas become yaw/pitch of a ray from the
//! viewer; the ray either lands on a surface, rests on a 2D panel, or floats
//! in the void at an interpolated depth.

mod step;
mod void;

use crate::geometry::{SurfaceHit, Vec3};

pub use step::{Cursor, CursorEffect};
pub use void::{void_depth, void_depth_excluding};

/// Tolerance on view-pose unit length and orthogonality.
pub const VIEW_TOLERANCE: f64 = 1e-6;

/// Viewer pose. `right = up × forward`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViewPose {
    pub origin: Vec3,
    pub forward: Vec3,
    pub up: Vec3,
}

impl Default for ViewPose {
    fn default() -> Self {
        Self { origin: Vec3::ZERO, forward: Vec3::Z, up: Vec3::Y }
    }
}

impl ViewPose {
    pub fn new(origin: Vec3, forward: Vec3, up: Vec3) -> Result<Self, String> {
        if !(origin.is_finite() && forward.is_finite() && up.is_finite()) {
            return Err("view pose must be finite".into());
        }
        if (forward.length() - 1.0).abs() > VIEW_TOLERANCE || (up.length() - 1.0).abs() > VIEW_TOLERANCE {
            return Err("view forward and up must be unit length".into());
        }
        if forward.dot(up).abs() > VIEW_TOLERANCE {
            return Err("view forward and up must be orthogonal".into());
        }
        Ok(Self { origin, forward, up })
    }

    pub fn right(&self) -> Vec3 {
        self.up.cross(self.forward)
    }
}

/// World-anchored angular frame fixed from the scene's initial view:
/// yaw turns about `up` (positive toward `right`), pitch elevates toward `up`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CursorFrame {
    pub forward: Vec3,
    pub up: Vec3,
    pub right: Vec3,
}

impl CursorFrame {
    pub fn from_view(view: &ViewPose) -> Self {
        let forward = view.forward.normalize();
        let up = (view.up - forward * view.up.dot(forward)).normalize();
        Self { forward, up, right: up.cross(forward) }
    }

    /// Unit world direction for yaw/pitch in degrees.
    pub fn dir(&self, yaw: f64, pitch: f64) -> Vec3 {
        let (sy, cy) = yaw.to_radians().sin_cos();
        let (sp, cp) = pitch.to_radians().sin_cos();
        (self.forward * (cp * cy) + self.right * (cp * sy) + self.up * sp).normalize()
    }

    /// Inverse of [`CursorFrame::dir`] for a unit direction; yaw in (−180, 180].
    pub fn angles(&self, dir: Vec3) -> (f64, f64) {
        let f = dir.dot(self.forward);
        let r = dir.dot(self.right);
        let u = dir.dot(self.up).clamp(-1.0, 1.0);
        let yaw = wrap_yaw(r.atan2(f).to_degrees());
        let pitch = u.atan2((f * f + r * r).sqrt()).to_degrees();
        (yaw, pitch)
    }
}

/// Direction of the cursor ray for yaw/pitch (degrees) in `frame`.
pub fn dir(frame: &CursorFrame, yaw: f64, pitch: f64) -> Vec3 {
    frame.dir(yaw, pitch)
}

/// Wraps degrees into (−180, 180].
pub fn wrap_yaw(yaw: f64) -> f64 {
    let w = (yaw + 180.0).rem_euclid(360.0) - 180.0;
    if w == -180.0 {
        180.0
    } else {
        w
    }
}

/// Maps a 2D delta (counts; +dy is screen-down) to new yaw/pitch in degrees.
pub fn apply_delta(yaw: f64, pitch: f64, dx: f64, dy: f64, gain: f64, pitch_limit: f64) -> (f64, f64) {
    let yaw = wrap_yaw(yaw + dx * gain);
    let pitch = (pitch - dy * gain).clamp(-pitch_limit, pitch_limit);
    (yaw, pitch)
}

#[derive(Debug, Clone, PartialEq)]
pub enum CursorMode {
    OnSurface { node_id: String, hit: SurfaceHit },
    InVoid { depth: f64 },
    OnPanel { node_id: String, u: f64, v: f64 },
}

/// Short tag used in trajectory logs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeTag {
    Surface,
    Void,
    Panel,
}

impl ModeTag {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Surface => "surface",
            Self::Void => "void",
            Self::Panel => "panel",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "surface" => Some(Self::Surface),
            "void" => Some(Self::Void),
            "panel" => Some(Self::Panel),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CursorState {
    /// Degrees.
    pub yaw: f64,
    /// Degrees.
    pub pitch: f64,
    pub mode: CursorMode,
    pub position: Vec3,
    /// Unit normal of the cursor disc.
    pub orientation: Vec3,
}

impl CursorState {
    pub fn tag(&self) -> ModeTag {
        match self.mode {
            CursorMode::OnSurface { .. } => ModeTag::Surface,
            CursorMode::InVoid { .. } => ModeTag::Void,
            CursorMode::OnPanel { .. } => ModeTag::Panel,
        }
    }

    /// Node under the cursor, if any.
    pub fn node_id(&self) -> Option<&str> {
        match &self.mode {
            CursorMode::OnSurface { node_id, .. } | CursorMode::OnPanel { node_id, .. } => Some(node_id),
            CursorMode::InVoid { .. } => None,
        }
    }

    /// Distance from `origin` to the cursor, along the ray where the mode records it.
    pub fn depth(&self, origin: Vec3) -> f64 {
        match &self.mode {
            CursorMode::OnSurface { hit, .. } => hit.t,
            CursorMode::InVoid { depth } => *depth,
            CursorMode::OnPanel { .. } => self.position.distance(origin),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Button {
    Left,
    Right,
    Middle,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EventKind {
    Delta { dx: i64, dy: i64 },
    Button { button: Button, pressed: bool },
    Scroll { ticks: i64 },
    View(ViewPose),
}

/// One timestamped input event (milliseconds).
#[derive(Debug, Clone, PartialEq)]
pub struct InputEvent {
    pub t: u64,
    pub kind: EventKind,
}

impl InputEvent {
    pub fn delta(t: u64, dx: i64, dy: i64) -> Self {
        Self { t, kind: EventKind::Delta { dx, dy } }
    }

    pub fn button(t: u64, button: Button, pressed: bool) -> Self {
        Self { t, kind: EventKind::Button { button, pressed } }
    }

    pub fn scroll(t: u64, ticks: i64) -> Self {
        Self { t, kind: EventKind::Scroll { ticks } }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame() -> CursorFrame {
        CursorFrame::from_view(&ViewPose::default())
    }

    #[test]
    fn dir_axis_conventions() {
        let f = frame();
        assert_eq!(f.dir(0.0, 0.0), Vec3::Z);
        assert!((f.dir(90.0, 0.0) - Vec3::X).length() < 1e-15);
        assert!((f.dir(0.0, 90.0) - Vec3::Y).length() < 1e-15);
        let (_, pitch) = apply_delta(0.0, 88.0, 0.0, -40.0, 0.05, 89.0);
        let d = f.dir(0.0, pitch);
        assert!((d.angle_to(Vec3::Y).to_degrees() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn apply_delta_examples() {
        assert_eq!(apply_delta(0.0, 0.0, 0.0, 0.0, 0.05, 89.0), (0.0, 0.0));
        assert_eq!(apply_delta(0.0, 0.0, 100.0, 0.0, 0.05, 89.0), (5.0, 0.0));
        assert_eq!(apply_delta(0.0, 88.0, 0.0, -40.0, 0.05, 89.0), (0.0, 89.0));
        // screen-down lowers pitch
        assert_eq!(apply_delta(0.0, 0.0, 0.0, 20.0, 0.05, 89.0).1, -1.0);
    }

    #[test]
    fn yaw_wraps_into_half_open_range() {
        assert_eq!(wrap_yaw(180.0), 180.0);
        assert_eq!(wrap_yaw(-180.0), 180.0);
        assert_eq!(wrap_yaw(190.0), -170.0);
        assert_eq!(wrap_yaw(-190.0), 170.0);
        assert_eq!(wrap_yaw(540.0), 180.0);
    }

    #[test]
    fn angles_invert_dir() {
        let f =
            CursorFrame::from_view(&ViewPose::new(Vec3::ZERO, Vec3::new(1.0, 0.0, 1.0).normalize(), Vec3::Y).unwrap());
        for (yaw, pitch) in [(0.0, 0.0), (33.0, -12.0), (-170.0, 45.0), (180.0, 5.0)] {
            let (y, p) = f.angles(f.dir(yaw, pitch));
            assert!((y - yaw).abs() < 1e-9 && (p - pitch).abs() < 1e-9, "{yaw},{pitch} -> {y},{p}");
        }
    }

    #[test]
    fn view_pose_validation() {
        assert!(ViewPose::new(Vec3::ZERO, Vec3::Z, Vec3::Z).is_err());
        assert!(ViewPose::new(Vec3::ZERO, Vec3::Z * 2.0, Vec3::Y).is_err());
        assert_eq!(ViewPose::default().right(), Vec3::X);
    }
}
