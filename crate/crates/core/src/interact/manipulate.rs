use super::InteractError;
use crate::config::EngineConfig;
use crate::cursor::CursorState;
use crate::geometry::{Ray, Transform, Vec3};
use crate::scene::{OriginKind, Scene, SceneNode};

/// An object being carried by the cursor.
#[derive(Debug, Clone, PartialEq)]
pub struct DragState {
    pub node_id: String,
    /// Distance from the view origin to the grab point, in meters.
    pub grab_depth: f64,
    /// Object origin minus grab point, world frame.
    pub grab_offset: Vec3,
    /// Set once the payload has actually moved; a drag that never moves does not snap.
    pub active: bool,
}

/// Starts a drag on the node under the cursor. Real nodes are immovable;
/// starting in the void is a no-op.
pub fn begin_drag(state: &CursorState, scene: &Scene, origin: Vec3) -> Result<Option<DragState>, InteractError> {
    let Some(node) = state.node_id().and_then(|id| scene.node(id)) else {
        return Ok(None);
    };
    if node.origin_kind == OriginKind::Real {
        return Err(InteractError::Immovable(node.id.clone()));
    }
    if !node.interactable {
        return Ok(None);
    }
    Ok(Some(DragState {
        node_id: node.id.clone(),
        grab_depth: state.depth(origin),
        grab_offset: node.transform.translation - state.position,
        active: false,
    }))
}

/// New payload translation for the current cursor direction; scroll ticks
/// scale the grab depth geometrically.
pub fn drag_update(
    drag: &mut DragState,
    origin: Vec3,
    direction: Vec3,
    scroll_ticks: i64,
    config: &EngineConfig,
) -> Vec3 {
    if scroll_ticks != 0 {
        drag.grab_depth *= config.scroll_depth_factor.powi(scroll_ticks as i32);
    }
    drag.active = true;
    origin + direction * drag.grab_depth + drag.grab_offset
}

/// Ends a drag. If the surface behind the payload along `ray` is within
/// `snap_distance` of the payload's extreme point toward it, the payload is
/// translated along the surface normal into contact. Returns whether it snapped.
pub fn end_drag(drag: &DragState, scene: &mut Scene, ray: &Ray, config: &EngineConfig) -> Result<bool, InteractError> {
    if !drag.active {
        return Ok(false);
    }
    let Some(hit) = scene.raycast_excluding(ray, Some(&drag.node_id)) else {
        return Ok(false);
    };
    let index =
        scene.node_index(&drag.node_id).ok_or_else(|| crate::scene::SceneError::UnknownNode(drag.node_id.clone()))?;
    let n = hit.hit.normal;
    let world = scene.node_world(index);
    let gap = world.mesh.vertices().iter().map(|&v| (v - hit.hit.point).dot(n)).fold(f64::INFINITY, f64::min);
    if !gap.is_finite() || gap.abs() > config.snap_distance {
        return Ok(false);
    }
    let node = &scene.nodes()[index];
    let transform = Transform { translation: node.transform.translation - n * gap, ..node.transform };
    scene.update_node_transform(&drag.node_id, transform)?;
    Ok(true)
}

/// Constraint axis of the translate gizmo, in the node's local frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn unit(self) -> Vec3 {
        match self {
            Self::X => Vec3::X,
            Self::Y => Vec3::Y,
            Self::Z => Vec3::Z,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "x" | "X" => Some(Self::X),
            "y" | "Y" => Some(Self::Y),
            "z" | "Z" => Some(Self::Z),
            _ => None,
        }
    }
}

/// An active single-axis translation handle.
#[derive(Debug, Clone, PartialEq)]
pub struct GizmoAxis {
    pub node_id: String,
    pub axis: Axis,
    /// World-space unit direction of `axis`.
    pub direction: Vec3,
    /// Node position when the gizmo was grabbed.
    pub origin: Vec3,
}

impl GizmoAxis {
    pub fn new(node: &SceneNode, axis: Axis) -> Self {
        Self {
            node_id: node.id.clone(),
            axis,
            direction: node.transform.rotation.rotate(axis.unit()).normalize(),
            origin: node.transform.translation,
        }
    }
}

/// Lines closer to parallel than this (1 − cos²) leave the gizmo where it is.
pub const PARALLEL_TOLERANCE: f64 = 1e-6;

/// Point on the gizmo's axis line closest to the cursor ray's line, or `None`
/// when the two are parallel.
pub fn gizmo_drag(gizmo: &GizmoAxis, ray: &Ray) -> Option<Vec3> {
    let a = gizmo.direction;
    let d = ray.direction;
    let w = gizmo.origin - ray.origin;
    let b = a.dot(d);
    let denom = 1.0 - b * b;
    if denom < PARALLEL_TOLERANCE {
        return None;
    }
    let s = (b * d.dot(w) - a.dot(w)) / denom;
    Some(gizmo.origin + a * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cursor::{CursorMode, ViewPose};
    use crate::geometry::{SurfaceHit, TriMesh};
    use crate::scene::{Geometry, SemanticLabel};

    fn x_gizmo() -> GizmoAxis {
        GizmoAxis { node_id: "n".into(), axis: Axis::X, direction: Vec3::X, origin: Vec3::ZERO }
    }

    #[test]
    fn gizmo_examples() {
        let down = Vec3::new(0.0, -1.0, 0.0);
        let p = gizmo_drag(&x_gizmo(), &Ray::new(Vec3::new(0.0, 1.0, 0.0), down).unwrap()).unwrap();
        assert_eq!(p, Vec3::ZERO);
        let p = gizmo_drag(&x_gizmo(), &Ray::new(Vec3::new(2.0, 1.0, 0.0), down).unwrap()).unwrap();
        assert_eq!(p, Vec3::new(2.0, 0.0, 0.0));
        assert_eq!(gizmo_drag(&x_gizmo(), &Ray::new(Vec3::Y, Vec3::X).unwrap()), None);
    }

    fn cube_on_table(gap: f64) -> Scene {
        let table = SceneNode::new(
            "table",
            SemanticLabel::new("table", 1.0),
            OriginKind::Real,
            Transform::IDENTITY,
            Geometry::Mesh(TriMesh::cuboid(Vec3::new(1.0, 0.5, 1.0))),
        );
        let cube = SceneNode::new(
            "cube",
            SemanticLabel::new("cube", 1.0),
            OriginKind::Virtual,
            Transform::from_translation(Vec3::new(0.0, 0.6 + gap, 0.0)),
            Geometry::Mesh(TriMesh::cuboid(Vec3::splat(0.1))),
        );
        let view = ViewPose::new(Vec3::new(0.0, 2.0, -1.0), Vec3::new(0.0, -1.0, 0.0), Vec3::Z).unwrap();
        Scene::new(view, vec![table, cube]).unwrap()
    }

    fn drag() -> DragState {
        DragState { node_id: "cube".into(), grab_depth: 1.0, grab_offset: Vec3::ZERO, active: true }
    }

    #[test]
    fn drop_near_surface_snaps_into_contact() {
        let mut scene = cube_on_table(0.03);
        let ray = Ray::new(Vec3::new(0.0, 2.0, 0.0), Vec3::new(0.0, -1.0, 0.0)).unwrap();
        assert!(end_drag(&drag(), &mut scene, &ray, &EngineConfig::default()).unwrap());
        let bottom = scene.node("cube").unwrap().transform.translation.y - 0.1;
        assert!((bottom - 0.5).abs() < 1e-12, "{bottom}");
    }

    #[test]
    fn drop_far_from_surface_stays() {
        let mut scene = cube_on_table(0.2);
        let ray = Ray::new(Vec3::new(0.0, 2.0, 0.0), Vec3::new(0.0, -1.0, 0.0)).unwrap();
        assert!(!end_drag(&drag(), &mut scene, &ray, &EngineConfig::default()).unwrap());
        assert_eq!(scene.node("cube").unwrap().transform.translation.y, 0.6 + 0.2);
    }

    #[test]
    fn real_nodes_are_immovable() {
        let scene = cube_on_table(0.0);
        let hit = SurfaceHit {
            t: 1.5,
            point: Vec3::new(0.0, 0.5, 0.0),
            normal: Vec3::Y,
            triangle_index: 0,
            barycentric: [1.0, 0.0, 0.0],
        };
        let state = CursorState {
            yaw: 0.0,
            pitch: 0.0,
            mode: CursorMode::OnSurface { node_id: "table".into(), hit },
            position: hit.point,
            orientation: Vec3::Y,
        };
        assert_eq!(begin_drag(&state, &scene, Vec3::new(0.0, 2.0, 0.0)), Err(InteractError::Immovable("table".into())));
        let void = CursorState { mode: CursorMode::InVoid { depth: 2.0 }, ..state };
        assert_eq!(begin_drag(&void, &scene, Vec3::ZERO), Ok(None));
    }

    #[test]
    fn scroll_scales_grab_depth() {
        let mut d = DragState { node_id: "c".into(), grab_depth: 2.0, grab_offset: Vec3::ZERO, active: false };
        let p = drag_update(&mut d, Vec3::ZERO, Vec3::Z, 3, &EngineConfig::default());
        assert_eq!(d.grab_depth, 2.0 * 1.05f64.powi(3));
        assert!((d.grab_depth - 2.31525).abs() < 1e-12);
        assert_eq!(p, Vec3::new(0.0, 0.0, d.grab_depth));
        assert!(d.active);
    }
}
