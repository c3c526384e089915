//! Depth-adaptive 3D cursor engine for blended real/virtual scenes.
//!
//! A standard 2D mouse drives a cursor ray from the viewer. The cursor follows
//! surfaces it lands on, bridges empty space at an interpolated depth, and
//! slides in and out of embedded 2D panels. On top of that sit desktop-style
//! interactions (selection, drag with scroll depth, axis gizmo, radial menus,
//! ghost placement) and a deterministic replay harness.

pub mod config;
pub mod cursor;
pub mod geometry;
pub mod harness;
pub mod interact;
pub mod numfmt;
pub mod scene;

pub use config::{ConfigError, ConfigOverrides, EngineConfig, MenuItem, NodeTemplate};
pub use cursor::{
    apply_delta, void_depth, Button, Cursor, CursorEffect, CursorFrame, CursorMode, CursorState, EventKind, InputEvent,
    ModeTag, ViewPose,
};
pub use geometry::{
    convex_hull, ray_triangle_intersect, signed_distance_to_hull, Bvh, ConvexHull, GeometryError, Quat, Ray,
    SurfaceHit, Transform, TriMesh, Vec3,
};
pub use harness::{compute_metrics, parse_trace, replay, Metrics, Trace, TrajectorySample};
pub use interact::{Engine, InteractError, Selection};
pub use scene::{
    angular_gap, build_silhouette_cache, parse_scene, raycast_scene, update_node_transform, Geometry, OriginKind,
    PanelSpec, Scene, SceneError, SceneNode, SemanticLabel, SilhouetteCache,
};
