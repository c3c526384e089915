//! Pure geometric kernel shared by the scene and cursor modules.

mod bvh;
mod hull;
mod intersect;
mod mesh;
mod transform;
mod vec;

use thiserror::Error;

pub use bvh::{Aabb, Bvh, BvhNode, BvhNodeKind, DEFAULT_MAX_LEAF};
pub use hull::{convex_hull, signed_distance_to_hull, ConvexHull, HullError, Plane, HULL_EPSILON};
pub use intersect::{
    closest_point_on_triangle, interpolate_normal, ray_triangle_intersect, SurfaceHit, TriangleHit, DEGENERATE_AREA,
    TIE_EPSILON,
};
pub use mesh::{TriMesh, NORMAL_TOLERANCE};
pub use transform::{Ray, Transform, UNIT_TOLERANCE};
pub use vec::{Quat, Vec3};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("degenerate geometry: triangle area below threshold")]
    DegenerateTriangle,
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("zero-length direction")]
    ZeroDirection,
    #[error("quaternion norm {0} is not 1")]
    NonUnitQuaternion(f64),
    #[error("scale components must be positive")]
    NonPositiveScale,
    #[error("triangle {triangle} references vertex {index} but the mesh has {vertex_count} vertices")]
    IndexOutOfRange { triangle: usize, index: u32, vertex_count: usize },
    #[error("{normals} normals given for {vertices} vertices")]
    NormalCountMismatch { normals: usize, vertices: usize },
    #[error("normal {0} is not unit length")]
    NonUnitNormal(usize),
    #[error(transparent)]
    Hull(#[from] HullError),
}
