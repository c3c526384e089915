//! Ray/triangle intersection and per-hit surface attributes.

use super::{GeometryError, Ray, TriMesh, Vec3};

/// Triangles with area at or below this (m²) are treated as degenerate.
pub const DEGENERATE_AREA: f64 = 1e-12;

/// Hits whose ray parameters differ by less than this are ties.
pub const TIE_EPSILON: f64 = 1e-9;

/// Barycentric slack at triangle edges, so rays along a shared edge hit at
/// least one of the two triangles despite rounding.
pub const EDGE_EPSILON: f64 = 1e-12;

/// Ray parameter and barycentric weights `(w0, w1, w2)` of a ray/triangle crossing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleHit {
    pub t: f64,
    pub barycentric: [f64; 3],
}

/// A ray hit on a mesh surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceHit {
    pub t: f64,
    pub point: Vec3,
    pub normal: Vec3,
    pub triangle_index: u32,
    pub barycentric: [f64; 3],
}

/// Möller–Trumbore intersection, inclusive of the triangle boundary (widened by
/// [`EDGE_EPSILON`], with the weights clamped back onto the triangle) and of `t = 0`.
///
/// Returns `Err(DegenerateTriangle)` for triangles with area ≤ [`DEGENERATE_AREA`]; callers skip those.
pub fn ray_triangle_intersect(ray: &Ray, v0: Vec3, v1: Vec3, v2: Vec3) -> Result<Option<TriangleHit>, GeometryError> {
    let e1 = v1 - v0;
    let e2 = v2 - v0;
    let n = e1.cross(e2);
    let n_len = n.length();
    let area = 0.5 * n_len;
    if area.is_nan() || area <= DEGENERATE_AREA {
        return Err(GeometryError::DegenerateTriangle);
    }
    let p = ray.direction.cross(e2);
    let det = e1.dot(p);
    // |det| = |direction · n|; reject rays parallel to the plane.
    if det.abs() <= 1e-12 * n_len {
        return Ok(None);
    }
    let inv = 1.0 / det;
    let s = ray.origin - v0;
    let u = s.dot(p) * inv;
    if !(-EDGE_EPSILON..=1.0 + EDGE_EPSILON).contains(&u) {
        return Ok(None);
    }
    let q = s.cross(e1);
    let v = ray.direction.dot(q) * inv;
    if v < -EDGE_EPSILON || u + v > 1.0 + EDGE_EPSILON {
        return Ok(None);
    }
    let t = e2.dot(q) * inv;
    if t < 0.0 {
        return Ok(None);
    }
    let (mut u, mut v) = (u.max(0.0), v.max(0.0));
    if u + v > 1.0 {
        let sum = u + v;
        u /= sum;
        v /= sum;
    }
    Ok(Some(TriangleHit { t, barycentric: [1.0 - (u + v), u, v] }))
}

/// Normalized barycentric blend of a triangle's vertex normals.
///
/// Falls back to the geometric face normal when the mesh has no vertex normals
/// or the blend cancels out.
pub fn interpolate_normal(mesh: &TriMesh, triangle_index: u32, barycentric: [f64; 3]) -> Vec3 {
    let tri = mesh.triangles()[triangle_index as usize];
    let blended = mesh.normals().and_then(|ns| {
        let n = ns[tri[0] as usize] * barycentric[0]
            + ns[tri[1] as usize] * barycentric[1]
            + ns[tri[2] as usize] * barycentric[2];
        if n.length() > 1e-12 {
            n.try_normalize()
        } else {
            None
        }
    });
    blended.unwrap_or_else(|| mesh.face_cross(triangle_index as usize).try_normalize().unwrap_or(Vec3::Z))
}

/// Builds the full hit record for a triangle hit on `mesh`.
pub(crate) fn surface_hit(mesh: &TriMesh, ray: &Ray, triangle: u32, hit: TriangleHit) -> SurfaceHit {
    let normal = if mesh.normals().is_some() {
        interpolate_normal(mesh, triangle, hit.barycentric)
    } else {
        let n = mesh.face_cross(triangle as usize).try_normalize().unwrap_or(-ray.direction);
        if n.dot(ray.direction) > 0.0 {
            -n
        } else {
            n
        }
    };
    SurfaceHit { t: hit.t, point: ray.at(hit.t), normal, triangle_index: triangle, barycentric: hit.barycentric }
}

/// Closest point on triangle `abc` to `p` (Voronoi-region walk).
pub fn closest_point_on_triangle(p: Vec3, a: Vec3, b: Vec3, c: Vec3) -> Vec3 {
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(ap);
    let d2 = ac.dot(ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return a;
    }
    let bp = p - b;
    let d3 = ab.dot(bp);
    let d4 = ac.dot(bp);
    if d3 >= 0.0 && d4 <= d3 {
        return b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        return a + ab * (d1 / (d1 - d3));
    }
    let cp = p - c;
    let d5 = ab.dot(cp);
    let d6 = ac.dot(cp);
    if d6 >= 0.0 && d5 <= d6 {
        return c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        return a + ac * (d2 / (d2 - d6));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
    }
    let denom = 1.0 / (va + vb + vc);
    a + ab * (vb * denom) + ac * (vc * denom)
}
