//! Independent reference implementations shared by the integration tests.
//! Nothing here calls into the engine's own intersection or distance code.

#![allow(dead_code)]

use rand::Rng;
use worldmouse_core::geometry::{Quat, Transform, TriMesh, Vec3};
use worldmouse_core::scene::{OriginKind, Scene};

/// Ray/plane crossing followed by a signed-area inside test. Returns `t` and
/// the barycentric weights of the crossing point.
pub fn plane_crossing(origin: Vec3, dir: Vec3, [a, b, c]: [Vec3; 3]) -> Option<(f64, [f64; 3])> {
    let n = (b - a).cross(c - a);
    let area2 = n.length_squared();
    if 0.5 * area2.sqrt() <= 1e-12 {
        return None;
    }
    let denom = dir.dot(n);
    if denom.abs() <= 1e-12 * area2.sqrt() {
        return None;
    }
    let t = (a - origin).dot(n) / denom;
    if t < 0.0 {
        return None;
    }
    let p = origin + dir * t;
    let w0 = (c - b).cross(p - b).dot(n) / area2;
    let w1 = (a - c).cross(p - c).dot(n) / area2;
    let w2 = (b - a).cross(p - a).dot(n) / area2;
    (w0 >= 0.0 && w1 >= 0.0 && w2 >= 0.0).then_some((t, [w0, w1, w2]))
}

/// Nearest crossing over a triangle list; ties within 1e-9 go to the lower index.
pub fn linear_scan(origin: Vec3, dir: Vec3, tris: &[[Vec3; 3]]) -> Option<(usize, f64, [f64; 3])> {
    let hits: Vec<_> = tris
        .iter()
        .enumerate()
        .filter_map(|(i, &t)| plane_crossing(origin, dir, t).map(|(tt, w)| (i, tt, w)))
        .collect();
    let t_min = hits.iter().map(|h| h.1).fold(f64::INFINITY, f64::min);
    hits.into_iter().find(|h| h.1 - t_min < 1e-9)
}

pub fn mesh_triangles(mesh: &TriMesh) -> Vec<[Vec3; 3]> {
    mesh.triangles().iter().map(|t| t.map(|i| mesh.vertices()[i as usize])).collect()
}

pub fn place(tf: &Transform, v: Vec3) -> Vec3 {
    tf.rotation.rotate(v.mul_elem(tf.scale)) + tf.translation
}

/// World-space triangles of every node; empty for nodes the cursor ignores.
pub fn scene_triangles(scene: &Scene) -> Vec<Vec<[Vec3; 3]>> {
    scene
        .nodes()
        .iter()
        .map(|n| {
            if !n.interactable {
                return Vec::new();
            }
            let mesh = n.geometry.local_mesh();
            mesh_triangles(&mesh).into_iter().map(|t| t.map(|v| place(&n.transform, v))).collect()
        })
        .collect()
}

/// Global nearest hit over all nodes: minimum t, then virtual before real,
/// then lower node index, then lower triangle index. Panels only count from the front.
pub fn scene_scan(scene: &Scene, origin: Vec3, dir: Vec3) -> Option<(usize, usize, f64)> {
    let tris = scene_triangles(scene);
    let mut hits = Vec::new();
    for (ni, node_tris) in tris.iter().enumerate() {
        let node = &scene.nodes()[ni];
        if node.is_panel() && dir.dot(node.transform.rotation.rotate(Vec3::Z)) >= 0.0 {
            continue;
        }
        for (ti, &t) in node_tris.iter().enumerate() {
            if let Some((tt, _)) = plane_crossing(origin, dir, t) {
                hits.push((ni, ti, tt));
            }
        }
    }
    let t_min = hits.iter().map(|h| h.2).fold(f64::INFINITY, f64::min);
    hits.into_iter()
        .filter(|h| h.2 - t_min < 1e-9)
        .min_by_key(|h| (scene.nodes()[h.0].origin_kind == OriginKind::Real, h.0, h.1))
}

fn segment_distance(p: Vec3, a: Vec3, b: Vec3) -> f64 {
    let ab = b - a;
    let s = ((p - a).dot(ab) / ab.length_squared()).clamp(0.0, 1.0);
    p.distance(a + ab * s)
}

/// Distance from `p` to a triangle: plane distance when the projection falls
/// inside, otherwise the nearest edge.
pub fn triangle_distance(p: Vec3, [a, b, c]: [Vec3; 3]) -> f64 {
    let n = (b - a).cross(c - a).normalize();
    let h = (p - a).dot(n);
    let q = p - n * h;
    let inside = [(a, b), (b, c), (c, a)].iter().all(|&(x, y)| (y - x).cross(q - x).dot(n) >= 0.0);
    if inside {
        h.abs()
    } else {
        segment_distance(p, a, b).min(segment_distance(p, b, c)).min(segment_distance(p, c, a))
    }
}

pub fn surface_distance(p: Vec3, tris: &[[Vec3; 3]]) -> f64 {
    tris.iter().map(|&t| triangle_distance(p, t)).fold(f64::INFINITY, f64::min)
}

pub fn unit<R: Rng>(rng: &mut R) -> Vec3 {
    loop {
        let v = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let l = v.length();
        if l > 0.1 && l <= 1.0 {
            return v / l;
        }
    }
}

pub fn rotation<R: Rng>(rng: &mut R) -> Quat {
    Quat::from_axis_angle(unit(rng), rng.random_range(0.0..std::f64::consts::TAU))
}

pub fn point_in<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> Vec3 {
    Vec3::new(rng.random_range(lo..hi), rng.random_range(lo..hi), rng.random_range(lo..hi))
}

/// Angle between two directions via atan2, stable for small and large angles.
pub fn angle(a: Vec3, b: Vec3) -> f64 {
    a.cross(b).length().atan2(a.dot(b))
}
