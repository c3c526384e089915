//! Seeded inputs shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use worldmouse_core::cursor::{Button, InputEvent, ViewPose};
use worldmouse_core::geometry::{Quat, Ray, Transform, TriMesh, Vec3};
use worldmouse_core::harness::Trace;
use worldmouse_core::scene::{Geometry, OriginKind, PanelSpec, Scene, SceneNode, SemanticLabel};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn unit(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let len = v.length();
        if len > 1e-3 && len <= 1.0 {
            return v / len;
        }
    }
}

/// `n` random small triangles scattered in a 4 m cube.
pub fn triangle_soup(n: usize, seed: u64) -> TriMesh {
    let mut rng = rng(seed);
    let mut vertices = Vec::with_capacity(3 * n);
    let mut triangles = Vec::with_capacity(n);
    while triangles.len() < n {
        let c = Vec3::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(1.0..5.0));
        let [a, b, d] = [0; 3].map(|_| c + unit(&mut rng) * rng.random_range(0.02..0.2));
        if (b - a).cross(d - a).length() < 1e-6 {
            continue;
        }
        let base = vertices.len() as u32;
        vertices.extend([a, b, d]);
        triangles.push([base, base + 1, base + 2]);
    }
    TriMesh::new(vertices, triangles, None).expect("soup triangles are non-degenerate")
}

/// Rays from the origin toward the soup region.
pub fn rays(n: usize, seed: u64) -> Vec<Ray> {
    let mut rng = rng(seed);
    (0..n)
        .map(|_| {
            let target = Vec3::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), 3.0);
            Ray::new(Vec3::ZERO, target.normalize()).expect("target is off the origin")
        })
        .collect()
}

pub fn sphere_points(n: usize, seed: u64) -> Vec<Vec3> {
    let mut rng = rng(seed);
    (0..n).map(|_| unit(&mut rng)).collect()
}

pub fn cube_points(n: usize, seed: u64) -> Vec<Vec3> {
    let mut rng = rng(seed);
    (0..n)
        .map(|_| Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

/// A room-sized scene: `spheres` virtual balls in front of the viewer, a real
/// back wall and one panel.
pub fn room(spheres: usize, seed: u64) -> Scene {
    let mut rng = rng(seed);
    let mut nodes: Vec<SceneNode> = (0..spheres)
        .map(|i| {
            let at = Vec3::new(rng.random_range(-1.5..1.5), rng.random_range(-1.0..1.0), rng.random_range(1.5..3.5));
            SceneNode::new(
                &format!("ball{i}"),
                SemanticLabel::new("ball", 0.9),
                OriginKind::Virtual,
                Transform::from_translation(at),
                Geometry::Mesh(TriMesh::uv_sphere(rng.random_range(0.08..0.25), 16, 32).with_smooth_normals()),
            )
        })
        .collect();
    nodes.push(SceneNode::new(
        "wall",
        SemanticLabel::new("wall", 0.95),
        OriginKind::Real,
        Transform::from_translation(Vec3::new(0.0, 0.0, 5.0)),
        Geometry::Mesh(TriMesh::cuboid(Vec3::new(4.0, 3.0, 0.05))),
    ));
    nodes.push(SceneNode::new(
        "screen",
        SemanticLabel::new("browser", 1.0),
        OriginKind::Virtual,
        Transform::new(
            Vec3::new(-1.2, 0.4, 2.0),
            Quat::from_axis_angle(Vec3::Y, 200f64.to_radians()),
            Vec3::splat(1.0),
        )
        .expect("unit rotation"),
        Geometry::Panel(PanelSpec { width: 0.8, height: 0.5, resolution_x: 1280, resolution_y: 800 }),
    ));
    Scene::new(ViewPose::default(), nodes).expect("room scene is valid")
}

/// A pointer session of `n` events: mostly deltas with occasional clicks and
/// scrolls.
pub fn session(n: usize, seed: u64) -> Trace {
    let mut rng = rng(seed);
    let events = (0..n as u64)
        .map(|t| match rng.random_range(0..40) {
            0 => InputEvent::button(t * 8, Button::Left, true),
            1 => InputEvent::button(t * 8, Button::Left, false),
            2 => InputEvent::scroll(t * 8, rng.random_range(-2..=2)),
            _ => InputEvent::delta(t * 8, rng.random_range(-40..=40), rng.random_range(-30..=30)),
        })
        .collect();
    Trace { events }
}
