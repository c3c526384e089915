mod common;

use common::{linear_scan, mesh_triangles, plane_crossing, point_in, unit};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use worldmouse_core::geometry::{
    convex_hull, ray_triangle_intersect, signed_distance_to_hull, Bvh, BvhNodeKind, Ray, TriMesh, Vec3,
};

fn random_soup(rng: &mut ChaCha8Rng, n: usize) -> TriMesh {
    let mut verts = Vec::with_capacity(3 * n);
    for _ in 0..n {
        let c = point_in(rng, -1.0, 1.0);
        for _ in 0..3 {
            verts.push(c + unit(rng) * rng.random_range(0.005..0.15));
        }
    }
    let tris = (0..n as u32).map(|k| [3 * k, 3 * k + 1, 3 * k + 2]).collect();
    TriMesh::new(verts, tris, None).unwrap()
}

fn random_ray(rng: &mut ChaCha8Rng) -> Ray {
    let origin = point_in(rng, -2.0, 2.0);
    let dir = (point_in(rng, -1.0, 1.0) - origin).try_normalize().unwrap_or(Vec3::Z);
    Ray::new(origin, dir).unwrap()
}

#[test]
fn triangle_intersection_matches_plane_crossing_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let tris: Vec<[Vec3; 3]> = (0..200)
        .map(|_| {
            let c = point_in(&mut rng, -1.0, 1.0);
            [0, 1, 2].map(|_| c + unit(&mut rng) * rng.random_range(0.05..0.8))
        })
        .collect();
    let mut hits = 0;
    for _ in 0..1000 {
        let ray = random_ray(&mut rng);
        for &[a, b, c] in &tris {
            let got = ray_triangle_intersect(&ray, a, b, c).unwrap();
            let want = plane_crossing(ray.origin, ray.direction, [a, b, c]);
            match (got, want) {
                (Some(g), Some((t, w))) => {
                    hits += 1;
                    assert!((g.t - t).abs() < 1e-9, "t {} vs {t}", g.t);
                    for (gk, wk) in g.barycentric.iter().zip(w) {
                        assert!((gk - wk).abs() < 1e-9);
                    }
                    let p = ray.at(g.t);
                    let q = a * g.barycentric[0] + b * g.barycentric[1] + c * g.barycentric[2];
                    assert!(p.distance(q) < 1e-6);
                }
                (None, None) => {}
                (g, w) => {
                    // Only rays grazing an edge may disagree, and only by rounding.
                    let bary = g.map(|h| h.barycentric).or(w.map(|h| h.1)).unwrap_or([1.0; 3]);
                    let edge = bary.iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
                    assert!(edge < 1e-9, "disagreement away from an edge: {g:?} vs {w:?}");
                }
            }
        }
    }
    assert!(hits > 1000, "too few hits to be meaningful: {hits}");
}

#[test]
fn degenerate_triangle_is_reported() {
    let ray = Ray::new(Vec3::ZERO, Vec3::Z).unwrap();
    let p = Vec3::new(0.0, 0.0, 1.0);
    assert!(ray_triangle_intersect(&ray, p, p, p + Vec3::X).is_err());
}

#[test]
fn bvh_matches_linear_scan_on_10k_triangles() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mesh = random_soup(&mut rng, 10_000);
    let bvh = Bvh::build(&mesh);
    let tris = mesh_triangles(&mesh);
    let mut hits = 0;
    for _ in 0..1000 {
        let ray = random_ray(&mut rng);
        let got = bvh.raycast(&mesh, &ray);
        let want = linear_scan(ray.origin, ray.direction, &tris);
        match (got, want) {
            (Some(g), Some((i, t, _))) => {
                hits += 1;
                assert_eq!(g.triangle_index as usize, i);
                assert!((g.t - t).abs() <= 1e-9);
                assert!(g.point.distance(ray.at(g.t)) <= 1e-6);
            }
            (None, None) => {}
            (g, w) => panic!("bvh {g:?} vs scan {w:?}"),
        }
    }
    assert!(hits > 100);
}

#[test]
fn bvh_structure_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for leaf in [1, 2, 4, 8] {
        let mesh = random_soup(&mut rng, 777);
        let bvh = Bvh::build_with_leaf_size(&mesh, leaf);
        let mut seen = vec![0u32; mesh.triangles().len()];
        for node in bvh.nodes() {
            match node.kind {
                BvhNodeKind::Leaf { start, count } => {
                    assert!(count as usize <= leaf);
                    for &t in bvh.leaf_triangles(start, count) {
                        seen[t as usize] += 1;
                        for v in mesh.triangle(t as usize) {
                            assert!(v.x >= node.bounds.min.x && v.x <= node.bounds.max.x);
                            assert!(v.y >= node.bounds.min.y && v.y <= node.bounds.max.y);
                            assert!(v.z >= node.bounds.min.z && v.z <= node.bounds.max.z);
                        }
                    }
                }
                BvhNodeKind::Inner { left, right } => {
                    for child in [left, right] {
                        assert!(node.bounds.contains_box(&bvh.nodes()[child as usize].bounds));
                    }
                }
            }
        }
        assert!(seen.iter().all(|&n| n == 1), "every triangle in exactly one leaf");
        assert_eq!(Bvh::build_with_leaf_size(&mesh, leaf), bvh, "construction is deterministic");
    }
}

#[test]
fn sphere_points_are_all_hull_vertices() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let pts: Vec<Vec3> = (0..100).map(|_| unit(&mut rng)).collect();
    let hull = convex_hull(&pts).unwrap();
    assert_eq!(hull.vertices().len(), 100);
    let order: Vec<usize> = hull.vertices().iter().map(|v| pts.iter().position(|p| p == v).unwrap()).collect();
    assert!(order.windows(2).all(|w| w[0] < w[1]), "vertices keep input order");
    for p in &pts {
        assert!(signed_distance_to_hull(&hull, *p) <= 1e-6);
    }
    assert!(hull.is_watertight());
}

#[test]
fn cube_signed_distance_examples() {
    let mut pts = Vec::new();
    for x in [-1.0, 1.0] {
        for y in [-1.0, 1.0] {
            for z in [-1.0, 1.0] {
                pts.push(Vec3::new(x, y, z));
            }
        }
    }
    let hull = convex_hull(&pts).unwrap();
    assert!((signed_distance_to_hull(&hull, Vec3::ZERO) + 1.0).abs() < 1e-12);
    assert!((signed_distance_to_hull(&hull, Vec3::new(2.0, 0.0, 0.0)) - 1.0).abs() < 1e-12);
}

/// Distance from `p` to a densely sampled triangle: a coarse barycentric grid,
/// then a fine grid around the best coarse sample.
fn sampled_distance(p: Vec3, [a, b, c]: [Vec3; 3]) -> f64 {
    let at = |u: f64, v: f64| a + (b - a) * u + (c - a) * v;
    let grid = |u0: f64, v0: f64, span: f64, n: usize| {
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for i in 0..=n {
            for j in 0..=n {
                let u = (u0 + span * i as f64 / n as f64).clamp(0.0, 1.0);
                let v = (v0 + span * j as f64 / n as f64).clamp(0.0, 1.0);
                if u + v > 1.0 {
                    continue;
                }
                let d = p.distance(at(u, v));
                if d < best.0 {
                    best = (d, u, v);
                }
            }
        }
        best
    };
    let coarse = 48;
    let (_, u, v) = grid(0.0, 0.0, 1.0, coarse);
    let cell = 1.0 / coarse as f64;
    grid(u - 2.0 * cell, v - 2.0 * cell, 4.0 * cell, 400).0
}

#[test]
fn signed_distance_matches_dense_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..4 {
        let pts: Vec<Vec3> = (0..rng.random_range(6..30)).map(|_| point_in(&mut rng, -1.0, 1.0)).collect();
        let hull = convex_hull(&pts).unwrap();
        let tris: Vec<[Vec3; 3]> = hull.faces().iter().map(|f| f.map(|i| hull.vertices()[i as usize])).collect();
        let mut checked = 0;
        while checked < 25 {
            let p = point_in(&mut rng, -1.8, 1.8);
            let sampled = tris.iter().map(|&t| sampled_distance(p, t)).fold(f64::INFINITY, f64::min);
            if sampled < 0.05 {
                continue;
            }
            let inside = tris.iter().all(|&[a, b, c]| (p - a).dot((b - a).cross(c - a)) < 0.0);
            let want = if inside { -sampled } else { sampled };
            let got = signed_distance_to_hull(&hull, p);
            assert!((got - want).abs() <= 1e-4, "p={p:?}: {got} vs sampled {want}");
            checked += 1;
        }
    }
}

fn arb_point() -> impl Strategy<Value = Vec3> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

fn vertex_key(v: &[Vec3]) -> Vec<[u64; 3]> {
    let mut k: Vec<_> = v.iter().map(|p| p.to_array().map(f64::to_bits)).collect();
    k.sort_unstable();
    k
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hull_contains_inputs_and_is_idempotent(pts in prop::collection::vec(arb_point(), 4..120)) {
        let Ok(hull) = convex_hull(&pts) else { return Ok(()) };
        for p in &pts {
            for f in hull.faces() {
                let [a, b, c] = f.map(|i| hull.vertices()[i as usize]);
                let n = (b - a).cross(c - a).normalize();
                prop_assert!((*p - a).dot(n) <= 1e-6);
            }
        }
        prop_assert!(hull.is_watertight());
        let again = convex_hull(hull.vertices()).unwrap();
        prop_assert_eq!(vertex_key(again.vertices()), vertex_key(hull.vertices()));
    }

    #[test]
    fn lattice_hulls_are_idempotent(cells in prop::collection::vec((0..5i32, 0..5i32, 0..5i32), 8..200)) {
        let pts: Vec<Vec3> = cells.iter().map(|&(x, y, z)| Vec3::new(x as f64, y as f64, z as f64) * 0.25).collect();
        let Ok(hull) = convex_hull(&pts) else { return Ok(()) };
        let again = convex_hull(hull.vertices()).unwrap();
        prop_assert_eq!(vertex_key(again.vertices()), vertex_key(hull.vertices()));
        prop_assert!((again.volume() - hull.volume()).abs() < 1e-12);
    }

    #[test]
    fn surface_hits_reconstruct(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mesh = TriMesh::uv_sphere(rng.random_range(0.2..1.0), 12, 24);
        let bvh = Bvh::build(&mesh);
        for _ in 0..20 {
            let ray = random_ray(&mut rng);
            if let Some(h) = bvh.raycast(&mesh, &ray) {
                prop_assert!(h.t >= 0.0);
                prop_assert!(h.point.distance(ray.origin + ray.direction * h.t) <= 1e-6);
                prop_assert!((h.normal.length() - 1.0).abs() < 1e-9);
            }
        }
    }
}
