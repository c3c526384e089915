//! 3D convex hulls via quickhull, triangulated with outward winding.

use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;

use super::intersect::closest_point_on_triangle;
use super::{TriMesh, Vec3};

/// Containment tolerance for hull membership tests, in meters.
pub const HULL_EPSILON: f64 = 1e-6;

/// Distances at or below this (meters) count as degenerate for the initial simplex.
const DEGENERACY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HullError {
    #[error("degenerate hull: need at least 4 points, got {0}")]
    TooFewPoints(usize),
    #[error("degenerate hull: point {0} is not finite")]
    NonFinite(usize),
    #[error("degenerate hull: all points coincide")]
    Coincident,
    #[error("degenerate hull: all points are collinear")]
    Collinear,
    #[error("degenerate hull: all points are coplanar")]
    Coplanar,
}

/// Oriented plane `normal · x = offset` with unit `normal`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane {
    pub normal: Vec3,
    pub offset: f64,
}

impl Plane {
    pub fn signed_distance(&self, p: Vec3) -> f64 {
        self.normal.dot(p) - self.offset
    }
}

/// Convex polytope with triangulated, outward-facing faces.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexHull {
    vertices: Vec<Vec3>,
    faces: Vec<[u32; 3]>,
    planes: Vec<Plane>,
}

struct Face {
    v: [usize; 3],
    plane: Plane,
    outside: Vec<usize>,
    alive: bool,
}

impl Face {
    fn new(points: &[Vec3], v: [usize; 3]) -> Self {
        Self { v, plane: plane_through(points[v[0]], points[v[1]], points[v[2]]), outside: Vec::new(), alive: true }
    }

    fn edges(&self) -> [(usize, usize); 3] {
        let [a, b, c] = self.v;
        [(a, b), (b, c), (c, a)]
    }
}

fn plane_through(a: Vec3, b: Vec3, c: Vec3) -> Plane {
    let normal = (b - a).cross(c - a).try_normalize().unwrap_or(Vec3::ZERO);
    Plane { normal, offset: normal.dot(a) }
}

impl ConvexHull {
    /// Computes the hull of `points`. Vertices keep the relative order of the input.
    pub fn from_points(points: &[Vec3]) -> Result<Self, HullError> {
        if points.len() < 4 {
            return Err(HullError::TooFewPoints(points.len()));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(HullError::NonFinite(i));
        }
        let simplex = initial_simplex(points)?;
        let scale = points.iter().map(|p| p.x.abs().max(p.y.abs()).max(p.z.abs())).fold(1.0, f64::max);
        let eps = 1e-11 * scale;

        let [a, b, c, d] = simplex;
        let mut faces = vec![
            Face::new(points, [a, b, c]),
            Face::new(points, [a, c, d]),
            Face::new(points, [a, d, b]),
            Face::new(points, [b, d, c]),
        ];
        let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
        for (fi, f) in faces.iter().enumerate() {
            for e in f.edges() {
                edges.insert(e, fi);
            }
        }

        let others: Vec<usize> = (0..points.len()).filter(|i| !simplex.contains(i)).collect();
        assign_outside(points, &mut faces, &[0, 1, 2, 3], &others, eps);

        // Faces only receive outside points when created, so creation order is index order.
        let mut pending: VecDeque<usize> = (0..4).collect();
        while let Some(fi) = pending.pop_front() {
            if !faces[fi].alive || faces[fi].outside.is_empty() {
                continue;
            }
            let eye = farthest_outside(points, &faces[fi]);
            let eye_point = points[eye];

            // Flood-fill the faces that can see the eye point.
            let mut visible = vec![fi];
            let mut is_visible: HashMap<usize, bool> = HashMap::from([(fi, true)]);
            let mut cursor = 0;
            while cursor < visible.len() {
                let f = visible[cursor];
                cursor += 1;
                for (x, y) in faces[f].edges() {
                    let nb = edges[&(y, x)];
                    if is_visible.contains_key(&nb) {
                        continue;
                    }
                    let sees = faces[nb].plane.signed_distance(eye_point) > eps;
                    is_visible.insert(nb, sees);
                    if sees {
                        visible.push(nb);
                    }
                }
            }

            let mut horizon = Vec::new();
            for &f in &visible {
                for (x, y) in faces[f].edges() {
                    if !is_visible[&edges[&(y, x)]] {
                        horizon.push((x, y));
                    }
                }
            }

            let mut orphans = Vec::new();
            for &f in &visible {
                faces[f].alive = false;
                for e in faces[f].edges() {
                    edges.remove(&e);
                }
                orphans.append(&mut faces[f].outside);
            }
            orphans.retain(|&p| p != eye);
            orphans.sort_unstable();

            let mut created = Vec::with_capacity(horizon.len());
            for (x, y) in horizon {
                let nf = faces.len();
                faces.push(Face::new(points, [x, y, eye]));
                for e in faces[nf].edges() {
                    edges.insert(e, nf);
                }
                created.push(nf);
            }
            assign_outside(points, &mut faces, &created, &orphans, eps);
            pending.extend(created);
        }

        let alive: Vec<[usize; 3]> = faces.iter().filter(|f| f.alive).map(|f| f.v).collect();
        let corners = corner_vertices(&faces, &alive);
        if corners.len() < alive.iter().flatten().collect::<HashSet<_>>().len() {
            // Coplanar or collinear inputs can leave vertices inside a flat facet
            // or along a straight edge; the corners alone span the same polytope.
            let subset: Vec<Vec3> = corners.iter().map(|&i| points[i]).collect();
            return Self::from_points(&subset);
        }
        Ok(Self::from_faces(points, alive.into_iter()))
    }

    fn from_faces(points: &[Vec3], faces: impl Iterator<Item = [usize; 3]>) -> Self {
        let faces: Vec<[usize; 3]> = faces.collect();
        let mut used: Vec<usize> = faces.iter().flatten().copied().collect();
        used.sort_unstable();
        used.dedup();
        let mut remap = HashMap::new();
        for (new, &old) in used.iter().enumerate() {
            remap.insert(old, new as u32);
        }
        let vertices: Vec<Vec3> = used.iter().map(|&i| points[i]).collect();
        let faces: Vec<[u32; 3]> = faces.iter().map(|f| f.map(|v| remap[&v])).collect();
        let planes = faces
            .iter()
            .map(|f| plane_through(vertices[f[0] as usize], vertices[f[1] as usize], vertices[f[2] as usize]))
            .collect();
        Self { vertices, faces, planes }
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[u32; 3]] {
        &self.faces
    }

    pub fn planes(&self) -> &[Plane] {
        &self.planes
    }

    pub fn volume(&self) -> f64 {
        self.faces
            .iter()
            .map(|f| {
                let [a, b, c] = f.map(|i| self.vertices[i as usize]);
                a.dot(b.cross(c))
            })
            .sum::<f64>()
            / 6.0
    }

    /// Negative inside (minus the distance to the nearest face plane),
    /// positive outside (Euclidean distance to the hull surface).
    pub fn signed_distance(&self, p: Vec3) -> f64 {
        let max_plane = self.planes.iter().map(|pl| pl.signed_distance(p)).fold(f64::NEG_INFINITY, f64::max);
        if max_plane <= 0.0 {
            return max_plane;
        }
        self.faces
            .iter()
            .map(|f| {
                let [a, b, c] = f.map(|i| self.vertices[i as usize]);
                p.distance(closest_point_on_triangle(p, a, b, c))
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Farthest hull point in direction `dir`.
    pub fn support(&self, dir: Vec3) -> Vec3 {
        let mut best = self.vertices[0];
        for &v in &self.vertices[1..] {
            if v.dot(dir) > best.dot(dir) {
                best = v;
            }
        }
        best
    }

    /// Every directed edge has exactly one opposite twin.
    pub fn is_watertight(&self) -> bool {
        let mut counts: HashMap<(u32, u32), usize> = HashMap::new();
        for f in &self.faces {
            for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                *counts.entry((a, b)).or_default() += 1;
            }
        }
        counts.iter().all(|(&(a, b), &n)| n == 1 && counts.get(&(b, a)) == Some(&1))
    }

    pub fn to_mesh(&self) -> TriMesh {
        TriMesh::new(self.vertices.clone(), self.faces.clone(), None).expect("hull faces index hull vertices")
    }
}

pub fn convex_hull(points: &[Vec3]) -> Result<ConvexHull, HullError> {
    ConvexHull::from_points(points)
}

pub fn signed_distance_to_hull(hull: &ConvexHull, p: Vec3) -> f64 {
    hull.signed_distance(p)
}

/// Hull vertices whose incident face normals span all three dimensions, in input order.
fn corner_vertices(all: &[Face], alive: &[[usize; 3]]) -> Vec<usize> {
    const SPAN: f64 = 1e-9;
    let mut normals: HashMap<usize, Vec<Vec3>> = HashMap::new();
    for f in all.iter().filter(|f| f.alive) {
        for &v in &f.v {
            normals.entry(v).or_default().push(f.plane.normal);
        }
    }
    let mut corners: Vec<usize> = alive.iter().flatten().copied().collect();
    corners.sort_unstable();
    corners.dedup();
    corners.retain(|v| {
        let ns = &normals[v];
        ns.iter().enumerate().any(|(i, a)| {
            ns[i + 1..].iter().enumerate().any(|(j, b)| {
                let ab = a.cross(*b);
                ab.length() > SPAN && ns[i + j + 2..].iter().any(|c| ab.dot(*c).abs() > SPAN)
            })
        })
    });
    corners
}

/// Four affinely independent points, ordered so `(a, b, c)` faces away from `d`.
fn initial_simplex(points: &[Vec3]) -> Result<[usize; 4], HullError> {
    let mut extremes = Vec::with_capacity(6);
    for axis in 0..3 {
        let mut lo = 0;
        let mut hi = 0;
        for (i, p) in points.iter().enumerate() {
            if p[axis] < points[lo][axis] {
                lo = i;
            }
            if p[axis] > points[hi][axis] {
                hi = i;
            }
        }
        extremes.push(lo);
        extremes.push(hi);
    }
    let (mut a, mut b, mut best) = (0, 0, -1.0);
    for (k, &i) in extremes.iter().enumerate() {
        for &j in &extremes[k + 1..] {
            let d = points[i].distance(points[j]);
            if d > best {
                (a, b, best) = (i, j, d);
            }
        }
    }
    if best <= DEGENERACY_TOLERANCE {
        return Err(HullError::Coincident);
    }
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }

    let axis = (points[b] - points[a]).normalize();
    let line_distance = |p: Vec3| {
        let r = p - points[a];
        (r - axis * r.dot(axis)).length()
    };
    let c = argmax(points, line_distance);
    if line_distance(points[c]) <= DEGENERACY_TOLERANCE {
        return Err(HullError::Collinear);
    }

    let plane = plane_through(points[a], points[b], points[c]);
    let d = argmax(points, |p| plane.signed_distance(p).abs());
    let dist = plane.signed_distance(points[d]);
    if dist.abs() <= DEGENERACY_TOLERANCE {
        return Err(HullError::Coplanar);
    }
    Ok(if dist > 0.0 { [a, c, b, d] } else { [a, b, c, d] })
}

fn argmax(points: &[Vec3], f: impl Fn(Vec3) -> f64) -> usize {
    let mut best = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (i, &p) in points.iter().enumerate() {
        let v = f(p);
        if v > best_v {
            best = i;
            best_v = v;
        }
    }
    best
}

fn assign_outside(points: &[Vec3], faces: &mut [Face], candidates: &[usize], pts: &[usize], eps: f64) {
    for &p in pts {
        let mut best = None;
        let mut best_d = eps;
        for &f in candidates {
            let d = faces[f].plane.signed_distance(points[p]);
            if d > best_d {
                best = Some(f);
                best_d = d;
            }
        }
        if let Some(f) = best {
            faces[f].outside.push(p);
        }
    }
}

fn farthest_outside(points: &[Vec3], face: &Face) -> usize {
    let mut best = face.outside[0];
    let mut best_d = face.plane.signed_distance(points[best]);
    for &p in &face.outside[1..] {
        let d = face.plane.signed_distance(points[p]);
        if d > best_d || (d == best_d && p < best) {
            best = p;
            best_d = d;
        }
    }
    best
}
