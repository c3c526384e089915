//! Bounding volume hierarchy over a [`TriMesh`].
//!
//! Construction splits at the centroid median along the longest axis of the
//! centroid bounds, which makes the tree a pure function of the mesh. Boxes are
//! padded slightly so the slab test never rejects a boundary hit that the exact
//! triangle test would accept.

use super::intersect::{ray_triangle_intersect, surface_hit, TriangleHit, TIE_EPSILON};
use super::{Ray, SurfaceHit, TriMesh, Vec3};

pub const DEFAULT_MAX_LEAF: usize = 4;

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Vec3,
    pub max: Vec3,
}

impl Aabb {
    pub const EMPTY: Self = Self { min: Vec3::splat(f64::INFINITY), max: Vec3::splat(f64::NEG_INFINITY) };

    pub fn grow(self, p: Vec3) -> Self {
        Self { min: self.min.min(p), max: self.max.max(p) }
    }

    pub fn union(self, o: Self) -> Self {
        Self { min: self.min.min(o.min), max: self.max.max(o.max) }
    }

    pub fn contains_box(&self, o: &Self) -> bool {
        (0..3).all(|a| self.min[a] <= o.min[a] && self.max[a] >= o.max[a])
    }

    pub fn extent(&self) -> Vec3 {
        self.max - self.min
    }

    fn padded(self) -> Self {
        let e = self.extent();
        let pad = 1e-9 * (1.0 + e.x.abs().max(e.y.abs()).max(e.z.abs()))
            + 1e-9 * (1.0 + self.min.length().max(self.max.length()));
        Self { min: self.min - Vec3::splat(pad), max: self.max + Vec3::splat(pad) }
    }

    /// Entry parameter of the ray into the box, if it enters at some `t ≤ t_max`.
    pub fn ray_entry(&self, ray: &Ray, t_max: f64) -> Option<f64> {
        let mut lo = 0.0f64;
        let mut hi = t_max;
        for a in 0..3 {
            let o = ray.origin[a];
            let d = ray.direction[a];
            if d == 0.0 {
                if o < self.min[a] || o > self.max[a] {
                    return None;
                }
                continue;
            }
            let inv = 1.0 / d;
            let (mut t0, mut t1) = ((self.min[a] - o) * inv, (self.max[a] - o) * inv);
            if t0 > t1 {
                std::mem::swap(&mut t0, &mut t1);
            }
            lo = lo.max(t0);
            hi = hi.min(t1);
            if lo > hi {
                return None;
            }
        }
        Some(lo)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BvhNodeKind {
    /// Triangles `indices[start..start + count]`.
    Leaf {
        start: u32,
        count: u32,
    },
    Inner {
        left: u32,
        right: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BvhNode {
    pub bounds: Aabb,
    pub kind: BvhNodeKind,
}

/// Binary BVH; node 0 is the root when the mesh is non-empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Bvh {
    nodes: Vec<BvhNode>,
    indices: Vec<u32>,
    max_leaf: usize,
}

struct BuildItem {
    triangle: u32,
    centroid: Vec3,
    bounds: Aabb,
}

impl Bvh {
    pub fn build(mesh: &TriMesh) -> Self {
        Self::build_with_leaf_size(mesh, DEFAULT_MAX_LEAF)
    }

    pub fn build_with_leaf_size(mesh: &TriMesh, max_leaf: usize) -> Self {
        let max_leaf = max_leaf.max(1);
        let mut items: Vec<BuildItem> = (0..mesh.triangles().len())
            .map(|i| {
                let [a, b, c] = mesh.triangle(i);
                BuildItem {
                    triangle: i as u32,
                    centroid: (a + b + c) / 3.0,
                    bounds: Aabb::EMPTY.grow(a).grow(b).grow(c),
                }
            })
            .collect();
        let mut bvh = Self { nodes: Vec::new(), indices: Vec::with_capacity(items.len()), max_leaf };
        if !items.is_empty() {
            bvh.build_node(&mut items);
        }
        bvh
    }

    fn build_node(&mut self, items: &mut [BuildItem]) -> u32 {
        let index = self.nodes.len() as u32;
        self.nodes.push(BvhNode { bounds: Aabb::EMPTY, kind: BvhNodeKind::Leaf { start: 0, count: 0 } });

        if items.len() <= self.max_leaf {
            let bounds = items.iter().fold(Aabb::EMPTY, |b, it| b.union(it.bounds)).padded();
            let start = self.indices.len() as u32;
            self.indices.extend(items.iter().map(|it| it.triangle));
            self.nodes[index as usize] =
                BvhNode { bounds, kind: BvhNodeKind::Leaf { start, count: items.len() as u32 } };
            return index;
        }

        let centroids = items.iter().fold(Aabb::EMPTY, |b, it| b.grow(it.centroid));
        let e = centroids.extent();
        // Strict comparisons keep the lower axis on ties.
        let mut axis = 0;
        if e.y > e[axis] {
            axis = 1;
        }
        if e.z > e[axis] {
            axis = 2;
        }
        items.sort_by(|a, b| a.centroid[axis].total_cmp(&b.centroid[axis]).then(a.triangle.cmp(&b.triangle)));
        let mid = items.len() / 2;
        let (lo, hi) = items.split_at_mut(mid);
        let left = self.build_node(lo);
        let right = self.build_node(hi);
        let bounds = self.nodes[left as usize].bounds.union(self.nodes[right as usize].bounds);
        self.nodes[index as usize] = BvhNode { bounds, kind: BvhNodeKind::Inner { left, right } };
        index
    }

    pub fn nodes(&self) -> &[BvhNode] {
        &self.nodes
    }

    pub fn max_leaf(&self) -> usize {
        self.max_leaf
    }

    /// Triangle indices referenced by a leaf.
    pub fn leaf_triangles(&self, start: u32, count: u32) -> &[u32] {
        &self.indices[start as usize..(start + count) as usize]
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nearest triangle crossing; ties within [`TIE_EPSILON`] go to the lower triangle index.
    pub fn nearest_triangle(&self, mesh: &TriMesh, ray: &Ray) -> Option<(u32, TriangleHit)> {
        if self.nodes.is_empty() {
            return None;
        }
        let mut best_t = f64::INFINITY;
        let mut candidates: Vec<(u32, TriangleHit)> = Vec::new();
        let mut stack = vec![0u32];
        while let Some(n) = stack.pop() {
            let node = &self.nodes[n as usize];
            if node.bounds.ray_entry(ray, best_t + TIE_EPSILON).is_none() {
                continue;
            }
            match node.kind {
                BvhNodeKind::Leaf { start, count } => {
                    for &tri in self.leaf_triangles(start, count) {
                        let [a, b, c] = mesh.triangle(tri as usize);
                        if let Ok(Some(hit)) = ray_triangle_intersect(ray, a, b, c) {
                            if hit.t < best_t + TIE_EPSILON {
                                best_t = best_t.min(hit.t);
                                candidates.push((tri, hit));
                            }
                        }
                    }
                }
                BvhNodeKind::Inner { left, right } => {
                    let tl = self.nodes[left as usize].bounds.ray_entry(ray, best_t + TIE_EPSILON);
                    let tr = self.nodes[right as usize].bounds.ray_entry(ray, best_t + TIE_EPSILON);
                    match (tl, tr) {
                        (Some(a), Some(b)) if a <= b => {
                            stack.push(right);
                            stack.push(left);
                        }
                        (Some(_), Some(_)) => {
                            stack.push(left);
                            stack.push(right);
                        }
                        (Some(_), None) => stack.push(left),
                        (None, Some(_)) => stack.push(right),
                        (None, None) => {}
                    }
                }
            }
        }
        select_nearest(candidates)
    }

    /// Nearest hit on `mesh` (which must be the mesh this BVH was built from).
    pub fn raycast(&self, mesh: &TriMesh, ray: &Ray) -> Option<SurfaceHit> {
        self.nearest_triangle(mesh, ray).map(|(tri, hit)| surface_hit(mesh, ray, tri, hit))
    }
}

/// Minimum `t`, then the lowest index among hits within [`TIE_EPSILON`] of it.
pub(crate) fn select_nearest<I: Copy + Ord>(hits: Vec<(I, TriangleHit)>) -> Option<(I, TriangleHit)> {
    let t_min = hits.iter().map(|(_, h)| h.t).fold(f64::INFINITY, f64::min);
    hits.into_iter().filter(|(_, h)| h.t - t_min < TIE_EPSILON).min_by_key(|(i, _)| *i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad_at(z: f64) -> [[Vec3; 3]; 2] {
        let v = |x, y| Vec3::new(x, y, z);
        [[v(-0.5, -0.5), v(0.5, -0.5), v(0.5, 0.5)], [v(-0.5, -0.5), v(0.5, 0.5), v(-0.5, 0.5)]]
    }

    fn soup(tris: &[[Vec3; 3]]) -> TriMesh {
        let vertices = tris.iter().flatten().copied().collect();
        let triangles = (0..tris.len() as u32).map(|i| [3 * i, 3 * i + 1, 3 * i + 2]).collect();
        TriMesh::new(vertices, triangles, None).unwrap()
    }

    #[test]
    fn single_triangle_is_one_leaf() {
        let mesh = soup(&[quad_at(0.0)[0]]);
        let bvh = Bvh::build(&mesh);
        assert_eq!(bvh.nodes().len(), 1);
        assert_eq!(bvh.nodes()[0].kind, BvhNodeKind::Leaf { start: 0, count: 1 });
        assert_eq!(bvh.leaf_triangles(0, 1), &[0]);
    }

    #[test]
    fn empty_mesh_always_misses() {
        let mesh = TriMesh::default();
        let bvh = Bvh::build(&mesh);
        assert!(bvh.is_empty());
        let ray = Ray::new(Vec3::ZERO, Vec3::Z).unwrap();
        assert!(bvh.raycast(&mesh, &ray).is_none());
    }

    #[test]
    fn nearest_of_two_parallel_quads_wins() {
        let mut tris = quad_at(2.0).to_vec();
        tris.extend(quad_at(1.0));
        let mesh = soup(&tris);
        let bvh = Bvh::build_with_leaf_size(&mesh, 1);
        let ray = Ray::new(Vec3::new(0.1, 0.2, 0.0), Vec3::Z).unwrap();
        let hit = bvh.raycast(&mesh, &ray).unwrap();
        assert!((hit.t - 1.0).abs() < 1e-12);
        assert!(hit.triangle_index >= 2);
        // Face normal is oriented against the ray.
        assert_eq!(hit.normal, -Vec3::Z);

        let miss = Ray::new(Vec3::new(3.0, 0.0, 0.0), Vec3::Z).unwrap();
        assert!(bvh.raycast(&mesh, &miss).is_none());
    }

    #[test]
    fn coincident_triangles_tie_to_lower_index() {
        let q = quad_at(1.0);
        let mesh = soup(&[q[0], q[1], q[0], q[1]]);
        let bvh = Bvh::build_with_leaf_size(&mesh, 1);
        let ray = Ray::new(Vec3::new(0.2, -0.1, 0.0), Vec3::Z).unwrap();
        assert_eq!(bvh.raycast(&mesh, &ray).unwrap().triangle_index, 0);
    }

    #[test]
    fn ray_box_entry_handles_axis_aligned_rays() {
        let b = Aabb { min: Vec3::splat(-1.0), max: Vec3::splat(1.0) };
        let inside = Ray::new(Vec3::ZERO, Vec3::X).unwrap();
        assert_eq!(b.ray_entry(&inside, f64::INFINITY), Some(0.0));
        let outside = Ray::new(Vec3::new(0.0, 2.0, -5.0), Vec3::Z).unwrap();
        assert_eq!(b.ray_entry(&outside, f64::INFINITY), None);
        let front = Ray::new(Vec3::new(0.0, 0.0, -5.0), Vec3::Z).unwrap();
        assert_eq!(b.ray_entry(&front, f64::INFINITY), Some(4.0));
        assert_eq!(b.ray_entry(&front, 3.0), None);
    }
}
