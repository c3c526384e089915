use super::{GeometryError, Transform, Vec3};

/// Tolerance on stored vertex-normal length.
pub const NORMAL_TOLERANCE: f64 = 1e-6;

/// Indexed triangle mesh with optional per-vertex normals.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TriMesh {
    vertices: Vec<Vec3>,
    triangles: Vec<[u32; 3]>,
    normals: Option<Vec<Vec3>>,
}

impl TriMesh {
    pub fn new(
        vertices: Vec<Vec3>,
        triangles: Vec<[u32; 3]>,
        normals: Option<Vec<Vec3>>,
    ) -> Result<Self, GeometryError> {
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::NonFinite("mesh vertex"));
        }
        for (i, tri) in triangles.iter().enumerate() {
            if let Some(&bad) = tri.iter().find(|&&v| v as usize >= vertices.len()) {
                return Err(GeometryError::IndexOutOfRange { triangle: i, index: bad, vertex_count: vertices.len() });
            }
        }
        if let Some(ns) = &normals {
            if ns.len() != vertices.len() {
                return Err(GeometryError::NormalCountMismatch { normals: ns.len(), vertices: vertices.len() });
            }
            for (i, n) in ns.iter().enumerate() {
                if !n.is_finite() || (n.length() - 1.0).abs() > NORMAL_TOLERANCE {
                    return Err(GeometryError::NonUnitNormal(i));
                }
            }
        }
        Ok(Self { vertices, triangles, normals })
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[u32; 3]] {
        &self.triangles
    }

    pub fn normals(&self) -> Option<&[Vec3]> {
        self.normals.as_deref()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn triangle(&self, index: usize) -> [Vec3; 3] {
        let [a, b, c] = self.triangles[index];
        [self.vertices[a as usize], self.vertices[b as usize], self.vertices[c as usize]]
    }

    /// Unnormalized geometric normal of a triangle (length = twice its area).
    pub fn face_cross(&self, index: usize) -> Vec3 {
        let [a, b, c] = self.triangle(index);
        (b - a).cross(c - a)
    }

    /// Copy of the mesh with `tf` applied to vertices and normals.
    pub fn transformed(&self, tf: &Transform) -> Self {
        Self {
            vertices: self.vertices.iter().map(|&v| tf.apply_point(v)).collect(),
            triangles: self.triangles.clone(),
            normals: self.normals.as_ref().map(|ns| ns.iter().map(|&n| tf.apply_normal(n)).collect()),
        }
    }

    /// Smallest sphere centered on the vertex-box center containing every vertex.
    pub fn bounding_sphere(&self) -> Option<(Vec3, f64)> {
        let first = *self.vertices.first()?;
        let (lo, hi) = self.vertices.iter().fold((first, first), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        let center = (lo + hi) * 0.5;
        let radius = self.vertices.iter().map(|&v| v.distance(center)).fold(0.0, f64::max);
        Some((center, radius))
    }

    /// Axis-aligned box `[-half, half]` with 12 outward-wound triangles, no vertex normals.
    pub fn cuboid(half: Vec3) -> Self {
        let v = |x: f64, y: f64, z: f64| Vec3::new(x * half.x, y * half.y, z * half.z);
        let vertices = vec![
            v(-1.0, -1.0, -1.0),
            v(1.0, -1.0, -1.0),
            v(1.0, 1.0, -1.0),
            v(-1.0, 1.0, -1.0),
            v(-1.0, -1.0, 1.0),
            v(1.0, -1.0, 1.0),
            v(1.0, 1.0, 1.0),
            v(-1.0, 1.0, 1.0),
        ];
        let triangles = vec![
            [0, 3, 2],
            [0, 2, 1],
            [4, 5, 6],
            [4, 6, 7],
            [0, 1, 5],
            [0, 5, 4],
            [3, 7, 6],
            [3, 6, 2],
            [0, 4, 7],
            [0, 7, 3],
            [1, 2, 6],
            [1, 6, 5],
        ];
        Self { vertices, triangles, normals: None }
    }

    /// UV sphere centered at the origin with poles on ±Z and radial vertex normals.
    pub fn uv_sphere(radius: f64, rings: u32, segments: u32) -> Self {
        assert!(rings >= 2 && segments >= 3, "sphere needs at least 2 rings and 3 segments");
        let mut vertices = vec![Vec3::new(0.0, 0.0, -radius)];
        let mut normals = vec![-Vec3::Z];
        for r in 1..rings {
            let polar = std::f64::consts::PI * f64::from(r) / f64::from(rings);
            let (sp, cp) = polar.sin_cos();
            for s in 0..segments {
                let az = std::f64::consts::TAU * f64::from(s) / f64::from(segments);
                let (sa, ca) = az.sin_cos();
                let n = Vec3::new(sp * ca, sp * sa, -cp);
                vertices.push(n * radius);
                normals.push(n);
            }
        }
        vertices.push(Vec3::new(0.0, 0.0, radius));
        normals.push(Vec3::Z);
        let top = vertices.len() as u32 - 1;
        let ring = |r: u32, s: u32| 1 + (r - 1) * segments + s % segments;

        let mut triangles = Vec::new();
        for s in 0..segments {
            triangles.push([0, ring(1, s + 1), ring(1, s)]);
        }
        for r in 1..rings - 1 {
            for s in 0..segments {
                let (a, b) = (ring(r, s), ring(r, s + 1));
                let (c, d) = (ring(r + 1, s), ring(r + 1, s + 1));
                triangles.push([a, b, d]);
                triangles.push([a, d, c]);
            }
        }
        for s in 0..segments {
            triangles.push([top, ring(rings - 1, s), ring(rings - 1, s + 1)]);
        }
        Self { vertices, triangles, normals: Some(normals) }
    }

    /// Two-triangle rectangle in the local XY plane facing +Z, centered at the origin.
    pub fn quad(width: f64, height: f64) -> Self {
        let (w, h) = (width * 0.5, height * 0.5);
        Self {
            vertices: vec![Vec3::new(-w, -h, 0.0), Vec3::new(w, -h, 0.0), Vec3::new(w, h, 0.0), Vec3::new(-w, h, 0.0)],
            triangles: vec![[0, 1, 2], [0, 2, 3]],
            normals: None,
        }
    }

    /// Rebuilds vertex normals as the area-weighted average of incident face normals.
    pub fn with_smooth_normals(mut self) -> Self {
        let mut acc = vec![Vec3::ZERO; self.vertices.len()];
        for tri in &self.triangles {
            let [a, b, c] = *tri;
            let n = (self.vertices[b as usize] - self.vertices[a as usize])
                .cross(self.vertices[c as usize] - self.vertices[a as usize]);
            for v in tri {
                acc[*v as usize] += n;
            }
        }
        self.normals = Some(acc.into_iter().map(|n| n.try_normalize().unwrap_or(Vec3::Z)).collect());
        self
    }
}
