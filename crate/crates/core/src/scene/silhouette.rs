//! Per-view silhouette samples: the "invisible mesh" that lets void depth
//! interpolate between the outlines of visible nodes.
//!
//! Each node's outline is found by sweeping rays around its bounding cone at
//! fixed azimuths and bisecting the hit/miss boundary, so meshes, hulls and
//! panels are handled uniformly.

use thiserror::Error;

use super::Scene;
use crate::config::EngineConfig;
use crate::cursor::ViewPose;
use crate::geometry::{Ray, Vec3};

const COARSE_STEPS: usize = 32;
const BISECTION_STEPS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SilhouetteSample {
    /// Unit direction from the view origin.
    pub direction: Vec3,
    /// Distance along `direction` to the node's surface.
    pub depth: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeSilhouette {
    pub node_id: String,
    pub samples: Vec<SilhouetteSample>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SilhouetteCache {
    pub origin: Vec3,
    pub nodes: Vec<NodeSilhouette>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("node \"{0}\" is not visible from the current view")]
pub struct NotVisible(pub String);

impl SilhouetteCache {
    pub fn empty(origin: Vec3) -> Self {
        Self { origin, nodes: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&NodeSilhouette> {
        self.nodes.iter().find(|n| n.node_id == id)
    }
}

/// Samples the outline of every interactable node as seen from `view.origin`.
/// Nodes lying entirely behind the view plane are omitted.
pub fn build_silhouette_cache(scene: &Scene, view: &ViewPose, config: &EngineConfig) -> SilhouetteCache {
    let origin = view.origin;
    let mut nodes = Vec::new();
    for (i, node) in scene.nodes().iter().enumerate() {
        if !node.interactable {
            continue;
        }
        let world = scene.node_world(i);
        if world.mesh.is_empty() {
            continue;
        }
        if world.mesh.vertices().iter().all(|&v| (v - origin).dot(view.forward) <= 0.0) {
            continue;
        }
        let Some((center, radius)) = world.bounding_sphere else { continue };
        let to_center = center - origin;
        let dist = to_center.length();
        let axis = to_center.try_normalize().unwrap_or(view.forward);
        let cone = if radius < dist { (radius / dist).asin() } else { std::f64::consts::PI };
        let theta_max = (cone * 1.01 + 1e-6).min(std::f64::consts::PI);

        let u = view.up.cross(axis).try_normalize().unwrap_or_else(|| axis.any_orthonormal());
        let w = axis.cross(u);
        let cast = |theta: f64, phi: f64| {
            let radial = u * phi.cos() + w * phi.sin();
            let dir = (axis * theta.cos() + radial * theta.sin()).normalize();
            let ray = Ray { origin, direction: dir };
            world.raycast(&ray, true).map(|h| (dir, h.t))
        };

        let count = config.silhouette_samples;
        let mut samples = Vec::with_capacity(count);
        for k in 0..count {
            let phi = std::f64::consts::TAU * k as f64 / count as f64;
            let mut miss_theta = theta_max;
            let mut found = None;
            for j in 0..=COARSE_STEPS {
                let theta = theta_max * (1.0 - j as f64 / COARSE_STEPS as f64);
                match cast(theta, phi) {
                    Some(hit) => {
                        found = Some((theta, hit));
                        break;
                    }
                    None => miss_theta = theta,
                }
            }
            let sample = match found {
                Some((mut hit_theta, mut hit)) => {
                    for _ in 0..BISECTION_STEPS {
                        let mid = 0.5 * (hit_theta + miss_theta);
                        match cast(mid, phi) {
                            Some(h) => {
                                hit_theta = mid;
                                hit = h;
                            }
                            None => miss_theta = mid,
                        }
                    }
                    SilhouetteSample { direction: hit.0, depth: hit.1 }
                }
                None => nearest_vertex_sample(&world.mesh, origin, axis),
            };
            samples.push(sample);
        }
        nodes.push(NodeSilhouette { node_id: node.id.clone(), samples });
    }
    SilhouetteCache { origin, nodes }
}

/// Fallback when a sweep misses the node entirely: the vertex closest to the cone axis.
fn nearest_vertex_sample(mesh: &crate::geometry::TriMesh, origin: Vec3, axis: Vec3) -> SilhouetteSample {
    let mut best: Option<(f64, Vec3, f64)> = None;
    for &v in mesh.vertices() {
        let r = v - origin;
        let Some(dir) = r.try_normalize() else { continue };
        let c = dir.dot(axis);
        if best.is_none_or(|(bc, _, _)| c > bc) {
            best = Some((c, dir, r.length()));
        }
    }
    let (_, direction, depth) = best.unwrap_or((0.0, axis, 0.0));
    SilhouetteSample { direction, depth }
}

/// Angular distance (radians) from `direction` to a node's outline, and the
/// surface depth at the closest outline sample. A direction that hits the node
/// has gap 0 and that hit's depth. Equal gaps resolve to the lower sample index.
pub fn angular_gap(
    cache: &SilhouetteCache,
    scene: &Scene,
    node_id: &str,
    direction: Vec3,
) -> Result<(f64, f64), NotVisible> {
    let entry = cache.get(node_id).ok_or_else(|| NotVisible(node_id.to_owned()))?;
    let index = scene.node_index(node_id).ok_or_else(|| NotVisible(node_id.to_owned()))?;
    let ray = Ray { origin: cache.origin, direction };
    if let Some(hit) = scene.node_world(index).raycast(&ray, false) {
        return Ok((0.0, hit.t));
    }
    Ok(gap_to_samples(&entry.samples, direction))
}

pub(crate) fn gap_to_samples(samples: &[SilhouetteSample], direction: Vec3) -> (f64, f64) {
    let mut best = (f64::INFINITY, 0.0);
    for s in samples {
        let a = direction.angle_to(s.direction);
        if a < best.0 {
            best = (a, s.depth);
        }
    }
    best
}
