//! The blended scene graph: real (hull- or mesh-approximated) and virtual
//! nodes, panels, scene-level raycasts and the silhouette cache.

mod format;
pub(crate) mod silhouette;

use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::config::ConfigOverrides;
use crate::cursor::ViewPose;
use crate::geometry::{Bvh, ConvexHull, GeometryError, Ray, SurfaceHit, Transform, TriMesh, Vec3, TIE_EPSILON};

pub use format::{parse_config, parse_scene, scene_to_string, write_scene};
pub use silhouette::{angular_gap, build_silhouette_cache, NodeSilhouette, SilhouetteCache, SilhouetteSample};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SceneError {
    #[error("duplicate node id \"{id}\" at {path}")]
    DuplicateId { id: String, path: String },
    #[error("unknown node id \"{0}\"")]
    UnknownNode(String),
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("{path}: {message} at line {line} column {column}")]
    Parse { path: String, message: String, line: usize, column: usize },
}

impl SceneError {
    pub(crate) fn invalid(path: impl Into<String>, message: impl ToString) -> Self {
        Self::Invalid { path: path.into(), message: message.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SemanticLabel {
    pub class_name: String,
    pub confidence: f64,
}

impl SemanticLabel {
    pub fn new(class_name: &str, confidence: f64) -> Self {
        Self { class_name: class_name.to_owned(), confidence }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.class_name.is_empty() {
            return Err("label class must not be empty".into());
        }
        if !(0.0..=1.0).contains(&self.confidence) {
            return Err(format!("label confidence {} outside [0, 1]", self.confidence));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OriginKind {
    Real,
    Virtual,
}

/// A flat 2D surface in the node's local XY plane, centered at the origin, front face +Z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanelSpec {
    pub width: f64,
    pub height: f64,
    pub resolution_x: u32,
    pub resolution_y: u32,
}

impl PanelSpec {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.width > 0.0 && self.height > 0.0 && self.width.is_finite() && self.height.is_finite()) {
            return Err("panel extents must be positive".into());
        }
        if self.resolution_x == 0 || self.resolution_y == 0 {
            return Err("panel resolution must be positive".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    Mesh(TriMesh),
    /// Hull computed from `points` (kept so the scene re-serializes losslessly).
    Hull {
        points: Vec<Vec3>,
        hull: ConvexHull,
    },
    Panel(PanelSpec),
}

impl Geometry {
    pub fn hull_from_points(points: Vec<Vec3>) -> Result<Self, GeometryError> {
        let hull = ConvexHull::from_points(&points)?;
        Ok(Self::Hull { points, hull })
    }

    /// Triangle mesh in the node's local frame.
    pub fn local_mesh(&self) -> TriMesh {
        match self {
            Self::Mesh(m) => m.clone(),
            Self::Hull { hull, .. } => hull.to_mesh(),
            Self::Panel(p) => TriMesh::quad(p.width, p.height),
        }
    }
}

/// World-space frame of a panel: `point(u, v) = top_left + u·right + v·down`.
///
/// Views use `right = up × forward`, so for someone facing the front (+Z) face
/// "right" is local −X: `u` runs from local +X to −X and `v` from +Y to −Y.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanelFrame {
    pub top_left: Vec3,
    pub right: Vec3,
    pub down: Vec3,
    /// Unit front normal.
    pub normal: Vec3,
}

impl PanelFrame {
    pub fn new(spec: &PanelSpec, tf: &Transform) -> Self {
        let (w, h) = (spec.width * 0.5, spec.height * 0.5);
        let top_left = tf.apply_point(Vec3::new(w, h, 0.0));
        let top_right = tf.apply_point(Vec3::new(-w, h, 0.0));
        let bottom_left = tf.apply_point(Vec3::new(w, -h, 0.0));
        Self { top_left, right: top_right - top_left, down: bottom_left - top_left, normal: tf.apply_normal(Vec3::Z) }
    }

    pub fn point(&self, u: f64, v: f64) -> Vec3 {
        self.top_left + self.right * u + self.down * v
    }

    /// Panel coordinates of a point on (or projected onto) the panel plane.
    pub fn uv(&self, p: Vec3) -> (f64, f64) {
        let r = p - self.top_left;
        (r.dot(self.right) / self.right.length_squared(), r.dot(self.down) / self.down.length_squared())
    }
}

/// World-space geometry of a node, rebuilt whenever its transform changes.
#[derive(Debug)]
pub struct NodeWorld {
    pub mesh: TriMesh,
    pub bvh: Bvh,
    pub panel: Option<PanelFrame>,
    pub bounding_sphere: Option<(Vec3, f64)>,
}

impl NodeWorld {
    fn build(geometry: &Geometry, tf: &Transform, leaf_size: usize) -> Self {
        let mesh = geometry.local_mesh().transformed(tf);
        let bvh = Bvh::build_with_leaf_size(&mesh, leaf_size);
        let panel = match geometry {
            Geometry::Panel(p) => Some(PanelFrame::new(p, tf)),
            _ => None,
        };
        let bounding_sphere = mesh.bounding_sphere();
        Self { mesh, bvh, panel, bounding_sphere }
    }

    /// Nearest hit on this node. Panels only accept rays arriving at their front face
    /// unless `double_sided` is set.
    pub fn raycast(&self, ray: &Ray, double_sided: bool) -> Option<SurfaceHit> {
        match &self.panel {
            Some(frame) => {
                if !double_sided && ray.direction.dot(frame.normal) >= 0.0 {
                    return None;
                }
                let mut hit = self.bvh.raycast(&self.mesh, ray)?;
                hit.normal = frame.normal;
                Some(hit)
            }
            None => self.bvh.raycast(&self.mesh, ray),
        }
    }
}

#[derive(Debug)]
pub struct SceneNode {
    pub id: String,
    pub label: SemanticLabel,
    pub origin_kind: OriginKind,
    pub transform: Transform,
    pub geometry: Geometry,
    pub interactable: bool,
    pub dynamic: bool,
    world: OnceLock<Arc<NodeWorld>>,
}

impl Clone for SceneNode {
    fn clone(&self) -> Self {
        Self {
            id: self.id.clone(),
            label: self.label.clone(),
            origin_kind: self.origin_kind,
            transform: self.transform,
            geometry: self.geometry.clone(),
            interactable: self.interactable,
            dynamic: self.dynamic,
            world: self.world.clone(),
        }
    }
}

impl PartialEq for SceneNode {
    fn eq(&self, o: &Self) -> bool {
        self.id == o.id
            && self.label == o.label
            && self.origin_kind == o.origin_kind
            && self.transform == o.transform
            && self.geometry == o.geometry
            && self.interactable == o.interactable
            && self.dynamic == o.dynamic
    }
}

impl SceneNode {
    pub fn new(
        id: &str,
        label: SemanticLabel,
        origin_kind: OriginKind,
        transform: Transform,
        geometry: Geometry,
    ) -> Self {
        Self {
            id: id.to_owned(),
            label,
            origin_kind,
            transform,
            geometry,
            interactable: true,
            dynamic: false,
            world: OnceLock::new(),
        }
    }

    pub fn with_interactable(mut self, interactable: bool) -> Self {
        self.interactable = interactable;
        self
    }

    pub fn is_panel(&self) -> bool {
        matches!(self.geometry, Geometry::Panel(_))
    }

    pub fn panel_spec(&self) -> Option<&PanelSpec> {
        match &self.geometry {
            Geometry::Panel(p) => Some(p),
            _ => None,
        }
    }

    /// World geometry, built on first use after construction or a transform change.
    pub fn world(&self, leaf_size: usize) -> Arc<NodeWorld> {
        self.world.get_or_init(|| Arc::new(NodeWorld::build(&self.geometry, &self.transform, leaf_size))).clone()
    }

    fn invalidate(&mut self) {
        self.world = OnceLock::new();
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.id.is_empty() {
            return Err("node id must not be empty".into());
        }
        if self.id == "-" || self.id.chars().any(|c| c.is_whitespace() || c == ',') {
            return Err(format!("node id {:?} must not be \"-\" or contain whitespace or commas", self.id));
        }
        self.label.validate()?;
        self.transform.validate().map_err(|e| e.to_string())?;
        match &self.geometry {
            Geometry::Panel(p) => {
                p.validate()?;
                if self.origin_kind == OriginKind::Real {
                    return Err("real nodes must carry a mesh or hull".into());
                }
            }
            Geometry::Mesh(_) | Geometry::Hull { .. } => {}
        }
        Ok(())
    }
}

/// A nearest-hit result across the whole scene.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneHit {
    pub node_index: usize,
    pub node_id: String,
    pub hit: SurfaceHit,
}

#[derive(Debug, Clone)]
pub struct Scene {
    nodes: Vec<SceneNode>,
    view: ViewPose,
    pub config_overrides: ConfigOverrides,
    leaf_size: usize,
    revision: u64,
    interactive_revision: u64,
}

impl PartialEq for Scene {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.view == other.view && self.config_overrides == other.config_overrides
    }
}

impl Scene {
    pub fn new(view: ViewPose, nodes: Vec<SceneNode>) -> Result<Self, SceneError> {
        let mut scene = Self {
            nodes: Vec::with_capacity(nodes.len()),
            view,
            config_overrides: ConfigOverrides::default(),
            leaf_size: crate::geometry::DEFAULT_MAX_LEAF,
            revision: 0,
            interactive_revision: 0,
        };
        for node in nodes {
            scene.add_node(node)?;
        }
        Ok(scene)
    }

    /// Initial view pose stored in the scene.
    pub fn view(&self) -> &ViewPose {
        &self.view
    }

    pub fn nodes(&self) -> &[SceneNode] {
        &self.nodes
    }

    pub fn node(&self, id: &str) -> Option<&SceneNode> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    /// Incremented on every mutation.
    pub fn revision(&self) -> u64 {
        self.revision
    }

    /// Incremented on mutations that can change what the cursor sees.
    pub fn interactive_revision(&self) -> u64 {
        self.interactive_revision
    }

    pub fn set_bvh_leaf_size(&mut self, leaf_size: usize) {
        self.leaf_size = leaf_size.max(1);
        for n in &mut self.nodes {
            n.invalidate();
        }
        self.bump(true);
    }

    pub fn bvh_leaf_size(&self) -> usize {
        self.leaf_size
    }

    fn bump(&mut self, interactive: bool) {
        self.revision += 1;
        if interactive {
            self.interactive_revision += 1;
        }
    }

    pub fn add_node(&mut self, mut node: SceneNode) -> Result<(), SceneError> {
        let path = format!("nodes[{}]", self.nodes.len());
        node.validate().map_err(|m| SceneError::invalid(path.clone(), m))?;
        if self.node(&node.id).is_some() {
            return Err(SceneError::DuplicateId { id: node.id, path: format!("{path}.id") });
        }
        node.invalidate();
        let interactive = node.interactable;
        self.nodes.push(node);
        self.bump(interactive);
        Ok(())
    }

    pub fn remove_node(&mut self, id: &str) -> Result<SceneNode, SceneError> {
        let i = self.node_index(id).ok_or_else(|| SceneError::UnknownNode(id.to_owned()))?;
        let node = self.nodes.remove(i);
        self.bump(node.interactable);
        Ok(node)
    }

    /// Replaces a node's transform; its world geometry is rebuilt lazily on the next query.
    pub fn update_node_transform(&mut self, id: &str, transform: Transform) -> Result<(), SceneError> {
        transform.validate().map_err(|e| SceneError::invalid(format!("{id}.transform"), e))?;
        let i = self.node_index(id).ok_or_else(|| SceneError::UnknownNode(id.to_owned()))?;
        let node = &mut self.nodes[i];
        node.transform = transform;
        node.invalidate();
        let interactive = node.interactable;
        self.bump(interactive);
        Ok(())
    }

    pub fn set_interactable(&mut self, id: &str, interactable: bool) -> Result<(), SceneError> {
        let i = self.node_index(id).ok_or_else(|| SceneError::UnknownNode(id.to_owned()))?;
        if self.nodes[i].interactable != interactable {
            self.nodes[i].interactable = interactable;
            self.bump(true);
        }
        Ok(())
    }

    pub fn node_world(&self, index: usize) -> Arc<NodeWorld> {
        self.nodes[index].world(self.leaf_size)
    }

    /// Nearest interactable hit; see [`raycast_scene`].
    pub fn raycast(&self, ray: &Ray) -> Option<SceneHit> {
        self.raycast_excluding(ray, None)
    }

    /// Like [`Scene::raycast`] but also treats node `exclude` as transparent.
    pub fn raycast_excluding(&self, ray: &Ray, exclude: Option<&str>) -> Option<SceneHit> {
        let mut hits = Vec::new();
        for (i, node) in self.nodes.iter().enumerate() {
            if !node.interactable || exclude == Some(node.id.as_str()) {
                continue;
            }
            if let Some(hit) = self.node_world(i).raycast(ray, false) {
                hits.push((i, hit));
            }
        }
        let t_min = hits.iter().map(|(_, h)| h.t).fold(f64::INFINITY, f64::min);
        let tied = hits.into_iter().filter(|(_, h)| h.t - t_min < TIE_EPSILON);
        tied.min_by_key(|&(i, _)| (self.nodes[i].origin_kind == OriginKind::Real, i)).map(|(i, hit)| SceneHit {
            node_index: i,
            node_id: self.nodes[i].id.clone(),
            hit,
        })
    }
}

/// Nearest hit across all interactable nodes; non-interactable nodes are transparent,
/// panels are hit only on their front face. Among hits within 1e-9 of the nearest,
/// virtual nodes win over real ones (content anchored on a wall stays clickable),
/// then the earlier node.
pub fn raycast_scene(scene: &Scene, ray: &Ray) -> Option<SceneHit> {
    scene.raycast(ray)
}

pub fn update_node_transform(scene: &mut Scene, id: &str, transform: Transform) -> Result<(), SceneError> {
    scene.update_node_transform(id, transform)
}
