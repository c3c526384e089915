//! The `.wmscene` text format: strict JSON in, 17-significant-digit JSON out.

use std::collections::BTreeMap;

use serde::Deserialize;

use super::{Geometry, OriginKind, PanelSpec, Scene, SceneError, SceneNode, SemanticLabel};
use crate::config::{ConfigOverrides, MenuItem, NodeTemplate};
use crate::cursor::ViewPose;
use crate::geometry::{ConvexHull, Quat, Transform, TriMesh, Vec3};
use crate::numfmt::write_f64;

/// Quaternions further than this from unit norm are rejected; closer ones are renormalized.
const QUATERNION_SLACK: f64 = 1e-6;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneDoc {
    view: ViewDoc,
    nodes: Vec<NodeDoc>,
    #[serde(default)]
    config: Option<ConfigDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ViewDoc {
    position: [f64; 3],
    forward: [f64; 3],
    up: [f64; 3],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    id: String,
    label: LabelDoc,
    origin: OriginDoc,
    #[serde(default)]
    transform: Option<TransformDoc>,
    geometry: GeometryDoc,
    #[serde(default = "default_true")]
    interactable: bool,
    #[serde(default)]
    dynamic: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LabelDoc {
    class: String,
    confidence: f64,
}

#[derive(Deserialize, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum OriginDoc {
    Real,
    Virtual,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TransformDoc {
    #[serde(default)]
    t: Option<[f64; 3]>,
    #[serde(default)]
    r: Option<[f64; 4]>,
    #[serde(default)]
    s: Option<[f64; 3]>,
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum GeometryDoc {
    Mesh(MeshDoc),
    HullPoints(Vec<[f64; 3]>),
    Panel(PanelDoc),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MeshDoc {
    vertices: Vec<[f64; 3]>,
    triangles: Vec<[u32; 3]>,
    #[serde(default)]
    normals: Option<Vec<[f64; 3]>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PanelDoc {
    w: f64,
    h: f64,
    px: u32,
    py: u32,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    angular_gain: Option<f64>,
    pitch_limit: Option<f64>,
    panel_gain: Option<f64>,
    idw_power: Option<f64>,
    idw_epsilon: Option<f64>,
    k_nearest: Option<usize>,
    default_depth: Option<f64>,
    silhouette_samples: Option<usize>,
    scroll_depth_factor: Option<f64>,
    depth_smoothing: Option<f64>,
    snap_distance: Option<f64>,
    bvh_leaf_size: Option<usize>,
    #[serde(default)]
    actions: BTreeMap<String, Vec<MenuItemDoc>>,
    #[serde(default)]
    templates: BTreeMap<String, TemplateDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MenuItemDoc {
    label: String,
    action: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TemplateDoc {
    label: LabelDoc,
    geometry: GeometryDoc,
}

fn deserialize<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, SceneError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        SceneError::Parse {
            path,
            message: strip_position(&inner.to_string()),
            line: inner.line(),
            column: inner.column(),
        }
    })?;
    de.end().map_err(|e| SceneError::Parse {
        path: ".".into(),
        message: strip_position(&e.to_string()),
        line: e.line(),
        column: e.column(),
    })?;
    Ok(value)
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_owned(),
        None => msg.to_owned(),
    }
}

/// Parses and validates a scene document.
pub fn parse_scene(text: &str) -> Result<Scene, SceneError> {
    let doc: SceneDoc = deserialize(text)?;
    let view = ViewPose::new(
        Vec3::from_array(doc.view.position),
        Vec3::from_array(doc.view.forward),
        Vec3::from_array(doc.view.up),
    )
    .map_err(|m| SceneError::invalid("view", m))?;

    let mut nodes = Vec::with_capacity(doc.nodes.len());
    for (i, n) in doc.nodes.into_iter().enumerate() {
        let path = format!("nodes[{i}]");
        if nodes.iter().any(|m: &SceneNode| m.id == n.id) {
            return Err(SceneError::DuplicateId { id: n.id, path: format!("{path}.id") });
        }
        let transform = match n.transform {
            Some(t) => convert_transform(t, &format!("{path}.transform"))?,
            None => Transform::IDENTITY,
        };
        let geometry = convert_geometry(n.geometry, &format!("{path}.geometry"))?;
        let origin = match n.origin {
            OriginDoc::Real => OriginKind::Real,
            OriginDoc::Virtual => OriginKind::Virtual,
        };
        let mut node = SceneNode::new(&n.id, convert_label(n.label), origin, transform, geometry);
        node.interactable = n.interactable;
        node.dynamic = n.dynamic;
        node.validate().map_err(|m| SceneError::invalid(path.clone(), m))?;
        nodes.push(node);
    }
    let mut scene = Scene::new(view, nodes)?;
    if let Some(cfg) = doc.config {
        scene.config_overrides = convert_config(cfg, "config")?;
    }
    Ok(scene)
}

/// Parses a standalone configuration document (same keys as a scene's `config` block).
pub fn parse_config(text: &str) -> Result<ConfigOverrides, SceneError> {
    let doc: ConfigDoc = deserialize(text)?;
    convert_config(doc, ".")
}

fn convert_label(l: LabelDoc) -> SemanticLabel {
    SemanticLabel { class_name: l.class, confidence: l.confidence }
}

fn convert_transform(t: TransformDoc, path: &str) -> Result<Transform, SceneError> {
    let mut rotation = match t.r {
        Some([x, y, z, w]) => Quat::from_xyzw(x, y, z, w),
        None => Quat::IDENTITY,
    };
    let norm = rotation.norm();
    if (norm - 1.0).abs() > QUATERNION_SLACK {
        return Err(SceneError::invalid(format!("{path}.r"), format!("quaternion norm {norm} is not 1")));
    }
    if (norm - 1.0).abs() > 1e-12 {
        rotation = rotation.normalize();
    }
    let tf = Transform {
        translation: t.t.map(Vec3::from_array).unwrap_or(Vec3::ZERO),
        rotation,
        scale: t.s.map(Vec3::from_array).unwrap_or(Vec3::splat(1.0)),
    };
    tf.validate().map_err(|e| SceneError::invalid(path, e))?;
    Ok(tf)
}

fn convert_geometry(g: GeometryDoc, path: &str) -> Result<Geometry, SceneError> {
    match g {
        GeometryDoc::Mesh(m) => {
            let mesh = TriMesh::new(
                m.vertices.into_iter().map(Vec3::from_array).collect(),
                m.triangles,
                m.normals.map(|ns| ns.into_iter().map(Vec3::from_array).collect()),
            )
            .map_err(|e| SceneError::invalid(format!("{path}.mesh"), e))?;
            Ok(Geometry::Mesh(mesh))
        }
        GeometryDoc::HullPoints(points) => {
            let points: Vec<Vec3> = points.into_iter().map(Vec3::from_array).collect();
            let hull =
                ConvexHull::from_points(&points).map_err(|e| SceneError::invalid(format!("{path}.hull_points"), e))?;
            Ok(Geometry::Hull { points, hull })
        }
        GeometryDoc::Panel(p) => {
            let spec = PanelSpec { width: p.w, height: p.h, resolution_x: p.px, resolution_y: p.py };
            spec.validate().map_err(|m| SceneError::invalid(format!("{path}.panel"), m))?;
            Ok(Geometry::Panel(spec))
        }
    }
}

fn convert_config(c: ConfigDoc, path: &str) -> Result<ConfigOverrides, SceneError> {
    let mut templates = BTreeMap::new();
    for (name, t) in c.templates {
        let label = convert_label(t.label);
        label.validate().map_err(|m| SceneError::invalid(format!("{path}.templates.{name}.label"), m))?;
        let geometry = convert_geometry(t.geometry, &format!("{path}.templates.{name}.geometry"))?;
        templates.insert(name, NodeTemplate { label, geometry });
    }
    let actions = c
        .actions
        .into_iter()
        .map(|(k, items)| {
            let items = items.into_iter().map(|i| MenuItem { label: i.label, action: i.action }).collect();
            (k, items)
        })
        .collect();
    Ok(ConfigOverrides {
        angular_gain: c.angular_gain,
        pitch_limit: c.pitch_limit,
        panel_gain: c.panel_gain,
        idw_power: c.idw_power,
        idw_epsilon: c.idw_epsilon,
        k_nearest: c.k_nearest,
        default_depth: c.default_depth,
        silhouette_samples: c.silhouette_samples,
        scroll_depth_factor: c.scroll_depth_factor,
        depth_smoothing: c.depth_smoothing,
        snap_distance: c.snap_distance,
        bvh_leaf_size: c.bvh_leaf_size,
        actions,
        templates,
    })
}

struct Writer {
    out: String,
    pretty: bool,
}

impl Writer {
    fn raw(&mut self, s: &str) {
        self.out.push_str(s);
    }

    fn newline(&mut self, indent: usize) {
        if self.pretty {
            self.out.push('\n');
            for _ in 0..indent {
                self.out.push_str("  ");
            }
        }
    }

    fn string(&mut self, s: &str) {
        self.out.push_str(&serde_json::to_string(s).expect("strings serialize"));
    }

    fn key(&mut self, k: &str) {
        self.string(k);
        self.out.push(':');
    }

    fn num(&mut self, x: f64) {
        write_f64(&mut self.out, x);
    }

    fn nums(&mut self, xs: &[f64]) {
        self.out.push('[');
        for (i, &x) in xs.iter().enumerate() {
            if i > 0 {
                self.out.push(',');
            }
            self.num(x);
        }
        self.out.push(']');
    }

    fn vec3(&mut self, v: Vec3) {
        self.nums(&v.to_array());
    }

    fn vec3_list(&mut self, vs: &[Vec3]) {
        self.out.push('[');
        for (i, &v) in vs.iter().enumerate() {
            if i > 0 {
                self.out.push(',');
            }
            self.vec3(v);
        }
        self.out.push(']');
    }

    fn label(&mut self, l: &SemanticLabel) {
        self.raw("{");
        self.key("class");
        self.string(&l.class_name);
        self.raw(",");
        self.key("confidence");
        self.num(l.confidence);
        self.raw("}");
    }

    fn geometry(&mut self, g: &Geometry) {
        self.raw("{");
        match g {
            Geometry::Mesh(m) => {
                self.key("mesh");
                self.raw("{");
                self.key("vertices");
                self.vec3_list(m.vertices());
                self.raw(",");
                self.key("triangles");
                self.raw("[");
                for (i, t) in m.triangles().iter().enumerate() {
                    if i > 0 {
                        self.raw(",");
                    }
                    self.raw(&format!("[{},{},{}]", t[0], t[1], t[2]));
                }
                self.raw("]");
                if let Some(ns) = m.normals() {
                    self.raw(",");
                    self.key("normals");
                    self.vec3_list(ns);
                }
                self.raw("}");
            }
            Geometry::Hull { points, .. } => {
                self.key("hull_points");
                self.vec3_list(points);
            }
            Geometry::Panel(p) => {
                self.key("panel");
                self.raw("{");
                self.key("w");
                self.num(p.width);
                self.raw(",");
                self.key("h");
                self.num(p.height);
                self.raw(&format!(",\"px\":{},\"py\":{}}}", p.resolution_x, p.resolution_y));
            }
        }
        self.raw("}");
    }

    fn node(&mut self, n: &SceneNode) {
        self.raw("{");
        self.key("id");
        self.string(&n.id);
        self.raw(",");
        self.key("label");
        self.label(&n.label);
        self.raw(",");
        self.key("origin");
        self.string(match n.origin_kind {
            OriginKind::Real => "real",
            OriginKind::Virtual => "virtual",
        });
        self.raw(",");
        self.key("transform");
        self.raw("{");
        self.key("t");
        self.vec3(n.transform.translation);
        self.raw(",");
        self.key("r");
        self.nums(&n.transform.rotation.to_xyzw());
        self.raw(",");
        self.key("s");
        self.vec3(n.transform.scale);
        self.raw("},");
        self.key("geometry");
        self.geometry(&n.geometry);
        self.raw(&format!(",\"interactable\":{},\"dynamic\":{}}}", n.interactable, n.dynamic));
    }

    fn config(&mut self, c: &ConfigOverrides) {
        self.raw("{");
        let mut first = true;
        let mut sep = |w: &mut Self| {
            if !first {
                w.raw(",");
            }
            first = false;
        };
        let reals = [
            ("angular_gain", c.angular_gain),
            ("pitch_limit", c.pitch_limit),
            ("panel_gain", c.panel_gain),
            ("idw_power", c.idw_power),
            ("idw_epsilon", c.idw_epsilon),
            ("default_depth", c.default_depth),
            ("scroll_depth_factor", c.scroll_depth_factor),
            ("depth_smoothing", c.depth_smoothing),
            ("snap_distance", c.snap_distance),
        ];
        for (k, v) in reals {
            if let Some(v) = v {
                sep(self);
                self.key(k);
                self.num(v);
            }
        }
        let ints = [
            ("k_nearest", c.k_nearest),
            ("silhouette_samples", c.silhouette_samples),
            ("bvh_leaf_size", c.bvh_leaf_size),
        ];
        for (k, v) in ints {
            if let Some(v) = v {
                sep(self);
                self.key(k);
                self.raw(&v.to_string());
            }
        }
        if !c.actions.is_empty() {
            sep(self);
            self.key("actions");
            self.raw("{");
            for (i, (k, items)) in c.actions.iter().enumerate() {
                if i > 0 {
                    self.raw(",");
                }
                self.key(k);
                self.raw("[");
                for (j, item) in items.iter().enumerate() {
                    if j > 0 {
                        self.raw(",");
                    }
                    self.raw("{");
                    self.key("label");
                    self.string(&item.label);
                    self.raw(",");
                    self.key("action");
                    self.string(&item.action);
                    self.raw("}");
                }
                self.raw("]");
            }
            self.raw("}");
        }
        if !c.templates.is_empty() {
            sep(self);
            self.key("templates");
            self.raw("{");
            for (i, (k, t)) in c.templates.iter().enumerate() {
                if i > 0 {
                    self.raw(",");
                }
                self.key(k);
                self.raw("{");
                self.key("label");
                self.label(&t.label);
                self.raw(",");
                self.key("geometry");
                self.geometry(&t.geometry);
                self.raw("}");
            }
            self.raw("}");
        }
        self.raw("}");
    }
}

/// Serializes a scene. `pretty` puts each node on its own line; otherwise the
/// document is a single line (as sent in the session protocol).
pub fn write_scene(scene: &Scene, pretty: bool) -> String {
    let mut w = Writer { out: String::new(), pretty };
    let v = scene.view();
    w.raw("{");
    w.newline(1);
    w.key("view");
    w.raw("{");
    w.key("position");
    w.vec3(v.origin);
    w.raw(",");
    w.key("forward");
    w.vec3(v.forward);
    w.raw(",");
    w.key("up");
    w.vec3(v.up);
    w.raw("},");
    w.newline(1);
    w.key("nodes");
    w.raw("[");
    for (i, n) in scene.nodes().iter().enumerate() {
        if i > 0 {
            w.raw(",");
        }
        w.newline(2);
        w.node(n);
    }
    if !scene.nodes().is_empty() {
        w.newline(1);
    }
    w.raw("]");
    if !scene.config_overrides.is_empty() {
        w.raw(",");
        w.newline(1);
        w.key("config");
        w.config(&scene.config_overrides);
    }
    w.newline(0);
    w.raw("}");
    if pretty {
        w.out.push('\n');
    }
    w.out
}

/// Single-line serialization.
pub fn scene_to_string(scene: &Scene) -> String {
    write_scene(scene, false)
}
