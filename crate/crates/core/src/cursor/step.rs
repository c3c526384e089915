use super::void::void_depth_excluding;
use super::{apply_delta, Button, CursorFrame, CursorMode, CursorState, EventKind, InputEvent, ViewPose};
use crate::config::EngineConfig;
use crate::geometry::{Ray, Vec3};
use crate::scene::{build_silhouette_cache, PanelFrame, Scene, SilhouetteCache};

/// Side effects of a cursor step that the interaction layer consumes.
#[derive(Debug, Clone, PartialEq)]
pub enum CursorEffect {
    Button {
        button: Button,
        pressed: bool,
    },
    Scroll {
        ticks: i64,
    },
    PanelEntered {
        node_id: String,
        u: f64,
        v: f64,
    },
    /// `aim_point` is where the re-aimed 3D ray passes at the edge point's distance;
    /// it coincides with `edge_point` up to rounding.
    PanelExited {
        node_id: String,
        edge_point: Vec3,
        aim_point: Vec3,
    },
}

#[derive(Debug, Clone)]
struct CacheEntry {
    view: ViewPose,
    revision: u64,
    samples: usize,
    cache: SilhouetteCache,
}

/// The cursor state machine for one session.
///
/// The angular frame is fixed from the scene's initial view; later `View`
/// events move the ray origin but never the cursor's yaw/pitch.
#[derive(Debug, Clone)]
pub struct Cursor {
    frame: CursorFrame,
    view: ViewPose,
    state: CursorState,
    cache: Option<CacheEntry>,
}

impl Cursor {
    /// A cursor looking straight ahead from the scene's view, already resolved.
    pub fn new(scene: &Scene, config: &EngineConfig) -> Self {
        let view = *scene.view();
        let frame = CursorFrame::from_view(&view);
        let state = CursorState {
            yaw: 0.0,
            pitch: 0.0,
            mode: CursorMode::InVoid { depth: config.default_depth },
            position: view.origin + frame.forward * config.default_depth,
            orientation: -frame.forward,
        };
        let mut cursor = Self { frame, view, state, cache: None };
        cursor.resolve(scene, config, None);
        cursor
    }

    pub fn state(&self) -> &CursorState {
        &self.state
    }

    pub fn frame(&self) -> &CursorFrame {
        &self.frame
    }

    pub fn view(&self) -> &ViewPose {
        &self.view
    }

    /// Current cursor direction.
    pub fn direction(&self) -> Vec3 {
        self.frame.dir(self.state.yaw, self.state.pitch)
    }

    pub fn ray(&self) -> Ray {
        Ray { origin: self.view.origin, direction: self.direction() }
    }

    /// Silhouette cache for the current view, rebuilt when the view pose or
    /// anything cursor-visible in the scene has changed.
    pub fn silhouettes(&mut self, scene: &Scene, config: &EngineConfig) -> &SilhouetteCache {
        let fresh = self.cache.as_ref().is_some_and(|c| {
            c.view == self.view && c.revision == scene.interactive_revision() && c.samples == config.silhouette_samples
        });
        if !fresh {
            self.cache = Some(CacheEntry {
                view: self.view,
                revision: scene.interactive_revision(),
                samples: config.silhouette_samples,
                cache: build_silhouette_cache(scene, &self.view, config),
            });
        }
        &self.cache.as_ref().expect("cache just filled").cache
    }

    /// Processes one event. `exclude` names a node the cursor should see
    /// through (the drag payload).
    pub fn step(
        &mut self,
        scene: &Scene,
        event: &InputEvent,
        config: &EngineConfig,
        exclude: Option<&str>,
    ) -> Vec<CursorEffect> {
        match &event.kind {
            EventKind::Delta { dx, dy } => self.move_by(scene, *dx as f64, *dy as f64, config, exclude),
            EventKind::Button { button, pressed } => vec![CursorEffect::Button { button: *button, pressed: *pressed }],
            EventKind::Scroll { ticks } => vec![CursorEffect::Scroll { ticks: *ticks }],
            EventKind::View(view) => self.set_view(scene, *view, config, exclude),
        }
    }

    /// Applies a delta in input counts: on a panel it moves in pixels, otherwise
    /// it rotates the ray and re-resolves.
    pub fn move_by(
        &mut self,
        scene: &Scene,
        dx: f64,
        dy: f64,
        config: &EngineConfig,
        exclude: Option<&str>,
    ) -> Vec<CursorEffect> {
        if let CursorMode::OnPanel { node_id, u, v } = &self.state.mode {
            if let Some(frame) = self.live_panel(scene, node_id, exclude) {
                let (node_id, u, v) = (node_id.clone(), *u, *v);
                return self.panel_step(scene, &node_id, frame, u, v, dx, dy, config, exclude);
            }
        }
        let (yaw, pitch) =
            apply_delta(self.state.yaw, self.state.pitch, dx, dy, config.angular_gain, config.pitch_limit);
        self.state.yaw = yaw;
        self.state.pitch = pitch;
        self.resolve(scene, config, exclude).into_iter().collect()
    }

    /// Replaces the view pose and re-resolves the mode; yaw/pitch are untouched.
    pub fn set_view(
        &mut self,
        scene: &Scene,
        view: ViewPose,
        config: &EngineConfig,
        exclude: Option<&str>,
    ) -> Vec<CursorEffect> {
        self.view = view;
        self.resolve(scene, config, exclude).into_iter().collect()
    }

    /// Re-derives position after the scene changed. A panel cursor keeps its
    /// (u, v) while its panel is still targetable.
    pub fn refresh(&mut self, scene: &Scene, config: &EngineConfig, exclude: Option<&str>) {
        if let CursorMode::OnPanel { node_id, u, v } = &self.state.mode {
            if let Some(frame) = self.live_panel(scene, node_id, exclude) {
                let (u, v) = (*u, *v);
                self.state.position = frame.point(u, v);
                self.state.orientation = frame.normal;
                self.aim_at(self.state.position, config);
                return;
            }
        }
        self.resolve(scene, config, exclude);
    }

    fn live_panel(&self, scene: &Scene, node_id: &str, exclude: Option<&str>) -> Option<PanelFrame> {
        if exclude == Some(node_id) {
            return None;
        }
        let index = scene.node_index(node_id)?;
        if !scene.nodes()[index].interactable {
            return None;
        }
        scene.node_world(index).panel
    }

    fn aim_at(&mut self, target: Vec3, config: &EngineConfig) {
        if let Some(d) = (target - self.view.origin).try_normalize() {
            let (yaw, pitch) = self.frame.angles(d);
            self.state.yaw = yaw;
            self.state.pitch = pitch.clamp(-config.pitch_limit, config.pitch_limit);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn panel_step(
        &mut self,
        scene: &Scene,
        node_id: &str,
        frame: PanelFrame,
        u: f64,
        v: f64,
        dx: f64,
        dy: f64,
        config: &EngineConfig,
        exclude: Option<&str>,
    ) -> Vec<CursorEffect> {
        let spec = *scene.node(node_id).and_then(|n| n.panel_spec()).expect("live panel has a spec");
        let du = dx * config.panel_gain / spec.resolution_x as f64;
        let dv = dy * config.panel_gain / spec.resolution_y as f64;
        let (nu, nv) = (u + du, v + dv);
        if (0.0..=1.0).contains(&nu) && (0.0..=1.0).contains(&nv) {
            self.state.mode = CursorMode::OnPanel { node_id: node_id.to_owned(), u: nu, v: nv };
            self.state.position = frame.point(nu, nv);
            self.state.orientation = frame.normal;
            self.aim_at(self.state.position, config);
            return Vec::new();
        }

        let s = crossing_fraction(u, du).min(crossing_fraction(v, dv));
        let eu = (u + s * du).clamp(0.0, 1.0);
        let ev = (v + s * dv).clamp(0.0, 1.0);
        let edge_point = frame.point(eu, ev);
        self.aim_at(edge_point, config);
        let aim_point = self.view.origin + self.direction() * edge_point.distance(self.view.origin);
        let mut effects = vec![CursorEffect::PanelExited { node_id: node_id.to_owned(), edge_point, aim_point }];

        let rest = 1.0 - s;
        let (yaw, pitch) = apply_delta(
            self.state.yaw,
            self.state.pitch,
            dx * rest,
            dy * rest,
            config.angular_gain,
            config.pitch_limit,
        );
        self.state.yaw = yaw;
        self.state.pitch = pitch;
        // Leaves OnPanel first so re-entering the same panel reports an entry.
        self.state.mode = CursorMode::InVoid { depth: edge_point.distance(self.view.origin) };
        effects.extend(self.resolve(scene, config, exclude));
        effects
    }

    /// Casts the current ray and sets mode, position and orientation.
    fn resolve(&mut self, scene: &Scene, config: &EngineConfig, exclude: Option<&str>) -> Option<CursorEffect> {
        let ray = self.ray();
        if let Some(hit) = scene.raycast_excluding(&ray, exclude) {
            let world = scene.node_world(hit.node_index);
            if let Some(frame) = world.panel {
                let (u, v) = frame.uv(hit.hit.point);
                let (u, v) = (u.clamp(0.0, 1.0), v.clamp(0.0, 1.0));
                let entered =
                    !matches!(&self.state.mode, CursorMode::OnPanel { node_id, .. } if *node_id == hit.node_id);
                self.state.mode = CursorMode::OnPanel { node_id: hit.node_id.clone(), u, v };
                self.state.position = frame.point(u, v);
                self.state.orientation = frame.normal;
                return entered.then_some(CursorEffect::PanelEntered { node_id: hit.node_id, u, v });
            }
            self.state.position = hit.hit.point;
            self.state.orientation = hit.hit.normal;
            self.state.mode = CursorMode::OnSurface { node_id: hit.node_id, hit: hit.hit };
            return None;
        }

        let previous = match self.state.mode {
            CursorMode::InVoid { depth } => Some(depth),
            _ => None,
        };
        let direction = ray.direction;
        let raw = void_depth_excluding(direction, self.silhouettes(scene, config), config, exclude);
        let depth = match previous {
            Some(prev) if config.depth_smoothing > 0.0 => {
                config.depth_smoothing * prev + (1.0 - config.depth_smoothing) * raw
            }
            _ => raw,
        };
        self.state.mode = CursorMode::InVoid { depth };
        self.state.position = self.view.origin + direction * depth;
        self.state.orientation = -direction;
        None
    }
}

/// Fraction of a step `d` from coordinate `c` at which it leaves `[0, 1]`.
fn crossing_fraction(c: f64, d: f64) -> f64 {
    if c + d > 1.0 {
        (1.0 - c) / d
    } else if c + d < 0.0 {
        -c / d
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Quat, Transform, TriMesh};
    use crate::scene::{Geometry, OriginKind, PanelSpec, SceneNode, SemanticLabel};

    fn plane_scene() -> Scene {
        let mesh = TriMesh::new(
            vec![
                Vec3::new(-100.0, -100.0, 2.0),
                Vec3::new(100.0, -100.0, 2.0),
                Vec3::new(100.0, 100.0, 2.0),
                Vec3::new(-100.0, 100.0, 2.0),
            ],
            vec![[0, 1, 2], [0, 2, 3]],
            None,
        )
        .unwrap();
        let node = SceneNode::new(
            "plane",
            SemanticLabel::new("wall", 1.0),
            OriginKind::Real,
            Transform::IDENTITY,
            Geometry::Mesh(mesh),
        );
        Scene::new(ViewPose::default(), vec![node]).unwrap()
    }

    /// A 1 m × 1 m panel at z = 2 facing the viewer.
    fn panel_scene() -> Scene {
        let tf = Transform::new(
            Vec3::new(0.0, 0.0, 2.0),
            Quat::from_axis_angle(Vec3::Y, std::f64::consts::PI),
            Vec3::splat(1.0),
        )
        .unwrap();
        let spec = PanelSpec { width: 1.0, height: 1.0, resolution_x: 1000, resolution_y: 1000 };
        let node =
            SceneNode::new("p", SemanticLabel::new("browser", 1.0), OriginKind::Virtual, tf, Geometry::Panel(spec));
        Scene::new(ViewPose::default(), vec![node]).unwrap()
    }

    #[test]
    fn plane_yaw_five_degrees() {
        let scene = plane_scene();
        let cfg = EngineConfig::default();
        let mut c = Cursor::new(&scene, &cfg);
        c.move_by(&scene, 100.0, 0.0, &cfg, None);
        let s = c.state();
        let expect_x = 2.0 * 5f64.to_radians().tan();
        assert!((s.position - Vec3::new(expect_x, 0.0, 2.0)).length() < 1e-12);
        assert!((s.depth(Vec3::ZERO) - 2.0 / 5f64.to_radians().cos()).abs() < 1e-12);
        assert_eq!(s.orientation, Vec3::new(0.0, 0.0, -1.0));
    }

    #[test]
    fn empty_scene_void_at_default_depth() {
        let scene = Scene::new(ViewPose::default(), vec![]).unwrap();
        let cfg = EngineConfig::default();
        let mut c = Cursor::new(&scene, &cfg);
        c.move_by(&scene, 37.0, -12.0, &cfg, None);
        let s = c.state();
        assert_eq!(s.mode, CursorMode::InVoid { depth: 2.0 });
        assert!((s.position - c.direction() * 2.0).length() < 1e-15);
        assert_eq!(s.orientation, -c.direction());
    }

    #[test]
    fn enters_panel_at_center() {
        let scene = panel_scene();
        let cfg = EngineConfig::default();
        let c = Cursor::new(&scene, &cfg);
        match &c.state().mode {
            CursorMode::OnPanel { node_id, u, v } => {
                assert_eq!(node_id, "p");
                assert!((u - 0.5).abs() < 1e-12 && (v - 0.5).abs() < 1e-12);
            }
            m => panic!("{m:?}"),
        }
    }

    #[test]
    fn panel_pixel_mapping_is_exact() {
        let scene = panel_scene();
        let cfg = EngineConfig::default();
        let mut c = Cursor::new(&scene, &cfg);
        c.state.mode = CursorMode::OnPanel { node_id: "p".into(), u: 0.5, v: 0.5 };
        c.move_by(&scene, 100.0, 0.0, &cfg, None);
        assert_eq!(c.state().mode, CursorMode::OnPanel { node_id: "p".into(), u: 0.7, v: 0.5 });
        // screen-right on the panel is world +X for this viewer
        assert!(c.state().position.x > 0.0);
    }

    #[test]
    fn panel_exit_through_right_edge() {
        let scene = panel_scene();
        let cfg = EngineConfig::default();
        let mut c = Cursor::new(&scene, &cfg);
        c.state.mode = CursorMode::OnPanel { node_id: "p".into(), u: 0.95, v: 0.5 };
        let effects = c.move_by(&scene, 100.0, 0.0, &cfg, None);
        let CursorEffect::PanelExited { edge_point, aim_point, .. } = &effects[0] else { panic!("{effects:?}") };
        assert!((*edge_point - Vec3::new(0.5, 0.0, 2.0)).length() < 1e-12);
        assert!(edge_point.distance(*aim_point) < 1e-9);
        let edge_yaw = (0.5f64).atan2(2.0).to_degrees();
        assert!((c.state().yaw - (edge_yaw + 75.0 * cfg.angular_gain)).abs() < 1e-9);
        assert!(matches!(c.state().mode, CursorMode::InVoid { .. }));
    }

    #[test]
    fn view_change_keeps_angles() {
        let scene = plane_scene();
        let cfg = EngineConfig::default();
        let mut c = Cursor::new(&scene, &cfg);
        c.move_by(&scene, 40.0, 10.0, &cfg, None);
        let (yaw, pitch) = (c.state().yaw, c.state().pitch);
        let view = ViewPose::new(Vec3::new(0.2, 0.1, 0.5), Vec3::X, Vec3::Y).unwrap();
        c.step(&scene, &InputEvent { t: 0, kind: EventKind::View(view) }, &cfg, None);
        assert_eq!((c.state().yaw, c.state().pitch), (yaw, pitch));
        assert_eq!(c.ray().origin, view.origin);
    }
}
