use super::{
    begin_drag, drag_update, end_drag, follow_cursor, gizmo_drag, handle_click, hover_target, menu_confirm,
    menu_navigate, place_ghost, spawn_ghost, Axis, ClickEffect, DragState, GizmoAxis, InteractError, RadialMenu,
    Selection,
};
use crate::config::{ConfigError, EngineConfig};
use crate::cursor::{Button, Cursor, CursorEffect, CursorState, EventKind, InputEvent};
use crate::geometry::{Transform, Vec3};
use crate::scene::{OriginKind, Scene};

/// Things that happened during a step which the trajectory log does not carry.
#[derive(Debug, Clone, PartialEq)]
pub enum Notice {
    Immovable(String),
    Spawned(String),
    Placed(String),
    Snapped(String),
    Deleted(String),
    Failed(String),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct StepOutcome {
    /// Action id emitted by a confirmed menu selection.
    pub action: Option<String>,
    pub cursor: Vec<CursorEffect>,
    pub notices: Vec<Notice>,
}

/// One interactive session: the scene, cursor and interaction state, advanced
/// strictly one event at a time.
///
/// Routing: while a menu is open deltas navigate it and a left press confirms.
/// Otherwise a left press ends an active gizmo, places an active ghost, or
/// selects and starts dragging, replacing any drag still held; a left release
/// drops the drag payload. Deleting a node or putting a gizmo on it ends its
/// drag. Right press opens (or cancels) the context menu. Scroll changes drag
/// depth, or scales the hovered node when it is selected and virtual.
#[derive(Debug, Clone)]
pub struct Engine {
    scene: Scene,
    config: EngineConfig,
    cursor: Cursor,
    selection: Selection,
    menu: RadialMenu,
    drag: Option<DragState>,
    gizmo: Option<GizmoAxis>,
    ghost: Option<String>,
}

impl Engine {
    pub fn new(mut scene: Scene, config: EngineConfig) -> Result<Self, ConfigError> {
        config.validate()?;
        if scene.bvh_leaf_size() != config.bvh_leaf_size {
            scene.set_bvh_leaf_size(config.bvh_leaf_size);
        }
        let cursor = Cursor::new(&scene, &config);
        Ok(Self {
            scene,
            config,
            cursor,
            selection: Selection::default(),
            menu: RadialMenu::closed(),
            drag: None,
            gizmo: None,
            ghost: None,
        })
    }

    pub fn scene(&self) -> &Scene {
        &self.scene
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn cursor(&self) -> &Cursor {
        &self.cursor
    }

    pub fn state(&self) -> &CursorState {
        self.cursor.state()
    }

    pub fn selection(&self) -> &Selection {
        &self.selection
    }

    pub fn menu(&self) -> &RadialMenu {
        &self.menu
    }

    pub fn drag(&self) -> Option<&DragState> {
        self.drag.as_ref()
    }

    pub fn gizmo(&self) -> Option<&GizmoAxis> {
        self.gizmo.as_ref()
    }

    pub fn ghost(&self) -> Option<&str> {
        self.ghost.as_deref()
    }

    pub fn hovered(&self) -> Option<&str> {
        hover_target(self.cursor.state())
    }

    /// Node the cursor currently looks through.
    fn payload(&self) -> Option<String> {
        self.drag.as_ref().map(|d| d.node_id.clone()).or_else(|| self.gizmo.as_ref().map(|g| g.node_id.clone()))
    }

    pub fn handle(&mut self, event: &InputEvent) -> StepOutcome {
        let mut out = StepOutcome::default();
        match &event.kind {
            EventKind::Delta { dx, dy } if self.menu.open => {
                menu_navigate(&mut self.menu, *dx as f64, *dy as f64);
            }
            EventKind::Delta { .. } | EventKind::View(_) => {
                let payload = self.payload();
                out.cursor = self.cursor.step(&self.scene, event, &self.config, payload.as_deref());
                self.carry_payload(0, &mut out);
            }
            EventKind::Button { button: Button::Left, pressed: true } => self.left_press(&mut out),
            EventKind::Button { button: Button::Left, pressed: false } => self.left_release(&mut out),
            EventKind::Button { button: Button::Right, pressed: true } => {
                if self.menu.open {
                    self.menu = RadialMenu::closed();
                } else if let ClickEffect::OpenMenu(menu) =
                    handle_click(self.cursor.state(), &self.scene, Button::Right, &self.config)
                {
                    self.menu = menu;
                }
            }
            EventKind::Button { .. } => {}
            EventKind::Scroll { ticks } => self.scroll(*ticks, &mut out),
        }
        out
    }

    fn left_press(&mut self, out: &mut StepOutcome) {
        if self.menu.open {
            let target = self.menu.target.clone();
            if let Some(action) = menu_confirm(&mut self.menu) {
                self.execute(&action, target.as_deref(), out);
                out.action = Some(action);
            }
            return;
        }
        if self.gizmo.take().is_some() {
            self.refresh();
            return;
        }
        if let Some(ghost) = self.ghost.take() {
            match place_ghost(&mut self.scene, Some(&ghost), self.cursor.state()) {
                Ok(id) => out.notices.push(Notice::Placed(id)),
                Err(e) => out.notices.push(Notice::Failed(e.to_string())),
            }
            self.refresh();
            return;
        }
        self.selection.apply(&handle_click(self.cursor.state(), &self.scene, Button::Left, &self.config));
        self.drag = None;
        match begin_drag(self.cursor.state(), &self.scene, self.cursor.view().origin) {
            Ok(drag) => self.drag = drag,
            Err(InteractError::Immovable(id)) => out.notices.push(Notice::Immovable(id)),
            Err(e) => out.notices.push(Notice::Failed(e.to_string())),
        }
    }

    fn left_release(&mut self, out: &mut StepOutcome) {
        let Some(drag) = self.drag.take() else { return };
        match end_drag(&drag, &mut self.scene, &self.cursor.ray(), &self.config) {
            Ok(true) => out.notices.push(Notice::Snapped(drag.node_id)),
            Ok(false) => {}
            Err(e) => out.notices.push(Notice::Failed(e.to_string())),
        }
        self.refresh();
    }

    fn scroll(&mut self, ticks: i64, out: &mut StepOutcome) {
        if self.drag.is_some() {
            self.carry_payload(ticks, out);
            return;
        }
        let Some(id) = self.hovered().map(str::to_owned) else { return };
        let Some(node) = self.scene.node(&id) else { return };
        if !self.selection.contains(&id) || node.origin_kind != OriginKind::Virtual {
            return;
        }
        let factor = self.config.scroll_depth_factor.powi(ticks as i32);
        let transform = Transform { scale: node.transform.scale * factor, ..node.transform };
        if let Err(e) = self.scene.update_node_transform(&id, transform) {
            out.notices.push(Notice::Failed(e.to_string()));
        }
        self.refresh();
    }

    /// Moves whatever the cursor is carrying to follow it.
    fn carry_payload(&mut self, scroll_ticks: i64, out: &mut StepOutcome) {
        let origin = self.cursor.view().origin;
        let direction = self.cursor.direction();
        if let Some(drag) = self.drag.as_mut() {
            let target = drag_update(drag, origin, direction, scroll_ticks, &self.config);
            let id = drag.node_id.clone();
            self.move_node(&id, target, out);
        }
        if let Some(gizmo) = &self.gizmo {
            if let Some(target) = gizmo_drag(gizmo, &self.cursor.ray()) {
                let id = gizmo.node_id.clone();
                self.move_node(&id, target, out);
            }
        }
        if let Some(ghost) = &self.ghost {
            if let Err(e) = follow_cursor(&mut self.scene, ghost, self.cursor.state()) {
                out.notices.push(Notice::Failed(e.to_string()));
            }
        }
    }

    fn move_node(&mut self, id: &str, translation: Vec3, out: &mut StepOutcome) {
        let Some(node) = self.scene.node(id) else { return };
        let transform = Transform { translation, ..node.transform };
        if let Err(e) = self.scene.update_node_transform(id, transform) {
            out.notices.push(Notice::Failed(e.to_string()));
        }
    }

    fn execute(&mut self, action: &str, target: Option<&str>, out: &mut StepOutcome) {
        let movable = target
            .and_then(|id| self.scene.node(id))
            .map(|n| (n.id.clone(), n.origin_kind == OriginKind::Virtual && n.interactable));
        if let Some(name) = action.strip_prefix("spawn:") {
            if let Some(old) = self.ghost.take() {
                let _ = self.scene.remove_node(&old);
            }
            match spawn_ghost(&mut self.scene, name, &self.config, self.cursor.state()) {
                Ok(id) => {
                    out.notices.push(Notice::Spawned(id.clone()));
                    self.ghost = Some(id);
                }
                Err(e) => out.notices.push(Notice::Failed(e.to_string())),
            }
        } else if let Some(axis) = action.strip_prefix("gizmo:").and_then(Axis::parse) {
            match movable {
                Some((id, true)) => {
                    let node = self.scene.node(&id).expect("target exists");
                    self.gizmo = Some(GizmoAxis::new(node, axis));
                    self.drag.take_if(|d| d.node_id == id);
                }
                Some((id, false)) => out.notices.push(Notice::Immovable(id)),
                None => {}
            }
        } else if action == "delete" {
            match movable {
                Some((id, true)) => {
                    if self.scene.remove_node(&id).is_ok() {
                        self.selection.prune(&self.scene);
                        self.drag.take_if(|d| d.node_id == id);
                        self.gizmo.take_if(|g| g.node_id == id);
                        out.notices.push(Notice::Deleted(id));
                    }
                }
                Some((id, false)) => out.notices.push(Notice::Immovable(id)),
                None => {}
            }
        }
        self.refresh();
    }

    fn refresh(&mut self) {
        let payload = self.payload();
        self.cursor.refresh(&self.scene, &self.config, payload.as_deref());
    }
}
