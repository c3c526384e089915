//! Desktop-style interactions on the blended scene: hover, selection, radial
//! menus, drag with scroll depth, axis gizmo and ghost placement.

mod engine;
mod ghost;
mod manipulate;
mod menu;

use thiserror::Error;

use crate::config::{EngineConfig, VOID_MENU_KEY};
use crate::cursor::{Button, CursorState};
use crate::scene::{Scene, SceneError};

pub use engine::{Engine, Notice, StepOutcome};
pub use ghost::{follow_cursor, place_ghost, spawn_ghost};
pub use manipulate::{begin_drag, drag_update, end_drag, gizmo_drag, Axis, DragState, GizmoAxis, PARALLEL_TOLERANCE};
pub use menu::{menu_confirm, menu_navigate, RadialMenu, MENU_DEADZONE};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InteractError {
    #[error("node \"{0}\" is real and cannot be moved")]
    Immovable(String),
    #[error("no ghost is attached to the cursor")]
    NoGhost,
    #[error("unknown spawn template \"{0}\"")]
    UnknownTemplate(String),
    #[error(transparent)]
    Scene(#[from] SceneError),
}

/// Selected node ids in selection order, without duplicates.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Selection {
    node_ids: Vec<String>,
}

impl Selection {
    pub fn ids(&self) -> &[String] {
        &self.node_ids
    }

    pub fn is_empty(&self) -> bool {
        self.node_ids.is_empty()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.node_ids.iter().any(|n| n == id)
    }

    pub fn insert(&mut self, id: &str) {
        if !self.contains(id) {
            self.node_ids.push(id.to_owned());
        }
    }

    pub fn set_single(&mut self, id: &str) {
        self.node_ids.clear();
        self.node_ids.push(id.to_owned());
    }

    pub fn clear(&mut self) {
        self.node_ids.clear();
    }

    /// Drops ids that no longer exist in `scene`.
    pub fn prune(&mut self, scene: &Scene) {
        self.node_ids.retain(|id| scene.node(id).is_some());
    }
}

/// Node under the cursor, if any.
pub fn hover_target(state: &CursorState) -> Option<&str> {
    state.node_id()
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClickEffect {
    Select(String),
    ClearSelection,
    OpenMenu(RadialMenu),
    None,
}

/// Left selects the hovered node or clears the selection; right opens the
/// radial menu for the hovered node's semantic class, or the void menu.
pub fn handle_click(state: &CursorState, scene: &Scene, button: Button, config: &EngineConfig) -> ClickEffect {
    let hovered = hover_target(state).and_then(|id| scene.node(id));
    match button {
        Button::Left => match hovered {
            Some(node) => ClickEffect::Select(node.id.clone()),
            None => ClickEffect::ClearSelection,
        },
        Button::Right => {
            let class = hovered.map_or(VOID_MENU_KEY, |n| n.label.class_name.as_str());
            match config.menu_for(class) {
                Some(items) => ClickEffect::OpenMenu(RadialMenu::open(items.to_vec(), hovered.map(|n| n.id.clone()))),
                None => ClickEffect::None,
            }
        }
        Button::Middle => ClickEffect::None,
    }
}

impl Selection {
    pub fn apply(&mut self, effect: &ClickEffect) {
        match effect {
            ClickEffect::Select(id) => self.set_single(id),
            ClickEffect::ClearSelection => self.clear(),
            ClickEffect::OpenMenu(_) | ClickEffect::None => {}
        }
    }
}
