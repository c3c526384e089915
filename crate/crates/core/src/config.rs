//! Engine tunables: gains, tolerances, interpolation parameters, and the
//! label→menu table and spawn templates used by the interaction layer.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::geometry::{TriMesh, Vec3};
use crate::scene::{Geometry, PanelSpec, SemanticLabel};

/// Label key used for the radial menu opened over empty space.
pub const VOID_MENU_KEY: &str = "void";
/// Label key used when a node's class has no dedicated entry.
pub const DEFAULT_MENU_KEY: &str = "*";

/// One radial-menu entry.
#[derive(Debug, Clone, PartialEq)]
pub struct MenuItem {
    pub label: String,
    pub action: String,
}

impl MenuItem {
    pub fn new(label: &str, action: &str) -> Self {
        Self { label: label.to_owned(), action: action.to_owned() }
    }
}

/// Geometry and label of an object that can be spawned as a ghost.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeTemplate {
    pub label: SemanticLabel,
    pub geometry: Geometry,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    /// Degrees of cursor rotation per input count.
    pub angular_gain: f64,
    /// Degrees; must stay below 90.
    pub pitch_limit: f64,
    /// Panel pixels per input count.
    pub panel_gain: f64,
    pub idw_power: f64,
    /// Radians added to every angular gap before weighting.
    pub idw_epsilon: f64,
    pub k_nearest: usize,
    /// Meters; void depth when nothing is visible.
    pub default_depth: f64,
    pub silhouette_samples: usize,
    pub scroll_depth_factor: f64,
    /// Exponential smoothing of void depth, in `[0, 1)`; 0 disables it.
    pub depth_smoothing: f64,
    /// Meters.
    pub snap_distance: f64,
    pub bvh_leaf_size: usize,
    /// Semantic class → radial menu items.
    pub actions: BTreeMap<String, Vec<MenuItem>>,
    pub templates: BTreeMap<String, NodeTemplate>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("config field `{0}` must be positive and finite")]
    NotPositive(&'static str),
    #[error("config field `depth_smoothing` must lie in [0, 1)")]
    Smoothing,
    #[error("config field `pitch_limit` must be below 90 degrees")]
    PitchLimit,
    #[error("menu for `{0}` must have between 1 and 12 items")]
    MenuSize(String),
}

pub const MAX_MENU_ITEMS: usize = 12;

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            angular_gain: 0.05,
            pitch_limit: 89.0,
            panel_gain: 2.0,
            idw_power: 2.0,
            idw_epsilon: 1e-4,
            k_nearest: 4,
            default_depth: 2.0,
            silhouette_samples: 64,
            scroll_depth_factor: 1.05,
            depth_smoothing: 0.0,
            snap_distance: 0.05,
            bvh_leaf_size: crate::geometry::DEFAULT_MAX_LEAF,
            actions: default_actions(),
            templates: default_templates(),
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = [
            ("angular_gain", self.angular_gain),
            ("pitch_limit", self.pitch_limit),
            ("panel_gain", self.panel_gain),
            ("idw_power", self.idw_power),
            ("idw_epsilon", self.idw_epsilon),
            ("default_depth", self.default_depth),
            ("scroll_depth_factor", self.scroll_depth_factor),
            ("snap_distance", self.snap_distance),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ConfigError::NotPositive(name));
            }
        }
        for (name, v) in [
            ("k_nearest", self.k_nearest),
            ("silhouette_samples", self.silhouette_samples),
            ("bvh_leaf_size", self.bvh_leaf_size),
        ] {
            if v == 0 {
                return Err(ConfigError::NotPositive(name));
            }
        }
        if !(0.0..1.0).contains(&self.depth_smoothing) {
            return Err(ConfigError::Smoothing);
        }
        if self.pitch_limit >= 90.0 {
            return Err(ConfigError::PitchLimit);
        }
        for (key, items) in &self.actions {
            if items.is_empty() || items.len() > MAX_MENU_ITEMS {
                return Err(ConfigError::MenuSize(key.clone()));
            }
        }
        Ok(())
    }

    /// Menu for a semantic class, falling back to the default entry.
    pub fn menu_for(&self, class: &str) -> Option<&[MenuItem]> {
        self.actions.get(class).or_else(|| self.actions.get(DEFAULT_MENU_KEY)).map(Vec::as_slice)
    }
}

/// Partial configuration, as read from a scene file's `config` block or a config file.
/// Menu and template entries replace same-named defaults one key at a time.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConfigOverrides {
    pub angular_gain: Option<f64>,
    pub pitch_limit: Option<f64>,
    pub panel_gain: Option<f64>,
    pub idw_power: Option<f64>,
    pub idw_epsilon: Option<f64>,
    pub k_nearest: Option<usize>,
    pub default_depth: Option<f64>,
    pub silhouette_samples: Option<usize>,
    pub scroll_depth_factor: Option<f64>,
    pub depth_smoothing: Option<f64>,
    pub snap_distance: Option<f64>,
    pub bvh_leaf_size: Option<usize>,
    pub actions: BTreeMap<String, Vec<MenuItem>>,
    pub templates: BTreeMap<String, NodeTemplate>,
}

impl ConfigOverrides {
    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }

    pub fn apply_to(&self, cfg: &mut EngineConfig) {
        macro_rules! set {
            ($($f:ident),*) => {$(
                if let Some(v) = self.$f {
                    cfg.$f = v;
                }
            )*};
        }
        set!(
            angular_gain,
            pitch_limit,
            panel_gain,
            idw_power,
            idw_epsilon,
            k_nearest,
            default_depth,
            silhouette_samples,
            scroll_depth_factor,
            depth_smoothing,
            snap_distance,
            bvh_leaf_size
        );
        for (k, v) in &self.actions {
            cfg.actions.insert(k.clone(), v.clone());
        }
        for (k, v) in &self.templates {
            cfg.templates.insert(k.clone(), v.clone());
        }
    }
}

fn default_actions() -> BTreeMap<String, Vec<MenuItem>> {
    let mut t = BTreeMap::new();
    t.insert(
        DEFAULT_MENU_KEY.to_owned(),
        vec![
            MenuItem::new("Properties", "properties"),
            MenuItem::new("Move X", "gizmo:x"),
            MenuItem::new("Move Y", "gizmo:y"),
            MenuItem::new("Move Z", "gizmo:z"),
            MenuItem::new("Delete", "delete"),
            MenuItem::new("Copy", "copy"),
        ],
    );
    t.insert(
        VOID_MENU_KEY.to_owned(),
        vec![MenuItem::new("Spawn Note", "spawn:note"), MenuItem::new("Spawn Cube", "spawn:cube")],
    );
    t.insert("lamp".to_owned(), vec![MenuItem::new("Toggle", "toggle"), MenuItem::new("Properties", "properties")]);
    for surface in ["wall", "table", "desk", "floor"] {
        t.insert(
            surface.to_owned(),
            vec![
                MenuItem::new("Spawn Note", "spawn:note"),
                MenuItem::new("Spawn Cube", "spawn:cube"),
                MenuItem::new("Properties", "properties"),
            ],
        );
    }
    t
}

fn default_templates() -> BTreeMap<String, NodeTemplate> {
    let mut t = BTreeMap::new();
    t.insert(
        "note".to_owned(),
        NodeTemplate {
            label: SemanticLabel::new("note", 1.0),
            geometry: Geometry::Panel(PanelSpec { width: 0.2, height: 0.2, resolution_x: 200, resolution_y: 200 }),
        },
    );
    t.insert(
        "cube".to_owned(),
        NodeTemplate {
            label: SemanticLabel::new("cube", 1.0),
            geometry: Geometry::Mesh(TriMesh::cuboid(Vec3::splat(0.1))),
        },
    );
    t
}
