use super::InteractError;
use crate::config::EngineConfig;
use crate::cursor::{CursorMode, CursorState};
use crate::geometry::{Quat, Transform, Vec3};
use crate::scene::{Geometry, OriginKind, Scene, SceneNode};

/// Adds a non-interactable copy of `template` at the cursor and returns its id
/// (`<template>-<n>` with the smallest free `n`).
pub fn spawn_ghost(
    scene: &mut Scene,
    template: &str,
    config: &EngineConfig,
    state: &CursorState,
) -> Result<String, InteractError> {
    let tpl = config.templates.get(template).ok_or_else(|| InteractError::UnknownTemplate(template.to_owned()))?;
    let id =
        (1u64..).map(|n| format!("{template}-{n}")).find(|id| scene.node(id).is_none()).expect("unbounded id space");
    let transform = rest_pose(&tpl.geometry, Vec3::splat(1.0), state);
    let node = SceneNode::new(&id, tpl.label.clone(), OriginKind::Virtual, transform, tpl.geometry.clone())
        .with_interactable(false);
    scene.add_node(node)?;
    Ok(id)
}

/// Moves a ghost to where it would land for the current cursor state.
pub fn follow_cursor(scene: &mut Scene, ghost: &str, state: &CursorState) -> Result<(), InteractError> {
    let node = scene.node(ghost).ok_or(InteractError::NoGhost)?;
    let transform = rest_pose(&node.geometry, node.transform.scale, state);
    scene.update_node_transform(ghost, transform)?;
    Ok(())
}

/// Anchors the ghost and makes it interactable. On a surface the node's local
/// +Z is aligned with the surface normal and it rests in contact; in the void
/// it sits at the cursor facing the viewer.
pub fn place_ghost(scene: &mut Scene, ghost: Option<&str>, state: &CursorState) -> Result<String, InteractError> {
    let id = ghost.ok_or(InteractError::NoGhost)?;
    follow_cursor(scene, id, state)?;
    scene.set_interactable(id, true)?;
    Ok(id.to_owned())
}

fn rest_pose(geometry: &Geometry, scale: Vec3, state: &CursorState) -> Transform {
    let n = state.orientation;
    let rotation = Quat::from_rotation_arc(Vec3::Z, n);
    let lift = match state.mode {
        CursorMode::InVoid { .. } => 0.0,
        CursorMode::OnSurface { .. } | CursorMode::OnPanel { .. } => geometry
            .local_mesh()
            .vertices()
            .iter()
            .map(|&v| -rotation.rotate(v.mul_elem(scale)).dot(n))
            .fold(0.0, f64::max),
    };
    Transform { translation: state.position + n * lift, rotation, scale }
}
