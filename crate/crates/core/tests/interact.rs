mod common;

use common::unit;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use worldmouse_core::config::{EngineConfig, MenuItem};
use worldmouse_core::cursor::{Button, CursorMode, EventKind, InputEvent, ViewPose};
use worldmouse_core::geometry::{Ray, Transform, TriMesh, Vec3};
use worldmouse_core::interact::{gizmo_drag, menu_navigate, Axis, Engine, GizmoAxis, RadialMenu};
use worldmouse_core::scene::{Geometry, OriginKind, Scene, SceneNode, SemanticLabel};

/// Closest point on the axis line to the ray line by grid search over the axis
/// parameter, with the ray parameter solved for each candidate.
fn grid_closest(g: &GizmoAxis, ray: &Ray) -> Vec3 {
    let gap = |s: f64| {
        let p = g.origin + g.direction * s;
        let t = (p - ray.origin).dot(ray.direction);
        p.distance(ray.origin + ray.direction * t)
    };
    let (mut lo, mut hi) = (-20.0, 20.0);
    for _ in 0..6 {
        let n = 400;
        let step = (hi - lo) / n as f64;
        let best = (0..=n).map(|i| lo + step * i as f64).min_by(|a, b| gap(*a).total_cmp(&gap(*b))).unwrap();
        lo = best - step;
        hi = best + step;
    }
    g.origin + g.direction * (0.5 * (lo + hi))
}

#[test]
fn gizmo_matches_grid_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut checked = 0;
    while checked < 500 {
        let g = GizmoAxis {
            node_id: "n".into(),
            axis: Axis::X,
            direction: unit(&mut rng),
            origin: Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(1.0..3.0)),
        };
        let ray = Ray::new(Vec3::ZERO, (g.origin + unit(&mut rng) * 0.5).normalize()).unwrap();
        let b = g.direction.dot(ray.direction);
        let Some(got) = gizmo_drag(&g, &ray) else {
            assert!(1.0 - b * b < 1e-6);
            continue;
        };
        if 1.0 - b * b < 0.05 {
            continue;
        }
        let want = grid_closest(&g, &ray);
        assert!(got.distance(want) <= 1e-3, "{got:?} vs {want:?}");
        assert!((got - g.origin).cross(g.direction).length() <= 1e-9);
        checked += 1;
    }
}

proptest! {
    #[test]
    fn menu_index_ignores_scale(
        angle in 0.0..std::f64::consts::TAU,
        len in 8.5..200.0f64,
        k in 1.0..50.0f64,
        n in 1usize..=12,
    ) {
        let items: Vec<MenuItem> = (0..n).map(|i| MenuItem::new(&format!("i{i}"), &format!("a{i}"))).collect();
        let (dx, dy) = (len * angle.sin(), -len * angle.cos());
        let mut a = RadialMenu::open(items.clone(), None);
        let mut b = RadialMenu::open(items, None);
        let ia = menu_navigate(&mut a, dx, dy);
        let ib = menu_navigate(&mut b, dx * k, dy * k);
        prop_assert!(ia.is_some());
        prop_assert_eq!(ia, ib);
    }
}

fn desk() -> Scene {
    let cube = |id: &str, x: f64, z: f64| {
        SceneNode::new(
            id,
            SemanticLabel::new("cube", 1.0),
            OriginKind::Virtual,
            Transform::from_translation(Vec3::new(x, 0.0, z)),
            Geometry::Mesh(TriMesh::cuboid(Vec3::splat(0.12))),
        )
    };
    let wall = SceneNode::new(
        "wall",
        SemanticLabel::new("wall", 0.9),
        OriginKind::Real,
        Transform::from_translation(Vec3::new(0.0, 0.0, 4.0)),
        Geometry::Mesh(TriMesh::cuboid(Vec3::new(6.0, 6.0, 0.05))),
    );
    Scene::new(ViewPose::default(), vec![cube("a", -0.4, 2.0), cube("b", 0.0, 2.2), cube("c", 0.4, 1.8), wall]).unwrap()
}

fn random_session(seed: u64) -> Vec<InputEvent> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..400u64)
        .map(|t| match rng.random_range(0..20) {
            0 => InputEvent::button(t, Button::Left, true),
            1 => InputEvent::button(t, Button::Left, false),
            2 => InputEvent::button(t, Button::Right, true),
            3 => InputEvent::scroll(t, rng.random_range(-3..=3)),
            _ => InputEvent::delta(t, rng.random_range(-60..=60), rng.random_range(-60..=60)),
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn engine_invariants_hold_over_random_sessions(seed in any::<u64>()) {
        let mut engine = Engine::new(desk(), EngineConfig::default()).unwrap();
        let mut drag_depth: Option<(String, f64)> = None;
        for event in random_session(seed) {
            let held = matches!(event.kind, EventKind::Delta { .. } | EventKind::View(_));
            engine.handle(&event);
            let scene = engine.scene();
            for id in engine.selection().ids() {
                prop_assert!(scene.node(id).is_some(), "selection holds deleted {id}");
            }
            if let Some(ghost) = engine.ghost() {
                prop_assert!(!scene.node(ghost).unwrap().interactable);
                prop_assert_ne!(engine.hovered(), Some(ghost));
            }
            let real_moved = scene.node("wall").unwrap().transform.translation != Vec3::new(0.0, 0.0, 4.0);
            prop_assert!(!real_moved);
            if let CursorMode::OnPanel { u, v, .. } = engine.state().mode {
                prop_assert!((0.0..=1.0).contains(&u) && (0.0..=1.0).contains(&v));
            }
            match engine.drag() {
                Some(d) => {
                    let grab = scene.node(&d.node_id).unwrap().transform.translation - d.grab_offset;
                    if let Some((id, depth)) = &drag_depth {
                        if *id == d.node_id && held {
                            prop_assert!((grab.length() - depth).abs() <= 1e-9);
                        }
                    }
                    if d.active {
                        prop_assert!((grab.length() - d.grab_depth).abs() <= 1e-9);
                    }
                    drag_depth = Some((d.node_id.clone(), d.grab_depth));
                }
                None => drag_depth = None,
            }
            if let Some(g) = engine.gizmo() {
                let p = scene.node(&g.node_id).unwrap().transform.translation - g.origin;
                prop_assert!(p.cross(g.direction).length() <= 1e-9);
            }
        }
    }
}
