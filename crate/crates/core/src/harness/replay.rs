use super::{Trace, TrajectorySample};
use crate::config::{ConfigError, ConfigOverrides, EngineConfig};
use crate::interact::Engine;
use crate::scene::Scene;

/// Defaults, then the scene's own `config` block, then `extra` (a config file).
pub fn effective_config(scene: &Scene, extra: Option<&ConfigOverrides>) -> Result<EngineConfig, ConfigError> {
    let mut cfg = EngineConfig::default();
    scene.config_overrides.apply_to(&mut cfg);
    if let Some(extra) = extra {
        extra.apply_to(&mut cfg);
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Log row describing the engine's state after an event at time `t`.
pub fn sample_engine(engine: &Engine, t: u64, action: Option<String>) -> TrajectorySample {
    let state = engine.state();
    TrajectorySample {
        t,
        mode: state.tag(),
        position: state.position,
        depth: state.depth(engine.cursor().view().origin),
        yaw: state.yaw,
        pitch: state.pitch,
        hovered: engine.hovered().map(str::to_owned),
        selection: engine.selection().ids().to_vec(),
        action,
    }
}

/// Feeds every event through a fresh engine, one sample per event.
pub fn replay(scene: &Scene, trace: &Trace, config: &EngineConfig) -> Result<Vec<TrajectorySample>, ConfigError> {
    let mut engine = Engine::new(scene.clone(), config.clone())?;
    Ok(trace
        .events
        .iter()
        .map(|event| {
            let outcome = engine.handle(event);
            sample_engine(&engine, event.t, outcome.action)
        })
        .collect())
}
