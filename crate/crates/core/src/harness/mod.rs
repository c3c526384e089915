//! Deterministic replay of input traces against scenes, trajectory logs,
//! metrics, and the line protocol used to drive a live session.

mod log;
mod metrics;
mod replay;
mod session;
mod trace;

use thiserror::Error;

pub use log::{parse_log, write_log, LogError, TrajectorySample};
pub use metrics::{compute_metrics, Metrics};
pub use replay::{effective_config, replay, sample_engine};
pub use session::{serve_on, serve_session, Session};
pub use trace::{format_event, format_trace, parse_event_line, parse_trace, Trace, TraceError};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Config(#[from] crate::config::ConfigError),
    #[error(transparent)]
    Scene(#[from] crate::scene::SceneError),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Log(#[from] LogError),
}
