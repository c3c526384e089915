//! `wm`: replay input traces against scenes, compute trajectory metrics,
//! validate inputs, and serve interactive sessions.

use std::fmt::Display;
use std::fs;
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use worldmouse_core::config::{ConfigOverrides, EngineConfig};
use worldmouse_core::harness::{
    compute_metrics, effective_config, parse_log, parse_trace, replay, serve_on, write_log, Session, Trace,
};
use worldmouse_core::scene::{parse_config, parse_scene, Scene};

#[derive(Parser)]
#[command(name = "wm", version, about = "Depth-adaptive 3D cursor engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a trace against a scene and write the trajectory log.
    Replay {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Print metrics for a trajectory log.
    Metrics {
        #[arg(long)]
        log: PathBuf,
    },
    /// Serve one interactive session over TCP.
    Serve {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Check a scene file (and optionally a trace) without running anything.
    Validate {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
}

enum Failure {
    /// Malformed or invalid input (exit 2).
    Invalid(String),
    /// I/O or other runtime failure (exit 1).
    Runtime(String),
}

fn invalid(path: &Path, e: impl Display) -> Failure {
    Failure::Invalid(format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))
}

fn load_scene(path: &Path) -> Result<Scene, Failure> {
    parse_scene(&read(path)?).map_err(|e| invalid(path, e))
}

fn load_trace(path: &Path) -> Result<Trace, Failure> {
    parse_trace(&read(path)?).map_err(|e| invalid(path, e))
}

fn load_config(scene: &Scene, path: Option<&Path>) -> Result<EngineConfig, Failure> {
    let overrides: Option<ConfigOverrides> = match path {
        Some(p) => Some(parse_config(&read(p)?).map_err(|e| invalid(p, e))?),
        None => None,
    };
    effective_config(scene, overrides.as_ref()).map_err(|e| Failure::Invalid(format!("config: {e}")))
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Replay { scene, trace, out, config } => {
            let scene_doc = load_scene(&scene)?;
            let trace = load_trace(&trace)?;
            let cfg = load_config(&scene_doc, config.as_deref())?;
            let samples = replay(&scene_doc, &trace, &cfg).map_err(|e| Failure::Invalid(format!("config: {e}")))?;
            fs::write(&out, write_log(&samples)).map_err(|e| Failure::Runtime(format!("{}: {e}", out.display())))
        }
        Command::Metrics { log } => {
            let samples = parse_log(&read(&log)?).map_err(|e| invalid(&log, e))?;
            print!("{}", compute_metrics(&samples).to_text());
            Ok(())
        }
        Command::Serve { scene, port, host, config } => {
            let scene_doc = load_scene(&scene)?;
            let cfg = load_config(&scene_doc, config.as_deref())?;
            let session = Session::new(scene_doc, cfg).map_err(|e| Failure::Invalid(format!("config: {e}")))?;
            let runtime = |e: std::io::Error| Failure::Runtime(e.to_string());
            let listener = TcpListener::bind((host.as_str(), port)).map_err(runtime)?;
            eprintln!("listening on {}", listener.local_addr().map_err(runtime)?);
            serve_on(listener, session).map_err(runtime)
        }
        Command::Validate { scene, trace } => {
            let scene_doc = load_scene(&scene)?;
            load_config(&scene_doc, None)?;
            let n = scene_doc.nodes().len();
            println!("{}: ok ({n} node{})", scene.display(), if n == 1 { "" } else { "s" });
            if let Some(trace) = trace {
                let events = load_trace(&trace)?.events.len();
                println!("{}: ok ({events} events)", trace.display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
