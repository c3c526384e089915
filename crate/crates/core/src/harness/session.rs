use std::io::{self, BufRead, BufReader, Write};
use std::net::{Shutdown, TcpListener, ToSocketAddrs};
use std::sync::mpsc;
use std::thread;

use super::{parse_event_line, sample_engine};
use crate::config::{ConfigError, EngineConfig};
use crate::interact::Engine;
use crate::scene::{write_scene, Scene};

/// Engine side of the line protocol.
///
/// Client messages: `HELLO`, `EVT <trace line>`, `BYE`. Replies: `SCENE <scene
/// document on one line>`, `STATE <trajectory-log line>`, `ERR <message>`.
#[derive(Debug)]
pub struct Session {
    engine: Engine,
    last_t: Option<u64>,
    closed: bool,
}

impl Session {
    pub fn new(scene: Scene, config: EngineConfig) -> Result<Self, ConfigError> {
        Ok(Self { engine: Engine::new(scene, config)?, last_t: None, closed: false })
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Handles one client message and returns the reply, if any.
    pub fn handle_message(&mut self, message: &str) -> Option<String> {
        let message = message.trim_end_matches(['\r', '\n']);
        let (verb, rest) = message.split_once(' ').unwrap_or((message, ""));
        match verb {
            "HELLO" if rest.is_empty() => Some(format!("SCENE {}", write_scene(self.engine.scene(), false))),
            "BYE" if rest.is_empty() => {
                self.closed = true;
                None
            }
            "EVT" => Some(match self.event(rest) {
                Ok(line) => format!("STATE {line}"),
                Err(e) => format!("ERR {e}"),
            }),
            _ => Some(format!("ERR unknown message {message:?}")),
        }
    }

    fn event(&mut self, line: &str) -> Result<String, String> {
        let event = parse_event_line(line)?.ok_or("empty event")?;
        if let Some(prev) = self.last_t {
            if event.t < prev {
                return Err(format!("timestamp {} is earlier than previous timestamp {prev}", event.t));
            }
        }
        self.last_t = Some(event.t);
        let outcome = self.engine.handle(&event);
        Ok(sample_engine(&self.engine, event.t, outcome.action).to_line())
    }
}

/// Binds `addr`, serves a single client, and returns when it says `BYE` or disconnects.
pub fn serve_session(scene: Scene, config: EngineConfig, addr: impl ToSocketAddrs) -> Result<(), super::HarnessError> {
    let session = Session::new(scene, config)?;
    let listener = TcpListener::bind(addr)?;
    serve_on(listener, session)?;
    Ok(())
}

/// Accepts one connection on `listener` and runs `session` over it. A reader
/// thread forwards lines in arrival order to the engine loop.
pub fn serve_on(listener: TcpListener, mut session: Session) -> io::Result<()> {
    let (stream, _) = listener.accept()?;
    let reader = stream.try_clone()?;
    let (tx, rx) = mpsc::channel::<String>();
    let handle = thread::spawn(move || {
        for line in BufReader::new(reader).lines() {
            let Ok(line) = line else { break };
            if tx.send(line).is_err() {
                break;
            }
        }
    });
    let mut writer = io::BufWriter::new(stream.try_clone()?);
    let mut result = Ok(());
    for message in rx {
        if let Some(reply) = session.handle_message(&message) {
            if let Err(e) = writeln!(writer, "{reply}").and_then(|_| writer.flush()) {
                result = Err(e);
                break;
            }
        }
        if session.is_closed() {
            break;
        }
    }
    let _ = stream.shutdown(Shutdown::Both);
    let _ = handle.join();
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cursor::ViewPose;

    #[test]
    fn protocol_replies() {
        let scene = Scene::new(ViewPose::default(), vec![]).unwrap();
        let mut s = Session::new(scene, EngineConfig::default()).unwrap();
        assert!(s.handle_message("HELLO").unwrap().starts_with("SCENE {"));
        let err = s.handle_message("EVT garbage").unwrap();
        assert!(err.starts_with("ERR invalid timestamp"), "{err}");
        let state = s.handle_message("EVT 16 DELTA 100 0").unwrap();
        assert!(state.starts_with("STATE 16\tvoid\t"), "{state}");
        assert!(s.handle_message("EVT 3 DELTA 1 0").unwrap().starts_with("ERR timestamp 3"));
        assert!(s.handle_message("PING").unwrap().starts_with("ERR unknown message"));
        assert_eq!(s.handle_message("BYE"), None);
        assert!(s.is_closed());
    }
}
