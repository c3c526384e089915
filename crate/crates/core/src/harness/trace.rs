use std::fmt::Write;

use thiserror::Error;

use crate::cursor::{Button, EventKind, InputEvent, ViewPose};
use crate::geometry::Vec3;
use crate::numfmt::write_f64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct TraceError {
    pub line: usize,
    pub message: String,
}

/// Time-ordered input events.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trace {
    pub events: Vec<InputEvent>,
}

/// Parses a trace file. Blank lines and lines starting with `#` are skipped;
/// timestamps must be non-decreasing.
pub fn parse_trace(text: &str) -> Result<Trace, TraceError> {
    let mut events: Vec<InputEvent> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let Some(event) = parse_event_line(raw).map_err(|message| TraceError { line, message })? else {
            continue;
        };
        if let Some(prev) = events.last() {
            if event.t < prev.t {
                return Err(TraceError {
                    line,
                    message: format!("timestamp {} is earlier than previous timestamp {}", event.t, prev.t),
                });
            }
        }
        events.push(event);
    }
    Ok(Trace { events })
}

/// Parses one trace line; `Ok(None)` for blank and comment lines.
pub fn parse_event_line(raw: &str) -> Result<Option<InputEvent>, String> {
    let text = raw.trim();
    if text.is_empty() || text.starts_with('#') {
        return Ok(None);
    }
    let tokens: Vec<&str> = text.split_whitespace().collect();
    let t: u64 = tokens[0].parse().map_err(|_| format!("invalid timestamp {:?}", tokens[0]))?;
    let Some(&keyword) = tokens.get(1) else {
        return Err("missing event kind".into());
    };
    let args = &tokens[2..];
    let expect = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(format!("{keyword} takes {n} argument(s), found {}", args.len()))
        }
    };
    let int = |s: &str| s.parse::<i64>().map_err(|_| format!("invalid integer {s:?}"));
    let kind = match keyword {
        "DELTA" => {
            expect(2)?;
            EventKind::Delta { dx: int(args[0])?, dy: int(args[1])? }
        }
        "BTN" => {
            expect(2)?;
            let button = match args[0] {
                "LEFT" => Button::Left,
                "RIGHT" => Button::Right,
                "MIDDLE" => Button::Middle,
                other => return Err(format!("unknown button {other:?}")),
            };
            let pressed = match args[1] {
                "DOWN" => true,
                "UP" => false,
                other => return Err(format!("unknown button state {other:?}")),
            };
            EventKind::Button { button, pressed }
        }
        "SCROLL" => {
            expect(1)?;
            EventKind::Scroll { ticks: int(args[0])? }
        }
        "VIEW" => {
            expect(9)?;
            let mut v = [0.0; 9];
            for (slot, s) in v.iter_mut().zip(args) {
                *slot =
                    s.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| format!("invalid number {s:?}"))?;
            }
            let pose =
                ViewPose::new(Vec3::new(v[0], v[1], v[2]), Vec3::new(v[3], v[4], v[5]), Vec3::new(v[6], v[7], v[8]))?;
            EventKind::View(pose)
        }
        other => return Err(format!("unknown event kind {other:?}")),
    };
    Ok(Some(InputEvent { t, kind }))
}

/// Formats an event as a trace line (no trailing newline).
pub fn format_event(event: &InputEvent) -> String {
    let mut s = event.t.to_string();
    match &event.kind {
        EventKind::Delta { dx, dy } => {
            let _ = write!(s, " DELTA {dx} {dy}");
        }
        EventKind::Button { button, pressed } => {
            let b = match button {
                Button::Left => "LEFT",
                Button::Right => "RIGHT",
                Button::Middle => "MIDDLE",
            };
            let _ = write!(s, " BTN {b} {}", if *pressed { "DOWN" } else { "UP" });
        }
        EventKind::Scroll { ticks } => {
            let _ = write!(s, " SCROLL {ticks}");
        }
        EventKind::View(v) => {
            s.push_str(" VIEW");
            for x in v.origin.to_array().into_iter().chain(v.forward.to_array()).chain(v.up.to_array()) {
                s.push(' ');
                write_f64(&mut s, x);
            }
        }
    }
    s
}

/// Formats a whole trace, one event per line.
pub fn format_trace(trace: &Trace) -> String {
    trace.events.iter().map(|e| format_event(e) + "\n").collect()
}
