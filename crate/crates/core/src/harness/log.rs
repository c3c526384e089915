use thiserror::Error;

use crate::cursor::ModeTag;
use crate::geometry::Vec3;
use crate::numfmt::write_f64;

/// One trajectory-log row, written after each processed event.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySample {
    /// Milliseconds.
    pub t: u64,
    pub mode: ModeTag,
    pub position: Vec3,
    /// Meters.
    pub depth: f64,
    /// Degrees.
    pub yaw: f64,
    /// Degrees.
    pub pitch: f64,
    pub hovered: Option<String>,
    pub selection: Vec<String>,
    pub action: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct LogError {
    pub line: usize,
    pub message: String,
}

const EMPTY: &str = "-";

impl TrajectorySample {
    /// Tab-separated `t mode x y z depth yaw pitch hovered selection action`;
    /// absent values are `-` and the selection is comma-joined.
    pub fn to_line(&self) -> String {
        let mut s = self.t.to_string();
        s.push('\t');
        s.push_str(self.mode.as_str());
        for x in [self.position.x, self.position.y, self.position.z, self.depth, self.yaw, self.pitch] {
            s.push('\t');
            write_f64(&mut s, x);
        }
        s.push('\t');
        s.push_str(self.hovered.as_deref().unwrap_or(EMPTY));
        s.push('\t');
        if self.selection.is_empty() {
            s.push_str(EMPTY);
        } else {
            s.push_str(&self.selection.join(","));
        }
        s.push('\t');
        s.push_str(self.action.as_deref().unwrap_or(EMPTY));
        s
    }

    pub fn parse_line(line: &str) -> Result<Self, String> {
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 11 {
            return Err(format!("expected 11 tab-separated fields, found {}", f.len()));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| format!("invalid number {s:?}"));
        let opt = |s: &str| (s != EMPTY).then(|| s.to_owned());
        Ok(Self {
            t: f[0].parse().map_err(|_| format!("invalid timestamp {:?}", f[0]))?,
            mode: ModeTag::parse(f[1]).ok_or_else(|| format!("unknown mode {:?}", f[1]))?,
            position: Vec3::new(num(f[2])?, num(f[3])?, num(f[4])?),
            depth: num(f[5])?,
            yaw: num(f[6])?,
            pitch: num(f[7])?,
            hovered: opt(f[8]),
            selection: if f[9] == EMPTY { Vec::new() } else { f[9].split(',').map(str::to_owned).collect() },
            action: opt(f[10]),
        })
    }
}

pub fn write_log(samples: &[TrajectorySample]) -> String {
    samples.iter().map(|s| s.to_line() + "\n").collect()
}

pub fn parse_log(text: &str) -> Result<Vec<TrajectorySample>, LogError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| TrajectorySample::parse_line(l).map_err(|message| LogError { line: i + 1, message }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> TrajectorySample {
        TrajectorySample {
            t: 16,
            mode: ModeTag::Surface,
            position: Vec3::new(0.17497732705184801, 0.0, 2.0),
            depth: 2.0076396750866947,
            yaw: 5.0,
            pitch: -0.1,
            hovered: Some("plane".into()),
            selection: vec!["a".into(), "b".into()],
            action: None,
        }
    }

    #[test]
    fn line_layout() {
        assert_eq!(
            sample().to_line(),
            "16\tsurface\t0.17497732705184801\t0\t2\t2.0076396750866947\t5\t-0.10000000000000001\tplane\ta,b\t-"
        );
    }

    #[test]
    fn round_trips() {
        let s = sample();
        assert_eq!(TrajectorySample::parse_line(&s.to_line()).unwrap(), s);
        let empty = TrajectorySample { hovered: None, selection: vec![], action: Some("delete".into()), ..s };
        assert_eq!(parse_log(&write_log(std::slice::from_ref(&empty))).unwrap(), [empty]);
        assert_eq!(parse_log("1\tvoid\t0\n").unwrap_err().line, 1);
    }
}
