use super::TrajectorySample;
use crate::cursor::ModeTag;

/// Summary statistics of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Metrics {
    /// Sum of distances between consecutive positions, in meters.
    pub path_length: f64,
    /// Number of consecutive sample pairs whose modes differ.
    pub mode_transitions: usize,
    /// Largest |Δdepth| between consecutive samples, in meters.
    pub max_depth_jump: f64,
    /// Fraction of samples taken on a surface.
    pub surface_time_fraction: f64,
}

pub fn compute_metrics(samples: &[TrajectorySample]) -> Metrics {
    let mut m = Metrics::default();
    for pair in samples.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        m.path_length += a.position.distance(b.position);
        m.mode_transitions += usize::from(a.mode != b.mode);
        m.max_depth_jump = m.max_depth_jump.max((b.depth - a.depth).abs());
    }
    if !samples.is_empty() {
        let on_surface = samples.iter().filter(|s| s.mode == ModeTag::Surface).count();
        m.surface_time_fraction = on_surface as f64 / samples.len() as f64;
    }
    m
}

impl Metrics {
    /// `name<TAB>value` lines.
    pub fn to_text(&self) -> String {
        use crate::numfmt::fmt_f64;
        format!(
            "path_length\t{}\nmode_transitions\t{}\nmax_depth_jump\t{}\nsurface_time_fraction\t{}\n",
            fmt_f64(self.path_length),
            self.mode_transitions,
            fmt_f64(self.max_depth_jump),
            fmt_f64(self.surface_time_fraction)
        )
    }
}
