use crate::config::EngineConfig;
use crate::geometry::Vec3;
use crate::scene::silhouette::gap_to_samples;
use crate::scene::SilhouetteCache;

/// Depth of the cursor in empty space along `direction`.
///
/// The `k_nearest` cached nodes with the smallest angular gap are blended by
/// inverse-distance weights `(α + ε)^-p` over their boundary depths. Equal gaps
/// keep cache order. An empty cache yields `default_depth`.
pub fn void_depth(direction: Vec3, cache: &SilhouetteCache, config: &EngineConfig) -> f64 {
    void_depth_excluding(direction, cache, config, None)
}

/// [`void_depth`] ignoring node `exclude` (a drag payload).
pub fn void_depth_excluding(
    direction: Vec3,
    cache: &SilhouetteCache,
    config: &EngineConfig,
    exclude: Option<&str>,
) -> f64 {
    let mut gaps: Vec<(f64, f64)> = cache
        .nodes
        .iter()
        .filter(|n| exclude != Some(n.node_id.as_str()) && !n.samples.is_empty())
        .map(|n| gap_to_samples(&n.samples, direction))
        .collect();
    if gaps.is_empty() {
        return config.default_depth;
    }
    gaps.sort_by(|a, b| a.0.total_cmp(&b.0));
    gaps.truncate(config.k_nearest);
    let (mut num, mut den) = (0.0, 0.0);
    for (alpha, depth) in gaps {
        let w = (alpha + config.idw_epsilon).powf(-config.idw_power);
        num += w * depth;
        den += w;
    }
    num / den
}
