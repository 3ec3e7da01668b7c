use serde::Serialize;

use super::cover::type_width;
use crate::caps::CapBody;
use crate::error::{Error, Result};
use crate::geom::AffineMap;
use crate::sampling;

/// Directions used to measure support gaps between shells.
const GAP_DIRS: usize = 1000;

/// Numerical check of the five shell properties.
#[derive(Clone, Debug, Default, Serialize)]
pub struct LayerChecks {
    /// Every per-layer gap ≤ c₁w_j/√γ.
    pub upper: bool,
    /// Every per-layer gap ≥ √γc₁w_j/2.
    pub lower: bool,
    /// Largest support gap between K and the innermost shell.
    pub total_gap: f64,
    pub total_ok: bool,
    /// All scale factors in [1/2, 1].
    pub scales_ok: bool,
    /// Smallest volume ratio s^d.
    pub min_volume_ratio: f64,
    /// Layer gap divided by w_j, smallest and largest over layers and directions.
    pub min_gap_ratio: f64,
    pub max_gap_ratio: f64,
}

/// Shells K_j = s_j K for −t−1 ≤ j ≤ t with s_t = 1 and
/// s_j = ∏_{i=j+1}^t (1 − c₁w_i), w_i = c₀ε/max(i²,1).
#[derive(Clone, Debug, Serialize)]
pub struct LayerSystem {
    pub epsilon: f64,
    pub c0: f64,
    pub c1: f64,
    pub gamma: f64,
    pub t: i32,
    /// s_j at index j + t + 1.
    pub scales: Vec<f64>,
    pub checks: LayerChecks,
}

/// t = ⌈log₂(1/ε)⌉.
pub fn layer_count(eps: f64) -> i32 {
    (1.0 / eps).log2().ceil().max(1.0) as i32
}

impl LayerSystem {
    /// α = c₀ε, the cover width.
    pub fn alpha(&self) -> f64 {
        self.c0 * self.epsilon
    }

    pub fn w(&self, j: i32) -> f64 {
        type_width(self.alpha(), j)
    }

    /// Scale factor of T_j.
    pub fn scale(&self, j: i32) -> f64 {
        self.scales[(j + self.t + 1) as usize]
    }

    /// T_j in dimension d.
    pub fn map(&self, j: i32, d: usize) -> AffineMap {
        AffineMap::scaling(d, self.scale(j)).expect("positive scale")
    }

    /// Layer r with s_{r−1} < g ≤ s_r, from the gauge g of a point; `None`
    /// in the innermost core or outside K.
    pub fn layer_of_gauge(&self, g: f64) -> Option<i32> {
        if g > 1.0 + 1e-12 || g <= self.scale(-self.t - 1) {
            return None;
        }
        // Scales increase with j.
        let idx = self.scales.partition_point(|&s| s < g);
        Some((idx as i32 - self.t - 1).clamp(-self.t, self.t))
    }
}

/// Shell scale factors and their property checks on the working polytope.
pub fn build_layers(k: &CapBody, eps: f64, c0: f64, c1: f64, gamma: f64) -> Result<LayerSystem> {
    if !(c0 > 0.0 && c1 > 0.0 && gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::Config(format!("bad layer constants c0={c0} c1={c1} γ={gamma}")));
    }
    let t = layer_count(eps);
    let alpha = c0 * eps;
    let n = (2 * t + 2) as usize;
    let mut scales = vec![1.0; n];
    for j in (-t - 1..t).rev() {
        let i = (j + t + 1) as usize;
        let f = 1.0 - c1 * type_width(alpha, j + 1);
        if !(f > 0.0) {
            return Err(Error::ConstantsInfeasible { gap: f64::INFINITY, eps });
        }
        scales[i] = scales[i + 1] * f;
    }
    let mut sys = LayerSystem { epsilon: eps, c0, c1, gamma, t, scales, checks: LayerChecks::default() };
    let d = k.dim();
    let sg = gamma.sqrt();
    let mut c =
        LayerChecks { upper: true, lower: true, total_ok: true, min_gap_ratio: f64::INFINITY, ..Default::default() };
    let inner = sys.scale(-t - 1);
    for u in sampling::sphere_directions(d, GAP_DIRS, 0) {
        let h = k.support(&u);
        for j in -t..=t {
            let gap = (sys.scale(j) - sys.scale(j - 1)) * h;
            let w = c1 * sys.w(j);
            // Tolerance covers the proxy's support error.
            c.upper &= gap <= w / sg * (1.0 + 1e-9);
            c.lower &= gap >= sg * w / 2.0 * (1.0 - 1e-9);
            let r = gap / sys.w(j);
            c.min_gap_ratio = c.min_gap_ratio.min(r);
            c.max_gap_ratio = c.max_gap_ratio.max(r);
        }
        c.total_gap = c.total_gap.max((1.0 - inner) * h);
    }
    c.total_ok = c.total_gap <= eps;
    c.scales_ok = sys.scales.iter().all(|&s| (0.5..=1.0).contains(&s));
    c.min_volume_ratio = inner.powi(d as i32);
    sys.checks = c;
    if !sys.checks.total_ok {
        return Err(Error::ConstantsInfeasible { gap: sys.checks.total_gap, eps });
    }
    Ok(sys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::Body;

    #[test]
    fn ball_layers() {
        let k = CapBody::new(&Body::ball(2, 1.0).unwrap(), 0.01).unwrap();
        let eps = 0.01;
        let l = build_layers(&k, eps, 0.05, 2.0, 1.0).unwrap();
        assert_eq!(l.t, 7);
        assert!(l.checks.total_gap <= eps);
        assert!(l.checks.scales_ok && l.checks.upper && l.checks.lower);
        assert_eq!(l.scale(l.t), 1.0);
        assert_eq!(l.layer_of_gauge(1.0), Some(l.t));
        assert_eq!(l.layer_of_gauge(0.5), None);
        let g = 0.5 * (l.scale(-2) + l.scale(-3));
        assert_eq!(l.layer_of_gauge(g), Some(-2));
        assert_eq!(l.layer_of_gauge(l.scale(-2)), Some(-2));
        assert!(matches!(build_layers(&k, eps, 1.0, 2.0, 1.0), Err(Error::ConstantsInfeasible { .. })));
    }
}
