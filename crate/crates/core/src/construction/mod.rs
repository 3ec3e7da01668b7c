//! The layered witness-collector construction and the classical baselines.

mod assemble;
mod baselines;
mod cover;
mod layers;

pub use assemble::{
    assemble, collector_load, gauge, verify_witness_collector, CollectorPiece, CollectorRegion, WcReport, Witness,
    WitnessCollectorSystem,
};
pub use baselines::{bronshteyn_ivanov, dudley, Baseline};
pub use cover::{
    balance_cap, build_balanced_cover, cap_type, type_scale, type_width, Cover, CoverEntry, CoverParams, CoverReport,
    TypedCap,
};
pub use layers::{build_layers, layer_count, LayerChecks, LayerSystem};

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::bodies::{to_canonical, Body, ConvexBodyOracle};
use crate::caps::CapBody;
use crate::error::{Error, Result};
use crate::geom::{self, ComplexityProfile, Point, Polytope};
use crate::metrics::{check_nested, hausdorff_inner, HAUSDORFF_DIRS};

/// Balance window of the caps A. Every ball cap has ratio exactly 1 at
/// ε = 0.05 in d = 2, 3; the window allows a factor 2 either way.
pub const B1: f64 = 0.5;
pub const B2: f64 = 2.0;
/// Largest canonical ε accepted.
pub const DELTA0: f64 = 0.1;

/// Knobs of [`approximate`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ApproxConfig {
    pub beta: f64,
    pub sigma: f64,
    pub c: f64,
    pub b1: f64,
    pub b2: f64,
    /// Starting c₀; halved until the shells fit inside ε.
    pub c0: f64,
    pub delta0: f64,
    pub seed: u64,
    /// Candidate directions per unit of (1/ε)^{(d−1)/2} (canonical ε).
    pub dir_factor: f64,
    /// Fresh directions for the property-3 check of the cover.
    pub check_dirs: usize,
    pub hausdorff_dirs: usize,
    /// Times the direction count may double when P misses an ε-cap.
    pub max_retries: usize,
}

impl Default for ApproxConfig {
    fn default() -> Self {
        ApproxConfig {
            beta: 2.0,
            sigma: 4.0,
            c: crate::polar::DEFAULT_C,
            b1: B1,
            b2: B2,
            c0: 1.0,
            delta0: DELTA0,
            seed: 0,
            dir_factor: 6.0,
            check_dirs: 0,
            hausdorff_dirs: HAUSDORFF_DIRS,
            max_retries: 3,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Constants {
    #[serde(rename = "β")]
    pub beta: f64,
    #[serde(rename = "σ")]
    pub sigma: f64,
    pub c: f64,
    #[serde(rename = "c₀")]
    pub c0: f64,
    #[serde(rename = "c₁")]
    pub c1: f64,
    #[serde(rename = "b₁")]
    pub b1: f64,
    #[serde(rename = "b₂")]
    pub b2: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Counts {
    pub vertices: usize,
    pub faces_by_dim: Vec<usize>,
    pub total: usize,
}

impl From<&ComplexityProfile> for Counts {
    fn from(p: &ComplexityProfile) -> Self {
        Counts { vertices: p.f_vector.first().copied().unwrap_or(0), faces_by_dim: p.f_vector.clone(), total: p.total }
    }
}

/// The JSON record of one run.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ApproxRecord {
    pub body: String,
    pub dim: usize,
    pub eps: f64,
    pub seed: u64,
    pub constants: Constants,
    pub counts: Counts,
    pub hausdorff_est: f64,
    pub witness_count: usize,
    pub collector_max_points: usize,
    pub runtime_ms: u64,
}

/// Per-run statistics beyond the record.
#[derive(Clone, Debug, Serialize)]
pub struct ApproxStats {
    pub gamma: f64,
    /// ε in canonical coordinates.
    pub canonical_eps: f64,
    pub t: i32,
    pub attempts: usize,
    pub cover: CoverReport,
    pub layers: LayerChecks,
    pub layer_violations: usize,
    /// Witnesses per layer.
    pub per_layer: BTreeMap<i32, usize>,
}

#[derive(Clone, Debug)]
pub struct ApproximationResult {
    /// Selected points in the original coordinates.
    pub points: Vec<Point>,
    pub polytope: Polytope,
    pub profile: ComplexityProfile,
    pub hausdorff_est: f64,
    pub record: ApproxRecord,
    pub stats: ApproxStats,
    /// The system in canonical coordinates, with S there.
    pub system: WitnessCollectorSystem,
    pub canonical_points: Vec<Point>,
}

fn n_dirs(d: usize, eps: f64, factor: f64) -> usize {
    (factor * (1.0 / eps).powf((d - 1) as f64 / 2.0)).ceil() as usize
}

/// Inner ε-approximation of K by the layered construction.
pub fn approximate(k: &Body, eps: f64, cfg: &ApproxConfig) -> Result<ApproximationResult> {
    let start = Instant::now();
    let d = k.dim();
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Config(format!("ε must be positive, got {eps}")));
    }
    if !(cfg.beta >= 1.0 && cfg.sigma >= 1.0 && cfg.b2 > cfg.b1 && cfg.b1 > 0.0 && cfg.c0 > 0.0) {
        return Err(Error::Config("need β, σ ≥ 1, 0 < b₁ < b₂ and c₀ > 0".into()));
    }
    let canon = to_canonical(k)?;
    let stretch = canon.map.inverse_norm();
    let eps_c = eps / stretch;
    if eps_c > cfg.delta0 * (1.0 + 1e-9) {
        return Err(Error::EpsilonTooLarge { eps, limit: cfg.delta0 * stretch });
    }
    let gamma = canon.gamma;
    // Outer caps C′ = A^β are balanced with window β[b₁, b₂].
    let c1 = 2.0 * cfg.beta * cfg.b2 / gamma.sqrt();
    let t = layer_count(eps_c);

    // Coarse proxy for sizing c₀ before the expensive one is built.
    let coarse = CapBody::new(&canon.body, eps_c)?;
    let mut c0 = cfg.c0;
    while let Err(Error::ConstantsInfeasible { .. }) = build_layers(&coarse, eps_c, c0, c1, gamma) {
        c0 /= 2.0;
        if c0 < 1e-6 {
            return Err(Error::NotConverged("no c₀ fits the shells inside ε".into()));
        }
    }

    let (proxy, layers) = loop {
        let proxy = CapBody::new(&canon.body, c0 * eps_c)?;
        match build_layers(&proxy, eps_c, c0, c1, gamma) {
            Ok(l) => break (proxy, l),
            Err(Error::ConstantsInfeasible { .. }) => c0 /= 2.0,
            Err(e) => return Err(e),
        }
    };
    let alpha = c0 * eps_c;

    let mut attempts = 0;
    let mut factor = cfg.dir_factor;
    loop {
        attempts += 1;
        let params = CoverParams {
            beta: cfg.beta,
            sigma: cfg.sigma,
            n_dirs: n_dirs(d, eps_c, factor),
            repair_dirs: n_dirs(d, eps_c, factor / 2.0),
            check_dirs: cfg.check_dirs,
            seed: cfg.seed,
            t,
        };
        let cover = build_balanced_cover(&proxy, alpha, &params)?;
        let system = assemble(&proxy, &cover, &layers, cfg.sigma);
        let canonical_points = system.points();
        let points: Vec<Point> = canonical_points.iter().map(|p| canon.inverse.apply(p)).collect();
        let polytope = Polytope::hull(&points)?;
        check_nested(&polytope, k)?;
        let h = hausdorff_inner(&polytope, k, cfg.hausdorff_dirs, true)?;
        if h > eps && attempts <= cfg.max_retries {
            factor *= 2.0;
            continue;
        }
        let profile = geom::face_lattice(&polytope);
        let (collector_max_points, _) = collector_load(&system, &canonical_points);
        let mut per_layer = BTreeMap::new();
        for w in &system.witnesses {
            *per_layer.entry(w.group).or_insert(0) += 1;
        }
        let record = ApproxRecord {
            body: k.kind().to_string(),
            dim: d,
            eps,
            seed: cfg.seed,
            constants: Constants { beta: cfg.beta, sigma: cfg.sigma, c: cfg.c, c0, c1, b1: cfg.b1, b2: cfg.b2 },
            counts: Counts::from(&profile),
            hausdorff_est: h,
            witness_count: system.witnesses.len(),
            collector_max_points,
            runtime_ms: start.elapsed().as_millis() as u64,
        };
        let stats = ApproxStats {
            gamma,
            canonical_eps: eps_c,
            t,
            attempts,
            cover: cover.report.clone(),
            layers: layers.checks.clone(),
            layer_violations: system.layer_violations,
            per_layer,
        };
        return Ok(ApproximationResult {
            points,
            polytope,
            profile,
            hausdorff_est: h,
            record,
            stats,
            system,
            canonical_points,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_polygon() {
        let k = Body::ball(2, 1.0).unwrap();
        let r = approximate(&k, 0.05, &ApproxConfig::default()).unwrap();
        assert!(r.hausdorff_est <= 0.05, "{}", r.hausdorff_est);
        assert_eq!(r.points.len(), r.record.witness_count);
        let total = r.profile.total as f64;
        let scale = 1.0 / 0.05f64.sqrt();
        assert!(total <= 20.0 * scale && total >= scale / 20.0, "{total}");
        assert!(r.polytope.vertices().iter().all(|v| k.contains_tol(v, 1e-9)));
    }

    #[test]
    fn too_large_rejected() {
        let k = Body::ball(2, 1.0).unwrap();
        assert!(matches!(approximate(&k, 0.5, &ApproxConfig::default()), Err(Error::EpsilonTooLarge { .. })));
        assert!(matches!(approximate(&k, -1.0, &ApproxConfig::default()), Err(Error::Config(_))));
    }
}
