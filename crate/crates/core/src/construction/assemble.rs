use rand::RngExt;
use rayon::prelude::*;
use serde::Serialize;

use super::cover::Cover;
use super::layers::LayerSystem;
use crate::caps::CapBody;
use crate::geom::{Halfspace, Point, Polytope};
use crate::sampling;

/// Tolerance for vertex containment tests in canonical coordinates.
const TOL: f64 = 1e-9;

/// R = T_j(R′) for a cover entry in group j.
#[derive(Clone, Debug)]
pub struct Witness {
    pub region: Polytope,
    pub center: Point,
    pub group: i32,
    /// Index of the source entry in the cover.
    pub source: usize,
    radius: f64,
}

/// E_r^σ ∩ L_r, stored as the cap halfspace on shell K_r.
#[derive(Clone, Debug, Serialize)]
pub struct CollectorPiece {
    pub layer: i32,
    /// E_r^σ = K_r ∩ halfspace.
    pub halfspace: Halfspace,
    /// Width of E_r (before the σ expansion).
    pub width: f64,
}

/// C = ⋃_{r=j}^{t} E_r^σ ∩ L_r, where E_r = K_r ∩ T_j(H′).
#[derive(Clone, Debug, Serialize)]
pub struct CollectorRegion {
    pub group: i32,
    pub normal: Point,
    pub pieces: Vec<CollectorPiece>,
}

impl CollectorRegion {
    /// Membership of a point whose layer index is known.
    pub fn contains_in_layer(&self, p: &Point, layer: Option<i32>) -> bool {
        let Some(r) = layer else { return false };
        if r < self.group {
            return false;
        }
        let piece = &self.pieces[(r - self.group) as usize];
        piece.halfspace.contains(p, TOL)
    }
}

/// Witnesses, collectors and the shells they live in.
#[derive(Clone, Debug)]
pub struct WitnessCollectorSystem {
    pub witnesses: Vec<Witness>,
    pub collectors: Vec<CollectorRegion>,
    pub layers: LayerSystem,
    pub body: CapBody,
    /// Witnesses that are not inside F_j ⊆ L_j.
    pub layer_violations: usize,
}

impl WitnessCollectorSystem {
    /// Layer index of a point (by the gauge of the working polytope).
    pub fn layer_of(&self, p: &Point) -> Option<i32> {
        self.layers.layer_of_gauge(gauge(self.body.polytope(), p))
    }

    /// The selected point of every witness (its center of symmetry).
    pub fn points(&self) -> Vec<Point> {
        self.witnesses.iter().map(|w| w.center).collect()
    }
}

/// Minkowski gauge of a polytope containing the origin in its interior.
pub fn gauge(p: &Polytope, x: &Point) -> f64 {
    p.facets().iter().map(|f| f.normal.dot(x) / f.offset).fold(0.0, f64::max)
}

/// Places every R′ into the layer of its group and builds the collectors.
pub fn assemble(k: &CapBody, cover: &Cover, layers: &LayerSystem, sigma: f64) -> WitnessCollectorSystem {
    let d = k.dim();
    let t = layers.t;
    let mut witnesses = Vec::with_capacity(cover.entries.len());
    let mut collectors = Vec::with_capacity(cover.entries.len());
    let mut layer_violations = 0;
    for (i, e) in cover.entries.iter().enumerate() {
        let j = e.group;
        let sj = layers.scale(j);
        let region = e.region.region.map(&layers.map(j, d));
        let center = e.center * sj;
        let u = e.outer.normal();
        let b = e.outer.offset();
        let h = k.support(&u);
        let level = sj * b;
        // R ⊆ F_j = K_j ∩ {⟨u,x⟩ ≥ s_j b′} and F_j misses the interior of K_{j−1}.
        let inside = region.vertices().iter().all(|v| u.dot(v) >= level - TOL);
        let clear = level >= layers.scale(j - 1) * h - TOL;
        if !(inside && clear) {
            layer_violations += 1;
        }
        let pieces = (j..=t)
            .map(|r| {
                let sr = layers.scale(r);
                let width = sr * h - level;
                let threshold = sr * h - sigma * width;
                CollectorPiece { layer: r, halfspace: Halfspace { normal: -u, offset: -threshold }, width }
            })
            .collect();
        collectors.push(CollectorRegion { group: j, normal: u, pieces });
        let radius = e.radius() * sj;
        witnesses.push(Witness { region, center, group: j, source: i, radius });
    }
    WitnessCollectorSystem { witnesses, collectors, layers: layers.clone(), body: k.clone(), layer_violations }
}

/// Outcome of the witness-collector property checks.
#[derive(Clone, Debug, Default, Serialize)]
pub struct WcReport {
    pub halfspaces: usize,
    /// Halfspaces containing neither a witness nor having H ∩ S in a collector.
    pub failures: usize,
    /// Halfspaces that contained a witness.
    pub by_witness: usize,
    /// Width-ε caps tested for containing a witness.
    pub eps_caps: usize,
    pub eps_cap_failures: usize,
    /// max_C |C ∩ S|.
    pub max_points_per_collector: usize,
    pub mean_points_per_collector: f64,
    /// Witnesses not containing their selected point.
    pub property1_failures: usize,
}

impl WcReport {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.eps_cap_failures == 0 && self.property1_failures == 0
    }
}

/// Largest and mean number of points of S per collector.
pub fn collector_load(sys: &WitnessCollectorSystem, s: &[Point]) -> (usize, f64) {
    let layer: Vec<Option<i32>> = s.par_iter().map(|p| sys.layer_of(p)).collect();
    load_with(sys, s, &layer)
}

fn load_with(sys: &WitnessCollectorSystem, s: &[Point], layer: &[Option<i32>]) -> (usize, f64) {
    let counts: Vec<usize> = sys
        .collectors
        .par_iter()
        .map(|c| (0..s.len()).filter(|&i| c.contains_in_layer(&s[i], layer[i])).count())
        .collect();
    let max = counts.iter().copied().max().unwrap_or(0);
    let mean = if counts.is_empty() { 0.0 } else { counts.iter().sum::<usize>() as f64 / counts.len() as f64 };
    (max, mean)
}

fn witness_in(w: &Witness, u: &Point, level: f64) -> bool {
    if u.dot(&w.center) < level - w.radius - TOL {
        return false;
    }
    w.region.vertices().iter().all(|v| u.dot(v) >= level - TOL)
}

/// Samples halfspaces meeting K (log-uniform widths from ε/100 to the full
/// width) and width-ε caps, and checks properties (1)–(3).
pub fn verify_witness_collector(
    sys: &WitnessCollectorSystem,
    s: &[Point],
    eps: f64,
    n_halfspaces: usize,
    seed: u64,
) -> WcReport {
    let k = &sys.body;
    let d = k.dim();
    let layer: Vec<Option<i32>> = s.par_iter().map(|p| sys.layer_of(p)).collect();
    let mut rng = sampling::rng(seed);
    let mut tests = Vec::with_capacity(n_halfspaces);
    for _ in 0..n_halfspaces {
        let u = sampling::random_unit(&mut rng, d);
        let full = k.width(&u);
        let lo = (eps / 100.0).ln();
        let hi = full.ln();
        let w = (lo + rng.random::<f64>() * (hi - lo)).exp();
        tests.push((u, w));
    }
    let check = |u: &Point, w: f64| -> (bool, bool) {
        let level = k.support(u) - w;
        if sys.witnesses.iter().any(|wt| witness_in(wt, u, level)) {
            return (true, true);
        }
        let inside: Vec<usize> = (0..s.len()).filter(|&i| u.dot(&s[i]) >= level).collect();
        let ok = inside.is_empty()
            || sys.collectors.iter().any(|c| inside.iter().all(|&i| c.contains_in_layer(&s[i], layer[i])));
        (ok, false)
    };
    let results: Vec<(bool, bool)> = tests.par_iter().map(|(u, w)| check(u, *w)).collect();
    let eps_dirs = sampling::sphere_directions(d, n_halfspaces, seed.wrapping_add(1));
    let eps_ok: Vec<bool> = eps_dirs
        .par_iter()
        .map(|u| {
            let level = k.support(u) - eps;
            sys.witnesses.iter().any(|wt| witness_in(wt, u, level))
        })
        .collect();
    let (max_points_per_collector, mean_points_per_collector) = load_with(sys, s, &layer);
    let property1_failures = sys.witnesses.iter().zip(s).filter(|(w, p)| !w.region.contains(p, TOL)).count();
    WcReport {
        halfspaces: tests.len(),
        failures: results.iter().filter(|r| !r.0).count(),
        by_witness: results.iter().filter(|r| r.1).count(),
        eps_caps: eps_dirs.len(),
        eps_cap_failures: eps_ok.iter().filter(|ok| !**ok).count(),
        max_points_per_collector,
        mean_points_per_collector,
        property1_failures,
    }
}
