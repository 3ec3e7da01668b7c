use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::macbeath::{macbeath, MacbeathRegion};
use super::CapBody;
use crate::bodies::{Body, ConvexBodyOracle};
use crate::error::{Error, Result};
use crate::geom::{self, Point, Polytope};
use crate::sampling;

/// Scale of the packed regions.
const PACK_SCALE: f64 = 1.0 / 20.0;
/// Expansion applied to each packed region for the covering statement.
const EXPANSION: f64 = 4.0;
/// Fresh rays used for the coverage statistic.
const COVERAGE_RAYS: usize = 10_000;

/// Dyadic class j with 2^j ε^{(d+1)/2} ≤ vol < 2^{j+1} ε^{(d+1)/2}.
pub fn dyadic_class(vol: f64, eps: f64, d: usize) -> i32 {
    let r = vol / eps.powf((d + 1) as f64 / 2.0);
    let mut j = r.log2().floor() as i32;
    if 2f64.powi(j + 1) <= r {
        j += 1;
    }
    if 2f64.powi(j) > r {
        j -= 1;
    }
    j
}

/// One accepted region of the packing.
#[derive(Clone, Debug)]
pub struct PackEntry {
    pub direction: Point,
    pub region: MacbeathRegion,
    /// The region scaled by 4 about its center (M^{1/5}).
    pub expanded: Polytope,
    /// Dyadic class of the scale-1 Macbeath volume.
    pub class: i32,
}

/// Per-direction record, accepted or not.
#[derive(Clone, Debug, Serialize)]
pub struct Candidate {
    pub direction: Point,
    pub center: Point,
    pub depth: f64,
    /// Volume of M(x) at scale 1.
    pub volume: f64,
    pub class: i32,
    pub accepted: bool,
}

/// Greedy packing of disjoint M^{1/20}(x) with δ(x) = ε.
#[derive(Clone, Debug, Serialize)]
pub struct Packing {
    pub epsilon: f64,
    pub seed: u64,
    pub n_dirs: usize,
    /// Fraction of fresh origin rays meeting some expanded region.
    pub coverage: f64,
    pub histogram: BTreeMap<i32, usize>,
    pub candidates: Vec<Candidate>,
    #[serde(skip)]
    pub entries: Vec<PackEntry>,
}

/// Whether the ray {t u : t ≥ 0} meets the polytope.
pub(crate) fn ray_hits(p: &Polytope, u: &Point) -> bool {
    let (mut lo, mut hi) = (0.0f64, f64::INFINITY);
    for h in p.facets() {
        let a = h.normal.dot(u);
        if a > 0.0 {
            hi = hi.min(h.offset / a);
        } else if a < 0.0 {
            lo = lo.max(h.offset / a);
        } else if h.offset < 0.0 {
            return false;
        }
        if lo > hi {
            return false;
        }
    }
    true
}

fn regions_apart(a: &MacbeathRegion, ra: f64, b: &MacbeathRegion, rb: f64) -> bool {
    a.center.dist(&b.center) > ra + rb
}

/// Greedy maximal-style packing along seeded quasi-uniform origin rays.
pub fn boundary_packing(k: &Body, eps: f64, seed: u64, n_dirs: usize) -> Result<Packing> {
    let d = k.dim();
    let inradius = k.delta(&Point::zeros(d))?;
    if !(eps > 0.0) || eps >= inradius / 4.0 {
        return Err(Error::EpsilonTooLarge { eps, limit: inradius / 4.0 });
    }
    let shape = CapBody::new(k, eps)?;
    let dirs = sampling::sphere_directions(d, n_dirs, seed);
    let built: Vec<Result<(Point, f64, MacbeathRegion)>> = dirs
        .par_iter()
        .map(|u| {
            let x = k.point_at_depth(u, eps)?;
            let depth = k.delta(&x)?;
            let m = macbeath(&shape, &x, PACK_SCALE)?;
            Ok((x, depth, m))
        })
        .collect();
    let mut entries: Vec<PackEntry> = Vec::new();
    let mut radii: Vec<f64> = Vec::new();
    let mut candidates = Vec::with_capacity(n_dirs);
    for (u, b) in dirs.iter().zip(built) {
        let (x, depth, m) = b?;
        let full = m.volume * 20f64.powi(d as i32);
        let class = dyadic_class(full, eps, d);
        let r = m.radius();
        let mut free = true;
        for (e, &re) in entries.iter().zip(&radii) {
            if regions_apart(&m, r, &e.region, re) {
                continue;
            }
            if !geom::interiors_disjoint(&m.region, &e.region.region)? {
                free = false;
                break;
            }
        }
        candidates.push(Candidate { direction: *u, center: x, depth, volume: full, class, accepted: free });
        if free {
            let expanded = m.region.scale_about(&x, EXPANSION);
            radii.push(r);
            entries.push(PackEntry { direction: *u, region: m, expanded, class });
        }
    }
    let coverage = coverage(&entries, &radii, d, seed);
    let mut pack = Packing { epsilon: eps, seed, n_dirs, coverage, histogram: BTreeMap::new(), candidates, entries };
    pack.histogram = volume_histogram(&pack);
    Ok(pack)
}

fn coverage(entries: &[PackEntry], radii: &[f64], d: usize, seed: u64) -> f64 {
    if entries.is_empty() {
        return 0.0;
    }
    let mut rng = sampling::rng(seed ^ 0xc0ffee);
    let rays: Vec<Point> = (0..COVERAGE_RAYS).map(|_| sampling::random_unit(&mut rng, d)).collect();
    let hit = rays
        .par_iter()
        .filter(|u| {
            entries.iter().zip(radii).any(|(e, r)| {
                let c = e.region.center;
                let t = c.dot(u);
                let gap = if t > 0.0 { (c - **u * t).norm() } else { c.norm() };
                gap <= EXPANSION * r && ray_hits(&e.expanded, u)
            })
        })
        .count();
    hit as f64 / COVERAGE_RAYS as f64
}

/// Counts of accepted entries per dyadic volume class.
pub fn volume_histogram(pack: &Packing) -> BTreeMap<i32, usize> {
    let mut h = BTreeMap::new();
    for e in &pack.entries {
        *h.entry(e.class).or_insert(0) += 1;
    }
    h
}
