use std::collections::BTreeMap;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::caps::{dyadic_class, expand_cap, macbeath, make_cap, Cap, CapBody, MacbeathRegion, SHRUNKEN};
use crate::error::{Error, Result};
use crate::geom::{self, Point, Polytope};
use crate::sampling;

/// Type j of a cap: v_j ≤ vol < 2v_j with v_j = 2^j ε^{(d+1)/2}.
pub fn cap_type(vol: f64, eps: f64, d: usize) -> i32 {
    dyadic_class(vol, eps, d)
}

/// a_j = max(j², 1).
pub fn type_scale(j: i32) -> f64 {
    (j as f64 * j as f64).max(1.0)
}

/// w_j = ε / a_j.
pub fn type_width(eps: f64, j: i32) -> f64 {
    eps / type_scale(j)
}

/// A cap with its type, base centroid and shrunken Macbeath region there.
#[derive(Clone, Debug)]
pub struct TypedCap {
    pub cap: Cap,
    pub type_j: i32,
    pub base_centroid: Point,
    pub shrunken_region: MacbeathRegion,
}

impl TypedCap {
    /// width / w_j, where ε is the width the cap was balanced from.
    pub fn balance_ratio(&self, eps: f64) -> f64 {
        self.cap.width() / type_width(eps, self.type_j)
    }

    pub fn is_balanced(&self, eps: f64, b1: f64, b2: f64) -> bool {
        let r = self.balance_ratio(eps);
        r >= b1 && r <= b2
    }
}

fn checked_type(cap: &Cap, eps: f64, d: usize) -> Result<i32> {
    if !(cap.volume() > 0.0) {
        return Err(Error::GeometryInvalid(format!("cap of width {} has no volume", cap.width())));
    }
    Ok(cap_type(cap.volume(), eps, d))
}

/// C = F^{1/a_j} for an ε-width cap F of type j, with its own type.
fn balance(k: &CapBody, f: &Cap) -> Result<(Cap, i32)> {
    let d = k.dim();
    let eps = f.width();
    let j = checked_type(f, eps, d)?;
    let c = expand_cap(f, 1.0 / type_scale(j));
    let kt = checked_type(&c, eps, d)?;
    Ok((c, kt))
}

/// Shrinks an ε-width cap F to the balanced cap F^{1/a_j} and attaches
/// M′ at its base centroid.
pub fn balance_cap(k: &CapBody, f: &Cap) -> Result<TypedCap> {
    let (cap, type_j) = balance(k, f)?;
    let base_centroid = centroid_of(&cap)?;
    let shrunken_region = macbeath(k, &base_centroid, SHRUNKEN)?;
    Ok(TypedCap { cap, type_j, base_centroid, shrunken_region })
}

fn centroid_of(cap: &Cap) -> Result<Point> {
    cap.base_centroid().ok_or_else(|| Error::GeometryInvalid("cap base is degenerate".into()))
}

/// Knobs for the cover.
#[derive(Clone, Debug, Serialize)]
pub struct CoverParams {
    pub beta: f64,
    pub sigma: f64,
    /// Greedy candidate directions.
    pub n_dirs: usize,
    /// Extra directions offered after the first pass.
    pub repair_dirs: usize,
    /// Fresh directions for the property-3 check (0 skips it).
    pub check_dirs: usize,
    pub seed: u64,
    /// Cap types are clamped to [−t, t] for grouping.
    pub t: i32,
}

/// One accepted cap A_i with its derived sets.
#[derive(Clone, Debug)]
pub struct CoverEntry {
    pub direction: Point,
    /// A_i, a balanced cap.
    pub cap: Cap,
    pub type_j: i32,
    /// x_i, the base centroid of A_i^{1/β}.
    pub center: Point,
    /// R′_i = M′(x_i).
    pub region: MacbeathRegion,
    /// C′_i = A_i^β.
    pub outer: Cap,
    /// Layer of the entry: the type of A_i clamped to [−t, t]. C′_i has
    /// width β·width(A_i), so it is balanced for this type with window β[b₁, b₂].
    pub group: i32,
    radius: f64,
}

impl CoverEntry {
    pub fn radius(&self) -> f64 {
        self.radius
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CoverReport {
    pub candidates: usize,
    pub accepted_first_pass: usize,
    pub added_by_repair: usize,
    /// Entries with R_i ⊆ C_i.
    pub prop2_inner_ok: usize,
    /// Entries with C_i ⊆ R_i^σ.
    pub prop2_outer_ok: usize,
    /// Smallest σ′ with C_i ⊆ R_i^{σ′} for all i.
    pub prop2_sigma_needed: f64,
    pub prop3_tested: usize,
    pub prop3_failures: usize,
    pub min_balance_ratio: f64,
    pub max_balance_ratio: f64,
    pub min_outer_ratio: f64,
    pub max_outer_ratio: f64,
    pub types: BTreeMap<i32, usize>,
    pub groups: BTreeMap<i32, usize>,
}

/// The sets 𝒜, ℛ′, 𝒞′ of the cap cover.
#[derive(Clone, Debug)]
pub struct Cover {
    pub eps: f64,
    pub params: CoverParams,
    pub entries: Vec<CoverEntry>,
    pub report: CoverReport,
}

struct Candidate {
    direction: Point,
    cap: Cap,
    type_j: i32,
    center: Point,
    region: MacbeathRegion,
    radius: f64,
}

fn candidate(k: &CapBody, u: &Point, eps: f64, beta: f64) -> Result<Candidate> {
    let f = make_cap(k, u, eps)?;
    let (cap, type_j) = balance(k, &f)?;
    let inner = expand_cap(&cap, 1.0 / beta);
    let center = centroid_of(&inner)?;
    let region = macbeath(k, &center, SHRUNKEN)?;
    let radius = region.radius();
    Ok(Candidate { direction: f.normal(), cap, type_j, center, region, radius })
}

/// Uniform grid over region centers for neighbour queries.
struct Grid {
    cell: f64,
    cells: std::collections::HashMap<Vec<i64>, Vec<usize>>,
}

impl Grid {
    fn new(cell: f64) -> Grid {
        Grid { cell, cells: Default::default() }
    }

    fn key(&self, p: &Point) -> Vec<i64> {
        p.coords().iter().map(|c| (c / self.cell).floor() as i64).collect()
    }

    fn insert(&mut self, p: &Point, i: usize) {
        let k = self.key(p);
        self.cells.entry(k).or_default().push(i);
    }

    /// Indices in cells within `reach` of p.
    fn near(&self, p: &Point, reach: f64) -> Vec<usize> {
        let d = p.dim();
        let lo: Vec<i64> = (0..d).map(|i| ((p[i] - reach) / self.cell).floor() as i64).collect();
        let hi: Vec<i64> = (0..d).map(|i| ((p[i] + reach) / self.cell).floor() as i64).collect();
        let mut out = Vec::new();
        let span: f64 = lo.iter().zip(&hi).map(|(a, b)| (b - a + 1) as f64).product();
        if span > self.cells.len() as f64 {
            for (key, v) in &self.cells {
                if key.iter().zip(lo.iter().zip(&hi)).all(|(k, (a, b))| k >= a && k <= b) {
                    out.extend_from_slice(v);
                }
            }
            out.sort_unstable();
            return out;
        }
        let mut idx = lo.clone();
        loop {
            if let Some(v) = self.cells.get(&idx) {
                out.extend_from_slice(v);
            }
            let mut a = 0;
            loop {
                if a == d {
                    out.sort_unstable();
                    return out;
                }
                idx[a] += 1;
                if idx[a] <= hi[a] {
                    break;
                }
                idx[a] = lo[a];
                a += 1;
            }
        }
    }
}

struct Greedy<'a> {
    entries: Vec<Candidate>,
    grid: Grid,
    max_radius: f64,
    k: &'a CapBody,
}

impl Greedy<'_> {
    fn offer(&mut self, c: Candidate) -> Result<bool> {
        let reach = c.radius + self.max_radius;
        for i in self.grid.near(&c.center, reach) {
            let e = &self.entries[i];
            if e.center.dist(&c.center) > e.radius + c.radius {
                continue;
            }
            if !geom::interiors_disjoint(&c.region.region, &e.region.region)? {
                return Ok(false);
            }
        }
        self.max_radius = self.max_radius.max(c.radius);
        self.grid.insert(&c.center, self.entries.len());
        self.entries.push(c);
        Ok(true)
    }
}

fn build_candidates(k: &CapBody, dirs: &[Point], eps: f64, beta: f64) -> Vec<Result<Candidate>> {
    dirs.par_iter().map(|u| candidate(k, u, eps, beta)).collect()
}

/// Greedy maximal family of balanced caps whose M′ at the base centroids of
/// A^{1/β} are interior-disjoint, followed by a repair pass and the
/// property-2/3 checks.
pub fn build_balanced_cover(k: &CapBody, eps: f64, params: &CoverParams) -> Result<Cover> {
    let d = k.dim();
    let inradius = k.depth(&Point::zeros(d));
    if !(eps > 0.0) || eps >= inradius / 2.0 {
        return Err(Error::EpsilonTooLarge { eps, limit: inradius / 2.0 });
    }
    let beta = params.beta;
    let dirs = sampling::sphere_directions(d, params.n_dirs, params.seed);
    let first = build_candidates(k, &dirs, eps, beta);
    let cell = (eps.sqrt() * 0.5).max(1e-3);
    let mut greedy = Greedy { entries: Vec::new(), grid: Grid::new(cell), max_radius: 0.0, k };
    let mut report = CoverReport { candidates: dirs.len(), ..Default::default() };
    for c in first {
        greedy.offer(c?)?;
    }
    report.accepted_first_pass = greedy.entries.len();
    if params.repair_dirs > 0 {
        let extra = sampling::sphere_directions(d, params.repair_dirs, params.seed.wrapping_add(0x5eed));
        report.candidates += extra.len();
        for c in build_candidates(greedy.k, &extra, eps, beta) {
            greedy.offer(c?)?;
        }
    }
    report.added_by_repair = greedy.entries.len() - report.accepted_first_pass;

    let entries: Vec<CoverEntry> = greedy
        .entries
        .into_par_iter()
        .map(|c| {
            let outer = expand_cap(&c.cap, beta);
            checked_type(&outer, eps, d)?;
            Ok(CoverEntry {
                direction: c.direction,
                cap: c.cap,
                type_j: c.type_j,
                center: c.center,
                region: c.region,
                outer,
                group: c.type_j.clamp(-params.t, params.t),
                radius: c.radius,
            })
        })
        .collect::<Result<_>>()?;

    report.min_balance_ratio = f64::INFINITY;
    report.min_outer_ratio = f64::INFINITY;
    for e in &entries {
        let r = e.cap.width() / type_width(eps, e.type_j);
        report.min_balance_ratio = report.min_balance_ratio.min(r);
        report.max_balance_ratio = report.max_balance_ratio.max(r);
        let ro = e.outer.width() / type_width(eps, e.group);
        report.min_outer_ratio = report.min_outer_ratio.min(ro);
        report.max_outer_ratio = report.max_outer_ratio.max(ro);
        *report.types.entry(e.type_j).or_insert(0) += 1;
        *report.groups.entry(e.group).or_insert(0) += 1;
    }
    let mut cover = Cover { eps, params: params.clone(), entries, report };
    property2(&mut cover)?;
    if params.check_dirs > 0 {
        property3(k, &mut cover)?;
    }
    Ok(cover)
}

/// Smallest s with every vertex of `p` in the homothet of `r` by s about `c`.
pub(crate) fn homothety_needed(r: &Polytope, c: &Point, p: &Polytope) -> f64 {
    p.vertices()
        .iter()
        .map(|v| r.facets().iter().map(|f| f.normal.dot(&(*v - *c)) / f.slack(c)).fold(0.0, f64::max))
        .fold(0.0, f64::max)
}

fn property2(cover: &mut Cover) -> Result<()> {
    let sigma = cover.params.sigma;
    let tol = 1e-9;
    let res: Vec<(bool, f64)> = cover
        .entries
        .par_iter()
        .map(|e| {
            let inner = e.region.region.vertices().iter().all(|v| e.outer.above(v, tol));
            let poly = e.outer.polytope()?;
            // R^σ is M^{σ·λ}(x); the factor is relative to R itself.
            let s = homothety_needed(&e.region.region, &e.center, &poly);
            Ok((inner, s))
        })
        .collect::<Result<_>>()?;
    cover.report.prop2_inner_ok = res.iter().filter(|r| r.0).count();
    cover.report.prop2_outer_ok = res.iter().filter(|r| r.1 <= sigma).count();
    cover.report.prop2_sigma_needed = res.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(())
}

/// For fresh directions u: the balanced cap C along u must satisfy
/// R_i ⊆ C and C_i^{1/σ} ⊆ C ⊆ C_i for some i.
fn property3(k: &CapBody, cover: &mut Cover) -> Result<()> {
    let d = k.dim();
    let p = &cover.params;
    let dirs = sampling::sphere_directions(d, p.check_dirs, p.seed.wrapping_add(0xc4ec));
    let shrunk: Vec<OnceLock<Option<Polytope>>> = (0..cover.entries.len()).map(|_| OnceLock::new()).collect();
    let entries = &cover.entries;
    let sigma = p.sigma;
    let tol = 1e-9;
    let fails: Vec<bool> = dirs
        .par_iter()
        .map(|u| -> Result<bool> {
            let f = make_cap(k, u, cover.eps)?;
            let (c, _) = balance(k, &f)?;
            let cpoly = c.polytope()?;
            for (i, e) in entries.iter().enumerate() {
                if c.normal().dot(&e.center) < c.offset() - e.radius - tol {
                    continue;
                }
                if !e.region.region.vertices().iter().all(|v| c.above(v, tol)) {
                    continue;
                }
                if !cpoly.vertices().iter().all(|v| e.outer.above(v, tol)) {
                    continue;
                }
                let small = shrunk[i].get_or_init(|| expand_cap(&e.outer, 1.0 / sigma).polytope().ok());
                match small {
                    Some(s) if s.vertices().iter().all(|v| c.above(v, tol)) => return Ok(false),
                    _ => {}
                }
            }
            Ok(true)
        })
        .collect::<Result<_>>()?;
    cover.report.prop3_tested = dirs.len();
    cover.report.prop3_failures = fails.iter().filter(|f| **f).count();
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::Body;

    #[test]
    fn types() {
        let eps: f64 = 0.01;
        let base = eps.powf(2.0);
        assert_eq!(cap_type(base, eps, 3), 0);
        assert_eq!(cap_type(8.0 * base, eps, 3), 3);
        assert_eq!(cap_type(0.999 * base, eps, 3), -1);
        assert_eq!(type_width(eps, -3), eps / 9.0);
        assert_eq!(type_width(eps, 0), eps);
    }

    #[test]
    fn ball_cap_is_unchanged() {
        let eps = 0.05;
        let k = CapBody::new(&Body::ball(2, 1.0).unwrap(), eps).unwrap();
        let f = make_cap(&k, &Point::unit(2, 1), eps).unwrap();
        let t = balance_cap(&k, &f).unwrap();
        assert!(t.type_j.abs() <= 1);
        assert!((t.cap.width() - eps).abs() < 1e-12);
    }

    #[test]
    fn cube_caps_shrink() {
        let eps = 0.05;
        let k = CapBody::new(&Body::cube(3).unwrap(), eps).unwrap();
        let facet = balance_cap(&k, &make_cap(&k, &Point::unit(3, 0), eps).unwrap()).unwrap();
        assert!(facet.type_j > 0);
        assert!(facet.cap.width() < eps);
        let diag = Point::from_fn(3, |_| 1.0).normalized().unwrap();
        let corner = balance_cap(&k, &make_cap(&k, &diag, eps).unwrap()).unwrap();
        assert!(corner.type_j < 0);
        assert!(corner.cap.width() < eps);
    }
}
