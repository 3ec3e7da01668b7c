//! Polarity, Mahler volumes and the primal/polar cap correspondence.

mod dual;

pub use dual::{dual_cap_polar, DualCapPolar};

use rayon::prelude::*;
use serde::Serialize;

use crate::caps::{make_cap, minimal_cap, Cap, CapBody};
use crate::error::{Error, Result};
use crate::geom::linalg::complement_basis;
use crate::geom::{self, AffineMap, Halfspace, Point, Polytope};

/// Default for the constant c in δ(x) = ε/c.
pub const DEFAULT_C: f64 = 8.0;

/// A polytope and its polar about `center`. The polar lives in coordinates
/// centered at `center`: K* = {u : ⟨u, v − center⟩ ≤ 1 for all v ∈ K}.
#[derive(Clone, Debug)]
pub struct PolarPair {
    pub primal: Polytope,
    pub polar: Polytope,
    pub center: Point,
}

impl PolarPair {
    /// Vertex distance between (K*)* and K − center.
    pub fn involution_error(&self) -> Result<f64> {
        let back = polar_about_origin(&self.polar)?;
        let shifted: Vec<Point> = self.primal.vertices().iter().map(|v| *v - self.center).collect();
        Ok(vertex_distance(back.vertices(), &shifted))
    }
}

fn polar_about_origin(p: &Polytope) -> Result<Polytope> {
    let o = Point::zeros(p.dim());
    if !(p.min_slack_facet(&o).1 > 1e-12 * p.radius_about_interior()) {
        return Err(Error::CenterNotInterior);
    }
    let hs: Vec<Halfspace> = p.vertices().iter().map(|v| Halfspace { normal: *v, offset: 1.0 }).collect();
    geom::halfspace_intersection(&hs, &o)
}

/// Polar of P with respect to an interior center.
pub fn polar_body(p: &Polytope, center: &Point) -> Result<PolarPair> {
    crate::error::check_dim(p.dim(), center.dim())?;
    let shifted = p.map(&AffineMap::translation_by(-*center));
    let polar = polar_about_origin(&shifted)?;
    Ok(PolarPair { primal: p.clone(), polar, center: *center })
}

/// The hyperplane v* = {x : ⟨v, x⟩ = 1}, returned as the halfspace on the
/// origin's side.
pub fn polar_point(v: &Point) -> Result<Halfspace> {
    let n = v.norm();
    if !(n > 0.0) {
        return Err(Error::OriginPolar);
    }
    Ok(Halfspace { normal: *v * (1.0 / n), offset: 1.0 / n })
}

/// Inverse of [`polar_point`]: the point whose polar is the boundary of h.
pub fn polar_hyperplane(h: &Halfspace) -> Result<Point> {
    let n = h.normal.norm();
    if !(n > 0.0) || h.offset == 0.0 {
        return Err(Error::OriginPolar);
    }
    Ok(h.normal * (1.0 / h.offset))
}

/// vol(P)·vol(P*) with the polar taken about the centroid.
pub fn mahler(p: &Polytope) -> Result<f64> {
    let pair = polar_body(p, &p.centroid())?;
    Ok(p.volume() * pair.polar.volume())
}

/// Largest distance from a point of either set to the other set; infinite
/// when the counts differ.
pub fn vertex_distance(a: &[Point], b: &[Point]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let one = |x: &[Point], y: &[Point]| {
        x.iter().map(|p| y.iter().map(|q| p.dist(q)).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
    };
    one(a, b).max(one(b, a))
}

/// Polar of a canonical working polytope about the origin.
pub fn polar_capbody(k: &CapBody) -> Result<CapBody> {
    Ok(CapBody::from_polytope(polar_about_origin(k.polytope())?))
}

/// π(C): the minimum-volume cap of K* containing the point at depth ε/c on
/// the ray through C's base normal.
pub fn pi_map(polar: &CapBody, cap: &Cap, c: f64) -> Result<Cap> {
    if !(c > 0.0) {
        return Err(Error::Config(format!("constant c must be positive, got {c}")));
    }
    let x = polar.point_at_depth(&cap.normal(), cap.width() / c)?;
    minimal_cap(polar, &x)
}

/// One direction of a cap-product sweep.
#[derive(Clone, Debug, Serialize)]
pub struct CapProduct {
    pub direction: Point,
    pub cap_volume: f64,
    pub polar_cap_volume: f64,
    /// vol(C)·vol(π(C))/ε^{d+1}.
    pub normalized_product: f64,
}

/// vol(C)·vol(π(C)) for the width-ε cap with normal u.
pub fn mahler_cap_product(k: &CapBody, polar: &CapBody, u: &Point, eps: f64, c: f64) -> Result<CapProduct> {
    let cap = make_cap(k, u, eps)?;
    let pc = pi_map(polar, &cap, c)?;
    let d = k.dim() as i32;
    let product = cap.volume() * pc.volume();
    Ok(CapProduct {
        direction: cap.normal(),
        cap_volume: cap.volume(),
        polar_cap_volume: pc.volume(),
        normalized_product: product / eps.powi(d + 1),
    })
}

/// Cap products over a list of directions, in input order.
pub fn cap_product_sweep(k: &CapBody, polar: &CapBody, dirs: &[Point], eps: f64, c: f64) -> Result<Vec<CapProduct>> {
    dirs.par_iter().map(|u| mahler_cap_product(k, polar, u, eps, c)).collect()
}

/// Fitted constants (c₁, c₂) with c₁εX* ⊆ base(C) − h* ⊆ c₂εX*, where X is
/// the vertical projection of base(π(C)) and h* the polar of the hyperplane
/// through z = (base plane of C)* parallel to base(π(C)).
pub fn base_sandwich(k: &CapBody, polar: &CapBody, u: &Point, eps: f64, c: f64) -> Result<(f64, f64)> {
    let cap = make_cap(k, u, eps)?;
    let pc = pi_map(polar, &cap, c)?;
    let u = cap.normal();
    let b = cap.offset();
    if !(b > 0.0) {
        return Err(Error::GeometryInvalid("cap base passes on the far side of the origin".into()));
    }
    let z = u * (1.0 / b);
    let n = pc.normal();
    let h_star = n * (1.0 / n.dot(&z));
    let basis = complement_basis(&u);
    let flat = |p: &Point| Point::from_fn(basis.len(), |i| basis[i].dot(p));
    let base = cap_base_world(&cap)?;
    let a: Vec<Point> = base.iter().map(|p| flat(&(*p - h_star))).collect();
    let a = Polytope::hull(&a)?;
    let x_proj: Vec<Point> = cap_base_world(&pc)?.iter().map(flat).collect();
    let x_poly = Polytope::hull(&x_proj)?;
    let x_star = polar_about_origin(&x_poly)?;
    let o = Point::zeros(basis.len());
    if !(a.min_slack_facet(&o).1 > 0.0) {
        return Err(Error::GeometryInvalid("h* is not inside base(C)".into()));
    }
    let gauge = |p: &Point| x_star.facets().iter().map(|f| f.normal.dot(p) / f.offset).fold(0.0, f64::max);
    let c2 = a.vertices().iter().map(gauge).fold(0.0, f64::max) / eps;
    let c1 = a.facets().iter().map(|f| f.offset / x_star.support(&f.normal).0).fold(f64::INFINITY, f64::min) / eps;
    Ok((c1, c2))
}

/// Base vertices of a cap in world coordinates.
fn cap_base_world(cap: &Cap) -> Result<Vec<Point>> {
    let base = cap.base().ok_or_else(|| Error::GeometryInvalid("cap has no base".into()))?;
    Ok(base.vertices().iter().map(|q| cap.frame().to_world(&q.extend(cap.offset()))).collect())
}
