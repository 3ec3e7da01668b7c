//! LP-based separation between polytopes.

use microlp::{ComparisonOp, OptimizationDirection, Problem};

use super::point::Point;
use super::polytope::{Halfspace, Polytope};
use crate::error::{Error, Result};

/// Result of a disjointness query.
#[derive(Clone, Debug)]
pub struct Separation {
    pub disjoint: bool,
    /// When disjoint: a halfspace containing the first polytope whose
    /// complement's closure contains the second.
    pub halfspace: Option<Halfspace>,
}

/// Relative tolerance on the inscribed-slack LP separating "touching" from
/// "overlapping" and "apart".
pub const TOUCH_TOL: f64 = 1e-9;

/// Largest t such that some x has ⟨u,x⟩ + t ≤ b for every facet of both
/// polytopes, in units of `scale` about `center`. Positive: interiors meet;
/// zero: touching; negative: separated.
fn inscribed_slack(facets: &[Halfspace], center: &Point, scale: f64) -> Result<f64> {
    // Any common point lies within 2·scale of the center, so the box only
    // moves the optimum when it is negative anyway.
    solve_slack(facets, center, scale, f64::INFINITY).or_else(|_| solve_slack(facets, center, scale, 4.0))
}

fn solve_slack(facets: &[Halfspace], center: &Point, scale: f64, bound: f64) -> Result<f64> {
    let d = facets[0].normal.dim();
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let xs: Vec<_> = (0..d).map(|_| lp.add_var(0.0, (-bound, bound))).collect();
    let t = lp.add_var(1.0, (f64::NEG_INFINITY, 1e6));
    for h in facets {
        let mut expr: Vec<(microlp::Variable, f64)> = (0..d).map(|i| (xs[i], h.normal[i])).collect();
        expr.push((t, 1.0));
        lp.add_constraint(expr, ComparisonOp::Le, h.slack(center) / scale);
    }
    match lp.solve() {
        Ok(out) => out.solution().map(|s| s.objective()).ok_or_else(|| Error::Lp("interrupted".into())),
        Err(e) => Err(Error::Lp(e.to_string())),
    }
}

fn combined_slack(p: &Polytope, q: &Polytope) -> Result<f64> {
    let center = p.interior_point();
    let scale = p.radius_about_interior().max(q.radius_about_interior()).max(1e-300);
    let mut all: Vec<Halfspace> = p.facets().to_vec();
    all.extend_from_slice(q.facets());
    inscribed_slack(&all, &center, scale)
}

fn bboxes_apart(p: &Polytope, q: &Polytope, margin: f64) -> bool {
    let (plo, phi) = p.bbox();
    let (qlo, qhi) = q.bbox();
    (0..p.dim()).any(|i| phi[i] < qlo[i] - margin || qhi[i] < plo[i] - margin)
}

/// A facet of one polytope with every vertex of the other strictly beyond it.
fn facet_separates(p: &Polytope, q: &Polytope, margin: f64) -> Option<Halfspace> {
    p.facets().iter().find(|h| q.vertices().iter().all(|v| h.slack(v) < -margin)).copied()
}

fn closed_disjoint(p: &Polytope, q: &Polytope) -> Result<(bool, Option<Halfspace>)> {
    if let Some(h) = facet_separates(p, q, 0.0) {
        return Ok((true, Some(h)));
    }
    if let Some(h) = facet_separates(q, p, 0.0) {
        return Ok((true, Some(Halfspace { normal: -h.normal, offset: -h.offset })));
    }
    Ok((combined_slack(p, q)? < -TOUCH_TOL, None))
}

/// Closed-set disjointness with a separating halfspace witness.
pub fn disjoint(p: &Polytope, q: &Polytope) -> Result<Separation> {
    crate::error::check_dim(p.dim(), q.dim())?;
    let (disjoint, h) = closed_disjoint(p, q)?;
    let halfspace = match (disjoint, h) {
        (false, _) => None,
        (true, Some(h)) => Some(h),
        (true, None) => Some(separating_halfspace(p, q)?),
    };
    Ok(Separation { disjoint, halfspace })
}

/// Maximum-margin separator between vertex sets (normal box-normalized).
fn separating_halfspace(p: &Polytope, q: &Polytope) -> Result<Halfspace> {
    let d = p.dim();
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let a: Vec<_> = (0..d).map(|_| lp.add_var(0.0, (-1.0, 1.0))).collect();
    let beta = lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY));
    let m = lp.add_var(1.0, (f64::NEG_INFINITY, 1e3));
    for v in p.vertices() {
        let mut e: Vec<(microlp::Variable, f64)> = (0..d).map(|i| (a[i], v[i])).collect();
        e.push((beta, -1.0));
        e.push((m, 1.0));
        lp.add_constraint(e, ComparisonOp::Le, 0.0);
    }
    for w in q.vertices() {
        let mut e: Vec<(microlp::Variable, f64)> = (0..d).map(|i| (a[i], w[i])).collect();
        e.push((beta, -1.0));
        e.push((m, -1.0));
        lp.add_constraint(e, ComparisonOp::Ge, 0.0);
    }
    let out = lp.solve().map_err(|e| Error::Lp(e.to_string()))?;
    let s = out.solution().ok_or_else(|| Error::Lp("interrupted".into()))?;
    let normal = Point::from_fn(d, |i| s.var_value(a[i]));
    // Put the hyperplane midway inside the margin.
    Halfspace::new(normal, s.var_value(beta))
}

/// Interior-disjointness: touching polytopes (inscribed slack within
/// [`TOUCH_TOL`] of zero) count as disjoint.
pub fn interiors_disjoint(p: &Polytope, q: &Polytope) -> Result<bool> {
    crate::error::check_dim(p.dim(), q.dim())?;
    if bboxes_apart(p, q, 0.0) {
        return Ok(true);
    }
    let scale = p.radius_about_interior().max(q.radius_about_interior());
    if facet_separates(p, q, -TOUCH_TOL * scale).is_some() || facet_separates(q, p, -TOUCH_TOL * scale).is_some() {
        return Ok(true);
    }
    Ok(combined_slack(p, q)? <= TOUCH_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(cx: f64, cy: f64, h: f64) -> Polytope {
        let pts: Vec<Point> = [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)]
            .iter()
            .map(|&(x, y)| Point::new(&[cx + h * x, cy + h * y]))
            .collect();
        Polytope::hull(&pts).unwrap()
    }

    #[test]
    fn separated_touching_overlapping() {
        let a = square(0.0, 0.0, 0.5);
        let b = square(3.0, 0.0, 0.5);
        let s = disjoint(&a, &b).unwrap();
        assert!(s.disjoint);
        let h = s.halfspace.unwrap();
        assert!(a.vertices().iter().all(|v| h.slack(v) >= -1e-9));
        assert!(b.vertices().iter().all(|v| h.slack(v) <= 1e-9));
        let touching = square(1.0, 0.0, 0.5);
        assert!(!disjoint(&a, &touching).unwrap().disjoint);
        assert!(interiors_disjoint(&a, &touching).unwrap());
        assert!(!disjoint(&a, &a).unwrap().disjoint);
        assert!(!interiors_disjoint(&a, &square(0.9, 0.2, 0.5)).unwrap());
    }

    #[test]
    fn corner_touching_diamond() {
        // Rotated squares meeting at a single point; no facet separates.
        let a = Polytope::hull(&[
            Point::new(&[0.0, 0.0]),
            Point::new(&[1.0, 1.0]),
            Point::new(&[2.0, 0.0]),
            Point::new(&[1.0, -1.0]),
        ])
        .unwrap();
        let b = a.map(&crate::geom::AffineMap::translation_by(Point::new(&[2.0, 0.0])));
        assert!(!disjoint(&a, &b).unwrap().disjoint);
        assert!(interiors_disjoint(&a, &b).unwrap());
        let c = a.map(&crate::geom::AffineMap::translation_by(Point::new(&[2.1, 0.0])));
        assert!(disjoint(&a, &c).unwrap().disjoint);
    }
}
