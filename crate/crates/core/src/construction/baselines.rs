use serde::Serialize;

use crate::bodies::{Body, ConvexBodyOracle};
use crate::error::{Error, Result};
use crate::geom::{self, Halfspace, Point, Polytope};
use crate::metrics::{hausdorff_inner, hausdorff_outer, HAUSDORFF_DIRS};
use crate::sampling;

/// Upper limit on the number of sphere points tried by the baselines.
const MAX_POINTS: usize = 1 << 16;

/// A baseline polytope with the point count that produced it.
#[derive(Clone, Debug, Serialize)]
pub struct Baseline {
    pub points: usize,
    /// Measured Hausdorff distance to K.
    pub error: f64,
    #[serde(skip)]
    pub polytope: Polytope,
}

/// Nearest points of K to quasi-uniform points on a sphere of radius
/// 2·R(K), with the outward normals there.
fn projections(k: &Body, n: usize) -> Vec<(Point, Point)> {
    let d = k.dim();
    let r = 2.0 * k.circumradius();
    sampling::sphere_directions(d, n, 0)
        .into_iter()
        .map(|u| {
            let y = u * r;
            match k.nearest_point(&y) {
                Some(p) => ((y - p).normalized().unwrap_or(u), p),
                None => (u, k.support(&u).1),
            }
        })
        .collect()
}

fn interior_point(k: &Body) -> Point {
    let d = k.dim();
    let pts: Vec<Point> = (0..d)
        .flat_map(|i| {
            let e = Point::unit(d, i);
            [k.support(&e).1, k.support(&-e).1]
        })
        .collect();
    Point::centroid(&pts)
}

fn dudley_at(k: &Body, n: usize) -> Result<Polytope> {
    let c = interior_point(k);
    let hs: Vec<Halfspace> =
        projections(k, n).into_iter().map(|(normal, p)| Halfspace { normal, offset: normal.dot(&p) }).collect();
    geom::halfspace_intersection(&hs, &c)
}

fn bi_at(k: &Body, n: usize) -> Result<Polytope> {
    let pts: Vec<Point> = projections(k, n).into_iter().map(|(_, p)| p).collect();
    Polytope::hull(&pts)
}

/// Smallest n (up to a 3% bisection gap) whose construction has error ≤ ε.
fn adaptive(
    k: &Body,
    eps: f64,
    build: impl Fn(&Body, usize) -> Result<Polytope>,
    error: impl Fn(&Polytope) -> Result<f64>,
) -> Result<Baseline> {
    let d = k.dim();
    let mut n = ((1.0 / eps).powf((d - 1) as f64 / 2.0).ceil() as usize).max(d + 1);
    let attempt = |n: usize| -> Result<Option<(Polytope, f64)>> {
        match build(k, n) {
            Ok(p) => {
                let e = error(&p)?;
                Ok((e <= eps).then_some((p, e)))
            }
            Err(Error::Unbounded) | Err(Error::DegenerateInput(_)) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let mut lo = d;
    let mut best = loop {
        if let Some(found) = attempt(n)? {
            break (n, found);
        }
        lo = n;
        n *= 2;
        if n > MAX_POINTS {
            return Err(Error::NotConverged(format!("baseline needs more than {MAX_POINTS} points")));
        }
    };
    while best.0 - lo > 1 && (best.0 - lo) as f64 > 0.03 * best.0 as f64 {
        let mid = (lo + best.0) / 2;
        match attempt(mid)? {
            Some(found) => best = (mid, found),
            None => lo = mid,
        }
    }
    let (points, (polytope, error)) = best;
    Ok(Baseline { points, error, polytope })
}

/// Outer approximation: tangent halfspaces at the projections of sphere
/// points onto K, with n grown until the Hausdorff error is ≤ ε.
pub fn dudley(k: &Body, eps: f64) -> Result<Baseline> {
    adaptive(k, eps, dudley_at, |p| Ok(hausdorff_outer(p, k)))
}

/// Inner approximation: hull of the projections of sphere points onto K.
pub fn bronshteyn_ivanov(k: &Body, eps: f64) -> Result<Baseline> {
    adaptive(k, eps, bi_at, |p| hausdorff_inner(p, k, HAUSDORFF_DIRS, true))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_baselines() {
        let k = Body::ball(2, 1.0).unwrap();
        let eps = 0.05;
        let outer = dudley(&k, eps).unwrap();
        let inner = bronshteyn_ivanov(&k, eps).unwrap();
        assert!(outer.error <= eps && inner.error <= eps);
        let facets = outer.polytope.facets().len() as f64;
        let verts = inner.polytope.vertices().len() as f64;
        assert!(facets / verts <= 4.0 && verts / facets <= 4.0, "{facets} {verts}");
        // A regular n-gon inscribed in the disk has error 1 − cos(π/n).
        let n = verts;
        assert!(1.0 - (std::f64::consts::PI / (n - 1.0)).cos() > eps * 0.9);
    }
}
