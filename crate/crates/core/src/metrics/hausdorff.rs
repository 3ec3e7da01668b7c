use rayon::prelude::*;

use crate::bodies::{optimize_support, Body, ConvexBodyOracle};
use crate::error::{Error, Result};
use crate::geom::linalg::complement_basis;
use crate::geom::{Point, Polytope};
use crate::sampling;

/// Default direction count for Hausdorff estimates.
pub const HAUSDORFF_DIRS: usize = 10_000;
/// Number of worst directions polished by local search.
const REFINE_STARTS: usize = 32;
/// Vertex membership tolerance for the nesting check.
pub const NESTING_TOL: f64 = 1e-9;

/// Fails with `NotNested` when a vertex of P is outside K.
pub fn check_nested(p: &Polytope, k: &Body) -> Result<()> {
    for (index, v) in p.vertices().iter().enumerate() {
        let excess = k.violation(v);
        if excess > NESTING_TOL {
            return Err(Error::NotNested { index, excess });
        }
    }
    Ok(())
}

/// max_u h_K(u) − h_P(u) over sampled unit directions, optionally polished
/// by a pattern search around the worst directions. For P ⊆ K this is the
/// Hausdorff distance restricted to the sampled supremum.
pub fn hausdorff_inner(p: &Polytope, k: &Body, n_dirs: usize, refine: bool) -> Result<f64> {
    crate::error::check_dim(k.dim(), p.dim())?;
    check_nested(p, k)?;
    let deficit = |u: &Point| k.support(u).0 - p.support(u).0;
    Ok(directional_max(p.dim(), n_dirs, refine, &deficit))
}

/// Largest distance from a vertex of P to K (the Hausdorff distance when
/// P ⊇ K).
pub fn hausdorff_outer(p: &Polytope, k: &Body) -> f64 {
    p.vertices()
        .par_iter()
        .map(|v| match k.nearest_point(v) {
            Some(q) => q.dist(v),
            None => (-optimize_support(k, v, false).0).max(0.0),
        })
        .collect::<Vec<f64>>()
        .into_iter()
        .fold(0.0, f64::max)
}

pub(crate) fn directional_max(d: usize, n_dirs: usize, refine: bool, f: &(dyn Fn(&Point) -> f64 + Sync)) -> f64 {
    let dirs = sampling::sphere_directions(d, n_dirs.max(1), 0);
    let vals: Vec<f64> = dirs.par_iter().map(f).collect();
    let mut best = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !refine {
        return best;
    }
    let mut order: Vec<usize> = (0..dirs.len()).collect();
    order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]).then(a.cmp(&b)));
    let spacing = (4.0 * std::f64::consts::PI / dirs.len() as f64).powf(1.0 / (d - 1) as f64);
    let polished: Vec<f64> = order
        .iter()
        .take(REFINE_STARTS)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&&i| pattern_search(dirs[i], vals[i], spacing, f))
        .collect();
    for v in polished {
        best = best.max(v);
    }
    best
}

/// Coordinate pattern search on the sphere, maximizing f.
fn pattern_search(mut u: Point, mut val: f64, mut step: f64, f: &(dyn Fn(&Point) -> f64 + Sync)) -> f64 {
    while step > 1e-9 {
        let mut moved = false;
        for b in complement_basis(&u) {
            for s in [step, -step] {
                let cand = (u + b * s).normalized().unwrap_or(u);
                let v = f(&cand);
                if v > val {
                    u = cand;
                    val = v;
                    moved = true;
                }
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    val
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inscribed_square() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let sq = Polytope::hull(&[[s, s], [-s, s], [s, -s], [-s, -s]].map(|c| Point::new(&c))).unwrap();
        let disk = Body::ball(2, 1.0).unwrap();
        let h = hausdorff_inner(&sq, &disk, 1000, true).unwrap();
        assert!((h - (1.0 - s)).abs() < 1e-4, "{h}");
    }

    #[test]
    fn self_distance_and_nesting() {
        let Body::Polytope(p) = Body::random_polytope(3, 20, 1).unwrap() else { unreachable!() };
        let body = Body::Polytope(p.clone());
        assert!(hausdorff_inner(&p, &body, 2000, true).unwrap().abs() < 1e-12);
        let big = p.scale_about(&Point::zeros(3), 1.1);
        assert!(matches!(hausdorff_inner(&big, &body, 100, false), Err(Error::NotNested { .. })));
    }

    #[test]
    fn outer_square() {
        let sq = crate::geom::box_polytope(&[1.0, 1.0]).unwrap();
        let disk = Body::ball(2, 1.0).unwrap();
        assert!((hausdorff_outer(&sq, &disk) - (2f64.sqrt() - 1.0)).abs() < 1e-12);
    }
}
