//! Geometric kernel: points, hulls, halfspace intersection, face lattices,
//! volumes, affine maps and LP separation in dimension up to 5.

pub mod affine;
pub mod hull;
pub mod lattice;
pub mod linalg;
pub mod lp;
pub mod nearest;
pub mod point;
pub mod polytope;
pub mod predicates;
pub mod tree;

pub use affine::AffineMap;
pub use lattice::{ComplexityProfile, FaceLattice};
pub use lp::{interiors_disjoint, Separation};
pub use nearest::nearest_point;
pub use point::{Point, MAX_DIM};
pub use polytope::{Halfspace, Polytope};

use crate::error::{Error, Result};

/// Rejects ambient dimensions outside 2..=5.
pub fn check_ambient_dim(d: usize) -> Result<()> {
    if (2..=MAX_DIM).contains(&d) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(d))
    }
}

/// Convex hull of at least d+1 affinely spanning points.
pub fn convex_hull(points: &[Point]) -> Result<Polytope> {
    Polytope::hull(points)
}

/// Intersection of halfspaces, computed through polar duality about `interior`.
pub fn halfspace_intersection(halfspaces: &[Halfspace], interior: &Point) -> Result<Polytope> {
    let d = interior.dim();
    let mut dual = Vec::with_capacity(halfspaces.len());
    for h in halfspaces {
        crate::error::check_dim(d, h.normal.dim())?;
        let b = h.slack(interior);
        if !(b > 0.0) {
            return Err(Error::GeometryInvalid(format!("interior point violates a constraint (slack {b:e})")));
        }
        dual.push(h.normal * (1.0 / b));
    }
    let dual_hull = match Polytope::hull(&dual) {
        Ok(p) => p,
        Err(Error::DegenerateInput(_)) => return Err(Error::Unbounded),
        Err(e) => return Err(e),
    };
    let scale = dual_hull.radius_about_interior().max(1e-300);
    let mut primal = Vec::with_capacity(dual_hull.facets().len());
    for f in dual_hull.facets() {
        if f.offset <= 1e-12 * scale {
            return Err(Error::Unbounded);
        }
        primal.push(*interior + f.normal * (1.0 / f.offset));
    }
    Polytope::hull(&primal)
}

/// Face counts of all proper faces.
pub fn face_lattice(p: &Polytope) -> ComplexityProfile {
    p.lattice().profile()
}

pub fn volume(p: &Polytope) -> f64 {
    p.volume()
}

pub fn centroid(p: &Polytope) -> Point {
    p.centroid()
}

/// Closed-set disjointness; touching polytopes are not disjoint.
pub fn disjoint(p: &Polytope, q: &Polytope) -> Result<Separation> {
    lp::disjoint(p, q)
}

pub fn apply_map(t: &AffineMap, p: &Polytope) -> Polytope {
    p.map(t)
}

/// Axis-aligned box [−h_1, h_1] × … × [−h_d, h_d] as a polytope.
pub fn box_polytope(half_widths: &[f64]) -> Result<Polytope> {
    let d = half_widths.len();
    let pts: Vec<Point> = (0..1usize << d)
        .map(|m| Point::from_fn(d, |i| if m >> i & 1 == 1 { half_widths[i] } else { -half_widths[i] }))
        .collect();
    Polytope::hull(&pts)
}

/// Standard simplex conv(0, e_1, …, e_d).
pub fn standard_simplex(d: usize) -> Polytope {
    let mut pts = vec![Point::zeros(d)];
    pts.extend((0..d).map(|i| Point::unit(d, i)));
    Polytope::hull(&pts).expect("simplex is full-dimensional")
}
