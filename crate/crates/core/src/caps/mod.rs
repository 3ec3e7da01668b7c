//! Caps, Macbeath regions, minimal caps and boundary packings.
//!
//! Everything here runs on a polytope: polytopal bodies are used as they
//! are, analytic bodies through a fine inscribed proxy (see [`CapBody`]).

mod cap;
mod macbeath;
mod minimal;
mod packing;

pub use cap::{cap_through, expand_cap, make_cap, Cap};
pub use macbeath::{macbeath, MacbeathRegion, SHRUNKEN};
pub use minimal::minimal_cap;
pub use packing::{boundary_packing, dyadic_class, volume_histogram, Candidate, PackEntry, Packing};

use std::sync::Arc;

use crate::bodies::{Body, ConvexBodyOracle};
use crate::error::Result;
use crate::geom::{self, Point, Polytope};
use crate::sampling;

/// Hard ceiling on proxy size, then per-dimension budgets that keep the hull
/// tractable in d = 4, 5.
const PROXY_CAP: usize = 200_000;

fn proxy_budget(d: usize) -> usize {
    match d {
        0..=3 => PROXY_CAP,
        4 => 20_000,
        _ => 4_000,
    }
}

/// Number of support points used for an analytic body at resolution `eps`.
pub fn proxy_size(body: &Body, eps: f64) -> usize {
    let d = body.dim();
    let k = (d - 1) as f64;
    let default = 16.0 * (10.0 / eps).powf(k / 2.0);
    // Curvature modulus: spacing θ with R θ²/2 ≤ eps/20, R the largest
    // radius of curvature.
    let modulus = match body {
        Body::Ball { radius, .. } => Some(*radius),
        Body::Ellipsoid(e) => {
            let s = e.semi_axes();
            Some(s[0] * s[0] / s[d - 1])
        }
        _ => None,
    }
    .map(|r| {
        let theta = (eps / (10.0 * r)).sqrt();
        sphere_area(d) / theta.powf(k)
    })
    .unwrap_or(0.0);
    (default.max(modulus).ceil() as usize).clamp(d + 1, proxy_budget(d))
}

fn sphere_area(d: usize) -> f64 {
    d as f64 * crate::bodies::unit_ball_volume(d)
}

#[derive(Debug)]
struct Inner {
    body: Body,
    poly: Polytope,
    exact: bool,
    error: f64,
}

/// A body paired with the polytope on which cap and Macbeath computations
/// run. Cheap to clone.
#[derive(Clone, Debug)]
pub struct CapBody(Arc<Inner>);

impl CapBody {
    /// Polytopes and boxes are used exactly; other bodies are replaced by the
    /// hull of support points in quasi-uniform directions, fine enough for
    /// caps of width `resolution`.
    pub fn new(body: &Body, resolution: f64) -> Result<CapBody> {
        let d = body.dim();
        geom::check_ambient_dim(d)?;
        let exact = match body {
            Body::Polytope(p) => Some(p.clone()),
            Body::Box { half_widths } => Some(geom::box_polytope(half_widths.coords())?),
            _ => None,
        };
        if let Some(poly) = exact {
            return Ok(CapBody(Arc::new(Inner { body: body.clone(), poly, exact: true, error: 0.0 })));
        }
        let n = proxy_size(body, resolution);
        let pts: Vec<Point> = sampling::sphere_directions(d, n, 0).iter().map(|u| body.support(u).1).collect();
        let poly = Polytope::hull(&pts)?;
        let error = sampling::sphere_directions(d, 4096, 3)
            .iter()
            .map(|u| body.support(u).0 - poly.support(u).0)
            .fold(0.0, f64::max);
        Ok(CapBody(Arc::new(Inner { body: body.clone(), poly, exact: false, error })))
    }

    pub fn from_polytope(p: Polytope) -> CapBody {
        CapBody(Arc::new(Inner { body: Body::Polytope(p.clone()), poly: p, exact: true, error: 0.0 }))
    }

    pub fn body(&self) -> &Body {
        &self.0.body
    }

    pub fn polytope(&self) -> &Polytope {
        &self.0.poly
    }

    pub fn is_exact(&self) -> bool {
        self.0.exact
    }

    /// Sampled Hausdorff gap between the body and its proxy (0 when exact).
    pub fn proxy_error(&self) -> f64 {
        self.0.error
    }

    pub fn dim(&self) -> usize {
        self.0.poly.dim()
    }

    pub fn support(&self, u: &Point) -> f64 {
        self.0.poly.support(u).0
    }

    /// Width of the body along u: h(u) + h(−u).
    pub fn width(&self, u: &Point) -> f64 {
        self.support(u) + self.support(&-*u)
    }

    /// δ(x) on the working polytope (negative outside).
    pub fn depth(&self, x: &Point) -> f64 {
        self.0.poly.min_slack_facet(x).1
    }

    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        self.0.poly.contains(x, tol)
    }

    /// Point on the ray through u at depth `depth` in the working polytope.
    pub fn point_at_depth(&self, u: &Point, depth: f64) -> Result<Point> {
        point_at_depth_poly(&self.0.poly, u, depth)
    }

    pub fn volume(&self) -> f64 {
        self.0.poly.volume()
    }
}

pub(crate) fn point_at_depth_poly(p: &Polytope, u: &Point, depth: f64) -> Result<Point> {
    let d = u.dim();
    let origin = Point::zeros(d);
    let max = p.min_slack_facet(&origin).1;
    if !(max > 0.0) {
        return Err(crate::Error::CenterNotInterior);
    }
    if !(depth > 0.0) || depth >= max {
        return Err(crate::Error::DepthTooLarge { depth, max });
    }
    let u = u.normalized().ok_or(crate::Error::OriginQuery)?;
    let t_bd = p.boundary_ray(&origin, &u).norm();
    let (mut lo, mut hi) = (0.0, t_bd);
    for _ in 0..200 {
        if hi - lo <= 1e-15 * t_bd {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if p.min_slack_facet(&(u * mid)).1 >= depth {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(u * lo)
}
