use serde::Serialize;

use super::CapBody;
use crate::error::{Error, Result};
use crate::geom::{self, Halfspace, Point, Polytope};

/// Scale of the shrunken Macbeath region M′(x).
pub const SHRUNKEN: f64 = 0.2;

/// M^λ(x) = x + λ((K − x) ∩ (x − K)).
#[derive(Clone, Debug, Serialize)]
pub struct MacbeathRegion {
    pub center: Point,
    pub scale: f64,
    #[serde(skip)]
    pub region: Polytope,
    pub volume: f64,
    pub depth: f64,
}

impl MacbeathRegion {
    /// The same region at another scale λ′ (exact homothety about x).
    pub fn rescaled(&self, scale: f64) -> MacbeathRegion {
        let s = scale / self.scale;
        MacbeathRegion {
            center: self.center,
            scale,
            region: self.region.scale_about(&self.center, s),
            volume: self.volume * s.powi(self.center.dim() as i32),
            depth: self.depth,
        }
    }

    pub fn contains(&self, y: &Point, tol: f64) -> bool {
        self.region.contains(y, tol)
    }

    /// Largest distance from the center to a vertex.
    pub fn radius(&self) -> f64 {
        self.region.vertices().iter().map(|v| v.dist(&self.center)).fold(0.0, f64::max)
    }
}

fn reflect(h: &Halfspace, x: &Point) -> Halfspace {
    // {y : ⟨a, 2x − y⟩ ≤ b}
    Halfspace { normal: -h.normal, offset: h.offset - 2.0 * h.normal.dot(x) }
}

/// Macbeath region of K at x, scaled by λ > 0 (λ > 1 gives the enlarged
/// regions used in containment statements).
///
/// K ∩ (2x − K) is found by cutting planes: start from the facets closest to
/// x and their reflections inside a bounding box, then add any facet that
/// cuts off a vertex of the current intersection.
pub fn macbeath(k: &CapBody, x: &Point, lambda: f64) -> Result<MacbeathRegion> {
    crate::error::check_dim(k.dim(), x.dim())?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Config(format!("Macbeath scale must be positive, got {lambda}")));
    }
    let p = k.polytope();
    let depth = k.depth(x);
    if depth < 1e-9 {
        return Err(Error::BoundaryPoint(depth));
    }
    let d = x.dim();
    let facets = p.facets();
    let reach = p.radius_about_interior() + p.interior_point().dist(x);
    let mut hs: Vec<Halfspace> = (0..d)
        .flat_map(|i| {
            let e = Point::unit(d, i);
            [Halfspace { normal: e, offset: x[i] + 2.0 * reach }, Halfspace { normal: -e, offset: 2.0 * reach - x[i] }]
        })
        .collect();
    let mut used = vec![false; facets.len()];
    let add = |i: usize, hs: &mut Vec<Halfspace>, used: &mut Vec<bool>| {
        if !used[i] {
            used[i] = true;
            hs.push(facets[i]);
            hs.push(reflect(&facets[i], x));
        }
    };
    for i in p.facets_with_slack_below(x, 3.0 * depth) {
        add(i, &mut hs, &mut used);
    }
    let tol = 1e-11 * (1.0 + reach);
    let mut region;
    loop {
        region = geom::halfspace_intersection(&hs, x)?;
        let mut grew = false;
        for v in region.vertices() {
            for q in [*v, *x * 2.0 - *v] {
                let (i, s) = p.min_slack_facet(&q);
                if s < -tol && !used[i] {
                    add(i, &mut hs, &mut used);
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    if lambda != 1.0 {
        region = region.scale_about(x, lambda);
    }
    let volume = region.volume();
    Ok(MacbeathRegion { center: *x, scale: lambda, region, volume, depth })
}
