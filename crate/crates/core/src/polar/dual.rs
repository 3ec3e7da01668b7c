use nalgebra::DMatrix;

use super::{polar_about_origin, vertex_distance};
use crate::error::{Error, Result};
use crate::geom::linalg::{complement_basis, Frame};
use crate::geom::{self, Halfspace, Point, Polytope};

/// The polar G of the dual cap of a flat body K with respect to z, set
/// against α·K̄*, K̄ being the projection of K along Oz.
///
/// All (d−1)-dimensional polytopes here use the horizontal basis returned by
/// [`complement_basis`] applied to z/‖z‖.
#[derive(Clone, Debug)]
pub struct DualCapPolar {
    /// K in coordinates of its own hyperplane.
    pub base_body: Polytope,
    pub viewpoint: Point,
    /// G on the hyperplane z*, horizontal coordinates.
    pub g: Polytope,
    /// h* in world coordinates.
    pub h_star: Point,
    pub alpha: f64,
    /// K̄* in horizontal coordinates.
    pub projected_polar: Polytope,
    /// Vertex distance between G − h* and α·K̄*.
    pub vertex_error: f64,
}

impl DualCapPolar {
    pub fn holds(&self, tol: f64) -> bool {
        self.vertex_error <= tol
    }
}

fn invalid(msg: &str) -> Error {
    Error::GeometryInvalid(msg.into())
}

/// Unit normal of the affine hull of `pts`, which must be a hyperplane.
fn flat_normal(pts: &[Point], scale: f64) -> Result<Point> {
    let d = pts[0].dim();
    let rows: Vec<f64> = pts[1..].iter().flat_map(|p| (*p - pts[0]).coords().to_vec()).collect();
    let m = DMatrix::from_row_slice(pts.len() - 1, d, &rows);
    // Pad so the SVD yields all d right singular vectors.
    let m = if m.nrows() < d { m.resize_vertically(d, 0.0) } else { m };
    let svd = m.svd(false, true);
    let vt = svd.v_t.ok_or_else(|| invalid("SVD failed"))?;
    let s = &svd.singular_values;
    let (imin, &smin) = s.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    let second = s.iter().enumerate().filter(|(i, _)| *i != imin).map(|(_, v)| *v).fold(f64::INFINITY, f64::min);
    if smin > 1e-9 * scale || !(second > 1e-9 * scale) {
        return Err(invalid("flat body does not span a hyperplane"));
    }
    Ok(Point::from_fn(d, |j| vt[(imin, j)]).normalized().unwrap())
}

/// Builds G directly from its definition and compares G − h* with α·K̄*.
pub fn dual_cap_polar(k_flat: &[Point], z: &Point, x: &Point) -> Result<DualCapPolar> {
    let d = z.dim();
    geom::check_ambient_dim(d)?;
    if k_flat.len() < d {
        return Err(invalid("flat body needs at least d vertices"));
    }
    for p in k_flat {
        crate::error::check_dim(d, p.dim())?;
    }
    crate::error::check_dim(d, x.dim())?;
    let scale = k_flat.iter().chain([z, x]).map(Point::norm).fold(1.0, f64::max);
    let u = flat_normal(k_flat, scale)?;
    let level = u.dot(&k_flat[0]);
    if k_flat.iter().any(|p| (u.dot(p) - level).abs() > 1e-9 * scale) {
        return Err(invalid("flat body vertices are not coplanar"));
    }
    let zn = z.norm();
    let v = z.normalized().ok_or(Error::OriginPolar)?;
    if u.dot(&v).abs() < 1e-9 {
        return Err(invalid("flat body is parallel to the viewing ray"));
    }
    let t = x.dot(&v) / zn;
    if x.dist(&(*z * t)) > 1e-9 * scale || !(t > 0.0 && t < 1.0) {
        return Err(invalid("x is not strictly between O and z"));
    }
    let frame = Frame::vertical(&u);
    let local: Vec<Point> = k_flat.iter().map(|p| frame.to_local(p).truncate()).collect();
    let base_body = Polytope::hull(&local)?;
    if !(base_body.min_slack_facet(&frame.to_local(x).truncate()).1 > 1e-9 * scale) {
        return Err(invalid("x is not in the relative interior of the flat body"));
    }

    let basis = complement_basis(&v);
    let flat = |p: &Point| Point::from_fn(d - 1, |i| basis[i].dot(p));
    let h_star = u * (1.0 / u.dot(z));
    let y0 = flat(&h_star);
    // w = v/‖z‖ + Σ y_i b_i satisfies ⟨w, z⟩ = 1; ⟨w, p⟩ ≤ 1 becomes linear in y.
    let mut hs = Vec::with_capacity(k_flat.len());
    for p in k_flat {
        let a = flat(p);
        let b = 1.0 - v.dot(p) / zn;
        if a.norm() <= 1e-14 * scale {
            if b < 0.0 {
                return Err(invalid("flat body meets the far side of z"));
            }
            continue;
        }
        hs.push(Halfspace::new(a, b)?);
    }
    let g = geom::halfspace_intersection(&hs, &y0)?;
    let projected: Vec<Point> = k_flat.iter().map(flat).collect();
    let projected_polar = polar_about_origin(&Polytope::hull(&projected)?)?;
    let alpha = x.dist(z) / zn;
    let lhs: Vec<Point> = g.vertices().iter().map(|w| *w - y0).collect();
    let rhs: Vec<Point> = projected_polar.vertices().iter().map(|w| *w * alpha).collect();
    let vertex_error = vertex_distance(&lhs, &rhs);
    Ok(DualCapPolar { base_body, viewpoint: *z, g, h_star, alpha, projected_polar, vertex_error })
}
