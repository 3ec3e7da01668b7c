use super::CapBody;
use crate::error::{Error, Result};
use crate::geom::linalg::Frame;
use crate::geom::{Halfspace, Point, Polytope};

/// The cap {x ∈ K : ⟨u, x⟩ ≥ b} of width h_K(u) − b.
#[derive(Clone, Debug)]
pub struct Cap {
    body: CapBody,
    normal: Point,
    offset: f64,
    width: f64,
    apex: Point,
    volume: f64,
    frame: Frame,
    base: Option<Polytope>,
    base_centroid: Option<Point>,
}

/// Points of the cap polytope (vertices above the plane plus edge crossings)
/// and the crossings alone.
pub(crate) fn section(p: &Polytope, u: &Point, b: f64) -> (Vec<Point>, Vec<Point>) {
    let mesh = p.mesh();
    let above = p.mesh_points_above(u, b);
    let (off, adj) = p.mesh_adjacency();
    let mut cap_pts = Vec::with_capacity(above.len() * 2);
    let mut base = Vec::new();
    let scale = 1e-14 * (1.0 + b.abs());
    for &i in &above {
        let pi = mesh.points[i];
        let si = u.dot(&pi);
        cap_pts.push(pi);
        if si - b <= scale {
            base.push(pi);
            continue;
        }
        for &j in &adj[off[i] as usize..off[i + 1] as usize] {
            let pj = mesh.points[j as usize];
            let sj = u.dot(&pj);
            if sj < b {
                let t = (si - b) / (si - sj);
                let q = pi + (pj - pi) * t;
                cap_pts.push(q);
                base.push(q);
            }
        }
    }
    (cap_pts, base)
}

/// Volume of {x ∈ P : ⟨u,x⟩ ≥ b}; `None` when the slice is degenerate.
pub(crate) fn cap_volume(p: &Polytope, u: &Point, b: f64) -> Option<f64> {
    let (pts, _) = section(p, u, b);
    Polytope::hull(&pts).ok().map(|c| c.volume())
}

impl Cap {
    fn build(body: &CapBody, u: Point, w: f64) -> Result<Cap> {
        let p = body.polytope();
        let d = p.dim();
        let (h, ai) = p.support(&u);
        let apex = p.vertices()[ai];
        let full = body.width(&u);
        let frame = Frame::vertical(&u);
        if w >= full {
            return Ok(Cap {
                body: body.clone(),
                normal: u,
                offset: h - full,
                width: full,
                apex,
                volume: p.volume(),
                frame,
                base: None,
                base_centroid: None,
            });
        }
        let b = h - w;
        let (pts, base_pts) = section(p, &u, b);
        let volume = match Polytope::hull(&pts) {
            Ok(c) => c.volume(),
            Err(Error::DegenerateInput(_)) => 0.0,
            Err(e) => return Err(e),
        };
        let local: Vec<Point> = base_pts.iter().map(|q| frame.to_local(q).truncate()).collect();
        let base = if local.len() >= d { Polytope::hull(&local).ok() } else { None };
        let base_centroid = base.as_ref().map(|bp| frame.to_world(&bp.centroid().extend(b)));
        Ok(Cap { body: body.clone(), normal: u, offset: b, width: w, apex, volume, frame, base, base_centroid })
    }

    pub fn body(&self) -> &CapBody {
        &self.body
    }

    /// Outward unit normal u of the base.
    pub fn normal(&self) -> Point {
        self.normal
    }

    /// Level b of the base hyperplane ⟨u, x⟩ = b.
    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn apex(&self) -> Point {
        self.apex
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// The halfspace H with cap = K ∩ H, as {⟨−u, x⟩ ≤ −b}.
    pub fn halfspace(&self) -> Halfspace {
        Halfspace { normal: -self.normal, offset: -self.offset }
    }

    /// Base as a (d−1)-polytope in the coordinates of [`Cap::frame`]; `None`
    /// when the cap is all of K or the slice is degenerate.
    pub fn base(&self) -> Option<&Polytope> {
        self.base.as_ref()
    }

    pub fn base_centroid(&self) -> Option<Point> {
        self.base_centroid
    }

    /// Rotation taking the normal to the last axis.
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Whether the cap is the entire body.
    pub fn is_full(&self) -> bool {
        self.base.is_none() && self.width >= self.body.width(&self.normal)
    }

    /// Membership in the halfspace side only.
    pub fn above(&self, x: &Point, tol: f64) -> bool {
        self.normal.dot(x) >= self.offset - tol
    }

    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        self.above(x, tol) && self.body.contains(x, tol)
    }

    /// The cap as a polytope (the body itself when the cap is full).
    pub fn polytope(&self) -> Result<Polytope> {
        if self.base.is_none() && self.width >= self.body.width(&self.normal) {
            return Ok(self.body.polytope().clone());
        }
        let (pts, _) = section(self.body.polytope(), &self.normal, self.offset);
        Polytope::hull(&pts)
    }

    /// Whether every vertex of `p` lies in the cap.
    pub fn contains_polytope(&self, p: &Polytope, tol: f64) -> bool {
        p.vertices().iter().all(|v| self.contains(v, tol))
    }
}

/// The unique cap of width w with outward base normal u.
pub fn make_cap(k: &CapBody, u: &Point, w: f64) -> Result<Cap> {
    crate::error::check_dim(k.dim(), u.dim())?;
    let u = u.normalized().ok_or(Error::OriginQuery)?;
    let max = k.width(&u);
    if !(w > 0.0 && w < max) {
        return Err(Error::WidthTooLarge { width: w, max });
    }
    Cap::build(k, u, w)
}

/// The cap with normal u whose base passes through x.
pub fn cap_through(k: &CapBody, u: &Point, x: &Point) -> Result<Cap> {
    let u = u.normalized().ok_or(Error::OriginQuery)?;
    let w = k.support(&u) - u.dot(x);
    make_cap(k, &u, w)
}

/// C^ρ: same normal, width ρ·w clamped to the full width of K.
pub fn expand_cap(c: &Cap, rho: f64) -> Cap {
    if rho == 1.0 {
        return c.clone();
    }
    let w = (rho * c.width).max(0.0);
    Cap::build(&c.body, c.normal, w).unwrap_or_else(|_| Cap {
        width: w,
        volume: 0.0,
        base: None,
        base_centroid: None,
        ..c.clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::Body;

    #[test]
    fn ball_chord() {
        let k = CapBody::new(&Body::ball(2, 1.0).unwrap(), 0.01).unwrap();
        let c = make_cap(&k, &Point::unit(2, 1), 0.1).unwrap();
        let len = c.base().unwrap().volume();
        assert!((len - 2.0 * 0.19f64.sqrt()).abs() < 1e-4, "{len}");
        assert!((c.width() - 0.1).abs() < 1e-15);
        assert!(c.apex()[1] > 0.999);
    }

    #[test]
    fn cube_slab_and_corner() {
        for d in 2..=4 {
            let k = CapBody::new(&Body::cube(d).unwrap(), 0.01).unwrap();
            let eps = 0.05;
            let slab = make_cap(&k, &Point::unit(d, 0), eps).unwrap();
            assert!((slab.volume() - eps * 2f64.powi(d as i32 - 1)).abs() < 1e-12);
            let diag = Point::from_fn(d, |_| 1.0).normalized().unwrap();
            let corner = make_cap(&k, &diag, eps).unwrap();
            let fact: f64 = (1..=d).map(|i| i as f64).product();
            let want = (eps * (d as f64).sqrt()).powi(d as i32) / fact;
            assert!((corner.volume() / want - 1.0).abs() < 1e-9);
            let doubled = expand_cap(&slab, 2.0);
            assert!((doubled.volume() / slab.volume() - 2.0).abs() < 1e-12);
            assert!((expand_cap(&slab, 1.0).volume() - slab.volume()).abs() == 0.0);
            let all = expand_cap(&slab, 100.0);
            assert!(all.is_full());
            assert!((all.volume() - 2f64.powi(d as i32)).abs() < 1e-9);
        }
    }

    #[test]
    fn width_errors() {
        let k = CapBody::new(&Body::cube(2).unwrap(), 0.01).unwrap();
        assert!(matches!(make_cap(&k, &Point::unit(2, 0), 2.5), Err(Error::WidthTooLarge { .. })));
        assert!(matches!(make_cap(&k, &Point::unit(2, 0), 0.0), Err(Error::WidthTooLarge { .. })));
    }
}
