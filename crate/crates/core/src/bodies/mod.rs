//! Convex bodies behind a membership/support/ray oracle, plus distance
//! functions and the reduction to canonical position.

mod canonical;
mod ellipsoid;
mod spec;

pub use canonical::{john_ellipsoid, to_canonical, CanonicalForm};
pub use ellipsoid::{unit_ball_volume, Ellipsoid};
pub use spec::BodySpec;

use crate::error::{Error, Result};
use crate::geom::{self, AffineMap, Point, Polytope};
use crate::sampling;

/// Oracle access to a convex body.
pub trait ConvexBodyOracle {
    fn dim(&self) -> usize;

    fn contains(&self, x: &Point) -> bool;

    /// Support value and a maximizer for a unit direction.
    fn support(&self, u: &Point) -> (f64, Point);

    /// Boundary point on the ray x0 + t·u, t ≥ 0, for interior x0 (found by
    /// bisection on membership).
    fn boundary_ray(&self, x0: &Point, u: &Point) -> Point {
        let inside = |t: f64| self.contains(&(*x0 + *u * t));
        let mut hi = 1.0;
        while inside(hi) {
            hi *= 2.0;
            if hi > 1e12 {
                return *x0 + *u * hi;
            }
        }
        let mut lo = 0.0;
        for _ in 0..80 {
            if hi - lo <= 1e-12 * hi.max(1.0) * 1e-3 {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if inside(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        *x0 + *u * lo
    }
}

/// The supported body families.
#[derive(Clone, Debug)]
pub enum Body {
    Ball {
        dim: usize,
        radius: f64,
    },
    Ellipsoid(Ellipsoid),
    /// [−h_1, h_1] × … × [−h_d, h_d].
    Box {
        half_widths: Point,
    },
    /// {x : ‖x‖_p ≤ radius} for 1 < p < ∞ (other exponents become polytopes or balls).
    LpBall {
        dim: usize,
        p: f64,
        radius: f64,
    },
    Polytope(Polytope),
    Transformed {
        map: AffineMap,
        body: Box<Body>,
    },
}

/// Membership slack allowed by [`ConvexBodyOracle::contains`].
pub const CONTAINS_TOL: f64 = 1e-12;

impl Body {
    pub fn ball(dim: usize, radius: f64) -> Result<Body> {
        geom::check_ambient_dim(dim)?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Config(format!("ball radius must be positive, got {radius}")));
        }
        Ok(Body::Ball { dim, radius })
    }

    pub fn cube(dim: usize) -> Result<Body> {
        Body::boxed(&vec![1.0; dim])
    }

    pub fn boxed(half_widths: &[f64]) -> Result<Body> {
        geom::check_ambient_dim(half_widths.len())?;
        if half_widths.iter().any(|&h| !(h > 0.0 && h.is_finite())) {
            return Err(Error::Config("box half-widths must be positive".into()));
        }
        Ok(Body::Box { half_widths: Point::new(half_widths) })
    }

    pub fn ellipsoid(semi_axes: &[f64]) -> Result<Body> {
        geom::check_ambient_dim(semi_axes.len())?;
        Ok(Body::Ellipsoid(Ellipsoid::axis_aligned(Point::zeros(semi_axes.len()), semi_axes)?))
    }

    /// ℓ_p ball; p = 1 and p = ∞ yield polytopes, p = 2 a Euclidean ball.
    pub fn lp_ball(dim: usize, p: f64, radius: f64) -> Result<Body> {
        geom::check_ambient_dim(dim)?;
        if !(p >= 1.0) || !(radius > 0.0) {
            return Err(Error::Config(format!("lp ball needs p ≥ 1 and radius > 0, got p={p}")));
        }
        if p.is_infinite() {
            return Body::boxed(&vec![radius; dim]);
        }
        if p == 1.0 {
            let pts: Vec<Point> =
                (0..dim).flat_map(|i| [Point::unit(dim, i) * radius, Point::unit(dim, i) * -radius]).collect();
            return Ok(Body::Polytope(Polytope::hull(&pts)?));
        }
        if p == 2.0 {
            return Body::ball(dim, radius);
        }
        Ok(Body::LpBall { dim, p, radius })
    }

    pub fn polytope(p: Polytope) -> Result<Body> {
        geom::check_ambient_dim(p.dim())?;
        Ok(Body::Polytope(p))
    }

    /// Convex hull of `n` uniform random points on the unit sphere.
    pub fn random_polytope(dim: usize, n: usize, seed: u64) -> Result<Body> {
        geom::check_ambient_dim(dim)?;
        let mut rng = sampling::rng(seed);
        let pts: Vec<Point> = (0..n).map(|_| sampling::random_unit(&mut rng, dim)).collect();
        Body::polytope(Polytope::hull(&pts)?)
    }

    /// Image T(K), simplified to a closed family when one exists.
    pub fn transformed(map: &AffineMap, body: &Body) -> Result<Body> {
        if map.dim() != body.dim() {
            return Err(Error::DimensionMismatch { expected: body.dim(), got: map.dim() });
        }
        Ok(match body {
            Body::Ball { dim, radius } => {
                let e = Ellipsoid::ball(Point::zeros(*dim), *radius)?;
                Body::Ellipsoid(e.mapped(map)?)
            }
            Body::Ellipsoid(e) => Body::Ellipsoid(e.mapped(map)?),
            Body::Box { half_widths } => Body::Polytope(geom::box_polytope(half_widths.coords())?.map(map)),
            Body::Polytope(p) => Body::Polytope(p.map(map)),
            Body::LpBall { .. } => Body::Transformed { map: map.clone(), body: Box::new(body.clone()) },
            Body::Transformed { map: inner, body } => Body::Transformed { map: map.compose(inner), body: body.clone() },
        })
    }

    /// Short family name used in records.
    pub fn kind(&self) -> &'static str {
        match self {
            Body::Ball { .. } => "ball",
            Body::Ellipsoid(_) => "ellipsoid",
            Body::Box { .. } => "box",
            Body::LpBall { .. } => "lp",
            Body::Polytope(_) => "polytope",
            Body::Transformed { .. } => "transformed",
        }
    }

    pub fn as_polytope(&self) -> Option<&Polytope> {
        match self {
            Body::Polytope(p) => Some(p),
            _ => None,
        }
    }

    /// Signed outside distance estimate: ≤ 0 inside, positive outside; exact
    /// for balls and polytopes, a lower bound on the true distance otherwise.
    pub fn violation(&self, x: &Point) -> f64 {
        match self {
            Body::Ball { radius, .. } => x.norm() - radius,
            Body::Ellipsoid(e) => (e.gauge(x) - 1.0) * e.semi_axes()[e.dim() - 1],
            Body::Box { half_widths } => {
                (0..x.dim()).map(|i| x[i].abs() - half_widths[i]).fold(f64::NEG_INFINITY, f64::max)
            }
            Body::LpBall { p, radius, .. } => lp_norm(x, *p) - radius,
            Body::Polytope(q) => q.max_violation(x),
            Body::Transformed { map, body } => body.violation(&map.apply_inverse(x)) / map.inverse_norm(),
        }
    }

    pub fn contains_tol(&self, x: &Point, tol: f64) -> bool {
        self.violation(x) <= tol
    }

    /// Support for any nonzero vector (positively homogeneous extension).
    pub fn support_vec(&self, v: &Point) -> (f64, Point) {
        let n = v.norm();
        let (h, p) = self.support(&(*v * (1.0 / n)));
        (h * n, p)
    }

    /// Distance from x to the boundary, for x in the body.
    pub fn delta(&self, x: &Point) -> Result<f64> {
        geom::check_ambient_dim(x.dim())?;
        crate::error::check_dim(self.dim(), x.dim())?;
        if !self.contains_tol(x, 1e-12 * (1.0 + x.norm())) {
            return Err(Error::OutsideBody);
        }
        Ok(self.depth_unchecked(x).max(0.0))
    }

    pub(crate) fn depth_unchecked(&self, x: &Point) -> f64 {
        match self {
            Body::Ball { radius, .. } => radius - x.norm(),
            Body::Ellipsoid(e) => e.nearest_boundary_point(x).dist(x),
            Body::Box { half_widths } => {
                (0..x.dim()).map(|i| half_widths[i] - x[i].abs()).fold(f64::INFINITY, f64::min)
            }
            Body::Polytope(p) => p.min_slack_facet(x).1,
            Body::LpBall { .. } | Body::Transformed { .. } => {
                // The dual estimate stalls where the support function has a
                // kink-like Hessian; finish with the shortest ray from x.
                let (dual, u) = optimize_support(self, x, false);
                let w0 = (self.support(&u).1 - *x).normalized().unwrap_or(u);
                let ray = |w: &Point| self.boundary_ray(x, w).dist(x);
                dual.min(minimize_on_sphere(&ray, w0))
            }
        }
    }

    /// Distance from x to the boundary along the ray from the origin through x.
    pub fn ray_distance(&self, x: &Point) -> Result<f64> {
        crate::error::check_dim(self.dim(), x.dim())?;
        let n = x.norm();
        if n == 0.0 {
            return Err(Error::OriginQuery);
        }
        if !self.contains_tol(x, 1e-12 * (1.0 + n)) {
            return Err(Error::OutsideBody);
        }
        let b = self.boundary_ray(&Point::zeros(x.dim()), &(*x * (1.0 / n)));
        Ok(b.dist(x).max(0.0))
    }

    /// Point t·u with δ(t·u) = depth, by bracketed regula falsi (Illinois)
    /// on t.
    pub fn point_at_depth(&self, u: &Point, depth: f64) -> Result<Point> {
        crate::error::check_dim(self.dim(), u.dim())?;
        let d = u.dim();
        let origin = Point::zeros(d);
        let max = self.delta(&origin)?;
        if !(depth > 0.0) || depth >= max {
            return Err(Error::DepthTooLarge { depth, max });
        }
        let u = u.normalized().ok_or(Error::OriginQuery)?;
        let t_bd = self.boundary_ray(&origin, &u).norm();
        let f = |t: f64| self.depth_unchecked(&(u * t)) - depth;
        let (mut lo, mut hi) = (0.0, t_bd);
        let (mut flo, mut fhi) = (max - depth, -depth);
        let mut side = 0;
        for _ in 0..200 {
            if hi - lo <= 1e-15 * t_bd {
                break;
            }
            let t = ((lo * fhi - hi * flo) / (fhi - flo)).clamp(lo, hi);
            let ft = f(t);
            if ft == 0.0 {
                return Ok(u * t);
            }
            if ft > 0.0 {
                (lo, flo) = (t, ft);
                if side == 1 {
                    fhi *= 0.5;
                }
                side = 1;
            } else {
                (hi, fhi) = (t, ft);
                if side == -1 {
                    flo *= 0.5;
                }
                side = -1;
            }
            if ft.abs() <= 1e-15 * depth {
                break;
            }
        }
        Ok(u * if flo.abs() <= fhi.abs() { lo } else { hi })
    }

    /// max_{x∈K} ‖x‖.
    pub fn circumradius(&self) -> f64 {
        match self {
            Body::Ball { radius, .. } => *radius,
            Body::Box { half_widths } => half_widths.norm(),
            Body::Polytope(p) => p.vertices().iter().map(|v| v.norm()).fold(0.0, f64::max),
            Body::LpBall { dim, p, radius } => {
                // Attained on the diagonal for p > 2, on an axis for p < 2.
                if *p > 2.0 {
                    radius * (*dim as f64).powf(0.5 - 1.0 / p)
                } else {
                    *radius
                }
            }
            Body::Ellipsoid(_) | Body::Transformed { .. } => optimize_support(self, &Point::zeros(self.dim()), true).0,
        }
    }

    /// Nearest point of the body to an outside point (exact families only).
    pub fn nearest_point(&self, x: &Point) -> Option<Point> {
        if self.contains_tol(x, 0.0) {
            return Some(*x);
        }
        match self {
            Body::Ball { radius, .. } => Some(*x * (radius / x.norm())),
            Body::Ellipsoid(e) => Some(e.nearest_boundary_point(x)),
            Body::Box { half_widths } => Some(Point::from_fn(x.dim(), |i| x[i].clamp(-half_widths[i], half_widths[i]))),
            Body::Polytope(p) => Some(crate::geom::nearest_point(p, x)),
            _ => None,
        }
    }

    /// Exact volume where available.
    pub fn volume(&self) -> Option<f64> {
        match self {
            Body::Ball { dim, radius } => Some(unit_ball_volume(*dim) * radius.powi(*dim as i32)),
            Body::Ellipsoid(e) => Some(e.volume()),
            Body::Box { half_widths } => Some(half_widths.coords().iter().map(|h| 2.0 * h).product()),
            Body::Polytope(p) => Some(p.volume()),
            Body::LpBall { .. } | Body::Transformed { .. } => None,
        }
    }
}

fn lp_norm(x: &Point, p: f64) -> f64 {
    let m = x.max_abs();
    if m == 0.0 {
        return 0.0;
    }
    m * x.coords().iter().map(|v| (v.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
}

impl ConvexBodyOracle for Body {
    fn dim(&self) -> usize {
        match self {
            Body::Ball { dim, .. } | Body::LpBall { dim, .. } => *dim,
            Body::Ellipsoid(e) => e.dim(),
            Body::Box { half_widths } => half_widths.dim(),
            Body::Polytope(p) => p.dim(),
            Body::Transformed { map, .. } => map.dim(),
        }
    }

    fn contains(&self, x: &Point) -> bool {
        self.contains_tol(x, CONTAINS_TOL * (1.0 + x.norm()))
    }

    fn support(&self, u: &Point) -> (f64, Point) {
        match self {
            Body::Ball { radius, .. } => (radius * u.norm(), *u * *radius),
            Body::Ellipsoid(e) => e.support(u),
            Body::Box { half_widths } => {
                let p = Point::from_fn(u.dim(), |i| if u[i] < 0.0 { -half_widths[i] } else { half_widths[i] });
                (u.dot(&p), p)
            }
            Body::LpBall { p, radius, .. } => {
                let q = p / (p - 1.0);
                let nq = lp_norm(u, q);
                let x = Point::from_fn(u.dim(), |i| radius * u[i].signum() * (u[i].abs() / nq).powf(q - 1.0));
                (radius * nq, x)
            }
            Body::Polytope(q) => {
                let (h, i) = q.support(u);
                (h, q.vertices()[i])
            }
            Body::Transformed { map, body } => {
                let v = map.transpose_linear(u);
                let (_, arg) = body.support_vec(&v);
                let y = map.apply(&arg);
                (u.dot(&y), y)
            }
        }
    }

    fn boundary_ray(&self, x0: &Point, u: &Point) -> Point {
        match self {
            Body::Ball { radius, .. } => {
                // |x0 + t u| = r.
                let b = x0.dot(u);
                let c = x0.norm2() - radius * radius;
                let t = -b + (b * b - c).max(0.0).sqrt();
                *x0 + *u * t
            }
            Body::Ellipsoid(e) => {
                let m = e.ball_map();
                let y0 = m.apply_inverse(x0);
                let w = m.apply_inverse(&(*x0 + *u)) - y0;
                let a = w.norm2();
                let b = y0.dot(&w);
                let c = y0.norm2() - 1.0;
                let t = (-b + (b * b - a * c).max(0.0).sqrt()) / a;
                *x0 + *u * t
            }
            Body::Polytope(p) => p.boundary_ray(x0, u),
            Body::Box { half_widths } => {
                let t = (0..u.dim())
                    .filter(|&i| u[i] != 0.0)
                    .map(|i| (half_widths[i] * u[i].signum() - x0[i]) / u[i])
                    .fold(f64::INFINITY, f64::min);
                *x0 + *u * t.max(0.0)
            }
            _ => {
                let inside = |t: f64| self.contains(&(*x0 + *u * t));
                let mut hi = 1.0;
                while inside(hi) {
                    hi *= 2.0;
                }
                let mut lo = 0.0;
                for _ in 0..80 {
                    if hi - lo <= 1e-12 * 1e-3 * hi {
                        break;
                    }
                    let mid = 0.5 * (lo + hi);
                    if inside(mid) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                *x0 + *u * lo
            }
        }
    }
}

impl ConvexBodyOracle for Polytope {
    fn dim(&self) -> usize {
        Polytope::dim(self)
    }

    fn contains(&self, x: &Point) -> bool {
        Polytope::contains(self, x, CONTAINS_TOL * (1.0 + x.norm()))
    }

    fn support(&self, u: &Point) -> (f64, Point) {
        let (h, i) = Polytope::support(self, u);
        (h, self.vertices()[i])
    }

    fn boundary_ray(&self, x0: &Point, u: &Point) -> Point {
        let t = self
            .facets()
            .iter()
            .filter(|h| h.normal.dot(u) > 0.0)
            .map(|h| h.slack(x0).max(0.0) / h.normal.dot(u))
            .fold(f64::INFINITY, f64::min);
        *x0 + *u * t
    }
}

/// Extremizes f(u) = h(u) − ⟨u, x⟩ over the unit sphere by multistart
/// projected gradient (the gradient of h is the support point). Returns the
/// value and the direction. Intended for smooth strictly convex bodies.
pub fn optimize_support(body: &Body, x: &Point, maximize: bool) -> (f64, Point) {
    let d = x.dim();
    let sign = if maximize { -1.0 } else { 1.0 };
    let f = |u: &Point| -> (f64, Point) {
        let (h, a) = body.support(u);
        (sign * (h - u.dot(x)), (a - *x) * sign)
    };
    let starts = sampling::sphere_directions(d, 96 * (d - 1), 0);
    let mut ranked: Vec<(f64, Point)> = starts.iter().map(|u| (f(u).0, *u)).collect();
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = (f64::INFINITY, ranked[0].1);
    for &(_, start) in ranked.iter().take(4) {
        let mut u = start;
        let (mut val, mut g) = f(&u);
        let mut step = 0.1;
        for _ in 0..2000 {
            let gt = g - u * g.dot(&u);
            let gn = gt.norm();
            if gn < 1e-14 {
                break;
            }
            let mut improved = false;
            while step > 1e-16 {
                let cand = (u - gt * (step / gn)).normalized().unwrap();
                let (cv, cg) = f(&cand);
                if cv < val {
                    u = cand;
                    val = cv;
                    g = cg;
                    step *= 1.5;
                    improved = true;
                    break;
                }
                step *= 0.5;
            }
            if !improved {
                break;
            }
        }
        if val < best.0 {
            best = (val, u);
        }
    }
    let best = newton_polish(&f, best);
    (sign * best.0, best.1)
}

/// Newton steps on a tangent chart at u, with a finite-difference Hessian of
/// the analytic gradient. Used after descent, which stalls on flat spots.
fn newton_polish(f: &impl Fn(&Point) -> (f64, Point), start: (f64, Point)) -> (f64, Point) {
    let (mut val, mut u) = start;
    let d = u.dim();
    if d < 2 {
        return (val, u);
    }
    for _ in 0..30 {
        let basis = tangent_basis(&u);
        let chart = |v: &[f64]| {
            let mut w = u;
            for (b, c) in basis.iter().zip(v) {
                w += *b * *c;
            }
            w.normalized().unwrap()
        };
        let grad = |v: &[f64]| {
            let w = chart(v);
            let g = f(&w).1;
            let gt = g - w * g.dot(&w);
            let scale = 1.0 / (1.0 + v.iter().map(|c| c * c).sum::<f64>()).sqrt();
            nalgebra::DVector::from_iterator(d - 1, basis.iter().map(|b| gt.dot(b) * scale))
        };
        let zero = vec![0.0; d - 1];
        let g0 = grad(&zero);
        let step = 1e-6;
        let mut hess = nalgebra::DMatrix::zeros(d - 1, d - 1);
        for i in 0..d - 1 {
            let mut vp = zero.clone();
            let mut vm = zero.clone();
            vp[i] = step;
            vm[i] = -step;
            hess.set_column(i, &((grad(&vp) - grad(&vm)) / (2.0 * step)));
        }
        let hess = (&hess + hess.transpose()) * 0.5;
        let Some(dv) = hess.cholesky().map(|c| c.solve(&(-&g0))) else {
            break;
        };
        let mut t = 1.0;
        let mut moved = false;
        while t > 1e-6 {
            let v: Vec<f64> = dv.iter().map(|c| c * t).collect();
            let cand = chart(&v);
            let cv = f(&cand).0;
            if cv < val {
                val = cv;
                u = cand;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if !moved || dv.norm() * t < 1e-13 {
            break;
        }
    }
    (val, u)
}

/// Local minimum of a smooth function of a unit vector near `start`, by
/// Newton steps with finite-difference derivatives.
fn minimize_on_sphere(f: &impl Fn(&Point) -> f64, start: Point) -> f64 {
    let d = start.dim();
    let (mut u, mut val) = (start, f(&start));
    if d < 2 {
        return val;
    }
    let (hg, hh) = (1e-5, 1e-4);
    for _ in 0..20 {
        let basis = tangent_basis(&u);
        let at = |v: &[f64]| {
            let mut w = u;
            for (b, c) in basis.iter().zip(v) {
                w += *b * *c;
            }
            w.normalized().unwrap()
        };
        let m = d - 1;
        let e = |i: usize, h: f64| (0..m).map(|k| if k == i { h } else { 0.0 }).collect::<Vec<f64>>();
        let g = nalgebra::DVector::from_fn(m, |i, _| (f(&at(&e(i, hg))) - f(&at(&e(i, -hg)))) / (2.0 * hg));
        let mut hess = nalgebra::DMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                let mut pp = e(i, hh);
                let mut pm = e(i, hh);
                let mut mp = e(i, -hh);
                let mut mm = e(i, -hh);
                pp[j] += hh;
                pm[j] -= hh;
                mp[j] += hh;
                mm[j] -= hh;
                hess[(i, j)] = (f(&at(&pp)) - f(&at(&pm)) - f(&at(&mp)) + f(&at(&mm))) / (4.0 * hh * hh);
            }
        }
        let hess = (&hess + hess.transpose()) * 0.5;
        let Some(dv) = hess.cholesky().map(|c| c.solve(&(-&g))) else {
            break;
        };
        let mut t = 1.0;
        let mut moved = false;
        while t > 1e-4 {
            let v: Vec<f64> = dv.iter().map(|c| c * t).collect();
            let cand = at(&v);
            let cv = f(&cand);
            if cv < val {
                (u, val) = (cand, cv);
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if !moved || dv.norm() * t < 1e-10 {
            break;
        }
    }
    val
}

fn tangent_basis(u: &Point) -> Vec<Point> {
    let d = u.dim();
    let mut basis: Vec<Point> = Vec::with_capacity(d - 1);
    for i in 0..d {
        let mut w = Point::unit(d, i);
        w = w - *u * w.dot(u);
        for b in &basis {
            w = w - *b * w.dot(b);
        }
        if let Some(w) = w.normalized().filter(|_| w.norm() > 1e-3) {
            basis.push(w);
            if basis.len() == d - 1 {
                break;
            }
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_and_cube_depths() {
        let b = Body::ball(3, 1.0).unwrap();
        assert!((b.delta(&Point::zeros(3)).unwrap() - 1.0).abs() < 1e-15);
        let c = Body::cube(3).unwrap();
        let eps = 0.01;
        assert!((c.delta(&Point::new(&[1.0 - eps, 0.0, 0.0])).unwrap() - eps).abs() < 1e-15);
        assert_eq!(c.delta(&Point::new(&[1.5, 0.0, 0.0])), Err(Error::OutsideBody));
    }

    #[test]
    fn ray_distance_examples() {
        let b = Body::ball(2, 1.0).unwrap();
        assert!((b.ray_distance(&Point::new(&[0.9, 0.0])).unwrap() - 0.1).abs() < 1e-12);
        let c = Body::cube(2).unwrap();
        let r = c.ray_distance(&Point::new(&[0.5, 0.5])).unwrap();
        assert!((r - 0.5f64.sqrt()).abs() < 1e-12);
        assert_eq!(c.ray_distance(&Point::zeros(2)), Err(Error::OriginQuery));
    }

    #[test]
    fn depth_points() {
        let b = Body::ball(3, 1.0).unwrap();
        let x = b.point_at_depth(&Point::unit(3, 0), 0.1).unwrap();
        assert!(x.dist(&Point::new(&[0.9, 0.0, 0.0])) < 1e-12);
        let c = Body::cube(2).unwrap();
        let diag = Point::new(&[1.0, 1.0]).normalized().unwrap();
        let y = c.point_at_depth(&diag, 0.1).unwrap();
        assert!(y.dist(&Point::new(&[0.9, 0.9])) < 1e-12);
        assert!(matches!(c.point_at_depth(&diag, 1.0), Err(Error::DepthTooLarge { .. })));
    }

    #[test]
    fn lp_ball_oracle() {
        let k = Body::lp_ball(3, 4.0, 1.0).unwrap();
        let dirs = sampling::sphere_directions(3, 200, 3);
        for u in &dirs {
            let (h, a) = k.support(u);
            assert!((u.dot(&a) - h).abs() < 1e-12);
            assert!((lp_norm(&a, 4.0) - 1.0).abs() < 1e-12);
            let b = k.boundary_ray(&Point::zeros(3), u);
            assert!((lp_norm(&b, 4.0) - 1.0).abs() < 1e-9);
        }
        // Inradius of the ℓ4 ball is 1 (attained on the axes).
        assert!((k.delta(&Point::zeros(3)).unwrap() - 1.0).abs() < 1e-9);
        assert!((k.circumradius() - 3f64.powf(0.25)).abs() < 1e-12);
    }

    #[test]
    fn transformed_simplifies() {
        let m = AffineMap::new(nalgebra::DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]), Point::new(&[1.0, 0.0]))
            .unwrap();
        let e = Body::transformed(&m, &Body::ball(2, 1.0).unwrap()).unwrap();
        assert_eq!(e.kind(), "ellipsoid");
        assert!(e.contains(&Point::new(&[2.9, 0.0])));
        assert!(!e.contains(&Point::new(&[3.1, 0.0])));
        let b = Body::transformed(&m, &Body::cube(2).unwrap()).unwrap();
        assert_eq!(b.kind(), "polytope");
        let l = Body::transformed(&m, &Body::lp_ball(2, 3.0, 1.0).unwrap()).unwrap();
        assert_eq!(l.kind(), "transformed");
        assert!(l.contains(&Point::new(&[2.9, 0.0])) && !l.contains(&Point::new(&[3.1, 0.0])));
    }
}
