//! Maximum-volume inscribed ellipsoids and the affine reduction to a body
//! nested between two concentric balls.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::{Body, ConvexBodyOracle, Ellipsoid};
use crate::error::{Error, Result};
use crate::geom::{AffineMap, Point, Polytope};
use crate::sampling;

/// Inner ellipsoid tolerance (relative, on the contact condition).
const JOHN_TOL: f64 = 1e-9;
const MAX_ROUNDS: usize = 10_000;

/// Maximum-volume ellipsoid inscribed in the body.
pub fn john_ellipsoid(k: &Body) -> Result<Ellipsoid> {
    let d = k.dim();
    match k {
        Body::Ball { radius, .. } => Ellipsoid::ball(Point::zeros(d), *radius),
        Body::Ellipsoid(e) => Ok(e.clone()),
        Body::Box { half_widths } => Ellipsoid::axis_aligned(Point::zeros(d), half_widths.coords()),
        // Invariance under signed coordinate permutations forces a centered ball.
        Body::LpBall { .. } => Ellipsoid::ball(Point::zeros(d), k.delta(&Point::zeros(d))?),
        Body::Transformed { map, body } => john_ellipsoid(body)?.mapped(map),
        Body::Polytope(p) => polytope_john(p),
    }
}

/// Parameters θ = (upper triangle of symmetric B, center c) of the
/// ellipsoid {c + B u : ‖u‖ ≤ 1}.
struct Param {
    d: usize,
    pairs: Vec<(usize, usize)>,
}

impl Param {
    fn new(d: usize) -> Self {
        let pairs = (0..d).flat_map(|a| (a..d).map(move |b| (a, b))).collect();
        Param { d, pairs }
    }

    fn len(&self) -> usize {
        self.pairs.len() + self.d
    }

    fn matrix(&self, theta: &DVector<f64>) -> DMatrix<f64> {
        let mut b = DMatrix::zeros(self.d, self.d);
        for (k, &(i, j)) in self.pairs.iter().enumerate() {
            b[(i, j)] = theta[k];
            b[(j, i)] = theta[k];
        }
        b
    }

    fn center(&self, theta: &DVector<f64>) -> Point {
        let nb = self.pairs.len();
        Point::from_fn(self.d, |i| theta[nb + i])
    }

    /// Column k of the linear map θ_B ↦ B a.
    fn basis_times(&self, k: usize, a: &Point) -> Point {
        let (i, j) = self.pairs[k];
        let mut v = Point::zeros(self.d);
        v[i] += a[j];
        if i != j {
            v[j] += a[i];
        }
        v
    }
}

/// Barrier objective t·(−log det B) − Σ log(b_i − ⟨a_i, c⟩ − ‖B a_i‖), with
/// gradient and Hessian; `None` outside the domain.
fn barrier(
    par: &Param,
    hs: &[crate::geom::Halfspace],
    theta: &DVector<f64>,
    t: f64,
    derivs: bool,
) -> Option<(f64, DVector<f64>, DMatrix<f64>)> {
    let d = par.d;
    let nb = par.pairs.len();
    let n = par.len();
    let b = par.matrix(theta);
    let chol = b.clone().cholesky()?;
    let logdet = 2.0 * chol.l().diagonal().iter().map(|x| x.ln()).sum::<f64>();
    let c = par.center(theta);
    let mut f = -t * logdet;
    let mut grad = DVector::zeros(n);
    let mut hess = DMatrix::zeros(n, n);
    let binv = if derivs { chol.inverse() } else { DMatrix::zeros(0, 0) };
    if derivs {
        let p: Vec<DMatrix<f64>> = par
            .pairs
            .iter()
            .map(|&(i, j)| {
                let mut e = DMatrix::zeros(d, d);
                e[(i, j)] = 1.0;
                e[(j, i)] = 1.0;
                &binv * e
            })
            .collect();
        for k in 0..nb {
            grad[k] -= t * p[k].trace();
            for l in k..nb {
                let v = t * (&p[k] * &p[l]).trace();
                hess[(k, l)] += v;
                if l != k {
                    hess[(l, k)] += v;
                }
            }
        }
    }
    for h in hs {
        let a = h.normal;
        let v = Point::from_fn(d, |i| (0..d).map(|j| b[(i, j)] * a[j]).sum());
        let vn = v.norm();
        let g = h.slack(&c) - vn;
        if !(g > 0.0) {
            return None;
        }
        f -= g.ln();
        if !derivs {
            continue;
        }
        let vh = if vn > 0.0 { v * (1.0 / vn) } else { Point::zeros(d) };
        // ∇g = (−Jᵀ v̂, −a); ∇²g = −Jᵀ (I − v̂v̂ᵀ)/‖v‖ J on the B block.
        let jcols: Vec<Point> = (0..nb).map(|k| par.basis_times(k, &a)).collect();
        let mut gg = DVector::zeros(n);
        for k in 0..nb {
            gg[k] = -jcols[k].dot(&vh);
        }
        for i in 0..d {
            gg[nb + i] = -a[i];
        }
        grad -= &gg * (1.0 / g);
        hess += &gg * gg.transpose() * (1.0 / (g * g));
        if vn > 0.0 {
            for k in 0..nb {
                for l in k..nb {
                    let proj = jcols[k].dot(&jcols[l]) - jcols[k].dot(&vh) * jcols[l].dot(&vh);
                    let v = proj / (vn * g);
                    hess[(k, l)] += v;
                    if l != k {
                        hess[(l, k)] += v;
                    }
                }
            }
        }
    }
    Some((f, grad, hess))
}

/// Barrier-method Newton solve over the ellipsoid map and center jointly.
fn polytope_john(p: &Polytope) -> Result<Ellipsoid> {
    let d = p.dim();
    let hs = p.facets();
    let par = Param::new(d);
    let c0 = p.centroid();
    let r0 = hs.iter().map(|h| h.slack(&c0)).fold(f64::INFINITY, f64::min);
    if !(r0 > 0.0) {
        return Err(Error::CenterNotInterior);
    }
    let mut theta = DVector::zeros(par.len());
    for (k, &(i, j)) in par.pairs.iter().enumerate() {
        if i == j {
            theta[k] = 0.5 * r0;
        }
    }
    for i in 0..d {
        theta[par.pairs.len() + i] = c0[i];
    }
    let m = hs.len() as f64;
    let mut t = 1.0;
    let mut rounds = 0;
    loop {
        // Centering by damped Newton.
        for _ in 0..60 {
            rounds += 1;
            if rounds > MAX_ROUNDS {
                return Err(Error::NotConverged("inscribed ellipsoid".into()));
            }
            let (f, g, h) = barrier(&par, hs, &theta, t, true).ok_or(Error::CenterNotInterior)?;
            let step = match h.clone().cholesky() {
                Some(ch) => -ch.solve(&g),
                None => -g.clone(),
            };
            let decrement = -g.dot(&step);
            if decrement * 0.5 <= 1e-10 {
                break;
            }
            let mut s = 1.0;
            let mut moved = false;
            while s >= 1e-12 {
                let cand = &theta + &step * s;
                if let Some((fc, _, _)) = barrier(&par, hs, &cand, t, false) {
                    if fc <= f - 0.25 * s * decrement {
                        theta = cand;
                        moved = true;
                        break;
                    }
                }
                s *= 0.5;
            }
            if !moved {
                break;
            }
        }
        if m / t < JOHN_TOL {
            break;
        }
        t *= 8.0;
    }
    let map = AffineMap::new(par.matrix(&theta), par.center(&theta))?;
    Ellipsoid::from_map(&map)
}

/// A body placed between balls of radius √γ and 1/√γ about the origin.
#[derive(Clone, Debug, Serialize)]
pub struct CanonicalForm {
    pub map: AffineMap,
    pub inverse: AffineMap,
    pub gamma: f64,
    #[serde(skip)]
    pub body: Body,
}

/// Number of directions used to confirm the sandwich radii.
const VERIFY_DIRS: usize = 2000;

/// Maps the inscribed ellipsoid to a centered ball, then rescales so that
/// the inner and outer radii are reciprocal. γ is the achieved ratio.
pub fn to_canonical(k: &Body) -> Result<CanonicalForm> {
    let d = k.dim();
    let e = john_ellipsoid(k)?;
    // Symmetric square root of the shape: no rotation is introduced.
    let semi = e.semi_axes();
    let mut root = DMatrix::zeros(d, d);
    for (j, s) in semi.iter().enumerate() {
        let v = e.axis(j);
        for a in 0..d {
            for b in 0..d {
                root[(a, b)] += v[a] * v[b] / s;
            }
        }
    }
    let shift = Point::from_fn(d, |i| -(0..d).map(|j| root[(i, j)] * e.center()[j]).sum::<f64>());
    let t1 = AffineMap::new(root, shift)?;
    let k1 = Body::transformed(&t1, k)?;
    let origin = Point::zeros(d);
    let mut r = k1.delta(&origin)?;
    let mut big_r = k1.circumradius();
    for u in sampling::sphere_directions(d, VERIFY_DIRS, 0) {
        let h = k1.support(&u).0;
        r = r.min(h);
        big_r = big_r.max(h);
    }
    if !(r > 0.0) {
        return Err(Error::CenterNotInterior);
    }
    let s = 1.0 / (r * big_r).sqrt();
    let scale = AffineMap::scaling(d, s)?;
    let map = scale.compose(&t1);
    let gamma = (r / big_r).min(1.0);
    let body = Body::transformed(&map, k)?;
    Ok(CanonicalForm { inverse: map.inverse(), map, gamma, body })
}
