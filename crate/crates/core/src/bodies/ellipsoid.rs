//! Ellipsoids E = {x : (x−c)ᵀA(x−c) ≤ 1}, held as the image of the unit ball.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{AffineMap, Point, MAX_DIM};

#[derive(Clone, Debug)]
pub struct Ellipsoid {
    center: Point,
    shape: DMatrix<f64>,
    /// Unit ball → E.
    map: AffineMap,
    /// Semi-axes and their unit directions (columns of `axes_dir`).
    semi: [f64; MAX_DIM],
    axes_dir: DMatrix<f64>,
}

#[derive(Serialize, Deserialize)]
struct Repr {
    center: Vec<f64>,
    shape: Vec<Vec<f64>>,
}

impl Serialize for Ellipsoid {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let d = self.dim();
        Repr {
            center: self.center.coords().to_vec(),
            shape: (0..d).map(|i| (0..d).map(|j| self.shape[(i, j)]).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Ellipsoid {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let r = Repr::deserialize(de)?;
        let d = r.center.len();
        if d == 0 || d > MAX_DIM || r.shape.len() != d || r.shape.iter().any(|row| row.len() != d) {
            return Err(serde::de::Error::custom("ellipsoid shape must be d×d"));
        }
        let a = DMatrix::from_fn(d, d, |i, j| r.shape[i][j]);
        Ellipsoid::new(Point::new(&r.center), a).map_err(serde::de::Error::custom)
    }
}

fn eigen_sorted(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let d = m.nrows();
    let e = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
    let vals = order.iter().map(|&i| e.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(d, d, |r, c| e.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

impl Ellipsoid {
    /// From center and symmetric positive-definite shape matrix A.
    pub fn new(center: Point, shape: DMatrix<f64>) -> Result<Self> {
        let d = center.dim();
        if shape.nrows() != d || shape.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, got: shape.nrows() });
        }
        let scale = shape.amax().max(1e-300);
        if (&shape - shape.transpose()).amax() > 1e-12 * scale {
            return Err(Error::GeometryInvalid("ellipsoid shape is not symmetric".into()));
        }
        let sym = (&shape + shape.transpose()) * 0.5;
        let (vals, vecs) = eigen_sorted(sym.clone());
        if vals.iter().any(|&l| !(l > 0.0)) {
            return Err(Error::GeometryInvalid("ellipsoid shape is not positive definite".into()));
        }
        // Largest eigenvalue of A is the shortest semi-axis; store semi-axes descending.
        let mut semi = [0.0; MAX_DIM];
        let mut dir = DMatrix::zeros(d, d);
        for k in 0..d {
            semi[k] = 1.0 / vals[k].sqrt();
            dir.set_column(k, &vecs.column(k));
        }
        let b = DMatrix::from_fn(d, d, |i, j| dir[(i, j)] * semi[j]);
        let map = AffineMap::new(b, center)?;
        Ok(Ellipsoid { center, shape: sym, map, semi, axes_dir: dir })
    }

    /// Axis-aligned ellipsoid with the given semi-axes.
    pub fn axis_aligned(center: Point, semi_axes: &[f64]) -> Result<Self> {
        let d = semi_axes.len();
        if semi_axes.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
            return Err(Error::GeometryInvalid("semi-axes must be positive".into()));
        }
        let a = DMatrix::from_fn(d, d, |i, j| if i == j { 1.0 / (semi_axes[i] * semi_axes[i]) } else { 0.0 });
        Ellipsoid::new(center, a)
    }

    pub fn ball(center: Point, radius: f64) -> Result<Self> {
        Ellipsoid::axis_aligned(center, &vec![radius; center.dim()])
    }

    /// Image of the unit ball under an affine map.
    pub fn from_map(m: &AffineMap) -> Result<Self> {
        let b = m.linear();
        let bbt = &b * b.transpose();
        let inv = bbt.try_inverse().ok_or_else(|| Error::GeometryInvalid("singular ellipsoid map".into()))?;
        let sym = (&inv + inv.transpose()) * 0.5;
        Ellipsoid::new(m.translation(), sym)
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn shape(&self) -> &DMatrix<f64> {
        &self.shape
    }

    /// Map sending the unit ball onto E.
    pub fn ball_map(&self) -> &AffineMap {
        &self.map
    }

    /// Semi-axis lengths, descending.
    pub fn semi_axes(&self) -> &[f64] {
        &self.semi[..self.dim()]
    }

    /// Unit direction of the k-th semi-axis.
    pub fn axis(&self, k: usize) -> Point {
        Point::from_fn(self.dim(), |i| self.axes_dir[(i, k)])
    }

    /// Minkowski gauge about the center (≤ 1 inside).
    pub fn gauge(&self, x: &Point) -> f64 {
        self.map.apply_inverse(x).norm()
    }

    pub fn support(&self, u: &Point) -> (f64, Point) {
        let v = self.map.transpose_linear(u);
        let n = v.norm();
        if n == 0.0 {
            return (u.dot(&self.center), self.center);
        }
        let p = self.map.apply(&(v * (1.0 / n)));
        (u.dot(&self.center) + n, p)
    }

    pub fn volume(&self) -> f64 {
        unit_ball_volume(self.dim()) * self.map.det().abs()
    }

    /// Image under an affine map.
    pub fn mapped(&self, t: &AffineMap) -> Result<Self> {
        Ellipsoid::from_map(&t.compose(&self.map))
    }

    /// Scaled copy about the center.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        Ellipsoid::new(self.center, &self.shape * (1.0 / (s * s)))
    }

    /// Nearest boundary point to x (inside or outside).
    pub fn nearest_boundary_point(&self, x: &Point) -> Point {
        let d = self.dim();
        let rel = *x - self.center;
        let y: Vec<f64> = (0..d).map(|k| self.axis(k).dot(&rel)).collect();
        let z = nearest_on_axes(self.semi_axes(), &y);
        let mut p = self.center;
        for k in 0..d {
            p += self.axis(k) * z[k];
        }
        p
    }
}

/// Nearest point of the boundary {Σ (z_i/e_i)² = 1} to y, in the axis frame.
/// The semi-axes e are sorted descending.
fn nearest_on_axes(e: &[f64], y: &[f64]) -> Vec<f64> {
    let d = e.len();
    let sgn: Vec<f64> = y.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect();
    let a: Vec<f64> = y.iter().map(|v| v.abs()).collect();
    let g: f64 = (0..d).map(|i| (a[i] / e[i]).powi(2)).sum();
    if g == 0.0 {
        // The center: closest boundary point lies on the shortest axis.
        let mut z = vec![0.0; d];
        z[d - 1] = e[d - 1];
        return z;
    }
    let f = |t: f64| -> f64 {
        (0..d)
            .map(|i| {
                let den = (t + e[i] * e[i]).max(f64::MIN_POSITIVE);
                (e[i] * a[i] / den).powi(2)
            })
            .sum::<f64>()
            - 1.0
    };
    let emin2 = e[d - 1] * e[d - 1];
    let (mut lo, mut hi) = if g > 1.0 {
        let ymax = a.iter().cloned().fold(0.0, f64::max);
        (0.0, e[0] * ymax * (d as f64).sqrt())
    } else {
        (-emin2, 0.0)
    };
    if g <= 1.0 {
        // Degenerate interior case: no root above −e_min² when the point lies
        // in the plane of the shortest axes.
        let t = -emin2;
        let short: Vec<usize> = (0..d).filter(|&i| e[i] * e[i] - emin2 <= 1e-14 * emin2).collect();
        if short.iter().all(|&i| a[i] <= 1e-300) {
            let mut z = vec![0.0; d];
            let mut used = 0.0;
            for i in 0..d {
                if !short.contains(&i) {
                    z[i] = e[i] * e[i] * a[i] / (e[i] * e[i] + t);
                    used += (z[i] / e[i]).powi(2);
                }
            }
            if used < 1.0 {
                z[short[0]] = e[short[0]] * (1.0 - used).sqrt();
                return z.iter().zip(&sgn).map(|(v, s)| v * s).collect();
            }
        }
    }
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    (0..d)
        .map(|i| {
            let den = t + e[i] * e[i];
            let z = if den > 0.0 { e[i] * e[i] * a[i] / den } else { 0.0 };
            z * sgn[i]
        })
        .collect()
}

/// Volume of the unit d-ball.
pub fn unit_ball_volume(d: usize) -> f64 {
    use std::f64::consts::PI;
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(d - 2) * 2.0 * PI / d as f64,
    }
}
