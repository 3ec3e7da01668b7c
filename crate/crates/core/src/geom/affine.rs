//! Invertible affine maps x ↦ A x + t with a cached inverse.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::point::{Point, MAX_DIM};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
struct Mat {
    dim: usize,
    a: [[f64; MAX_DIM]; MAX_DIM],
}

impl Mat {
    fn from_dmatrix(m: &DMatrix<f64>) -> Mat {
        let dim = m.nrows();
        let mut a = [[0.0; MAX_DIM]; MAX_DIM];
        for (i, row) in a.iter_mut().enumerate().take(dim) {
            for (j, v) in row.iter_mut().enumerate().take(dim) {
                *v = m[(i, j)];
            }
        }
        Mat { dim, a }
    }

    fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.a[i][j])
    }

    #[inline]
    fn mul(&self, x: &Point) -> Point {
        Point::from_fn(self.dim, |i| (0..self.dim).map(|j| self.a[i][j] * x[j]).sum())
    }

    #[inline]
    fn mul_t(&self, x: &Point) -> Point {
        Point::from_fn(self.dim, |i| (0..self.dim).map(|j| self.a[j][i] * x[j]).sum())
    }
}

/// Affine map x ↦ A x + t, nonsingular, with its inverse precomputed.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap {
    lin: Mat,
    inv: Mat,
    translation: Point,
    det: f64,
}

#[derive(Serialize, Deserialize)]
struct AffineRepr {
    linear: Vec<Vec<f64>>,
    translation: Vec<f64>,
}

impl Serialize for AffineMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AffineRepr {
            linear: (0..self.dim()).map(|i| self.lin.a[i][..self.dim()].to_vec()).collect(),
            translation: self.translation.coords().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AffineMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = AffineRepr::deserialize(d)?;
        let n = r.linear.len();
        if n == 0 || n > MAX_DIM || r.linear.iter().any(|row| row.len() != n) || r.translation.len() != n {
            return Err(serde::de::Error::custom("affine map must be square d×d with a length-d translation"));
        }
        let m = DMatrix::from_fn(n, n, |i, j| r.linear[i][j]);
        AffineMap::new(m, Point::new(&r.translation)).map_err(serde::de::Error::custom)
    }
}

impl AffineMap {
    /// Builds the map; fails if |det A| ≤ 1e−12.
    pub fn new(linear: DMatrix<f64>, translation: Point) -> Result<Self> {
        let d = linear.nrows();
        if linear.ncols() != d || translation.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, got: translation.dim() });
        }
        let det = linear.determinant();
        if !det.is_finite() || det.abs() <= 1e-12 {
            return Err(Error::DegenerateInput(format!("affine map is singular (det = {det:e})")));
        }
        let inv = linear
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::DegenerateInput("affine map is not invertible".into()))?;
        Ok(AffineMap { lin: Mat::from_dmatrix(&linear), inv: Mat::from_dmatrix(&inv), translation, det })
    }

    pub fn identity(d: usize) -> Self {
        Self::new(DMatrix::identity(d, d), Point::zeros(d)).unwrap()
    }

    pub fn scaling(d: usize, s: f64) -> Result<Self> {
        Self::new(DMatrix::identity(d, d) * s, Point::zeros(d))
    }

    pub fn translation_by(t: Point) -> Self {
        Self::new(DMatrix::identity(t.dim(), t.dim()), t).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.lin.dim
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn linear(&self) -> DMatrix<f64> {
        self.lin.to_dmatrix()
    }

    pub fn translation(&self) -> Point {
        self.translation
    }

    #[inline]
    pub fn apply(&self, x: &Point) -> Point {
        self.lin.mul(x) + self.translation
    }

    /// Applies only the linear part.
    #[inline]
    pub fn apply_linear(&self, v: &Point) -> Point {
        self.lin.mul(v)
    }

    #[inline]
    pub fn apply_inverse(&self, y: &Point) -> Point {
        self.inv.mul(&(*y - self.translation))
    }

    /// A⁻ᵀ v, the rule for transforming facet normals.
    #[inline]
    pub fn inverse_transpose(&self, v: &Point) -> Point {
        self.inv.mul_t(v)
    }

    /// Aᵀ v.
    #[inline]
    pub fn transpose_linear(&self, v: &Point) -> Point {
        self.lin.mul_t(v)
    }

    pub fn inverse(&self) -> AffineMap {
        AffineMap {
            lin: self.inv.clone(),
            inv: self.lin.clone(),
            translation: -self.inv.mul(&self.translation),
            det: 1.0 / self.det,
        }
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let lin = self.lin.to_dmatrix() * other.lin.to_dmatrix();
        let t = self.apply(&other.translation);
        AffineMap::new(lin, t).expect("composition of nonsingular maps")
    }

    /// Spectral norm of the linear part.
    pub fn linear_norm(&self) -> f64 {
        self.lin.to_dmatrix().singular_values().max()
    }

    /// Spectral norm of the inverse linear part.
    pub fn inverse_norm(&self) -> f64 {
        self.inv.to_dmatrix().singular_values().max()
    }
}
