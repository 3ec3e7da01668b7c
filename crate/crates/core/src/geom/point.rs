//! Fixed-capacity points and vectors in dimension at most [`MAX_DIM`].

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 5;

/// A point (or vector) in R^d, 1 ≤ d ≤ [`MAX_DIM`], stored inline.
#[derive(Clone, Copy, PartialEq)]
pub struct Point {
    c: [f64; MAX_DIM],
    dim: u8,
}

impl Point {
    /// Builds a point from a coordinate slice.
    ///
    /// # Panics
    /// Panics if the slice is empty or longer than [`MAX_DIM`].
    pub fn new(coords: &[f64]) -> Self {
        assert!(
            !coords.is_empty() && coords.len() <= MAX_DIM,
            "point dimension {} outside 1..={MAX_DIM}",
            coords.len()
        );
        let mut c = [0.0; MAX_DIM];
        c[..coords.len()].copy_from_slice(coords);
        Point { c, dim: coords.len() as u8 }
    }

    pub fn zeros(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim));
        Point { c: [0.0; MAX_DIM], dim: dim as u8 }
    }

    /// The i-th standard basis vector.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut p = Self::zeros(dim);
        p.c[i] = 1.0;
        p
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize) -> f64) -> Self {
        let mut p = Self::zeros(dim);
        for i in 0..dim {
            p.c[i] = f(i);
        }
        p
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.c[..self.dim as usize]
    }

    #[inline]
    pub fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.c[..self.dim as usize]
    }

    #[inline]
    pub fn dot(&self, o: &Point) -> f64 {
        debug_assert_eq!(self.dim, o.dim);
        let mut s = 0.0;
        for i in 0..self.dim as usize {
            s += self.c[i] * o.c[i];
        }
        s
    }

    #[inline]
    pub fn norm2(&self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm2().sqrt()
    }

    #[inline]
    pub fn dist(&self, o: &Point) -> f64 {
        (*self - *o).norm()
    }

    /// Unit vector in the same direction; `None` for (near) zero vectors.
    pub fn normalized(&self) -> Option<Point> {
        let n = self.norm();
        (n > 1e-300 && n.is_finite()).then(|| *self * (1.0 / n))
    }

    pub fn is_finite(&self) -> bool {
        self.coords().iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.coords().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Lexicographic comparison of coordinates.
    pub fn lex_cmp(&self, o: &Point) -> std::cmp::Ordering {
        for i in 0..self.dim() {
            match self.c[i].total_cmp(&o.c[i]) {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        std::cmp::Ordering::Equal
    }

    /// Drops the last coordinate.
    pub fn truncate(&self) -> Point {
        Point::new(&self.c[..self.dim() - 1])
    }

    /// Appends a coordinate.
    pub fn extend(&self, v: f64) -> Point {
        let mut p = *self;
        p.c[self.dim()] = v;
        p.dim += 1;
        p
    }

    pub fn lerp(&self, o: &Point, t: f64) -> Point {
        *self + (*o - *self) * t
    }

    pub fn centroid(points: &[Point]) -> Point {
        let mut s = Point::zeros(points[0].dim());
        for p in points {
            s += *p;
        }
        s * (1.0 / points.len() as f64)
    }
}

impl Index<usize> for Point {
    type Output = f64;
    #[inline]
    fn index(&self, i: usize) -> &f64 {
        debug_assert!(i < self.dim as usize);
        &self.c[i]
    }
}

impl IndexMut<usize> for Point {
    #[inline]
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        debug_assert!(i < self.dim as usize);
        &mut self.c[i]
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $op:tt) => {
        impl $tr for Point {
            type Output = Point;
            #[inline]
            fn $f(self, o: Point) -> Point {
                debug_assert_eq!(self.dim, o.dim);
                let mut r = self;
                for i in 0..MAX_DIM {
                    r.c[i] = self.c[i] $op o.c[i];
                }
                r
            }
        }
    };
}
binop!(Add, add, +);
binop!(Sub, sub, -);

impl AddAssign for Point {
    #[inline]
    fn add_assign(&mut self, o: Point) {
        *self = *self + o;
    }
}

impl SubAssign for Point {
    #[inline]
    fn sub_assign(&mut self, o: Point) {
        *self = *self - o;
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    #[inline]
    fn mul(self, s: f64) -> Point {
        let mut r = self;
        for v in r.c.iter_mut() {
            *v *= s;
        }
        r
    }
}

impl Neg for Point {
    type Output = Point;
    #[inline]
    fn neg(self) -> Point {
        self * -1.0
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coords()).finish()
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coords().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        if v.is_empty() || v.len() > MAX_DIM {
            return Err(serde::de::Error::custom(format!(
                "point must have 1..={MAX_DIM} coordinates, got {}",
                v.len()
            )));
        }
        Ok(Point::new(&v))
    }
}
