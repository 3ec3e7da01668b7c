//! Small dense linear algebra on inline points; larger work goes through nalgebra.

use nalgebra::{DMatrix, DVector};

use super::point::{Point, MAX_DIM};

type Mat = [[f64; MAX_DIM]; MAX_DIM];

/// Determinant of the square matrix whose rows are `rows` (len = dim).
pub fn det(rows: &[Point]) -> f64 {
    let n = rows.len();
    if n == 0 {
        return 1.0;
    }
    let mut m: Mat = [[0.0; MAX_DIM]; MAX_DIM];
    for (i, r) in rows.iter().enumerate() {
        debug_assert_eq!(r.dim(), n);
        m[i][..n].copy_from_slice(r.coords());
    }
    det_in_place(&mut m, n)
}

fn det_in_place(m: &mut Mat, n: usize) -> f64 {
    let mut d = 1.0;
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if m[r][col].abs() > m[piv][col].abs() {
                piv = r;
            }
        }
        if m[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            m.swap(piv, col);
            d = -d;
        }
        let p = m[col][col];
        d *= p;
        for r in col + 1..n {
            let f = m[r][col] / p;
            if f != 0.0 {
                for c in col..n {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    d
}

/// Solves `A x = b` for a d×d system given by rows; `None` if singular.
pub fn solve(rows: &[Point], b: &Point) -> Option<Point> {
    let n = rows.len();
    let mut m: Mat = [[0.0; MAX_DIM]; MAX_DIM];
    let mut rhs = [0.0; MAX_DIM];
    for (i, r) in rows.iter().enumerate() {
        m[i][..n].copy_from_slice(r.coords());
        rhs[i] = b[i];
    }
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if m[r][col].abs() > m[piv][col].abs() {
                piv = r;
            }
        }
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(piv, col);
        rhs.swap(piv, col);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..n {
                m[r][c] -= f * m[col][c];
            }
            rhs[r] -= f * rhs[col];
        }
    }
    let mut x = Point::zeros(n);
    for i in (0..n).rev() {
        let mut s = rhs[i];
        for c in i + 1..n {
            s -= m[i][c] * x[c];
        }
        x[i] = s / m[i][i];
    }
    x.is_finite().then_some(x)
}

/// Unnormalized normal of the hyperplane through `pts` (exactly `dim` points),
/// computed as the generalized cross product of the edge vectors from `pts[0]`.
pub fn hyperplane_normal(pts: &[Point]) -> Point {
    let d = pts[0].dim();
    debug_assert_eq!(pts.len(), d);
    if d == 1 {
        return Point::new(&[1.0]);
    }
    let edges: Vec<Point> = pts[1..].iter().map(|p| *p - pts[0]).collect();
    let mut n = Point::zeros(d);
    let mut minor = vec![Point::zeros(d - 1); d - 1];
    for k in 0..d {
        for (r, e) in edges.iter().enumerate() {
            let mut j = 0;
            for c in 0..d {
                if c != k {
                    minor[r][j] = e[c];
                    j += 1;
                }
            }
        }
        let sign = if (k + d - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
        n[k] = sign * det(&minor);
    }
    n
}

/// Orthonormal frame whose last axis is a given unit vector (Householder reflection).
#[derive(Clone, Copy, Debug)]
pub struct Frame {
    v: Point,
    vv: f64,
    flip: bool,
}

impl Frame {
    /// Frame mapping `u` (unit) to the last basis vector e_d.
    pub fn vertical(u: &Point) -> Frame {
        let d = u.dim();
        let e = Point::unit(d, d - 1);
        // Reflect through the bisector; pick the sign that avoids cancellation.
        let v = if u[d - 1] > 0.0 { *u - e } else { *u + e };
        // For the second choice the reflection sends u to −e; flip the last axis after it.
        Frame { v, vv: v.norm2(), flip: u[d - 1] <= 0.0 }
    }

    /// Coordinates of `x` in the frame (last coordinate = ⟨u, x⟩).
    pub fn to_local(&self, x: &Point) -> Point {
        let mut y = self.reflect(x);
        if self.flip {
            let d = y.dim();
            y[d - 1] = -y[d - 1];
        }
        y
    }

    /// Inverse of [`Frame::to_local`].
    pub fn to_world(&self, y: &Point) -> Point {
        let mut y = *y;
        if self.flip {
            let d = y.dim();
            y[d - 1] = -y[d - 1];
        }
        self.reflect(&y)
    }

    fn reflect(&self, x: &Point) -> Point {
        if self.vv < 1e-30 {
            return *x;
        }
        *x - self.v * (2.0 * self.v.dot(x) / self.vv)
    }
}

/// Numerical rank of a set of vectors by modified Gram–Schmidt with relative tolerance.
pub fn rank(vectors: &[Point], tol: f64) -> usize {
    let mut basis: Vec<Point> = Vec::new();
    for v in vectors {
        let scale = v.norm();
        if scale == 0.0 {
            continue;
        }
        let mut r = *v;
        for b in &basis {
            r -= *b * b.dot(&r);
        }
        for b in &basis {
            r -= *b * b.dot(&r);
        }
        let n = r.norm();
        if n > tol * scale {
            basis.push(r * (1.0 / n));
            if basis.len() == v.dim() {
                break;
            }
        }
    }
    basis.len()
}

/// Orthonormal basis of the orthogonal complement of `u` (unit), d−1 vectors.
pub fn complement_basis(u: &Point) -> Vec<Point> {
    let f = Frame::vertical(u);
    let d = u.dim();
    (0..d - 1).map(|i| f.to_world(&Point::unit(d, i))).collect()
}

pub fn to_dmatrix(rows: &[Point]) -> DMatrix<f64> {
    let n = rows.len();
    let m = rows[0].dim();
    DMatrix::from_fn(n, m, |i, j| rows[i][j])
}

pub fn to_dvector(p: &Point) -> DVector<f64> {
    DVector::from_column_slice(p.coords())
}

pub fn from_dvector(v: &DVector<f64>) -> Point {
    Point::new(v.as_slice())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_solve() {
        let rows = [Point::new(&[2.0, 1.0]), Point::new(&[1.0, 3.0])];
        assert!((det(&rows) - 5.0).abs() < 1e-12);
        let x = solve(&rows, &Point::new(&[3.0, 4.0])).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
        let sing = [Point::new(&[1.0, 2.0]), Point::new(&[2.0, 4.0])];
        assert_eq!(det(&sing), 0.0);
    }

    #[test]
    fn normal_is_orthogonal() {
        let pts = [Point::new(&[1.0, 0.0, 0.0]), Point::new(&[0.0, 1.0, 0.0]), Point::new(&[0.0, 0.0, 1.0])];
        let n = hyperplane_normal(&pts);
        for p in &pts[1..] {
            assert!(n.dot(&(*p - pts[0])).abs() < 1e-12);
        }
        assert!((n[0] - n[1]).abs() < 1e-12 && (n[1] - n[2]).abs() < 1e-12);
    }

    #[test]
    fn frame_maps_to_vertical() {
        for u in [
            Point::new(&[0.6, 0.8]),
            Point::new(&[0.0, -1.0]),
            Point::new(&[0.0, 0.0, 1.0]),
            Point::new(&[0.48, -0.6, -0.64]),
        ] {
            let f = Frame::vertical(&u);
            let y = f.to_local(&u);
            let d = u.dim();
            assert!((y[d - 1] - 1.0).abs() < 1e-12, "{y:?}");
            let x = Point::from_fn(d, |i| i as f64 + 0.5);
            assert!((f.to_local(&x)[d - 1] - u.dot(&x)).abs() < 1e-12);
            assert!(f.to_world(&f.to_local(&x)).dist(&x) < 1e-12);
        }
    }

    #[test]
    fn rank_counts_independent() {
        let v = [Point::new(&[1.0, 0.0, 0.0]), Point::new(&[2.0, 0.0, 0.0]), Point::new(&[0.0, 1.0, 0.0])];
        assert_eq!(rank(&v, 1e-9), 2);
    }
}
