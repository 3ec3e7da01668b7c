//! Orientation and affine-rank predicates with an exact rational fallback.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::linalg;
use super::point::Point;

/// Relative determinant magnitude below which the exact path is taken.
pub const EXACT_THRESHOLD: f64 = 1e-10;

fn to_rational(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite coordinate")
}

/// Exact determinant sign of a square matrix of rationals (fraction-based elimination).
fn exact_rank_and_sign(mut m: Vec<Vec<BigRational>>) -> (usize, i8) {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut rank = 0;
    let mut sign: i8 = 1;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        if piv != rank {
            m.swap(piv, rank);
            sign = -sign;
        }
        if m[rank][col].is_negative() {
            sign = -sign;
        }
        for r in rank + 1..rows {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &m[rank][col];
            for c in col..cols {
                let t = &f * &m[rank][c];
                m[r][c] -= t;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    (rank, sign)
}

/// Sign of det[p_1 − p_0, …, p_d − p_0] for d+1 points in R^d.
///
/// Floating evaluation first; when the magnitude falls below
/// [`EXACT_THRESHOLD`] times the product of edge lengths the sign is
/// recomputed exactly.
pub fn orientation(pts: &[Point]) -> i8 {
    let d = pts[0].dim();
    assert_eq!(pts.len(), d + 1);
    let edges: Vec<Point> = pts[1..].iter().map(|p| *p - pts[0]).collect();
    let det = linalg::det(&edges);
    let scale: f64 = edges.iter().map(|e| e.norm().max(1e-300)).product();
    if det.abs() > EXACT_THRESHOLD * scale {
        return if det > 0.0 { 1 } else { -1 };
    }
    exact_orientation(pts)
}

/// Exact orientation sign; 0 for affinely dependent input.
pub fn exact_orientation(pts: &[Point]) -> i8 {
    let m: Vec<Vec<BigRational>> =
        pts[1..].iter().map(|p| (0..p.dim()).map(|i| to_rational(p[i]) - to_rational(pts[0][i])).collect()).collect();
    let (rank, sign) = exact_rank_and_sign(m);
    if rank < pts.len() - 1 {
        0
    } else {
        sign
    }
}

/// Exact affine rank (dimension of the affine hull) of a point set.
pub fn exact_affine_rank(pts: &[Point]) -> usize {
    if pts.len() <= 1 {
        return 0;
    }
    let m: Vec<Vec<BigRational>> =
        pts[1..].iter().map(|p| (0..p.dim()).map(|i| to_rational(p[i]) - to_rational(pts[0][i])).collect()).collect();
    exact_rank_and_sign(m).0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_signs() {
        let a = Point::new(&[0.0, 0.0]);
        let b = Point::new(&[1.0, 0.0]);
        let c = Point::new(&[0.0, 1.0]);
        assert_eq!(orientation(&[a, b, c]), 1);
        assert_eq!(orientation(&[a, c, b]), -1);
        assert_eq!(orientation(&[a, b, Point::new(&[2.0, 0.0])]), 0);
    }

    #[test]
    fn near_degenerate_uses_exact() {
        // c is off the line by one ulp-scale amount: float det is tiny but nonzero exactly.
        let a = Point::new(&[0.1, 0.1]);
        let b = Point::new(&[0.3, 0.3]);
        let c = Point::new(&[0.7, 0.7 + 1e-15]);
        assert_eq!(orientation(&[a, b, c]), 1);
        assert_eq!(exact_affine_rank(&[a, b, c]), 2);
        let e = Point::new(&[0.5, 0.5]);
        assert_eq!(exact_affine_rank(&[Point::new(&[0.0, 0.0]), e, e * 2.0]), 1);
    }
}
