//! Minimum-norm point of a convex hull (Wolfe's algorithm).

use nalgebra::{DMatrix, DVector};

use super::point::Point;
use super::polytope::Polytope;

/// Nearest point of conv(points) to the origin, with its barycentric support.
fn min_norm_point(q: &[Point]) -> Point {
    let d = q[0].dim();
    let scale = q.iter().map(|p| p.norm2()).fold(0.0, f64::max).max(1e-300);
    let first = (0..q.len()).min_by(|&a, &b| q[a].norm2().total_cmp(&q[b].norm2())).unwrap();
    let mut set: Vec<usize> = vec![first];
    let mut mu: Vec<f64> = vec![1.0];
    let mut w = q[first];
    for _major in 0..1000 {
        let j = (0..q.len()).min_by(|&a, &b| w.dot(&q[a]).total_cmp(&w.dot(&q[b]))).unwrap();
        if w.norm2() - w.dot(&q[j]) <= 1e-14 * scale || set.contains(&j) || set.len() > d {
            break;
        }
        set.push(j);
        mu.push(0.0);
        loop {
            let lambda = affine_minimizer(q, &set);
            if lambda.iter().all(|&l| l > 1e-15) {
                mu = lambda;
                w = combine(q, &set, &mu);
                break;
            }
            let mut theta = 1.0f64;
            for (m, l) in mu.iter().zip(&lambda) {
                if *l <= 1e-15 && m - l > 0.0 {
                    theta = theta.min(m / (m - l));
                }
            }
            for (m, l) in mu.iter_mut().zip(&lambda) {
                *m = theta * l + (1.0 - theta) * *m;
            }
            let mut k = 0;
            while k < set.len() {
                if mu[k] <= 1e-15 {
                    set.remove(k);
                    mu.remove(k);
                } else {
                    k += 1;
                }
            }
            let s: f64 = mu.iter().sum();
            mu.iter_mut().for_each(|m| *m /= s);
            w = combine(q, &set, &mu);
            if set.len() <= 1 {
                break;
            }
        }
    }
    w
}

fn combine(q: &[Point], set: &[usize], mu: &[f64]) -> Point {
    let mut w = Point::zeros(q[0].dim());
    for (&i, &m) in set.iter().zip(mu) {
        w += q[i] * m;
    }
    w
}

/// Weights minimizing ‖Σλ_i q_i‖ subject to Σλ_i = 1.
fn affine_minimizer(q: &[Point], set: &[usize]) -> Vec<f64> {
    let k = set.len();
    let mut m = DMatrix::zeros(k + 1, k + 1);
    for a in 0..k {
        for b in 0..k {
            m[(a, b)] = q[set[a]].dot(&q[set[b]]);
        }
        m[(a, k)] = 1.0;
        m[(k, a)] = 1.0;
    }
    let mut rhs = DVector::zeros(k + 1);
    rhs[k] = 1.0;
    match m.clone().lu().solve(&rhs) {
        Some(s) => (0..k).map(|i| s[i]).collect(),
        None => {
            let s = m.pseudo_inverse(1e-14).map(|p| p * rhs).unwrap();
            (0..k).map(|i| s[i]).collect()
        }
    }
}

/// Nearest point of the polytope to x.
pub fn nearest_point(p: &Polytope, x: &Point) -> Point {
    if p.contains(x, 0.0) {
        return *x;
    }
    let q: Vec<Point> = p.vertices().iter().map(|v| *v - *x).collect();
    min_norm_point(&q) + *x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_projection() {
        let sq = crate::geom::box_polytope(&[1.0, 1.0]).unwrap();
        let p = nearest_point(&sq, &Point::new(&[3.0, 0.5]));
        assert!(p.dist(&Point::new(&[1.0, 0.5])) < 1e-12);
        let c = nearest_point(&sq, &Point::new(&[3.0, 4.0]));
        assert!(c.dist(&Point::new(&[1.0, 1.0])) < 1e-12);
        let cube = crate::geom::box_polytope(&[1.0, 1.0, 1.0]).unwrap();
        let f = nearest_point(&cube, &Point::new(&[0.2, -0.3, 5.0]));
        assert!(f.dist(&Point::new(&[0.2, -0.3, 1.0])) < 1e-12);
    }
}
