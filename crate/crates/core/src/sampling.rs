//! Deterministic direction sets and seeded random sources.

use nalgebra::DMatrix;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::geom::Point;

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniformly random unit vector.
pub fn random_unit(rng: &mut Rng, d: usize) -> Point {
    loop {
        let p = Point::from_fn(d, |_| rng.sample::<f64, _>(StandardNormal));
        if let Some(u) = p.normalized() {
            return u;
        }
    }
}

/// Uniform point in the unit ball.
pub fn random_in_ball(rng: &mut Rng, d: usize) -> Point {
    let u = random_unit(rng, d);
    let r: f64 = rng.random::<f64>().powf(1.0 / d as f64);
    u * r
}

/// Random rotation (orthogonal, det +1) from the QR factorization of a Gaussian matrix.
pub fn random_rotation(rng: &mut Rng, d: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(d, d, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        if r[(j, j)] < 0.0 {
            for i in 0..d {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    if q.determinant() < 0.0 {
        for i in 0..d {
            q[(i, 0)] = -q[(i, 0)];
        }
    }
    q
}

/// Base quasi-uniform directions (unrotated).
fn lattice(d: usize, n: usize) -> Vec<Point> {
    match d {
        2 => (0..n)
            .map(|i| {
                let a = std::f64::consts::TAU * (i as f64 + 0.5) / n as f64;
                Point::new(&[a.cos(), a.sin()])
            })
            .collect(),
        3 => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..n)
                .map(|i| {
                    let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let phi = golden * i as f64;
                    Point::new(&[r * phi.cos(), r * phi.sin(), z])
                })
                .collect()
        }
        _ => {
            // Kronecker sequence with the generalized golden ratio, pushed
            // through the normal quantile and projected to the sphere.
            let mut phi = 2.0f64;
            for _ in 0..64 {
                phi = (1.0 + phi).powf(1.0 / (d as f64 + 1.0));
            }
            let alpha: Vec<f64> = (1..=d).map(|k| (1.0 / phi.powi(k as i32)).fract()).collect();
            let normal = Normal::standard();
            (0..n)
                .map(|i| {
                    let p = Point::from_fn(d, |k| {
                        let t = (0.5 + alpha[k] * (i as f64 + 1.0)).fract();
                        normal.inverse_cdf(t.clamp(1e-12, 1.0 - 1e-12))
                    });
                    p.normalized().unwrap_or_else(|| Point::unit(d, 0))
                })
                .collect()
        }
    }
}

/// `n` quasi-uniform unit vectors in R^d, rotated by a seed-derived rotation
/// (seed 0 leaves the lattice unrotated).
pub fn sphere_directions(d: usize, n: usize, seed: u64) -> Vec<Point> {
    let base = lattice(d, n);
    if seed == 0 {
        return base;
    }
    let mut r = rng(seed ^ 0x5eed_d1ec_7105);
    let q = random_rotation(&mut r, d);
    base.iter()
        .map(|u| Point::from_fn(d, |i| (0..d).map(|j| q[(i, j)] * u[j]).sum::<f64>()).normalized().unwrap())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directions_are_unit_and_spread() {
        for d in 2..=5 {
            let dirs = sphere_directions(d, 2000, 7);
            assert!(dirs.iter().all(|u| (u.norm() - 1.0).abs() < 1e-12));
            let mean = Point::centroid(&dirs);
            assert!(mean.norm() < 0.05, "d={d} mean {mean:?}");
            // Every coordinate axis is approached.
            for i in 0..d {
                let e = Point::unit(d, i);
                let best = dirs.iter().map(|u| u.dot(&e)).fold(f64::MIN, f64::max);
                assert!(best > 0.8, "d={d} axis {i}: {best}");
            }
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(sphere_directions(3, 10, 5), sphere_directions(3, 10, 5));
        let mut a = rng(1);
        let mut b = rng(1);
        assert_eq!(random_unit(&mut a, 4), random_unit(&mut b, 4));
    }
}
