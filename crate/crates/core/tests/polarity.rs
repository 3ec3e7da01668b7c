use std::f64::consts::PI;

use capcover::bodies::{to_canonical, Body, ConvexBodyOracle};
use capcover::caps::CapBody;
use capcover::geom::{self, AffineMap, Halfspace, Point, Polytope};
use capcover::polar::{
    base_sandwich, cap_product_sweep, mahler, polar_body, polar_capbody, polar_hyperplane, polar_point,
    vertex_distance, DEFAULT_C,
};
use capcover::sampling::{random_in_ball, random_unit, rng, sphere_directions};
use capcover::Error;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::RngExt;

fn cross_polytope(d: usize) -> Vec<Point> {
    (0..d).flat_map(|i| [Point::unit(d, i), -Point::unit(d, i)]).collect()
}

#[test]
fn cubes_and_cross_polytopes() {
    for d in 2..=4 {
        let cube = geom::box_polytope(&vec![1.0; d]).unwrap();
        let pair = polar_body(&cube, &Point::zeros(d)).unwrap();
        assert!(vertex_distance(pair.polar.vertices(), &cross_polytope(d)) < 1e-12);
        let fact: f64 = (1..=d).map(|i| i as f64).product();
        assert!((pair.polar.volume() - 2f64.powi(d as i32) / fact).abs() < 1e-12);
        assert!(pair.involution_error().unwrap() < 1e-12);
    }
    let sq = geom::box_polytope(&[1.0, 1.0]).unwrap();
    assert!((mahler(&sq).unwrap() - 8.0).abs() < 1e-12);
    let cube = geom::box_polytope(&[1.0, 1.0, 1.0]).unwrap();
    assert!((mahler(&cube).unwrap() - 32.0 / 3.0).abs() < 1e-12);
    // the triangle attains the planar minimum 27/4
    let tri = geom::standard_simplex(2);
    assert!((mahler(&tri).unwrap() - 6.75).abs() < 1e-12);
}

#[test]
fn polygon_mahler_tends_to_pi_squared() {
    let gon: Vec<Point> = (0..256)
        .map(|i| Point::new(&[(2.0 * PI * i as f64 / 256.0).cos(), (2.0 * PI * i as f64 / 256.0).sin()]))
        .collect();
    let m = mahler(&Polytope::hull(&gon).unwrap()).unwrap();
    assert!((m / (PI * PI) - 1.0).abs() < 0.02, "{m}");
    assert!(m <= PI * PI);
}

#[test]
fn point_hyperplane_duality() {
    let v = Point::new(&[2.0, 0.0, 0.0]);
    let h = polar_point(&v).unwrap();
    assert!((h.offset - 0.5).abs() < 1e-15 && h.normal.dist(&Point::unit(3, 0)) < 1e-15);
    assert_eq!(polar_point(&Point::zeros(3)).unwrap_err(), Error::OriginPolar);
    assert_eq!(
        polar_hyperplane(&Halfspace { normal: Point::unit(2, 0), offset: 0.0 }).unwrap_err(),
        Error::OriginPolar
    );
    let mut r = rng(1);
    for _ in 0..1000 {
        let d = 2 + (r.random::<f64>() * 4.0) as usize;
        let p = random_in_ball(&mut r, d) * 10.0;
        let back = polar_hyperplane(&polar_point(&p).unwrap()).unwrap();
        assert!(back.dist(&p) <= 1e-12 * (1.0 + p.norm()));
    }
}

#[test]
fn polar_requires_interior_center() {
    let sq = geom::box_polytope(&[1.0, 1.0]).unwrap();
    assert_eq!(polar_body(&sq, &Point::new(&[1.0, 0.0])).unwrap_err(), Error::CenterNotInterior);
    assert_eq!(polar_body(&sq, &Point::new(&[3.0, 0.0])).unwrap_err(), Error::CenterNotInterior);
}

fn random_hull(seed: u64, d: usize, n: usize) -> Polytope {
    let mut r = rng(seed);
    Polytope::hull(&(0..n).map(|_| random_in_ball(&mut r, d)).collect::<Vec<_>>()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn planar_mahler_bounds(seed in any::<u64>(), n in 3usize..40) {
        let p = random_hull(seed, 2, n);
        let m = mahler(&p).unwrap();
        prop_assert!((6.75 * (1.0 - 1e-9)..=PI * PI * (1.0 + 1e-9)).contains(&m), "{}", m);
    }

    #[test]
    fn mahler_is_affine_invariant(seed in any::<u64>(), d in 2usize..=3) {
        let p = random_hull(seed, d, 20);
        let mut r = rng(seed ^ 7);
        let m = DMatrix::from_fn(d, d, |i, j| if i == j { 1.0 } else { 0.0 } + r.random::<f64>() - 0.5);
        let t = AffineMap::new(m, random_in_ball(&mut r, d) * 3.0).unwrap();
        let a = mahler(&p).unwrap();
        let b = mahler(&geom::apply_map(&t, &p)).unwrap();
        prop_assert!((a - b).abs() <= 1e-8 * a);
    }

    #[test]
    fn polarity_reverses_inclusion(seed in any::<u64>(), d in 2usize..=3) {
        let outer = random_hull(seed, d, 30);
        let c = outer.centroid();
        let shrink = AffineMap::new(DMatrix::identity(d, d) * 0.7, c * 0.3).unwrap();
        let inner = geom::apply_map(&shrink, &outer);
        let po = polar_body(&outer, &c).unwrap().polar;
        let pi = polar_body(&inner, &c).unwrap().polar;
        prop_assert!(po.vertices().iter().all(|v| pi.contains(v, 1e-9)));
        prop_assert!((pi.volume() / po.volume() - 0.7f64.powi(-(d as i32))).abs() < 1e-8);
    }

    #[test]
    fn involution(seed in any::<u64>(), d in 2usize..=4) {
        let p = random_hull(seed, d, 25);
        let pair = polar_body(&p, &p.centroid()).unwrap();
        prop_assert!(pair.involution_error().unwrap() <= 1e-9);
    }
}

#[test]
fn canonical_polar_is_nearly_canonical() {
    // K ⊇ √γ·B implies K* ⊆ B/√γ and vice versa.
    let c = to_canonical(&Body::random_polytope(3, 30, 5).unwrap()).unwrap();
    let k = CapBody::from_polytope(c.body.as_polytope().unwrap().clone());
    let polar = polar_capbody(&k).unwrap();
    let g = c.gamma.sqrt();
    for u in sphere_directions(3, 2000, 0) {
        let h = polar.support(&u);
        assert!(h >= g - 1e-9 && h <= 1.0 / g + 1e-9, "{h}");
    }
}

fn band(k: &CapBody, eps: f64, n: usize) -> (f64, f64) {
    let polar = polar_capbody(k).unwrap();
    let v: Vec<f64> = cap_product_sweep(k, &polar, &sphere_directions(k.dim(), n, 0), eps, DEFAULT_C)
        .unwrap()
        .iter()
        .map(|p| p.normalized_product)
        .collect();
    (v.iter().copied().fold(f64::INFINITY, f64::min), v.iter().copied().fold(0.0, f64::max))
}

#[test]
fn ball_products_agree() {
    let k = CapBody::new(&Body::ball(2, 1.0).unwrap(), 0.002).unwrap();
    let (lo, hi) = band(&k, 0.01, 32);
    // polygon proxy at resolution 0.002 leaves a spread of a few 1e-3
    assert!(hi / lo - 1.0 < 1e-2, "{lo} {hi}");
}

#[test]
fn slab_and_corner_products_are_comparable() {
    let k = CapBody::new(&Body::cube(3).unwrap(), 0.01).unwrap();
    let polar = polar_capbody(&k).unwrap();
    let dirs = vec![Point::unit(3, 0), Point::from_fn(3, |_| 1.0).normalized().unwrap()];
    let p = cap_product_sweep(&k, &polar, &dirs, 0.02, DEFAULT_C).unwrap();
    for q in &p {
        assert!(q.cap_volume > 0.0 && q.polar_cap_volume > 0.0);
    }
    let ratio = p[0].normalized_product / p[1].normalized_product;
    assert!((1.0 / 50.0..=50.0).contains(&ratio), "{ratio}");
}

#[test]
fn shear_leaves_product_band_alone() {
    let base = to_canonical(&Body::random_polytope(2, 30, 4).unwrap()).unwrap();
    let shear = AffineMap::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.8, 0.0, 1.0]), Point::zeros(2)).unwrap();
    let sheared = to_canonical(&Body::transformed(&shear, &base.body).unwrap()).unwrap();
    let eps = 0.01;
    let (a_lo, a_hi) = band(&CapBody::new(&base.body, eps).unwrap(), eps, 128);
    let (b_lo, b_hi) = band(&CapBody::new(&sheared.body, eps).unwrap(), eps, 128);
    let (a, b) = (a_hi / a_lo, b_hi / b_lo);
    assert!(a.max(b) / a.min(b) <= 2.0, "{a} vs {b}");
}

#[test]
fn base_sandwich_constants() {
    for body in [Body::ball(2, 1.0).unwrap(), Body::cube(2).unwrap(), Body::ball(3, 1.0).unwrap()] {
        let d = body.dim();
        let canon = to_canonical(&body).unwrap();
        let mut per_eps = Vec::new();
        for eps in [0.04, 0.01] {
            let k = CapBody::new(&canon.body, eps).unwrap();
            let polar = polar_capbody(&k).unwrap();
            let mut worst: f64 = 0.0;
            let mut r = rng(2);
            for _ in 0..8 {
                let u = random_unit(&mut r, d);
                let (c1, c2) = base_sandwich(&k, &polar, &u, eps, DEFAULT_C).unwrap();
                assert!(c1 > 0.0 && c2 >= c1, "{c1} {c2}");
                worst = worst.max(c2 / c1);
            }
            assert!(worst <= 100.0, "{} ε={eps}: {worst}", body.kind());
            per_eps.push(worst);
        }
        assert!(per_eps[0].max(per_eps[1]) / per_eps[0].min(per_eps[1]) <= 4.0, "{per_eps:?}");
    }
}
