use capcover::bodies::{john_ellipsoid, to_canonical, Body, BodySpec, ConvexBodyOracle};
use capcover::geom::{AffineMap, Point, Polytope};
use capcover::sampling::{random_in_ball, random_unit, rng, sphere_directions};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::RngExt;

fn families(d: usize) -> Vec<Body> {
    let axes = [2.0, 1.0, 0.5, 0.7, 1.3];
    let tilt = DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            1.0
        } else if i < j {
            0.4
        } else {
            0.0
        }
    });
    let lp = Body::lp_ball(d, 4.0, 1.0).unwrap();
    vec![
        Body::ball(d, 1.5).unwrap(),
        Body::ellipsoid(&axes[..d]).unwrap(),
        Body::boxed(&axes[..d]).unwrap(),
        lp.clone(),
        Body::random_polytope(d, 25, 2).unwrap(),
        Body::transformed(&AffineMap::new(tilt, Point::zeros(d)).unwrap(), &lp).unwrap(),
    ]
}

#[test]
fn support_points_are_on_the_body() {
    for d in 2..=3 {
        for k in families(d) {
            for u in sphere_directions(d, 1000, 1) {
                let (h, p) = k.support(&u);
                assert!(k.contains_tol(&p, 1e-9), "{} support point outside", k.kind());
                assert!((u.dot(&p) - h).abs() <= 1e-9 * (1.0 + h.abs()), "{}", k.kind());
            }
        }
    }
}

#[test]
fn delta_examples() {
    let eps = 0.03;
    assert_eq!(Body::ball(3, 1.0).unwrap().delta(&Point::zeros(3)).unwrap(), 1.0);
    let x = Point::new(&[1.0 - eps, 0.0, 0.0]);
    assert!((Body::cube(3).unwrap().delta(&x).unwrap() - eps).abs() < 1e-15);
    assert!((Body::ball(3, 1.0).unwrap().ray_distance(&x).unwrap() - eps).abs() < 1e-12);
    let sq = Body::cube(2).unwrap();
    let r = sq.ray_distance(&Point::new(&[0.5, 0.5])).unwrap();
    assert!((r - 0.5f64.sqrt()).abs() < 1e-9);
}

#[test]
fn delta_matches_boundary_sampling() {
    // Boundary points by shooting rays from the origin through the facets.
    let k = Body::random_polytope(2, 30, 8).unwrap();
    let p = k.as_polytope().unwrap();
    let boundary: Vec<Point> = sphere_directions(2, 10_000, 4)
        .into_iter()
        .map(|u| {
            let t = p
                .facets()
                .iter()
                .filter(|f| f.normal.dot(&u) > 0.0)
                .map(|f| f.offset / f.normal.dot(&u))
                .fold(f64::INFINITY, f64::min);
            u * t
        })
        .collect();
    let mut r = rng(2);
    for _ in 0..50 {
        let x = random_in_ball(&mut r, 2) * 0.5;
        let brute = boundary.iter().map(|b| b.dist(&x)).fold(f64::INFINITY, f64::min);
        let delta = k.delta(&x).unwrap();
        assert!((brute - delta).abs() <= 1e-3, "{brute} vs {delta}");
    }
}

#[test]
fn depth_points() {
    let b = Body::ball(3, 1.0).unwrap();
    let x = b.point_at_depth(&Point::unit(3, 0), 0.1).unwrap();
    assert!(x.dist(&Point::new(&[0.9, 0.0, 0.0])) < 1e-12);
    let sq = Body::cube(2).unwrap();
    let x = sq.point_at_depth(&Point::new(&[1.0, 1.0]), 0.1).unwrap();
    assert!(x.dist(&Point::new(&[0.9, 0.9])) < 1e-12);
    for k in families(3) {
        let mut r = rng(6);
        for _ in 0..20 {
            let u = random_unit(&mut r, 3);
            let x = k.point_at_depth(&u, 0.05).unwrap();
            let got = k.delta(&x).unwrap();
            assert!((got - 0.05).abs() <= 1e-8, "{} {got}", k.kind());
        }
    }
}

#[test]
fn transformed_lp_ball_matches_mapped_sample() {
    let m = DMatrix::from_row_slice(3, 3, &[1.0, 0.3, 0.0, 0.0, 0.8, -0.2, 0.1, 0.0, 1.2]);
    let t = AffineMap::new(m, Point::new(&[0.2, -0.1, 0.3])).unwrap();
    let lp = Body::lp_ball(3, 4.0, 1.0).unwrap();
    let k = Body::transformed(&t, &lp).unwrap();
    let sample: Vec<Point> = sphere_directions(3, 4000, 0).iter().map(|u| t.apply(&lp.support(u).1)).collect();
    let q = Polytope::hull(&sample).unwrap();
    let norm4 = |x: &Point| x.coords().iter().map(|c| c.powi(4)).sum::<f64>().powf(0.25);
    let mut r = rng(1);
    let mut checked = 0;
    for _ in 0..10_000 {
        let x = random_in_ball(&mut r, 3) * 1.4;
        if (norm4(&x) - 1.0).abs() < 0.05 {
            continue;
        }
        let y = t.apply(&x);
        assert_eq!(k.contains(&y), q.contains(&y, 0.0), "at {:?}", x.coords());
        checked += 1;
    }
    assert!(checked > 5000);
}

#[test]
fn john_ellipsoid_fixed_points() {
    let e = Body::ellipsoid(&[2.0, 1.0, 0.5]).unwrap();
    let j = john_ellipsoid(&e).unwrap();
    let mut axes = j.semi_axes().to_vec();
    axes.sort_by(f64::total_cmp);
    for (a, b) in axes.iter().zip([0.5, 1.0, 2.0]) {
        assert!((a - b).abs() < 1e-6);
    }
    let c = to_canonical(&Body::ball(3, 1.0).unwrap()).unwrap();
    assert!((c.gamma - 1.0).abs() < 1e-9);
    assert!((c.map.linear() - DMatrix::identity(3, 3)).abs().max() < 1e-9);
}

#[test]
fn specs_round_trip() {
    let texts = [
        r#"{"type":"ball","dim":3}"#,
        r#"{"type":"box","dim":2,"half_widths":[1.0,0.5]}"#,
        r#"{"type":"ellipsoid","dim":2,"axes":[2.0,1.0]}"#,
        r#"{"type":"lp","dim":3,"p":4,"radius":1.0}"#,
        r#"{"type":"polytope","dim":2,"vertices":[[0,0],[1,0],[0,1]]}"#,
    ];
    for t in texts {
        let spec = BodySpec::from_json(t).unwrap();
        let again = BodySpec::from_json(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(spec, again);
        assert_eq!(spec.build().unwrap().dim(), spec.dim());
    }
    assert!(BodySpec::from_json(r#"{"type":"ball","dim":6}"#).unwrap().build().is_err());
    assert!(BodySpec::from_json(r#"{"type":"torus","dim":3}"#).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn canonical_sandwich(seed in any::<u64>(), d in 2usize..=3, n in 8usize..30) {
        let k = Body::random_polytope(d, n, seed).unwrap();
        let c = to_canonical(&k).unwrap();
        let g = c.gamma.sqrt();
        for u in sphere_directions(d, 1000, seed) {
            let h = c.body.support(&u).0;
            prop_assert!(h >= g - 1e-6 && h <= 1.0 / g + 1e-6);
        }
        // δ ≤ ray ≤ δ/γ inside the canonical body
        let mut r = rng(seed);
        for _ in 0..1000 {
            let x = random_in_ball(&mut r, d) * (g * r.random::<f64>().sqrt());
            if x.norm() < 1e-6 {
                continue;
            }
            let delta = c.body.delta(&x).unwrap();
            let ray = c.body.ray_distance(&x).unwrap();
            prop_assert!(delta <= ray + 1e-9);
            prop_assert!(ray <= delta / c.gamma + 1e-9);
        }
    }
}
