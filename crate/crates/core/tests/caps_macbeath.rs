use std::f64::consts::PI;

use capcover::bodies::{to_canonical, Body};
use capcover::caps::{boundary_packing, cap_through, expand_cap, macbeath, make_cap, minimal_cap, CapBody};
use capcover::geom::{self, Point, Polytope};
use capcover::sampling::{random_in_ball, random_unit, rng, sphere_directions};
use capcover::Error;
use proptest::prelude::*;
use rand::RngExt;

/// Area of the disk segment of height h, and volume of the ball cap of height h.
fn segment(h: f64) -> f64 {
    (1.0 - h).acos() - (1.0 - h) * (2.0 * h - h * h).sqrt()
}

fn ball_cap(h: f64) -> f64 {
    PI * h * h * (3.0 - h) / 3.0
}

#[test]
fn ball_cap_volumes() {
    let disk = CapBody::new(&Body::ball(2, 1.0).unwrap(), 1e-4).unwrap();
    let ball = CapBody::new(&Body::ball(3, 1.0).unwrap(), 1e-3).unwrap();
    for u in sphere_directions(2, 5, 1) {
        for h in [0.01, 0.1, 0.5] {
            let c = make_cap(&disk, &u, h).unwrap();
            assert!((c.volume() / segment(h) - 1.0).abs() < 2e-3, "h={h}: {}", c.volume());
        }
    }
    for u in sphere_directions(3, 5, 1) {
        for h in [0.05, 0.3] {
            let c = make_cap(&ball, &u, h).unwrap();
            assert!((c.volume() / ball_cap(h) - 1.0).abs() < 1e-2, "h={h}: {}", c.volume());
        }
    }
}

#[test]
fn cap_volume_matches_sampling() {
    let k = CapBody::new(&Body::random_polytope(3, 40, 12).unwrap(), 0.1).unwrap();
    let p = k.polytope();
    let (lo, hi) = bounding_box(p);
    let box_vol: f64 = (0..3).map(|i| hi[i] - lo[i]).product();
    let mut r = rng(5);
    let uniform: Vec<Point> =
        (0..200_000).map(|_| Point::from_fn(3, |i| lo[i] + (hi[i] - lo[i]) * r.random::<f64>())).collect();
    let inside: Vec<&Point> = uniform.iter().filter(|x| p.contains(x, 0.0)).collect();
    let mut dr = rng(8);
    for _ in 0..6 {
        let u = random_unit(&mut dr, 3);
        let c = make_cap(&k, &u, 0.4 * k.width(&u)).unwrap();
        let hits = inside.iter().filter(|x| c.above(x, 0.0)).count() as f64;
        let est = hits / uniform.len() as f64 * box_vol;
        let sd = (hits.max(1.0)).sqrt() / uniform.len() as f64 * box_vol;
        assert!((est - c.volume()).abs() <= 4.0 * sd + 1e-3, "{est} vs {}", c.volume());
        let cp = c.polytope().unwrap();
        assert!((cp.volume() - c.volume()).abs() <= 1e-9);
        assert!(cp.vertices().iter().all(|v| p.contains(v, 1e-9) && c.above(v, 1e-9)));
    }
}

fn bounding_box(p: &Polytope) -> (Point, Point) {
    let d = p.dim();
    let lo = Point::from_fn(d, |i| p.vertices().iter().map(|v| v[i]).fold(f64::INFINITY, f64::min));
    let hi = Point::from_fn(d, |i| p.vertices().iter().map(|v| v[i]).fold(f64::NEG_INFINITY, f64::max));
    (lo, hi)
}

#[test]
fn cap_expansion_examples() {
    let k = CapBody::new(&Body::cube(3).unwrap(), 0.01).unwrap();
    let slab = make_cap(&k, &Point::unit(3, 2), 0.1).unwrap();
    let same = expand_cap(&slab, 1.0);
    assert_eq!((same.width(), same.volume(), same.offset()), (slab.width(), slab.volume(), slab.offset()));
    let double = expand_cap(&slab, 2.0);
    assert!((double.volume() - 2.0 * slab.volume()).abs() < 1e-12);
    assert!((double.width() - 0.2).abs() < 1e-15);
    let x = Point::new(&[0.2, -0.3, 0.95]);
    let through = cap_through(&k, &Point::unit(3, 2), &x).unwrap();
    assert!((through.width() - 0.05).abs() < 1e-12);
    assert!(matches!(make_cap(&k, &Point::unit(3, 0), 2.0), Err(Error::WidthTooLarge { .. })));
}

#[test]
fn macbeath_at_symmetric_centres() {
    let mut r = rng(3);
    let half: Vec<Point> = (0..20).map(|_| random_in_ball(&mut r, 3)).collect();
    let sym: Vec<Point> = half.iter().flat_map(|p| [*p, -*p]).collect();
    let k = CapBody::from_polytope(Polytope::hull(&sym).unwrap());
    let m = macbeath(&k, &Point::zeros(3), 1.0).unwrap();
    assert!((m.volume - k.volume()).abs() < 1e-9 * k.volume());
    let disk = CapBody::new(&Body::ball(2, 1.0).unwrap(), 0.01).unwrap();
    let m = macbeath(&disk, &Point::zeros(2), 1.0).unwrap();
    assert!((m.volume - disk.volume()).abs() < 1e-9);
}

#[test]
fn macbeath_box_near_facet() {
    let k = CapBody::new(&Body::boxed(&[1.0, 0.5, 2.0]).unwrap(), 0.01).unwrap();
    let x = Point::new(&[0.1, 0.45, -0.5]);
    let m = macbeath(&k, &x, 1.0).unwrap();
    // [−0.8, 1] × [0.4, 0.5] × [−2, 1] reflected about x: extents 1.8, 0.1, 3
    assert!((m.volume - 1.8 * 0.1 * 3.0).abs() < 1e-9, "{}", m.volume);
    assert!((m.depth - 0.05).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn macbeath_region_shape(seed in any::<u64>(), d in 2usize..=3, lambda in 0.1f64..1.0) {
        let k = CapBody::from_polytope(Polytope::hull(&{
            let mut r = rng(seed);
            (0..24).map(|_| random_unit(&mut r, d)).collect::<Vec<_>>()
        }).unwrap());
        let mut r = rng(seed ^ 1);
        let x = random_in_ball(&mut r, d) * 0.4;
        prop_assume!(k.contains(&x, -1e-3));
        let m = macbeath(&k, &x, 1.0).unwrap();
        let ml = macbeath(&k, &x, lambda).unwrap();
        let p = k.polytope();
        prop_assert!(m.region.vertices().iter().all(|v| p.contains(v, 1e-9)));
        prop_assert!(ml.region.vertices().iter().all(|v| m.contains(v, 1e-9)));
        prop_assert!((ml.volume / m.volume - lambda.powi(d as i32)).abs() <= 1e-9);
        for v in m.region.vertices() {
            prop_assert!(m.contains(&(x * 2.0 - *v), 1e-9));
        }
    }
}

#[test]
fn minimal_cap_beats_direction_grid() {
    for d in 2..=3 {
        let c = to_canonical(&Body::random_polytope(d, 30, 21).unwrap()).unwrap();
        let k = CapBody::new(&c.body, 0.01).unwrap();
        let grid = sphere_directions(d, 10_000, 3);
        let mut r = rng(4);
        for _ in 0..3 {
            let x = k.point_at_depth(&random_unit(&mut r, d), 0.05).unwrap();
            let cap = minimal_cap(&k, &x).unwrap();
            assert!((cap.normal().dot(&x) - cap.offset()).abs() < 1e-9);
            let best = grid
                .iter()
                .filter_map(|u| cap_through(&k, u, &x).ok())
                .map(|c| c.volume())
                .fold(f64::INFINITY, f64::min);
            assert!(cap.volume() <= best * 1.01, "d={d}: {} vs grid {best}", cap.volume());
            // stationarity: x is the centroid of the minimal cap's base
            let g = cap.base_centroid().unwrap();
            assert!(g.dist(&x) < 0.02, "d={d}: base centroid {:?} vs {:?}", g.coords(), x.coords());
        }
    }
}

#[test]
fn minimal_cap_on_symmetric_bodies() {
    let ball = CapBody::new(&Body::ball(2, 1.0).unwrap(), 1e-3).unwrap();
    let x = Point::new(&[0.0, 0.9]);
    let cap = minimal_cap(&ball, &x).unwrap();
    assert!(cap.normal().dist(&Point::unit(2, 1)) < 1e-3);
    assert!((cap.width() - 0.1).abs() < 1e-3);
    let cube = CapBody::new(&Body::cube(3).unwrap(), 0.01).unwrap();
    // Off-centre, tilting towards the nearer facet beats the slab.
    let x = Point::new(&[0.1, -0.2, -0.96]);
    assert!(minimal_cap(&cube, &x).unwrap().volume() < 0.16 * 0.8);
    let x = Point::new(&[0.0, 0.0, -0.96]);
    let cap = minimal_cap(&cube, &x).unwrap();
    assert!((cap.volume() - 0.16).abs() < 1e-4, "{}", cap.volume());
}

/// Disjoint scaled Macbeath lenses fit on the circle of radius 1 − ε.
fn disk_capacity(eps: f64) -> f64 {
    let half = (1.0 - (1.0 - eps) * (1.0 - eps)).sqrt() / 20.0;
    PI * (1.0 - eps) / half
}

#[test]
fn disk_packing_counts() {
    let disk = Body::ball(2, 1.0).unwrap();
    let mut counts = Vec::new();
    for eps in [0.1, 0.025] {
        let pack = boundary_packing(&disk, eps, 1, 4096).unwrap();
        let n = pack.entries.len() as f64;
        let cap = disk_capacity(eps);
        assert!(n >= cap / 2.0 && n <= cap * 1.02, "ε={eps}: {n} regions, capacity {cap:.1}");
        assert_eq!(pack.histogram.len(), 1);
        counts.push(n);
    }
    let ratio = counts[1] / counts[0];
    assert!((1.0..=3.0).contains(&ratio), "{ratio}");
}

#[test]
fn square_packing() {
    let sq = Body::cube(2).unwrap();
    let pack = boundary_packing(&sq, 0.02, 2, 4096).unwrap();
    assert_eq!(pack.coverage, 1.0);
    let classes: Vec<i32> = pack.histogram.keys().copied().collect();
    assert!(classes.len() >= 3, "{classes:?}");
    assert_eq!(pack.histogram.values().sum::<usize>(), pack.entries.len());
    for (i, a) in pack.entries.iter().enumerate() {
        for b in &pack.entries[i + 1..] {
            assert!(geom::interiors_disjoint(&a.region.region, &b.region.region).unwrap());
        }
    }
}

#[test]
fn packing_edge_cases() {
    let disk = Body::ball(2, 1.0).unwrap();
    let empty = boundary_packing(&disk, 0.05, 0, 0).unwrap();
    assert!(empty.entries.is_empty() && empty.histogram.is_empty());
    assert_eq!(empty.coverage, 0.0);
    assert!(matches!(boundary_packing(&disk, 0.3, 0, 16), Err(Error::EpsilonTooLarge { .. })));
    assert!(matches!(boundary_packing(&disk, 0.0, 0, 16), Err(Error::EpsilonTooLarge { .. })));
}
