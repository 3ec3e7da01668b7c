use std::path::{Path, PathBuf};
use std::process::Command;

use capcover::bodies::Body;
use capcover::construction::{Counts, WcReport};
use capcover::geom::{Point, Polytope};
use capcover::metrics::{
    check_nested, hausdorff_inner, linear_fit, parse_csv, run_experiment, scaling_fits, to_csv, to_svg, CsvRow,
    Experiment, ExperimentRecord, Grid, Method,
};
use capcover::sampling::{random_in_ball, rng, sphere_directions};
use capcover::Error;
use proptest::prelude::*;

fn polygon(n: usize, r: f64, phase: f64) -> Polytope {
    let pts: Vec<Point> = (0..n)
        .map(|i| {
            let a = phase + 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            Point::new(&[r * a.cos(), r * a.sin()])
        })
        .collect();
    Polytope::hull(&pts).unwrap()
}

#[test]
fn hausdorff_examples() {
    let sq = polygon(4, 2f64.sqrt(), std::f64::consts::FRAC_PI_4);
    let square = Body::polytope(sq.clone()).unwrap();
    assert!(hausdorff_inner(&sq, &square, 1000, true).unwrap() < 1e-12);
    let disk = Body::ball(2, 1.0).unwrap();
    let inscribed = polygon(4, 1.0, 0.3);
    let h = hausdorff_inner(&inscribed, &disk, 10_000, true).unwrap();
    assert!((h - (1.0 - 0.5f64.sqrt())).abs() < 1e-8, "{h}");
    let outside = polygon(4, 1.1, 0.0);
    assert!(matches!(check_nested(&outside, &disk), Err(Error::NotNested { .. })));
    assert!(matches!(hausdorff_inner(&outside, &disk, 100, false), Err(Error::NotNested { .. })));
}

#[test]
fn refined_estimate_matches_dense_sampling() {
    let k = Body::ellipsoid(&[1.5, 1.0, 0.6]).unwrap();
    let mut r = rng(4);
    let pts: Vec<Point> = (0..40)
        .map(|_| {
            let x = random_in_ball(&mut r, 3);
            Point::new(&[1.5 * x[0], x[1], 0.6 * x[2]])
        })
        .collect();
    let p = Polytope::hull(&pts).unwrap();
    let fast = hausdorff_inner(&p, &k, 10_000, true).unwrap();
    let dense = sphere_directions(3, 1_000_000, 9)
        .iter()
        .map(|u| capcover::bodies::ConvexBodyOracle::support(&k, u).0 - p.support(u).0)
        .fold(f64::NEG_INFINITY, f64::max);
    assert!((fast - dense).abs() <= 1e-3, "{fast} vs {dense}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn more_vertices_never_hurt(seed in any::<u64>(), n in 6usize..30) {
        let k = Body::ball(2, 1.0).unwrap();
        let mut r = rng(seed);
        let pts: Vec<Point> = (0..2 * n).map(|_| random_in_ball(&mut r, 2)).collect();
        let small = Polytope::hull(&pts[..n]).unwrap();
        let large = Polytope::hull(&pts).unwrap();
        let a = hausdorff_inner(&small, &k, 2000, true).unwrap();
        let b = hausdorff_inner(&large, &k, 2000, true).unwrap();
        prop_assert!(b <= a + 1e-9);
    }

    #[test]
    fn csv_round_trip(
        body in "[a-z ,\"]{1,12}",
        dim in 2usize..=5,
        eps in 1e-4f64..0.1,
        m in 0usize..3,
        seed in any::<u64>(),
        vertices in 0usize..100_000,
        h in 0.0f64..1.0,
        ms in any::<u32>(),
    ) {
        let rec = record(&body, dim, eps, [Method::Layered, Method::Dudley, Method::Bi][m], seed, vertices, h, ms as u64);
        let rows = parse_csv(&to_csv(std::slice::from_ref(&rec)).unwrap()).unwrap();
        prop_assert_eq!(rows, vec![CsvRow::from(&rec)]);
    }
}

#[allow(clippy::too_many_arguments)]
fn record(
    body: &str,
    dim: usize,
    eps: f64,
    method: Method,
    seed: u64,
    vertices: usize,
    h: f64,
    ms: u64,
) -> ExperimentRecord {
    ExperimentRecord {
        body: body.into(),
        dim,
        eps,
        method,
        seed,
        counts: Counts { vertices, faces_by_dim: vec![vertices, vertices], total: 2 * vertices },
        hausdorff_est: h,
        witness_count: None,
        collector_max_points: None,
        constants: None,
        histogram: None,
        error: None,
        runtime_ms: ms,
    }
}

#[test]
fn svg_has_one_group_per_series() {
    let mut records = Vec::new();
    for (i, eps) in [0.1, 0.05, 0.025, 0.0125].into_iter().enumerate() {
        records.push(record("disk", 2, eps, Method::Layered, 0, 10 << i, eps / 2.0, 1));
        records.push(record("disk", 2, eps, Method::Dudley, 0, 12 << i, eps / 2.0, 1));
    }
    let fits = scaling_fits(&records);
    assert_eq!(fits.len(), 2);
    let svg = to_svg(&Experiment { records, fits });
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches(r#"class="series""#).count(), 2);
    assert_eq!(svg.matches(r#"class="fit""#).count(), 2);
    assert!(svg.contains("disk/2/layered") && svg.contains("disk/2/dudley"));
}

#[test]
fn fits_recover_known_slopes() {
    let xs: Vec<f64> = (0..6).map(|i| i as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|x| 0.5 * x + 2.0).collect();
    let (slope, intercept, r2) = linear_fit(&xs, &ys).unwrap();
    assert!((slope - 0.5).abs() < 1e-12 && (intercept - 2.0).abs() < 1e-12 && (r2 - 1.0).abs() < 1e-12);
    assert!(linear_fit(&[1.0], &[1.0]).is_none());
}

#[test]
fn empty_grid() {
    let exp = run_experiment(&Grid::default());
    assert!(exp.records.is_empty() && exp.fits.is_empty());
    let csv = to_csv(&exp.records).unwrap();
    assert_eq!(csv.lines().count(), 1);
    assert!(parse_csv(&csv).unwrap().is_empty());
}

#[test]
fn dudley_tracks_layered_on_the_disk() {
    let grid = Grid::from_json(
        r#"{"bodies": [{"id": "disk", "body": {"type": "ball", "dim": 2}}],
            "eps": [0.05, 0.025, 0.0125, 0.00625],
            "methods": ["layered", "dudley"],
            "seeds": [0]}"#,
    )
    .unwrap();
    let exp = run_experiment(&grid);
    assert!(exp.records.iter().all(|r| r.ok() && r.hausdorff_est <= r.eps));
    let slope = |m: Method| exp.fits.iter().find(|f| f.method == m).unwrap().slope;
    let (a, b) = (slope(Method::Layered), slope(Method::Dudley));
    assert!((a - b).abs() <= 0.3, "layered {a}, dudley {b}");
}

#[test]
fn report_pass_logic() {
    let clean = WcReport::default();
    assert!(clean.passed());
    for broken in [
        WcReport { failures: 1, ..Default::default() },
        WcReport { eps_cap_failures: 1, ..Default::default() },
        WcReport { property1_failures: 1, ..Default::default() },
    ] {
        assert!(!broken.passed());
    }
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_capcover"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data").join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("capcover-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn cli_exit_codes() {
    let dir = scratch("codes");
    let code = |c: &mut Command| c.output().unwrap().status.code();

    let grid = dir.join("empty.json");
    std::fs::write(&grid, r#"{"bodies": [], "eps": [], "methods": [], "seeds": []}"#).unwrap();
    let out = dir.join("empty");
    assert_eq!(code(bin().args(["experiment", "--grid"]).arg(&grid).arg("--out").arg(&out)), Some(0));
    let csv = std::fs::read_to_string(out.join("records.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1);

    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"bodies": [], "eps": [], "methods": [], "seeds": [], "extra": 1}"#).unwrap();
    assert_eq!(code(bin().args(["experiment", "--grid"]).arg(&bad).arg("--out").arg(&out)), Some(3));
    assert_eq!(
        code(bin().args(["experiment", "--grid"]).arg(&grid).arg("--out").arg(&out).args(["--format", "pdf"])),
        Some(3)
    );
    assert_eq!(
        code(bin().args(["approximate", "--eps", "0.5", "--body"]).arg(data("disk.json")).arg("--out").arg(&out)),
        Some(3)
    );
    assert_eq!(code(bin().args(["verify", "--eps", "0.05", "--body"]).arg(dir.join("missing.json"))), Some(3));
    assert_eq!(
        code(bin().env("CAPCOVER_THREADS", "zero").args(["experiment", "--grid"]).arg(&grid).arg("--out").arg(&out)),
        Some(3)
    );
    assert_eq!(
        code(bin().args(["verify", "--eps", "0.05", "--halfspaces", "200", "--body"]).arg(data("disk.json"))),
        Some(0)
    );
}

#[test]
fn cli_commands_write_outputs() {
    let dir = scratch("outputs");
    let run = |c: &mut Command| {
        let o = c.output().unwrap();
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    };
    run(bin()
        .args(["approximate", "--eps", "0.05", "--format", "csv", "--body"])
        .arg(data("pentagon.json"))
        .arg("--out")
        .arg(&dir));
    let rows = parse_csv(&std::fs::read_to_string(dir.join("approximation.csv")).unwrap()).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].body, "pentagon");
    assert!(rows[0].hausdorff <= 0.05);

    run(bin()
        .args(["pack", "--eps", "0.05", "--dirs", "256", "--body"])
        .arg(data("l4_disk.json"))
        .arg("--out")
        .arg(&dir));
    let pack: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("packing.json")).unwrap()).unwrap();
    assert!(pack["histogram"].as_object().is_some_and(|h| !h.is_empty()));

    run(bin()
        .args(["polar-check", "--eps", "0.02", "--dirs", "32", "--body"])
        .arg(data("disk.json"))
        .arg("--out")
        .arg(&dir));
    let products: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("polar_products.json")).unwrap()).unwrap();
    assert_eq!(products.as_array().unwrap().len(), 32);
}
