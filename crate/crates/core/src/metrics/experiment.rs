use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bodies::{Body, BodySpec, ConvexBodyOracle};
use crate::construction::{approximate, bronshteyn_ivanov, dudley, ApproxConfig, Constants, Counts};
use crate::error::{Error, Result};
use crate::geom;

use super::hausdorff::{hausdorff_inner, hausdorff_outer, HAUSDORFF_DIRS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Layered,
    Dudley,
    Bi,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Layered => "layered",
            Method::Dudley => "dudley",
            Method::Bi => "bi",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        match s {
            "layered" => Ok(Method::Layered),
            "dudley" => Ok(Method::Dudley),
            "bi" => Ok(Method::Bi),
            _ => Err(Error::Config(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridBody {
    pub id: String,
    pub body: BodySpec,
}

/// Bodies × ε values × methods × seeds.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub bodies: Vec<GridBody>,
    pub eps: Vec<f64>,
    pub methods: Vec<Method>,
    pub seeds: Vec<u64>,
}

impl Grid {
    pub fn from_json(text: &str) -> Result<Grid> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("grid: {e}")))
    }
}

/// One sweep cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub body: String,
    pub dim: usize,
    pub eps: f64,
    pub method: Method,
    pub seed: u64,
    pub counts: Counts,
    pub hausdorff_est: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub collector_max_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constants: Option<Constants>,
    /// Dyadic volume class → cap count, for packing runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub histogram: Option<BTreeMap<i32, usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub runtime_ms: u64,
}

impl ExperimentRecord {
    pub fn ok(&self) -> bool {
        self.error.is_none()
    }
}

/// Least-squares line through (log 1/ε, log total faces).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub method: Method,
    pub body: String,
    pub dim: usize,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub points: usize,
}

/// Smallest number of distinct ε values a fit is made from.
pub const MIN_FIT_EPS: usize = 4;

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Experiment {
    pub records: Vec<ExperimentRecord>,
    pub fits: Vec<ScalingFit>,
}

/// Ordinary least squares y = slope·x + intercept, with R².
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64, f64)> {
    let n = xs.len() as f64;
    if xs.len() < 2 || xs.len() != ys.len() {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if !(sxx > 0.0) {
        return None;
    }
    let slope = sxy / sxx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    Some((slope, my - slope * mx, r2))
}

/// Fits log(total) against log(1/ε) per (body, dim, method) over successful
/// records, skipping groups with fewer than [`MIN_FIT_EPS`] ε values.
pub fn scaling_fits(records: &[ExperimentRecord]) -> Vec<ScalingFit> {
    let mut groups: BTreeMap<(String, usize, Method), Vec<&ExperimentRecord>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.ok() && r.counts.total > 0) {
        groups.entry((r.body.clone(), r.dim, r.method)).or_default().push(r);
    }
    groups
        .into_iter()
        .filter_map(|((body, dim, method), rs)| {
            let mut distinct: Vec<f64> = rs.iter().map(|r| r.eps).collect();
            distinct.sort_by(f64::total_cmp);
            distinct.dedup();
            if distinct.len() < MIN_FIT_EPS {
                return None;
            }
            let xs: Vec<f64> = rs.iter().map(|r| (1.0 / r.eps).ln()).collect();
            let ys: Vec<f64> = rs.iter().map(|r| (r.counts.total as f64).ln()).collect();
            let (slope, intercept, r2) = linear_fit(&xs, &ys)?;
            Some(ScalingFit { method, body, dim, slope, intercept, r2, points: rs.len() })
        })
        .collect()
}

fn failed(id: &str, dim: usize, eps: f64, method: Method, seed: u64, e: Error, ms: u64) -> ExperimentRecord {
    ExperimentRecord {
        body: id.to_string(),
        dim,
        eps,
        method,
        seed,
        counts: Counts { vertices: 0, faces_by_dim: Vec::new(), total: 0 },
        hausdorff_est: f64::NAN,
        witness_count: None,
        collector_max_points: None,
        constants: None,
        histogram: None,
        error: Some(e.to_string()),
        runtime_ms: ms,
    }
}

/// Runs one method on one body.
pub fn run_cell(id: &str, body: &Body, eps: f64, method: Method, seed: u64) -> ExperimentRecord {
    let start = Instant::now();
    let dim = body.dim();
    let base = |counts: Counts, h: f64| ExperimentRecord {
        body: id.to_string(),
        dim,
        eps,
        method,
        seed,
        counts,
        hausdorff_est: h,
        witness_count: None,
        collector_max_points: None,
        constants: None,
        histogram: None,
        error: None,
        runtime_ms: 0,
    };
    let out: Result<ExperimentRecord> = match method {
        Method::Layered => approximate(body, eps, &ApproxConfig { seed, ..Default::default() }).map(|r| {
            let mut rec = base(r.record.counts.clone(), r.hausdorff_est);
            rec.witness_count = Some(r.record.witness_count);
            rec.collector_max_points = Some(r.record.collector_max_points);
            rec.constants = Some(r.record.constants.clone());
            rec
        }),
        Method::Dudley => dudley(body, eps).map(|b| {
            let h = hausdorff_outer(&b.polytope, body);
            base(Counts::from(&geom::face_lattice(&b.polytope)), h)
        }),
        Method::Bi => bronshteyn_ivanov(body, eps).and_then(|b| {
            let h = hausdorff_inner(&b.polytope, body, HAUSDORFF_DIRS, true)?;
            Ok(base(Counts::from(&geom::face_lattice(&b.polytope)), h))
        }),
    };
    let ms = start.elapsed().as_millis() as u64;
    match out {
        Ok(mut r) => {
            r.runtime_ms = ms;
            r
        }
        Err(e) => failed(id, dim, eps, method, seed, e, ms),
    }
}

/// Runs every cell of the grid in parallel; records come back in grid order
/// (bodies, then ε, then methods, then seeds).
pub fn run_experiment(grid: &Grid) -> Experiment {
    let built: Vec<(String, usize, Result<Body>)> =
        grid.bodies.iter().map(|b| (b.id.clone(), b.body.dim(), b.body.build())).collect();
    let mut cells = Vec::new();
    for (i, _) in built.iter().enumerate() {
        for &eps in &grid.eps {
            for &m in &grid.methods {
                for &s in &grid.seeds {
                    cells.push((i, eps, m, s));
                }
            }
        }
    }
    let records: Vec<ExperimentRecord> = cells
        .par_iter()
        .map(|&(i, eps, m, s)| {
            let (id, dim, body) = &built[i];
            match body {
                Ok(b) => run_cell(id, b, eps, m, s),
                Err(e) => failed(id, *dim, eps, m, s, e.clone(), 0),
            }
        })
        .collect();
    let fits = scaling_fits(&records);
    Experiment { records, fits }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 0.5 * x + 2.0).collect();
        let (s, i, r2) = linear_fit(&xs, &ys).unwrap();
        assert!((s - 0.5).abs() < 1e-12 && (i - 2.0).abs() < 1e-12 && (r2 - 1.0).abs() < 1e-12);
        assert!(linear_fit(&[1.0, 1.0], &[2.0, 3.0]).is_none());
    }

    #[test]
    fn empty_grid() {
        let e = run_experiment(&Grid::default());
        assert!(e.records.is_empty() && e.fits.is_empty());
    }

    #[test]
    fn bad_body_is_captured() {
        let grid = Grid::from_json(
            r#"{"bodies":[{"id":"bad","body":{"type":"ball","dim":9}}],"eps":[0.1],"methods":["bi"],"seeds":[0]}"#,
        )
        .unwrap();
        let e = run_experiment(&grid);
        assert_eq!(e.records.len(), 1);
        assert!(e.records[0].error.is_some());
    }
}
