use argmin::core::{CostFunction, Executor};
use argmin::solver::neldermead::NelderMead;

use super::cap::{cap_through, cap_volume, section, Cap};
use super::CapBody;
use crate::error::{Error, Result};
use crate::geom::linalg::complement_basis;
use crate::geom::Point;
use crate::sampling;

/// Caps wider than this multiple of δ(x) are not volume-evaluated.
const WIDTH_PREFILTER: f64 = 16.0;
/// Budget on cap points processed during the grid stage.
const POINT_BUDGET: usize = 4_000_000;
const REFINE_STARTS: usize = 3;

fn grid_size(d: usize) -> usize {
    if d <= 3 {
        2048
    } else {
        10_000
    }
}

/// Volume of the cap through x with normal u(θ) = normalize(u0 + Σ θ_i b_i).
struct ChartVolume<'a> {
    body: &'a CapBody,
    x: Point,
    u0: Point,
    basis: Vec<Point>,
}

impl ChartVolume<'_> {
    fn direction(&self, theta: &[f64]) -> Point {
        let mut v = self.u0;
        for (t, b) in theta.iter().zip(&self.basis) {
            v += *b * *t;
        }
        v.normalized().unwrap_or(self.u0)
    }
}

impl CostFunction for ChartVolume<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, theta: &Vec<f64>) -> std::result::Result<f64, argmin::core::Error> {
        let u = self.direction(theta);
        let b = u.dot(&self.x);
        Ok(cap_volume(self.body.polytope(), &u, b).unwrap_or(f64::INFINITY))
    }
}

fn better(a: (f64, Point), b: (f64, Point)) -> (f64, Point) {
    let tie = (a.0 - b.0).abs() <= 1e-12 * a.0.abs().max(b.0.abs());
    if tie {
        if a.1.lex_cmp(&b.1).is_le() {
            a
        } else {
            b
        }
    } else if a.0 < b.0 {
        a
    } else {
        b
    }
}

/// Minimum-volume cap whose base passes through x: a quasi-uniform direction
/// grid (prefiltered by width) followed by Nelder–Mead on the sphere chart.
/// Ties go to the lexicographically smallest normal.
pub fn minimal_cap(k: &CapBody, x: &Point) -> Result<Cap> {
    crate::error::check_dim(k.dim(), x.dim())?;
    let depth = k.depth(x);
    if !(depth > 0.0) {
        return Err(Error::BoundaryPoint(depth));
    }
    let d = x.dim();
    let p = k.polytope();
    let grid = sampling::sphere_directions(d, grid_size(d), 0);
    let mut ranked: Vec<(f64, Point)> = grid.iter().map(|u| (k.support(u) - u.dot(x), *u)).collect();
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.lex_cmp(&b.1)));
    let w_min = ranked[0].0;
    let mut scored: Vec<(f64, Point)> = Vec::new();
    let mut spent = 0;
    for &(w, u) in &ranked {
        if (w > WIDTH_PREFILTER * w_min || spent > POINT_BUDGET) && scored.len() >= 16 {
            break;
        }
        let (pts, _) = section(p, &u, u.dot(x));
        spent += pts.len();
        if let Ok(c) = crate::geom::Polytope::hull(&pts) {
            scored.push((c.volume(), u));
        }
    }
    if scored.is_empty() {
        return Err(Error::NotConverged("minimal cap: no admissible direction".into()));
    }
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.lex_cmp(&b.1)));
    let spacing = (4.0 * std::f64::consts::PI / grid.len() as f64).powf(1.0 / (d - 1) as f64);
    let mut best = scored[0];
    for &(v0, u0) in scored.iter().take(REFINE_STARTS) {
        let cost = ChartVolume { body: k, x: *x, u0, basis: complement_basis(&u0) };
        let mut simplex = vec![vec![0.0; d - 1]];
        for i in 0..d - 1 {
            let mut s = vec![0.0; d - 1];
            s[i] = spacing;
            simplex.push(s);
        }
        let solver = NelderMead::new(simplex)
            .with_sd_tolerance(1e-12 * v0.max(1e-300))
            .map_err(|e| Error::NotConverged(e.to_string()))?;
        let res = Executor::new(cost, solver)
            .configure(|s| s.max_iters(200))
            .run()
            .map_err(|e| Error::NotConverged(e.to_string()))?;
        let st = res.state();
        if let Some(theta) = st.best_param.as_ref() {
            let chart = ChartVolume { body: k, x: *x, u0, basis: complement_basis(&u0) };
            best = better(best, (st.best_cost, chart.direction(theta)));
        }
    }
    cap_through(k, &best.1, x)
}
