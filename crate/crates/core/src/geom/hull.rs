//! Incremental beneath–beyond convex hull with simplicial facets and an
//! adjacency graph. Points within the coplanarity tolerance of a facet are
//! treated as lying on it; coplanar simplices are merged afterwards.

use std::collections::HashMap;

use super::linalg;
use super::point::{Point, MAX_DIM};
use super::predicates;
use crate::error::{Error, Result};

/// Relative coplanarity tolerance.
pub const COPLANAR_TOL: f64 = 1e-9;

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub(crate) struct Simplex {
    pub verts: [u32; MAX_DIM],
    pub normal: Point,
    pub offset: f64,
    pub neighbors: [u32; MAX_DIM],
    /// Size of the unnormalized normal, a proxy for conditioning.
    pub weight: f64,
}

/// Raw output of the hull: the triangulated boundary over the input points.
#[derive(Clone, Debug)]
pub(crate) struct RawHull {
    pub points: Vec<Point>,
    pub simplices: Vec<Simplex>,
    pub interior: Point,
    pub tol: f64,
}

struct Builder<'a> {
    d: usize,
    pts: &'a [Point],
    interior: Point,
    facets: Vec<Simplex>,
    alive: Vec<bool>,
    outside: Vec<Vec<u32>>,
    mark: Vec<u32>,
    epoch: u32,
}

impl<'a> Builder<'a> {
    #[inline]
    fn dist(&self, f: usize, p: &Point) -> f64 {
        self.facets[f].normal.dot(p) - self.facets[f].offset
    }

    fn make_facet(&self, verts: [u32; MAX_DIM]) -> Simplex {
        let d = self.d;
        let vs: Vec<Point> = (0..d).map(|i| self.pts[verts[i] as usize]).collect();
        let raw = linalg::hyperplane_normal(&vs);
        let weight = raw.norm();
        let mut normal = raw * (1.0 / weight);
        let mut offset = vs.iter().map(|v| normal.dot(v)).sum::<f64>() / d as f64;
        if normal.dot(&self.interior) - offset > 0.0 {
            normal = -normal;
            offset = -offset;
        }
        Simplex { verts, normal, offset, neighbors: [NONE; MAX_DIM], weight }
    }

    fn push(&mut self, s: Simplex) -> usize {
        self.facets.push(s);
        self.alive.push(true);
        self.outside.push(Vec::new());
        self.mark.push(0);
        self.facets.len() - 1
    }
}

/// Extent (largest bounding-box side) of a point set.
pub(crate) fn extent(points: &[Point]) -> f64 {
    let d = points[0].dim();
    (0..d)
        .map(|i| {
            let (lo, hi) =
                points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), p| (l.min(p[i]), h.max(p[i])));
            hi - lo
        })
        .fold(0.0, f64::max)
}

fn initial_simplex(pts: &[Point], tol: f64) -> Result<Vec<usize>> {
    let d = pts[0].dim();
    let i0 = (0..pts.len()).min_by(|&a, &b| pts[a][0].total_cmp(&pts[b][0]).then(a.cmp(&b))).unwrap();
    let mut chosen = vec![i0];
    let mut basis: Vec<Point> = Vec::new();
    for _ in 0..d {
        let mut best = (usize::MAX, -1.0);
        for (i, p) in pts.iter().enumerate() {
            let mut r = *p - pts[i0];
            for b in &basis {
                r -= *b * b.dot(&r);
            }
            let n = r.norm();
            if n > best.1 {
                best = (i, n);
            }
        }
        if best.1 <= tol {
            let rank = predicates::exact_affine_rank(pts);
            return Err(Error::DegenerateInput(format!(
                "points span {} of {} dimensions{}",
                basis.len(),
                d,
                if rank == d { " (numerically flat)" } else { "" }
            )));
        }
        let mut r = pts[best.0] - pts[i0];
        for b in &basis {
            r -= *b * b.dot(&r);
        }
        for b in &basis {
            r -= *b * b.dot(&r);
        }
        basis.push(r * (1.0 / r.norm()));
        chosen.push(best.0);
    }
    Ok(chosen)
}

/// Sorted key of a (d−1)-subset of facet vertices (all but position `skip`).
fn ridge_key(verts: &[u32; MAX_DIM], d: usize, skip: usize) -> [u32; MAX_DIM] {
    let mut k = [NONE; MAX_DIM];
    let mut j = 0;
    for (i, &v) in verts.iter().take(d).enumerate() {
        if i != skip {
            k[j] = v;
            j += 1;
        }
    }
    k[..d - 1].sort_unstable();
    k
}

/// Computes the triangulated hull of points in dimension d ≥ 2.
pub(crate) fn quickhull(input: &[Point]) -> Result<RawHull> {
    let d = input[0].dim();
    if input.len() < d + 1 {
        return Err(Error::DegenerateInput(format!("need at least {} points, got {}", d + 1, input.len())));
    }
    for p in input {
        crate::error::check_dim(d, p.dim())?;
        if !p.is_finite() {
            return Err(Error::DegenerateInput("non-finite coordinate".into()));
        }
    }
    let ext = extent(input);
    let tol = COPLANAR_TOL * ext.max(1e-300);
    let simplex = initial_simplex(input, tol)?;
    let interior = Point::centroid(&simplex.iter().map(|&i| input[i]).collect::<Vec<_>>());

    let mut b = Builder {
        d,
        pts: input,
        interior,
        facets: Vec::new(),
        alive: Vec::new(),
        outside: Vec::new(),
        mark: Vec::new(),
        epoch: 0,
    };
    // Facet i omits simplex vertex i; its neighbor across vertex position k is
    // the facet omitting that vertex.
    for omit in 0..=d {
        let mut verts = [NONE; MAX_DIM];
        let mut owner = [0usize; MAX_DIM];
        let mut j = 0;
        for (s, &v) in simplex.iter().enumerate() {
            if s != omit {
                verts[j] = v as u32;
                owner[j] = s;
                j += 1;
            }
        }
        let mut f = b.make_facet(verts);
        for k in 0..d {
            f.neighbors[k] = owner[k] as u32;
        }
        b.push(f);
    }
    let in_simplex: Vec<bool> = {
        let mut m = vec![false; input.len()];
        for &i in &simplex {
            m[i] = true;
        }
        m
    };
    for (i, p) in input.iter().enumerate() {
        if in_simplex[i] {
            continue;
        }
        for f in 0..=d {
            if b.dist(f, p) > tol {
                b.outside[f].push(i as u32);
                break;
            }
        }
    }
    let mut stack: Vec<usize> = (0..=d).filter(|&f| !b.outside[f].is_empty()).collect();
    let mut visible: Vec<usize> = Vec::new();
    let mut horizon: Vec<(usize, usize)> = Vec::new();
    let mut ridges: HashMap<[u32; MAX_DIM], (usize, usize)> = HashMap::new();
    while let Some(f0) = stack.pop() {
        if !b.alive[f0] || b.outside[f0].is_empty() {
            continue;
        }
        let eye = *b.outside[f0]
            .iter()
            .max_by(|&&x, &&y| {
                b.dist(f0, &input[x as usize]).total_cmp(&b.dist(f0, &input[y as usize])).then(y.cmp(&x))
            })
            .unwrap();
        let ep = input[eye as usize];
        b.epoch += 1;
        let epoch = b.epoch;
        visible.clear();
        horizon.clear();
        b.mark[f0] = epoch;
        visible.push(f0);
        let mut head = 0;
        while head < visible.len() {
            let f = visible[head];
            head += 1;
            for k in 0..d {
                let n = b.facets[f].neighbors[k] as usize;
                if b.mark[n] == epoch {
                    continue;
                }
                if b.dist(n, &ep) > tol {
                    b.mark[n] = epoch;
                    visible.push(n);
                } else {
                    horizon.push((f, k));
                }
            }
        }
        // Horizon facets that were tested but not visible must not be
        // confused with visible ones: visibility is exactly the mark.
        let mut created: Vec<usize> = Vec::with_capacity(horizon.len());
        ridges.clear();
        for &(v, k) in &horizon {
            let mut verts = b.facets[v].verts;
            verts[k] = eye;
            let n = b.facets[v].neighbors[k] as usize;
            let mut s = b.make_facet(verts);
            s.neighbors[k] = n as u32;
            let id = b.push(s);
            let back = (0..d).find(|&q| b.facets[n].neighbors[q] as usize == v).unwrap();
            b.facets[n].neighbors[back] = id as u32;
            for q in 0..d {
                if q == k {
                    continue;
                }
                let key = ridge_key(&verts, d, q);
                if let Some((other, oq)) = ridges.remove(&key) {
                    b.facets[id].neighbors[q] = other as u32;
                    b.facets[other].neighbors[oq] = id as u32;
                } else {
                    ridges.insert(key, (id, q));
                }
            }
            created.push(id);
        }
        debug_assert!(ridges.is_empty(), "unmatched ridges in hull update");
        for &v in &visible {
            b.alive[v] = false;
            let pts = std::mem::take(&mut b.outside[v]);
            for p in pts {
                if p == eye {
                    continue;
                }
                let pp = input[p as usize];
                for &c in &created {
                    if b.dist(c, &pp) > tol {
                        b.outside[c].push(p);
                        break;
                    }
                }
            }
        }
        for &c in &created {
            if !b.outside[c].is_empty() {
                stack.push(c);
            }
        }
    }
    let simplices: Vec<Simplex> = b.facets.into_iter().zip(b.alive).filter_map(|(f, a)| a.then_some(f)).collect();
    // Re-index neighbors to the compacted list.
    Ok(compact(input.to_vec(), simplices, interior, tol))
}

fn compact(points: Vec<Point>, simplices: Vec<Simplex>, interior: Point, tol: f64) -> RawHull {
    let d = points[0].dim();
    // Neighbor ids refer to the original arena; rebuild adjacency by ridge keys.
    let mut simplices = simplices;
    let mut ridges: HashMap<[u32; MAX_DIM], (usize, usize)> = HashMap::with_capacity(simplices.len() * d);
    for s in simplices.iter_mut() {
        s.neighbors = [NONE; MAX_DIM];
    }
    for i in 0..simplices.len() {
        for q in 0..d {
            let key = ridge_key(&simplices[i].verts, d, q);
            if let Some((o, oq)) = ridges.remove(&key) {
                simplices[i].neighbors[q] = o as u32;
                simplices[o].neighbors[oq] = i as u32;
            } else {
                ridges.insert(key, (i, q));
            }
        }
    }
    RawHull { points, simplices, interior, tol }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_has_four_edges_after_triangulation() {
        let pts: Vec<Point> = [[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0], [0.0, 0.0], [0.0, 1.0]]
            .iter()
            .map(|c| Point::new(c))
            .collect();
        let h = quickhull(&pts).unwrap();
        // Edge midpoint (0,1) is coplanar and never inserted.
        assert_eq!(h.simplices.len(), 4);
        for s in &h.simplices {
            assert!(s.neighbors[..2].iter().all(|&n| n != NONE));
        }
    }

    #[test]
    fn collinear_is_degenerate() {
        let pts: Vec<Point> = (0..5).map(|i| Point::new(&[i as f64, 2.0 * i as f64])).collect();
        assert!(matches!(quickhull(&pts), Err(Error::DegenerateInput(_))));
    }
}
