//! Convex polytopes held in both representations plus a boundary triangulation.

use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use super::affine::AffineMap;
use super::hull::{self, RawHull};
use super::lattice::FaceLattice;
use super::linalg;
use super::point::{Point, MAX_DIM};
use super::tree::LinearTree;
use crate::error::{Error, Result};

/// Closed halfspace {x : ⟨normal, x⟩ ≤ offset} with unit normal.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Point,
    pub offset: f64,
}

impl Halfspace {
    /// Normalizes an arbitrary (normal, offset) pair.
    pub fn new(normal: Point, offset: f64) -> Result<Self> {
        let n = normal.norm();
        if !(n > 0.0 && n.is_finite() && offset.is_finite()) {
            return Err(Error::GeometryInvalid("halfspace normal must be nonzero and finite".into()));
        }
        Ok(Halfspace { normal: normal * (1.0 / n), offset: offset / n })
    }

    /// Slack b − ⟨u, x⟩ (nonnegative inside).
    #[inline]
    pub fn slack(&self, x: &Point) -> f64 {
        self.offset - self.normal.dot(x)
    }

    #[inline]
    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        self.slack(x) >= -tol
    }
}

/// Boundary triangulation over the hull points (which may include
/// non-vertex points lying on faces).
#[derive(Clone, Debug)]
pub(crate) struct Mesh {
    pub points: Vec<Point>,
    pub simplices: Vec<[u32; MAX_DIM]>,
    pub facet_of: Vec<u32>,
}

#[derive(Debug, Default)]
struct Cache {
    lattice: OnceLock<FaceLattice>,
    vertex_tree: OnceLock<LinearTree>,
    mesh_tree: OnceLock<LinearTree>,
    facet_tree: OnceLock<LinearTree>,
    adjacency: OnceLock<(Vec<u32>, Vec<u32>)>,
    mass: OnceLock<(f64, Point)>,
}

/// Bounded full-dimensional convex polytope.
#[derive(Clone, Debug)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Point>,
    facets: Vec<Halfspace>,
    incidence: Vec<Vec<u32>>,
    mesh: Arc<Mesh>,
    interior: Point,
    cache: Arc<Cache>,
}

/// Threshold above which linear queries go through a tree.
const TREE_MIN: usize = 48;

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn find(&mut self, mut i: u32) -> u32 {
        while self.0[i as usize] != i {
            let p = self.0[self.0[i as usize] as usize];
            self.0[i as usize] = p;
            i = p;
        }
        i
    }
    fn union(&mut self, a: u32, b: u32) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.0[hi as usize] = lo;
        }
    }
}

impl Polytope {
    /// Convex hull of a point set (see [`crate::geom::convex_hull`]).
    pub fn hull(points: &[Point]) -> Result<Polytope> {
        if points.is_empty() {
            return Err(Error::DegenerateInput("empty point set".into()));
        }
        let d = points[0].dim();
        if d == 1 {
            return Self::interval(points);
        }
        let raw = hull::quickhull(points)?;
        Ok(Self::from_raw(raw))
    }

    fn interval(points: &[Point]) -> Result<Polytope> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for p in points {
            crate::error::check_dim(1, p.dim())?;
            lo = lo.min(p[0]);
            hi = hi.max(p[0]);
        }
        if !(hi - lo > hull::COPLANAR_TOL * hi.abs().max(lo.abs()).max(1e-300)) {
            return Err(Error::DegenerateInput("points span 0 of 1 dimensions".into()));
        }
        let vertices = vec![Point::new(&[lo]), Point::new(&[hi])];
        let facets = vec![
            Halfspace { normal: Point::new(&[-1.0]), offset: -lo },
            Halfspace { normal: Point::new(&[1.0]), offset: hi },
        ];
        let mut s0 = [u32::MAX; MAX_DIM];
        let mut s1 = [u32::MAX; MAX_DIM];
        s0[0] = 0;
        s1[0] = 1;
        Ok(Polytope {
            dim: 1,
            mesh: Arc::new(Mesh { points: vertices.clone(), simplices: vec![s0, s1], facet_of: vec![0, 1] }),
            vertices,
            facets,
            incidence: vec![vec![0], vec![1]],
            interior: Point::new(&[0.5 * (lo + hi)]),
            cache: Arc::default(),
        })
    }

    fn from_raw(raw: RawHull) -> Polytope {
        let RawHull { points, simplices, interior, tol } = raw;
        let d = points[0].dim();
        let n = simplices.len();
        let mut uf = UnionFind((0..n as u32).collect());
        for (i, s) in simplices.iter().enumerate() {
            for k in 0..d {
                let j = s.neighbors[k] as usize;
                if j <= i || j >= n {
                    continue;
                }
                let t = &simplices[j];
                if s.normal.dot(&t.normal) <= 0.0 {
                    continue;
                }
                let coplanar =
                    t.verts[..d].iter().all(|&v| (s.normal.dot(&points[v as usize]) - s.offset).abs() <= tol)
                        && s.verts[..d].iter().all(|&v| (t.normal.dot(&points[v as usize]) - t.offset).abs() <= tol);
                if coplanar {
                    uf.union(i as u32, j as u32);
                }
            }
        }
        // Groups in order of first simplex; representative = best-conditioned simplex.
        let mut group_of = vec![u32::MAX; n];
        let mut reps: Vec<usize> = Vec::new();
        let mut root_group: std::collections::HashMap<u32, u32> = std::collections::HashMap::new();
        for i in 0..n {
            let r = uf.find(i as u32);
            let g = *root_group.entry(r).or_insert_with(|| {
                reps.push(i);
                (reps.len() - 1) as u32
            });
            group_of[i] = g;
            if simplices[i].weight > simplices[reps[g as usize]].weight {
                reps[g as usize] = i;
            }
        }
        let ng = reps.len();
        let mut normals: Vec<Point> = reps.iter().map(|&r| simplices[r].normal).collect();
        let mut offsets = vec![f64::NEG_INFINITY; ng];
        // Mesh point reindexing.
        let mut mesh_id = vec![u32::MAX; points.len()];
        let mut mesh_points: Vec<Point> = Vec::new();
        let mut point_groups: Vec<Vec<u32>> = Vec::new();
        let mut order: Vec<u32> = Vec::new();
        for s in &simplices {
            for &v in &s.verts[..d] {
                if mesh_id[v as usize] == u32::MAX {
                    order.push(v);
                    mesh_id[v as usize] = 0;
                }
            }
        }
        order.sort_unstable();
        for &v in &order {
            mesh_id[v as usize] = mesh_points.len() as u32;
            mesh_points.push(points[v as usize]);
            point_groups.push(Vec::new());
        }
        let mut mesh_simplices = Vec::with_capacity(n);
        for (i, s) in simplices.iter().enumerate() {
            let g = group_of[i];
            let mut ms = [u32::MAX; MAX_DIM];
            for k in 0..d {
                let m = mesh_id[s.verts[k] as usize];
                ms[k] = m;
                let pg = &mut point_groups[m as usize];
                if !pg.contains(&g) {
                    pg.push(g);
                }
                offsets[g as usize] = offsets[g as usize].max(normals[g as usize].dot(&points[s.verts[k] as usize]));
            }
            mesh_simplices.push(ms);
        }
        // Genuine vertices: incident facet normals span R^d.
        let mut vertex_id = vec![u32::MAX; mesh_points.len()];
        let mut vertices = Vec::new();
        for (m, groups) in point_groups.iter().enumerate() {
            if groups.len() < d {
                continue;
            }
            let ns: Vec<Point> = groups.iter().map(|&g| normals[g as usize]).collect();
            if linalg::rank(&ns, 1e-9) == d {
                vertex_id[m] = vertices.len() as u32;
                vertices.push(mesh_points[m]);
            }
        }
        let mut incidence: Vec<Vec<u32>> = vec![Vec::new(); ng];
        for (m, groups) in point_groups.iter().enumerate() {
            if vertex_id[m] != u32::MAX {
                for &g in groups {
                    incidence[g as usize].push(vertex_id[m]);
                }
            }
        }
        for inc in incidence.iter_mut() {
            inc.sort_unstable();
        }
        for (g, nrm) in normals.iter_mut().enumerate() {
            if !offsets[g].is_finite() {
                offsets[g] = nrm.dot(&interior);
            }
        }
        let facets = normals.into_iter().zip(offsets).map(|(normal, offset)| Halfspace { normal, offset }).collect();
        Polytope {
            dim: d,
            vertices,
            facets,
            incidence,
            mesh: Arc::new(Mesh { points: mesh_points, simplices: mesh_simplices, facet_of: group_of }),
            interior,
            cache: Arc::default(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    /// For each facet, sorted indices of the vertices lying on it.
    pub fn incidence(&self) -> &[Vec<u32>] {
        &self.incidence
    }

    /// A point strictly inside the polytope.
    pub fn interior_point(&self) -> Point {
        self.interior
    }

    pub(crate) fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    /// Largest violation max_f (⟨u_f, x⟩ − b_f); ≤ 0 inside.
    pub fn max_violation(&self, x: &Point) -> f64 {
        if self.facets.len() < TREE_MIN {
            return self.facets.iter().map(|h| -h.slack(x)).fold(f64::NEG_INFINITY, f64::max);
        }
        let tree = self.facet_tree();
        let mut w = x.coords().to_vec();
        w.push(-1.0);
        tree.argmax(&w).map(|(_, v)| v).unwrap_or(f64::NEG_INFINITY)
    }

    /// Index of the facet with the least slack at x, and that slack.
    pub fn min_slack_facet(&self, x: &Point) -> (usize, f64) {
        if self.facets.len() < TREE_MIN {
            return self.facets.iter().enumerate().map(|(i, h)| (i, h.slack(x))).fold((0, f64::INFINITY), |b, c| {
                if c.1 < b.1 {
                    c
                } else {
                    b
                }
            });
        }
        let mut w = x.coords().to_vec();
        w.push(-1.0);
        let (i, v) = self.facet_tree().argmax(&w).unwrap();
        (i, -v)
    }

    /// Facets whose slack at x is at most `s`.
    pub fn facets_with_slack_below(&self, x: &Point, s: f64) -> Vec<usize> {
        if self.facets.len() < TREE_MIN {
            return (0..self.facets.len()).filter(|&i| self.facets[i].slack(x) <= s).collect();
        }
        let mut w = x.coords().to_vec();
        w.push(-1.0);
        self.facet_tree().at_least(&w, -s)
    }

    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        self.max_violation(x) <= tol
    }

    /// Support value h(u) = max_v ⟨u, v⟩ and the index of a maximizing vertex.
    pub fn support(&self, u: &Point) -> (f64, usize) {
        if self.vertices.len() < TREE_MIN {
            let mut best = (f64::NEG_INFINITY, 0);
            for (i, v) in self.vertices.iter().enumerate() {
                let s = u.dot(v);
                if s > best.0 {
                    best = (s, i);
                }
            }
            return best;
        }
        let (i, v) = self.vertex_tree().argmax(u.coords()).unwrap();
        (v, i)
    }

    /// Indices of vertices with ⟨u, v⟩ ≥ t.
    pub fn vertices_above(&self, u: &Point, t: f64) -> Vec<usize> {
        if self.vertices.len() < TREE_MIN {
            return (0..self.vertices.len()).filter(|&i| u.dot(&self.vertices[i]) >= t).collect();
        }
        self.vertex_tree().at_least(u.coords(), t)
    }

    /// Indices of mesh points with ⟨u, p⟩ ≥ t.
    pub(crate) fn mesh_points_above(&self, u: &Point, t: f64) -> Vec<usize> {
        let pts = &self.mesh.points;
        if pts.len() < TREE_MIN {
            return (0..pts.len()).filter(|&i| u.dot(&pts[i]) >= t).collect();
        }
        self.cache
            .mesh_tree
            .get_or_init(|| LinearTree::new(self.dim, pts.iter().flat_map(|p| p.coords().to_vec()).collect()))
            .at_least(u.coords(), t)
    }

    /// CSR adjacency of mesh points along triangulation edges.
    pub(crate) fn mesh_adjacency(&self) -> (&[u32], &[u32]) {
        let (off, adj) = self.cache.adjacency.get_or_init(|| {
            let d = self.dim;
            let np = self.mesh.points.len();
            let mut pairs: Vec<(u32, u32)> = Vec::new();
            for s in &self.mesh.simplices {
                for a in 0..d {
                    for b in 0..d {
                        if a != b {
                            pairs.push((s[a], s[b]));
                        }
                    }
                }
            }
            pairs.sort_unstable();
            pairs.dedup();
            let mut off = vec![0u32; np + 1];
            for &(a, _) in &pairs {
                off[a as usize + 1] += 1;
            }
            for i in 0..np {
                off[i + 1] += off[i];
            }
            (off, pairs.into_iter().map(|p| p.1).collect())
        });
        (off, adj)
    }

    fn vertex_tree(&self) -> &LinearTree {
        self.cache
            .vertex_tree
            .get_or_init(|| LinearTree::new(self.dim, self.vertices.iter().flat_map(|p| p.coords().to_vec()).collect()))
    }

    fn facet_tree(&self) -> &LinearTree {
        self.cache.facet_tree.get_or_init(|| {
            let rows = self
                .facets
                .iter()
                .flat_map(|h| {
                    let mut r = h.normal.coords().to_vec();
                    r.push(h.offset);
                    r
                })
                .collect();
            LinearTree::new(self.dim + 1, rows)
        })
    }

    fn mass(&self) -> &(f64, Point) {
        self.cache.mass.get_or_init(|| {
            let d = self.dim;
            let c = self.interior;
            let fact: f64 = (1..=d).map(|k| k as f64).product();
            let mut vol = 0.0;
            let mut moment = Point::zeros(d);
            let mut edges = vec![Point::zeros(d); d];
            for s in &self.mesh.simplices {
                let mut sum = c;
                for k in 0..d {
                    let p = self.mesh.points[s[k] as usize];
                    edges[k] = p - c;
                    sum += p;
                }
                let v = linalg::det(&edges).abs() / fact;
                vol += v;
                moment += sum * (v / (d as f64 + 1.0));
            }
            (vol, moment * (1.0 / vol))
        })
    }

    /// Exact volume by cone decomposition from the interior point.
    pub fn volume(&self) -> f64 {
        self.mass().0
    }

    pub fn centroid(&self) -> Point {
        self.mass().1
    }

    /// Proper-face lattice (lazily computed, cached).
    pub fn lattice(&self) -> &FaceLattice {
        self.cache.lattice.get_or_init(|| FaceLattice::compute(self))
    }

    /// Image under an affine map; facets follow the inverse-transpose rule.
    pub fn map(&self, t: &AffineMap) -> Polytope {
        let vertices = self.vertices.iter().map(|v| t.apply(v)).collect();
        let facets = self
            .facets
            .iter()
            .map(|h| {
                let n = t.inverse_transpose(&h.normal);
                let b = h.offset + n.dot(&t.translation());
                let s = 1.0 / n.norm();
                Halfspace { normal: n * s, offset: b * s }
            })
            .collect();
        let mesh = Mesh {
            points: self.mesh.points.iter().map(|p| t.apply(p)).collect(),
            simplices: self.mesh.simplices.clone(),
            facet_of: self.mesh.facet_of.clone(),
        };
        Polytope {
            dim: self.dim,
            vertices,
            facets,
            incidence: self.incidence.clone(),
            mesh: Arc::new(mesh),
            interior: t.apply(&self.interior),
            cache: Arc::default(),
        }
    }

    /// Homothety about `center` by factor `s` > 0.
    pub fn scale_about(&self, center: &Point, s: f64) -> Polytope {
        let d = self.dim;
        let lin = nalgebra::DMatrix::identity(d, d) * s;
        let t = AffineMap::new(lin, *center * (1.0 - s)).expect("positive scale");
        self.map(&t)
    }

    /// Diameter bound: max distance of a vertex from the interior point.
    pub fn radius_about_interior(&self) -> f64 {
        self.vertices.iter().map(|v| v.dist(&self.interior)).fold(0.0, f64::max)
    }

    /// Axis-aligned bounding box.
    pub fn bbox(&self) -> (Point, Point) {
        let d = self.dim;
        let mut lo = Point::from_fn(d, |_| f64::INFINITY);
        let mut hi = Point::from_fn(d, |_| f64::NEG_INFINITY);
        for v in &self.vertices {
            for i in 0..d {
                lo[i] = lo[i].min(v[i]);
                hi[i] = hi[i].max(v[i]);
            }
        }
        (lo, hi)
    }
}
