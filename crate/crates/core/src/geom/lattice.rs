//! Proper faces as the closure of facet vertex sets under intersection.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::linalg;
use super::point::Point;
use super::polytope::Polytope;

/// Face counts per dimension 0..d−1 and their sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityProfile {
    pub f_vector: Vec<usize>,
    pub total: usize,
}

impl ComplexityProfile {
    pub fn new(f_vector: Vec<usize>) -> Self {
        let total = f_vector.iter().sum();
        ComplexityProfile { f_vector, total }
    }

    /// f₀ − f₁ + f₂ − … (equals 1 − (−1)^d for a d-polytope).
    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector.iter().enumerate().map(|(k, &f)| if k % 2 == 0 { f as i64 } else { -(f as i64) }).sum()
    }
}

/// All proper nonempty faces, each given by its sorted vertex-index set.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    by_dim: Vec<Vec<Vec<u32>>>,
}

fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Affine dimension of a vertex subset.
pub(crate) fn face_dim(vertices: &[Point], set: &[u32]) -> usize {
    if set.len() <= 1 {
        return 0;
    }
    let p0 = vertices[set[0] as usize];
    let diffs: Vec<Point> = set[1..].iter().map(|&i| vertices[i as usize] - p0).collect();
    linalg::rank(&diffs, 1e-9)
}

impl FaceLattice {
    pub(crate) fn compute(p: &Polytope) -> FaceLattice {
        let d = p.dim();
        let inc = p.incidence();
        let mut vertex_facets: Vec<Vec<u32>> = vec![Vec::new(); p.vertices().len()];
        for (f, set) in inc.iter().enumerate() {
            for &v in set {
                vertex_facets[v as usize].push(f as u32);
            }
        }
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        let mut queue: VecDeque<Vec<u32>> = VecDeque::new();
        for set in inc {
            if !set.is_empty() && seen.insert(set.clone()) {
                queue.push_back(set.clone());
            }
        }
        let mut touching: Vec<u32> = Vec::new();
        while let Some(face) = queue.pop_front() {
            touching.clear();
            for &v in &face {
                touching.extend_from_slice(&vertex_facets[v as usize]);
            }
            touching.sort_unstable();
            touching.dedup();
            for &f in &touching {
                let x = intersect(&face, &inc[f as usize]);
                if x.len() < face.len() && !x.is_empty() && !seen.contains(&x) {
                    seen.insert(x.clone());
                    queue.push_back(x);
                }
            }
        }
        let mut by_dim: Vec<Vec<Vec<u32>>> = vec![Vec::new(); d];
        for face in seen {
            let k = face_dim(p.vertices(), &face).min(d - 1);
            by_dim[k].push(face);
        }
        for faces in by_dim.iter_mut() {
            faces.sort();
        }
        FaceLattice { by_dim }
    }

    /// Faces of dimension k (sorted).
    pub fn faces(&self, k: usize) -> &[Vec<u32>] {
        &self.by_dim[k]
    }

    pub fn profile(&self) -> ComplexityProfile {
        ComplexityProfile::new(self.by_dim.iter().map(|f| f.len()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_and_cube_counts() {
        let simplex: Vec<Point> =
            (0..4).map(|i| if i == 0 { Point::zeros(3) } else { Point::unit(3, i - 1) }).collect();
        let p = Polytope::hull(&simplex).unwrap();
        assert_eq!(p.lattice().profile().f_vector, vec![4, 6, 4]);
        let cube: Vec<Point> =
            (0..8).map(|m| Point::from_fn(3, |i| if m >> i & 1 == 1 { 1.0 } else { -1.0 })).collect();
        let c = Polytope::hull(&cube).unwrap();
        let prof = c.lattice().profile();
        assert_eq!(prof.f_vector, vec![8, 12, 6]);
        assert_eq!(prof.total, 26);
        assert_eq!(prof.euler_characteristic(), 2);
    }
}
