//! Bounding-ball tree over rows in R^k answering linear-functional queries:
//! the maximizer of ⟨w, r⟩ and all rows with ⟨w, r⟩ ≥ t.

const LEAF: usize = 8;

#[derive(Clone, Debug)]
struct Node {
    center: Vec<f64>,
    radius: f64,
    start: usize,
    end: usize,
    children: Option<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct LinearTree {
    k: usize,
    rows: Vec<f64>,
    order: Vec<u32>,
    nodes: Vec<Node>,
}

impl LinearTree {
    /// Builds a tree over `n` rows of width `k` stored contiguously.
    pub fn new(k: usize, rows: Vec<f64>) -> Self {
        let n = if k == 0 { 0 } else { rows.len() / k };
        let mut t = LinearTree { k, rows, order: (0..n as u32).collect(), nodes: Vec::new() };
        if n > 0 {
            t.build(0, n);
        }
        t
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    #[inline]
    fn row(&self, i: u32) -> &[f64] {
        let i = i as usize * self.k;
        &self.rows[i..i + self.k]
    }

    fn build(&mut self, start: usize, end: usize) -> usize {
        let k = self.k;
        let mut lo = vec![f64::INFINITY; k];
        let mut hi = vec![f64::NEG_INFINITY; k];
        for &i in &self.order[start..end] {
            let r = &self.rows[i as usize * k..i as usize * k + k];
            for j in 0..k {
                lo[j] = lo[j].min(r[j]);
                hi[j] = hi[j].max(r[j]);
            }
        }
        let center: Vec<f64> = (0..k).map(|j| 0.5 * (lo[j] + hi[j])).collect();
        let mut radius: f64 = 0.0;
        for &i in &self.order[start..end] {
            let r = self.row(i);
            let d2: f64 = (0..k).map(|j| (r[j] - center[j]).powi(2)).sum();
            radius = radius.max(d2.sqrt());
        }
        let id = self.nodes.len();
        self.nodes.push(Node { center, radius: radius * (1.0 + 1e-12) + 1e-300, start, end, children: None });
        if end - start > LEAF {
            let axis = (0..k).max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b]))).unwrap();
            let mid = (start + end) / 2;
            let rows = &self.rows;
            self.order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
                rows[a as usize * k + axis].total_cmp(&rows[b as usize * k + axis])
            });
            let l = self.build(start, mid);
            let r = self.build(mid, end);
            self.nodes[id].children = Some((l, r));
        }
        id
    }

    #[inline]
    fn dot(w: &[f64], r: &[f64]) -> f64 {
        w.iter().zip(r).map(|(a, b)| a * b).sum()
    }

    /// Index and value of the row maximizing ⟨w, r⟩ (ties: smallest index).
    pub fn argmax(&self, w: &[f64]) -> Option<(usize, f64)> {
        if self.order.is_empty() {
            return None;
        }
        let wn = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut best = (usize::MAX, f64::NEG_INFINITY);
        let mut stack = vec![0usize];
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id];
            let ub = Self::dot(w, &node.center) + node.radius * wn;
            if ub < best.1 {
                continue;
            }
            match node.children {
                Some((l, r)) => {
                    let vl = Self::dot(w, &self.nodes[l].center);
                    let vr = Self::dot(w, &self.nodes[r].center);
                    if vl > vr {
                        stack.push(r);
                        stack.push(l);
                    } else {
                        stack.push(l);
                        stack.push(r);
                    }
                }
                None => {
                    for &i in &self.order[node.start..node.end] {
                        let v = Self::dot(w, self.row(i));
                        if v > best.1 || (v == best.1 && (i as usize) < best.0) {
                            best = (i as usize, v);
                        }
                    }
                }
            }
        }
        Some(best)
    }

    /// Indices of all rows with ⟨w, r⟩ ≥ t, in increasing order.
    pub fn at_least(&self, w: &[f64], t: f64) -> Vec<usize> {
        let mut out = Vec::new();
        if self.order.is_empty() {
            return out;
        }
        let wn = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut stack = vec![0usize];
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id];
            let c = Self::dot(w, &node.center);
            if c + node.radius * wn < t {
                continue;
            }
            if c - node.radius * wn >= t {
                out.extend(self.order[node.start..node.end].iter().map(|&i| i as usize));
                continue;
            }
            match node.children {
                Some((l, r)) => {
                    stack.push(l);
                    stack.push(r);
                }
                None => {
                    for &i in &self.order[node.start..node.end] {
                        if Self::dot(w, self.row(i)) >= t {
                            out.push(i as usize);
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}
