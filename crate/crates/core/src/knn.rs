//! k-d tree for k-nearest-neighbour distances.
//!
//! Points live in a flat row-major buffer. Axes can be marked periodic with
//! period one (phases in turns); distances along such axes wrap around.

use rayon::prelude::*;

use crate::transforms::phase_distance;

const LEAF_SIZE: usize = 16;

#[derive(Debug)]
struct Node {
    start: usize,
    end: usize,
    // children are `None` for leaves
    children: Option<(usize, usize)>,
}

#[derive(Debug)]
pub struct KdTree {
    points: Vec<f64>,
    dim: usize,
    periodic: Vec<bool>,
    index: Vec<usize>,
    nodes: Vec<Node>,
    // bounding boxes, `dim` entries per node
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl KdTree {
    /// Euclidean tree on non-periodic axes.
    pub fn new(points: Vec<f64>, dim: usize) -> Self {
        Self::with_periodic(points, dim, vec![false; dim])
    }

    pub fn with_periodic(points: Vec<f64>, dim: usize, periodic: Vec<bool>) -> Self {
        assert!(dim > 0 && points.len().is_multiple_of(dim));
        assert_eq!(periodic.len(), dim);
        let count = points.len() / dim;
        let mut tree = Self {
            points,
            dim,
            periodic,
            index: (0..count).collect(),
            nodes: Vec::new(),
            lo: Vec::new(),
            hi: Vec::new(),
        };
        if count > 0 {
            tree.build(0, count);
        }
        tree
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    fn build(&mut self, start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        self.nodes.push(Node {
            start,
            end,
            children: None,
        });
        let d = self.dim;
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for &i in &self.index[start..end] {
            for a in 0..d {
                let v = self.points[i * d + a];
                lo[a] = lo[a].min(v);
                hi[a] = hi[a].max(v);
            }
        }
        self.lo.extend_from_slice(&lo);
        self.hi.extend_from_slice(&hi);

        if end - start > LEAF_SIZE {
            let axis = (0..d)
                .max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b])))
                .unwrap_or(0);
            if hi[axis] > lo[axis] {
                let mid = (start + end) / 2;
                let pts = &self.points;
                self.index[start..end].select_nth_unstable_by(mid - start, |&i, &j| {
                    pts[i * d + axis].total_cmp(&pts[j * d + axis])
                });
                let left = self.build(start, mid);
                let right = self.build(mid, end);
                self.nodes[id].children = Some((left, right));
            }
        }
        id
    }

    #[inline]
    fn axis_gap(&self, axis: usize, a: f64, b: f64) -> f64 {
        if self.periodic[axis] {
            phase_distance(a, b)
        } else {
            (a - b).abs()
        }
    }

    fn dist2(&self, q: &[f64], i: usize) -> f64 {
        let p = self.point(i);
        (0..self.dim)
            .map(|a| {
                let g = self.axis_gap(a, q[a], p[a]);
                g * g
            })
            .sum()
    }

    fn box_dist2(&self, node: usize, q: &[f64]) -> f64 {
        let d = self.dim;
        let mut s = 0.0;
        for a in 0..d {
            let (lo, hi) = (self.lo[node * d + a], self.hi[node * d + a]);
            if q[a] < lo || q[a] > hi {
                let g = self.axis_gap(a, q[a], lo).min(self.axis_gap(a, q[a], hi));
                s += g * g;
            }
        }
        s
    }

    /// Distance from `q` to its `k`-th nearest point, skipping index
    /// `exclude`. Returns `∞` if fewer than `k` candidates exist.
    pub fn kth_distance(&self, q: &[f64], k: usize, exclude: Option<usize>) -> f64 {
        assert!(k > 0);
        let mut best = Vec::with_capacity(k + 1);
        if !self.nodes.is_empty() {
            self.search(0, q, k, exclude, &mut best);
        }
        if best.len() < k {
            f64::INFINITY
        } else {
            best[k - 1].sqrt()
        }
    }

    fn search(
        &self,
        node: usize,
        q: &[f64],
        k: usize,
        exclude: Option<usize>,
        best: &mut Vec<f64>,
    ) {
        let n = &self.nodes[node];
        match n.children {
            None => {
                for &i in &self.index[n.start..n.end] {
                    if Some(i) == exclude {
                        continue;
                    }
                    let d2 = self.dist2(q, i);
                    if best.len() < k || d2 < best[k - 1] {
                        let pos = best.partition_point(|&b| b <= d2);
                        best.insert(pos, d2);
                        best.truncate(k);
                    }
                }
            }
            Some((l, r)) => {
                let (dl, dr) = (self.box_dist2(l, q), self.box_dist2(r, q));
                let order = if dl <= dr {
                    [(l, dl), (r, dr)]
                } else {
                    [(r, dr), (l, dl)]
                };
                for (child, d) in order {
                    if best.len() < k || d < best[k - 1] {
                        self.search(child, q, k, exclude, best);
                    }
                }
            }
        }
    }

    /// `k`-th neighbour distance of every stored point among the others,
    /// in point order.
    pub fn self_kth_distances(&self, k: usize) -> Vec<f64> {
        (0..self.len())
            .into_par_iter()
            .map(|i| self.kth_distance(self.point(i), k, Some(i)))
            .collect()
    }

    /// `k`-th neighbour distance from each row of `queries` into this tree.
    pub fn cross_kth_distances(&self, queries: &[f64], k: usize) -> Vec<f64> {
        queries
            .par_chunks_exact(self.dim)
            .map(|q| self.kth_distance(q, k, None))
            .collect()
    }
}
