//! Dynamic spherical range reporting over a fixed universe of points.
//!
//! [`RangeIndex`] is the contract: `query(q, r)` reports every stored point at
//! distance `<= r` from `q` and none at distance `>= 2r`. [`KdIndex`] meets it
//! with a static kd-tree over the universe plus per-node live counts, so
//! insert and delete are `O(log n)` and dead subtrees are pruned.

use crate::geometry::dist2;

pub trait RangeIndex {
    fn insert(&mut self, id: usize);
    fn remove(&mut self, id: usize);
    fn contains(&self, id: usize) -> bool;
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    /// Appends matching ids to `out` (unordered).
    fn query(&self, q: &[f64], r: f64, out: &mut Vec<usize>);
}

const LEAF_SIZE: usize = 8;

#[derive(Debug, Clone)]
struct Node {
    lo: Vec<f64>,
    hi: Vec<f64>,
    parent: usize,
    live: usize,
    kind: NodeKind,
}

#[derive(Debug, Clone)]
enum NodeKind {
    Leaf { start: usize, end: usize },
    Inner { left: usize, right: usize },
}

#[derive(Debug, Clone)]
pub struct KdIndex<'a> {
    points: Vec<&'a [f64]>,
    nodes: Vec<Node>,
    /// Point ids in leaf order; leaves own contiguous ranges.
    slots: Vec<usize>,
    leaf_of: Vec<usize>,
    alive: Vec<bool>,
    count: usize,
}

impl<'a> KdIndex<'a> {
    /// Builds the tree over `points`; every id starts absent unless
    /// `all_present` is set.
    pub fn new(points: Vec<&'a [f64]>, all_present: bool) -> Self {
        let n = points.len();
        let mut idx = KdIndex {
            points,
            nodes: Vec::new(),
            slots: (0..n).collect(),
            leaf_of: vec![usize::MAX; n],
            alive: vec![false; n],
            count: 0,
        };
        if n > 0 {
            idx.build(0, n, usize::MAX);
        }
        if all_present {
            for id in 0..n {
                idx.insert(id);
            }
        }
        idx
    }

    fn build(&mut self, start: usize, end: usize, parent: usize) -> usize {
        let d = self.points[self.slots[start]].len();
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for &id in &self.slots[start..end] {
            for (t, &c) in self.points[id].iter().enumerate() {
                lo[t] = lo[t].min(c);
                hi[t] = hi[t].max(c);
            }
        }
        let me = self.nodes.len();
        self.nodes.push(Node { lo, hi, parent, live: 0, kind: NodeKind::Leaf { start, end } });
        if end - start <= LEAF_SIZE {
            for &id in &self.slots[start..end] {
                self.leaf_of[id] = me;
            }
            return me;
        }
        let node = &self.nodes[me];
        let axis = (0..d)
            .max_by(|&a, &b| (node.hi[a] - node.lo[a]).total_cmp(&(node.hi[b] - node.lo[b])))
            .unwrap();
        let mid = start + (end - start) / 2;
        let points = &self.points;
        self.slots[start..end]
            .select_nth_unstable_by(mid - start, |&a, &b| points[a][axis].total_cmp(&points[b][axis]));
        let left = self.build(start, mid, me);
        let right = self.build(mid, end, me);
        self.nodes[me].kind = NodeKind::Inner { left, right };
        me
    }

    fn bump(&mut self, id: usize, up: bool) {
        let mut node = self.leaf_of[id];
        while node != usize::MAX {
            let n = &mut self.nodes[node];
            if up {
                n.live += 1;
            } else {
                n.live -= 1;
            }
            node = n.parent;
        }
    }

    fn box_dist2(node: &Node, q: &[f64]) -> f64 {
        let mut s = 0.0;
        for (t, &c) in q.iter().enumerate() {
            let e = if c < node.lo[t] {
                node.lo[t] - c
            } else if c > node.hi[t] {
                c - node.hi[t]
            } else {
                0.0
            };
            s += e * e;
        }
        s
    }
}

impl RangeIndex for KdIndex<'_> {
    fn insert(&mut self, id: usize) {
        if !self.alive[id] {
            self.alive[id] = true;
            self.count += 1;
            self.bump(id, true);
        }
    }

    fn remove(&mut self, id: usize) {
        if self.alive[id] {
            self.alive[id] = false;
            self.count -= 1;
            self.bump(id, false);
        }
    }

    fn contains(&self, id: usize) -> bool {
        self.alive[id]
    }

    fn len(&self) -> usize {
        self.count
    }

    fn query(&self, q: &[f64], r: f64, out: &mut Vec<usize>) {
        if self.nodes.is_empty() || self.count == 0 {
            return;
        }
        // Slightly inflated so float rounding never drops a point at distance r.
        let r2 = if r.is_finite() { r * r * (1.0 + 1e-9) } else { f64::INFINITY };
        let mut stack = vec![0usize];
        while let Some(ni) = stack.pop() {
            let node = &self.nodes[ni];
            if node.live == 0 || Self::box_dist2(node, q) > r2 {
                continue;
            }
            match node.kind {
                NodeKind::Leaf { start, end } => {
                    for &id in &self.slots[start..end] {
                        if self.alive[id] && dist2(self.points[id], q) <= r2 {
                            out.push(id);
                        }
                    }
                }
                NodeKind::Inner { left, right } => {
                    stack.push(left);
                    stack.push(right);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn query_meets_two_approximate_contract(
            pts in prop::collection::vec(prop::collection::vec(-10.0f64..10.0, 2), 1..120),
            removed in prop::collection::vec(any::<bool>(), 120),
            q in prop::collection::vec(-12.0f64..12.0, 2),
            r in 0.01f64..8.0,
        ) {
            let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
            let mut idx = KdIndex::new(refs, true);
            for (i, &rm) in removed.iter().enumerate().take(pts.len()) {
                if rm { idx.remove(i); }
            }
            let mut out = Vec::new();
            idx.query(&q, r, &mut out);
            out.sort_unstable();
            for (i, p) in pts.iter().enumerate() {
                let d = dist2(p, &q).sqrt();
                let reported = out.binary_search(&i).is_ok();
                if idx.contains(i) && d <= r { prop_assert!(reported); }
                if d >= 2.0 * r || !idx.contains(i) { prop_assert!(!reported); }
            }
        }
    }

    #[test]
    fn insert_remove_roundtrip() {
        let pts = [vec![0.0], vec![1.0], vec![2.0]];
        let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
        let mut idx = KdIndex::new(refs, false);
        assert!(idx.is_empty());
        idx.insert(1);
        idx.insert(1);
        assert_eq!(idx.len(), 1);
        let mut out = Vec::new();
        idx.query(&[0.0], f64::INFINITY, &mut out);
        assert_eq!(out, vec![1]);
        idx.remove(1);
        out.clear();
        idx.query(&[0.0], f64::INFINITY, &mut out);
        assert!(out.is_empty());
    }
}
