//! The k-distance permutation: a greedy ordering of the sites in which each
//! new site maximizes its distance to the k-th nearest already-ordered site.
//! For `k = 1` this is farthest-point sampling.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use ordered_float::OrderedFloat;

use crate::error::{Error, Result};
use crate::geometry::{dist, Point};
use crate::index::{KdIndex, RangeIndex};
use crate::scale::Scale;

/// Immutable, duplicate-free list of sites of a common dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Vec<Point>,
}

impl PointCloud {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let first = points.first().ok_or(Error::Empty)?;
        let d = first.dim();
        let mut seen: HashMap<Vec<u64>, usize> = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if p.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: p.dim() });
            }
            // -0.0 and 0.0 are the same site.
            let key: Vec<u64> = p.coords().iter().map(|c| (c + 0.0).to_bits()).collect();
            if let Some(&first) = seen.get(&key) {
                return Err(Error::DuplicatePoint { first, duplicate: i });
            }
            seen.insert(key, i);
        }
        Ok(PointCloud { points })
    }

    pub fn from_coords(coords: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(coords.into_iter().map(Point::new).collect::<Result<_>>()?)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn coords(&self, i: usize) -> &[f64] {
        self.points[i].coords()
    }

    pub fn coord_refs(&self) -> Vec<&[f64]> {
        self.points.iter().map(|p| p.coords()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KPermutation {
    /// `order[i]` is the input index of the `(i+1)`-th site.
    pub order: Vec<usize>,
    /// `lambdas[i]` belongs to `order[i]`; the first `k` are infinite.
    pub lambdas: Vec<Scale>,
}

impl KPermutation {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// `rank[input index] = position in the permutation`.
    pub fn ranks(&self) -> Vec<usize> {
        let mut rank = vec![0; self.order.len()];
        for (pos, &site) in self.order.iter().enumerate() {
            rank[site] = pos;
        }
        rank
    }
}

/// Distance from `x` to its `k`-th closest element of `set` (counted with
/// multiplicity; `x` itself contributes 0 if present).
pub fn k_distance<P: AsRef<[f64]>>(x: &[f64], set: &[P], k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    if set.len() < k {
        return Err(Error::TooFewPoints { needed: k, got: set.len() });
    }
    let mut d: Vec<f64> = Vec::with_capacity(set.len());
    for s in set {
        let s = s.as_ref();
        if s.len() != x.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), found: s.len() });
        }
        d.push(dist(x, s));
    }
    let (_, kth, _) = d.select_nth_unstable_by(k - 1, f64::total_cmp);
    Ok(*kth)
}

fn check_k(cloud: &PointCloud, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    if cloud.len() < k {
        return Err(Error::TooFewPoints { needed: k, got: cloud.len() });
    }
    Ok(())
}

/// Bounded max-heap holding the `k` smallest distances seen so far.
#[derive(Debug, Clone)]
struct NearestK {
    heap: BinaryHeap<OrderedFloat<f64>>,
    k: usize,
}

impl NearestK {
    fn new(k: usize) -> Self {
        NearestK { heap: BinaryHeap::with_capacity(k + 1), k }
    }

    fn kth(&self) -> f64 {
        self.heap.peek().map_or(f64::INFINITY, |v| v.0)
    }

    /// Returns true when the k-th distance changed.
    fn offer(&mut self, d: f64) -> bool {
        if self.heap.len() < self.k {
            self.heap.push(OrderedFloat(d));
            return self.heap.len() == self.k;
        }
        if d < self.kth() {
            let before = self.kth();
            self.heap.pop();
            self.heap.push(OrderedFloat(d));
            return self.kth() != before;
        }
        false
    }
}

fn seed_heaps(cloud: &PointCloud, k: usize) -> Vec<NearestK> {
    let pts = cloud.coord_refs();
    (0..cloud.len())
        .map(|y| {
            let mut t = NearestK::new(k);
            if y >= k {
                for &p in &pts[..k] {
                    t.offer(dist(pts[y], p));
                }
            }
            t
        })
        .collect()
}

/// Quadratic reference algorithm: linear scan for the argmax, then update
/// every unordered site. Ties go to the smallest input index.
pub fn kdp_simple(cloud: &PointCloud, k: usize) -> Result<KPermutation> {
    check_k(cloud, k)?;
    let n = cloud.len();
    let pts = cloud.coord_refs();
    let mut heaps = seed_heaps(cloud, k);
    let mut order: Vec<usize> = (0..k).collect();
    let mut lambdas = vec![Scale::Infinite; k];
    let mut unordered: Vec<usize> = (k..n).collect();
    while !unordered.is_empty() {
        let mut best = 0;
        for (slot, &y) in unordered.iter().enumerate() {
            if heaps[y].kth() > heaps[unordered[best]].kth() {
                best = slot;
            }
        }
        let p = unordered.remove(best);
        order.push(p);
        lambdas.push(Scale::Finite(heaps[p].kth()));
        for &y in &unordered {
            heaps[y].offer(dist(pts[p], pts[y]));
        }
    }
    Ok(KPermutation { order, lambdas })
}

/// Heap-driven algorithm: a global max-heap (lazy deletion) picks the next
/// site, and only unordered sites within `lambda_i` of the new site are
/// updated, found through a [`RangeIndex`].
pub fn kdp_fast(cloud: &PointCloud, k: usize) -> Result<KPermutation> {
    Ok(kdp_fast_counted(cloud, k)?.0)
}

/// As [`kdp_fast`], also returning the total number of range-query reports.
pub fn kdp_fast_counted(cloud: &PointCloud, k: usize) -> Result<(KPermutation, usize)> {
    check_k(cloud, k)?;
    let n = cloud.len();
    let pts = cloud.coord_refs();
    let mut heaps = seed_heaps(cloud, k);
    let mut index = KdIndex::new(pts.clone(), false);
    let mut queue: BinaryHeap<(OrderedFloat<f64>, Reverse<usize>)> = BinaryHeap::with_capacity(n);
    for (y, heap) in heaps.iter().enumerate().skip(k) {
        index.insert(y);
        queue.push((OrderedFloat(heap.kth()), Reverse(y)));
    }
    let mut ordered = vec![false; n];
    ordered[..k].iter_mut().for_each(|o| *o = true);
    let mut order: Vec<usize> = (0..k).collect();
    let mut lambdas = vec![Scale::Infinite; k];
    let mut reported = Vec::new();
    let mut total_reports = 0;
    while let Some((OrderedFloat(val), Reverse(p))) = queue.pop() {
        if ordered[p] || val != heaps[p].kth() {
            continue;
        }
        ordered[p] = true;
        order.push(p);
        lambdas.push(Scale::Finite(val));
        index.remove(p);
        reported.clear();
        index.query(pts[p], val, &mut reported);
        total_reports += reported.len();
        for &y in &reported {
            if heaps[y].offer(dist(pts[p], pts[y])) {
                queue.push((OrderedFloat(heaps[y].kth()), Reverse(y)));
            }
        }
    }
    debug_assert_eq!(order.len(), n);
    Ok((KPermutation { order, lambdas }, total_reports))
}

/// Diameter over minimum pairwise distance, by brute force.
pub fn spread(cloud: &PointCloud) -> Result<f64> {
    if cloud.len() < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: cloud.len() });
    }
    let pts = cloud.coord_refs();
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = dist(pts[i], pts[j]);
            lo = lo.min(d);
            hi = hi.max(d);
        }
    }
    Ok(hi / lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn line(xs: &[f64]) -> PointCloud {
        PointCloud::from_coords(xs.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    fn fin(v: &[f64]) -> Vec<Scale> {
        v.iter().map(|&x| if x.is_infinite() { Scale::Infinite } else { Scale::Finite(x) }).collect()
    }

    /// Brute-force argmax straight from the definition.
    fn kdp_definition(cloud: &PointCloud, k: usize) -> KPermutation {
        let pts = cloud.coord_refs();
        let mut order: Vec<usize> = (0..k).collect();
        let mut lambdas = vec![Scale::Infinite; k];
        while order.len() < cloud.len() {
            let prefix: Vec<&[f64]> = order.iter().map(|&i| pts[i]).collect();
            let mut best: Option<(f64, usize)> = None;
            for q in 0..cloud.len() {
                if order.contains(&q) {
                    continue;
                }
                let d = k_distance(pts[q], &prefix, k).unwrap();
                if best.map_or(true, |(bd, _)| d > bd) {
                    best = Some((d, q));
                }
            }
            let (d, q) = best.unwrap();
            order.push(q);
            lambdas.push(Scale::Finite(d));
        }
        KPermutation { order, lambdas }
    }

    #[test]
    fn k_distance_examples() {
        let s = [[0.0], [1.0], [3.0]];
        assert_eq!(k_distance(&[5.0], &s, 2).unwrap(), 4.0);
        assert_eq!(k_distance(&[1.0], &s, 1).unwrap(), 0.0);
        assert_eq!(k_distance(&[0.0], &s, 3).unwrap(), 3.0);
        assert_eq!(k_distance(&[0.0], &s, 4), Err(Error::TooFewPoints { needed: 4, got: 3 }));
    }

    #[test]
    fn simple_examples() {
        let p = kdp_simple(&line(&[0., 10., 1., 2.]), 1).unwrap();
        assert_eq!(p.order, vec![0, 1, 3, 2]);
        assert_eq!(p.lambdas, fin(&[f64::INFINITY, 10., 2., 1.]));

        let p = kdp_simple(&line(&[0., 1., 4., 5.]), 2).unwrap();
        assert_eq!(p.order, vec![0, 1, 3, 2]);
        assert_eq!(p.lambdas, fin(&[f64::INFINITY, f64::INFINITY, 5., 3.]));

        let p = kdp_simple(&line(&[3., 1., 2.]), 3).unwrap();
        assert_eq!(p.order, vec![0, 1, 2]);
        assert!(p.lambdas.iter().all(|l| l.is_infinite()));
    }

    #[test]
    fn fast_matches_examples() {
        for (xs, k) in [(vec![0., 10., 1., 2.], 1), (vec![0., 1., 4., 5.], 2), (vec![3., 1., 2.], 3)] {
            let c = line(&xs);
            assert_eq!(kdp_fast(&c, k).unwrap(), kdp_simple(&c, k).unwrap());
        }
    }

    #[test]
    fn fast_matches_on_collinear_evenly_spaced() {
        let c = line(&(0..60).map(|i| i as f64).collect::<Vec<_>>());
        assert_eq!(kdp_fast(&c, 2).unwrap(), kdp_simple(&c, 2).unwrap());
    }

    #[test]
    fn errors() {
        assert_eq!(kdp_simple(&line(&[0.]), 2), Err(Error::TooFewPoints { needed: 2, got: 1 }));
        assert!(matches!(kdp_fast(&line(&[0.]), 0), Err(Error::InvalidParameter(_))));
        assert_eq!(
            PointCloud::from_coords(vec![vec![0.0], vec![1.0], vec![-0.0]]),
            Err(Error::DuplicatePoint { first: 0, duplicate: 2 })
        );
    }

    #[test]
    fn spread_examples() {
        assert_eq!(spread(&line(&[0., 1.])).unwrap(), 1.0);
        assert_eq!(spread(&line(&[0., 1., 10.])).unwrap(), 10.0);
        assert_eq!(spread(&line(&[0., 1., 2., 3.])).unwrap(), 3.0);
        assert!(spread(&line(&[0.])).is_err());
    }

    fn cloud_strategy() -> impl Strategy<Value = (PointCloud, usize)> {
        (prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 2), 1..40), 1usize..5)
            .prop_filter_map("distinct", |(pts, k)| {
                let c = PointCloud::from_coords(pts).ok()?;
                (c.len() >= k).then_some((c, k))
            })
    }

    proptest! {
        #[test]
        fn simple_agrees_with_definition((cloud, k) in cloud_strategy()) {
            prop_assert_eq!(kdp_simple(&cloud, k).unwrap(), kdp_definition(&cloud, k));
        }

        #[test]
        fn fast_agrees_with_simple((cloud, k) in cloud_strategy()) {
            prop_assert_eq!(kdp_fast(&cloud, k).unwrap(), kdp_simple(&cloud, k).unwrap());
        }

        #[test]
        fn lambdas_non_increasing((cloud, k) in cloud_strategy()) {
            let p = kdp_fast(&cloud, k).unwrap();
            for w in p.lambdas.windows(2) {
                prop_assert!(w[1] <= w[0]);
            }
        }
    }

    #[test]
    fn grid_ties_resolve_identically() {
        let mut pts = Vec::new();
        for i in 0..12 {
            for j in 0..12 {
                pts.push(vec![i as f64, j as f64]);
            }
        }
        let c = PointCloud::from_coords(pts).unwrap();
        for k in 1..4 {
            assert_eq!(kdp_fast(&c, k).unwrap(), kdp_simple(&c, k).unwrap());
        }
    }
}
