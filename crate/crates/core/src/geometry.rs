//! Euclidean predicates: minimum enclosing balls of points and of balls, and
//! the common-intersection test for a family of closed balls.
//!
//! Both enclosing-ball routines are randomized (move-to-front for points, the
//! LP-type recursion for balls) and take an explicit seed so results are
//! reproducible bit for bit.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tol;

/// Seed used by the unseeded convenience wrappers.
pub const DEFAULT_SEED: u64 = 0x5eed_0f_ba11;

#[derive(Debug, Clone, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Empty);
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Point(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }
}

impl AsRef<[f64]> for Point {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

/// Closed ball `B_r(center)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !radius.is_finite() {
            return Err(Error::NonFinite);
        }
        if radius < 0.0 {
            return Err(Error::NegativeRadius(radius));
        }
        Ok(Ball { center, radius })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MebResult {
    pub center: Point,
    pub radius: f64,
    /// Indices into the input that determine the ball.
    pub support: Vec<usize>,
}

#[inline]
pub(crate) fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist2(a, b).sqrt()
}

pub fn squared_distance(a: &Point, b: &Point) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(dist2(a.coords(), b.coords()))
}

fn check_dims<P: AsRef<[f64]>>(points: &[P]) -> Result<usize> {
    let first = points.first().ok_or(Error::Empty)?;
    let d = first.as_ref().len();
    for p in points {
        let found = p.as_ref().len();
        if found != d {
            return Err(Error::DimensionMismatch { expected: d, found });
        }
    }
    Ok(d)
}

/// Solve the dense system `a x = b` (row-major `n x n`) in place by Gaussian
/// elimination with partial pivoting. Returns `None` when a pivot falls below
/// `1e-12` of the largest diagonal entry (affinely dependent input).
fn solve_in_place(a: &mut [f64], rhs: &mut [&mut [f64]], n: usize) -> Option<()> {
    let scale = (0..n).map(|i| a[i * n + i].abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return if n == 0 { Some(()) } else { None };
    }
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))
            .unwrap();
        if a[piv * n + col].abs() <= 1e-12 * scale {
            return None;
        }
        if piv != col {
            for c in 0..n {
                a.swap(piv * n + c, col * n + c);
            }
            for r in rhs.iter_mut() {
                r.swap(piv, col);
            }
        }
        let p = a[col * n + col];
        for row in col + 1..n {
            let f = a[row * n + col] / p;
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                a[row * n + c] -= f * a[col * n + c];
            }
            for r in rhs.iter_mut() {
                r[row] -= f * r[col];
            }
        }
    }
    for r in rhs.iter_mut() {
        for row in (0..n).rev() {
            let mut s = r[row];
            for c in row + 1..n {
                s -= a[row * n + c] * r[c];
            }
            r[row] = s / a[row * n + row];
        }
    }
    Some(())
}

/// Balls internally tangent to every input ball, with center in the affine
/// hull of the input centers: `|c - x_j| = R - r_j` for all `j`.
///
/// With all radii zero this is the circumsphere in the affine hull. Returns up
/// to two candidates (the equation in `R` is quadratic).
fn tangent_balls(centers: &[&[f64]], radii: &[f64]) -> Vec<(Vec<f64>, f64)> {
    let s = centers.len();
    let d = centers[0].len();
    if s == 1 {
        return vec![(centers[0].to_vec(), radii[0])];
    }
    let m = s - 1;
    if m > d {
        return Vec::new();
    }
    let x0 = centers[0];
    let r0 = radii[0];
    let v: Vec<Vec<f64>> = centers[1..]
        .iter()
        .map(|x| x.iter().zip(x0).map(|(a, b)| a - b).collect())
        .collect();
    let mut gram = vec![0.0; m * m];
    for i in 0..m {
        for j in i..m {
            let g: f64 = v[i].iter().zip(&v[j]).map(|(a, b)| a * b).sum();
            gram[i * m + j] = 2.0 * g;
            gram[j * m + i] = 2.0 * g;
        }
    }
    let mut alpha: Vec<f64> = (0..m)
        .map(|j| {
            let vv: f64 = v[j].iter().map(|a| a * a).sum();
            vv - radii[j + 1] * radii[j + 1] + r0 * r0
        })
        .collect();
    let mut beta: Vec<f64> = (0..m).map(|j| 2.0 * (radii[j + 1] - r0)).collect();
    if solve_in_place(&mut gram, &mut [&mut alpha, &mut beta], m).is_none() {
        return Vec::new();
    }
    // Center offset from x0 is a + R w.
    let mut a = vec![0.0; d];
    let mut w = vec![0.0; d];
    for j in 0..m {
        for t in 0..d {
            a[t] += alpha[j] * v[j][t];
            w[t] += beta[j] * v[j][t];
        }
    }
    let aa: f64 = a.iter().map(|x| x * x).sum();
    let aw: f64 = a.iter().zip(&w).map(|(x, y)| x * y).sum();
    let ww: f64 = w.iter().map(|x| x * x).sum();
    let qa = ww - 1.0;
    let qb = 2.0 * (aw + r0);
    let qc = aa - r0 * r0;
    let mut roots = Vec::with_capacity(2);
    if qa.abs() < 1e-12 {
        if qb.abs() > 0.0 {
            roots.push(-qc / qb);
        }
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            // Numerically stable pair of roots.
            let q = -0.5 * (qb + qb.signum() * sq);
            if q != 0.0 {
                roots.push(q / qa);
                roots.push(qc / q);
            } else {
                roots.push(0.0);
            }
        } else if disc > -1e-12 * (qb * qb).max(1.0) {
            roots.push(-qb / (2.0 * qa));
        }
    }
    let rmax = radii.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    roots
        .into_iter()
        .filter(|r| r.is_finite() && tol::leq(rmax, *r))
        .map(|r| {
            let c: Vec<f64> = (0..d).map(|t| x0[t] + a[t] + r * w[t]).collect();
            (c, r.max(rmax))
        })
        .collect()
}

/// Smallest ball enclosing all (center, radius) pairs in `ids`, found by
/// enumerating every support subset of size at most `d + 1`. Meant for the
/// handful of elements in an LP-type basis.
fn enclosing_by_subsets(
    centers: &[&[f64]],
    radii: &[f64],
    ids: &[usize],
) -> (Vec<f64>, f64, Vec<usize>) {
    let d = centers[0].len();
    let s = ids.len();
    let mut best: Option<(Vec<f64>, f64, Vec<usize>)> = None;
    let mut sub_c: Vec<&[f64]> = Vec::with_capacity(s);
    let mut sub_r: Vec<f64> = Vec::with_capacity(s);
    for mask in 1u32..(1u32 << s) {
        if mask.count_ones() as usize > d + 1 {
            continue;
        }
        sub_c.clear();
        sub_r.clear();
        for (bit, &id) in ids.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                sub_c.push(centers[id]);
                sub_r.push(radii[id]);
            }
        }
        for (c, _) in tangent_balls(&sub_c, &sub_r) {
            // Effective radius makes every candidate a true enclosing ball.
            let r_eff = ids
                .iter()
                .map(|&j| dist(&c, centers[j]) + radii[j])
                .fold(0.0, f64::max);
            if best.as_ref().map_or(true, |b| r_eff < b.1) {
                let support =
                    (0..s).filter(|bit| mask & (1 << bit) != 0).map(|bit| ids[bit]).collect();
                best = Some((c, r_eff, support));
            }
        }
    }
    best.unwrap_or_else(|| {
        // Only reachable for degenerate subsets; fall back to the first center.
        let c = centers[ids[0]].to_vec();
        let r = ids.iter().map(|&j| dist(&c, centers[j]) + radii[j]).fold(0.0, f64::max);
        (c, r, vec![ids[0]])
    })
}

struct Sphere {
    center: Vec<f64>,
    /// Squared radius; negative encodes the empty ball.
    r2: f64,
    support: Vec<usize>,
}

impl Sphere {
    #[inline]
    fn contains(&self, p: &[f64]) -> bool {
        self.r2 >= 0.0 && dist2(&self.center, p) <= self.r2 * (1.0 + 1e-12) + 1e-300
    }
}

fn sphere_through(pts: &[&[f64]], boundary: &[usize]) -> Sphere {
    let d = pts[0].len();
    match boundary.len() {
        0 => Sphere { center: vec![0.0; d], r2: -1.0, support: Vec::new() },
        1 => Sphere { center: pts[boundary[0]].to_vec(), r2: 0.0, support: boundary.to_vec() },
        _ => {
            let bc: Vec<&[f64]> = boundary.iter().map(|&i| pts[i]).collect();
            let zeros = vec![0.0; bc.len()];
            if let Some((c, r)) = tangent_balls(&bc, &zeros).into_iter().next() {
                return Sphere { center: c, r2: r * r, support: boundary.to_vec() };
            }
            let all: Vec<usize> = (0..bc.len()).collect();
            let (c, r, sup) = enclosing_by_subsets(&bc, &zeros, &all);
            Sphere { center: c, r2: r * r, support: sup.into_iter().map(|i| boundary[i]).collect() }
        }
    }
}

/// Move-to-front Welzl recursion over `order[..end]` with `boundary` fixed on
/// the sphere.
fn mtf(pts: &[&[f64]], order: &mut Vec<usize>, end: usize, boundary: &mut Vec<usize>) -> Sphere {
    let d = pts[0].len();
    let mut ball = sphere_through(pts, boundary);
    if boundary.len() == d + 1 {
        return ball;
    }
    let mut i = 0;
    while i < end {
        let p = order[i];
        if !ball.contains(pts[p]) {
            boundary.push(p);
            ball = mtf(pts, order, i, boundary);
            boundary.pop();
            order.remove(i);
            order.insert(0, p);
        }
        i += 1;
    }
    ball
}

pub fn min_enclosing_ball<P: AsRef<[f64]>>(points: &[P]) -> Result<MebResult> {
    min_enclosing_ball_seeded(points, DEFAULT_SEED)
}

/// Smallest enclosing ball of a point set (Welzl, move-to-front variant).
pub fn min_enclosing_ball_seeded<P: AsRef<[f64]>>(points: &[P], seed: u64) -> Result<MebResult> {
    check_dims(points)?;
    let pts: Vec<&[f64]> = points.iter().map(|p| p.as_ref()).collect();
    if pts.iter().any(|p| p.iter().any(|c| !c.is_finite())) {
        return Err(Error::NonFinite);
    }
    Ok(meb_points_raw(&pts, seed))
}

pub(crate) fn meb_points_raw(pts: &[&[f64]], seed: u64) -> MebResult {
    let mut order: Vec<usize> = (0..pts.len()).collect();
    if pts.len() > 2 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        order.shuffle(&mut rng);
    }
    let n = order.len();
    let mut boundary = Vec::with_capacity(pts[0].len() + 1);
    let ball = mtf(pts, &mut order, n, &mut boundary);
    let r2 = pts.iter().map(|p| dist2(&ball.center, p)).fold(ball.r2.max(0.0), f64::max);
    let mut support = ball.support;
    support.sort_unstable();
    MebResult { center: Point(ball.center), radius: r2.sqrt(), support }
}

/// Radius only; the hot path of the filtration builder.
#[inline]
pub(crate) fn meb_radius(pts: &[&[f64]], seed: u64) -> f64 {
    match pts.len() {
        1 => 0.0,
        2 => 0.5 * dist(pts[0], pts[1]),
        _ => meb_points_raw(pts, seed).radius,
    }
}

struct BallsProblem<'a> {
    centers: Vec<&'a [f64]>,
    radii: Vec<f64>,
}

#[derive(Clone)]
struct Basis {
    center: Vec<f64>,
    radius: f64,
    support: Vec<usize>,
}

impl BallsProblem<'_> {
    fn violates(&self, h: usize, b: &Basis) -> bool {
        if b.support.is_empty() {
            return true;
        }
        let reach = dist(&b.center, self.centers[h]) + self.radii[h];
        reach > b.radius + 1e-12 * b.radius.max(1e-300)
    }

    fn basis_of(&self, ids: &[usize]) -> Basis {
        let (center, radius, support) = enclosing_by_subsets(&self.centers, &self.radii, ids);
        Basis { center, radius, support }
    }

    /// Matoušek–Sharir–Welzl recursion: `c` is a basis candidate contained in
    /// `set`; elements are drawn from the back of `set` (already shuffled).
    fn solve(&self, set: &[usize], c: Basis) -> Basis {
        let Some(pos) = set.iter().rposition(|x| !c.support.contains(x)) else {
            return c;
        };
        let h = set[pos];
        let rest: Vec<usize> = set.iter().enumerate().filter(|&(i, _)| i != pos).map(|(_, &x)| x).collect();
        let b = self.solve(&rest, c);
        if !self.violates(h, &b) {
            return b;
        }
        let mut ids = b.support.clone();
        ids.push(h);
        let nb = self.basis_of(&ids);
        if !b.support.is_empty() && nb.radius <= b.radius {
            // No numerical progress; stop rather than cycle.
            return nb;
        }
        self.solve(set, nb)
    }
}

pub fn min_enclosing_ball_of_balls(balls: &[Ball]) -> Result<MebResult> {
    min_enclosing_ball_of_balls_seeded(balls, DEFAULT_SEED)
}

/// Smallest ball containing every input ball: LP-type randomized recursion
/// with subset enumeration for the basis step.
pub fn min_enclosing_ball_of_balls_seeded(balls: &[Ball], seed: u64) -> Result<MebResult> {
    let centers: Vec<&[f64]> = balls.iter().map(|b| b.center.coords()).collect();
    check_dims(&centers)?;
    let radii: Vec<f64> = balls.iter().map(|b| b.radius).collect();
    for &r in &radii {
        if !r.is_finite() {
            return Err(Error::NonFinite);
        }
        if r < 0.0 {
            return Err(Error::NegativeRadius(r));
        }
    }
    Ok(meb_balls_raw(centers, radii, seed))
}

fn meb_balls_raw(centers: Vec<&[f64]>, radii: Vec<f64>, seed: u64) -> MebResult {
    let problem = BallsProblem { centers, radii };
    let mut order: Vec<usize> = (0..problem.centers.len()).collect();
    if order.len() > 2 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        order.shuffle(&mut rng);
    }
    let empty = Basis { center: Vec::new(), radius: f64::NEG_INFINITY, support: Vec::new() };
    let b = problem.solve(&order, empty);
    let radius = (0..problem.centers.len())
        .map(|j| dist(&b.center, problem.centers[j]) + problem.radii[j])
        .fold(b.radius, f64::max);
    let mut support = b.support;
    support.sort_unstable();
    MebResult { center: Point(b.center), radius, support }
}

/// Depth of the deepest common point: `max_x min_j (r_j - |x - c_j|)`,
/// computed through the shrink-and-enclose reduction. Nonnegative (up to
/// rounding) exactly when the balls share a point; the maximizer is returned
/// alongside.
pub fn intersection_depth(balls: &[Ball]) -> Result<(f64, Point)> {
    let centers: Vec<&[f64]> = balls.iter().map(|b| b.center.coords()).collect();
    check_dims(&centers)?;
    let radii: Vec<f64> = balls.iter().map(|b| b.radius).collect();
    if radii.iter().any(|r| !r.is_finite()) {
        return Err(Error::NonFinite);
    }
    if let Some(&r) = radii.iter().find(|r| **r < 0.0) {
        return Err(Error::NegativeRadius(r));
    }
    Ok(depth_raw(&centers, &radii, DEFAULT_SEED))
}

pub(crate) fn depth_raw(centers: &[&[f64]], radii: &[f64], seed: u64) -> (f64, Point) {
    let s = radii.iter().cloned().fold(0.0, f64::max);
    let origin = centers[0];
    if s == 0.0 {
        let far = centers.iter().map(|c| dist(origin, c)).fold(0.0, f64::max);
        return (-far, Point(origin.to_vec()));
    }
    let scaled: Vec<Vec<f64>> = centers
        .iter()
        .map(|c| c.iter().zip(origin).map(|(a, b)| (a - b) / s).collect())
        .collect();
    let shrunk: Vec<f64> = radii.iter().map(|r| 1.0 - r / s).collect();
    let refs: Vec<&[f64]> = scaled.iter().map(|v| v.as_slice()).collect();
    let meb = meb_balls_raw(refs, shrunk, seed);
    let center: Vec<f64> = meb.center.0.iter().zip(origin).map(|(c, o)| c * s + o).collect();
    (s * (1.0 - meb.radius), Point(center))
}

/// True iff the closed balls have a common point (shared tolerance policy).
pub fn balls_have_common_point(balls: &[Ball]) -> Result<bool> {
    let centers: Vec<&[f64]> = balls.iter().map(|b| b.center.coords()).collect();
    check_dims(&centers)?;
    let radii: Vec<f64> = balls.iter().map(|b| b.radius).collect();
    if radii.iter().any(|r| !r.is_finite()) {
        return Err(Error::NonFinite);
    }
    if let Some(&r) = radii.iter().find(|r| **r < 0.0) {
        return Err(Error::NegativeRadius(r));
    }
    Ok(common_point_raw(&centers, &radii, DEFAULT_SEED))
}

pub(crate) fn common_point_raw(centers: &[&[f64]], radii: &[f64], seed: u64) -> bool {
    let s = radii.iter().cloned().fold(0.0, f64::max);
    if s == 0.0 {
        // Rescaling is undefined; compare centers directly.
        let origin = centers[0];
        return centers.iter().all(|c| dist(origin, c) <= tol::ABS_TOL);
    }
    let origin = centers[0];
    let scaled: Vec<Vec<f64>> = centers
        .iter()
        .map(|c| c.iter().zip(origin).map(|(a, b)| (a - b) / s).collect())
        .collect();
    let shrunk: Vec<f64> = radii.iter().map(|r| 1.0 - r / s).collect();
    let refs: Vec<&[f64]> = scaled.iter().map(|v| v.as_slice()).collect();
    let meb = meb_balls_raw(refs, shrunk, seed);
    tol::leq(meb.radius, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    fn ball(c: &[f64], r: f64) -> Ball {
        Ball::new(p(c), r).unwrap()
    }

    #[test]
    fn squared_distance_examples() {
        assert_eq!(squared_distance(&p(&[0., 0.]), &p(&[0., 0.])).unwrap(), 0.0);
        assert_eq!(squared_distance(&p(&[0., 0.]), &p(&[3., 4.])).unwrap(), 25.0);
        assert_eq!(squared_distance(&p(&[1., 1.]), &p(&[2., 3.])).unwrap(), 5.0);
        assert!(matches!(
            squared_distance(&p(&[0.]), &p(&[0., 1.])),
            Err(Error::DimensionMismatch { expected: 1, found: 2 })
        ));
    }

    #[test]
    fn point_rejects_non_finite() {
        assert_eq!(Point::new(vec![f64::NAN]), Err(Error::NonFinite));
        assert_eq!(Point::new(vec![]), Err(Error::Empty));
    }

    #[test]
    fn meb_diametral_pair() {
        let m = min_enclosing_ball(&[p(&[0., 0.]), p(&[2., 0.])]).unwrap();
        assert!((m.radius - 1.0).abs() < 1e-12);
        assert!((m.center.coords()[0] - 1.0).abs() < 1e-12);
        assert!(m.center.coords()[1].abs() < 1e-12);
    }

    #[test]
    fn meb_interior_third_point() {
        let m = min_enclosing_ball(&[p(&[0., 0.]), p(&[2., 0.]), p(&[1., 1.])]).unwrap();
        assert!((m.radius - 1.0).abs() < 1e-12);
        assert!((m.center.coords()[0] - 1.0).abs() < 1e-12);
        assert!(m.center.coords()[1].abs() < 1e-12);
    }

    #[test]
    fn meb_equilateral_triangle() {
        let h = 3f64.sqrt() / 2.0;
        let m = min_enclosing_ball(&[p(&[0., 0.]), p(&[1., 0.]), p(&[0.5, h])]).unwrap();
        assert!((m.radius - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(m.support.len(), 3);
    }

    #[test]
    fn meb_errors_on_empty_and_mixed_dims() {
        let empty: Vec<Point> = vec![];
        assert_eq!(min_enclosing_ball(&empty), Err(Error::Empty));
        assert!(matches!(
            min_enclosing_ball(&[p(&[0.]), p(&[0., 1.])]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn meb_collinear_points_do_not_break_support() {
        let pts: Vec<Point> = (0..7).map(|i| p(&[i as f64, 2.0 * i as f64])).collect();
        let m = min_enclosing_ball(&pts).unwrap();
        assert!((m.radius - 0.5 * (36.0f64 + 144.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn meb_of_balls_examples() {
        let m = min_enclosing_ball_of_balls(&[ball(&[0., 0.], 1.0)]).unwrap();
        assert_eq!(m.radius, 1.0);
        assert_eq!(m.center.coords(), &[0., 0.]);

        let m = min_enclosing_ball_of_balls(&[ball(&[0., 0.], 2.0), ball(&[0., 0.], 1.0)]).unwrap();
        assert!((m.radius - 2.0).abs() < 1e-12);

        let m = min_enclosing_ball_of_balls(&[ball(&[0., 0.], 1.0), ball(&[4., 0.], 1.0)]).unwrap();
        assert!((m.radius - 3.0).abs() < 1e-12);
        assert!((m.center.coords()[0] - 2.0).abs() < 1e-12);
        assert!(m.center.coords()[1].abs() < 1e-12);
    }

    #[test]
    fn meb_of_balls_unequal_pair() {
        // Extreme points on the line through the centers: -1 and 4 + 3.
        let m = min_enclosing_ball_of_balls(&[ball(&[0., 0.], 1.0), ball(&[4., 0.], 3.0)]).unwrap();
        assert!((m.radius - 4.0).abs() < 1e-12);
        assert!((m.center.coords()[0] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn meb_of_balls_rejects_bad_radii() {
        let b = Ball { center: p(&[0.]), radius: -1.0 };
        assert_eq!(min_enclosing_ball_of_balls(&[b]), Err(Error::NegativeRadius(-1.0)));
        assert_eq!(min_enclosing_ball_of_balls(&[]), Err(Error::Empty));
        assert_eq!(Ball::new(p(&[0.]), f64::INFINITY), Err(Error::NonFinite));
    }

    #[test]
    fn common_point_examples() {
        assert!(balls_have_common_point(&[ball(&[0.], 1.0), ball(&[2.], 1.0)]).unwrap());
        assert!(!balls_have_common_point(&[ball(&[0.], 1.0), ball(&[3.], 1.0)]).unwrap());
        // Side sqrt(3) triangle has circumradius exactly 1.
        let s = 3f64.sqrt();
        let tri = [ball(&[0., 0.], 1.0), ball(&[s, 0.], 1.0), ball(&[s / 2.0, 1.5], 1.0)];
        assert!(balls_have_common_point(&tri).unwrap());
        let tri_small = [ball(&[0., 0.], 0.99), ball(&[s, 0.], 0.99), ball(&[s / 2.0, 1.5], 0.99)];
        assert!(!balls_have_common_point(&tri_small).unwrap());
    }

    #[test]
    fn common_point_all_zero_radii() {
        assert!(balls_have_common_point(&[ball(&[1., 1.], 0.0), ball(&[1., 1.], 0.0)]).unwrap());
        assert!(!balls_have_common_point(&[ball(&[1., 1.], 0.0), ball(&[1., 2.], 0.0)]).unwrap());
    }

    #[test]
    fn common_point_with_point_ball_inside() {
        assert!(balls_have_common_point(&[ball(&[0., 0.], 2.0), ball(&[1., 1.], 0.0)]).unwrap());
        assert!(!balls_have_common_point(&[ball(&[0., 0.], 1.0), ball(&[1., 1.], 0.0)]).unwrap());
    }

    #[test]
    fn depth_matches_simple_case() {
        let (depth, c) = intersection_depth(&[ball(&[0.], 2.0), ball(&[2.], 2.0)]).unwrap();
        assert!((depth - 1.0).abs() < 1e-12);
        assert!((c.coords()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn seeded_output_is_deterministic() {
        let pts: Vec<Point> = (0..20)
            .map(|i| p(&[(i as f64 * 0.37).sin(), (i as f64 * 1.3).cos(), i as f64 * 0.01]))
            .collect();
        let a = min_enclosing_ball_seeded(&pts, 7).unwrap();
        let b = min_enclosing_ball_seeded(&pts, 7).unwrap();
        assert_eq!(a, b);
    }
}
