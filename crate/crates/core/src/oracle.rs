//! Brute-force constructions for checking the sparse filtration at desk
//! scale: the exact k-th order Čech filtration, a dense grid scan of frozen
//! cone intersections, and validators for the permutation lemmas.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::meb_radius;
use crate::kdp::{k_distance, kdp_fast, kdp_simple, KPermutation, PointCloud};
use crate::persistence::{compute_persistence, log_bottleneck, sort_cells, Cell, PersistenceDiagram};
use crate::scale::Scale;
use crate::sparse::{
    build_filtration_limited, next_combination, Case, Context, Limits, LensId, Params, SparseFiltration, Status,
};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactLimits {
    pub max_lenses: usize,
    pub max_simplices: usize,
}

impl Default for ExactLimits {
    fn default() -> Self {
        ExactLimits { max_lenses: 100_000, max_simplices: 2_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactSimplex {
    /// Indices into [`ExactFiltration::lenses`], increasing.
    pub vertices: Vec<u32>,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactFiltration {
    pub k: usize,
    /// Every k-subset of input indices, lexicographic.
    pub lenses: Vec<Vec<usize>>,
    /// Sorted by `(radius, dim, vertices)`.
    pub simplices: Vec<ExactSimplex>,
}

impl ExactFiltration {
    pub fn lens_index(&self) -> HashMap<&[usize], u32> {
        self.lenses.iter().enumerate().map(|(i, l)| (l.as_slice(), i as u32)).collect()
    }

    pub fn cells(&self) -> Vec<Cell> {
        self.simplices.iter().map(|s| Cell { vertices: s.vertices.clone(), value: s.radius }).collect()
    }
}

fn binomial(n: usize, k: usize) -> Option<usize> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return None;
        }
    }
    Some(acc as usize)
}

/// Critical radius of the Čech simplex spanned by lenses given as input
/// indices: the enclosing radius of all involved sites.
pub fn cech_radius(cloud: &PointCloud, lenses: &[Vec<usize>], seed: u64) -> f64 {
    let mut sites: Vec<usize> = lenses.iter().flatten().copied().collect();
    sites.sort_unstable();
    sites.dedup();
    let pts: Vec<&[f64]> = sites.iter().map(|&s| cloud.coords(s)).collect();
    meb_radius(&pts, seed)
}

/// Exact k-th order Čech filtration up to dimension `m_max`, keeping
/// simplices with critical radius at most `r_max`.
pub fn exact_cech(
    cloud: &PointCloud,
    k: usize,
    m_max: usize,
    r_max: f64,
    limits: ExactLimits,
) -> Result<ExactFiltration> {
    let n = cloud.len();
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    if n < k {
        return Err(Error::TooFewPoints { needed: k, got: n });
    }
    let count = binomial(n, k).unwrap_or(usize::MAX);
    if count > limits.max_lenses {
        return Err(Error::ResourceLimit { what: "lenses", count, limit: limits.max_lenses });
    }
    let seed = crate::geometry::DEFAULT_SEED;
    let mut lenses = Vec::with_capacity(count);
    let mut combo: Vec<usize> = (0..k).collect();
    loop {
        lenses.push(combo.clone());
        if !next_combination(&mut combo, n) {
            break;
        }
    }

    let mut simplices: Vec<ExactSimplex> = Vec::new();
    let mut level: Vec<ExactSimplex> = Vec::new();
    for (i, l) in lenses.iter().enumerate() {
        let r = cech_radius(cloud, std::slice::from_ref(l), seed);
        if tol::leq(r, r_max) {
            level.push(ExactSimplex { vertices: vec![i as u32], radius: r });
        }
    }
    let guard = |len: usize| -> Result<()> {
        if len > limits.max_simplices {
            return Err(Error::ResourceLimit { what: "exact simplices", count: len, limit: limits.max_simplices });
        }
        Ok(())
    };
    guard(level.len())?;
    let alive: Vec<u32> = level.iter().map(|s| s.vertices[0]).collect();
    for _ in 1..=m_max {
        // Enclosing radii of nested site sets can disagree in the last bit;
        // lift each simplex to its largest facet so faces never come later.
        let previous: HashMap<&[u32], f64> = level.iter().map(|s| (s.vertices.as_slice(), s.radius)).collect();
        let mut next = Vec::new();
        for s in &level {
            let last = *s.vertices.last().expect("nonempty");
            let mut group: Vec<Vec<usize>> = s.vertices.iter().map(|&v| lenses[v as usize].clone()).collect();
            for &v in alive.iter().filter(|&&v| v > last) {
                group.push(lenses[v as usize].clone());
                let r = cech_radius(cloud, &group, seed);
                group.pop();
                if tol::leq(r, r_max) {
                    let mut vertices = s.vertices.clone();
                    vertices.push(v);
                    let mut radius = r.max(s.radius);
                    for skip in 0..vertices.len() - 1 {
                        let facet: Vec<u32> =
                            vertices.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &x)| x).collect();
                        match previous.get(facet.as_slice()) {
                            Some(&fr) => radius = radius.max(fr),
                            None => radius = f64::INFINITY,
                        }
                    }
                    if tol::leq(radius, r_max) {
                        next.push(ExactSimplex { vertices, radius });
                    }
                }
            }
            guard(simplices.len() + level.len() + next.len())?;
        }
        drop(previous);
        simplices.append(&mut level);
        level = next;
        if level.is_empty() {
            break;
        }
    }
    simplices.append(&mut level);
    simplices.sort_by(|a, b| {
        a.radius
            .total_cmp(&b.radius)
            .then(a.vertices.len().cmp(&b.vertices.len()))
            .then_with(|| a.vertices.cmp(&b.vertices))
    });
    Ok(ExactFiltration { k, lenses, simplices })
}

/// Sparse simplices whose Čech radius exceeds their filtration value.
/// Returns `(simplex as input-index lenses, cech radius, value)`.
pub fn containment_violations(
    cloud: &PointCloud,
    filtration: &SparseFiltration,
) -> Vec<(Vec<Vec<usize>>, f64, f64)> {
    let grid = filtration.grid();
    let mut bad = Vec::new();
    for s in &filtration.simplices {
        let lenses: Vec<Vec<usize>> = s.vertices.iter().map(|l| filtration.lens_input_indices(l)).collect();
        let r = cech_radius(cloud, &lenses, filtration.params.seed);
        let v = s.value(&grid);
        if !tol::leq(r, v) {
            bad.push((lenses, r, v));
        }
    }
    bad
}

/// Membership of every sparse simplex in the exact filtration at its value,
/// looked up in `exact` (which must cover radius up to the largest value).
pub fn contained_in_exact(filtration: &SparseFiltration, exact: &ExactFiltration) -> Result<()> {
    let ids = exact.lens_index();
    let radius: HashMap<&[u32], f64> =
        exact.simplices.iter().map(|s| (s.vertices.as_slice(), s.radius)).collect();
    let grid = filtration.grid();
    for s in &filtration.simplices {
        let mut key: Vec<u32> = s
            .vertices
            .iter()
            .map(|l| ids[filtration.lens_input_indices(l).as_slice()])
            .collect();
        key.sort_unstable();
        let v = s.value(&grid);
        match radius.get(key.as_slice()) {
            Some(&r) if tol::leq(r, v) => {}
            other => {
                return Err(Error::InvalidFiltration(format!(
                    "simplex {key:?} at {v} not in exact complex (radius {other:?})"
                )))
            }
        }
    }
    Ok(())
}

/// Filtration cells of a sparse filtration, lenses numbered in order of
/// appearance.
pub fn sparse_cells(filtration: &SparseFiltration) -> Vec<Cell> {
    let grid = filtration.grid();
    let mut ids: HashMap<&LensId, u32> = HashMap::new();
    for s in &filtration.simplices {
        if s.dim() == 0 {
            let next = ids.len() as u32;
            ids.entry(&s.vertices[0]).or_insert(next);
        }
    }
    let mut cells: Vec<Cell> = filtration
        .simplices
        .iter()
        .map(|s| Cell::new(s.vertices.iter().map(|l| ids[l]).collect(), s.value(&grid)))
        .collect();
    sort_cells(&mut cells);
    cells
}

/// Outcome of the fine grid scan for one candidate simplex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOutcome {
    pub status: Status,
    /// Smallest relative intersection depth `|depth| / r` over the radii at
    /// which the three-case procedure makes a decision (`inf` when it makes
    /// none).
    pub margin: f64,
}

/// Scans `r` over a multiplicative grid refining each `1 + e'` step
/// `resolution` times, from below the enclosing radius up to the first
/// removal radius, and reports the first grid power at or above the first
/// radius where the frozen cones meet.
pub fn grid_scan_status(ctx: &Context<'_>, sigma: &[LensId], resolution: u32) -> ScanOutcome {
    assert!(resolution >= 1);
    let grid = ctx.grid;
    let r_meb = ctx.union_radius(sigma);
    let lambda = ctx.min_freezing(sigma);
    let omega = lambda.map_finite(|l| (1.0 + ctx.params.eps_prime) * l);
    let removal = sigma.iter().map(|l| ctx.lens_removal_radius(l)).fold(Scale::Infinite, Scale::min);

    let z_meb = if r_meb > 0.0 { grid.ceil_exponent(r_meb) } else { 0 };
    let top = match removal {
        Scale::Finite(w) => w,
        Scale::Infinite => grid.value(z_meb + 1),
    };
    let mut z = z_meb.min(grid.ceil_exponent(top)) - 2;
    let step = grid.base().ln() / resolution as f64;
    let mut hit = None;
    'scan: loop {
        for j in 0..resolution {
            let r = if j == 0 { grid.value(z) } else { grid.value(z) * (step * j as f64).exp() };
            if r > top {
                break 'scan;
            }
            if ctx.cones_intersect_at(sigma, r).expect("scan stays below removal") {
                hit = Some(r);
                break 'scan;
            }
        }
        z += 1;
    }
    if hit.is_none() && !removal.is_infinite() && ctx.cones_intersect_at(sigma, top).expect("at removal") {
        hit = Some(top);
    }
    let status = match hit {
        Some(r) if r > 0.0 => Status::Present(grid.ceil_exponent(r)),
        Some(_) => Status::Present(crate::sparse::Z_NEG_INF),
        None => Status::Absent,
    };

    let margin = match (lambda.admits(r_meb), omega) {
        (true, _) => f64::INFINITY,
        (false, Scale::Finite(w)) if r_meb > w * (1.0 + tol::REL_TOL) => f64::INFINITY,
        _ => {
            let w = removal.finite().expect("frozen case");
            let below = grid.value(grid.ceil_exponent(w) - 1);
            let mut m = (ctx.cones_depth_at(sigma, w).expect("at removal") / w).abs();
            if below < w {
                m = m.min((ctx.cones_depth_at(sigma, below).expect("below removal") / below).abs());
            }
            m
        }
    };
    ScanOutcome { status, margin }
}

/// `(i, p)` pairs (prefix length, input index) violating the packing
/// property `d^k(p, P_i \ {p}) >= λ_i / 2` for `k + 1 <= i <= n`.
pub fn validate_packing(cloud: &PointCloud, perm: &KPermutation, k: usize) -> Vec<(usize, usize)> {
    let n = perm.len();
    let mut bad = Vec::new();
    for i in k + 1..=n {
        let Scale::Finite(lambda) = perm.lambdas[i - 1] else { continue };
        for a in 0..i {
            let p = perm.order[a];
            let others: Vec<&[f64]> =
                (0..i).filter(|&b| b != a).map(|b| cloud.coords(perm.order[b])).collect();
            let dk = k_distance(cloud.coords(p), &others, k).expect("prefix has k others");
            if !tol::leq(lambda / 2.0, dk) {
                bad.push((i, p));
            }
        }
    }
    bad
}

/// Sampled witnesses `(x, r, i)` violating
/// `L_r(P_i) ⊆ L(r, P) ⊆ L_{r + λ_{i+1}}(P_i)` for `k <= i <= n - 1`.
pub fn validate_covering(
    cloud: &PointCloud,
    perm: &KPermutation,
    k: usize,
    trials: usize,
    seed: u64,
) -> Vec<(Vec<f64>, f64, usize)> {
    let n = perm.len();
    let d = cloud.dim();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for p in cloud.points() {
        for (j, &c) in p.coords().iter().enumerate() {
            lo[j] = lo[j].min(c);
            hi[j] = hi[j].max(c);
        }
    }
    let diam = lo.iter().zip(&hi).map(|(a, b)| (b - a).powi(2)).sum::<f64>().sqrt().max(1.0);
    let all = cloud.coord_refs();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for _ in 0..trials {
        let x: Vec<f64> = if rng.gen_bool(0.5) {
            let s = cloud.coords(rng.gen_range(0..n));
            s.iter().map(|c| c + diam * 0.05 * rng.gen_range(-1.0..1.0)).collect()
        } else {
            lo.iter().zip(&hi).map(|(a, b)| rng.gen_range(*a..=*b)).collect()
        };
        // Any r at or above the k-distance certifies x ∈ L(r, P).
        let dk_all = k_distance(&x, &all, k).expect("n >= k");
        let r = dk_all + rng.gen_range(0.0..0.25) * diam;
        for i in k..n {
            let prefix: Vec<&[f64]> = perm.order[..i].iter().map(|&q| cloud.coords(q)).collect();
            let dk_prefix = k_distance(&x, &prefix, k).expect("prefix has k sites");
            let lambda = perm.lambdas[i].finite().expect("positions past k are finite");
            let inner = !tol::leq(dk_prefix, r) || tol::leq(dk_all, r);
            let outer = tol::leq(dk_prefix, r + lambda);
            if !(inner && outer) {
                bad.push((x.clone(), r, i));
            }
        }
    }
    bad
}

/// Result of [`verify_instance`]: one message per failed check.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: usize,
    pub violations: Vec<String>,
    pub log_bottleneck: Option<f64>,
}

impl VerifyReport {
    fn check(&mut self, ok: bool, message: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations.push(message());
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Diagrams of dimensions `0..=max_dim` for the sparse and exact filtrations.
pub fn diagrams(
    filtration: &SparseFiltration,
    exact: &ExactFiltration,
    max_dim: usize,
) -> Result<(PersistenceDiagram, PersistenceDiagram)> {
    let sparse = compute_persistence(&sparse_cells(filtration), max_dim)?;
    let exact = compute_persistence(&exact.cells(), max_dim)?;
    Ok((sparse, exact))
}

/// Runs every check available for one instance: permutation equivalence,
/// both lemmas, filtration closure and lower bound, containment in the exact
/// complex, three-case agreement with the grid scan and (for `k >= 2`) the
/// log-bottleneck interleaving certificate on dimensions 0 and 1.
pub fn verify_instance(cloud: &PointCloud, params: Params, covering_trials: usize) -> Result<VerifyReport> {
    let k = params.k;
    let mut report = VerifyReport::default();
    let simple = kdp_simple(cloud, k)?;
    let fast = kdp_fast(cloud, k)?;
    report.check(simple == fast, || "kdp_fast differs from kdp_simple".into());
    let packing = validate_packing(cloud, &fast, k);
    report.check(packing.is_empty(), || format!("packing violations: {packing:?}"));
    let covering = validate_covering(cloud, &fast, k, covering_trials, params.seed);
    report.check(covering.is_empty(), || format!("{} covering violations", covering.len()));

    let filtration = build_filtration_limited(cloud, params, Limits::default())?;
    report.check(filtration.check_closed().is_ok(), || format!("{:?}", filtration.check_closed()));
    report.check(filtration.lower_bound_holds(), || {
        format!("{} simplices < n - k = {}", filtration.len(), cloud.len() - k)
    });
    let violations = containment_violations(cloud, &filtration);
    report.check(violations.is_empty(), || format!("containment violations: {violations:?}"));

    // Every frozen-case simplex is scanned; the growing ones are sampled.
    let ctx = Context::new(cloud, &filtration.perm, params);
    let higher: Vec<_> = filtration.simplices.iter().filter(|s| s.dim() > 0).collect();
    let stride = (higher.len() / 200).max(1);
    for (j, s) in higher.iter().enumerate() {
        if j % stride != 0 && ctx.simplex_case(&s.vertices) == Case::Growing {
            continue;
        }
        let scan = grid_scan_status(&ctx, &s.vertices, 8);
        let status = ctx.simplex_status(&s.vertices);
        if scan.margin > 1e-4 {
            report.check(scan.status == status, || format!("grid scan {scan:?} vs {status:?}"));
        }
    }

    if k >= 2 {
        let r_max = filtration.simplices.last().map_or(0.0, |s| s.value(&filtration.grid()));
        let exact = exact_cech(cloud, k, params.m_max.min(2), f64::INFINITY, ExactLimits::default())?;
        let within = contained_in_exact(&filtration, &exact);
        report.check(within.is_ok(), || format!("{within:?} (r_max {r_max})"));
        if params.m_max >= 2 {
            let (ds, de) = diagrams(&filtration, &exact, 1)?;
            let dist = log_bottleneck(&ds, &de)?;
            let bound = (1.0 + params.epsilon).ln() + 1e-6;
            report.log_bottleneck = Some(dist);
            report.check(dist <= bound, || format!("log bottleneck {dist} > {bound}"));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::build_filtration;

    fn line(xs: &[f64]) -> PointCloud {
        PointCloud::from_coords(xs.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    fn random_cloud(n: usize, seed: u64) -> PointCloud {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        PointCloud::from_coords((0..n).map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()]).collect()).unwrap()
    }

    #[test]
    fn exact_single_lens() {
        let cloud = line(&[0., 2.]);
        let e = exact_cech(&cloud, 2, 2, f64::INFINITY, ExactLimits::default()).unwrap();
        assert_eq!(e.simplices.len(), 1);
        assert_eq!(e.simplices[0].radius, 1.0);
    }

    #[test]
    fn exact_four_points_example() {
        let cloud = line(&[0., 1., 4., 5.]);
        let e = exact_cech(&cloud, 2, 1, f64::INFINITY, ExactLimits::default()).unwrap();
        let ids = e.lens_index();
        let (a, b) = (ids[[0usize, 1].as_slice()], ids[[0usize, 2].as_slice()]);
        let radius = |v: &[u32]| e.simplices.iter().find(|s| s.vertices == v).unwrap().radius;
        assert_eq!(radius(&[a]), 0.5);
        assert_eq!(radius(&[b]), 2.0);
        assert_eq!(radius(&[a, b]), 2.0);
    }

    #[test]
    fn exact_k_one_is_cech() {
        let cloud = line(&[0., 3., 7.]);
        let e = exact_cech(&cloud, 1, 1, f64::INFINITY, ExactLimits::default()).unwrap();
        let radii: Vec<f64> = e.simplices.iter().map(|s| s.radius).collect();
        assert_eq!(radii, vec![0., 0., 0., 1.5, 2.0, 3.5]);
    }

    #[test]
    fn exact_guard_trips() {
        let cloud = random_cloud(30, 1);
        let limits = ExactLimits { max_lenses: 1000, ..Default::default() };
        assert!(matches!(
            exact_cech(&cloud, 4, 1, f64::INFINITY, limits),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn exact_is_permutation_invariant() {
        let cloud = random_cloud(7, 2);
        let mut reversed: Vec<Vec<f64>> = cloud.points().iter().map(|p| p.coords().to_vec()).collect();
        reversed.reverse();
        let other = PointCloud::from_coords(reversed).unwrap();
        let radii = |c: &PointCloud| -> Vec<f64> {
            exact_cech(c, 2, 2, f64::INFINITY, ExactLimits::default())
                .unwrap()
                .simplices
                .iter()
                .map(|s| s.radius)
                .collect()
        };
        let (a, b) = (radii(&cloud), radii(&other));
        assert_eq!(a.len(), b.len());
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= 1e-12 * x.max(1.0)));
    }

    #[test]
    fn sparse_simplices_are_cech_simplices() {
        for seed in 0..5 {
            let cloud = random_cloud(9, seed);
            let f = build_filtration(&cloud, Params::new(2, 1.0, 2, 0).unwrap()).unwrap();
            assert!(containment_violations(&cloud, &f).is_empty());
            let e = exact_cech(&cloud, 2, 2, f64::INFINITY, ExactLimits::default()).unwrap();
            contained_in_exact(&f, &e).unwrap();
        }
    }

    #[test]
    fn packing_holds_and_mutation_is_caught() {
        let cloud = random_cloud(25, 3);
        let perm = kdp_fast(&cloud, 2).unwrap();
        assert!(validate_packing(&cloud, &perm, 2).is_empty());
        let mut corrupted = perm.clone();
        for l in corrupted.lambdas.iter_mut().skip(2) {
            *l = l.map_finite(|v| v * 10.0);
        }
        assert!(!validate_packing(&cloud, &corrupted, 2).is_empty());
    }

    #[test]
    fn covering_holds_and_mutation_is_caught() {
        let cloud = random_cloud(25, 4);
        let perm = kdp_fast(&cloud, 3).unwrap();
        assert!(validate_covering(&cloud, &perm, 3, 200, 9).is_empty());
        let mut corrupted = perm.clone();
        for l in corrupted.lambdas.iter_mut().skip(3) {
            *l = l.map_finite(|v| v * 1e-6);
        }
        assert!(!validate_covering(&cloud, &corrupted, 3, 200, 9).is_empty());
    }

    #[test]
    fn grid_scan_agrees_on_built_simplices() {
        let cloud = random_cloud(10, 6);
        let params = Params::new(2, 0.5, 2, 0).unwrap();
        let f = build_filtration(&cloud, params).unwrap();
        let ctx = Context::new(&cloud, &f.perm, params);
        for s in f.simplices.iter().filter(|s| s.dim() > 0) {
            let scan = grid_scan_status(&ctx, &s.vertices, 8);
            if scan.margin > 1e-4 {
                assert_eq!(scan.status, ctx.simplex_status(&s.vertices));
            }
        }
    }

    #[test]
    fn verify_small_instance() {
        let cloud = random_cloud(8, 7);
        let report = verify_instance(&cloud, Params::new(2, 1.0, 2, 0).unwrap(), 100).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
        assert!(report.log_bottleneck.is_some());
    }
}
