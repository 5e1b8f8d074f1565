//! The discrete sparse k-th order Čech filtration.
//!
//! Sites are processed in k-distance-permutation order. Site `p_i` gets a
//! freezing radius `crit_i = (1+e')·λ_i/e'` and a removal radius
//! `ω_i = (1+e')·crit_i`; a lens grows until its freezing radius, stays
//! frozen until its removal radius and then disappears. Every simplex is
//! generated exactly once, by the site of largest permutation index it
//! involves (the site it is *associated* to), from that site's friends.
//!
//! All indices in this module are permutation positions (0-based) unless
//! stated otherwise.

use std::collections::{HashMap, HashSet};
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{common_point_raw, depth_raw, dist, meb_radius};
use crate::index::{KdIndex, RangeIndex};
use crate::kdp::{kdp_fast, KPermutation, PointCloud};
use crate::scale::Scale;
use crate::tol;

/// Exponent standing in for `z = -inf` (zero-radius single-site lenses).
pub const Z_NEG_INF: i32 = i32::MIN;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub k: usize,
    pub epsilon: f64,
    pub eps_prime: f64,
    pub m_max: usize,
    pub seed: u64,
}

impl Params {
    pub fn new(k: usize, epsilon: f64, m_max: usize, seed: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1], got {epsilon}")));
        }
        Ok(Params { k, epsilon, eps_prime: epsilon / 3.0, m_max, seed })
    }
}

/// Powers of `1 + e'` anchored at exponent 0 = value 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    base: f64,
}

impl Grid {
    pub fn new(eps_prime: f64) -> Self {
        Grid { base: 1.0 + eps_prime }
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    pub fn value(&self, z: i32) -> f64 {
        self.base.powi(z)
    }

    /// Smallest `z` with `base^z >= r` (tolerant comparison). `r` must be
    /// positive and finite.
    pub fn ceil_exponent(&self, r: f64) -> i32 {
        debug_assert!(r > 0.0 && r.is_finite());
        let mut z = (r.ln() / self.base.ln()).ceil() as i32;
        while tol::leq(r, self.value(z - 1)) {
            z -= 1;
        }
        while !tol::leq(r, self.value(z)) {
            z += 1;
        }
        z
    }
}

/// Sorted, duplicate-free k-tuple of permutation positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LensId(Vec<usize>);

impl LensId {
    pub fn new(mut sites: Vec<usize>, k: usize) -> Result<Self> {
        sites.sort_unstable();
        if sites.len() != k {
            return Err(Error::InvalidLens(format!("expected {k} sites, got {}", sites.len())));
        }
        if sites.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidLens(format!("repeated site in {sites:?}")));
        }
        Ok(LensId(sites))
    }

    pub(crate) fn from_sorted(sites: Vec<usize>) -> Self {
        debug_assert!(sites.windows(2).all(|w| w[0] < w[1]));
        LensId(sites)
    }

    pub fn sites(&self) -> &[usize] {
        &self.0
    }

    /// Position of the latest site; it decides the lens freezing radius.
    pub fn max_site(&self) -> usize {
        *self.0.last().expect("lens is nonempty")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SiteSchedule {
    pub lambda: Vec<Scale>,
    pub crit: Vec<Scale>,
    pub omega: Vec<Scale>,
    pub eps_prime: f64,
}

impl SiteSchedule {
    pub fn new(perm: &KPermutation, eps_prime: f64) -> Self {
        let crit: Vec<Scale> =
            perm.lambdas.iter().map(|l| l.map_finite(|v| (1.0 + eps_prime) * v / eps_prime)).collect();
        let omega = crit.iter().map(|c| c.map_finite(|v| (1.0 + eps_prime) * v)).collect();
        SiteSchedule { lambda: perm.lambdas.clone(), crit, omega, eps_prime }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FilteredSimplex {
    /// Sorted lenses; an `m`-simplex has `m + 1` of them.
    pub vertices: Vec<LensId>,
    pub z: i32,
}

impl FilteredSimplex {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn value(&self, grid: &Grid) -> f64 {
        grid.value(self.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Present(i32),
    Absent,
}

/// Which branch of the critical-value procedure a candidate falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    /// All lenses still grow when the unrestricted lenses meet.
    Growing,
    /// The unrestricted lenses meet only after the first removal.
    Removed,
    /// The lenses may meet while some are frozen.
    Frozen,
}

/// Resource guard for [`build_filtration`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Limits {
    pub max_simplices: Option<usize>,
}

/// Points in permutation order together with the radius schedule. All
/// per-lens and per-simplex predicates live here.
#[derive(Debug, Clone)]
pub struct Context<'a> {
    pub points: Vec<&'a [f64]>,
    pub sched: SiteSchedule,
    pub grid: Grid,
    pub params: Params,
}

impl<'a> Context<'a> {
    pub fn new(cloud: &'a PointCloud, perm: &KPermutation, params: Params) -> Self {
        let points = perm.order.iter().map(|&i| cloud.coords(i)).collect();
        Context {
            points,
            sched: SiteSchedule::new(perm, params.eps_prime),
            grid: Grid::new(params.eps_prime),
            params,
        }
    }

    pub fn lens_freezing_radius(&self, lens: &LensId) -> Scale {
        self.sched.crit[lens.max_site()]
    }

    pub fn lens_removal_radius(&self, lens: &LensId) -> Scale {
        self.sched.omega[lens.max_site()]
    }

    /// Radius of the frozen lens at scale `r`, or `None` once it is removed.
    pub fn frozen_radius_at(&self, lens: &LensId, r: f64) -> Option<f64> {
        match self.lens_freezing_radius(lens) {
            Scale::Infinite => Some(r),
            Scale::Finite(c) if r < c => Some(r),
            Scale::Finite(c) => {
                let removal = self.sched.omega[lens.max_site()].finite().expect("finite");
                tol::leq(r, removal).then_some(c)
            }
        }
    }

    fn lens_alpha(&self, sites: &[usize]) -> f64 {
        let pts: Vec<&[f64]> = sites.iter().map(|&s| self.points[s]).collect();
        meb_radius(&pts, self.params.seed)
    }

    fn exponent(&self, r: f64) -> i32 {
        if r > 0.0 {
            self.grid.ceil_exponent(r)
        } else {
            Z_NEG_INF
        }
    }

    /// Grid exponent at which the lens cone becomes nonempty, provided the
    /// lens is born no later than `cap`.
    pub fn vertex_check(&self, lens: &LensId, cap: Scale) -> Option<i32> {
        let alpha = self.lens_alpha(lens.sites());
        cap.admits(alpha).then(|| self.exponent(alpha))
    }

    /// Whether the frozen lenses of `sigma` share a point at scale `r`.
    pub fn cones_intersect_at(&self, sigma: &[LensId], r: f64) -> Result<bool> {
        let (centers, radii) = self.frozen_balls(sigma, r)?;
        Ok(common_point_raw(&centers, &radii, self.params.seed))
    }

    /// Depth of the common intersection of the frozen lenses at `r`
    /// (negative when they are disjoint).
    pub fn cones_depth_at(&self, sigma: &[LensId], r: f64) -> Result<f64> {
        let (centers, radii) = self.frozen_balls(sigma, r)?;
        Ok(depth_raw(&centers, &radii, self.params.seed).0)
    }

    fn frozen_balls(&self, sigma: &[LensId], r: f64) -> Result<(Vec<&'a [f64]>, Vec<f64>)> {
        let mut centers = Vec::with_capacity(sigma.len() * self.params.k);
        let mut radii = Vec::with_capacity(centers.capacity());
        for lens in sigma {
            let rr = self
                .frozen_radius_at(lens, r)
                .ok_or_else(|| Error::LensRemoved(lens.sites().to_vec(), r))?;
            for &s in lens.sites() {
                centers.push(self.points[s]);
                radii.push(rr);
            }
        }
        Ok((centers, radii))
    }

    fn union_sites(sigma: &[LensId]) -> Vec<usize> {
        let mut sites: Vec<usize> = sigma.iter().flat_map(|l| l.sites().iter().copied()).collect();
        sites.sort_unstable();
        sites.dedup();
        sites
    }

    /// Radius at which the unrestricted lenses of `sigma` first meet.
    pub fn union_radius(&self, sigma: &[LensId]) -> f64 {
        self.lens_alpha(&Self::union_sites(sigma))
    }

    /// Smallest freezing radius among the lenses of `sigma`.
    pub fn min_freezing(&self, sigma: &[LensId]) -> Scale {
        sigma.iter().map(|l| self.lens_freezing_radius(l)).fold(Scale::Infinite, Scale::min)
    }

    pub fn simplex_case(&self, sigma: &[LensId]) -> Case {
        let r_meb = self.union_radius(sigma);
        self.case_of(r_meb, self.min_freezing(sigma))
    }

    fn case_of(&self, r_meb: f64, lambda: Scale) -> Case {
        if lambda.admits(r_meb) {
            Case::Growing
        } else if lambda.map_finite(|l| (1.0 + self.params.eps_prime) * l).admits(r_meb) {
            Case::Frozen
        } else {
            Case::Removed
        }
    }

    /// Membership and critical exponent of a candidate simplex (two or more
    /// lenses, each a filtration vertex).
    pub fn simplex_status(&self, sigma: &[LensId]) -> Status {
        let r_meb = self.union_radius(sigma);
        self.status_with(sigma, r_meb)
    }

    fn status_with(&self, sigma: &[LensId], r_meb: f64) -> Status {
        let lambda = self.min_freezing(sigma);
        match self.case_of(r_meb, lambda) {
            Case::Growing => Status::Present(self.exponent(r_meb)),
            Case::Removed => Status::Absent,
            Case::Frozen => {
                // The smallest removal radius among the lenses, taken from
                // the schedule so it matches the removal test bit for bit.
                let omega = sigma
                    .iter()
                    .map(|l| self.lens_removal_radius(l))
                    .fold(Scale::Infinite, Scale::min)
                    .finite()
                    .expect("frozen case has a finite removal radius");
                if !self.cones_intersect_at(sigma, omega).expect("radius within removal") {
                    return Status::Absent;
                }
                let z = self.grid.ceil_exponent(omega);
                let below = self.grid.value(z - 1);
                if below < omega && self.cones_intersect_at(sigma, below).expect("below removal") {
                    Status::Present(z - 1)
                } else {
                    Status::Present(z)
                }
            }
        }
    }

    /// Sites among positions `0..i` within `2·ω_i` of site `i`. `index` must
    /// hold exactly those positions.
    pub fn friends(&self, i: usize, index: &impl RangeIndex) -> Vec<usize> {
        let mut out = Vec::new();
        match self.sched.omega[i] {
            Scale::Infinite => out.extend((0..i).filter(|&j| index.contains(j))),
            Scale::Finite(w) => {
                index.query(self.points[i], 2.0 * w, &mut out);
                // Drop false friends reported by the approximate query.
                out.retain(|&j| tol::leq(dist(self.points[i], self.points[j]), 2.0 * w));
            }
        }
        out.sort_unstable();
        out
    }
}

/// A k-subset over a site's friend pool that can serve as a vertex.
struct Candidate {
    lens: LensId,
    z: i32,
}

/// Simplices associated to site `i`, generated from its friend list.
fn associated_simplices(
    ctx: &Context<'_>,
    i: usize,
    friends: &[usize],
    budget: &AtomicUsize,
    limit: usize,
) -> Result<Vec<FilteredSimplex>> {
    let k = ctx.params.k;
    let crit_i = ctx.sched.crit[i];
    let omega_i = ctx.sched.omega[i];
    let mut pool: Vec<usize> = friends.to_vec();
    pool.push(i);
    pool.sort_unstable();
    pool.dedup();

    // Every k-subset of the pool born before it could matter for site i.
    let mut candidates: Vec<Candidate> = Vec::new();
    let mut combo: Vec<usize> = (0..k).collect();
    if pool.len() >= k {
        loop {
            let sites: Vec<usize> = combo.iter().map(|&c| pool[c]).collect();
            let lens = LensId::from_sorted(sites);
            let cap = ctx.lens_freezing_radius(&lens).min(omega_i);
            if let Some(z) = ctx.vertex_check(&lens, cap) {
                candidates.push(Candidate { lens, z });
            }
            if !next_combination(&mut combo, pool.len()) {
                break;
            }
        }
    }

    let mut out: Vec<FilteredSimplex> = Vec::new();
    let mut level: Vec<Vec<u32>> = Vec::new();
    for (ci, c) in candidates.iter().enumerate() {
        if c.lens.max_site() == i {
            // Associated vertices are checked at crit_i itself.
            debug_assert!(ctx.vertex_check(&c.lens, crit_i).is_some());
            level.push(vec![ci as u32]);
            out.push(FilteredSimplex { vertices: vec![c.lens.clone()], z: c.z });
        }
    }
    charge(budget, level.len(), limit)?;

    let mut sigma: Vec<LensId> = Vec::new();
    for _dim in 1..=ctx.params.m_max {
        if level.is_empty() {
            break;
        }
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        let mut next: Vec<Vec<u32>> = Vec::new();
        for tau in &level {
            for ci in 0..candidates.len() as u32 {
                if tau.contains(&ci) {
                    continue;
                }
                let mut key = tau.clone();
                let pos = key.binary_search(&ci).unwrap_err();
                key.insert(pos, ci);
                if seen.contains(&key) {
                    continue;
                }
                sigma.clear();
                sigma.extend(key.iter().map(|&c| candidates[c as usize].lens.clone()));
                let status = ctx.simplex_status(&sigma);
                if let Status::Present(z) = status {
                    let z = key.iter().map(|&c| candidates[c as usize].z).fold(z, i32::max);
                    out.push(FilteredSimplex { vertices: sigma.clone(), z });
                    next.push(key.clone());
                }
                seen.insert(key);
            }
        }
        charge(budget, next.len(), limit)?;
        level = next;
    }

    if let Scale::Finite(w) = omega_i {
        debug_assert!(out.iter().all(|s| s
            .vertices
            .iter()
            .flat_map(|l| l.sites())
            .all(|&q| tol::leq(dist(ctx.points[q], ctx.points[i]), 2.0 * w))));
    }
    Ok(out)
}

fn charge(budget: &AtomicUsize, n: usize, limit: usize) -> Result<()> {
    let total = budget.fetch_add(n, Ordering::Relaxed) + n;
    if total > limit {
        return Err(Error::ResourceLimit { what: "simplices", count: total, limit });
    }
    Ok(())
}

/// Advances `combo` (strictly increasing indices below `n`) to the next
/// combination in lexicographic order.
pub(crate) fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    for pos in (0..k).rev() {
        if combo[pos] < n - k + pos {
            combo[pos] += 1;
            for later in pos + 1..k {
                combo[later] = combo[later - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparseFiltration {
    /// Sorted by `(z, dim, vertices)`.
    pub simplices: Vec<FilteredSimplex>,
    pub params: Params,
    pub perm: KPermutation,
    /// Exponent assigned to zero-radius vertices (only when `k = 1`).
    pub z_floor: Option<i32>,
    /// `associated[i][m]` counts `m`-simplices associated to position `i`.
    pub associated: Vec<Vec<usize>>,
}

impl SparseFiltration {
    pub fn grid(&self) -> Grid {
        Grid::new(self.params.eps_prime)
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn count_by_dim(&self) -> Vec<usize> {
        let mut counts = vec![0; self.params.m_max + 1];
        for s in &self.simplices {
            counts[s.dim()] += 1;
        }
        counts
    }

    /// Lens as sorted input indices.
    pub fn lens_input_indices(&self, lens: &LensId) -> Vec<usize> {
        let mut v: Vec<usize> = lens.sites().iter().map(|&s| self.perm.order[s]).collect();
        v.sort_unstable();
        v
    }

    /// Every facet is present with exponent no larger than its coface.
    pub fn check_closed(&self) -> Result<()> {
        let by_key: HashMap<&[LensId], i32> =
            self.simplices.iter().map(|s| (s.vertices.as_slice(), s.z)).collect();
        for s in &self.simplices {
            if s.vertices.len() < 2 {
                continue;
            }
            for skip in 0..s.vertices.len() {
                let facet: Vec<LensId> = s
                    .vertices
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != skip)
                    .map(|(_, l)| l.clone())
                    .collect();
                match by_key.get(facet.as_slice()) {
                    None => {
                        return Err(Error::InvalidFiltration(format!("missing facet {facet:?}")))
                    }
                    Some(&fz) if fz > s.z => {
                        return Err(Error::InvalidFiltration(format!(
                            "facet {facet:?} enters at {fz} after coface at {}",
                            s.z
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// Output size is at least `n - k`.
    pub fn lower_bound_holds(&self) -> bool {
        self.simplices.len() >= self.perm.len() - self.params.k
    }
}

/// Builds the discrete sparse filtration of `cloud`.
pub fn build_filtration(cloud: &PointCloud, params: Params) -> Result<SparseFiltration> {
    build_filtration_limited(cloud, params, Limits::default())
}

pub fn build_filtration_limited(
    cloud: &PointCloud,
    params: Params,
    limits: Limits,
) -> Result<SparseFiltration> {
    let perm = kdp_fast(cloud, params.k)?;
    build_from_permutation(cloud, perm, params, limits)
}

pub fn build_from_permutation(
    cloud: &PointCloud,
    perm: KPermutation,
    params: Params,
    limits: Limits,
) -> Result<SparseFiltration> {
    let n = cloud.len();
    let k = params.k;
    if n < k {
        return Err(Error::TooFewPoints { needed: k, got: n });
    }
    let ctx = Context::new(cloud, &perm, params);

    // Friends are gathered sequentially: positions leave the index from the
    // back, so it always holds exactly the predecessors of the current site.
    let mut index = KdIndex::new(ctx.points.clone(), true);
    let mut friends: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in (k..n).rev() {
        index.remove(i);
        friends[i] = ctx.friends(i, &index);
    }

    let limit = limits.max_simplices.unwrap_or(usize::MAX);
    let budget = AtomicUsize::new(0);
    let per_site: Vec<Result<Vec<FilteredSimplex>>> = (k..n)
        .into_par_iter()
        .map(|i| associated_simplices(&ctx, i, &friends[i], &budget, limit))
        .collect();

    // The first k sites carry infinite freezing radii and form one lens.
    let first = LensId::from_sorted((0..k).collect());
    let first_z = ctx.vertex_check(&first, Scale::Infinite).expect("infinite cap");
    charge(&budget, 1, limit)?;

    let mut associated = vec![vec![0usize; params.m_max + 1]; n];
    associated[k - 1][0] = 1;
    let mut simplices = vec![FilteredSimplex { vertices: vec![first], z: first_z }];
    for (offset, site) in per_site.into_iter().enumerate() {
        let site = site?;
        for s in &site {
            associated[k + offset][s.dim()] += 1;
        }
        simplices.extend(site);
    }

    let z_floor = if simplices.iter().any(|s| s.z == Z_NEG_INF) {
        let min_positive = simplices.iter().map(|s| s.z).filter(|&z| z != Z_NEG_INF).min();
        let floor = min_positive.map_or(0, |z| z - 1);
        for s in simplices.iter_mut().filter(|s| s.z == Z_NEG_INF) {
            s.z = floor;
        }
        Some(floor)
    } else {
        None
    };

    simplices.sort_unstable_by(|a, b| {
        (a.z, a.vertices.len(), &a.vertices).cmp(&(b.z, b.vertices.len(), &b.vertices))
    });
    let filtration = SparseFiltration { simplices, params, perm, z_floor, associated };
    debug_assert!(filtration.lower_bound_holds());
    Ok(filtration)
}

/// `k (96/e)^delta`: bound on the sites of a prefix near any one site.
pub fn gamma_bound(k: usize, epsilon: f64, delta: f64) -> f64 {
    k as f64 * (96.0 / epsilon).powf(delta)
}

/// `n Γ^{k m}`: bound on the number of `(m-1)`-simplices.
pub fn size_bound(n: usize, k: usize, epsilon: f64, delta: f64, m: usize) -> f64 {
    n as f64 * gamma_bound(k, epsilon, delta).powf((k * m) as f64)
}
