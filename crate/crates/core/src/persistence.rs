//! Persistent homology over Z/2 and the log-scale bottleneck distance.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// A simplex of a filtration, given by its sorted vertex ids.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub vertices: Vec<u32>,
    pub value: f64,
}

impl Cell {
    pub fn new(mut vertices: Vec<u32>, value: f64) -> Self {
        vertices.sort_unstable();
        Cell { vertices, value }
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }
}

/// Sorts cells by `(value, dim, vertices)`, the order expected by
/// [`compute_persistence`].
pub fn sort_cells(cells: &mut [Cell]) {
    cells.sort_by(|a, b| {
        a.value
            .total_cmp(&b.value)
            .then(a.vertices.len().cmp(&b.vertices.len()))
            .then_with(|| a.vertices.cmp(&b.vertices))
    });
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PersistenceDiagram {
    /// `pairs[p]` holds the `(birth, death)` points of dimension `p`;
    /// essential classes die at `f64::INFINITY`.
    pub pairs: Vec<Vec<(f64, f64)>>,
}

impl PersistenceDiagram {
    pub fn dim(&self, p: usize) -> &[(f64, f64)] {
        self.pairs.get(p).map_or(&[], |v| v.as_slice())
    }

    /// Number of classes alive at `t` in dimension `p`.
    pub fn betti_at(&self, p: usize, t: f64) -> usize {
        self.dim(p).iter().filter(|&&(b, d)| b <= t && t < d).count()
    }
}

/// Standard column reduction. Pairs of zero persistence are dropped.
/// Cells above dimension `max_dim + 1` are ignored.
pub fn compute_persistence(cells: &[Cell], max_dim: usize) -> Result<PersistenceDiagram> {
    let cells: Vec<&Cell> = cells.iter().filter(|c| c.dim() <= max_dim + 1).collect();
    let mut position: HashMap<&[u32], usize> = HashMap::with_capacity(cells.len());
    let mut columns: Vec<Vec<usize>> = Vec::with_capacity(cells.len());
    for (j, c) in cells.iter().enumerate() {
        if c.vertices.is_empty() || c.vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidFiltration(format!("bad vertex list {:?}", c.vertices)));
        }
        if j > 0 {
            let prev = cells[j - 1];
            let ordered = prev.value < c.value
                || (prev.value == c.value && prev.vertices.len() <= c.vertices.len());
            if !ordered {
                return Err(Error::InvalidFiltration(format!("cell {j} is out of order")));
            }
        }
        let mut col = Vec::with_capacity(c.vertices.len());
        if c.vertices.len() > 1 {
            let mut facet = Vec::with_capacity(c.vertices.len() - 1);
            for skip in 0..c.vertices.len() {
                facet.clear();
                facet.extend(c.vertices.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v));
                match position.get(facet.as_slice()) {
                    Some(&f) if cells[f].value <= c.value => col.push(f),
                    _ => {
                        return Err(Error::InvalidFiltration(format!(
                            "facet {facet:?} of {:?} missing or later",
                            c.vertices
                        )))
                    }
                }
            }
        }
        col.sort_unstable();
        if position.insert(&c.vertices, j).is_some() {
            return Err(Error::InvalidFiltration(format!("duplicate cell {:?}", c.vertices)));
        }
        columns.push(col);
    }

    let mut pivot_of: HashMap<usize, usize> = HashMap::new();
    let mut paired = vec![false; cells.len()];
    let mut diagram = PersistenceDiagram { pairs: vec![Vec::new(); max_dim + 1] };
    for j in 0..columns.len() {
        let mut col = std::mem::take(&mut columns[j]);
        while let Some(&low) = col.last() {
            match pivot_of.get(&low) {
                Some(&other) => col = symmetric_difference(&col, &columns[other]),
                None => break,
            }
        }
        if let Some(&low) = col.last() {
            pivot_of.insert(low, j);
            paired[low] = true;
            paired[j] = true;
            let (b, d) = (cells[low].value, cells[j].value);
            if b < d {
                diagram.pairs[cells[low].dim()].push((b, d));
            }
        }
        columns[j] = col;
    }
    for (j, c) in cells.iter().enumerate() {
        if !paired[j] && c.dim() <= max_dim {
            diagram.pairs[c.dim()].push((c.value, f64::INFINITY));
        }
    }
    for pts in &mut diagram.pairs {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    }
    Ok(diagram)
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Bottleneck distance between the diagrams after taking logarithms of all
/// coordinates; the maximum over dimensions. Essential classes are matched
/// only among themselves (infinite distance if their counts differ).
pub fn log_bottleneck(a: &PersistenceDiagram, b: &PersistenceDiagram) -> Result<f64> {
    let dims = a.pairs.len().max(b.pairs.len());
    let mut worst: f64 = 0.0;
    for p in 0..dims {
        worst = worst.max(log_bottleneck_dim(a.dim(p), b.dim(p))?);
    }
    Ok(worst)
}

fn to_log(pts: &[(f64, f64)]) -> Result<(Vec<(f64, f64)>, Vec<f64>)> {
    let mut finite = Vec::new();
    let mut essential = Vec::new();
    for &(b, d) in pts {
        if !(b > 0.0) {
            return Err(Error::NonPositiveCoordinate(b));
        }
        if d.is_infinite() {
            essential.push(b.ln());
        } else {
            finite.push((b.ln(), d.ln()));
        }
    }
    Ok((finite, essential))
}

pub fn log_bottleneck_dim(a: &[(f64, f64)], b: &[(f64, f64)]) -> Result<f64> {
    let (fa, mut ea) = to_log(a)?;
    let (fb, mut eb) = to_log(b)?;
    if ea.len() != eb.len() {
        return Ok(f64::INFINITY);
    }
    // Sorted order is optimal for a bottleneck matching on the line.
    ea.sort_by(f64::total_cmp);
    eb.sort_by(f64::total_cmp);
    let essential = ea.iter().zip(&eb).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    Ok(essential.max(finite_bottleneck(&fa, &fb)))
}

fn linf(p: (f64, f64), q: (f64, f64)) -> f64 {
    (p.0 - q.0).abs().max((p.1 - q.1).abs())
}

fn to_diagonal(p: (f64, f64)) -> f64 {
    (p.1 - p.0) / 2.0
}

fn finite_bottleneck(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let mut candidates: Vec<f64> = Vec::with_capacity(a.len() * b.len() + a.len() + b.len() + 1);
    candidates.push(0.0);
    for &p in a {
        candidates.push(to_diagonal(p));
        for &q in b {
            candidates.push(linf(p, q));
        }
    }
    candidates.extend(b.iter().map(|&q| to_diagonal(q)));
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching(a, b, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// Left side: points of `a`, then one diagonal slot per point of `b`.
/// Right side: points of `b`, then one diagonal slot per point of `a`.
fn perfect_matching(a: &[(f64, f64)], b: &[(f64, f64)], t: f64) -> bool {
    let (na, nb) = (a.len(), b.len());
    let size = na + nb;
    let adjacent = |l: usize, r: usize| -> bool {
        match (l < na, r < nb) {
            (true, true) => linf(a[l], b[r]) <= t,
            (true, false) => r - nb == l && to_diagonal(a[l]) <= t,
            (false, true) => l - na == r && to_diagonal(b[r]) <= t,
            (false, false) => true,
        }
    };
    let mut match_right: Vec<Option<usize>> = vec![None; size];
    for l in 0..size {
        let mut visited = vec![false; size];
        if !augment(l, &adjacent, &mut visited, &mut match_right) {
            return false;
        }
    }
    true
}

fn augment(
    l: usize,
    adjacent: &impl Fn(usize, usize) -> bool,
    visited: &mut [bool],
    match_right: &mut [Option<usize>],
) -> bool {
    for r in 0..match_right.len() {
        if visited[r] || !adjacent(l, r) {
            continue;
        }
        visited[r] = true;
        if match_right[r].map_or(true, |other| augment(other, adjacent, visited, match_right)) {
            match_right[r] = Some(l);
            return true;
        }
    }
    false
}
