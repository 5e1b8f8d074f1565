//! Text formats: point files, filtration files and diagram files.
//!
//! A filtration file starts with `#key value` header lines followed by one
//! simplex per line, `z;value;lens|lens|...`, each lens being comma-separated
//! input indices. Values are written with 17 significant digits and are
//! always `(1 + e')^z`, so the exponent is the source of truth.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::kdp::PointCloud;
use crate::oracle::ExactFiltration;
use crate::persistence::PersistenceDiagram;
use crate::sparse::{Grid, SparseFiltration};

/// Parses one point per line; coordinates are separated by whitespace or
/// commas. Blank lines and lines starting with `#` are skipped.
pub fn parse_points(text: &str) -> Result<PointCloud> {
    let mut points: Vec<Point> = Vec::new();
    let mut lines: Vec<usize> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let coords = trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<f64>().map_err(|e| Error::Parse { line, message: format!("{t:?}: {e}") })
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = points.first() {
            if first.dim() != coords.len() {
                return Err(Error::Parse {
                    line,
                    message: format!("expected {} coordinates, found {}", first.dim(), coords.len()),
                });
            }
        }
        points.push(Point::new(coords).map_err(|e| Error::Parse { line, message: e.to_string() })?);
        lines.push(line);
    }
    PointCloud::new(points).map_err(|e| match e {
        Error::DuplicatePoint { first, duplicate } => Error::Parse {
            line: lines[duplicate],
            message: format!("duplicate point (same as line {})", lines[first]),
        },
        other => other,
    })
}

pub fn read_points(path: impl AsRef<Path>) -> Result<PointCloud> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse { line: 0, message: format!("{}: {e}", path.display()) })?;
    parse_points(&text)
}

/// Contents of a filtration file with lenses in input indices.
#[derive(Debug, Clone, PartialEq)]
pub struct FiltrationFile {
    pub k: usize,
    pub epsilon: f64,
    pub eps_prime: f64,
    pub max_dim: usize,
    pub perm: Vec<usize>,
    pub z_floor: Option<i32>,
    /// `(z, lenses)` in file order.
    pub simplices: Vec<(i32, Vec<Vec<usize>>)>,
}

impl FiltrationFile {
    pub fn from_filtration(f: &SparseFiltration) -> Self {
        FiltrationFile {
            k: f.params.k,
            epsilon: f.params.epsilon,
            eps_prime: f.params.eps_prime,
            max_dim: f.params.m_max,
            perm: f.perm.order.clone(),
            z_floor: f.z_floor,
            simplices: f
                .simplices
                .iter()
                .map(|s| (s.z, s.vertices.iter().map(|l| f.lens_input_indices(l)).collect()))
                .collect(),
        }
    }

    pub fn grid(&self) -> Grid {
        Grid::new(self.eps_prime)
    }
}

fn join(items: impl IntoIterator<Item = String>, sep: &str) -> String {
    items.into_iter().collect::<Vec<_>>().join(sep)
}

pub fn format_filtration(file: &FiltrationFile) -> String {
    let grid = file.grid();
    let mut out = String::new();
    writeln!(out, "#k {}", file.k).unwrap();
    writeln!(out, "#epsilon {:.16e}", file.epsilon).unwrap();
    writeln!(out, "#eps_prime {:.16e}", file.eps_prime).unwrap();
    writeln!(out, "#max_dim {}", file.max_dim).unwrap();
    writeln!(out, "#perm {}", join(file.perm.iter().map(|i| i.to_string()), ",")).unwrap();
    if let Some(z) = file.z_floor {
        writeln!(out, "#z_floor {z}").unwrap();
    }
    for (z, lenses) in &file.simplices {
        let lenses = join(lenses.iter().map(|l| join(l.iter().map(|i| i.to_string()), ",")), "|");
        writeln!(out, "{z};{:.16e};{lenses}", grid.value(*z)).unwrap();
    }
    out
}

pub fn parse_filtration(text: &str) -> Result<FiltrationFile> {
    let mut k = None;
    let mut epsilon = None;
    let mut eps_prime = None;
    let mut max_dim = None;
    let mut perm = None;
    let mut z_floor = None;
    let mut simplices = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |message: String| Error::Parse { line, message };
        if raw.trim().is_empty() {
            continue;
        }
        if let Some(header) = raw.strip_prefix('#') {
            let (key, value) = header.split_once(' ').ok_or_else(|| err("header without value".into()))?;
            let bad = |e: &dyn std::fmt::Display| err(format!("{key}: {e}"));
            match key {
                "k" => k = Some(value.parse::<usize>().map_err(|e| bad(&e))?),
                "epsilon" => epsilon = Some(value.parse::<f64>().map_err(|e| bad(&e))?),
                "eps_prime" => eps_prime = Some(value.parse::<f64>().map_err(|e| bad(&e))?),
                "max_dim" => max_dim = Some(value.parse::<usize>().map_err(|e| bad(&e))?),
                "z_floor" => z_floor = Some(value.parse::<i32>().map_err(|e| bad(&e))?),
                "perm" => {
                    perm = Some(
                        value
                            .split(',')
                            .filter(|t| !t.is_empty())
                            .map(|t| t.parse::<usize>().map_err(|e| bad(&e)))
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
                _ => return Err(err(format!("unknown header {key:?}"))),
            }
            continue;
        }
        let mut fields = raw.splitn(3, ';');
        let (Some(z), Some(_value), Some(lenses)) = (fields.next(), fields.next(), fields.next()) else {
            return Err(err("expected z;value;lenses".into()));
        };
        let z = z.parse::<i32>().map_err(|e| err(format!("exponent: {e}")))?;
        let lenses = lenses
            .split('|')
            .map(|l| {
                l.split(',')
                    .map(|t| t.parse::<usize>().map_err(|e| err(format!("lens {l:?}: {e}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        simplices.push((z, lenses));
    }
    let missing = |what: &str| Error::Parse { line: 0, message: format!("missing #{what} header") };
    Ok(FiltrationFile {
        k: k.ok_or_else(|| missing("k"))?,
        epsilon: epsilon.ok_or_else(|| missing("epsilon"))?,
        eps_prime: eps_prime.ok_or_else(|| missing("eps_prime"))?,
        max_dim: max_dim.ok_or_else(|| missing("max_dim"))?,
        perm: perm.ok_or_else(|| missing("perm"))?,
        z_floor,
        simplices,
    })
}

/// Exact filtration as `radius;lens|lens|...` lines.
pub fn format_exact(exact: &ExactFiltration) -> String {
    let mut out = String::new();
    writeln!(out, "#k {}", exact.k).unwrap();
    for s in &exact.simplices {
        let lenses = join(
            s.vertices.iter().map(|&v| join(exact.lenses[v as usize].iter().map(|i| i.to_string()), ",")),
            "|",
        );
        writeln!(out, "{:.16e};{lenses}", s.radius).unwrap();
    }
    out
}

/// One `dim birth death` line per point; essential classes die at `inf`.
pub fn format_diagram(diagram: &PersistenceDiagram) -> String {
    let mut out = String::new();
    for (p, pts) in diagram.pairs.iter().enumerate() {
        for &(b, d) in pts {
            if d.is_infinite() {
                writeln!(out, "{p} {b:.16e} inf").unwrap();
            } else {
                writeln!(out, "{p} {b:.16e} {d:.16e}").unwrap();
            }
        }
    }
    out
}
