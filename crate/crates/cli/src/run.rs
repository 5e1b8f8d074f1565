use std::fmt::{self, Write as _};
use std::io::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparse_kfold::io::{format_diagram, format_exact, format_filtration, read_points, FiltrationFile};
use sparse_kfold::oracle::{exact_cech, sparse_cells, verify_instance, ExactLimits};
use sparse_kfold::persistence::compute_persistence;
use sparse_kfold::sparse::{build_filtration_limited, gamma_bound, size_bound, Limits};
use sparse_kfold::{Error, Params, PointCloud};

use crate::config::{Mode, RunConfig, Which};

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;
pub const EXIT_VERIFY: u8 = 4;

#[derive(Debug)]
pub enum RunError {
    Usage(String),
    Core(Error),
    Io(std::io::Error),
    Verify(usize),
}

impl RunError {
    pub fn code(&self) -> u8 {
        match self {
            RunError::Usage(_) => EXIT_USAGE,
            RunError::Core(Error::ResourceLimit { .. }) => EXIT_RESOURCE,
            RunError::Core(Error::InvalidParameter(_)) => EXIT_USAGE,
            RunError::Core(_) | RunError::Io(_) => EXIT_PARSE,
            RunError::Verify(_) => EXIT_VERIFY,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Usage(m) => write!(f, "{m}"),
            RunError::Core(e) => write!(f, "{e}"),
            RunError::Io(e) => write!(f, "{e}"),
            RunError::Verify(n) => write!(f, "{n} verification failure(s)"),
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Core(e)
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

pub fn run(config: &RunConfig) -> Result<(), RunError> {
    config.validate().map_err(RunError::Usage)?;
    let params = Params::new(config.k, config.epsilon, config.max_dim, config.seed)?;
    let limits = Limits { max_simplices: config.limit_simplices };
    let exact_limits = ExactLimits {
        max_lenses: config.limit_vertices,
        max_simplices: config.limit_simplices.unwrap_or(ExactLimits::default().max_simplices),
    };

    if config.mode == Mode::Verify {
        return verify(config, params);
    }
    let cloud = read_points(config.input.as_ref().expect("validated"))?;
    let text = match config.mode {
        Mode::Sparse => {
            let f = build_filtration_limited(&cloud, params, limits)?;
            format_filtration(&FiltrationFile::from_filtration(&f))
        }
        Mode::Exact => format_exact(&exact_cech(&cloud, config.k, config.max_dim, f64::INFINITY, exact_limits)?),
        Mode::Compare => compare(config, &cloud, params, limits)?,
        Mode::Persistence => {
            let dims = config.max_dim.saturating_sub(1);
            let cells = match config.filtration {
                Which::Sparse => sparse_cells(&build_filtration_limited(&cloud, params, limits)?),
                Which::Exact => exact_cech(&cloud, config.k, config.max_dim, f64::INFINITY, exact_limits)?.cells(),
            };
            format_diagram(&compute_persistence(&cells, dims)?)
        }
        Mode::Verify => unreachable!(),
    };
    emit(config, &text)
}

fn emit(config: &RunConfig, text: &str) -> Result<(), RunError> {
    match &config.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn compare(config: &RunConfig, cloud: &PointCloud, params: Params, limits: Limits) -> Result<String, RunError> {
    let f = build_filtration_limited(cloud, params, limits)?;
    let n = cloud.len();
    let delta = config.doubling_dim.unwrap_or(cloud.dim() as f64);
    let gamma = gamma_bound(config.k, config.epsilon, delta);
    let mut out = String::new();
    writeln!(out, "n {n}").unwrap();
    writeln!(out, "k {}", config.k).unwrap();
    writeln!(out, "epsilon {}", config.epsilon).unwrap();
    writeln!(out, "doubling_dim {delta}").unwrap();
    writeln!(out, "gamma {gamma:.6e}").unwrap();
    writeln!(out, "simplices {}", f.len()).unwrap();
    writeln!(out, "lower_bound {} {}", n - config.k, if f.lower_bound_holds() { "ok" } else { "VIOLATED" }).unwrap();
    for (m, count) in f.count_by_dim().iter().enumerate() {
        let bound = size_bound(n, config.k, config.epsilon, delta, m + 1);
        let per_site = f.associated.iter().map(|a| a[m]).max().unwrap_or(0);
        let site_bound = gamma.powf((config.k * (m + 1)) as f64);
        writeln!(out, "dim {m} count {count} bound {bound:.6e} max_associated {per_site} site_bound {site_bound:.6e}")
            .unwrap();
    }
    Ok(out)
}

fn random_instance(seed: u64, index: usize) -> (PointCloud, Params) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(index as u64));
    let n = rng.gen_range(6..=9);
    let k = if rng.gen_bool(0.5) { 2 } else { 3 };
    let epsilon = if rng.gen_bool(0.5) { 0.5 } else { 1.0 };
    let coords = (0..n).map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()]).collect();
    let cloud = PointCloud::from_coords(coords).expect("random points are distinct");
    (cloud, Params::new(k, epsilon, 2, seed).expect("valid parameters"))
}

fn verify(config: &RunConfig, params: Params) -> Result<(), RunError> {
    let instances: Vec<(PointCloud, Params)> = match &config.input {
        Some(path) => vec![(read_points(path)?, params)],
        None => (0..config.instances).map(|i| random_instance(config.seed, i)).collect(),
    };
    let mut failures = 0;
    let mut out = String::new();
    for (i, (cloud, p)) in instances.iter().enumerate() {
        let report = verify_instance(cloud, *p, 1000)?;
        let bottleneck = report.log_bottleneck.map_or("-".to_string(), |b| format!("{b:.6}"));
        let status = if report.passed() { "ok" } else { "FAIL" };
        writeln!(
            out,
            "instance {i} n={} k={} epsilon={} checks={} log_bottleneck={bottleneck} {status}",
            cloud.len(),
            p.k,
            p.epsilon,
            report.checks
        )
        .unwrap();
        for v in &report.violations {
            writeln!(out, "  {v}").unwrap();
        }
        if !report.passed() {
            failures += 1;
        }
    }
    emit(config, &out)?;
    if failures > 0 {
        return Err(RunError::Verify(failures));
    }
    Ok(())
}
