//! Input generators shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparse_kfold::PointCloud;

/// `n` uniform points in the unit square.
pub fn uniform_square(n: usize, seed: u64) -> PointCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PointCloud::from_coords((0..n).map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()]).collect())
        .expect("random points are distinct")
}

/// `n` uniform points in the unit cube of dimension `d`.
pub fn uniform_cube(n: usize, d: usize, seed: u64) -> PointCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PointCloud::from_coords((0..n).map(|_| (0..d).map(|_| rng.gen::<f64>()).collect()).collect())
        .expect("random points are distinct")
}
