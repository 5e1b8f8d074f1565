//! Linear-size sparse approximation of the k-fold cover filtration.
//!
//! The pipeline: order the sites by the greedy k-distance permutation
//! ([`kdp`]), derive freezing and removal radii, and emit the discrete
//! sparse k-th order Čech filtration ([`sparse`]). [`oracle`] holds
//! brute-force exact constructions for checking, [`persistence`] the Z/2
//! reduction and log-scale bottleneck distance.

pub mod error;
pub mod geometry;
pub mod index;
pub mod io;
pub mod kdp;
pub mod oracle;
pub mod persistence;
pub mod scale;
pub mod sparse;
pub mod tol;

pub use error::{Error, Result};
pub use geometry::{
    balls_have_common_point, intersection_depth, min_enclosing_ball, min_enclosing_ball_of_balls,
    squared_distance, Ball, MebResult, Point,
};
pub use index::{KdIndex, RangeIndex};
pub use kdp::{k_distance, kdp_fast, kdp_simple, KPermutation, PointCloud};
pub use scale::Scale;
pub use sparse::{build_filtration, FilteredSimplex, LensId, Params, SparseFiltration};
