//! Edge counts of uniformly random vertex subsets in dense random graphs:
//! the Gaussian central and local limit theorems, checked against exact
//! enumeration and high-throughput Monte Carlo.
//!
//! * [`graph`]: `G(n,M)`/`G(n,p)` generation and degree statistics.
//! * [`subset`], [`sampling`], [`exact`]: subset state under swaps,
//!   i.i.d. sampling and exhaustive enumeration of `e(S)`.
//! * [`stein`]: the exchangeable-pair matrices and their exact identities.
//! * [`models`]: normal and binomial reference models and distance metrics.
//! * [`smoothing`]: the interval-smoothing schedule and its defect statistics.
//! * [`report`], [`sweep`], [`experiment`]: flat output records, scaling
//!   sweeps and the command implementations behind the `edgelab` binary.

pub mod bits;
pub mod distribution;
pub mod error;
pub mod exact;
pub mod experiment;
pub mod graph;
pub mod rng;
pub mod mat2;
pub mod models;
pub mod report;
pub mod sampling;
pub mod smoothing;
pub mod stein;
pub mod subset;
pub mod sweep;

pub use distribution::{DistributionKind, EdgeCountDistribution};
pub use error::{Error, Result};
pub use graph::{gen_gnm, gen_gnp, stats, third_moment_stat, Graph, GraphStats};

/// Version tag embedded in every output record and sidecar.
pub const FORMAT_VERSION: &str = "edgelab/1";
