//! AILS-PR: an adaptive iterated local search hybridized with
//! path-relinking for the capacitated vehicle routing problem.
//!
//! The crate is organized around the phases of the solver:
//!
//! - [`instance`]: CVRPLIB parsing, distances, nearest-neighbor tables.
//! - [`solution`]: route sets with cached loads, costs and positions.
//! - [`perturb`]: initial construction plus the removal/insertion
//!   heuristics that diversify a reference solution.
//! - [`search`]: the unified neighborhood engine used both to repair
//!   capacity violations and to reach local optima.
//! - [`adaptive`]: perturbation-degree and acceptance-threshold control,
//!   and the plain iterated-local-search driver.
//! - [`elite_pr`]: elite solution pools, path-relinking, and the full
//!   hybrid driver [`elite_pr::run_ails_pr`].
//! - [`oracle`]: an exact solver for tiny instances, used as ground truth
//!   by the test suites and the `oracle-verify` command.

pub mod adaptive;
pub mod elite_pr;
pub mod instance;
pub mod oracle;
pub mod params;
pub mod perturb;
pub mod search;
pub mod solution;

pub use instance::{EdgeWeightKind, Instance, NeighborData, ParseError};
pub use params::{Params, RunStats, Stop};
pub use solution::{gap, sym_distance, Route, Solution};

/// The random number generator used throughout the solver. ChaCha8 is
/// seedable and platform-independent, so a seed fully determines a run on
/// any build.
pub type SolverRng = rand_chacha::ChaCha8Rng;

/// Construct the solver RNG from a seed.
pub fn rng_from_seed(seed: u64) -> SolverRng {
    use rand::SeedableRng;
    SolverRng::seed_from_u64(seed)
}

#[cfg(test)]
pub(crate) fn test_rng(seed: u64) -> SolverRng {
    rng_from_seed(seed)
}
