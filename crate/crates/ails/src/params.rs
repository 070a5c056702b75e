//! Solver parameters and run control.

use std::time::Duration;

use serde::{Deserialize, Serialize};

/// Tuning parameters of the solver. The defaults are the published values
/// used for the CVRPLIB benchmarks.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    /// Update period `gamma`: number of samples folded into an adaptive
    /// estimate before it is refreshed, and the inverse probability of
    /// varying the route count during a perturbation.
    pub period: u32,
    /// Target acceptance flow `kappa`: desired fraction of perturbed
    /// solutions that replace the reference solution.
    pub target_flow: f64,
    /// Reference distance `d_beta` between a reference solution and the
    /// local optimum derived from it; also the minimum pairwise distance
    /// kept inside each elite set.
    pub target_distance: f64,
    /// Maximum size of each elite set.
    pub elite_capacity: usize,
    /// Neighbor-list length `phi`: inter-route moves are only scanned
    /// between a vertex and its `neighbor_count` nearest vertices.
    pub neighbor_count: usize,
    /// Floor for the acceptance interpolation factor.
    pub epsilon: f64,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            period: 20,
            target_flow: 0.35,
            target_distance: 24.0,
            elite_capacity: 63,
            neighbor_count: 60,
            epsilon: 1e-3,
        }
    }
}

/// Stop criterion for a solver run. All enabled limits apply; the run ends
/// at the first one reached.
#[derive(Debug, Clone)]
pub struct Stop {
    /// Stop after this many consecutive iterations without improving the
    /// best solution.
    pub max_no_improve: u64,
    /// Optional cap on total iterations.
    pub max_iterations: Option<u64>,
    /// Optional wall-clock limit.
    pub time_limit: Option<Duration>,
    /// Optional early exit once the best cost reaches this value.
    pub target_cost: Option<f64>,
}

impl Default for Stop {
    fn default() -> Self {
        Stop {
            max_no_improve: 200_000,
            max_iterations: None,
            time_limit: None,
            target_cost: None,
        }
    }
}

impl Stop {
    pub fn no_improve(limit: u64) -> Self {
        Stop {
            max_no_improve: limit,
            ..Stop::default()
        }
    }
}

/// Counters reported by a solver run.
#[derive(Debug, Clone, Default)]
pub struct RunStats {
    /// Total perturbation iterations executed.
    pub iterations: u64,
    /// Iterations whose solution was accepted as new reference.
    pub accepted: u64,
    /// Iteration at which the best solution was last improved.
    pub best_iteration: u64,
    /// Wall time spent in the run.
    pub elapsed: Duration,
}
