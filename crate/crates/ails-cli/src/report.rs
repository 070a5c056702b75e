//! Machine-readable run reports.

use serde::Serialize;

use ails::solution;
use ails::{Params, RunStats, Stop};

/// Everything a single solve produced, serialized as the JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub instance: String,
    pub seed: u64,
    pub cost: f64,
    pub bks: Option<f64>,
    /// Percentage excess over the best-known cost; absent without one.
    pub gap: Option<f64>,
    pub routes: usize,
    pub iterations: u64,
    pub best_iteration: u64,
    pub seconds: f64,
    pub pr: bool,
    pub params: Params,
    pub stop: StopReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct StopReport {
    pub max_no_improve: u64,
    pub max_iterations: Option<u64>,
    pub time_limit_secs: Option<f64>,
    pub target_cost: Option<f64>,
}

impl From<&Stop> for StopReport {
    fn from(stop: &Stop) -> StopReport {
        StopReport {
            max_no_improve: stop.max_no_improve,
            max_iterations: stop.max_iterations,
            time_limit_secs: stop.time_limit.map(|d| d.as_secs_f64()),
            target_cost: stop.target_cost,
        }
    }
}

impl RunReport {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        instance: &str,
        seed: u64,
        cost: f64,
        routes: usize,
        bks: Option<f64>,
        stats: &RunStats,
        pr: bool,
        params: &Params,
        stop: &Stop,
    ) -> RunReport {
        RunReport {
            instance: instance.to_string(),
            seed,
            cost,
            bks,
            gap: bks.map(|b| solution::gap(cost, b)),
            routes,
            iterations: stats.iterations,
            best_iteration: stats.best_iteration,
            seconds: stats.elapsed.as_secs_f64(),
            pr,
            params: params.clone(),
            stop: StopReport::from(stop),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub const CSV_HEADER: &'static str = "instance,seed,cost,gap,iters,seconds";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:.3}",
            self.instance,
            self.seed,
            self.cost,
            self.gap.map_or(String::new(), |g| format!("{g:.4}")),
            self.iterations,
            self.seconds
        )
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "instance   {}\nseed       {}\ncost       {}\nroutes     {}\n",
            self.instance, self.seed, self.cost, self.routes
        );
        if let (Some(bks), Some(gap)) = (self.bks, self.gap) {
            out.push_str(&format!("bks        {bks}\ngap        {gap:.4}%\n"));
        }
        out.push_str(&format!(
            "iterations {} (best at {})\ntime       {:.2}s\n",
            self.iterations, self.best_iteration, self.seconds
        ));
        out
    }
}
