//! Diversity control. The perturbation degree of each removal heuristic is
//! steered so post-search solutions land a target distance away from their
//! reference, and the acceptance threshold is steered so a target fraction
//! of solutions is accepted.

use std::collections::VecDeque;
use std::time::Instant;

use rand::Rng;

use crate::instance::{Instance, NeighborData};
use crate::params::{Params, RunStats, Stop};
use crate::perturb::{construct_initial, perturb, REMOVAL_KINDS};
use crate::search::{neighborhood_search, SearchMode, EPS};
use crate::solution::{sym_distance, Solution};

/// Perturbation-degree state of one removal heuristic.
#[derive(Debug, Clone)]
pub struct DegreeControl {
    /// Current degree; rounded to a vertex count at use.
    pub degree: f64,
    samples: u32,
    mean_distance: f64,
}

impl DegreeControl {
    /// Degrees start at the target distance itself and stay in `[1, n]`.
    pub fn new(target_distance: f64, n: usize) -> DegreeControl {
        DegreeControl {
            degree: target_distance.clamp(1.0, n as f64),
            samples: 0,
            mean_distance: 0.0,
        }
    }

    /// Fold in the distance observed between a reference solution and the
    /// local optimum its perturbation produced. Every `period` samples the
    /// degree is rescaled by `target_distance / mean` and clamped.
    pub fn record(&mut self, distance: f64, period: u32, target_distance: f64, n: usize) {
        self.samples += 1;
        self.mean_distance += (distance - self.mean_distance) / self.samples as f64;
        if self.samples >= period {
            // A zero mean means the perturbation kept rebuilding the same
            // solution; force the degree up hard.
            let mean = if self.mean_distance > 0.0 {
                self.mean_distance
            } else {
                1.0
            };
            self.degree = (self.degree * target_distance / mean).clamp(1.0, n as f64);
            self.samples = 0;
            self.mean_distance = 0.0;
        }
    }

    #[cfg(test)]
    pub(crate) fn samples(&self) -> u32 {
        self.samples
    }
}

/// Threshold-based acceptance with flow regulation.
#[derive(Debug, Clone)]
pub struct AcceptanceControl {
    /// Weighted mean of post-search objectives.
    mean_cost: f64,
    /// The most recent post-search objectives, newest last.
    window: VecDeque<f64>,
    /// Interpolation factor between the recent best and the mean.
    factor: f64,
    floor: f64,
    target_flow: f64,
    period: u32,
    iterations: u64,
    accepted_since: u32,
    total_since: u32,
}

impl AcceptanceControl {
    /// Start from the objective of the first local optimum.
    pub fn new(params: &Params, initial_cost: f64) -> AcceptanceControl {
        let mut window = VecDeque::with_capacity(params.period as usize + 1);
        window.push_back(initial_cost);
        AcceptanceControl {
            mean_cost: initial_cost,
            window,
            factor: 1.0,
            floor: params.epsilon,
            target_flow: params.target_flow,
            period: params.period,
            iterations: 0,
            accepted_since: 0,
            total_since: 0,
        }
    }

    /// Best objective seen over the retained window.
    pub fn recent_best(&self) -> f64 {
        self.window.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn mean_cost(&self) -> f64 {
        self.mean_cost
    }

    pub fn factor(&self) -> f64 {
        self.factor
    }

    /// Acceptance threshold: the recent best plus a factor-controlled share
    /// of the spread up to the mean. The spread is clamped at zero so a
    /// solution matching the recent best always passes.
    pub fn threshold(&self) -> f64 {
        let low = self.recent_best();
        low + self.factor * (self.mean_cost - low).max(0.0)
    }

    /// Decide whether a solution of the given cost replaces the reference,
    /// and regulate the factor once per `period` acceptances so the
    /// realized flow tracks the target.
    pub fn accept(&mut self, cost: f64) -> bool {
        let ok = cost <= self.threshold();
        self.total_since += 1;
        if ok {
            self.accepted_since += 1;
        }
        if self.accepted_since >= self.period {
            let realized = self.accepted_since as f64 / self.total_since as f64;
            self.factor = (self.target_flow * self.factor / realized).max(self.floor);
            self.accepted_since = 0;
            self.total_since = 0;
        }
        ok
    }

    /// Fold a fresh post-search objective into the mean and the window.
    pub fn record_cost(&mut self, cost: f64) {
        self.iterations += 1;
        let it = self.iterations;
        if it <= self.period as u64 {
            self.mean_cost = (self.mean_cost * (it - 1) as f64 + cost) / it as f64;
        } else {
            let period = self.period as f64;
            self.mean_cost = self.mean_cost * (1.0 - 1.0 / period) + cost / period;
        }
        self.window.push_back(cost);
        while self.window.len() > self.period as usize {
            self.window.pop_front();
        }
    }
}

/// Output of a solver run.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub best: Solution,
    pub stats: RunStats,
}

/// Repair capacity violations, descend to a local optimum, and drop any
/// route left empty along the way.
pub(crate) fn repair_and_optimize(s: &mut Solution, inst: &Instance, nd: &NeighborData) {
    neighborhood_search(s, SearchMode::Feasibility, inst, nd);
    s.prune_empty_routes();
    neighborhood_search(s, SearchMode::LocalSearch, inst, nd);
    s.prune_empty_routes();
}

pub(crate) struct StopWatch {
    start: Instant,
    no_improve: u64,
}

impl StopWatch {
    pub fn new() -> StopWatch {
        StopWatch {
            start: Instant::now(),
            no_improve: 0,
        }
    }

    pub fn improved(&mut self) {
        self.no_improve = 0;
    }

    pub fn stalled(&mut self) {
        self.no_improve += 1;
    }

    pub fn elapsed(&self) -> std::time::Duration {
        self.start.elapsed()
    }

    pub fn should_stop(&self, stop: &Stop, iterations: u64, best_cost: f64) -> bool {
        if self.no_improve >= stop.max_no_improve {
            return true;
        }
        if let Some(max) = stop.max_iterations {
            if iterations >= max {
                return true;
            }
        }
        if let Some(limit) = stop.time_limit {
            if self.start.elapsed() >= limit {
                return true;
            }
        }
        if let Some(target) = stop.target_cost {
            if best_cost <= target + EPS {
                return true;
            }
        }
        false
    }
}

/// The plain adaptive iterated local search: construct, then repeatedly
/// perturb the reference solution, repair, descend, steer the perturbation
/// degree by the observed distance, and accept or reject the result.
pub fn run_ails(
    inst: &Instance,
    params: &Params,
    stop: &Stop,
    rng: &mut crate::SolverRng,
) -> RunResult {
    let nd = NeighborData::build(inst, params.neighbor_count);
    run_ails_inner(inst, params, stop, rng, &nd, &mut |_, _, _, _| {})
}

/// Driver core shared with the path-relinking hybrid: `hook` runs at the
/// end of every iteration with the fresh local optimum and may update the
/// best solution and reference in place.
pub(crate) fn run_ails_inner(
    inst: &Instance,
    params: &Params,
    stop: &Stop,
    rng: &mut crate::SolverRng,
    nd: &NeighborData,
    hook: &mut dyn FnMut(&Solution, &mut Solution, &mut Solution, &mut crate::SolverRng),
) -> RunResult {
    let mut watch = StopWatch::new();
    let mut s = construct_initial(inst, nd, rng);
    repair_and_optimize(&mut s, inst, nd);

    let mut reference = s.clone();
    let mut best = s;
    let mut best_cost = best.objective();
    let mut accept_ctl = AcceptanceControl::new(params, best_cost);
    let mut degrees: Vec<DegreeControl> = (0..REMOVAL_KINDS.len())
        .map(|_| DegreeControl::new(params.target_distance, inst.n))
        .collect();
    let mut stats = RunStats::default();

    while !watch.should_stop(stop, stats.iterations, best_cost) {
        let which = rng.gen_range(0..REMOVAL_KINDS.len());
        let mut s = perturb(
            &reference,
            REMOVAL_KINDS[which],
            degrees[which].degree,
            params.period,
            inst,
            nd,
            rng,
        );
        repair_and_optimize(&mut s, inst, nd);
        stats.iterations += 1;

        let distance = sym_distance(&s, &reference) as f64;
        degrees[which].record(distance, params.period, params.target_distance, inst.n);

        let cost = s.objective();
        let accepted = accept_ctl.accept(cost);
        accept_ctl.record_cost(cost);
        if accepted {
            stats.accepted += 1;
            reference = s.clone();
        }
        if cost < best_cost - EPS {
            best = s.clone();
        }
        hook(&s, &mut best, &mut reference, rng);

        let new_best_cost = best.objective();
        if new_best_cost < best_cost - EPS {
            best_cost = new_best_cost;
            stats.best_iteration = stats.iterations;
            watch.improved();
        } else {
            watch.stalled();
        }
    }

    stats.elapsed = watch.elapsed();
    RunResult { best, stats }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::exact_solve;

    fn params() -> Params {
        Params::default()
    }

    #[test]
    fn degree_update_formula() {
        // period 2 at degree 10: distances {12, 12} against target 24
        // rescale by 24/12.
        let mut d = DegreeControl::new(10.0, 100);
        d.degree = 10.0;
        d.record(12.0, 2, 24.0, 100);
        assert_eq!(d.samples(), 1);
        assert_eq!(d.degree, 10.0);
        d.record(12.0, 2, 24.0, 100);
        assert_eq!(d.degree, 20.0);
        assert_eq!(d.samples(), 0);
    }

    #[test]
    fn degree_clamps_both_ways() {
        let mut d = DegreeControl::new(2.0, 50);
        // huge observed distance drives the degree toward zero -> clamp 1
        d.record(1000.0, 1, 2.0, 50);
        assert_eq!(d.degree, 1.0);
        // tiny observed distance drives it up -> clamp n
        let mut d = DegreeControl::new(40.0, 50);
        d.record(0.1, 1, 1000.0, 50);
        assert_eq!(d.degree, 50.0);
    }

    #[test]
    fn degree_zero_distance_degenerate() {
        let mut d = DegreeControl::new(5.0, 200);
        d.record(0.0, 2, 24.0, 200);
        d.record(0.0, 2, 24.0, 200);
        // mean 0 treated as 1: 5 * 24 / 1 = 120
        assert_eq!(d.degree, 120.0);
    }

    #[test]
    fn mean_cost_update_cases() {
        let p = params();
        let mut a = AcceptanceControl::new(&p, 999.0);
        a.record_cost(10.0); // it = 1 resets the running mean
        assert_eq!(a.mean_cost(), 10.0);
        a.record_cost(20.0);
        a.record_cost(30.0); // it = 3: plain mean of {10,20,30}
        assert_eq!(a.mean_cost(), 20.0);

        let mut b = AcceptanceControl::new(&p, 100.0);
        for _ in 0..p.period {
            b.record_cost(100.0);
        }
        assert_eq!(b.mean_cost(), 100.0);
        b.record_cost(120.0); // beyond the period: 100*(1-1/20) + 120/20
        assert!((b.mean_cost() - 101.0).abs() < 1e-12);
    }

    #[test]
    fn window_min_matches_explicit_ring_buffer() {
        let p = params();
        let mut a = AcceptanceControl::new(&p, 50.0);
        let mut shadow = vec![50.0];
        let mut rng = crate::test_rng(3);
        for _ in 0..200 {
            let f = rng.gen_range(10.0..100.0);
            a.record_cost(f);
            shadow.push(f);
            let lo = shadow
                .iter()
                .rev()
                .take(p.period as usize)
                .copied()
                .fold(f64::INFINITY, f64::min);
            assert_eq!(a.recent_best(), lo);
        }
    }

    #[test]
    fn accept_boundary_cases() {
        let p = params();
        let mut a = AcceptanceControl::new(&p, 100.0);
        for f in [100.0, 110.0, 120.0, 90.0, 105.0] {
            a.record_cost(f);
        }
        // a cost equal to the recent best is always accepted
        let best = a.recent_best();
        assert!(a.clone().accept(best));
        // a cost equal to the threshold is accepted (inclusive)
        let b = a.threshold();
        assert!(a.clone().accept(b));
        assert!(!a.clone().accept(b + 1e-6));
    }

    #[test]
    fn collapsed_factor_rejects_mean() {
        let p = params();
        let mut a = AcceptanceControl::new(&p, 100.0);
        for f in [90.0, 110.0, 120.0, 100.0] {
            a.record_cost(f);
        }
        a.factor = p.epsilon;
        assert!(a.mean_cost() > a.recent_best());
        // threshold collapses onto the recent best: the mean is rejected
        assert!(!a.clone().accept(a.mean_cost()));
        assert!(a.factor() >= p.epsilon);
    }

    #[test]
    fn acceptance_monotone_in_quality() {
        let p = params();
        let mut a = AcceptanceControl::new(&p, 100.0);
        let mut rng = crate::test_rng(17);
        for _ in 0..100 {
            let f = rng.gen_range(50.0..150.0);
            a.record_cost(f);
            let f2 = rng.gen_range(50.0..150.0);
            let f1 = f2 - rng.gen_range(0.0..20.0);
            if a.clone().accept(f2) {
                assert!(
                    a.clone().accept(f1),
                    "f1 {f1} rejected while f2 {f2} accepted"
                );
            }
        }
    }

    #[test]
    fn factor_never_below_floor_and_degree_stays_bounded() {
        let p = params();
        let mut a = AcceptanceControl::new(&p, 100.0);
        let mut d = DegreeControl::new(p.target_distance, 60);
        let mut rng = crate::test_rng(23);
        for _ in 0..5000 {
            let f = rng.gen_range(50.0..150.0);
            a.accept(f);
            a.record_cost(f);
            assert!(a.factor() >= p.epsilon);
            d.record(rng.gen_range(0.0..80.0), p.period, p.target_distance, 60);
            assert!(d.degree >= 1.0 && d.degree <= 60.0);
        }
    }

    #[test]
    fn tiny_instances_reach_oracle_optimum() {
        let mut failures = Vec::new();
        for seed in 0..10u64 {
            let mut gen = crate::test_rng(900 + seed);
            let n = 5 + (seed % 3) as usize;
            let inst = Instance::random(&format!("tiny{seed}"), n, 25, &mut gen);
            let exact = exact_solve(&inst).unwrap();
            let mut rng = crate::test_rng(seed);
            let got = run_ails(&inst, &params(), &Stop::no_improve(500), &mut rng);
            assert!(got.best.is_feasible(&inst));
            if (got.best.objective() - exact.cost).abs() > 1e-9 {
                failures.push((seed, got.best.objective(), exact.cost));
            }
        }
        assert!(failures.is_empty(), "missed optima: {failures:?}");
    }

    #[test]
    fn identical_seed_identical_run() {
        let inst = Instance::random("det", 25, 40, &mut crate::test_rng(77));
        let p = params();
        let stop = Stop::no_improve(300);
        let a = run_ails(&inst, &p, &stop, &mut crate::rng_from_seed(5));
        let b = run_ails(&inst, &p, &stop, &mut crate::rng_from_seed(5));
        assert_eq!(a.best.objective(), b.best.objective());
        assert_eq!(a.stats.iterations, b.stats.iterations);
        assert_eq!(a.stats.accepted, b.stats.accepted);
        assert_eq!(a.best.to_sol_string(), b.best.to_sol_string());
    }

    #[test]
    fn zero_budget_returns_constructed_local_optimum() {
        let inst = Instance::random("zb", 15, 30, &mut crate::test_rng(70));
        let got = run_ails(
            &inst,
            &params(),
            &Stop::no_improve(0),
            &mut crate::rng_from_seed(1),
        );
        assert_eq!(got.stats.iterations, 0);
        assert!(got.best.is_feasible(&inst));
    }
}
