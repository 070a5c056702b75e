//! Command-line interface: solve CVRPLIB instances, validate solution
//! files, run benchmark sweeps, and cross-check the heuristic against the
//! exact solver on tiny instances.

mod bks;
mod report;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ails::adaptive::run_ails;
use ails::elite_pr::run_ails_pr;
use ails::oracle::exact_solve;
use ails::solution::{parse_sol, validate_routes};
use ails::{rng_from_seed, EdgeWeightKind, Instance, Params, RunStats, Solution, Stop};
use report::RunReport;

#[derive(Parser)]
#[command(
    name = "ails",
    version,
    about = "Adaptive iterated local search with path-relinking for the CVRP"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a CVRPLIB instance and write a .sol file plus a JSON report
    Solve(SolveArgs),
    /// Validate a .sol file against its instance
    Check(CheckArgs),
    /// Run every (instance, seed) pair of a manifest and aggregate a table
    Bench(BenchArgs),
    /// Solve random tiny instances with both the heuristic and the exact
    /// solver and report the match rate
    OracleVerify(OracleVerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputKind {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DistanceMode {
    Rounded,
    Exact,
}

#[derive(Args)]
struct SolveArgs {
    /// CVRPLIB .vrp instance file
    instance: PathBuf,
    /// RNG seed; identical seeds reproduce identical runs
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stop after this many iterations without improvement
    #[arg(long, default_value_t = 200_000)]
    stop_iters: u64,
    /// Wall-clock limit in seconds
    #[arg(long)]
    time_limit_secs: Option<f64>,
    /// Hard cap on total iterations
    #[arg(long)]
    max_iters: Option<u64>,
    /// Stop as soon as the best cost reaches this value
    #[arg(long)]
    target: Option<f64>,
    /// Run the plain iterated local search without path-relinking
    #[arg(long)]
    no_pr: bool,
    /// TOML file overriding solver parameters
    #[arg(long)]
    params: Option<PathBuf>,
    /// Best-known cost for the gap column (default: bundled registry)
    #[arg(long)]
    bks: Option<f64>,
    /// Report format printed to stdout
    #[arg(long, value_enum, default_value_t = OutputKind::Text)]
    output: OutputKind,
    /// Directory receiving the .sol and .report.json files
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Write the final elite pools to this JSON file
    #[arg(long)]
    dump_elite: Option<PathBuf>,
    /// Override the distance convention chosen by instance family
    #[arg(long, value_enum)]
    distance_mode: Option<DistanceMode>,
}

#[derive(Args)]
struct CheckArgs {
    /// CVRPLIB .vrp instance file
    instance: PathBuf,
    /// Solution file in "Route #k: ..." format
    solution: PathBuf,
    /// Override the distance convention chosen by instance family
    #[arg(long, value_enum)]
    distance_mode: Option<DistanceMode>,
}

#[derive(Args)]
struct BenchArgs {
    /// Manifest file: one `instance,seeds,stop_iters[,bks]` row per line,
    /// seeds separated by semicolons
    manifest: PathBuf,
    /// Worker threads for independent runs (default: all cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// Aggregate format printed to stdout
    #[arg(long, value_enum, default_value_t = OutputKind::Text)]
    output: OutputKind,
    /// Write per-run rows and the aggregate next to this prefix
    #[arg(long)]
    out_prefix: Option<PathBuf>,
    /// Solve without path-relinking
    #[arg(long)]
    no_pr: bool,
    /// TOML file overriding solver parameters
    #[arg(long)]
    params: Option<PathBuf>,
}

#[derive(Args)]
struct OracleVerifyArgs {
    /// Number of random instances
    #[arg(long, default_value_t = 30)]
    count: u32,
    /// Customers per instance (at most 7)
    #[arg(long, default_value_t = 6)]
    n: usize,
    /// Base seed for instance generation and solver runs
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Iterations without improvement before a heuristic run stops
    #[arg(long, default_value_t = 500)]
    budget: u64,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Check(args) => cmd_check(args),
        Command::Bench(args) => cmd_bench(args),
        Command::OracleVerify(args) => cmd_oracle_verify(args),
    }
}

fn load_instance(path: &Path, mode: Option<DistanceMode>) -> Result<Instance> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read instance `{}`", path.display()))?;
    let inst = Instance::parse_cvrplib(&text)
        .with_context(|| format!("cannot parse instance `{}`", path.display()))?;
    Ok(match mode {
        Some(DistanceMode::Rounded) => inst.with_edge_weight_kind(EdgeWeightKind::RoundedEuclidean),
        Some(DistanceMode::Exact) => inst.with_edge_weight_kind(EdgeWeightKind::ExactEuclidean),
        None => inst,
    })
}

fn load_params(path: Option<&Path>) -> Result<Params> {
    match path {
        None => Ok(Params::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("cannot read params `{}`", p.display()))?;
            toml::from_str(&text).with_context(|| format!("bad params file `{}`", p.display()))
        }
    }
}

struct SolveOutcome {
    best: Solution,
    stats: RunStats,
    elite: Option<ails::elite_pr::EliteFamily>,
}

fn solve_instance(
    inst: &Instance,
    params: &Params,
    stop: &Stop,
    seed: u64,
    pr: bool,
) -> SolveOutcome {
    let mut rng = rng_from_seed(seed);
    if pr {
        let out = run_ails_pr(inst, params, stop, &mut rng);
        SolveOutcome {
            best: out.best,
            stats: out.stats,
            elite: Some(out.elite),
        }
    } else {
        let out = run_ails(inst, params, stop, &mut rng);
        SolveOutcome {
            best: out.best,
            stats: out.stats,
            elite: None,
        }
    }
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode> {
    let inst = load_instance(&args.instance, args.distance_mode)?;
    let params = load_params(args.params.as_deref())?;
    let stop = Stop {
        max_no_improve: args.stop_iters,
        max_iterations: args.max_iters,
        time_limit: args.time_limit_secs.map(Duration::from_secs_f64),
        target_cost: args.target,
    };
    let bks = args.bks.or_else(|| bks::lookup(&inst.name));

    let outcome = solve_instance(&inst, &params, &stop, args.seed, !args.no_pr);

    // The driver only ever returns repaired local optima; anything else is
    // a bug, not an input problem.
    let routes = outcome.best.customer_routes();
    if let Err(violation) = validate_routes(&inst, &routes) {
        eprintln!("internal error: final solution invalid: {violation}");
        return Ok(ExitCode::from(3));
    }

    let report = RunReport::new(
        &inst.name,
        args.seed,
        outcome.best.objective(),
        routes.len(),
        bks,
        &outcome.stats,
        !args.no_pr,
        &params,
        &stop,
    );

    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("cannot create `{}`", args.out_dir.display()))?;
    let stem = format!("{}-s{}", inst.name, args.seed);
    let sol_path = args.out_dir.join(format!("{stem}.sol"));
    let report_path = args.out_dir.join(format!("{stem}.report.json"));
    std::fs::write(&sol_path, outcome.best.to_sol_string())
        .with_context(|| format!("cannot write `{}`", sol_path.display()))?;
    std::fs::write(&report_path, report.to_json())
        .with_context(|| format!("cannot write `{}`", report_path.display()))?;

    if let Some(path) = &args.dump_elite {
        let elite = outcome
            .elite
            .as_ref()
            .map(dump_elite_json)
            .unwrap_or_else(|| "{}".to_string());
        std::fs::write(path, elite)
            .with_context(|| format!("cannot write `{}`", path.display()))?;
    }

    match args.output {
        OutputKind::Text => {
            print!("{}", report.to_text());
            println!("solution   {}", sol_path.display());
            println!("report     {}", report_path.display());
        }
        OutputKind::Json => println!("{}", report.to_json()),
        OutputKind::Csv => {
            println!("{}", RunReport::CSV_HEADER);
            println!("{}", report.to_csv_row());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn dump_elite_json(elite: &ails::elite_pr::EliteFamily) -> String {
    use serde::Serialize;
    #[derive(Serialize)]
    struct Entry {
        cost: f64,
        routes: Vec<Vec<u32>>,
    }
    let map: std::collections::BTreeMap<String, Vec<Entry>> = elite
        .pools()
        .map(|(m, pool)| {
            (
                m.to_string(),
                pool.iter()
                    .map(|e| Entry {
                        cost: e.cost,
                        routes: e.solution.customer_routes(),
                    })
                    .collect(),
            )
        })
        .collect();
    serde_json::to_string_pretty(&map).expect("elite dump serializes")
}

fn cmd_check(args: CheckArgs) -> Result<ExitCode> {
    let inst = load_instance(&args.instance, args.distance_mode)?;
    let text = std::fs::read_to_string(&args.solution)
        .with_context(|| format!("cannot read solution `{}`", args.solution.display()))?;
    let (routes, declared) = parse_sol(&text)
        .with_context(|| format!("cannot parse solution `{}`", args.solution.display()))?;
    match validate_routes(&inst, &routes) {
        Ok(cost) => {
            println!("PASS cost {cost}");
            if (declared - cost).abs() > 0.5 {
                println!("note: declared cost {declared} differs from recomputed {cost}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Err(violation) => {
            println!("FAIL {violation}");
            Ok(ExitCode::from(1))
        }
    }
}

struct ManifestRow {
    path: PathBuf,
    seeds: Vec<u64>,
    stop_iters: u64,
    bks: Option<f64>,
}

fn parse_manifest(text: &str) -> Result<Vec<ManifestRow>> {
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split(',').map(str::trim).collect();
        if parts.len() < 3 || parts.len() > 4 {
            bail!(
                "manifest line {}: expected `instance,seeds,stop_iters[,bks]`",
                idx + 1
            );
        }
        let seeds: Result<Vec<u64>, _> = parts[1].split(';').map(|s| s.trim().parse()).collect();
        let seeds = seeds.map_err(|_| {
            anyhow::anyhow!("manifest line {}: bad seed list `{}`", idx + 1, parts[1])
        })?;
        let stop_iters: u64 = parts[2]
            .parse()
            .map_err(|_| anyhow::anyhow!("manifest line {}: bad iteration budget", idx + 1))?;
        let bks = match parts.get(3) {
            Some(v) if !v.is_empty() => Some(v.parse().map_err(|_| {
                anyhow::anyhow!("manifest line {}: bad best-known cost", idx + 1)
            })?),
            _ => None,
        };
        rows.push(ManifestRow {
            path: PathBuf::from(parts[0]),
            seeds,
            stop_iters,
            bks,
        });
    }
    Ok(rows)
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode> {
    use rayon::prelude::*;

    let text = std::fs::read_to_string(&args.manifest)
        .with_context(|| format!("cannot read manifest `{}`", args.manifest.display()))?;
    let rows = parse_manifest(&text)?;
    let params = load_params(args.params.as_deref())?;

    struct Job {
        inst: Instance,
        row_index: usize,
        seed: u64,
        stop: Stop,
        bks: Option<f64>,
    }
    let mut jobs = Vec::new();
    for (row_index, row) in rows.iter().enumerate() {
        let inst = load_instance(&row.path, None)?;
        let bks = row.bks.or_else(|| bks::lookup(&inst.name));
        for &seed in &row.seeds {
            jobs.push(Job {
                inst: inst.clone(),
                row_index,
                seed,
                stop: Stop::no_improve(row.stop_iters),
                bks,
            });
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.unwrap_or_default())
        .build()
        .context("cannot build worker pool")?;
    let pr = !args.no_pr;
    let reports: Vec<(usize, RunReport)> = pool.install(|| {
        jobs.par_iter()
            .map(|job| {
                let outcome = solve_instance(&job.inst, &params, &job.stop, job.seed, pr);
                let report = RunReport::new(
                    &job.inst.name,
                    job.seed,
                    outcome.best.objective(),
                    outcome.best.route_count(),
                    job.bks,
                    &outcome.stats,
                    pr,
                    &params,
                    &job.stop,
                );
                (job.row_index, report)
            })
            .collect()
    });

    let mut raw_csv = String::from(RunReport::CSV_HEADER);
    raw_csv.push('\n');
    for (_, r) in &reports {
        raw_csv.push_str(&r.to_csv_row());
        raw_csv.push('\n');
    }

    #[derive(serde::Serialize)]
    struct Summary {
        instance: String,
        runs: usize,
        avg: f64,
        best: f64,
        avg_gap: Option<f64>,
        best_gap: Option<f64>,
        avg_seconds: f64,
    }
    let mut summaries = Vec::new();
    for row_index in 0..rows.len() {
        let of_row: Vec<&RunReport> = reports
            .iter()
            .filter(|(i, _)| *i == row_index)
            .map(|(_, r)| r)
            .collect();
        if of_row.is_empty() {
            continue;
        }
        let runs = of_row.len();
        let avg = of_row.iter().map(|r| r.cost).sum::<f64>() / runs as f64;
        let best = of_row.iter().map(|r| r.cost).fold(f64::INFINITY, f64::min);
        let bks = of_row[0].bks;
        summaries.push(Summary {
            instance: of_row[0].instance.clone(),
            runs,
            avg,
            best,
            avg_gap: bks.map(|b| ails::gap(avg, b)),
            best_gap: bks.map(|b| ails::gap(best, b)),
            avg_seconds: of_row.iter().map(|r| r.seconds).sum::<f64>() / runs as f64,
        });
    }

    let summary_csv = {
        let mut out = String::from("instance,runs,avg,best,avg_gap,best_gap,avg_seconds\n");
        for s in &summaries {
            let _ = writeln!(
                out,
                "{},{},{:.2},{},{},{},{:.3}",
                s.instance,
                s.runs,
                s.avg,
                s.best,
                s.avg_gap.map_or(String::new(), |g| format!("{g:.4}")),
                s.best_gap.map_or(String::new(), |g| format!("{g:.4}")),
                s.avg_seconds
            );
        }
        out
    };

    if let Some(prefix) = &args.out_prefix {
        let runs_path = prefix.with_extension("runs.csv");
        let summary_path = prefix.with_extension("summary.csv");
        std::fs::write(&runs_path, &raw_csv)
            .with_context(|| format!("cannot write `{}`", runs_path.display()))?;
        std::fs::write(&summary_path, &summary_csv)
            .with_context(|| format!("cannot write `{}`", summary_path.display()))?;
    }

    match args.output {
        OutputKind::Text => {
            println!(
                "{:<16} {:>4} {:>12} {:>10} {:>9} {:>9} {:>9}",
                "instance", "runs", "avg", "best", "avg_gap", "best_gap", "avg_secs"
            );
            for s in &summaries {
                println!(
                    "{:<16} {:>4} {:>12.2} {:>10} {:>9} {:>9} {:>9.2}",
                    s.instance,
                    s.runs,
                    s.avg,
                    s.best,
                    s.avg_gap.map_or("-".into(), |g| format!("{g:.4}")),
                    s.best_gap.map_or("-".into(), |g| format!("{g:.4}")),
                    s.avg_seconds
                );
            }
        }
        OutputKind::Json => {
            println!("{}", serde_json::to_string_pretty(&summaries)?);
        }
        OutputKind::Csv => print!("{summary_csv}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle_verify(args: OracleVerifyArgs) -> Result<ExitCode> {
    if args.n > 7 {
        bail!(
            "oracle verification supports at most 7 customers, got {}",
            args.n
        );
    }
    let params = Params::default();
    let mut matched = 0u32;
    for i in 0..args.count {
        let mut gen = rng_from_seed(args.seed.wrapping_mul(1_000_003).wrapping_add(i as u64));
        let inst = Instance::random(&format!("rand-n{}-{i}", args.n), args.n, 25, &mut gen);
        let exact = exact_solve(&inst).map_err(|e| anyhow::anyhow!(e))?;
        let stop = Stop {
            max_no_improve: args.budget,
            target_cost: Some(exact.cost),
            ..Stop::default()
        };
        let outcome = solve_instance(&inst, &params, &stop, args.seed.wrapping_add(i as u64), true);
        let cost = outcome.best.objective();
        if (cost - exact.cost).abs() <= 1e-9 {
            matched += 1;
        } else {
            println!(
                "MISMATCH {}: heuristic {} vs optimal {}",
                inst.name, cost, exact.cost
            );
        }
    }
    let rate = if args.count == 0 {
        100.0
    } else {
        100.0 * matched as f64 / args.count as f64
    };
    println!("matched {matched}/{} ({rate:.1}%)", args.count);
    Ok(if matched == args.count {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
