use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use cherry_mwpm::instances::{self, Family, GenSpec};
use cherry_mwpm::verify::{check_certificate, matching_weight, oracle_mwpm};
use cherry_mwpm::{DualMode, InitStrategy, Instance, Outcome, SolutionFile, Solver, SolverConfig};

mod stats;

/// Exit status for a solved instance or a verified solution.
const EXIT_OK: u8 = 0;
/// Input, usage or verification failure.
const EXIT_ERROR: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_TIMEOUT: u8 = 3;

#[derive(Parser)]
#[command(name = "cherry-mwpm", version, about = "Minimum-weight perfect matching solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file.
    Solve(SolveArgs),
    /// Generate an instance of one of the synthetic families.
    Generate(GenerateArgs),
    /// Check a solution file against an instance.
    Verify(VerifyArgs),
    /// Generate, solve and verify a batch; writes one CSV row per run.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum InitArg {
    Greedy,
    Fractional,
    #[value(alias = "fractional-t")]
    FractionalThresholded,
}

#[derive(Clone, Copy, ValueEnum)]
enum DualArg {
    Cc,
    Lp,
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// Time limit in seconds.
    #[arg(long, default_value_t = 500.0)]
    timeout: f64,
    #[arg(long, value_enum, default_value = "fractional-thresholded")]
    init: InitArg,
    /// Tree size above which the fractional initialization gives up on a tree.
    #[arg(long, default_value_t = 100)]
    init_threshold: usize,
    #[arg(long, value_enum, default_value = "cc")]
    dual_mode: DualArg,
    /// Largest component handed to the LP dual update.
    #[arg(long, default_value_t = 100)]
    lp_tree_threshold: usize,
}

impl SolverArgs {
    fn config(&self) -> anyhow::Result<SolverConfig> {
        if !(self.timeout > 0.0 && self.timeout.is_finite()) {
            bail!("--timeout must be a positive number of seconds");
        }
        Ok(SolverConfig {
            init: match self.init {
                InitArg::Greedy => InitStrategy::Greedy,
                InitArg::Fractional => InitStrategy::Fractional,
                InitArg::FractionalThresholded => InitStrategy::FractionalThresholded,
            },
            init_threshold: self.init_threshold,
            dual_mode: match self.dual_mode {
                DualArg::Cc => DualMode::ConnectedComponents,
                DualArg::Lp => DualMode::Lp,
            },
            lp_tree_threshold: self.lp_tree_threshold,
            time_limit: Some(Duration::from_secs_f64(self.timeout)),
        })
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    /// Solution file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the dual certificate after the matching.
    #[arg(long)]
    emit_certificate: bool,
    /// Append a statistics row to this CSV file.
    #[arg(long)]
    stats: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    family: Family,
    #[arg(long, required_unless_present = "points")]
    n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Point cloud for the points-file family.
    #[arg(long)]
    points: Option<PathBuf>,
    /// Instance file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    solution: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated family names.
    #[arg(long, value_delimiter = ',', required = true)]
    families: Vec<Family>,
    /// Comma-separated node counts.
    #[arg(long, value_delimiter = ',', default_value = "1000")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    repeats: u64,
    /// Seed of the first repeat; repeat `i` uses `seed + i`.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Point cloud for the points-file family.
    #[arg(long)]
    points: Option<PathBuf>,
    /// CSV report; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run independent instances on all cores.
    #[arg(long)]
    parallel: bool,
    #[command(flatten)]
    solver: SolverArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Generate(args) => cmd_generate(args).map(|_| EXIT_OK),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => cmd_bench(args).map(|_| EXIT_OK),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn cmd_solve(args: SolveArgs) -> anyhow::Result<u8> {
    let config = args.solver.config()?;
    let inst = Instance::load(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let outcome = Solver::new(&inst, config)?.solve();
    let (file, code) = match &outcome {
        Outcome::Matched(sol) => (
            Some(SolutionFile::Matched {
                weight: sol.weight,
                pairs: sol.pairs.clone(),
                certificate: args.emit_certificate.then(|| sol.certificate.clone()),
            }),
            EXIT_OK,
        ),
        Outcome::Infeasible(_) => (Some(SolutionFile::Infeasible), EXIT_INFEASIBLE),
        Outcome::TimedOut(_) => (None, EXIT_TIMEOUT),
    };
    if let Some(file) = file {
        write_output(args.out.as_deref(), &file.to_text())?;
    }
    let st = outcome.stats();
    let status = stats::status(&outcome);
    eprintln!("{}", stats::summary(&inst, status, outcome.weight(), st));
    if let Some(path) = &args.stats {
        let row = stats::Row {
            instance: args.input.display().to_string(),
            n: inst.n,
            m: inst.m(),
            seed: None,
            status,
            weight: outcome.weight(),
            certificate: "-",
            stats: st.clone(),
        };
        stats::append(path, &[row])?;
    }
    if code == EXIT_TIMEOUT {
        eprintln!("time limit exceeded");
    }
    Ok(code)
}

fn build_instance(family: Family, n: Option<usize>, seed: u64, points: Option<&Path>) -> anyhow::Result<Instance> {
    if family == Family::PointsFile {
        let Some(path) = points else { bail!("the points-file family needs --points") };
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return Ok(instances::points_to_instance(&text)?);
    }
    let Some(n) = n else { bail!("--n is required for {family}") };
    Ok(instances::generate(&GenSpec { family, n, seed })?)
}

fn cmd_generate(args: GenerateArgs) -> anyhow::Result<()> {
    let inst = build_instance(args.family, args.n, args.seed, args.points.as_deref())?;
    write_output(args.out.as_deref(), &inst.to_dimacs())
}

fn trivially_infeasible(inst: &Instance) -> bool {
    let mut degree = vec![0usize; inst.n];
    for e in &inst.edges {
        degree[e.u as usize] += 1;
        degree[e.v as usize] += 1;
    }
    inst.n % 2 == 1 || degree.contains(&0)
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<u8> {
    let inst = Instance::load(&args.instance).with_context(|| format!("reading {}", args.instance.display()))?;
    let text = fs::read_to_string(&args.solution).with_context(|| format!("reading {}", args.solution.display()))?;
    let sol = SolutionFile::parse(&text, inst.n)?;
    let oracle = (inst.n <= 20).then(|| oracle_mwpm(&inst).map(|r| r.0));
    match sol {
        SolutionFile::Infeasible => {
            if trivially_infeasible(&inst) || oracle == Some(None) {
                println!("ok: instance has no perfect matching");
                return Ok(EXIT_OK);
            }
            if let Some(Some(w)) = oracle {
                println!("fail: a perfect matching of weight {w} exists");
            } else {
                println!("fail: infeasibility cannot be confirmed for n = {}", inst.n);
            }
            Ok(EXIT_ERROR)
        }
        SolutionFile::Matched { weight, pairs, certificate } => {
            let mut failures = Vec::new();
            match matching_weight(&inst, &pairs) {
                Ok(w) if w != weight => failures.push(format!("stated weight {weight}, matching weighs {w}")),
                Ok(_) => {}
                Err(e) => failures.push(e),
            }
            if let Some(cert) = &certificate {
                let report = check_certificate(&inst, &pairs, cert)?;
                failures.extend(report.violations);
            }
            if let Some(best) = oracle {
                if best != Some(weight) {
                    failures.push(format!("exhaustive optimum is {best:?}, stated {weight}"));
                }
            }
            if !failures.is_empty() {
                for f in &failures {
                    println!("fail: {f}");
                }
                return Ok(EXIT_ERROR);
            }
            match (&certificate, oracle) {
                (Some(_), _) => println!("ok: weight {weight} certified optimal"),
                (None, Some(_)) => println!("ok: weight {weight} matches the exhaustive optimum"),
                (None, None) => println!("ok: perfect matching of weight {weight}; optimality not certified"),
            }
            Ok(EXIT_OK)
        }
    }
}

fn bench_one(family: Family, n: usize, seed: u64, args: &BenchArgs) -> anyhow::Result<stats::Row> {
    let inst = build_instance(family, Some(n), seed, args.points.as_deref())?;
    let outcome = Solver::new(&inst, args.solver.config()?)?.solve();
    let certificate = match &outcome {
        Outcome::Matched(sol) => {
            if check_certificate(&inst, &sol.pairs, &sol.certificate)?.is_ok() {
                "ok"
            } else {
                "FAIL"
            }
        }
        _ => "-",
    };
    Ok(stats::Row {
        instance: family.name().to_string(),
        n: inst.n,
        m: inst.m(),
        seed: Some(seed),
        status: stats::status(&outcome),
        weight: outcome.weight(),
        certificate,
        stats: outcome.stats().clone(),
    })
}

fn cmd_bench(args: BenchArgs) -> anyhow::Result<()> {
    args.solver.config()?;
    let mut jobs = Vec::new();
    for &family in &args.families {
        let sizes: &[usize] = if family == Family::PointsFile { &[0] } else { &args.sizes };
        for &n in sizes {
            for r in 0..args.repeats {
                jobs.push((family, n, args.seed + r));
            }
        }
    }
    let rows: Mutex<Vec<Option<stats::Row>>> = Mutex::new(vec![None; jobs.len()]);
    let next = AtomicUsize::new(0);
    let first_error: Mutex<Option<anyhow::Error>> = Mutex::new(None);
    let worker = || loop {
        let i = next.fetch_add(1, Ordering::Relaxed);
        let Some(&(family, n, seed)) = jobs.get(i) else { break };
        match bench_one(family, n, seed, &args) {
            Ok(row) => {
                eprintln!("{} n={} seed={} {} {:.3}s", row.instance, row.n, seed, row.status, row.stats.total_time.as_secs_f64());
                rows.lock().unwrap()[i] = Some(row);
            }
            Err(e) => {
                first_error.lock().unwrap().get_or_insert(e);
                next.store(jobs.len(), Ordering::Relaxed);
            }
        }
    };
    let threads = if args.parallel { std::thread::available_parallelism().map_or(1, |n| n.get()) } else { 1 };
    std::thread::scope(|s| {
        for _ in 1..threads {
            s.spawn(worker);
        }
        worker();
    });
    if let Some(e) = first_error.into_inner().unwrap() {
        return Err(e);
    }
    let rows: Vec<stats::Row> = rows.into_inner().unwrap().into_iter().flatten().collect();
    match &args.out {
        Some(path) => {
            let _ = fs::remove_file(path);
            stats::append(path, &rows)
        }
        None => {
            print!("{}", stats::to_csv(&rows, true));
            Ok(())
        }
    }
}
