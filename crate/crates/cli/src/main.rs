mod complex;
mod pipeline;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::process::ExitCode;

use qintertwine::asymptotics::{DEFAULT_N_CUT, Verdict};
use qintertwine::charvar::{Branch, Family};
use qintertwine::trace::{SeriesOptions, TraceMethod, TraceSeries};
use qintertwine::verify::run_suite;
use qintertwine::Error;

use pipeline::{Output, SolveSpec};

/// Quantum intertwiners of once-punctured-torus bundles and the volume conjecture.
#[derive(Parser)]
#[command(name = "qintertwine", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Periodic edge weights for the word (sweep.json).
    Solve(SolveArgs),
    /// Solve, then lift to logarithms (sweep.json, lift.json).
    Lift(LiftArgs),
    /// Lift, then |Trace Λ| over odd n (trace.csv).
    Trace(TraceCmd),
    /// Fit ell(n) per n mod 4 and compare with vol/(4π) (fit.json, geom.json).
    Fit(FitCmd),
    /// Hyperbolic shapes and volume of the mapping torus (geom.json).
    Volume(WordArgs),
    /// The whole pipeline.
    Run(RunCmd),
    /// Run the invariant suite and print one line per property.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct WordArgs {
    /// Monodromy word over {L, R}.
    #[arg(long)]
    word: String,
    /// Exponent of the orientation-reversing factor J (0 or 1).
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    eps: u8,
    /// RNG seed for multi-start solvers.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random Newton starts.
    #[arg(long, default_value_t = 200)]
    starts: usize,
    /// Prefix prepended to every output file name (e.g. `out/ex1_`).
    #[arg(long, default_value = "")]
    out: String,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    word: WordArgs,
    /// Initial weight a0 as "a+bi", or "hyperbolic" for the complete structure.
    #[arg(long, default_value = "hyperbolic", allow_hyphen_values = true)]
    a0: String,
    /// Component of the LLR periodic locus (1 or 2).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    family: u8,
    /// Square-root branch for the LLR closed form.
    #[arg(long, default_value = "-", allow_hyphen_values = true, value_parser = parse_branch)]
    branch: Branch,
}

#[derive(Args)]
struct LiftArgs {
    #[command(flatten)]
    solve: SolveArgs,
    /// Puncture offset: A_0 is the principal log of a_0 plus 2πi·eta.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    eta: i64,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Product,
    Sum,
    Both,
}

#[derive(Args)]
struct TraceArgs {
    /// Root exponent: q = exp(2πik/n).
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    k: i64,
    #[arg(long, default_value_t = 3)]
    n_min: usize,
    #[arg(long, default_value_t = 301)]
    n_max: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Product)]
    method: MethodArg,
    /// Worker threads for the n scan (0: all cores).
    #[arg(long, env = "QINTERTWINE_WORKERS", default_value_t = 0)]
    workers: usize,
    /// Also write Λ at this n as JSON (row-major [re, im] pairs).
    #[arg(long, value_name = "N")]
    dump_matrix: Option<usize>,
}

#[derive(Args)]
struct FitArgs {
    /// Smallest n used in the fit.
    #[arg(long, default_value_t = DEFAULT_N_CUT)]
    n_cut: usize,
    /// Allowed |limit - vol/(4π)| per class.
    #[arg(long, default_value_t = 5e-4)]
    tol: f64,
    /// Also write the fitted curves (curves.csv).
    #[arg(long)]
    curves: bool,
}

#[derive(Args)]
struct TraceCmd {
    #[command(flatten)]
    lift: LiftArgs,
    #[command(flatten)]
    trace: TraceArgs,
}

#[derive(Args)]
struct FitCmd {
    #[command(flatten)]
    lift: LiftArgs,
    #[command(flatten)]
    trace: TraceArgs,
    #[command(flatten)]
    fit: FitArgs,
    /// Read the series from an existing trace.csv instead of recomputing it.
    #[arg(long, value_name = "CSV")]
    from: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct RunCmd {
    #[command(flatten)]
    lift: LiftArgs,
    #[command(flatten)]
    trace: TraceArgs,
    #[command(flatten)]
    fit: FitArgs,
}

fn parse_branch(s: &str) -> Result<Branch, String> {
    match s {
        "+" | "plus" => Ok(Branch::Plus),
        "-" | "minus" => Ok(Branch::Minus),
        _ => Err(format!("branch must be + or -, got {s:?}")),
    }
}

impl SolveArgs {
    fn spec(&self) -> SolveSpec<'_> {
        SolveSpec {
            word: &self.word.word,
            eps: self.word.eps,
            a0: &self.a0,
            family: if self.family == 1 { Family::One } else { Family::Two },
            branch: self.branch,
            starts: self.word.starts,
            seed: self.word.seed,
        }
    }
}

impl WordArgs {
    fn spec(&self) -> SolveSpec<'_> {
        SolveSpec {
            word: &self.word,
            eps: self.eps,
            a0: "hyperbolic",
            family: Family::One,
            branch: Branch::Minus,
            starts: self.starts,
            seed: self.seed,
        }
    }
}

impl TraceArgs {
    fn options(&self) -> Result<SeriesOptions> {
        if self.n_min > self.n_max {
            bail!("--n-min {} exceeds --n-max {}", self.n_min, self.n_max);
        }
        let method = match self.method {
            MethodArg::Product => TraceMethod::Product,
            MethodArg::Sum => TraceMethod::Sum,
            MethodArg::Both => TraceMethod::Both,
        };
        Ok(SeriesOptions { n_min: self.n_min, n_max: self.n_max, method, k: self.k, workers: self.workers })
    }
}

fn print_lift(cfg: &qintertwine::presets::Configuration) {
    let (l, m, n) = cfg.lift.hats();
    println!("correction windings (lhat, mhat, nhat) = ({l}, {m}, {n}); parity {}", cfg.lift.parity_value().rem_euclid(2));
}

fn lift_stage(args: &LiftArgs, out: &Output) -> Result<qintertwine::presets::Configuration> {
    let cfg = pipeline::configure(&args.solve.spec(), args.eta)?;
    out.json("sweep.json", &cfg.sweep)?;
    out.json("lift.json", &cfg.lift)?;
    print_lift(&cfg);
    Ok(cfg)
}

fn trace_stage(cfg: &qintertwine::presets::Configuration, args: &TraceArgs, out: &Output) -> Result<TraceSeries> {
    let s = pipeline::trace(cfg, &args.options()?)?;
    out.trace_csv(&s)?;
    let flagged = s.rows.iter().filter(|r| !r.usable()).count();
    println!("trace: {} rows written to {} ({flagged} flagged)", s.rows.len(), out.path("trace.csv").display());
    if let Some(n) = args.dump_matrix {
        println!("matrix written to {}", pipeline::dump_matrix(cfg, n, args.k, out)?.display());
    }
    Ok(s)
}

fn fit_stage(
    cfg: &qintertwine::presets::Configuration,
    s: &TraceSeries,
    spec: &SolveSpec<'_>,
    args: &FitArgs,
    out: &Output,
) -> Result<()> {
    let geom = pipeline::geometry(spec)?;
    out.json("geom.json", &geom)?;
    let report = pipeline::fit_and_compare(cfg, s, &geom, args.n_cut, args.tol)?;
    out.json("fit.json", &report)?;
    if args.curves {
        out.curves_csv(&report.fit, s)?;
    }
    println!("volume {:.6}, vol/(4π) = {:.6}", geom.volume, report.volume.volume_over_4pi);
    for c in &report.fit.classes {
        println!("  n ≡ {} mod 4: limit {:.6} (rms {:.2e}, {} points)", c.residue, c.limit(), c.rms_residual, c.points);
    }
    let verdict = match report.volume.verdict {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::NoPrediction => "no prediction (cancelling case)",
    };
    println!("verdict: {verdict}");
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Solve(a) => {
            let out = Output::new(&a.word.out);
            let s = pipeline::solve(&a.spec())?;
            out.json("sweep.json", &s)?;
            let w = s.initial();
            println!("a0 = {}, b0 = {}, c0 = {} (periodicity defect {:.1e})", w.a, w.b, w.c, s.periodicity_defect());
        }
        Command::Lift(a) => {
            lift_stage(&a, &Output::new(&a.solve.word.out))?;
        }
        Command::Trace(a) => {
            let out = Output::new(&a.lift.solve.word.out);
            let cfg = lift_stage(&a.lift, &out)?;
            trace_stage(&cfg, &a.trace, &out)?;
        }
        Command::Fit(a) => {
            let out = Output::new(&a.lift.solve.word.out);
            let cfg = lift_stage(&a.lift, &out)?;
            let s = match &a.from {
                Some(path) => {
                    let file = std::fs::File::open(path).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
                    TraceSeries::read_csv(std::io::BufReader::new(file))?
                }
                None => trace_stage(&cfg, &a.trace, &out)?,
            };
            fit_stage(&cfg, &s, &a.lift.solve.spec(), &a.fit, &out)?;
        }
        Command::Volume(a) => {
            let out = Output::new(&a.out);
            let g = pipeline::geometry(&a.spec())?;
            out.json("geom.json", &g)?;
            println!("volume {:.10}", g.volume);
        }
        Command::Run(a) => {
            let out = Output::new(&a.lift.solve.word.out);
            let cfg = lift_stage(&a.lift, &out)?;
            let s = trace_stage(&cfg, &a.trace, &out)?;
            fit_stage(&cfg, &s, &a.lift.solve.spec(), &a.fit, &out)?;
        }
        Command::Verify { seed } => {
            let checks = run_suite(seed);
            for c in &checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            return Ok(checks.iter().all(|c| c.passed));
        }
    }
    Ok(true)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(e) if e.is_degenerate_geometry() => 2,
        Some(Error::SolverFailure(_)) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
