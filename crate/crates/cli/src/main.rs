//! Command-line driver: solver runs, scheme comparison, viscosity profiles
//! and the Monte Carlo chain, all emitting plot-ready CSV.
//!
//! Exit codes: 0 success, 1 usage, 2 numerical failure, 3 I/O failure.
//! Numbers are printed with Rust's shortest round-trip formatting, so every
//! emitted value parses back to the exact in-memory double.

use clap::{Args, Parser, Subcommand};
use genedrift::*;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "genedrift",
    version,
    about = "Finite-volume solvers for the genetic-drift diffusion equation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one implicit-Euler solve and write snapshots, diagnostics and a summary.
    Solve(SolveArgs),
    /// Check the stencil decompositions between the schemes on random vectors.
    Compare(CompareArgs),
    /// Emit regularized steady-state profiles and test-function pairings.
    Viscosity(ViscosityArgs),
    /// Monte Carlo ensemble of the Wright-Fisher chain.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Flux discretization: upwind | central-split | central-whole.
    #[arg(long, default_value = "central-whole")]
    scheme: String,
    /// Cell count M (grid spacing h = 1/M).
    #[arg(long, default_value_t = 1000)]
    cells: usize,
    /// Time step.
    #[arg(long, default_value_t = 1e-4)]
    tau: f64,
    /// Final time.
    #[arg(long, default_value_t = 6.0)]
    t_end: f64,
    /// Mean of the Gaussian initial state, in (0,1).
    #[arg(long, default_value_t = 0.4)]
    p: f64,
    /// Standard deviation of the Gaussian initial state.
    #[arg(long, default_value_t = 0.01)]
    sigma: f64,
    /// Comma-separated snapshot times (defaults to the final time).
    #[arg(long)]
    snapshots: Option<String>,
    /// Output directory for CSV files and the summary.
    #[arg(long)]
    out_dir: PathBuf,
    /// Rescale the initial state so its discrete probability is exactly 1.
    #[arg(long, default_value_t = false)]
    renormalize: bool,
    /// Stop early once max|f' - f|/tau falls below this threshold.
    #[arg(long)]
    steady_tol: Option<f64>,
    /// Record diagnostics every this many steps.
    #[arg(long, default_value_t = 1)]
    record_stride: usize,
    /// Accepted for interface stability; the solve is deterministic and the
    /// value is ignored.
    #[arg(long)]
    seed_unused: Option<u64>,
}

#[derive(Args)]
struct CompareArgs {
    /// Cell count M.
    #[arg(long, default_value_t = 8)]
    cells: usize,
    /// Number of random density vectors.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// RNG seed for the random vectors.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ViscosityArgs {
    /// Comma-separated viscosity values.
    #[arg(long, default_value = "0.5,0.01")]
    epsilons: String,
    /// Number of uniform sample intervals for each profile.
    #[arg(long, default_value_t = 512)]
    profile_points: usize,
    /// Test function paired with each profile: bump0 | bump1 | bumpmid | one.
    #[arg(long, default_value = "one")]
    test_function: String,
    /// Output directory for profile CSVs and the pairing table.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    /// Population size N.
    #[arg(long, default_value_t = 100)]
    pop_size: u64,
    /// Initial frequency; the chain starts at round(p*N).
    #[arg(long, default_value_t = 0.4)]
    p: f64,
    /// Number of independent chains.
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// RNG seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Generations before a chain counts as unresolved.
    #[arg(long, default_value_t = 100_000)]
    max_generations: u64,
    /// Optional output directory for the summary file.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

type CliResult<T> = std::result::Result<T, CliError>;

enum CliError {
    Usage(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) | CliError::Io(m) => m,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn numerical(err: impl Display) -> CliError {
    CliError::Numerical(err.to_string())
}

fn io_err(path: &Path, err: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {err}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|e| io_err(path, e))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{err}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{err}");
                    ExitCode::from(1)
                }
            };
        }
    };

    let result = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Viscosity(args) => cmd_viscosity(args),
        Command::Oracle(args) => cmd_oracle(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("genedrift: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}

fn parse_list(raw: &str, what: &str) -> CliResult<Vec<(String, f64)>> {
    raw.split(',')
        .map(str::trim)
        .filter(|tok| !tok.is_empty())
        .map(|tok| {
            tok.parse::<f64>()
                .map(|v| (tok.to_string(), v))
                .map_err(|_| usage(format!("invalid {what} '{tok}'")))
        })
        .collect()
}

fn cmd_solve(args: SolveArgs) -> CliResult<()> {
    let started = Instant::now();
    let scheme: SchemeKind = args.scheme.parse().map_err(|e| usage(format!("{e}")))?;
    if args.cells < 3 {
        return Err(usage(format!(
            "--cells must be at least 3, got {}",
            args.cells
        )));
    }
    if !(args.tau > 0.0) {
        return Err(usage(format!("--tau must be positive, got {}", args.tau)));
    }
    if !(args.t_end >= 0.0) {
        return Err(usage(format!(
            "--t-end must be nonnegative, got {}",
            args.t_end
        )));
    }
    if args.record_stride == 0 {
        return Err(usage("--record-stride must be at least 1"));
    }
    let ic = InitialCondition::new(args.p, args.sigma, args.renormalize)
        .map_err(|e| usage(e.to_string()))?;

    let snapshot_times = match &args.snapshots {
        Some(raw) => parse_list(raw, "snapshot time")?,
        None => vec![(format!("{}", args.t_end), args.t_end)],
    };
    for (tok, t) in &snapshot_times {
        if !(*t >= 0.0 && *t <= args.t_end) {
            return Err(usage(format!(
                "snapshot time {tok} outside [0, {}]",
                args.t_end
            )));
        }
    }

    let cfg = RunConfig {
        scheme,
        cells: args.cells,
        tau: args.tau,
        t_end: args.t_end,
        snapshot_times: snapshot_times.iter().map(|(_, t)| *t).collect(),
        steady_tol: args.steady_tol,
        ic,
        record_stride: args.record_stride,
    };
    let trajectory = run(&cfg).map_err(numerical)?;
    let grid = build_grid::<f64>(args.cells).map_err(numerical)?;

    std::fs::create_dir_all(&args.out_dir).map_err(|e| io_err(&args.out_dir, e))?;

    for (idx, (t, state)) in trajectory.snapshots.iter().enumerate() {
        let mut csv = String::from("x,f\n");
        for (x, f) in grid.nodes().iter().zip(&state.f) {
            csv.push_str(&format!("{x},{f}\n"));
        }
        let name = format!("snapshot_{idx:03}_t{t}.csv");
        write_file(&args.out_dir.join(name), &csv)?;
    }

    let mut csv = String::from("t,P,E,interior_mass,v_norm,f0,fM\n");
    for r in trajectory.diagnostics.records() {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.t, r.probability, r.expectation, r.interior_mass, r.v_norm, r.f0, r.fm
        ));
    }
    write_file(&args.out_dir.join("diagnostics.csv"), &csv)?;

    let first = trajectory
        .diagnostics
        .first()
        .expect("initial diagnostics row always recorded");
    let report = steady_report(&grid, &trajectory, first.probability, first.expectation)
        .map_err(numerical)?;

    let mut summary = String::new();
    summary.push_str(&format!("scheme={}\n", scheme.name()));
    summary.push_str(&format!("cells={}\n", args.cells));
    summary.push_str(&format!("tau={}\n", args.tau));
    summary.push_str(&format!("t_end={}\n", args.t_end));
    summary.push_str(&format!("p={}\n", args.p));
    summary.push_str(&format!("sigma={}\n", args.sigma));
    summary.push_str(&format!("renormalize={}\n", args.renormalize));
    summary.push_str(&format!("P0={}\n", first.probability));
    summary.push_str(&format!("E0={}\n", first.expectation));
    summary.push_str(&format!("steps={}\n", trajectory.steps_taken));
    summary.push_str(&format!("t_terminal={}\n", trajectory.terminal.t));
    summary.push_str(&format!("w0={}\n", report.w0));
    summary.push_str(&format!("w1={}\n", report.w1));
    summary.push_str(&format!("w0_deviation={}\n", report.w0_deviation));
    summary.push_str(&format!("w1_deviation={}\n", report.w1_deviation));
    summary.push_str(&format!("interior_mass={}\n", report.interior_mass));
    summary.push_str(&format!(
        "wall_time_seconds={}\n",
        started.elapsed().as_secs_f64()
    ));
    write_file(&args.out_dir.join("summary.txt"), &summary)?;

    println!(
        "{} M={} tau={} t={}: w0={} w1={} ({} steps)",
        scheme.name(),
        args.cells,
        args.tau,
        trajectory.terminal.t,
        report.w0,
        report.w1,
        trajectory.steps_taken
    );
    Ok(())
}

fn cmd_compare(args: CompareArgs) -> CliResult<()> {
    use rand::{Rng, SeedableRng};
    if args.cells < 3 {
        return Err(usage(format!(
            "--cells must be at least 3, got {}",
            args.cells
        )));
    }
    if args.samples == 0 {
        return Err(usage("--samples must be at least 1"));
    }
    let grid = build_grid::<f64>(args.cells).map_err(numerical)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.seed);

    let mut max_lambda = 0.0f64;
    let mut max_lambda_tilde = 0.0f64;
    for _ in 0..args.samples {
        let f: Vec<f64> = (0..=args.cells)
            .map(|_| rng.random_range(0.0..1.0))
            .collect();
        let l1 = flux_divergence(SchemeKind::Upwind, &grid, &f).map_err(numerical)?;
        let l2 = flux_divergence(SchemeKind::CentralSplit, &grid, &f).map_err(numerical)?;
        let l3 = flux_divergence(SchemeKind::CentralWhole, &grid, &f).map_err(numerical)?;
        let lam = lambda_residual(&grid, &f).map_err(numerical)?;
        let lt = lambda_tilde_residual(&grid, &f).map_err(numerical)?;
        for i in 0..args.cells - 1 {
            max_lambda = max_lambda.max((l2[i] - l3[i] - lam[i]).abs());
            max_lambda_tilde = max_lambda_tilde.max((l1[i] - l2[i] - lt[i]).abs());
        }
    }

    println!("identity,max_abs_deviation");
    println!("scheme2_minus_scheme3_minus_lambda,{max_lambda}");
    println!("scheme1_minus_scheme2_minus_lambda_tilde,{max_lambda_tilde}");

    let worst = max_lambda.max(max_lambda_tilde);
    if worst > 1e-12 {
        return Err(numerical(format!(
            "stencil decomposition deviation {worst:e} exceeds 1e-12"
        )));
    }
    Ok(())
}

fn cmd_viscosity(args: ViscosityArgs) -> CliResult<()> {
    let epsilons = parse_list(&args.epsilons, "viscosity")?;
    if epsilons.is_empty() {
        return Err(usage("--epsilons must list at least one value"));
    }
    for (tok, eps) in &epsilons {
        if !(*eps > 0.0) {
            return Err(usage(format!("viscosity '{tok}' must be positive")));
        }
    }
    if args.profile_points < 2 {
        return Err(usage("--profile-points must be at least 2"));
    }
    let test_function: TestFunction = args
        .test_function
        .parse()
        .map_err(|e| usage(format!("{e}")))?;

    std::fs::create_dir_all(&args.out_dir).map_err(|e| io_err(&args.out_dir, e))?;

    let mut pairing_csv = String::from("epsilon,pairing\n");
    for (tok, eps) in &epsilons {
        let profile = ViscosityProfile::new(*eps).map_err(numerical)?;

        let mut csv = String::from("x,f_eps\n");
        for i in 0..=args.profile_points {
            let x = i as f64 / args.profile_points as f64;
            let f = profile.density(x).map_err(numerical)?;
            csv.push_str(&format!("{x},{f}\n"));
        }
        write_file(&args.out_dir.join(format!("profile_eps{tok}.csv")), &csv)?;

        let pairing =
            pair_with_test_function(&profile, |x| test_function.eval(x)).map_err(numerical)?;
        pairing_csv.push_str(&format!("{tok},{pairing}\n"));
    }
    write_file(&args.out_dir.join("pairings.csv"), &pairing_csv)?;

    println!(
        "wrote {} profile(s) and pairings.csv (test function: {})",
        epsilons.len(),
        test_function.name()
    );
    Ok(())
}

fn cmd_oracle(args: OracleArgs) -> CliResult<()> {
    let cfg = ChainConfig {
        pop_size: args.pop_size,
        p: args.p,
        trials: args.trials,
        max_generations: args.max_generations,
        rng_seed: args.seed,
    };
    cfg.validate().map_err(|e| usage(e.to_string()))?;

    let estimate = fixation_probability(&cfg).map_err(numerical)?;
    let i0 = cfg.initial_count();
    let draws = 1_000_000u64;
    let (mean, var) = one_step_moments(args.pop_size, i0, draws, args.seed);
    let exact_var = i0 as f64 * (1.0 - i0 as f64 / args.pop_size as f64);

    let mut summary = String::new();
    summary.push_str(&format!("pop_size={}\n", args.pop_size));
    summary.push_str(&format!("p={}\n", args.p));
    summary.push_str(&format!("initial_count={i0}\n"));
    summary.push_str(&format!("trials={}\n", args.trials));
    summary.push_str(&format!("max_generations={}\n", args.max_generations));
    summary.push_str(&format!("seed={}\n", args.seed));
    summary.push_str(&format!("fixed={}\n", estimate.fixed));
    summary.push_str(&format!("lost={}\n", estimate.lost));
    summary.push_str(&format!("unresolved={}\n", estimate.unresolved));
    summary.push_str(&format!("fixed_fraction={}\n", estimate.fixed_fraction()));
    summary.push_str(&format!("lost_fraction={}\n", estimate.lost_fraction()));
    summary.push_str(&format!(
        "unresolved_fraction={}\n",
        estimate.unresolved_fraction()
    ));
    summary.push_str(&format!("onestep_draws={draws}\n"));
    summary.push_str(&format!("onestep_mean={mean}\n"));
    summary.push_str(&format!("onestep_mean_expected={i0}\n"));
    summary.push_str(&format!("onestep_variance={var}\n"));
    summary.push_str(&format!("onestep_variance_expected={exact_var}\n"));

    print!("{summary}");
    if let Some(dir) = &args.out_dir {
        std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        write_file(&dir.join("oracle_summary.txt"), &summary)?;
    }
    Ok(())
}
