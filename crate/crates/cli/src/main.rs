//! `repgbsm`: sweeps, verification, simulation and the security demo.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 I/O error.

mod grid;
mod output;

use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use repgbsm::engine::{sample_leaves, TreeSampler, DEPTH_CAP};
use repgbsm::maf::{haar_overlap_estimate, DensityMatrix2};
use repgbsm::{
    bob_pauli_mixture, chi_from_concurrence, closed_form_success, concurrence, eavesdropper_overlap, enumerate_tree,
    maf_sweep, monte_carlo, run_verification, success_sweep, AttemptPlan, ClosedFormVariant, Execution, InfoState,
    MafPlan, Strategy,
};

use grid::GridSpec;
use output::{csv_writer, sig12};

#[derive(Parser)]
#[command(name = "repgbsm", version, about = "Repeated generalized Bell-state-measurement teleportation")]
struct Cli {
    /// Run row computations on one thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cumulative success probability per attempt over a concurrence grid.
    SweepSuccess(SweepSuccessArgs),
    /// Haar-averaged fidelity over a concurrence grid.
    SweepMaf(SweepMafArgs),
    /// Cross-check the engine against printed bases, tables and formulas.
    Verify,
    /// Monte Carlo runs of the protocol for one resource and input state.
    Simulate(SimulateArgs),
    /// The Pauli-mixture security identity.
    SecurityDemo(SecurityArgs),
}

#[derive(Args)]
struct GridArgs {
    /// Grid as start:stop:count (count >= 2), over concurrence by default.
    #[arg(long, default_value = "0.05:1:20")]
    grid: GridSpec,

    /// Interpret the grid as resource angles chi in (0, pi/4].
    #[arg(long)]
    chi_grid: bool,

    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepSuccessArgs {
    #[command(flatten)]
    grid: GridArgs,

    /// Number of repeated attempts after the primary one.
    #[arg(long, default_value_t = 3)]
    m: usize,

    /// Add closed-form columns and their largest deviation (m <= 3).
    #[arg(long)]
    analytic: bool,

    /// Form of the three-repetition closed form.
    #[arg(long, default_value = "corrected")]
    variant: ClosedFormVariant,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyChoice {
    Continue,
    MeFinal,
    Both,
}

#[derive(Args)]
struct SweepMafArgs {
    #[command(flatten)]
    grid: GridArgs,

    /// Largest attempt budget; one row per m in 0..=M.
    #[arg(long, default_value_t = 2)]
    m: usize,

    #[arg(long, value_enum, default_value_t = StrategyChoice::Both)]
    strategy: StrategyChoice,
}

#[derive(Args)]
struct SimulateArgs {
    /// Resource angle in [0, pi/4].
    #[arg(long, conflicts_with = "concurrence", required_unless_present = "concurrence")]
    chi: Option<f64>,

    /// Resource concurrence in [0, 1].
    #[arg(long)]
    concurrence: Option<f64>,

    /// Amplitude of |0>, e.g. 0.6 or 0.6+0.0i.
    #[arg(long, requires = "b", conflicts_with_all = ["theta", "phi"])]
    a: Option<Complex64>,

    /// Amplitude of |1>.
    #[arg(long, requires = "a")]
    b: Option<Complex64>,

    /// Bloch polar angle of the input state.
    #[arg(long)]
    theta: Option<f64>,

    /// Bloch azimuth of the input state.
    #[arg(long)]
    phi: Option<f64>,

    /// Normalize --a/--b instead of rejecting them.
    #[arg(long)]
    renormalize: bool,

    #[arg(long, default_value_t = 3)]
    m: usize,

    #[arg(long, default_value = "continue")]
    strategy: Strategy,

    #[arg(long, default_value_t = 1_000_000)]
    trials: u64,

    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Number of example trajectories to print.
    #[arg(long, default_value_t = 5)]
    show: u64,

    /// Write every trajectory to this CSV file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SecurityArgs {
    #[arg(long, default_value_t = 2024)]
    seed: u64,

    /// Haar samples for the random-state comparison.
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
}

enum CliError {
    Usage(String),
    Io(String),
    VerifyFailed,
}

impl From<repgbsm::Error> for CliError {
    fn from(e: repgbsm::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::VerifyFailed => f.write_str("verification failed"),
        }
    }
}

type CliResult = Result<(), CliError>;

/// Resource angles and the concurrence column for a grid.
fn resolve_grid(args: &GridArgs) -> Result<Vec<(f64, f64)>, CliError> {
    args.grid
        .points()
        .into_iter()
        .map(|x| {
            if args.chi_grid {
                if !(x > 0.0 && x <= FRAC_PI_4 + 1e-15) {
                    return Err(CliError::Usage(format!("chi grid point {x} outside (0, pi/4]")));
                }
                let chi = x.min(FRAC_PI_4);
                Ok((concurrence(chi)?, chi))
            } else {
                if !(x > 0.0 && x <= 1.0) {
                    return Err(CliError::Usage(format!("concurrence grid point {x} outside (0, 1]")));
                }
                Ok((x, chi_from_concurrence(x)?))
            }
        })
        .collect()
}

fn sweep_success(args: SweepSuccessArgs, exec: Execution) -> CliResult {
    if args.m > DEPTH_CAP {
        return Err(CliError::Usage(format!("--m {} exceeds the cap of {DEPTH_CAP}", args.m)));
    }
    if args.analytic && args.m > 3 {
        return Err(CliError::Usage("--analytic needs --m <= 3".into()));
    }
    let points = resolve_grid(&args.grid)?;
    let chis: Vec<f64> = points.iter().map(|p| p.1).collect();
    let curves = success_sweep(&chis, args.m, exec)?;

    let mut header = vec!["concurrence".to_string(), "chi".to_string()];
    header.extend((0..=args.m).map(|k| format!("p_attempt{k}")));
    if args.analytic {
        header.extend((0..=args.m).map(|k| format!("cf_attempt{k}")));
        header.push("max_abs_diff".into());
    }
    let mut w = csv_writer(args.grid.out.as_deref())?;
    w.write_record(&header)?;
    for ((c, chi), p) in points.iter().zip(&curves) {
        let mut row = vec![sig12(*c), sig12(*chi)];
        row.extend(p.iter().map(|x| sig12(*x)));
        if args.analytic {
            let cf = (0..=args.m)
                .map(|k| closed_form_success(k, *c, args.variant))
                .collect::<Result<Vec<_>, _>>()?;
            let diff = cf.iter().zip(p).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            row.extend(cf.iter().map(|x| sig12(*x)));
            row.push(sig12(diff));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn sweep_maf(args: SweepMafArgs, exec: Execution) -> CliResult {
    if args.m > DEPTH_CAP {
        return Err(CliError::Usage(format!("--m {} exceeds the cap of {DEPTH_CAP}", args.m)));
    }
    let strategies: &[Strategy] = match args.strategy {
        StrategyChoice::Continue => &[Strategy::ContinueGbsm],
        StrategyChoice::MeFinal => &[Strategy::MeBellFinal],
        StrategyChoice::Both => &[Strategy::ContinueGbsm, Strategy::MeBellFinal],
    };
    let mut plans = Vec::new();
    for m in 0..=args.m {
        for &s in strategies {
            plans.push(MafPlan::new(m, s)?);
        }
    }
    let points = resolve_grid(&args.grid)?;
    let cs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let rows = maf_sweep(&cs, &plans, exec)?;

    let mut w = csv_writer(args.grid.out.as_deref())?;
    w.write_record(["concurrence", "m", "strategy", "maf"])?;
    for r in rows {
        w.write_record([sig12(r.concurrence), r.m.to_string(), r.strategy.to_string(), sig12(r.maf)])?;
    }
    w.flush()?;
    Ok(())
}

fn verify(exec: Execution) -> CliResult {
    let report = run_verification(exec);
    println!("{report}");
    if report.all_passed() {
        Ok(())
    } else {
        Err(CliError::VerifyFailed)
    }
}

fn simulate_info(args: &SimulateArgs) -> Result<InfoState, CliError> {
    match (args.a, args.b) {
        (Some(a), Some(b)) if args.renormalize => Ok(InfoState::renormalized(a, b)?),
        (Some(a), Some(b)) => InfoState::new(a, b)
            .map_err(|e| CliError::Usage(format!("{e} (pass --renormalize to normalize)"))),
        _ => Ok(InfoState::from_bloch(args.theta.unwrap_or(0.0), args.phi.unwrap_or(0.0))),
    }
}

fn simulate(args: SimulateArgs, exec: Execution) -> CliResult {
    let chi = match (args.chi, args.concurrence) {
        (Some(chi), _) => chi,
        (None, Some(c)) => chi_from_concurrence(c)?,
        (None, None) => unreachable!("clap requires one of --chi/--concurrence"),
    };
    let info = simulate_info(&args)?;
    let plan = AttemptPlan::new(args.m, args.strategy)?;
    let estimate = monte_carlo(chi, &info, plan, args.trials, args.seed, exec)?;
    let tree = enumerate_tree(chi, &info, plan)?;

    println!(
        "chi = {chi:.6}  C = {:.6}  a = {}  b = {}  m = {}  strategy = {}",
        concurrence(chi)?,
        info.a(),
        info.b(),
        args.m,
        args.strategy
    );
    println!("trials = {}  seed = {}", args.trials, args.seed);
    println!("{:>7}  {:>14}  {:>14}  {:>14}  {:>14}", "attempt", "exact", "empirical", "exact_cum", "empirical_cum");
    let mut prev = 0.0;
    let mut emp_cum = 0u64;
    for (k, &cum) in tree.cumulative_success.iter().enumerate() {
        emp_cum += estimate.successes_by_attempt[k];
        let n = args.trials as f64;
        println!(
            "{k:>7}  {:>14.8}  {:>14.8}  {cum:>14.8}  {:>14.8}",
            cum - prev,
            estimate.successes_by_attempt[k] as f64 / n,
            emp_cum as f64 / n
        );
        prev = cum;
    }
    let exact = *tree.cumulative_success.last().expect("at least one attempt");
    let sigma = estimate.standard_error.max(f64::MIN_POSITIVE);
    println!(
        "success rate {:.6} +- {:.6} (exact {exact:.6}, {:.2} sigma)",
        estimate.success_rate,
        estimate.standard_error,
        (estimate.success_rate - exact).abs() / sigma
    );

    let sampler = TreeSampler::new(&tree);
    let shown = sample_leaves(&tree, args.show.min(args.trials), args.seed, exec);
    if !shown.is_empty() {
        println!("example trajectories:");
    }
    for leaf in shown {
        let r = sampler.record(leaf);
        println!(
            "  {:<14} {:<9} correction {:<2} fidelity {:.6}",
            r.label(),
            if r.status.is_success() { "success" } else { "truncated" },
            r.correction.name(),
            r.fidelity_after_correction
        );
    }

    if let Some(path) = &args.out {
        let mut w = csv_writer(Some(path))?;
        w.write_record(["trial", "history", "attempts", "success", "correction", "fidelity"])?;
        for (i, leaf) in sample_leaves(&tree, args.trials, args.seed, exec).into_iter().enumerate() {
            let r = sampler.record(leaf);
            w.write_record([
                i.to_string(),
                r.label(),
                (r.attempt + 1).to_string(),
                r.status.is_success().to_string(),
                r.correction.name().to_string(),
                sig12(r.fidelity_after_correction),
            ])?;
        }
        w.flush()?;
        println!("trajectories written to {}", path.display());
    }
    Ok(())
}

fn print_matrix(rho: &DensityMatrix2) {
    for row in rho.entries() {
        println!("    [{:>9.6} {:+.6}i  {:>9.6} {:+.6}i]", row[0].re, row[0].im, row[1].re, row[1].im);
    }
}

fn security_demo(args: SecurityArgs) -> CliResult {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let samples = [
        ("|0>", InfoState::from_bloch(0.0, 0.0)),
        ("(|0>+|1>)/sqrt2", InfoState::new(Complex64::new(h, 0.0), Complex64::new(h, 0.0))?),
        ("0.6|0>+0.8i|1>", InfoState::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8))?),
    ];
    for (name, info) in &samples {
        let rho = bob_pauli_mixture(info);
        println!("|I> = {name}");
        println!("  rho_Bob (equal Pauli mixture):");
        print_matrix(&rho);
        println!("  purity Tr(rho^2) = {:.6}", rho.purity());
        println!("  Tr[rho_Bob rho_I] = {:.6}", eavesdropper_overlap(info));
    }
    let est = haar_overlap_estimate(&samples[2].1, args.samples, args.seed)?;
    println!(
        "Haar-random pure states: mean |<psi|I>|^2 = {:.6} +- {:.6} over {} samples (seed {})",
        est.mean, est.standard_error, est.samples, args.seed
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    let result = match cli.command {
        Command::SweepSuccess(a) => sweep_success(a, exec),
        Command::SweepMaf(a) => sweep_maf(a, exec),
        Command::Verify => verify(exec),
        Command::Simulate(a) => simulate(a, exec),
        Command::SecurityDemo(a) => security_demo(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("repgbsm: {e}");
            ExitCode::from(match e {
                CliError::VerifyFailed => 1,
                CliError::Usage(_) => 2,
                CliError::Io(_) => 3,
            })
        }
    }
}
