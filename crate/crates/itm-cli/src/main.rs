//! `itm`: command line front end for the iterative transformation solver.
//!
//! Five subcommands cover the workflows the library supports: `solve` for a
//! single beta with a visible iteration trace, `sweep` for tables over many
//! betas, `boundary-study` for truncation sensitivity, `oracle-check` for
//! cross-validation against classic shooting, and `profile` for plottable
//! similarity profiles.
//!
//! Exit codes: 0 success, 1 solver non-convergence, 2 usage error, 3 I/O
//! error. Data files are written byte-identically across reruns; the only
//! timestamp lives in the `<out>.manifest.json` sidecar.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use itm_core::model::ModelParams;
use itm_core::ode::{IntegratorConfig, Method};
use itm_core::shooting::{shoot_solve, ShootConfig};
use itm_core::solver::{
    boundary_study, solve, sweep, RootMethod, SolveError, SolveResult, SolverConfig,
};

#[derive(Parser)]
#[command(name = "itm", version, about = "Similarity boundary layer solver built on a scaling invariance")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a single beta and print the iteration trace
    Solve(SolveArgs),
    /// Solve a list or range of betas and tabulate the results
    Sweep(SweepArgs),
    /// Re-solve one beta across several domain truncations
    BoundaryStudy(BoundaryStudyArgs),
    /// Compare the solver against a classic shooting run on a matched domain
    OracleCheck(OracleCheckArgs),
    /// Sample the physical similarity profile on a uniform grid
    Profile(ProfileArgs),
}

#[derive(Args, Clone)]
struct SolverFlags {
    /// Scaling exponent sigma of the extended invariance group
    #[arg(long, default_value_t = 4.0)]
    sigma: f64,

    /// Right end of the truncated starred domain
    #[arg(long = "eta-inf", default_value_t = 5.0)]
    eta_inf: f64,

    /// Convergence tolerance on |Gamma|
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,

    /// Initial guess for the transformation parameter h*
    #[arg(long, default_value_t = 1.75)]
    h0: f64,

    /// Root-finding engine for Gamma(h*) = 0
    #[arg(long, value_enum, default_value_t = MethodFlag::Newton)]
    method: MethodFlag,

    /// Bracket "lo,hi" (required by bisection, optional seed pair for secant)
    #[arg(long, value_parser = parse_pair)]
    bracket: Option<(f64, f64)>,

    /// Integration scheme for the starred initial value problems
    #[arg(long, value_enum, default_value_t = IntegratorFlag::Adaptive)]
    integrator: IntegratorFlag,

    /// Step size for the fixed-step integrator (ignored by adaptive)
    #[arg(long, default_value_t = 0.01)]
    step: f64,
}

#[derive(Args, Clone)]
struct OutputFlags {
    /// Write the data table to this file instead of stdout
    #[arg(long)]
    out: Option<String>,

    /// Output format for the data table
    #[arg(long, value_enum, default_value_t = FormatFlag::Csv)]
    format: FormatFlag,
}

#[derive(Args)]
struct SolveArgs {
    /// Velocity-ratio exponent beta of the model equation
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,

    #[command(flatten)]
    solver: SolverFlags,

    /// Also run the shooting oracle on the matched physical domain
    #[arg(long)]
    oracle: bool,

    /// Number of uniform profile samples to attach (0 = none)
    #[arg(long, default_value_t = 0)]
    samples: usize,

    #[command(flatten)]
    output: OutputFlags,
}

#[derive(Args)]
struct SweepArgs {
    /// Range of betas as "lo:hi:step", endpoints inclusive
    #[arg(long = "beta-range", value_parser = parse_range, conflicts_with = "beta_list", allow_hyphen_values = true)]
    beta_range: Option<BetaRange>,

    /// Explicit comma-separated list of betas
    #[arg(long = "beta-list", value_delimiter = ',', allow_hyphen_values = true)]
    beta_list: Option<Vec<f64>>,

    #[command(flatten)]
    solver: SolverFlags,

    #[command(flatten)]
    output: OutputFlags,
}

#[derive(Args)]
struct BoundaryStudyArgs {
    /// Velocity-ratio exponent beta of the model equation
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,

    /// Comma-separated truncation points to re-solve at
    #[arg(long = "eta-inf", value_delimiter = ',', default_value = "5")]
    eta_inf: Vec<f64>,

    /// Scaling exponent sigma of the extended invariance group
    #[arg(long, default_value_t = 4.0)]
    sigma: f64,

    /// Convergence tolerance on |Gamma|
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,

    /// Initial guess for the transformation parameter h*
    #[arg(long, default_value_t = 1.75)]
    h0: f64,

    /// Root-finding engine for Gamma(h*) = 0
    #[arg(long, value_enum, default_value_t = MethodFlag::Newton)]
    method: MethodFlag,

    /// Bracket "lo,hi" (required by bisection, optional seed pair for secant)
    #[arg(long, value_parser = parse_pair)]
    bracket: Option<(f64, f64)>,

    /// Integration scheme for the starred initial value problems
    #[arg(long, value_enum, default_value_t = IntegratorFlag::Adaptive)]
    integrator: IntegratorFlag,

    /// Step size for the fixed-step integrator (ignored by adaptive)
    #[arg(long, default_value_t = 0.01)]
    step: f64,

    #[command(flatten)]
    output: OutputFlags,
}

#[derive(Args)]
struct OracleCheckArgs {
    /// Velocity-ratio exponent beta of the model equation
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,

    #[command(flatten)]
    solver: SolverFlags,

    #[command(flatten)]
    output: OutputFlags,
}

#[derive(Args)]
struct ProfileArgs {
    /// Velocity-ratio exponent beta of the model equation
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,

    #[command(flatten)]
    solver: SolverFlags,

    /// Number of uniform samples across the starred domain
    #[arg(long, default_value_t = 100)]
    samples: usize,

    #[command(flatten)]
    output: OutputFlags,
}

#[derive(ValueEnum, Clone, Copy)]
enum MethodFlag {
    Newton,
    Secant,
    Bisection,
}

#[derive(ValueEnum, Clone, Copy)]
enum IntegratorFlag {
    Rk4,
    Adaptive,
}

#[derive(ValueEnum, Clone, Copy, PartialEq)]
enum FormatFlag {
    Csv,
    Json,
}

fn parse_pair(raw: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = raw
        .split_once(',')
        .ok_or_else(|| format!("expected \"lo,hi\", got {raw:?}"))?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("bad lower value: {e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("bad upper value: {e}"))?;
    Ok((lo, hi))
}

/// Expanded beta range. The newtype keeps clap from treating the parsed
/// vector as a repeated-argument list.
#[derive(Clone)]
struct BetaRange(Vec<f64>);

fn parse_range(raw: &str) -> Result<BetaRange, String> {
    let mut parts = raw.splitn(3, ':');
    let mut next = |name: &str| {
        parts
            .next()
            .ok_or_else(|| format!("expected \"lo:hi:step\", missing {name}"))?
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("bad {name} in range: {e}"))
    };
    let lo = next("lo")?;
    let hi = next("hi")?;
    let step = next("step")?;
    if !(step > 0.0) {
        return Err("range step must be positive".into());
    }
    if hi < lo {
        return Err("range upper end lies below the lower end".into());
    }
    // Half-step guard: lo + k*step accumulates rounding, so accept the last
    // point whenever it lands within half a step of the nominal upper end.
    let count = ((hi - lo) / step + 0.5).floor() as usize;
    let betas: Vec<f64> = (0..=count)
        .map(|k| lo + k as f64 * step)
        .filter(|b| *b <= hi + 0.5 * step)
        .collect();
    if betas.is_empty() {
        return Err("range produced no points".into());
    }
    Ok(BetaRange(betas))
}

/// Post-parse failures carry the exit code the shell contract promises.
enum CliError {
    Usage(String),
    Solver(String),
    Io(String),
}

/// Configuration mistakes surface as usage errors; everything else that the
/// solver reports is a genuine non-convergence.
fn solver_error(err: SolveError) -> CliError {
    match err {
        SolveError::InvalidConfig(_) | SolveError::Model(_) => CliError::Usage(format!("{err}")),
        other => CliError::Solver(format!("{other}")),
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Solver(_) => 1,
            CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Solver(m) | CliError::Io(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Sweep(args) => run_sweep(args),
        Command::BoundaryStudy(args) => run_boundary_study(args),
        Command::OracleCheck(args) => run_oracle_check(args),
        Command::Profile(args) => run_profile(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("itm: {}", err.message());
            ExitCode::from(err.code())
        }
    }
}

fn build_config(beta: f64, flags: &SolverFlags, samples: usize) -> Result<SolverConfig, CliError> {
    let params = ModelParams::with_sigma(beta, flags.sigma)
        .map_err(|e| CliError::Usage(format!("{e}")))?;
    let mut cfg = SolverConfig::new(params);
    cfg.eta_inf_star = flags.eta_inf;
    cfg.tol = flags.tol;
    cfg.h0_star = flags.h0;
    cfg.method = match flags.method {
        MethodFlag::Newton => RootMethod::Newton,
        MethodFlag::Secant => RootMethod::Secant,
        MethodFlag::Bisection => RootMethod::Bisection,
    };
    cfg.bracket = flags.bracket;
    cfg.integrator = match flags.integrator {
        IntegratorFlag::Adaptive => IntegratorConfig::adaptive(1e-12),
        IntegratorFlag::Rk4 => {
            let mut ic = IntegratorConfig::default();
            ic.method = Method::FixedRk4;
            ic.step = flags.step;
            ic
        }
    };
    cfg.profile_samples = samples;
    Ok(cfg)
}

/// Echo of the resolved configuration for the manifest sidecar.
fn config_json(cfg: &SolverConfig) -> serde_json::Value {
    let method = match cfg.method {
        RootMethod::Newton => "newton",
        RootMethod::Secant => "secant",
        RootMethod::Bisection => "bisection",
    };
    let integrator = match cfg.integrator.method {
        Method::FixedRk4 => "rk4",
        Method::Adaptive => "adaptive",
    };
    json!({
        "beta": round9(cfg.params.beta()),
        "sigma": round9(cfg.params.sigma()),
        "eta_inf_star": round9(cfg.eta_inf_star),
        "tol": round9(cfg.tol),
        "h0_star": round9(cfg.h0_star),
        "max_iter": cfg.max_iter,
        "method": method,
        "bracket": cfg.bracket.map(|(lo, hi)| json!([round9(lo), round9(hi)])),
        "integrator": integrator,
        "step": round9(cfg.integrator.step),
        "profile_samples": cfg.profile_samples,
    })
}

// Numbers are printed with at most nine significant digits, using the
// shortest representation that round-trips at that precision. Keeps the
// tables diff-friendly without burying real differences in noise digits.
fn fmt9(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let shortest = x.to_string();
    let digits = shortest.chars().filter(|c| c.is_ascii_digit()).count();
    let exp_digits = shortest
        .split(['e', 'E'])
        .nth(1)
        .map(|e| e.chars().filter(|c| c.is_ascii_digit()).count())
        .unwrap_or(0);
    if digits - exp_digits <= 9 {
        return shortest;
    }
    round9(x).to_string()
}

fn round9(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.8e}").parse().unwrap_or(x)
}

fn deliver(
    text: &str,
    output: &OutputFlags,
    command: &str,
    config: serde_json::Value,
) -> Result<(), CliError> {
    let Some(path) = &output.out else {
        print!("{text}");
        return Ok(());
    };
    std::fs::write(path, text)
        .map_err(|e| CliError::Io(format!("cannot write {path}: {e}")))?;
    let manifest = json!({
        "command": command,
        "config": config,
        "artifacts": [path],
        "timestamp": chrono::Utc::now().to_rfc3339(),
        "tool_version": env!("CARGO_PKG_VERSION"),
    });
    let manifest_path = format!("{path}.manifest.json");
    let body = serde_json::to_string_pretty(&manifest)
        .expect("manifest serializes") + "\n";
    std::fs::write(&manifest_path, body)
        .map_err(|e| CliError::Io(format!("cannot write {manifest_path}: {e}")))?;
    eprintln!("itm: wrote {path} and {manifest_path}");
    Ok(())
}

fn trace_table(result: &SolveResult) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:>9}  {:>18}  {:>18}  {:>18}\n",
        "iteration", "h_star", "lambda", "Gamma"
    ));
    for rec in &result.trace.records {
        let lambda = rec.aux.map_or_else(|| "-".to_string(), fmt9);
        out.push_str(&format!(
            "{:>9}  {:>18}  {:>18}  {:>18}\n",
            rec.iteration,
            fmt9(rec.x),
            lambda,
            fmt9(rec.fx),
        ));
    }
    out
}

fn solve_summary(result: &SolveResult) -> String {
    format!(
        "f''(0) = {}\nh* = {}, lambda = {}, {} iterations, {} seed probes\nresiduals: |Gamma| = {}, |f'(0) - 1| = {}, |f'(lambda eta_inf*)| = {}\n",
        fmt9(result.fpp0),
        fmt9(result.h_star),
        fmt9(result.lambda),
        result.iterations(),
        result.seed_probes,
        fmt9(result.residuals.gamma_abs),
        fmt9(result.residuals.wall_slope),
        fmt9(result.residuals.outer_slope),
    )
}

fn solve_json(result: &SolveResult, cfg: &SolverConfig) -> serde_json::Value {
    let trace: Vec<serde_json::Value> = result
        .trace
        .records
        .iter()
        .map(|rec| {
            json!({
                "iteration": rec.iteration,
                "h_star": round9(rec.x),
                "lambda": rec.aux.map(round9),
                "gamma": round9(rec.fx),
            })
        })
        .collect();
    let profile = result.profile.as_ref().map(|traj| {
        traj.nodes
            .iter()
            .map(|(eta, u)| {
                json!({
                    "eta": round9(*eta),
                    "f": round9(u[0]),
                    "fp": round9(u[1]),
                    "fpp": round9(u[2]),
                })
            })
            .collect::<Vec<_>>()
    });
    json!({
        "beta": round9(result.beta),
        "sigma": round9(cfg.params.sigma()),
        "eta_inf_star": round9(cfg.eta_inf_star),
        "h_star": round9(result.h_star),
        "lambda": round9(result.lambda),
        "fpp0": round9(result.fpp0),
        "iterations": result.iterations(),
        "seed_probes": result.seed_probes,
        "residuals": {
            "gamma_abs": round9(result.residuals.gamma_abs),
            "wall_slope": round9(result.residuals.wall_slope),
            "outer_slope": round9(result.residuals.outer_slope),
        },
        "trace": trace,
        "profile": profile,
    })
}

fn run_solve(args: SolveArgs) -> Result<(), CliError> {
    let cfg = build_config(args.beta, &args.solver, args.samples)?;
    let result = solve(&cfg).map_err(solver_error)?;

    print!("{}", trace_table(&result));
    print!("{}", solve_summary(&result));

    if args.oracle {
        let (oracle, eta_inf) = matched_oracle(&result, &cfg)?;
        let diff = (oracle - result.fpp0).abs();
        println!(
            "oracle: f''(0) = {} (shooting on [0, {}]), |diff| = {}",
            fmt9(oracle),
            fmt9(eta_inf),
            fmt9(diff)
        );
    }

    if args.output.out.is_some() {
        let text = match args.output.format {
            FormatFlag::Csv => {
                let mut t = String::from("iteration,h_star,lambda,gamma\n");
                for rec in &result.trace.records {
                    let lambda = rec.aux.map_or_else(String::new, fmt9);
                    t.push_str(&format!(
                        "{},{},{},{}\n",
                        rec.iteration,
                        fmt9(rec.x),
                        lambda,
                        fmt9(rec.fx)
                    ));
                }
                t
            }
            FormatFlag::Json => {
                serde_json::to_string_pretty(&solve_json(&result, &cfg)).expect("serializes") + "\n"
            }
        };
        deliver(&text, &args.output, "solve", config_json(&cfg))?;
    }
    Ok(())
}

/// Shooting on the physical domain the converged transformation implies.
fn matched_oracle(result: &SolveResult, cfg: &SolverConfig) -> Result<(f64, f64), CliError> {
    let eta_inf = result.lambda * cfg.eta_inf_star;
    let mut shoot_cfg = ShootConfig::new(result.beta);
    shoot_cfg.eta_inf = eta_inf;
    let outcome = shoot_solve(&shoot_cfg).map_err(|e| CliError::Solver(format!("shooting oracle: {e}")))?;
    Ok((outcome.s, eta_inf))
}

fn run_sweep(args: SweepArgs) -> Result<(), CliError> {
    let betas = match (args.beta_range, args.beta_list) {
        (Some(range), None) => range.0,
        (None, Some(list)) if !list.is_empty() => list,
        _ => {
            return Err(CliError::Usage(
                "sweep needs --beta-range lo:hi:step or --beta-list b1,b2,...".into(),
            ))
        }
    };
    let cfg = build_config(betas[0], &args.solver, 0)?;

    let threads = std::env::var("ITM_THREADS")
        .ok()
        .map(|raw| {
            raw.parse::<usize>().unwrap_or_else(|_| {
                eprintln!("itm: ignoring unparseable ITM_THREADS={raw:?}");
                0
            })
        })
        .unwrap_or(0);

    let entries = if threads > 1 && betas.len() > 1 {
        // Contiguous chunks preserve the warm-start chain inside each chunk,
        // and the split depends only on the list length and thread count, so
        // a rerun with the same ITM_THREADS reproduces the output exactly.
        let chunk = betas.len().div_ceil(threads);
        let cfg_ref = &cfg;
        std::thread::scope(|scope| {
            let handles: Vec<_> = betas
                .chunks(chunk)
                .map(|part| scope.spawn(move || sweep(part, cfg_ref)))
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("sweep worker panicked"))
                .collect::<Vec<_>>()
        })
    } else {
        sweep(&betas, &cfg)
    };

    let mut failures = 0usize;
    let mut csv = String::from("beta,fpp0,h_star,lambda,iterations,gamma_final\n");
    let mut rows: Vec<serde_json::Value> = Vec::new();
    for entry in &entries {
        match &entry.outcome {
            Ok(res) => {
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    fmt9(entry.beta),
                    fmt9(res.fpp0),
                    fmt9(res.h_star),
                    fmt9(res.lambda),
                    res.iterations(),
                    fmt9(res.residuals.gamma_abs),
                ));
                rows.push(json!({
                    "beta": round9(entry.beta),
                    "fpp0": round9(res.fpp0),
                    "h_star": round9(res.h_star),
                    "lambda": round9(res.lambda),
                    "iterations": res.iterations(),
                    "gamma_final": round9(res.residuals.gamma_abs),
                }));
            }
            Err(err) => {
                failures += 1;
                eprintln!("itm: beta = {}: {err}", fmt9(entry.beta));
                rows.push(json!({
                    "beta": round9(entry.beta),
                    "error": format!("{err}"),
                }));
            }
        }
    }

    let text = match args.output.format {
        FormatFlag::Csv => csv,
        FormatFlag::Json => serde_json::to_string_pretty(&rows).expect("serializes") + "\n",
    };
    deliver(&text, &args.output, "sweep", config_json(&cfg))?;

    if failures > 0 {
        Err(CliError::Solver(format!(
            "{failures} of {} betas failed to converge",
            entries.len()
        )))
    } else {
        Ok(())
    }
}

fn run_boundary_study(args: BoundaryStudyArgs) -> Result<(), CliError> {
    let flags = SolverFlags {
        sigma: args.sigma,
        eta_inf: args.eta_inf[0],
        tol: args.tol,
        h0: args.h0,
        method: args.method,
        bracket: args.bracket,
        integrator: args.integrator,
        step: args.step,
    };
    let cfg = build_config(args.beta, &flags, 0)?;
    let results = boundary_study(args.beta, &args.eta_inf, &cfg).map_err(solver_error)?;

    let text = match args.output.format {
        FormatFlag::Csv => {
            let mut t = String::from("eta_inf_star,fpp0,h_star,lambda,iterations,gamma_final\n");
            for (eta, res) in &results {
                t.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    fmt9(*eta),
                    fmt9(res.fpp0),
                    fmt9(res.h_star),
                    fmt9(res.lambda),
                    res.iterations(),
                    fmt9(res.residuals.gamma_abs),
                ));
            }
            t
        }
        FormatFlag::Json => {
            let rows: Vec<serde_json::Value> = results
                .iter()
                .map(|(eta, res)| {
                    json!({
                        "eta_inf_star": round9(*eta),
                        "fpp0": round9(res.fpp0),
                        "h_star": round9(res.h_star),
                        "lambda": round9(res.lambda),
                        "iterations": res.iterations(),
                        "gamma_final": round9(res.residuals.gamma_abs),
                    })
                })
                .collect();
            serde_json::to_string_pretty(&rows).expect("serializes") + "\n"
        }
    };
    deliver(&text, &args.output, "boundary-study", config_json(&cfg))
}

fn run_oracle_check(args: OracleCheckArgs) -> Result<(), CliError> {
    let cfg = build_config(args.beta, &args.solver, 0)?;
    let result = solve(&cfg).map_err(solver_error)?;
    let (oracle, eta_inf) = matched_oracle(&result, &cfg)?;
    let diff = (oracle - result.fpp0).abs();

    let text = match args.output.format {
        FormatFlag::Csv => format!(
            "beta,eta_inf,itm_fpp0,shooting_fpp0,abs_diff\n{},{},{},{},{}\n",
            fmt9(args.beta),
            fmt9(eta_inf),
            fmt9(result.fpp0),
            fmt9(oracle),
            fmt9(diff),
        ),
        FormatFlag::Json => {
            serde_json::to_string_pretty(&json!({
                "beta": round9(args.beta),
                "eta_inf": round9(eta_inf),
                "itm_fpp0": round9(result.fpp0),
                "shooting_fpp0": round9(oracle),
                "abs_diff": round9(diff),
            }))
            .expect("serializes")
                + "\n"
        }
    };
    deliver(&text, &args.output, "oracle-check", config_json(&cfg))
}

fn run_profile(args: ProfileArgs) -> Result<(), CliError> {
    if args.samples == 0 {
        return Err(CliError::Usage("profile needs --samples >= 1".into()));
    }
    let cfg = build_config(args.beta, &args.solver, args.samples)?;
    let result = solve(&cfg).map_err(solver_error)?;
    let profile = result
        .profile
        .as_ref()
        .expect("solve attaches a profile when samples > 0");

    let text = match args.output.format {
        FormatFlag::Csv => {
            let mut t = String::from("eta,f,fp,fpp\n");
            for (eta, u) in &profile.nodes {
                t.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt9(*eta),
                    fmt9(u[0]),
                    fmt9(u[1]),
                    fmt9(u[2])
                ));
            }
            t
        }
        FormatFlag::Json => {
            let rows: Vec<serde_json::Value> = profile
                .nodes
                .iter()
                .map(|(eta, u)| {
                    json!({
                        "eta": round9(*eta),
                        "f": round9(u[0]),
                        "fp": round9(u[1]),
                        "fpp": round9(u[2]),
                    })
                })
                .collect();
            serde_json::to_string_pretty(&rows).expect("serializes") + "\n"
        }
    };
    deliver(&text, &args.output, "profile", config_json(&cfg))
}
