//! `disclose` — equilibria, welfare, and optimal/robust disclosure of public
//! information for the linear-quadratic Gaussian game with costly private
//! information.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use disclose_core::checks::{run_suite, Suite};
use disclose_core::mwd::{mwd, MwdBreakdown};
use disclose_core::optimal::{gross_optimal_precision, optimal_precision};
use disclose_core::oracles::{grid_robust_tau_y, GridSpec};
use disclose_core::robust::{classify_cost_free_monotonicity, robust_precision, RobustError};
use disclose_core::welfare::{solve_at, EquilibriumSolution};
use disclose_core::{
    applications, eta_lower, ApplicationPreset, PrecisionChoice, Region,
};

use config::{resolve, CliError, ModelArgs, PresetName};
use output::{float_cell, to_json};

#[derive(Parser)]
#[command(
    name = "disclose",
    version,
    about = "Equilibria, welfare decompositions, and optimal/robust public-information \
             disclosure for LQG games with costly information acquisition"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the acquisition stage at one public precision and print the
    /// welfare row.
    Solve {
        #[command(flatten)]
        model: ModelArgs,
        /// Public precision (finite).
        #[arg(long, value_name = "X")]
        tau_y: f64,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Sweep the public precision over a grid and emit one welfare row per
    /// point (CSV by default).
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        /// Grid as lo:hi:n or lo:hi:n:log.
        #[arg(long, value_parser = parse_grid)]
        grid: Option<GridSpec>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Optimal precision of public information (closed form when the cost
    /// has constant elasticity).
    Optimal {
        #[command(flatten)]
        model: ModelArgs,
        /// Optimize the gross welfare (information cost excluded).
        #[arg(long)]
        gross: bool,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Robust precision against the worst convex information cost.
    Robust {
        #[command(flatten)]
        model: ModelArgs,
        /// Cap on acquirable private precision: a number or "inf".
        #[arg(long, value_parser = parse_precision, default_value = "inf")]
        kappa: PrecisionChoice,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Classify the welfare weights: disclosure region and cost-free
    /// monotonicity.
    Classify {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Run an application preset end to end: thresholds, verdicts, and the
    /// built-in consistency report.
    App {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Run the verification battery and emit its JSON report. Exits 1 if any
    /// check fails.
    Verify {
        /// One of: moments, foc, mwd, optimal, robust, corollaries, all.
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

fn parse_precision(s: &str) -> Result<PrecisionChoice, String> {
    PrecisionChoice::from_str(s)
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    Suite::from_str(s)
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 && parts.len() != 4 {
        return Err(format!("expected lo:hi:n or lo:hi:n:log, got {s:?}"));
    }
    let lo: f64 = parts[0].parse().map_err(|_| format!("bad grid lo {:?}", parts[0]))?;
    let hi: f64 = parts[1].parse().map_err(|_| format!("bad grid hi {:?}", parts[1]))?;
    let n: usize = parts[2].parse().map_err(|_| format!("bad grid size {:?}", parts[2]))?;
    let log_spaced = match parts.get(3) {
        None => false,
        Some(&"log") => true,
        Some(&"lin") => false,
        Some(other) => return Err(format!("bad grid spacing {other:?}; use log or lin")),
    };
    GridSpec::new(lo, hi, n, log_spaced).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct ErrorPayload<'a> {
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

#[cfg(feature = "parallel")]
fn init_threads() {
    if let Ok(raw) = std::env::var("DISCLOSE_THREADS") {
        match raw.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => eprintln!("warning: ignoring DISCLOSE_THREADS={raw:?} (want a positive integer)"),
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn init_threads() {}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            let payload = ErrorPayload {
                error: ErrorBody {
                    kind: err.kind(),
                    message: err.to_string(),
                },
            };
            println!("{}", to_json(&payload));
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Solve { model, tau_y, out } => cmd_solve(&model, tau_y, &out),
        Command::Sweep {
            model,
            grid,
            format,
            out,
        } => cmd_sweep(&model, grid, format, &out),
        Command::Optimal { model, gross, out } => cmd_optimal(&model, gross, &out),
        Command::Robust { model, kappa, out } => cmd_robust(&model, kappa, &out),
        Command::Classify { model, out } => cmd_classify(&model, &out),
        Command::App { model, out } => cmd_app(&model, &out),
        Command::Verify { suite, seed, out } => cmd_verify(suite, seed, &out),
    }
}

fn cmd_solve(model: &ModelArgs, tau_y: f64, out: &Option<PathBuf>) -> Result<ExitCode, CliError> {
    if !tau_y.is_finite() || tau_y < 0.0 {
        return Err(CliError::Config(format!(
            "solve requires a finite tau_y >= 0, got {tau_y}"
        )));
    }
    let resolved = resolve(model)?;
    let solution = solve_at(
        &resolved.params,
        &resolved.welfare,
        &resolved.cost,
        PrecisionChoice::Finite(tau_y),
    )
    .map_err(|e| CliError::Config(e.to_string()))?;
    emit(out, &to_json(&solution))?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct SweepRow {
    #[serde(flatten)]
    solution: EquilibriumSolution,
    mwd: Option<MwdBreakdown>,
}

const SWEEP_HEADER: &str = "tau_y,tau_x,b_x,b_y,V,D,cost,W,W_gross,mwd,mwd0,mwd_star,mvd,rho";

fn cmd_sweep(
    model: &ModelArgs,
    grid: Option<GridSpec>,
    format: Format,
    out: &Option<PathBuf>,
) -> Result<ExitCode, CliError> {
    let resolved = resolve(model)?;
    let grid = grid.unwrap_or_else(GridSpec::default_tau);
    let values = grid.values();
    let rows: Vec<SweepRow> = disclose_core::exec::map_slice(&values, |&ty| {
        let solution = solve_at(
            &resolved.params,
            &resolved.welfare,
            &resolved.cost,
            PrecisionChoice::Finite(ty),
        )
        .expect("acquisition stage must solve on the grid");
        let breakdown = mwd(&resolved.params, &resolved.welfare, &resolved.cost, ty).ok();
        SweepRow {
            solution,
            mwd: breakdown,
        }
    });
    let content = match format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut text = String::from(SWEEP_HEADER);
            text.push('\n');
            for row in &rows {
                let s = &row.solution;
                let tau_y = s.tau_y.as_finite().expect("sweep grid is finite");
                let mut cells = vec![
                    float_cell(tau_y),
                    float_cell(s.tau_x),
                    float_cell(s.b_x),
                    float_cell(s.b_y),
                    float_cell(s.volatility),
                    float_cell(s.dispersion),
                    float_cell(s.cost),
                    float_cell(s.welfare),
                    float_cell(s.welfare_gross),
                ];
                match &row.mwd {
                    Some(b) => cells.extend([
                        float_cell(b.mwd),
                        float_cell(b.mwd0),
                        float_cell(b.mwd_star),
                        float_cell(b.mvd),
                        float_cell(b.rho),
                    ]),
                    // Corner rows leave the MWD columns empty.
                    None => cells.extend(std::iter::repeat_n(String::new(), 5)),
                }
                text.push_str(&cells.join(","));
                text.push('\n');
            }
            text
        }
    };
    emit(out, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_optimal(model: &ModelArgs, gross: bool, out: &Option<PathBuf>) -> Result<ExitCode, CliError> {
    let resolved = resolve(model)?;
    let verdict = if gross {
        gross_optimal_precision(&resolved.params, &resolved.welfare, &resolved.cost)
    } else {
        optimal_precision(&resolved.params, &resolved.welfare, &resolved.cost)
    };
    emit(out, &to_json(&verdict))?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct NonApplicableRobust {
    status: &'static str,
    warning: String,
    kappa: PrecisionChoice,
    grid_robust_tau_y: PrecisionChoice,
    grid_value: f64,
}

fn cmd_robust(
    model: &ModelArgs,
    kappa: PrecisionChoice,
    out: &Option<PathBuf>,
) -> Result<ExitCode, CliError> {
    let resolved = resolve(model)?;
    match robust_precision(&resolved.params, &resolved.welfare, kappa) {
        Ok(verdict) => {
            emit(out, &to_json(&verdict))?;
            Ok(ExitCode::SUCCESS)
        }
        Err(err @ RobustError::EtaZero) => {
            // Outside the analytic case split: answer from the grid oracle,
            // flagged as such.
            let opt = grid_robust_tau_y(
                &resolved.params,
                &resolved.welfare,
                kappa,
                &GridSpec::default_tau(),
            );
            let payload = NonApplicableRobust {
                status: "non-applicable",
                warning: err.to_string(),
                kappa,
                grid_robust_tau_y: opt.arg,
                grid_value: opt.value,
            };
            emit(out, &to_json(&payload))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[derive(Serialize)]
struct Classification {
    zeta: f64,
    eta: f64,
    alpha: f64,
    lambda: Option<f64>,
    region: Option<Region>,
    eta_lower_at_lambda: Option<f64>,
    eta_lower_limit: f64,
    cost_free_monotonicity: disclose_core::CostFreeMonotonicity,
}

fn cmd_classify(model: &ModelArgs, out: &Option<PathBuf>) -> Result<ExitCode, CliError> {
    let resolved = resolve(model)?;
    let lambda = resolved.cost.constant_elasticity();
    let payload = Classification {
        zeta: resolved.welfare.zeta,
        eta: resolved.welfare.eta,
        alpha: resolved.params.alpha(),
        lambda,
        region: lambda
            .map(|l| disclose_core::classify_region(&resolved.params, &resolved.welfare, l)),
        eta_lower_at_lambda: lambda.map(|l| eta_lower(&resolved.params, resolved.welfare.zeta, l)),
        eta_lower_limit: eta_lower(&resolved.params, resolved.welfare.zeta, f64::INFINITY),
        cost_free_monotonicity: classify_cost_free_monotonicity(
            &resolved.params,
            &resolved.welfare,
        ),
    };
    emit(out, &to_json(&payload))?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct AppReport {
    preset: applications::PresetKind,
    params: disclose_core::ModelParams,
    welfare: disclose_core::WelfareCoefficients,
    lambda: f64,
    c: f64,
    thresholds: serde_json::Value,
    optimal: disclose_core::DisclosureVerdict,
    gross_optimal: disclose_core::DisclosureVerdict,
    robust: disclose_core::RobustVerdict,
    corollaries: applications::CorollaryReport,
}

fn cmd_app(model: &ModelArgs, out: &Option<PathBuf>) -> Result<ExitCode, CliError> {
    let preset_name = model.preset.ok_or_else(|| {
        CliError::Usage("app requires --preset <cournot|beauty>".into())
    })?;
    let lambda = model.lambda.unwrap_or(1.0);
    let c = model.c.unwrap_or(1.0);
    let preset = match preset_name {
        PresetName::Cournot => {
            let delta = model
                .delta
                .ok_or_else(|| CliError::Usage("the cournot preset requires --delta".into()))?;
            ApplicationPreset::cournot(delta, lambda, model.tau_theta)
        }
        PresetName::Beauty => {
            let r = model
                .r
                .ok_or_else(|| CliError::Usage("the beauty preset requires --r".into()))?;
            ApplicationPreset::beauty(r, lambda, model.tau_theta)
        }
    }
    .map_err(|e| CliError::Config(e.to_string()))?;
    let cost = disclose_core::CostSpec::isoelastic(c, lambda)
        .map_err(|e| CliError::Config(e.to_string()))?;

    let thresholds = match preset.kind {
        applications::PresetKind::Cournot { delta } => {
            let th = applications::cournot_thresholds(delta, lambda, c, model.tau_theta)
                .map_err(|e| CliError::Config(e.to_string()))?;
            serde_json::json!({
                "delta_star": extended(th.delta_star),
                "delta_double_star": extended(th.delta_double_star),
            })
        }
        applications::PresetKind::Beauty { .. } => {
            let th = applications::beauty_thresholds(lambda);
            serde_json::json!({ "r_star": th.r_star, "r_gross": th.r_gross })
        }
    };
    let robust = robust_precision(&preset.params, &preset.welfare, PrecisionChoice::Infinite)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let report = AppReport {
        preset: preset.kind,
        params: preset.params,
        welfare: preset.welfare,
        lambda,
        c,
        thresholds,
        optimal: optimal_precision(&preset.params, &preset.welfare, &cost),
        gross_optimal: gross_optimal_precision(&preset.params, &preset.welfare, &cost),
        robust,
        corollaries: applications::corollary_checks(&preset, c)
            .map_err(|e| CliError::Config(e.to_string()))?,
    };
    emit(out, &to_json(&report))?;
    Ok(ExitCode::SUCCESS)
}

fn extended(x: f64) -> serde_json::Value {
    if x.is_finite() {
        serde_json::json!(x)
    } else {
        serde_json::json!("inf")
    }
}

fn cmd_verify(suite: Suite, seed: u64, out: &Option<PathBuf>) -> Result<ExitCode, CliError> {
    let report = run_suite(suite, seed);
    emit(out, &to_json(&report))?;
    Ok(if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
