//! The built-in verification battery: every analytic formula in the library
//! is cross-checked against an independent oracle (Monte Carlo moments,
//! finite differences, brute-force grid optimization).
//!
//! The same batteries back the acceptance test suite and the CLI `verify`
//! subcommand. Given a seed the whole battery is deterministic, including
//! under parallel execution.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::applications::{
    beauty_thresholds, corollary_checks, cournot_thresholds, ApplicationPreset,
};
use crate::equilibrium::{
    crowding_out_slope, marginal_benefit, phi_inverse, solve_private_precision,
    solve_private_precision_bisect,
};
use crate::exec::map_indexed;
use crate::model::{CostSpec, ModelParams, PrecisionChoice, WelfareCoefficients};
use crate::mwd::{eta_lower, mwd};
use crate::optimal::{classify_region, optimal_precision, tau_bar, Region};
use crate::oracles::{
    fd_social_value, grid_min_w0_over_tau_x, grid_robust_tau_y, mc_marginal_benefit, mc_moments,
    best_response_residual, grid_optimal_tau_y, GridSpec, OracleConfig,
};
use crate::robust::{
    classify_cost_free_monotonicity, robust_precision, worst_case_welfare, CostFreeMonotonicity,
};
use crate::welfare::{
    cost_dispersion_identity_residual, dispersion, volatility, welfare_along_path,
};

pub const MOMENT_SETS: usize = 20;
pub const MOMENT_AGENTS: usize = 100_000;
pub const MOMENT_DRAWS: usize = 200;
pub const FOC_DRAWS: usize = 200;
pub const MWD_DRAWS: usize = 200;
pub const OPTIMAL_PER_REGION: usize = 100;
pub const WORST_CASE_DRAWS: usize = 200;
pub const TABULATED_COSTS: usize = 20;
pub const ROBUST_PER_REGION: usize = 40;
pub const POSITIVE_ETA_DRAWS: usize = 200;

const LAMBDAS: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 5.0];

/// One named comparison between an analytic value and its oracle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub analytic: f64,
    pub oracle: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckResult {
    /// Aggregate check: the observed discrepancy must not exceed the bound.
    fn gap(name: &str, observed: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            analytic: 0.0,
            oracle: observed,
            tolerance,
            passed: observed <= tolerance,
        }
    }

    /// Count check: `got` out of `want` trials succeeded; all must.
    fn count(name: &str, want: usize, got: usize) -> Self {
        Self {
            name: name.to_string(),
            analytic: want as f64,
            oracle: got as f64,
            tolerance: 0.0,
            passed: want == got,
        }
    }

    /// Exact value check.
    fn exact(name: &str, analytic: f64, oracle: f64) -> Self {
        Self {
            name: name.to_string(),
            analytic,
            oracle,
            tolerance: 0.0,
            passed: analytic == oracle,
        }
    }
}

/// Verification report emitted by the `verify` command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Moments,
    Foc,
    Mwd,
    Optimal,
    Robust,
    Corollaries,
    All,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Moments => "moments",
            Suite::Foc => "foc",
            Suite::Mwd => "mwd",
            Suite::Optimal => "optimal",
            Suite::Robust => "robust",
            Suite::Corollaries => "corollaries",
            Suite::All => "all",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "moments" => Ok(Suite::Moments),
            "foc" => Ok(Suite::Foc),
            "mwd" => Ok(Suite::Mwd),
            "optimal" => Ok(Suite::Optimal),
            "robust" => Ok(Suite::Robust),
            "corollaries" => Ok(Suite::Corollaries),
            "all" => Ok(Suite::All),
            other => Err(format!(
                "unknown suite {other:?}; expected one of moments, foc, mwd, optimal, robust, \
                 corollaries, all"
            )),
        }
    }
}

/// Runs one suite (or all of them) and collects the report.
pub fn run_suite(suite: Suite, seed: u64) -> VerificationReport {
    let mut checks = Vec::new();
    let run_moments = matches!(suite, Suite::Moments | Suite::All);
    let run_foc = matches!(suite, Suite::Foc | Suite::All);
    let run_mwd = matches!(suite, Suite::Mwd | Suite::All);
    let run_optimal = matches!(suite, Suite::Optimal | Suite::All);
    let run_robust = matches!(suite, Suite::Robust | Suite::All);
    let run_corollaries = matches!(suite, Suite::Corollaries | Suite::All);
    if run_moments {
        checks.extend(moment_battery(seed));
    }
    if run_foc {
        checks.extend(foc_battery(seed));
    }
    if run_mwd {
        checks.extend(mwd_battery(seed));
    }
    if run_optimal {
        checks.extend(optimal_battery(seed));
    }
    if run_robust {
        checks.extend(robust_battery(seed));
    }
    if run_corollaries {
        checks.extend(corollary_battery(seed));
    }
    let passed = checks.iter().all(|c| c.passed);
    VerificationReport {
        suite: suite.name().to_string(),
        seed,
        checks,
        passed,
    }
}

/// Names of every check the full battery produces, in emission order.
pub fn all_check_names() -> Vec<&'static str> {
    vec![
        "moments/var_within_3se",
        "moments/cov_within_3se",
        "moments/identity_within_3se",
        "foc/max_relative_residual",
        "foc/linear_closed_form_gap",
        "foc/inverse_round_trip_gap",
        "foc/best_response_fixed_point",
        "foc/marginal_benefit_vs_simulation",
        "foc/crowding_out_slope_vs_fd",
        "mwd/weighted_average_identity_gap",
        "mwd/fd_ratio_gap",
        "mwd/cost_dispersion_identity",
        "mwd/eta_lower_sign_guarantee",
        "optimal/region_I_grid_matches",
        "optimal/region_II_grid_matches",
        "optimal/region_III_grid_matches",
        "optimal/region_IV_grid_matches",
        "optimal/region_IV_argmax_grid_distance",
        "optimal/stationarity_mwd_at_threshold",
        "robust/worst_case_vs_grid_gap",
        "robust/tabulated_welfare_above_floor",
        "robust/increasing_regions_monotone",
        "robust/decreasing_region_monotone",
        "robust/constant_region_flat",
        "robust/peak_argmax_grid_distance",
        "robust/positive_eta_full_disclosure",
        "robust/cost_dependent_example_both_signs",
        "apps/cournot_delta_star_at_lambda_2",
        "apps/beauty_r_star_at_lambda_2",
        "apps/beauty_r_gross_at_lambda_2",
        "apps/cournot_mwd_flip_across_delta_star",
        "apps/beauty_mwd_flip_across_r_star",
        "apps/beauty_gross_mwd_flip_across_r_gross",
        "apps/cournot_robust_infinite_on_delta_grid",
        "apps/divergence_optimal_none_robust_full",
        "apps/preset_corollary_reports",
    ]
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

fn battery_seed(seed: u64, tag: u64) -> u64 {
    splitmix64(seed ^ splitmix64(tag))
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn sample_params(rng: &mut ChaCha8Rng) -> ModelParams {
    let alpha = rng.random_range(-2.0..0.8);
    let beta = rng.random_range(0.2..2.0);
    let tau_theta = rng.random_range(0.2..3.0);
    ModelParams::new(alpha, beta, tau_theta, 0.0).expect("sampled ranges are valid")
}

// ---------------------------------------------------------------------------
// Moments: finite-agent Monte Carlo against the closed-form moments.
// ---------------------------------------------------------------------------

fn moment_battery(seed: u64) -> Vec<CheckResult> {
    let base = battery_seed(seed, 1);
    let gaps: Vec<[f64; 3]> = map_indexed(MOMENT_SETS, |i| {
        let mut rng = stream_rng(base, i as u64);
        let p = sample_params(&mut rng);
        let tau_x = rng.random_range(0.05..4.0);
        let tau_y = rng.random_range(0.05..4.0);
        let cfg = OracleConfig::new(
            MOMENT_AGENTS,
            MOMENT_DRAWS,
            battery_seed(base, 2000 + i as u64),
            GridSpec::default_tau(),
            1e-5,
        )
        .expect("valid oracle config");
        let m = mc_moments(&p, tau_x, tau_y, &cfg);
        let v = volatility(&p, tau_x, tau_y);
        let d = dispersion(&p, tau_x, tau_y);
        let var_gap = (m.var_i - (v + d)).abs() / m.se_var_i;
        let cov_gap = (m.cov_ij - v).abs() / m.se_cov_ij;
        let identity = m.var_i - p.alpha() * m.cov_ij - p.beta() * m.cov_i_theta;
        let identity_se = m.se_var_i
            + p.alpha().abs() * m.se_cov_ij
            + p.beta() * m.se_cov_i_theta;
        [var_gap, cov_gap, identity.abs() / identity_se]
    });
    let max = |k: usize| gaps.iter().map(|g| g[k]).fold(0.0_f64, f64::max);
    vec![
        CheckResult::gap("moments/var_within_3se", max(0), 3.0),
        CheckResult::gap("moments/cov_within_3se", max(1), 3.0),
        CheckResult::gap("moments/identity_within_3se", max(2), 3.0),
    ]
}

// ---------------------------------------------------------------------------
// Acquisition fixed point.
// ---------------------------------------------------------------------------

/// Draws an interior acquisition problem: parameters, an isoelastic cost, and
/// a public precision with `phi(tau_y) > floor`.
fn sample_interior(
    rng: &mut ChaCha8Rng,
    lambda: f64,
    floor: f64,
) -> (ModelParams, CostSpec, f64, f64) {
    for _ in 0..400 {
        let p = sample_params(rng);
        let c = rng.random_range(0.02..2.0);
        let cost = CostSpec::isoelastic(c, lambda).expect("valid cost");
        let tau_y = rng.random_range(0.0..8.0);
        let phi = solve_private_precision(&p, &cost, tau_y).expect("solvable");
        if phi > floor {
            return (p, cost, tau_y, phi);
        }
    }
    unreachable!("interior draws must exist in the sampled ranges")
}

fn foc_battery(seed: u64) -> Vec<CheckResult> {
    let base = battery_seed(seed, 2);
    let rows: Vec<[f64; 4]> = map_indexed(FOC_DRAWS, |i| {
        let mut rng = stream_rng(base, i as u64);
        let lambda = LAMBDAS[i % LAMBDAS.len()];
        let (p, cost, tau_y, phi) = sample_interior(&mut rng, lambda, 1e-8);
        let marginal = cost.eval(phi).marginal;
        let residual = (marginal_benefit(&p, phi, tau_y) - marginal).abs() / marginal;
        let linear_gap = if lambda == 0.0 {
            let iterated = solve_private_precision_bisect(&p, &cost, tau_y).expect("solvable");
            (phi - iterated).abs() / (1.0 + phi)
        } else {
            0.0
        };
        let round_trip = (phi_inverse(&p, &cost, phi) - tau_y).abs() / (1.0 + tau_y);
        let br = best_response_residual(&p, phi, tau_y);
        [residual, linear_gap, round_trip, br.0.max(br.1)]
    });
    let max = |k: usize| rows.iter().map(|r| r[k]).fold(0.0_f64, f64::max);

    // Marginal benefit against the simulated payoff derivative.
    let mb_base = battery_seed(seed, 21);
    let mb_points = [(0.0, 1.0, 1.0, 1.0, 1.0), (0.4, 1.5, 0.5, 2.0, 0.3), (-1.0, 0.8, 1.2, 0.7, 2.0)];
    let mb_gap = mb_points
        .iter()
        .enumerate()
        .map(|(i, &(alpha, beta, t0, tx, ty))| {
            let p = ModelParams::new(alpha, beta, t0, 0.0).expect("valid");
            let closed = marginal_benefit(&p, tx, ty);
            let sim = mc_marginal_benefit(&p, tx, ty, 300_000, battery_seed(mb_base, i as u64), 1e-3 * tx);
            (sim - closed).abs() / closed
        })
        .fold(0.0_f64, f64::max);

    // Crowding-out slope against a central difference of the fixed point.
    let slope_base = battery_seed(seed, 22);
    let slope_gaps: Vec<f64> = map_indexed(50, |i| {
        let mut rng = stream_rng(slope_base, i as u64);
        let lambda = LAMBDAS[1 + i % (LAMBDAS.len() - 1)]; // strictly convex draws
        let (p, cost, tau_y, _) = sample_interior(&mut rng, lambda, 1e-3);
        let analytic = crowding_out_slope(&p, &cost, tau_y).expect("interior");
        let h = 1e-5 * (1.0 + tau_y);
        let up = solve_private_precision(&p, &cost, tau_y + h).expect("solvable");
        let dn = solve_private_precision(&p, &cost, (tau_y - h).max(0.0)).expect("solvable");
        if dn <= 0.0 {
            return 0.0;
        }
        let denom = if tau_y - h >= 0.0 { 2.0 * h } else { h + tau_y };
        let fd = (up - dn) / denom;
        (analytic - fd).abs() / (1.0 + analytic.abs())
    });
    let slope_gap = slope_gaps.into_iter().fold(0.0_f64, f64::max);

    vec![
        CheckResult::gap("foc/max_relative_residual", max(0), 1e-10),
        CheckResult::gap("foc/linear_closed_form_gap", max(1), 1e-10),
        CheckResult::gap("foc/inverse_round_trip_gap", max(2), 1e-9),
        CheckResult::gap("foc/best_response_fixed_point", max(3), 1e-10),
        CheckResult::gap("foc/marginal_benefit_vs_simulation", mb_gap, 2e-2),
        CheckResult::gap("foc/crowding_out_slope_vs_fd", slope_gap, 1e-5),
    ]
}

// ---------------------------------------------------------------------------
// MWD identities.
// ---------------------------------------------------------------------------

fn sample_weights(rng: &mut ChaCha8Rng) -> WelfareCoefficients {
    WelfareCoefficients::direct(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0))
}

fn mwd_battery(seed: u64) -> Vec<CheckResult> {
    let base = battery_seed(seed, 3);
    let rows: Vec<[f64; 3]> = map_indexed(MWD_DRAWS, |i| {
        let mut rng = stream_rng(base, i as u64);
        let lambda = LAMBDAS[i % LAMBDAS.len()];
        // Keep a margin so the central stencil stays interior, and skip
        // draws whose fixed-precision MVD is so large that the identity
        // cannot be resolved at the stated absolute tolerance in f64.
        let (p, cost, tau_y, wc, b) = loop {
            let (p, cost, tau_y, _) = sample_interior(&mut rng, lambda, 1e-3);
            let wc = sample_weights(&mut rng);
            let b = mwd(&p, &wc, &cost, tau_y).expect("interior");
            if b.mvd_star <= 1e3 {
                break (p, cost, tau_y, wc, b);
            }
        };
        let cfg = OracleConfig::default();
        let dw = fd_social_value(&p, &wc, &cost, tau_y, &cfg).expect("solvable");
        // Dispersion derivative on the same stencil fd_social_value uses:
        // central when the left point is admissible, forward otherwise.
        let h = cfg.fd_step * (1.0 + tau_y);
        let d_at = |t: f64| {
            let phi = solve_private_precision(&p, &cost, t).expect("solvable");
            dispersion(&p, phi, t)
        };
        let dd = if tau_y - h >= 0.0 {
            (d_at(tau_y + h) - d_at(tau_y - h)) / (2.0 * h)
        } else {
            (d_at(tau_y + h) - d_at(tau_y)) / h
        };
        let ratio = dw.value / dd.abs();
        let fd_gap = (ratio - b.mwd).abs() / (1.0 + b.mwd.abs());
        let cd = cost_dispersion_identity_residual(&p, &cost, tau_y).expect("isoelastic")
            / dispersion(
                &p,
                solve_private_precision(&p, &cost, tau_y).expect("solvable"),
                tau_y,
            )
            .max(1.0);
        [b.weight_check, fd_gap, cd]
    });
    let max = |k: usize| rows.iter().map(|r| r[k]).fold(0.0_f64, f64::max);

    // Sign guarantees just off the threshold.
    let sign_base = battery_seed(seed, 31);
    let sign_ok: Vec<bool> = map_indexed(100, |i| {
        let mut rng = stream_rng(sign_base, i as u64);
        let lambda = LAMBDAS[i % LAMBDAS.len()];
        let zeta = rng.random_range(-3.0..3.0);
        let (p, cost, tau_y, _) = sample_interior(&mut rng, lambda, 1e-6);
        let lower = eta_lower(&p, zeta, lambda);
        let above = WelfareCoefficients::direct(zeta, lower.max(0.0) + 0.01);
        let below = WelfareCoefficients::direct(zeta, lower.min(0.0) - 0.01);
        let pos = mwd(&p, &above, &cost, tau_y).expect("interior").mwd > 0.0;
        let neg = mwd(&p, &below, &cost, tau_y).expect("interior").mwd < 0.0;
        pos && neg
    });
    let sign_count = sign_ok.iter().filter(|ok| **ok).count();

    vec![
        CheckResult::gap("mwd/weighted_average_identity_gap", max(0), 1e-10),
        CheckResult::gap("mwd/fd_ratio_gap", max(1), 1e-5),
        CheckResult::gap("mwd/cost_dispersion_identity", max(2), 1e-10),
        CheckResult::count("mwd/eta_lower_sign_guarantee", 100, sign_count),
    ]
}

// ---------------------------------------------------------------------------
// Optimal disclosure against grid search.
// ---------------------------------------------------------------------------

struct RegionDraw {
    p: ModelParams,
    wc: WelfareCoefficients,
    cost: CostSpec,
}

fn sample_region_draw(rng: &mut ChaCha8Rng, region: Region, grid: &GridSpec) -> RegionDraw {
    for _ in 0..4000 {
        let p = sample_params(rng);
        let lambda = LAMBDAS[rng.random_range(0..LAMBDAS.len())];
        let c = rng.random_range(0.02..2.0);
        let cost = CostSpec::isoelastic(c, lambda).expect("valid cost");
        let zeta;
        let eta;
        match region {
            Region::FullDisclosure => {
                zeta = rng.random_range(-2.0..3.0);
                eta = eta_lower(&p, zeta, lambda).max(0.0) + rng.random_range(0.05..1.5);
            }
            Region::CornerCompare => {
                zeta = 1.0 / (1.0 + lambda) + rng.random_range(0.1..2.5);
                let lower = eta_lower(&p, zeta, lambda);
                if lower <= 0.0 {
                    continue;
                }
                eta = lower * rng.random_range(0.1..0.9);
            }
            Region::NoDisclosure => {
                zeta = rng.random_range(-2.0..3.0);
                eta = eta_lower(&p, zeta, lambda).min(0.0) - rng.random_range(0.05..1.5);
            }
            Region::Interior => {
                zeta = 1.0 / (1.0 + lambda) - rng.random_range(0.1..2.5);
                let lower = eta_lower(&p, zeta, lambda);
                if lower >= 0.0 {
                    continue;
                }
                eta = lower * rng.random_range(0.1..0.9);
            }
            Region::Boundary => unreachable!("boundary draws are not sampled"),
        }
        let wc = WelfareCoefficients::direct(zeta, eta);
        if classify_region(&p, &wc, lambda) != region {
            continue;
        }
        match region {
            Region::Interior => {
                // The grid must be able to resolve the peak to one step.
                let bars = match tau_bar(&p, &wc, &cost) {
                    Ok(b) => b,
                    Err(_) => continue,
                };
                if !(bars.tau_y > 4.0 * grid.lo && bars.tau_y < grid.hi / 4.0) {
                    continue;
                }
            }
            Region::CornerCompare => {
                // Skip numerically exact corner ties.
                let w0 = welfare_along_path(&p, &wc, &cost, 0.0).expect("solvable");
                let w_inf = crate::welfare::welfare_at_full_disclosure(&p, &wc);
                if (w0 - w_inf).abs() <= 1e-9 * (1.0 + w0.abs()) {
                    continue;
                }
            }
            _ => {}
        }
        return RegionDraw { p, wc, cost };
    }
    unreachable!("region draws must exist in the sampled ranges")
}

fn grid_index_distance(candidates: &[f64], argmax_index: usize, target: f64) -> usize {
    let nearest = candidates
        .iter()
        .enumerate()
        .min_by(|a, b| {
            (a.1 - target)
                .abs()
                .partial_cmp(&(b.1 - target).abs())
                .expect("finite")
        })
        .map(|(i, _)| i)
        .expect("nonempty");
    argmax_index.abs_diff(nearest)
}

fn optimal_battery(seed: u64) -> Vec<CheckResult> {
    let base = battery_seed(seed, 4);
    let grid = GridSpec::default_tau();
    let regions = [
        Region::FullDisclosure,
        Region::CornerCompare,
        Region::NoDisclosure,
        Region::Interior,
    ];
    let mut checks = Vec::new();
    let mut iv_distance = 0usize;
    let mut iv_mwd = 0.0_f64;
    for (r_idx, region) in regions.iter().enumerate() {
        let outcomes: Vec<(bool, usize, f64)> = map_indexed(OPTIMAL_PER_REGION, |i| {
            let mut rng = stream_rng(base, (r_idx * OPTIMAL_PER_REGION + i) as u64);
            let draw = sample_region_draw(&mut rng, *region, &grid);
            let verdict = optimal_precision(&draw.p, &draw.wc, &draw.cost);
            let opt = grid_optimal_tau_y(&draw.p, &draw.wc, &draw.cost, &grid);
            let mut candidates = vec![0.0];
            candidates.extend(grid.values());
            match (*region, verdict.optimal_tau_y) {
                (Region::Interior, PrecisionChoice::Finite(bar)) => {
                    let dist = match opt.index {
                        Some(idx) => grid_index_distance(&candidates, idx, bar),
                        None => usize::MAX,
                    };
                    // Interior stationarity of the sign object, when interior.
                    let m = match draw.cost.constant_elasticity() {
                        Some(l) if l > 0.0 && bar > 0.0 => {
                            mwd(&draw.p, &draw.wc, &draw.cost, bar)
                                .map(|b| b.mwd.abs())
                                .unwrap_or(f64::INFINITY)
                        }
                        _ => 0.0,
                    };
                    (dist <= 1, dist, m)
                }
                (_, got) => {
                    let matches = match got {
                        PrecisionChoice::Infinite => opt.arg == PrecisionChoice::Infinite,
                        PrecisionChoice::Finite(x) if x == 0.0 => {
                            opt.arg == PrecisionChoice::Finite(0.0)
                        }
                        PrecisionChoice::Finite(_) => false,
                    };
                    (matches, 0, 0.0)
                }
            }
        });
        let matched = outcomes.iter().filter(|o| o.0).count();
        let name = match region {
            Region::FullDisclosure => "optimal/region_I_grid_matches",
            Region::CornerCompare => "optimal/region_II_grid_matches",
            Region::NoDisclosure => "optimal/region_III_grid_matches",
            Region::Interior => "optimal/region_IV_grid_matches",
            Region::Boundary => unreachable!(),
        };
        checks.push(CheckResult::count(name, OPTIMAL_PER_REGION, matched));
        if *region == Region::Interior {
            iv_distance = outcomes.iter().map(|o| o.1).max().unwrap_or(0);
            iv_mwd = outcomes.iter().map(|o| o.2).fold(0.0, f64::max);
        }
    }
    checks.push(CheckResult::gap(
        "optimal/region_IV_argmax_grid_distance",
        iv_distance as f64,
        1.0,
    ));
    checks.push(CheckResult::gap(
        "optimal/stationarity_mwd_at_threshold",
        iv_mwd,
        1e-8,
    ));
    checks
}

// ---------------------------------------------------------------------------
// Worst case and robust disclosure.
// ---------------------------------------------------------------------------

fn worst_case_gap_battery(seed: u64) -> CheckResult {
    let base = battery_seed(seed, 5);
    let kappas = [
        PrecisionChoice::Finite(0.3),
        PrecisionChoice::Finite(1.0),
        PrecisionChoice::Finite(5.0),
        PrecisionChoice::Finite(20.0),
        PrecisionChoice::Infinite,
    ];
    let gaps: Vec<f64> = map_indexed(WORST_CASE_DRAWS, |i| {
        let mut rng = stream_rng(base, i as u64);
        let p = sample_params(&mut rng);
        let wc = sample_weights(&mut rng);
        let tau_y = rng.random_range(0.0..10.0);
        let kappa = kappas[i % kappas.len()];
        let analytic = worst_case_welfare(&p, &wc, tau_y, kappa);
        let grid = grid_min_w0_over_tau_x(&p, &wc, tau_y, kappa, 10_000);
        (analytic.value - grid.value).abs()
    });
    CheckResult::gap(
        "robust/worst_case_vs_grid_gap",
        gaps.into_iter().fold(0.0, f64::max),
        1e-8,
    )
}

/// Random convex piecewise-linear marginal cost.
fn sample_tabulated(rng: &mut ChaCha8Rng) -> CostSpec {
    let knots = rng.random_range(3..8usize);
    let mut tau = 0.0;
    let mut marginal = rng.random_range(0.02..0.5);
    let mut points = vec![(0.0, marginal)];
    for _ in 1..knots {
        tau += rng.random_range(0.2..2.0);
        marginal += rng.random_range(0.0..0.5);
        points.push((tau, marginal));
    }
    CostSpec::tabulated(points).expect("constructed convex")
}

fn tabulated_floor_battery(seed: u64) -> CheckResult {
    let base = battery_seed(seed, 6);
    let margins: Vec<f64> = map_indexed(TABULATED_COSTS, |i| {
        let mut rng = stream_rng(base, i as u64);
        let p = sample_params(&mut rng);
        let wc = sample_weights(&mut rng);
        let cost = sample_tabulated(&mut rng);
        let mut worst = f64::INFINITY;
        for k in 0..25 {
            let tau_y = 0.4 * k as f64;
            let phi = solve_private_precision(&p, &cost, tau_y).expect("solvable");
            let w = crate::welfare::welfare(&p, &wc, &cost, phi, tau_y);
            let floor = worst_case_welfare(&p, &wc, tau_y, PrecisionChoice::Infinite).value;
            worst = worst.min(w - floor);
        }
        worst
    });
    let violation = margins
        .into_iter()
        .map(|m| (-m).max(0.0))
        .fold(0.0, f64::max);
    CheckResult::gap("robust/tabulated_welfare_above_floor", violation, 1e-10)
}

#[derive(Clone, Copy)]
enum RobustRegion {
    IncreasingStrong, // eta > 0, eta >= 2(1-a)(zeta-1)/3
    IncreasingWeak,   // 0 < eta < 2(1-a)(zeta-1)/3
    DecreasingLow,    // eta < 0, eta <= 2(1-a)(zeta-1)/3
    PeakedConstant,   // 2(1-a)(zeta-1)/3 < eta <= (1-a)(zeta-1)/2 < 0
    PeakedIncreasing, // (1-a)(zeta-1)/2 < eta < 0
}

fn sample_robust_draw(rng: &mut ChaCha8Rng, region: RobustRegion) -> (ModelParams, WelfareCoefficients) {
    loop {
        let p = sample_params(rng);
        let oma = p.one_minus_alpha();
        let (zeta, eta) = match region {
            RobustRegion::IncreasingStrong => {
                let zeta = rng.random_range(-2.0..3.0);
                let bound = (2.0 * oma * (zeta - 1.0) / 3.0).max(0.0);
                (zeta, bound + rng.random_range(0.05..1.5))
            }
            RobustRegion::IncreasingWeak => {
                let zeta = 1.0 + rng.random_range(0.3..2.0);
                let bound = 2.0 * oma * (zeta - 1.0) / 3.0;
                (zeta, bound * rng.random_range(0.1..0.9))
            }
            RobustRegion::DecreasingLow => {
                let zeta = rng.random_range(-2.0..3.0);
                let bound = (2.0 * oma * (zeta - 1.0) / 3.0).min(0.0);
                (zeta, bound - rng.random_range(0.05..1.5))
            }
            RobustRegion::PeakedConstant => {
                let zeta = rng.random_range(-2.0..0.9);
                let t = oma * (zeta - 1.0);
                (zeta, t * rng.random_range(0.52..0.65))
            }
            RobustRegion::PeakedIncreasing => {
                let zeta = rng.random_range(-2.0..0.9);
                let t = oma * (zeta - 1.0);
                (zeta, t * rng.random_range(0.05..0.45))
            }
        };
        if eta == 0.0 {
            continue;
        }
        return (p, WelfareCoefficients::direct(zeta, eta));
    }
}

/// Checks strict monotonicity of a value sequence up to a relative slack.
fn monotone(values: &[f64], increasing: bool) -> bool {
    let scale = values.iter().fold(0.0_f64, |a, v| a.max(v.abs())).max(1e-300);
    let slack = 1e-12 * scale;
    let mut ok = true;
    for w in values.windows(2) {
        if increasing {
            ok &= w[1] >= w[0] - slack;
        } else {
            ok &= w[1] <= w[0] + slack;
        }
    }
    let total = values[values.len() - 1] - values[0];
    ok && if increasing { total > 0.0 } else { total < 0.0 }
}

fn robust_battery(seed: u64) -> Vec<CheckResult> {
    let base = battery_seed(seed, 7);
    let mut checks = vec![worst_case_gap_battery(seed), tabulated_floor_battery(seed)];

    let kappas = [0.4, 1.0, 5.0];
    // Increasing regions (finite and unbounded caps).
    let inc_regions = [RobustRegion::IncreasingStrong, RobustRegion::IncreasingWeak, RobustRegion::PeakedIncreasing];
    let inc_ok: Vec<bool> = map_indexed(ROBUST_PER_REGION * inc_regions.len(), |i| {
        let mut rng = stream_rng(base, i as u64);
        let region = inc_regions[i / ROBUST_PER_REGION];
        let (p, wc) = sample_robust_draw(&mut rng, region);
        let kappa = match region {
            // The peaked region increases only at the unbounded cap.
            RobustRegion::PeakedIncreasing => PrecisionChoice::Infinite,
            _ => {
                if i % 4 == 3 {
                    PrecisionChoice::Infinite
                } else {
                    PrecisionChoice::Finite(kappas[i % kappas.len()])
                }
            }
        };
        let mut candidates = vec![0.0];
        candidates.extend(GridSpec::default_tau().values());
        let values: Vec<f64> = candidates
            .iter()
            .map(|&ty| worst_case_welfare(&p, &wc, ty, kappa).value)
            .collect();
        let verdict = robust_precision(&p, &wc, kappa).expect("eta != 0");
        monotone(&values, true) && verdict.robust_tau_y == PrecisionChoice::Infinite
    });

    // Strictly decreasing region at finite caps.
    let dec_ok: Vec<bool> = map_indexed(ROBUST_PER_REGION, |i| {
        let mut rng = stream_rng(battery_seed(base, 100), i as u64);
        let (p, wc) = sample_robust_draw(&mut rng, RobustRegion::DecreasingLow);
        let kappa = PrecisionChoice::Finite(kappas[i % kappas.len()]);
        let mut candidates = vec![0.0];
        candidates.extend(GridSpec::default_tau().values());
        let values: Vec<f64> = candidates
            .iter()
            .map(|&ty| worst_case_welfare(&p, &wc, ty, kappa).value)
            .collect();
        let verdict = robust_precision(&p, &wc, kappa).expect("eta != 0");
        monotone(&values, false) && verdict.robust_tau_y == PrecisionChoice::Finite(0.0)
    });

    // Constant at the unbounded cap: the decreasing region and the peaked
    // subcase with eta below half the linear bound.
    let flat_ok: Vec<bool> = map_indexed(ROBUST_PER_REGION, |i| {
        let mut rng = stream_rng(battery_seed(base, 200), i as u64);
        let region = if i % 2 == 0 {
            RobustRegion::DecreasingLow
        } else {
            RobustRegion::PeakedConstant
        };
        let (p, wc) = sample_robust_draw(&mut rng, region);
        let limit = crate::robust::w0_unbounded_acquisition_limit(&p, &wc);
        let scale = limit.abs().max(1.0);
        let flat = (0..50).all(|k| {
            let ty = 0.5 * k as f64;
            let f = worst_case_welfare(&p, &wc, ty, PrecisionChoice::Infinite).value;
            (f - limit).abs() <= 1e-9 * scale
        });
        let verdict = robust_precision(&p, &wc, PrecisionChoice::Infinite).expect("eta != 0");
        flat && verdict.f_behavior == crate::robust::FBehavior::Constant
    });

    // Single peak location at finite caps in the peaked region.
    let peak_distances: Vec<usize> = map_indexed(ROBUST_PER_REGION, |i| {
        let mut rng = stream_rng(battery_seed(base, 300), i as u64);
        let region = if i % 2 == 0 {
            RobustRegion::PeakedConstant
        } else {
            RobustRegion::PeakedIncreasing
        };
        let (p, wc) = sample_robust_draw(&mut rng, region);
        let kappa = kappas[i % kappas.len()];
        let verdict = robust_precision(&p, &wc, PrecisionChoice::Finite(kappa)).expect("eta != 0");
        let target = verdict
            .robust_tau_y
            .as_finite()
            .expect("finite-cap verdict is finite");
        let hi = 1e4_f64.max(4.0 * target.max(1.0));
        let grid = GridSpec::new(1e-4, hi, 400, true).expect("valid grid");
        let opt = grid_robust_tau_y(&p, &wc, PrecisionChoice::Finite(kappa), &grid);
        let mut candidates = vec![0.0];
        candidates.extend(grid.values());
        match opt.index {
            Some(idx) => grid_index_distance(&candidates, idx, target),
            None => usize::MAX,
        }
    });

    // eta > 0 always yields full disclosure at any cap.
    let pos_ok: Vec<bool> = map_indexed(POSITIVE_ETA_DRAWS, |i| {
        let mut rng = stream_rng(battery_seed(base, 400), i as u64);
        let p = sample_params(&mut rng);
        let zeta = rng.random_range(-3.0..3.0);
        let eta = rng.random_range(1e-6..3.0);
        let wc = WelfareCoefficients::direct(zeta, eta);
        let kappa = if i % 3 == 0 {
            PrecisionChoice::Infinite
        } else {
            PrecisionChoice::Finite(kappas[i % kappas.len()])
        };
        matches!(
            robust_precision(&p, &wc, kappa),
            Ok(v) if v.robust_tau_y == PrecisionChoice::Infinite
        )
    });

    // A cost-dependent pair must show both welfare-derivative signs as the
    // elasticity varies.
    let p0 = ModelParams::new(0.0, 1.0, 1.0, 0.0).expect("valid");
    let wc0 = WelfareCoefficients::direct(0.0, -0.5);
    let both_signs = {
        assert_eq!(
            classify_cost_free_monotonicity(&p0, &wc0),
            CostFreeMonotonicity::CostDependent
        );
        let low = mwd(&p0, &wc0, &CostSpec::isoelastic(0.1, 0.0).expect("valid"), 0.5)
            .expect("interior")
            .mwd;
        let high = mwd(&p0, &wc0, &CostSpec::isoelastic(0.1, 5.0).expect("valid"), 0.5)
            .expect("interior")
            .mwd;
        low > 0.0 && high < 0.0
    };

    checks.push(CheckResult::count(
        "robust/increasing_regions_monotone",
        inc_ok.len(),
        inc_ok.iter().filter(|b| **b).count(),
    ));
    checks.push(CheckResult::count(
        "robust/decreasing_region_monotone",
        dec_ok.len(),
        dec_ok.iter().filter(|b| **b).count(),
    ));
    checks.push(CheckResult::count(
        "robust/constant_region_flat",
        flat_ok.len(),
        flat_ok.iter().filter(|b| **b).count(),
    ));
    checks.push(CheckResult::gap(
        "robust/peak_argmax_grid_distance",
        peak_distances.into_iter().max().unwrap_or(0) as f64,
        1.0,
    ));
    checks.push(CheckResult::count(
        "robust/positive_eta_full_disclosure",
        pos_ok.len(),
        pos_ok.iter().filter(|b| **b).count(),
    ));
    checks.push(CheckResult::count(
        "robust/cost_dependent_example_both_signs",
        1,
        usize::from(both_signs),
    ));
    checks
}

// ---------------------------------------------------------------------------
// Application corollaries.
// ---------------------------------------------------------------------------

/// The committed Cournot configuration where optimal and robust disclosure
/// diverge: no disclosure is optimal, full disclosure is robust.
pub fn divergence_example() -> (ApplicationPreset, CostSpec) {
    let preset = ApplicationPreset::cournot(10.0, 1.0, 1.0).expect("valid preset");
    let cost = CostSpec::isoelastic(0.2, 1.0).expect("valid cost");
    (preset, cost)
}

fn corollary_battery(seed: u64) -> Vec<CheckResult> {
    let mut checks = Vec::new();
    let th = cournot_thresholds(2.0, 2.0, 1.0, 1.0).expect("solvable");
    checks.push(CheckResult::exact(
        "apps/cournot_delta_star_at_lambda_2",
        2.0,
        th.delta_star,
    ));
    let bt = beauty_thresholds(2.0);
    checks.push(CheckResult::exact(
        "apps/beauty_r_star_at_lambda_2",
        2.0 / 3.0,
        bt.r_star,
    ));
    checks.push(CheckResult::exact(
        "apps/beauty_r_gross_at_lambda_2",
        1.0 / 3.0,
        bt.r_gross,
    ));

    // Sign flips of the welfare derivative across each threshold. The
    // thresholds govern the sign uniformly in the cost scale only in the
    // cheap-cost regime where acquired precision dwarfs the prior, so the
    // flip is probed with a very small scale.
    let c_small = 1e-8;
    let flip = |p_lo: &ModelParams, wc_lo: &WelfareCoefficients, p_hi: &ModelParams, wc_hi: &WelfareCoefficients, lambda: f64| {
        let cost = CostSpec::isoelastic(c_small, lambda).expect("valid");
        let lo = mwd(p_lo, wc_lo, &cost, 0.0).expect("interior").mwd;
        let hi = mwd(p_hi, wc_hi, &cost, 0.0).expect("interior").mwd;
        lo > 0.0 && hi < 0.0
    };
    let lambda = 2.0;
    let below = ApplicationPreset::cournot(1.7, lambda, 1.0).expect("valid");
    let above = ApplicationPreset::cournot(2.3, lambda, 1.0).expect("valid");
    checks.push(CheckResult::count(
        "apps/cournot_mwd_flip_across_delta_star",
        1,
        usize::from(flip(
            &below.params,
            &below.welfare,
            &above.params,
            &above.welfare,
            lambda,
        )),
    ));
    let below = ApplicationPreset::beauty(0.6, lambda, 1.0).expect("valid");
    let above = ApplicationPreset::beauty(0.75, lambda, 1.0).expect("valid");
    checks.push(CheckResult::count(
        "apps/beauty_mwd_flip_across_r_star",
        1,
        usize::from(flip(
            &below.params,
            &below.welfare,
            &above.params,
            &above.welfare,
            lambda,
        )),
    ));
    let below = ApplicationPreset::beauty(0.25, lambda, 1.0).expect("valid");
    let above = ApplicationPreset::beauty(0.45, lambda, 1.0).expect("valid");
    checks.push(CheckResult::count(
        "apps/beauty_gross_mwd_flip_across_r_gross",
        1,
        usize::from(flip(
            &below.params,
            &below.gross_welfare,
            &above.params,
            &above.gross_welfare,
            lambda,
        )),
    ));

    // Full disclosure stays robust across four decades of demand slopes.
    let delta_grid = GridSpec::new(1e-2, 1e2, 25, true).expect("valid");
    let robust_all = delta_grid.values().into_iter().all(|delta| {
        let preset = ApplicationPreset::cournot(delta, 1.0, 1.0).expect("valid");
        matches!(
            robust_precision(&preset.params, &preset.welfare, PrecisionChoice::Infinite),
            Ok(v) if v.robust_tau_y == PrecisionChoice::Infinite
        )
    });
    checks.push(CheckResult::count(
        "apps/cournot_robust_infinite_on_delta_grid",
        1,
        usize::from(robust_all),
    ));

    // The committed divergence configuration.
    let (preset, cost) = divergence_example();
    let verdict = optimal_precision(&preset.params, &preset.welfare, &cost);
    let robust = robust_precision(&preset.params, &preset.welfare, PrecisionChoice::Infinite);
    let diverges = verdict.optimal_tau_y == PrecisionChoice::Finite(0.0)
        && matches!(&robust, Ok(v) if v.robust_tau_y == PrecisionChoice::Infinite);
    checks.push(CheckResult::count(
        "apps/divergence_optimal_none_robust_full",
        1,
        usize::from(diverges),
    ));

    // Preset-level report batteries.
    let _ = seed;
    let mut reports_ok = true;
    for (preset, c) in [
        (ApplicationPreset::cournot(1.0, 1.0, 1.0).expect("valid"), 1.0),
        (ApplicationPreset::cournot(10.0, 1.0, 1.0).expect("valid"), 0.2),
        (ApplicationPreset::beauty(0.25, 2.0, 1.0).expect("valid"), 1.0),
        (ApplicationPreset::beauty(0.5, 2.0, 1.0).expect("valid"), 1.0),
        (ApplicationPreset::beauty(0.9, 1.0, 1.0).expect("valid"), 1.0),
    ] {
        let report = corollary_checks(&preset, c).expect("solvable");
        reports_ok &= report.passed;
    }
    checks.push(CheckResult::count(
        "apps/preset_corollary_reports",
        1,
        usize::from(reports_ok),
    ));
    checks
}

/// Maps each analytic operation to at least one battery check that
/// cross-verifies it against an independent oracle.
pub const COVERAGE_MANIFEST: &[(&str, &str)] = &[
    ("equilibrium_coefficients", "foc/best_response_fixed_point"),
    ("marginal_benefit", "foc/marginal_benefit_vs_simulation"),
    ("solve_private_precision", "foc/max_relative_residual"),
    ("phi_inverse", "foc/inverse_round_trip_gap"),
    ("crowding_out_slope", "foc/crowding_out_slope_vs_fd"),
    ("volatility", "moments/cov_within_3se"),
    ("dispersion", "moments/var_within_3se"),
    ("welfare", "mwd/fd_ratio_gap"),
    ("gross_welfare", "apps/beauty_gross_mwd_flip_across_r_gross"),
    ("cost_dispersion_identity_check", "mwd/cost_dispersion_identity"),
    ("mwd0", "mwd/fd_ratio_gap"),
    ("mwd_star", "mwd/fd_ratio_gap"),
    ("mvd", "mwd/weighted_average_identity_gap"),
    ("mwd", "mwd/fd_ratio_gap"),
    ("eta_lower", "mwd/eta_lower_sign_guarantee"),
    ("classify_region", "optimal/region_I_grid_matches"),
    ("tau_bar", "optimal/region_IV_argmax_grid_distance"),
    ("optimal_precision", "optimal/region_II_grid_matches"),
    ("gross_optimal_precision", "apps/beauty_gross_mwd_flip_across_r_gross"),
    ("w0", "robust/worst_case_vs_grid_gap"),
    ("interior_minimizer_f", "robust/worst_case_vs_grid_gap"),
    ("worst_case_welfare", "robust/worst_case_vs_grid_gap"),
    ("robust_precision", "robust/peak_argmax_grid_distance"),
    (
        "classify_cost_free_monotonicity",
        "robust/cost_dependent_example_both_signs",
    ),
];
