//! Independent verification engines: finite-agent Monte Carlo moments,
//! finite-difference derivatives, and grid-search optimizers.
//!
//! Everything here is deterministic given a seed. Monte Carlo replications
//! draw from independent counter-based streams keyed by `(seed, replication
//! index)` (ChaCha8 with one stream per replication), results are collected
//! in replication order, and reductions use pairwise summation, so parallel
//! and sequential runs produce bit-identical output.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equilibrium::{equilibrium_coefficients, solve_private_precision, SolveError};
use crate::exec::{map_indexed, map_indexed_seq, map_slice, pairwise_sum_by};
use crate::model::{CostSpec, ModelParams, PrecisionChoice, WelfareCoefficients};
use crate::robust::{w0, w0_unbounded_acquisition_limit, worst_case_welfare};
use crate::welfare::{welfare_along_path, welfare_at_full_disclosure};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("invalid oracle configuration: {0}")]
    InvalidConfig(String),
}

/// A one-dimensional evaluation grid, linear or log-spaced, endpoints
/// included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub log_spaced: bool,
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, points: usize, log_spaced: bool) -> Result<Self, OracleError> {
        let grid = Self {
            lo,
            hi,
            points,
            log_spaced,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// The default precision grid: 400 log-spaced points on `[1e-4, 1e4]`.
    pub fn default_tau() -> Self {
        Self {
            lo: 1e-4,
            hi: 1e4,
            points: 400,
            log_spaced: true,
        }
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        if !(self.lo.is_finite() && self.hi.is_finite()) || self.lo < 0.0 || self.hi <= self.lo {
            return Err(OracleError::InvalidConfig(format!(
                "grid bounds must satisfy 0 <= lo < hi, got [{}, {}]",
                self.lo, self.hi
            )));
        }
        if self.points < 2 {
            return Err(OracleError::InvalidConfig(format!(
                "grid needs at least 2 points, got {}",
                self.points
            )));
        }
        if self.log_spaced && self.lo == 0.0 {
            return Err(OracleError::InvalidConfig(
                "log-spaced grid requires lo > 0".into(),
            ));
        }
        Ok(())
    }

    /// Grid values in increasing order; both endpoints are exact.
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        let mut xs = Vec::with_capacity(n);
        if self.log_spaced {
            let (llo, lhi) = (self.lo.ln(), self.hi.ln());
            for k in 0..n {
                let t = k as f64 / (n - 1) as f64;
                xs.push((llo + t * (lhi - llo)).exp());
            }
        } else {
            for k in 0..n {
                let t = k as f64 / (n - 1) as f64;
                xs.push(self.lo + t * (self.hi - self.lo));
            }
        }
        xs[0] = self.lo;
        xs[n - 1] = self.hi;
        xs
    }
}

/// Sizes, seed, and steps for the verification oracles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Agents per replication; at least 10_000 for moment checks.
    pub n_agents: usize,
    pub n_draws: usize,
    pub seed: u64,
    pub grid: GridSpec,
    pub fd_step: f64,
}

impl OracleConfig {
    pub fn new(
        n_agents: usize,
        n_draws: usize,
        seed: u64,
        grid: GridSpec,
        fd_step: f64,
    ) -> Result<Self, OracleError> {
        if n_agents < 10_000 {
            return Err(OracleError::InvalidConfig(format!(
                "moment checks need n_agents >= 10000, got {n_agents}"
            )));
        }
        if n_draws < 2 {
            return Err(OracleError::InvalidConfig(format!(
                "need n_draws >= 2, got {n_draws}"
            )));
        }
        if grid.points < 100 {
            return Err(OracleError::InvalidConfig(format!(
                "oracle grid needs at least 100 points, got {}",
                grid.points
            )));
        }
        grid.validate()?;
        if !(fd_step > 0.0) {
            return Err(OracleError::InvalidConfig(format!(
                "fd_step must be > 0, got {fd_step}"
            )));
        }
        Ok(Self {
            n_agents,
            n_draws,
            seed,
            grid,
            fd_step,
        })
    }
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            n_agents: 100_000,
            n_draws: 200,
            seed: 7,
            grid: GridSpec::default_tau(),
            fd_step: 1e-5,
        }
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Per-replication summary of one simulated cross-section.
#[derive(Debug, Clone, Copy)]
struct DrawStat {
    /// Average action computed from the exact conditional mean of the
    /// continuum (idiosyncratic noise integrated out).
    m_exact: f64,
    /// Average action as the sample mean over the simulated agents.
    m_agents: f64,
    /// Within-replication variance of actions around the exact mean.
    v_within: f64,
    theta: f64,
}

fn simulate_draw(p: &ModelParams, tau_x: f64, tau_y: f64, n_agents: usize, rng: &mut ChaCha8Rng) -> DrawStat {
    let b = equilibrium_coefficients(p, tau_x, tau_y);
    let z: f64 = rng.sample(StandardNormal);
    let theta_dev = z / p.tau_theta().sqrt();
    let theta = p.theta_bar() + theta_dev;
    let y_dev = if tau_y > 0.0 {
        let z: f64 = rng.sample(StandardNormal);
        theta_dev + z / tau_y.sqrt()
    } else {
        0.0 // b_y = 0: the public signal never enters the action
    };
    let m_exact = b.b_x * theta_dev + b.b_y * y_dev + b.intercept;
    if tau_x == 0.0 {
        // b_x = 0: no idiosyncratic component.
        return DrawStat {
            m_exact,
            m_agents: m_exact,
            v_within: 0.0,
            theta,
        };
    }
    let noise_scale = b.b_x / tau_x.sqrt();
    let mut sum_dev = 0.0;
    let mut sum_dev2 = 0.0;
    for _ in 0..n_agents {
        let z: f64 = rng.sample(StandardNormal);
        let dev = noise_scale * z;
        sum_dev += dev;
        sum_dev2 += dev * dev;
    }
    let n = n_agents as f64;
    DrawStat {
        m_exact,
        m_agents: m_exact + sum_dev / n,
        v_within: sum_dev2 / n,
        theta,
    }
}

/// Monte Carlo action moments with their standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McMoments {
    /// Variance of an individual action; closed form `V + D`.
    pub var_i: f64,
    /// Covariance of two actions, estimated from the exact conditional mean
    /// of the average action; closed form `V`.
    pub cov_ij: f64,
    /// Covariance of two actions, estimated from the per-agent sample mean.
    /// Carries an `O(D / n_agents)` upward bias; exposed for comparison.
    pub cov_ij_agent_mean: f64,
    /// Covariance of an action with the state.
    pub cov_i_theta: f64,
    pub se_var_i: f64,
    pub se_cov_ij: f64,
    pub se_cov_i_theta: f64,
    pub n_agents: usize,
    pub n_draws: usize,
    pub seed: u64,
}

fn reduce_moments(stats: &[DrawStat], cfg: &OracleConfig) -> McMoments {
    let r = stats.len() as f64;
    let mean_m = pairwise_sum_by(stats, |s| s.m_exact) / r;
    let mean_ma = pairwise_sum_by(stats, |s| s.m_agents) / r;
    let mean_th = pairwise_sum_by(stats, |s| s.theta) / r;
    let var_m = pairwise_sum_by(stats, |s| (s.m_exact - mean_m).powi(2)) / (r - 1.0);
    let var_ma = pairwise_sum_by(stats, |s| (s.m_agents - mean_ma).powi(2)) / (r - 1.0);
    let var_th = pairwise_sum_by(stats, |s| (s.theta - mean_th).powi(2)) / (r - 1.0);
    let cov_mth =
        pairwise_sum_by(stats, |s| (s.m_exact - mean_m) * (s.theta - mean_th)) / (r - 1.0);
    let mean_w = pairwise_sum_by(stats, |s| s.v_within) / r;
    let sd_w = (pairwise_sum_by(stats, |s| (s.v_within - mean_w).powi(2)) / (r - 1.0)).sqrt();

    // The exact mean is Gaussian, so the variance estimator's standard error
    // is var * sqrt(2 / (r - 1)); the within term is an independent mean of
    // per-replication averages.
    let se_cov = var_m * (2.0 / (r - 1.0)).sqrt();
    let se_within = sd_w / r.sqrt();
    McMoments {
        var_i: var_m + mean_w,
        cov_ij: var_m,
        cov_ij_agent_mean: var_ma,
        cov_i_theta: cov_mth,
        se_var_i: (se_cov.powi(2) + se_within.powi(2)).sqrt(),
        se_cov_ij: se_cov,
        se_cov_i_theta: ((var_m * var_th + cov_mth.powi(2)) / (r - 1.0)).sqrt(),
        n_agents: cfg.n_agents,
        n_draws: cfg.n_draws,
        seed: cfg.seed,
    }
}

/// Finite-agent Monte Carlo estimate of the action moments at the given
/// precisions. Deterministic given `cfg.seed`, independent of thread count.
pub fn mc_moments(p: &ModelParams, tau_x: f64, tau_y: f64, cfg: &OracleConfig) -> McMoments {
    let stats = map_indexed(cfg.n_draws, |rep| {
        let mut rng = stream_rng(cfg.seed, rep as u64);
        simulate_draw(p, tau_x, tau_y, cfg.n_agents, &mut rng)
    });
    reduce_moments(&stats, cfg)
}

/// Sequential reference for [`mc_moments`]; bit-identical to the parallel
/// path by construction.
pub fn mc_moments_seq(p: &ModelParams, tau_x: f64, tau_y: f64, cfg: &OracleConfig) -> McMoments {
    let stats = map_indexed_seq(cfg.n_draws, |rep| {
        let mut rng = stream_rng(cfg.seed, rep as u64);
        simulate_draw(p, tau_x, tau_y, cfg.n_agents, &mut rng)
    });
    reduce_moments(&stats, cfg)
}

/// Moments of the average action estimated from common shocks only.
///
/// The average action over the continuum is the exact conditional mean, so
/// its variance (the volatility) and its covariance with the state need no
/// agent loop; this estimator converges much faster per unit of work than
/// the finite-agent one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AverageActionMoments {
    pub volatility: f64,
    pub cov_theta: f64,
    pub se_volatility: f64,
    pub se_cov_theta: f64,
    pub n_draws: usize,
    pub seed: u64,
}

/// Estimates the volatility and the action-state covariance from `n_draws`
/// replications of the common shocks.
pub fn mc_average_action_moments(
    p: &ModelParams,
    tau_x: f64,
    tau_y: f64,
    n_draws: usize,
    seed: u64,
) -> AverageActionMoments {
    let pairs: Vec<(f64, f64)> = map_indexed(n_draws, |rep| {
        let mut rng = stream_rng(seed, rep as u64);
        let s = simulate_draw(p, tau_x, tau_y, 0, &mut rng);
        (s.m_exact, s.theta)
    });
    let r = n_draws as f64;
    let mean_m = pairwise_sum_by(&pairs, |x| x.0) / r;
    let mean_th = pairwise_sum_by(&pairs, |x| x.1) / r;
    let var_m = pairwise_sum_by(&pairs, |x| (x.0 - mean_m).powi(2)) / (r - 1.0);
    let var_th = pairwise_sum_by(&pairs, |x| (x.1 - mean_th).powi(2)) / (r - 1.0);
    let cov = pairwise_sum_by(&pairs, |x| (x.0 - mean_m) * (x.1 - mean_th)) / (r - 1.0);
    AverageActionMoments {
        volatility: var_m,
        cov_theta: cov,
        se_volatility: var_m * (2.0 / (r - 1.0)).sqrt(),
        se_cov_theta: ((var_m * var_th + cov.powi(2)) / (r - 1.0)).sqrt(),
        n_draws,
        seed,
    }
}

/// Monte Carlo estimate of the marginal benefit of own precision.
///
/// Holds the equilibrium strategy profile fixed, varies only the precision of
/// agent `i`'s signal, and differentiates the simulated expected payoff with
/// common random numbers, so the finite-difference noise stays bounded by the
/// per-draw derivative's dispersion.
pub fn mc_marginal_benefit(
    p: &ModelParams,
    tau_x: f64,
    tau_y: f64,
    n_draws: usize,
    seed: u64,
    step: f64,
) -> f64 {
    assert!(tau_x > 0.0 && step > 0.0 && step < tau_x);
    let b = equilibrium_coefficients(p, tau_x, tau_y);
    let derivs: Vec<f64> = map_indexed(n_draws, |rep| {
        let mut rng = stream_rng(seed, rep as u64);
        let z0: f64 = rng.sample(StandardNormal);
        let theta_dev = z0 / p.tau_theta().sqrt();
        let theta = p.theta_bar() + theta_dev;
        let y_dev = if tau_y > 0.0 {
            let z: f64 = rng.sample(StandardNormal);
            theta_dev + z / tau_y.sqrt()
        } else {
            0.0
        };
        let z_own: f64 = rng.sample(StandardNormal);
        let avg = b.b_x * theta_dev + b.b_y * y_dev + b.intercept;
        let payoff = |tau_i: f64| {
            let a_i = b.b_x * (theta_dev + z_own / tau_i.sqrt()) + b.b_y * y_dev + b.intercept;
            -a_i * a_i + 2.0 * p.alpha() * a_i * avg + 2.0 * p.beta() * theta * a_i
        };
        (payoff(tau_x + step) - payoff(tau_x - step)) / (2.0 * step)
    });
    pairwise_sum_by(&derivs, |d| *d) / n_draws as f64
}

/// Componentwise gap between the equilibrium coefficients and the
/// best-response map applied to them; vanishes up to roundoff because the
/// coefficients are the unique fixed point.
pub fn best_response_residual(p: &ModelParams, tau_x: f64, tau_y: f64) -> (f64, f64) {
    let b = equilibrium_coefficients(p, tau_x, tau_y);
    let total = tau_x + tau_y + p.tau_theta();
    // Best response to opponents playing (b_x, b_y): project the target
    // alpha * avg + beta * theta on the signals.
    let loading = p.alpha() * b.b_x + p.beta();
    let br_x = loading * tau_x / total;
    let br_y = loading * tau_y / total + p.alpha() * b.b_y;
    ((b.b_x - br_x).abs(), (b.b_y - br_y).abs())
}

/// A finite-difference derivative estimate, flagged when a corner inside the
/// stencil forced a one-sided difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdEstimate {
    pub value: f64,
    pub one_sided: bool,
}

/// Finite-difference social value of public information: the derivative of
/// `W(phi(tau_y), tau_y)` in `tau_y`.
///
/// Central differences, with the step scaled by `1 + tau_y`; if the corner
/// (`phi = 0`) is crossed inside the stencil, the step shrinks and, failing
/// that, a one-sided difference from the matching side is returned with a
/// flag.
pub fn fd_social_value(
    p: &ModelParams,
    wc: &WelfareCoefficients,
    cost: &CostSpec,
    tau_y: f64,
    cfg: &OracleConfig,
) -> Result<FdEstimate, SolveError> {
    let interior = |t: f64| -> Result<bool, SolveError> {
        Ok(solve_private_precision(p, cost, t)? > 0.0)
    };
    let g = |t: f64| welfare_along_path(p, wc, cost, t);
    let state = interior(tau_y)?;
    let mut h = cfg.fd_step * (1.0 + tau_y);
    for _ in 0..5 {
        let left_ok = tau_y - h >= 0.0 && interior(tau_y - h)? == state;
        let right_ok = interior(tau_y + h)? == state;
        match (left_ok, right_ok) {
            (true, true) => {
                let value = (g(tau_y + h)? - g(tau_y - h)?) / (2.0 * h);
                return Ok(FdEstimate {
                    value,
                    one_sided: false,
                });
            }
            (false, true) => {
                let value = (g(tau_y + h)? - g(tau_y)?) / h;
                return Ok(FdEstimate {
                    value,
                    one_sided: true,
                });
            }
            (true, false) => {
                let value = (g(tau_y)? - g(tau_y - h)?) / h;
                return Ok(FdEstimate {
                    value,
                    one_sided: true,
                });
            }
            (false, false) => h /= 10.0,
        }
    }
    let value = (g(tau_y + h)? - g(tau_y)?) / h;
    Ok(FdEstimate {
        value,
        one_sided: true,
    })
}

/// Result of a grid scan: the best candidate (possibly the appended analytic
/// limit at infinity) and its value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridOpt {
    pub arg: PrecisionChoice,
    pub value: f64,
    /// Index into the finite candidate list; `None` when the limit won.
    pub index: Option<usize>,
}

/// Evaluates `f` over candidate points, in parallel under the `parallel`
/// feature.
pub fn scan_values<F>(candidates: &[f64], f: F) -> Vec<f64>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    map_slice(candidates, |&x| f(x))
}

/// Sequential reference for [`scan_values`].
pub fn scan_values_seq<F>(candidates: &[f64], f: F) -> Vec<f64>
where
    F: Fn(f64) -> f64,
{
    candidates.iter().map(|&x| f(x)).collect()
}

/// Argmax over finite candidates with an optional analytic limit value at
/// infinity; the limit wins only when it strictly exceeds every finite value.
pub fn argmax_with_limit(candidates: &[f64], values: &[f64], limit: Option<f64>) -> GridOpt {
    assert_eq!(candidates.len(), values.len());
    assert!(!candidates.is_empty());
    let mut best = 0usize;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    if let Some(lim) = limit {
        if lim > values[best] {
            return GridOpt {
                arg: PrecisionChoice::Infinite,
                value: lim,
                index: None,
            };
        }
    }
    GridOpt {
        arg: PrecisionChoice::Finite(candidates[best]),
        value: values[best],
        index: Some(best),
    }
}

/// Argmin counterpart of [`argmax_with_limit`].
pub fn argmin_with_limit(candidates: &[f64], values: &[f64], limit: Option<f64>) -> GridOpt {
    let negated: Vec<f64> = values.iter().map(|v| -v).collect();
    let opt = argmax_with_limit(candidates, &negated, limit.map(|l| -l));
    GridOpt {
        arg: opt.arg,
        value: -opt.value,
        index: opt.index,
    }
}

/// Grid-search argmax of the welfare along the equilibrium path over
/// `{0} ∪ grid`, with the analytic full-disclosure limit appended.
pub fn grid_optimal_tau_y(
    p: &ModelParams,
    wc: &WelfareCoefficients,
    cost: &CostSpec,
    grid: &GridSpec,
) -> GridOpt {
    let mut candidates = vec![0.0];
    candidates.extend(grid.values());
    let values = scan_values(&candidates, |ty| {
        welfare_along_path(p, wc, cost, ty).expect("acquisition stage must solve")
    });
    argmax_with_limit(&candidates, &values, Some(welfare_at_full_disclosure(p, wc)))
}

/// Grid-search argmax of the worst-case welfare over `{0} ∪ grid`, with its
/// limit at unbounded public precision appended.
pub fn grid_robust_tau_y(
    p: &ModelParams,
    wc: &WelfareCoefficients,
    kappa: PrecisionChoice,
    grid: &GridSpec,
) -> GridOpt {
    let mut candidates = vec![0.0];
    candidates.extend(grid.values());
    let values = scan_values(&candidates, |ty| worst_case_welfare(p, wc, ty, kappa).value);
    // Every W0(tau_x, .) tends to the same limit as tau_y grows.
    let limit = w0_unbounded_acquisition_limit(p, wc);
    argmax_with_limit(&candidates, &values, Some(limit))
}

/// Brute-force infimum of `W0` over the private precision up to `kappa`,
/// via a dense scan refined twice around the incumbent. Used to cross-check
/// the analytic worst case.
pub fn grid_min_w0_over_tau_x(
    p: &ModelParams,
    wc: &WelfareCoefficients,
    tau_y: f64,
    kappa: PrecisionChoice,
    points: usize,
) -> GridOpt {
    let obj = |tx: f64| w0(p, wc, tx, tau_y);
    match kappa {
        PrecisionChoice::Finite(k) => {
            if k == 0.0 {
                return GridOpt {
                    arg: PrecisionChoice::Finite(0.0),
                    value: obj(0.0),
                    index: Some(0),
                };
            }
            let mut lo = 0.0;
            let mut hi = k;
            let mut best = scan_min(&obj, lo, hi, points);
            for _ in 0..2 {
                let step = (hi - lo) / (points - 1) as f64;
                lo = (best.0 - step).max(0.0);
                hi = (best.0 + step).min(k);
                best = scan_min(&obj, lo, hi, 1001);
            }
            GridOpt {
                arg: PrecisionChoice::Finite(best.0),
                value: best.1,
                index: None,
            }
        }
        PrecisionChoice::Infinite => {
            // Wide log sweep plus the analytic limit; refine only when a
            // finite point wins.
            let mut hi_guess = 1e6_f64.max(100.0 * (tau_y + p.tau_theta()));
            if let crate::robust::InteriorStationary::At(f) =
                crate::robust::interior_minimizer(p, wc, tau_y)
            {
                hi_guess = hi_guess.max(4.0 * f);
            }
            let grid = GridSpec {
                lo: 1e-9,
                hi: hi_guess,
                points,
                log_spaced: true,
            };
            let mut candidates = vec![0.0];
            candidates.extend(grid.values());
            let values = scan_values(&candidates, obj);
            let limit = w0_unbounded_acquisition_limit(p, wc);
            let coarse = argmin_with_limit(&candidates, &values, Some(limit));
            match coarse.arg {
                PrecisionChoice::Infinite => coarse,
                PrecisionChoice::Finite(x) => {
                    let idx = coarse.index.expect("finite winner has an index");
                    let lo = if idx == 0 { 0.0 } else { candidates[idx - 1] };
                    let hi = candidates.get(idx + 1).copied().unwrap_or(x * 2.0);
                    let mut best = scan_min(&obj, lo, hi, 2001);
                    for _ in 0..2 {
                        let step = (hi - lo) / 2000.0;
                        let lo2 = (best.0 - step).max(0.0);
                        let hi2 = best.0 + step;
                        best = scan_min(&obj, lo2, hi2, 1001);
                    }
                    if best.1 <= limit {
                        GridOpt {
                            arg: PrecisionChoice::Finite(best.0),
                            value: best.1,
                            index: None,
                        }
                    } else {
                        GridOpt {
                            arg: PrecisionChoice::Infinite,
                            value: limit,
                            index: None,
                        }
                    }
                }
            }
        }
    }
}

fn scan_min(obj: &(impl Fn(f64) -> f64 + Sync + Send), lo: f64, hi: f64, points: usize) -> (f64, f64) {
    let grid = GridSpec {
        lo,
        hi,
        points,
        log_spaced: false,
    };
    let xs = grid.values();
    let values = scan_values(&xs, obj);
    let opt = argmin_with_limit(&xs, &values, None);
    (
        opt.arg.as_finite().expect("no limit candidate supplied"),
        opt.value,
    )
}
