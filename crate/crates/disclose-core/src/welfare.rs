//! Volatility, dispersion, and expected welfare on and off the equilibrium
//! path.
//!
//! All quantities are evaluated through rational closed forms in the two
//! precisions rather than through the `b_x`, `b_y` ratios, which removes the
//! 0/0 cases at `tau_x = 0` or `tau_y = 0`. Infinite public precision is
//! never substituted numerically; a dedicated limit path returns the analytic
//! values instead.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equilibrium::{equilibrium_coefficients, solve_private_precision, SolveError};
use crate::model::{CostSpec, ModelParams, PrecisionChoice, WelfareCoefficients};

#[derive(Debug, Error)]
pub enum WelfareError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("operation requires a constant-elasticity (linear or isoelastic) cost")]
    NotConstantElasticity,
    #[error("operation requires a finite public precision")]
    InfinitePublicPrecision,
}

fn precision_total(p: &ModelParams, tau_x: f64, tau_y: f64) -> f64 {
    p.one_minus_alpha() * tau_x + tau_y + p.tau_theta()
}

/// Volatility: the variance of the average action, equal to the covariance
/// of individual actions,
/// `V = beta^2 ((1-a)^2 tx^2 + 2 (1-a) tx ty + ty (t0 + ty)) / ((1-a)^2 t0 d^2)`.
pub fn volatility(p: &ModelParams, tau_x: f64, tau_y: f64) -> f64 {
    let oma = p.one_minus_alpha();
    let d = precision_total(p, tau_x, tau_y);
    let num = (oma * tau_x).powi(2) + 2.0 * oma * tau_x * tau_y + tau_y * (p.tau_theta() + tau_y);
    p.beta().powi(2) * num / (oma.powi(2) * p.tau_theta() * d.powi(2))
}

/// Dispersion: the variance of an individual action around the average,
/// `D = beta^2 tau_x / d^2`; equals `var - cov` and vanishes at `tau_x = 0`.
pub fn dispersion(p: &ModelParams, tau_x: f64, tau_y: f64) -> f64 {
    let d = precision_total(p, tau_x, tau_y);
    p.beta().powi(2) * tau_x / d.powi(2)
}

/// Covariance of an individual action with the state, `(b_x + b_y) / tau_theta`.
pub fn action_state_covariance(p: &ModelParams, tau_x: f64, tau_y: f64) -> f64 {
    let b = equilibrium_coefficients(p, tau_x, tau_y);
    (b.b_x + b.b_y) / p.tau_theta()
}

/// The common limit of the volatility as either precision grows without
/// bound: `beta^2 / ((1 - alpha)^2 tau_theta)`.
pub fn volatility_limit(p: &ModelParams) -> f64 {
    (p.beta() / p.one_minus_alpha()).powi(2) / p.tau_theta()
}

/// Expected welfare `W = zeta D + eta V - C(tau_x)`, additive constant
/// dropped.
pub fn welfare(
    p: &ModelParams,
    wc: &WelfareCoefficients,
    cost: &CostSpec,
    tau_x: f64,
    tau_y: f64,
) -> f64 {
    wc.zeta * dispersion(p, tau_x, tau_y) + wc.eta * volatility(p, tau_x, tau_y)
        - cost.eval(tau_x).cost
}

/// Gross expected welfare `W + C = zeta D + eta V`, excluding the
/// information cost.
pub fn gross_welfare(
    p: &ModelParams,
    wc: &WelfareCoefficients,
    tau_x: f64,
    tau_y: f64,
) -> f64 {
    wc.zeta * dispersion(p, tau_x, tau_y) + wc.eta * volatility(p, tau_x, tau_y)
}

/// Welfare on the equilibrium path, `W(phi(tau_y), tau_y)`.
pub fn welfare_along_path(
    p: &ModelParams,
    wc: &WelfareCoefficients,
    cost: &CostSpec,
    tau_y: f64,
) -> Result<f64, SolveError> {
    let phi = solve_private_precision(p, cost, tau_y)?;
    Ok(welfare(p, wc, cost, phi, tau_y))
}

/// Welfare in the full-disclosure limit `tau_y -> infinity`: dispersion and
/// the information cost vanish and the volatility tends to
/// [`volatility_limit`], leaving `eta * beta^2 / ((1 - alpha)^2 tau_theta)`.
pub fn welfare_at_full_disclosure(p: &ModelParams, wc: &WelfareCoefficients) -> f64 {
    wc.eta * volatility_limit(p)
}

/// Residual of the cost-dispersion proportionality at an isoelastic
/// equilibrium, `|C(phi) - D(phi, tau_y) / (lambda + 1)|`; zero (up to
/// roundoff) at every interior or corner equilibrium.
pub fn cost_dispersion_identity_residual(
    p: &ModelParams,
    cost: &CostSpec,
    tau_y: f64,
) -> Result<f64, WelfareError> {
    let lambda = cost
        .constant_elasticity()
        .ok_or(WelfareError::NotConstantElasticity)?;
    let phi = solve_private_precision(p, cost, tau_y)?;
    let d = dispersion(p, phi, tau_y);
    Ok((cost.eval(phi).cost - d / (lambda + 1.0)).abs())
}

/// One solved point of the equilibrium path: precisions, action
/// coefficients, the welfare decomposition, and net/gross welfare.
///
/// `W` always excludes the additive welfare constant, which the
/// `additive_constant_dropped` flag records in serialized output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquilibriumSolution {
    pub tau_y: PrecisionChoice,
    pub tau_x: f64,
    pub b_x: f64,
    pub b_y: f64,
    #[serde(rename = "V")]
    pub volatility: f64,
    #[serde(rename = "D")]
    pub dispersion: f64,
    pub cost: f64,
    #[serde(rename = "W")]
    pub welfare: f64,
    #[serde(rename = "W_gross")]
    pub welfare_gross: f64,
    pub additive_constant_dropped: bool,
}

/// Solves the acquisition stage at the given public precision and assembles
/// the full welfare row. Infinite public precision takes the analytic limit
/// path (`tau_x -> 0`, `D -> 0`, `C -> 0`, `V ->` [`volatility_limit`]).
pub fn solve_at(
    p: &ModelParams,
    wc: &WelfareCoefficients,
    cost: &CostSpec,
    tau_y: PrecisionChoice,
) -> Result<EquilibriumSolution, SolveError> {
    match tau_y {
        PrecisionChoice::Finite(ty) => {
            let phi = solve_private_precision(p, cost, ty)?;
            let b = equilibrium_coefficients(p, phi, ty);
            let v = volatility(p, phi, ty);
            let d = dispersion(p, phi, ty);
            let c = cost.eval(phi).cost;
            let w = wc.zeta * d + wc.eta * v - c;
            Ok(EquilibriumSolution {
                tau_y,
                tau_x: phi,
                b_x: b.b_x,
                b_y: b.b_y,
                volatility: v,
                dispersion: d,
                cost: c,
                welfare: w,
                welfare_gross: w + c,
                additive_constant_dropped: true,
            })
        }
        PrecisionChoice::Infinite => {
            let v = volatility_limit(p);
            let w = wc.eta * v;
            Ok(EquilibriumSolution {
                tau_y,
                tau_x: 0.0,
                b_x: 0.0,
                b_y: p.beta() / p.one_minus_alpha(),
                volatility: v,
                dispersion: 0.0,
                cost: 0.0,
                welfare: w,
                welfare_gross: w,
                additive_constant_dropped: true,
            })
        }
    }
}
