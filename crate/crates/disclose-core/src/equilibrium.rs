//! Subgame equilibria: the linear action coefficients of the final-period
//! game and the endogenous private-precision fixed point `phi(tau_y)` of the
//! acquisition stage, together with its inverse and slope.

use thiserror::Error;

use crate::model::{CostSpec, ModelParams};

/// Relative tolerance of the bracketed bisection used for the acquisition
/// first-order condition.
pub const FOC_REL_TOL: f64 = 1e-12;

/// Iteration cap for the bisection; far beyond what [`FOC_REL_TOL`] needs.
pub const FOC_MAX_ITERS: usize = 200;

#[derive(Debug, Error)]
pub enum SolveError {
    /// The bisection failed to converge. Must not occur for a valid convex
    /// cost; carries the final bracket as a bug signal.
    #[error("first-order condition solver did not converge after {iterations} iterations, final bracket [{lo}, {hi}]")]
    NoConvergence { lo: f64, hi: f64, iterations: usize },
    /// No sign change was found while expanding the initial bracket.
    #[error("could not bracket the first-order condition root (upper bound reached {hi})")]
    NoBracket { hi: f64 },
    #[error("crowding-out slope undefined at corner (equilibrium private precision is 0)")]
    SlopeUndefinedAtCorner,
}

/// Linear coefficients of the unique symmetric equilibrium strategy
/// `sigma_i(x_i, y) = b_x (x_i - theta_bar) + b_y (y - theta_bar) + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumCoefficients {
    /// Weight on the private signal.
    pub b_x: f64,
    /// Weight on the public signal.
    pub b_y: f64,
    /// `beta * theta_bar / (1 - alpha)`.
    pub intercept: f64,
}

fn precision_total(p: &ModelParams, tau_x: f64, tau_y: f64) -> f64 {
    p.one_minus_alpha() * tau_x + tau_y + p.tau_theta()
}

/// Equilibrium signal weights for given private and public precisions:
/// `b_x = beta * tau_x / d` and `b_y = beta * tau_y / ((1 - alpha) * d)`
/// with `d = (1 - alpha) * tau_x + tau_y + tau_theta`.
pub fn equilibrium_coefficients(
    p: &ModelParams,
    tau_x: f64,
    tau_y: f64,
) -> EquilibriumCoefficients {
    let d = precision_total(p, tau_x, tau_y);
    EquilibriumCoefficients {
        b_x: p.beta() * tau_x / d,
        b_y: p.beta() * tau_y / (p.one_minus_alpha() * d),
        intercept: p.beta() * p.theta_bar() / p.one_minus_alpha(),
    }
}

/// Marginal benefit of own precision at a symmetric profile,
/// `beta^2 / ((1 - alpha) tau_x + tau_y + tau_theta)^2`; strictly decreasing
/// in both precisions.
pub fn marginal_benefit(p: &ModelParams, tau_x: f64, tau_y: f64) -> f64 {
    let d = precision_total(p, tau_x, tau_y);
    (p.beta() / d).powi(2)
}

/// Equilibrium private precision `phi(tau_y)`.
///
/// Returns 0 when `C'(0) >= beta^2 / (tau_y + tau_theta)^2` (the corner where
/// acquiring nothing is optimal); otherwise the unique root of
/// `marginal_benefit(tau_x, tau_y) = C'(tau_x)`. Linear and
/// elasticity-zero isoelastic costs use the closed form
/// `(beta / sqrt(c) - tau_y - tau_theta) / (1 - alpha)`; other costs fall back
/// to bracketed bisection at relative tolerance [`FOC_REL_TOL`].
pub fn solve_private_precision(
    p: &ModelParams,
    cost: &CostSpec,
    tau_y: f64,
) -> Result<f64, SolveError> {
    if at_corner(p, cost, tau_y) {
        return Ok(0.0);
    }
    if cost.constant_elasticity() == Some(0.0) {
        let c = cost.scale().expect("elasticity-zero cost has a scale");
        return Ok(linear_closed_form(p, c, tau_y));
    }
    solve_private_precision_bisect(p, cost, tau_y)
}

fn at_corner(p: &ModelParams, cost: &CostSpec, tau_y: f64) -> bool {
    cost.marginal_at_zero() >= marginal_benefit(p, 0.0, tau_y)
}

fn linear_closed_form(p: &ModelParams, c: f64, tau_y: f64) -> f64 {
    (p.beta() / c.sqrt() - tau_y - p.tau_theta()) / p.one_minus_alpha()
}

/// The iterative route for `phi(tau_y)`: bracket expansion followed by
/// bisection. [`solve_private_precision`] prefers the closed form for
/// constant marginal costs; this entry point always iterates and exists so
/// the two routes can be cross-checked.
pub fn solve_private_precision_bisect(
    p: &ModelParams,
    cost: &CostSpec,
    tau_y: f64,
) -> Result<f64, SolveError> {
    if at_corner(p, cost, tau_y) {
        return Ok(0.0);
    }
    // The residual is strictly decreasing: the marginal benefit falls in
    // tau_x while the marginal cost rises.
    let residual = |tau_x: f64| marginal_benefit(p, tau_x, tau_y) - cost.eval(tau_x).marginal;

    // Initial upper bound. With C'(0) > 0 the linear-cost root with
    // c = C'(0) bounds the root from above; with C'(0) = 0 evaluate C' at a
    // tiny positive precision instead.
    let cp0 = cost.marginal_at_zero();
    let mut hi = if cp0 > 0.0 {
        linear_closed_form(p, cp0, tau_y)
    } else {
        const EPS: f64 = 1e-12;
        p.beta() / (cost.eval(EPS).marginal.sqrt() * p.one_minus_alpha())
    };
    hi = hi.max(1e-9);
    let mut doublings = 0;
    while residual(hi) > 0.0 {
        hi *= 2.0;
        doublings += 1;
        if doublings > 100 || !hi.is_finite() {
            return Err(SolveError::NoBracket { hi });
        }
    }

    let mut lo = 0.0;
    for _ in 0..FOC_MAX_ITERS {
        let mid = 0.5 * (lo + hi);
        if residual(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= FOC_REL_TOL * mid {
            return Ok(0.5 * (lo + hi));
        }
    }
    Err(SolveError::NoConvergence {
        lo,
        hi,
        iterations: FOC_MAX_ITERS,
    })
}

/// Inverse of the acquisition fixed point: the public precision that induces
/// private precision `tau_x > 0`,
/// `-(1 - alpha) tau_x - tau_theta + beta / sqrt(C'(tau_x))`.
///
/// May be negative, meaning no nonnegative public precision induces `tau_x`.
pub fn phi_inverse(p: &ModelParams, cost: &CostSpec, tau_x: f64) -> f64 {
    assert!(tau_x > 0.0, "phi_inverse requires tau_x > 0");
    -p.one_minus_alpha() * tau_x - p.tau_theta() + p.beta() / cost.eval(tau_x).marginal.sqrt()
}

/// Crowding-out slope `phi'(tau_y) = 1 / (d phi^{-1} / d tau_x)` evaluated at
/// `tau_x = phi(tau_y)`, where
/// `d phi^{-1} / d tau_x = -(1 - alpha) - beta C'' / (2 C'^{3/2})`.
/// Always strictly negative while the equilibrium is interior.
pub fn crowding_out_slope(p: &ModelParams, cost: &CostSpec, tau_y: f64) -> Result<f64, SolveError> {
    let phi = solve_private_precision(p, cost, tau_y)?;
    if phi == 0.0 {
        return Err(SolveError::SlopeUndefinedAtCorner);
    }
    let e = cost.eval(phi);
    let d_inv = -p.one_minus_alpha() - p.beta() * e.curvature / (2.0 * e.marginal.powf(1.5));
    Ok(1.0 / d_inv)
}
