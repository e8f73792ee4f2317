//! Marginal welfare and volatility with respect to dispersion.
//!
//! More precise public information lowers the dispersion, so the sign of the
//! welfare derivative along the equilibrium path can be read off the marginal
//! welfare per unit of dispersion decrease (MWD) without a closed form for
//! `phi`. The MWD decomposes as a weighted average of two special cases — a
//! linear information cost and exogenous (fixed) private information — with
//! weights 1 and the elasticity of marginal cost.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equilibrium::{solve_private_precision, SolveError};
use crate::model::{CostSpec, ModelParams, WelfareCoefficients};

#[derive(Debug, Error)]
pub enum MwdError {
    /// The acquisition stage is at its corner, where the dispersion is flat
    /// and the MWD is undefined. Along the corner the welfare derivative is
    /// `eta * dV(0, tau_y)/d tau_y`, reported here when available.
    #[error("MWD undefined at corner (equilibrium private precision is 0){}",
        corner_welfare_derivative.map(|d| format!("; corner welfare derivative = {d}")).unwrap_or_default())]
    Corner {
        corner_welfare_derivative: Option<f64>,
    },
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// The MWD and its building blocks at one point of the equilibrium path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MwdBreakdown {
    pub mwd: f64,
    /// MWD under a linear cost: `eta / (1 - alpha) - zeta + 1`.
    pub mwd0: f64,
    /// MWD with the private precision held fixed.
    pub mwd_star: f64,
    pub mvd: f64,
    /// MVD under a linear cost: `1 / (1 - alpha)`.
    pub mvd0: f64,
    /// MVD with the private precision held fixed; always exceeds
    /// `3 / (2 (1 - alpha))`.
    pub mvd_star: f64,
    /// Elasticity of marginal cost at the equilibrium private precision.
    pub rho: f64,
    /// Absolute gap between the weighted-average form and the
    /// `eta * MVD - zeta + 1/(1+rho)` form; vanishes up to roundoff.
    pub weight_check: f64,
}

/// MWD under a linear information cost (the largest crowding-out effect):
/// `eta / (1 - alpha) - zeta + 1`. Constant in `tau_y`.
pub fn mwd0(p: &ModelParams, wc: &WelfareCoefficients) -> f64 {
    wc.eta / p.one_minus_alpha() - wc.zeta + 1.0
}

/// MWD with the private precision fixed at `phi_val > 0` (no crowding-out):
/// `eta (3 (1-alpha) phi + tau_y + tau_theta) / (2 (1-alpha)^2 phi) - zeta`.
pub fn mwd_star(
    p: &ModelParams,
    wc: &WelfareCoefficients,
    phi_val: f64,
    tau_y: f64,
) -> Result<f64, MwdError> {
    Ok(wc.eta * mvd_star_at(p, phi_val, tau_y)? - wc.zeta)
}

fn mvd_star_at(p: &ModelParams, phi_val: f64, tau_y: f64) -> Result<f64, MwdError> {
    if phi_val <= 0.0 {
        return Err(MwdError::Corner {
            corner_welfare_derivative: None,
        });
    }
    let oma = p.one_minus_alpha();
    Ok((3.0 * oma * phi_val + tau_y + p.tau_theta()) / (2.0 * oma.powi(2) * phi_val))
}

/// The marginal volatility with respect to dispersion along the path and its
/// two components `(mvd, mvd0, mvd_star)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MvdBreakdown {
    pub mvd: f64,
    pub mvd0: f64,
    pub mvd_star: f64,
}

/// MVD at the equilibrium induced by `tau_y`:
/// `mvd0 = 1/(1-alpha)`,
/// `mvd_star = 1/(1-alpha) + beta / (2 (1-alpha)^2 phi sqrt(C'(phi)))`, and
/// `mvd = (mvd0 + rho * mvd_star) / (1 + rho)`.
pub fn mvd(p: &ModelParams, cost: &CostSpec, tau_y: f64) -> Result<MvdBreakdown, MwdError> {
    let phi = solve_private_precision(p, cost, tau_y)?;
    if phi <= 0.0 {
        return Err(MwdError::Corner {
            corner_welfare_derivative: None,
        });
    }
    let e = cost.eval(phi);
    let oma = p.one_minus_alpha();
    let mvd0 = 1.0 / oma;
    let mvd_star = mvd0 + p.beta() / (2.0 * oma.powi(2) * phi * e.marginal.sqrt());
    assert!(
        mvd_star > 1.5 / oma,
        "fixed-precision MVD must exceed 3/(2(1-alpha))"
    );
    let rho = e.elasticity;
    Ok(MvdBreakdown {
        mvd: (mvd0 + rho * mvd_star) / (1.0 + rho),
        mvd0,
        mvd_star,
    })
}

/// Welfare derivative along the corner branch (`phi = 0`), where only the
/// volatility channel is active: `eta * beta^2 / ((1-alpha)^2 (tau_y + tau_theta)^2)`.
pub fn corner_welfare_derivative(p: &ModelParams, wc: &WelfareCoefficients, tau_y: f64) -> f64 {
    let oma = p.one_minus_alpha();
    wc.eta * (p.beta() / (oma * (tau_y + p.tau_theta()))).powi(2)
}

/// Full MWD breakdown at the equilibrium induced by `tau_y`, computed through
/// both algebraic routes; their gap is recorded in `weight_check`. The MWD
/// shares the sign of the welfare derivative in the public precision.
pub fn mwd(
    p: &ModelParams,
    wc: &WelfareCoefficients,
    cost: &CostSpec,
    tau_y: f64,
) -> Result<MwdBreakdown, MwdError> {
    let phi = solve_private_precision(p, cost, tau_y)?;
    if phi <= 0.0 {
        return Err(MwdError::Corner {
            corner_welfare_derivative: Some(corner_welfare_derivative(p, wc, tau_y)),
        });
    }
    let MvdBreakdown { mvd, mvd0, mvd_star } = self::mvd(p, cost, tau_y)?;
    let rho = cost.eval(phi).elasticity;
    let m0 = mwd0(p, wc);
    // On the equilibrium path the fixed-precision MWD is eta * MVD* - zeta;
    // building it from the same MVD* keeps the two assembled forms
    // comparable at roundoff level rather than at the root-solve tolerance.
    let m_star = wc.eta * mvd_star - wc.zeta;
    let weighted = (m0 + rho * m_star) / (1.0 + rho);
    let via_mvd = wc.eta * mvd - wc.zeta + 1.0 / (1.0 + rho);
    Ok(MwdBreakdown {
        mwd: weighted,
        mwd0: m0,
        mwd_star: m_star,
        mvd,
        mvd0,
        mvd_star,
        rho,
        weight_check: (weighted - via_mvd).abs(),
    })
}

/// The threshold `eta_lower(zeta, rho) = 2 (1-alpha) ((1+rho) zeta - 1) / (3 rho + 2)`.
///
/// The MWD is positive whenever `eta > max(eta_lower, 0)` and negative
/// whenever `eta < min(eta_lower, 0)`. `rho = f64::INFINITY` yields the limit
/// `2 (1-alpha) zeta / 3`.
pub fn eta_lower(p: &ModelParams, zeta: f64, rho: f64) -> f64 {
    debug_assert!(rho >= 0.0);
    let oma = p.one_minus_alpha();
    if rho.is_infinite() {
        2.0 * oma * zeta / 3.0
    } else {
        2.0 * oma * ((1.0 + rho) * zeta - 1.0) / (3.0 * rho + 2.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CostSpec;

    fn m0() -> ModelParams {
        ModelParams::new(0.0, 1.0, 1.0, 0.0).unwrap()
    }

    fn unit_weights() -> WelfareCoefficients {
        WelfareCoefficients::direct(1.0, 1.0)
    }

    #[test]
    fn linear_cost_mwd_values() {
        assert!((mwd0(&m0(), &unit_weights()) - 1.0).abs() < 1e-15);
        // Beauty-contest weights at r = 1/2.
        let p = ModelParams::new(0.5, 0.5, 1.0, 0.0).unwrap();
        let wc = WelfareCoefficients::direct(1.5, 0.5);
        assert!((mwd0(&p, &wc) - 0.5).abs() < 1e-15);
        // On the linear-cost boundary the MWD vanishes.
        let p = ModelParams::new(0.25, 1.0, 1.0, 0.0).unwrap();
        let wc = WelfareCoefficients::direct(1.8, (1.0 - 0.25) * (1.8 - 1.0));
        assert!(mwd0(&p, &wc).abs() < 1e-15);
    }

    #[test]
    fn fixed_precision_mwd_values() {
        let v = mwd_star(&m0(), &unit_weights(), 1.0, 1.0).unwrap();
        assert!((v - 1.5).abs() < 1e-15);
        let wc = WelfareCoefficients::direct(0.7, 0.0);
        let v = mwd_star(&m0(), &wc, 2.0, 0.5).unwrap();
        assert!((v + 0.7).abs() < 1e-15);
        // Large phi limit: 3 eta / (2 (1-alpha)) - zeta.
        let v = mwd_star(&m0(), &unit_weights(), 1e12, 1.0).unwrap();
        assert!((v - 0.5).abs() < 1e-9);
        assert!(mwd_star(&m0(), &unit_weights(), 0.0, 1.0).is_err());
    }

    #[test]
    fn mvd_at_unit_equilibrium() {
        let cost = CostSpec::isoelastic(1.0 / 9.0, 1.0).unwrap();
        let b = mvd(&m0(), &cost, 1.0).unwrap();
        assert!((b.mvd_star - 2.5).abs() < 1e-9);
        assert!((b.mvd - 1.75).abs() < 1e-9);
        assert!((b.mvd0 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mvd_collapses_for_linear_costs() {
        let cost = CostSpec::linear(0.04).unwrap();
        let b = mvd(&m0(), &cost, 1.0).unwrap();
        assert_eq!(b.mvd, b.mvd0);
        assert!(b.mvd_star > 1.5);
    }

    #[test]
    fn mwd_breakdown_at_unit_equilibrium() {
        let cost = CostSpec::isoelastic(1.0 / 9.0, 1.0).unwrap();
        let b = mwd(&m0(), &unit_weights(), &cost, 1.0).unwrap();
        assert!((b.mwd - 1.25).abs() < 1e-9);
        assert!((b.mwd0 - 1.0).abs() < 1e-15);
        assert!((b.mwd_star - 1.5).abs() < 1e-9);
        assert!(b.weight_check < 1e-10);
        assert!((b.rho - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mwd_equals_mwd0_for_linear_costs() {
        let cost = CostSpec::linear(0.04).unwrap();
        let b = mwd(&m0(), &unit_weights(), &cost, 1.0).unwrap();
        assert_eq!(b.mwd, b.mwd0);
    }

    #[test]
    fn pure_cost_reduction_channel() {
        // With zero welfare weights only the cost-saving term remains.
        let wc = WelfareCoefficients::direct(0.0, 0.0);
        let cost = CostSpec::isoelastic(0.5, 2.0).unwrap();
        let b = mwd(&m0(), &wc, &cost, 0.5).unwrap();
        assert!((b.mwd - 1.0 / (1.0 + b.rho)).abs() < 1e-12);
        assert!(b.mwd > 0.0);
    }

    #[test]
    fn corner_reports_welfare_derivative() {
        let cost = CostSpec::linear(1.0).unwrap();
        match mwd(&m0(), &unit_weights(), &cost, 1.0) {
            Err(MwdError::Corner {
                corner_welfare_derivative: Some(d),
            }) => {
                // eta * beta^2 / (tau_y + tau_theta)^2 = 1/4 at tau_y = 1.
                assert!((d - 0.25).abs() < 1e-15);
            }
            other => panic!("expected corner error, got {other:?}"),
        }
    }

    #[test]
    fn eta_lower_values() {
        let p = m0();
        assert!((eta_lower(&p, 2.0, 0.0) - 1.0).abs() < 1e-15);
        assert_eq!(eta_lower(&p, 1.0, 0.0), 0.0);
        assert!((eta_lower(&p, 1.0, f64::INFINITY) - 2.0 / 3.0).abs() < 1e-15);
        // Large finite rho approaches the infinite-elasticity limit.
        assert!((eta_lower(&p, 1.0, 1e12) - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn mwd_star_routes_agree_at_the_solved_root() {
        // The explicit-precision form of the fixed-precision MWD and the
        // marginal-cost form used on the path coincide at the equilibrium,
        // up to the root-solve tolerance.
        let p = ModelParams::new(-0.6, 1.4, 0.7, 0.0).unwrap();
        let wc = WelfareCoefficients::direct(1.2, -0.8);
        for (c, lambda, ty) in [(0.3, 0.5, 0.4), (1.0, 2.0, 2.0), (0.05, 5.0, 0.0)] {
            let cost = CostSpec::isoelastic(c, lambda).unwrap();
            let phi = solve_private_precision(&p, &cost, ty).unwrap();
            let explicit = mwd_star(&p, &wc, phi, ty).unwrap();
            let via_cost = wc.eta * mvd(&p, &cost, ty).unwrap().mvd_star - wc.zeta;
            assert!(
                (explicit - via_cost).abs() <= 1e-8 * (1.0 + explicit.abs()),
                "{explicit} vs {via_cost}"
            );
        }
    }

    #[test]
    fn dispersion_slope_identity_on_path() {
        // |dD/dtau_y| = (1 + rho) C'(phi) |phi'| along the path.
        use crate::equilibrium::crowding_out_slope;
        use crate::welfare::dispersion;
        let p = ModelParams::new(0.3, 1.0, 0.8, 0.0).unwrap();
        let cost = CostSpec::isoelastic(0.2, 2.0).unwrap();
        let ty = 0.7;
        let h = 1e-5;
        let up = solve_private_precision(&p, &cost, ty + h).unwrap();
        let dn = solve_private_precision(&p, &cost, ty - h).unwrap();
        let dd = (dispersion(&p, up, ty + h) - dispersion(&p, dn, ty - h)) / (2.0 * h);
        let phi = solve_private_precision(&p, &cost, ty).unwrap();
        let e = cost.eval(phi);
        let slope = crowding_out_slope(&p, &cost, ty).unwrap();
        let closed = (1.0 + e.elasticity) * e.marginal * slope;
        assert!((dd - closed).abs() < 1e-5 * dd.abs().max(1.0), "{dd} vs {closed}");
    }
}
