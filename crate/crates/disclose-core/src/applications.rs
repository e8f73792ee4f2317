//! Application presets: Cournot competition and the beauty-contest
//! coordination game, with their closed-form disclosure thresholds and a
//! battery of preset-level consistency checks.

use serde::{Deserialize, Serialize};

use crate::equilibrium::{solve_private_precision, SolveError};
use crate::model::{CostSpec, ModelError, ModelParams, PrecisionChoice, WelfareCoefficients};
use crate::mwd::mwd;
use crate::optimal::{classify_region, gross_optimal_precision, optimal_precision, Region};
use crate::robust::robust_precision;
use crate::welfare::welfare_at_full_disclosure;

/// Which application a preset instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresetKind {
    /// Quantity competition with inverse demand slope `delta > 0`; welfare is
    /// the net total profit.
    Cournot { delta: f64 },
    /// Coordination game with complementarity `r in (0, 1)`; welfare is the
    /// negative mean squared error of actions from the state, net of costs.
    Beauty { r: f64 },
}

/// A ready-to-run parameterization: game primitives, welfare weights, and
/// the gross-welfare weights for the active cost elasticity.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ApplicationPreset {
    pub kind: PresetKind,
    pub params: ModelParams,
    pub welfare: WelfareCoefficients,
    /// Net weights with `zeta` shifted by `1/(lambda+1)`; valid for the
    /// `lambda` recorded below.
    pub gross_welfare: WelfareCoefficients,
    pub lambda: f64,
}

impl ApplicationPreset {
    /// Cournot preset: `alpha = -delta/2`, `beta = 1/2`, weights `(1, 1)`.
    pub fn cournot(delta: f64, lambda: f64, tau_theta: f64) -> Result<Self, ModelError> {
        if !(delta > 0.0) {
            return Err(ModelError::NonFinite {
                name: "delta (must be > 0)",
                value: delta,
            });
        }
        let params = ModelParams::new(-delta / 2.0, 0.5, tau_theta, 0.0)?;
        let welfare = WelfareCoefficients::preset(1.0, 1.0);
        Ok(Self {
            kind: PresetKind::Cournot { delta },
            params,
            welfare,
            gross_welfare: welfare.with_zeta(1.0 + 1.0 / (lambda + 1.0)),
            lambda,
        })
    }

    /// Beauty-contest preset: `alpha = r`, `beta = 1 - r`, weights
    /// `(1 + r, 1 - r)`.
    ///
    /// These weights correspond to the squared-error material benefit scaled
    /// by `1 - r`; see [`ApplicationPreset::beauty_unscaled`] for the
    /// unscaled variant.
    pub fn beauty(r: f64, lambda: f64, tau_theta: f64) -> Result<Self, ModelError> {
        Self::beauty_impl(r, lambda, tau_theta, false)
    }

    /// Beauty-contest variant with the weights `((1+r)/(1-r), 1)` induced by
    /// the raw squared-error material benefit `-(a_i - theta)^2` without the
    /// `1 - r` scaling. Sign conclusions coincide with [`Self::beauty`];
    /// magnitudes differ by the factor `1 - r`. Not the default.
    pub fn beauty_unscaled(r: f64, lambda: f64, tau_theta: f64) -> Result<Self, ModelError> {
        Self::beauty_impl(r, lambda, tau_theta, true)
    }

    fn beauty_impl(r: f64, lambda: f64, tau_theta: f64, unscaled: bool) -> Result<Self, ModelError> {
        if !(r > 0.0 && r < 1.0) {
            return Err(ModelError::NonFinite {
                name: "r (must be in (0, 1))",
                value: r,
            });
        }
        let params = ModelParams::new(r, 1.0 - r, tau_theta, 0.0)?;
        let welfare = if unscaled {
            WelfareCoefficients::preset((1.0 + r) / (1.0 - r), 1.0)
        } else {
            WelfareCoefficients::preset(1.0 + r, 1.0 - r)
        };
        Ok(Self {
            kind: PresetKind::Beauty { r },
            params,
            welfare,
            gross_welfare: welfare.with_zeta(welfare.zeta + 1.0 / (lambda + 1.0)),
            lambda,
        })
    }
}

/// Cournot disclosure thresholds in the demand slope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CournotThresholds {
    /// Below this slope the net profit increases with public precision for
    /// every public precision; infinite when the cost is linear.
    pub delta_star: f64,
    /// Full disclosure is optimal below this slope, no disclosure above it.
    /// Depends on the equilibrium acquisition at zero disclosure, hence on
    /// the cost scale and the prior precision.
    pub delta_double_star: f64,
}

/// `delta_star = 1 + 2/lambda` and
/// `delta_double_star = 2 sqrt((1 + 1/lambda)(1 + 1/lambda + tau_theta/phi(0))) + 2/lambda`,
/// with `phi(0)` evaluated at the given `delta`.
pub fn cournot_thresholds(
    delta: f64,
    lambda: f64,
    c: f64,
    tau_theta: f64,
) -> Result<CournotThresholds, SolveError> {
    if lambda == 0.0 {
        // Linear cost: the net profit always increases with public precision.
        return Ok(CournotThresholds {
            delta_star: f64::INFINITY,
            delta_double_star: f64::INFINITY,
        });
    }
    let preset =
        ApplicationPreset::cournot(delta, lambda, tau_theta).expect("validated arguments");
    let cost = CostSpec::isoelastic(c, lambda).expect("validated arguments");
    let phi0 = solve_private_precision(&preset.params, &cost, 0.0)?;
    let a = 1.0 + 1.0 / lambda;
    let delta_double_star = 2.0 * (a * (a + tau_theta / phi0)).sqrt() + 2.0 / lambda;
    Ok(CournotThresholds {
        delta_star: 1.0 + 2.0 / lambda,
        delta_double_star,
    })
}

/// Beauty-contest thresholds in the complementarity `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeautyThresholds {
    /// Net welfare increases with public precision for every `r` below
    /// `(lambda/2 + 1) / (lambda + 1)`.
    pub r_star: f64,
    /// Gross welfare increases for every `r` below `lambda / (2 (lambda + 1))`.
    pub r_gross: f64,
}

pub fn beauty_thresholds(lambda: f64) -> BeautyThresholds {
    BeautyThresholds {
        r_star: (lambda / 2.0 + 1.0) / (lambda + 1.0),
        r_gross: lambda / (2.0 * (lambda + 1.0)),
    }
}

/// One preset-level consistency check with a human-readable witness.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorollaryCheck {
    pub name: String,
    pub passed: bool,
    pub witness: String,
}

/// Outcome of running the optimal, gross, and robust machinery on a preset
/// and comparing each against its closed-form threshold claims.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorollaryReport {
    pub preset: PresetKind,
    pub lambda: f64,
    pub c: f64,
    pub tau_theta: f64,
    pub checks: Vec<CorollaryCheck>,
    pub passed: bool,
}

fn push(checks: &mut Vec<CorollaryCheck>, name: &str, passed: bool, witness: String) {
    checks.push(CorollaryCheck {
        name: name.to_string(),
        passed,
        witness,
    });
}

/// Runs the disclosure machinery on a preset and asserts the threshold
/// claims; failures indicate implementation bugs and are returned as report
/// entries rather than errors.
pub fn corollary_checks(preset: &ApplicationPreset, c: f64) -> Result<CorollaryReport, SolveError> {
    let p = &preset.params;
    let wc = &preset.welfare;
    let lambda = preset.lambda;
    let cost = CostSpec::isoelastic(c, lambda).expect("cost scale validated upstream");
    let mut checks = Vec::new();

    let region = classify_region(p, wc, lambda);
    let verdict = optimal_precision(p, wc, &cost);
    let robust = robust_precision(p, wc, PrecisionChoice::Infinite);

    match preset.kind {
        PresetKind::Cournot { delta } => {
            let th = cournot_thresholds(delta, lambda, c, p.tau_theta())?;
            let expect_increasing = lambda == 0.0 || delta < th.delta_star;
            push(
                &mut checks,
                "monotone_below_delta_star",
                expect_increasing == (region == Region::FullDisclosure),
                format!(
                    "delta = {delta}, delta_star = {}, region = {region:?}",
                    th.delta_star
                ),
            );
            if (delta - th.delta_double_star).abs() > 1e-9 * (1.0 + delta) {
                let expect_full = delta < th.delta_double_star;
                let got_full = verdict.optimal_tau_y.is_infinite();
                push(
                    &mut checks,
                    "full_disclosure_below_delta_double_star",
                    expect_full == got_full,
                    format!(
                        "delta = {delta}, delta_double_star = {}, optimal = {}",
                        th.delta_double_star, verdict.optimal_tau_y
                    ),
                );
            }
            let robust_ok = matches!(
                &robust,
                Ok(v) if v.robust_tau_y == PrecisionChoice::Infinite
            );
            push(
                &mut checks,
                "full_disclosure_robust_for_all_delta",
                robust_ok,
                format!("robust verdict = {robust:?}"),
            );
        }
        PresetKind::Beauty { r } => {
            let th = beauty_thresholds(lambda);
            push(
                &mut checks,
                "monotone_below_r_star",
                (r < th.r_star) == (region == Region::FullDisclosure),
                format!("r = {r}, r_star = {}, region = {region:?}", th.r_star),
            );
            let gross = gross_optimal_precision(p, wc, &cost);
            let gross_region = gross.region;
            push(
                &mut checks,
                "gross_monotone_below_r_gross",
                (r < th.r_gross) == (gross_region == Some(Region::FullDisclosure)),
                format!(
                    "r = {r}, r_gross = {}, gross region = {gross_region:?}",
                    th.r_gross
                ),
            );
            let robust_ok = matches!(
                &robust,
                Ok(v) if v.robust_tau_y == PrecisionChoice::Infinite
            );
            push(
                &mut checks,
                "worst_case_welfare_increasing",
                robust_ok,
                format!("robust verdict = {robust:?}"),
            );
        }
    }

    // The welfare at the full-disclosure limit must dominate the path
    // whenever the region-I classification holds (spot check at a few
    // precisions).
    if region == Region::FullDisclosure {
        let w_inf = welfare_at_full_disclosure(p, wc);
        let mut dominated = true;
        for ty in [0.0, 0.5, 2.0, 25.0] {
            let w = crate::welfare::welfare_along_path(p, wc, &cost, ty)?;
            if w > w_inf {
                dominated = false;
            }
        }
        push(
            &mut checks,
            "full_disclosure_limit_dominates_path",
            dominated,
            format!("W_at_inf = {w_inf}"),
        );
    }

    // The sign object agrees with the classification at a small precision.
    if let Ok(b) = mwd(p, wc, &cost, 1e-3) {
        let consistent = match region {
            Region::FullDisclosure => b.mwd > 0.0,
            Region::NoDisclosure => b.mwd < 0.0,
            _ => true,
        };
        push(
            &mut checks,
            "mwd_sign_consistent_with_region",
            consistent,
            format!("mwd(1e-3) = {}", b.mwd),
        );
    }

    let passed = checks.iter().all(|c| c.passed);
    Ok(CorollaryReport {
        preset: preset.kind,
        lambda,
        c,
        tau_theta: p.tau_theta(),
        checks,
        passed,
    })
}
