//! Optimal disclosure of public information under a known cost function:
//! classification of the welfare weights into four regions, the interior
//! threshold precision, and the optimal-precision verdict (net and gross).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{CostSpec, ModelParams, PrecisionChoice, WelfareCoefficients};
use crate::mwd::eta_lower;
use crate::oracles::{grid_optimal_tau_y, GridSpec};
use crate::welfare::{welfare_along_path, welfare_at_full_disclosure};

#[derive(Debug, Error)]
pub enum DisclosureError {
    #[error("no interior stationary point: regions I and III have monotone welfare")]
    NoInteriorStationaryPoint,
    #[error("closed-form thresholds require a constant-elasticity (linear or isoelastic) cost")]
    NotConstantElasticity,
}

/// The four classifications of `(zeta, eta)` for a given elasticity, plus the
/// boundary verdict for parameters sitting exactly on a region border (the
/// classification uses strict inequalities).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    /// `eta > max(eta_lower, 0)`: welfare strictly increasing, full
    /// disclosure optimal.
    #[serde(rename = "I_full")]
    FullDisclosure,
    /// `0 < eta < eta_lower`: welfare falls then rises; the optimum is at a
    /// corner, either no or full disclosure.
    #[serde(rename = "II_corner_compare")]
    CornerCompare,
    /// `eta < min(eta_lower, 0)`: welfare strictly decreasing, no disclosure
    /// optimal.
    #[serde(rename = "III_none")]
    NoDisclosure,
    /// `eta_lower < eta < 0`: welfare single-peaked at the interior
    /// threshold.
    #[serde(rename = "IV_interior")]
    Interior,
    #[serde(rename = "Boundary")]
    Boundary,
}

/// Classifies `(zeta, eta)` against the threshold `eta_lower(zeta, lambda)`
/// and zero. Exact equality with either boundary yields [`Region::Boundary`]
/// rather than silently picking a side.
pub fn classify_region(p: &ModelParams, wc: &WelfareCoefficients, lambda: f64) -> Region {
    let lower = eta_lower(p, wc.zeta, lambda);
    let eta = wc.eta;
    if eta == 0.0 || eta == lower {
        return Region::Boundary;
    }
    if eta > lower.max(0.0) {
        Region::FullDisclosure
    } else if eta > 0.0 {
        Region::CornerCompare
    } else if eta < lower.min(0.0) {
        Region::NoDisclosure
    } else {
        Region::Interior
    }
}

/// The interior stationary point of the welfare path in three coordinates:
/// the private precision at the stationary point, the total non-private
/// precision `tau_z = tau_y + tau_theta`, and the public precision itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauBars {
    pub tau_x: f64,
    pub tau_z: f64,
    /// `tau_z - tau_theta`; may be negative, meaning the stationary point is
    /// not attainable with a nonnegative public precision.
    pub tau_y: f64,
}

/// Closed form of the stationary point for a constant-elasticity cost in
/// regions II and IV.
///
/// For `lambda = 0` the stationary point is the corner where acquisition
/// stops: `tau_z = beta / sqrt(c)` and `tau_x = 0`. For `lambda > 0`:
/// `tau_x = (beta lambda eta / (2 sqrt(c) (1-alpha) ((1-alpha)((1+lambda) zeta - 1) - (1+lambda) eta)))^(2/(lambda+2))`
/// and `tau_z = tau_x (1-alpha)(3 lambda + 2)(eta_lower - eta) / (eta lambda)`.
pub fn tau_bar(
    p: &ModelParams,
    wc: &WelfareCoefficients,
    cost: &CostSpec,
) -> Result<TauBars, DisclosureError> {
    let lambda = cost
        .constant_elasticity()
        .ok_or(DisclosureError::NotConstantElasticity)?;
    let region = classify_region(p, wc, lambda);
    if !matches!(region, Region::CornerCompare | Region::Interior) {
        return Err(DisclosureError::NoInteriorStationaryPoint);
    }
    let c = cost.scale().expect("constant-elasticity cost has a scale");
    let oma = p.one_minus_alpha();
    let (tau_x, tau_z) = if lambda == 0.0 {
        (0.0, p.beta() / c.sqrt())
    } else {
        let denom = oma * ((1.0 + lambda) * wc.zeta - 1.0) - (1.0 + lambda) * wc.eta;
        let base = p.beta() * lambda * wc.eta / (2.0 * c.sqrt() * oma * denom);
        let tau_x = base.powf(2.0 / (lambda + 2.0));
        let tau_z = tau_x * oma * (3.0 * lambda + 2.0) * (eta_lower(p, wc.zeta, lambda) - wc.eta)
            / (wc.eta * lambda);
        (tau_x, tau_z)
    };
    Ok(TauBars {
        tau_x,
        tau_z,
        tau_y: tau_z - p.tau_theta(),
    })
}

/// How an optimal-precision verdict was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictMethod {
    /// Closed-form classification for a constant-elasticity cost.
    #[serde(rename = "closed-form")]
    ClosedForm,
    /// Grid search; used for costs without a constant elasticity, where the
    /// closed-form classification does not apply.
    #[serde(rename = "numeric-only")]
    NumericOnly,
    /// Boundary parameters: candidate optima are reported and a grid
    /// refinement is suggested instead of forcing a region.
    #[serde(rename = "boundary-compare")]
    BoundaryCompare,
}

/// A candidate optimum considered by a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub tau_y: PrecisionChoice,
    #[serde(rename = "W")]
    pub welfare: f64,
}

/// The optimal-precision verdict: region, optimum, thresholds when they
/// exist, and the two corner welfare values used in comparisons.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DisclosureVerdict {
    /// `None` for numeric-only verdicts, where no constant elasticity exists
    /// to classify against.
    pub region: Option<Region>,
    pub optimal_tau_y: PrecisionChoice,
    pub tau_bar_x: Option<f64>,
    pub tau_bar_z: Option<f64>,
    pub tau_bar_y: Option<f64>,
    /// Welfare at no disclosure, `W(phi(0), 0)`.
    #[serde(rename = "W_at_0")]
    pub welfare_at_zero: f64,
    /// Welfare in the full-disclosure limit.
    #[serde(rename = "W_at_inf")]
    pub welfare_at_infinity: f64,
    pub method: VerdictMethod,
    /// Set when the two corner candidates of region II tie exactly.
    pub tie: bool,
    /// Candidates reported for boundary verdicts.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidates: Option<Vec<Candidate>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Optimal precision of public information for the net welfare.
///
/// Constant-elasticity costs are classified in closed form; region II
/// compares `W(phi(0), 0)` against the analytic full-disclosure limit (never
/// a large finite proxy). Other costs fall back to a grid search flagged
/// `numeric-only`.
pub fn optimal_precision(
    p: &ModelParams,
    wc: &WelfareCoefficients,
    cost: &CostSpec,
) -> DisclosureVerdict {
    optimal_precision_with_grid(p, wc, cost, &GridSpec::default_tau())
}

/// [`optimal_precision`] with an explicit fallback grid.
pub fn optimal_precision_with_grid(
    p: &ModelParams,
    wc: &WelfareCoefficients,
    cost: &CostSpec,
    grid: &GridSpec,
) -> DisclosureVerdict {
    match cost.constant_elasticity() {
        Some(lambda) => closed_form_verdict(p, wc, cost, lambda),
        None => numeric_verdict(p, wc, cost, grid),
    }
}

/// Optimal precision for the gross welfare (information cost excluded).
///
/// For an isoelastic cost this is the net problem with
/// `zeta' = zeta + 1/(lambda + 1)`; costs without a constant elasticity are
/// handled by a grid search over the gross objective.
pub fn gross_optimal_precision(
    p: &ModelParams,
    wc: &WelfareCoefficients,
    cost: &CostSpec,
) -> DisclosureVerdict {
    match cost.constant_elasticity() {
        Some(lambda) => {
            let shifted = wc.with_zeta(wc.zeta + 1.0 / (lambda + 1.0));
            closed_form_verdict(p, &shifted, cost, lambda)
        }
        None => numeric_gross_verdict(p, wc, cost, &GridSpec::default_tau()),
    }
}

fn closed_form_verdict(
    p: &ModelParams,
    wc: &WelfareCoefficients,
    cost: &CostSpec,
    lambda: f64,
) -> DisclosureVerdict {
    let region = classify_region(p, wc, lambda);
    let w0 = welfare_along_path(p, wc, cost, 0.0).expect("corner welfare must solve");
    let w_inf = welfare_at_full_disclosure(p, wc);
    let bars = tau_bar(p, wc, cost).ok();
    let (tau_bar_x, tau_bar_z, tau_bar_y) = match &bars {
        Some(b) => (Some(b.tau_x), Some(b.tau_z), Some(b.tau_y)),
        None => (None, None, None),
    };
    let mut verdict = DisclosureVerdict {
        region: Some(region),
        optimal_tau_y: PrecisionChoice::Finite(0.0),
        tau_bar_x,
        tau_bar_z,
        tau_bar_y,
        welfare_at_zero: w0,
        welfare_at_infinity: w_inf,
        method: VerdictMethod::ClosedForm,
        tie: false,
        candidates: None,
        note: None,
    };
    match region {
        Region::FullDisclosure => verdict.optimal_tau_y = PrecisionChoice::Infinite,
        Region::NoDisclosure => verdict.optimal_tau_y = PrecisionChoice::Finite(0.0),
        Region::Interior => {
            let bar_y = bars.expect("region IV has a stationary point").tau_y;
            verdict.optimal_tau_y = PrecisionChoice::Finite(bar_y.max(0.0));
        }
        Region::CornerCompare => {
            let bar_z = bars.expect("region II has a stationary point").tau_z;
            if p.tau_theta() >= bar_z {
                // The dip lies entirely at negative public precision.
                verdict.optimal_tau_y = PrecisionChoice::Infinite;
            } else if w_inf > w0 {
                verdict.optimal_tau_y = PrecisionChoice::Infinite;
            } else if w0 > w_inf {
                verdict.optimal_tau_y = PrecisionChoice::Finite(0.0);
            } else {
                verdict.optimal_tau_y = PrecisionChoice::Infinite;
                verdict.tie = true;
                verdict.note = Some(
                    "no and full disclosure tie exactly; both corners attain the supremum".into(),
                );
            }
        }
        Region::Boundary => {
            verdict.method = VerdictMethod::BoundaryCompare;
            let candidates = vec![
                Candidate {
                    tau_y: PrecisionChoice::Finite(0.0),
                    welfare: w0,
                },
                Candidate {
                    tau_y: PrecisionChoice::Infinite,
                    welfare: w_inf,
                },
            ];
            verdict.optimal_tau_y = if w0 >= w_inf {
                PrecisionChoice::Finite(0.0)
            } else {
                PrecisionChoice::Infinite
            };
            verdict.tie = w0 == w_inf;
            verdict.candidates = Some(candidates);
            verdict.note = Some(
                "parameters sit exactly on a region boundary; corner candidates reported, \
                 refine with a grid sweep if an interior optimum is suspected"
                    .into(),
            );
        }
    }
    verdict
}

fn numeric_verdict(
    p: &ModelParams,
    wc: &WelfareCoefficients,
    cost: &CostSpec,
    grid: &GridSpec,
) -> DisclosureVerdict {
    let opt = grid_optimal_tau_y(p, wc, cost, grid);
    let w0 = welfare_along_path(p, wc, cost, 0.0).expect("corner welfare must solve");
    DisclosureVerdict {
        region: None,
        optimal_tau_y: opt.arg,
        tau_bar_x: None,
        tau_bar_z: None,
        tau_bar_y: None,
        welfare_at_zero: w0,
        welfare_at_infinity: welfare_at_full_disclosure(p, wc),
        method: VerdictMethod::NumericOnly,
        tie: false,
        candidates: None,
        note: Some("cost has no constant elasticity; optimum located by grid search".into()),
    }
}

fn numeric_gross_verdict(
    p: &ModelParams,
    wc: &WelfareCoefficients,
    cost: &CostSpec,
    grid: &GridSpec,
) -> DisclosureVerdict {
    use crate::equilibrium::solve_private_precision;
    use crate::oracles::{argmax_with_limit, scan_values};
    use crate::welfare::gross_welfare;

    let mut candidates = vec![0.0];
    candidates.extend(grid.values());
    let objective = |ty: f64| {
        let phi = solve_private_precision(p, cost, ty).expect("acquisition stage must solve");
        gross_welfare(p, wc, phi, ty)
    };
    let values = scan_values(&candidates, objective);
    let limit = welfare_at_full_disclosure(p, wc);
    let opt = argmax_with_limit(&candidates, &values, Some(limit));
    DisclosureVerdict {
        region: None,
        optimal_tau_y: opt.arg,
        tau_bar_x: None,
        tau_bar_z: None,
        tau_bar_y: None,
        welfare_at_zero: objective(0.0),
        welfare_at_infinity: limit,
        method: VerdictMethod::NumericOnly,
        tie: false,
        candidates: None,
        note: Some("cost has no constant elasticity; optimum located by grid search".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CostSpec;

    fn m0() -> ModelParams {
        ModelParams::new(0.0, 1.0, 1.0, 0.0).unwrap()
    }

    #[test]
    fn classification_examples() {
        let p = m0();
        assert_eq!(
            classify_region(&p, &WelfareCoefficients::direct(1.0, 1.0), 1.0),
            Region::FullDisclosure
        );
        assert_eq!(
            classify_region(&p, &WelfareCoefficients::direct(1.0, -1.0), 1.0),
            Region::NoDisclosure
        );
        assert_eq!(
            classify_region(&p, &WelfareCoefficients::direct(0.0, -0.2), 1.0),
            Region::Interior
        );
        // eta_lower(2, 1) = 2*(2*2-1)/5 = 1.2 > eta = 1 > 0.
        assert_eq!(
            classify_region(&p, &WelfareCoefficients::direct(2.0, 1.0), 1.0),
            Region::CornerCompare
        );
        assert_eq!(
            classify_region(&p, &WelfareCoefficients::direct(2.0, 0.0), 1.0),
            Region::Boundary
        );
        let lower = eta_lower(&p, 2.0, 1.0);
        assert_eq!(
            classify_region(&p, &WelfareCoefficients::direct(2.0, lower), 1.0),
            Region::Boundary
        );
    }

    #[test]
    fn interior_threshold_closed_form() {
        let p = m0();
        let wc = WelfareCoefficients::direct(0.0, -0.2);
        let cost = CostSpec::isoelastic(1.0, 1.0).unwrap();
        let bars = tau_bar(&p, &wc, &cost).unwrap();
        assert!((bars.tau_x - (1.0f64 / 6.0).powf(2.0 / 3.0)).abs() < 1e-12);
        assert!((bars.tau_x - 0.30286).abs() < 1e-5);
        assert!((bars.tau_z - 1.5143).abs() < 1e-4);
        assert!((bars.tau_y - 0.5143).abs() < 1e-4);
    }

    #[test]
    fn threshold_routes_agree() {
        // tau_z from the closed form equals phi_inverse(tau_x) + tau_theta.
        use crate::equilibrium::phi_inverse;
        let p = ModelParams::new(0.2, 1.3, 0.7, 0.0).unwrap();
        let wc = WelfareCoefficients::direct(-0.5, -0.1);
        let cost = CostSpec::isoelastic(0.6, 2.0).unwrap();
        assert_eq!(classify_region(&p, &wc, 2.0), Region::Interior);
        let bars = tau_bar(&p, &wc, &cost).unwrap();
        let via_inverse = phi_inverse(&p, &cost, bars.tau_x) + p.tau_theta();
        assert!((bars.tau_z - via_inverse).abs() < 1e-9 * (1.0 + bars.tau_z.abs()));
    }

    #[test]
    fn linear_cost_threshold_branch() {
        let p = m0();
        // Region II with lambda = 0 requires eta_lower(zeta, 0) > eta > 0.
        let wc = WelfareCoefficients::direct(2.0, 0.5);
        let cost = CostSpec::linear(0.04).unwrap();
        assert_eq!(classify_region(&p, &wc, 0.0), Region::CornerCompare);
        let bars = tau_bar(&p, &wc, &cost).unwrap();
        assert_eq!(bars.tau_x, 0.0);
        assert!((bars.tau_z - 5.0).abs() < 1e-12);
        assert!((bars.tau_y - 4.0).abs() < 1e-12);
    }

    #[test]
    fn threshold_requires_interior_regions() {
        let p = m0();
        let cost = CostSpec::isoelastic(1.0, 1.0).unwrap();
        assert!(matches!(
            tau_bar(&p, &WelfareCoefficients::direct(1.0, 1.0), &cost),
            Err(DisclosureError::NoInteriorStationaryPoint)
        ));
        assert!(matches!(
            tau_bar(&p, &WelfareCoefficients::direct(1.0, -1.0), &cost),
            Err(DisclosureError::NoInteriorStationaryPoint)
        ));
        let tab = CostSpec::tabulated([(0.0, 0.1), (1.0, 0.2)]).unwrap();
        assert!(matches!(
            tau_bar(&p, &WelfareCoefficients::direct(0.0, -0.2), &tab),
            Err(DisclosureError::NotConstantElasticity)
        ));
    }

    #[test]
    fn verdict_region_one() {
        let p = ModelParams::new(-0.5, 0.5, 1.0, 0.0).unwrap();
        let wc = WelfareCoefficients::direct(1.0, 1.0);
        let cost = CostSpec::isoelastic(1.0, 1.0).unwrap();
        let v = optimal_precision(&p, &wc, &cost);
        assert_eq!(v.region, Some(Region::FullDisclosure));
        assert_eq!(v.optimal_tau_y, PrecisionChoice::Infinite);
        assert_eq!(v.method, VerdictMethod::ClosedForm);
    }

    #[test]
    fn verdict_region_three() {
        let v = optimal_precision(
            &m0(),
            &WelfareCoefficients::direct(1.0, -1.0),
            &CostSpec::isoelastic(1.0, 1.0).unwrap(),
        );
        assert_eq!(v.region, Some(Region::NoDisclosure));
        assert_eq!(v.optimal_tau_y, PrecisionChoice::Finite(0.0));
    }

    #[test]
    fn verdict_region_four() {
        let v = optimal_precision(
            &m0(),
            &WelfareCoefficients::direct(0.0, -0.2),
            &CostSpec::isoelastic(1.0, 1.0).unwrap(),
        );
        assert_eq!(v.region, Some(Region::Interior));
        let got = v.optimal_tau_y.as_finite().unwrap();
        assert!((got - 0.5143).abs() < 1e-4);
    }

    #[test]
    fn verdict_boundary_reports_candidates() {
        let v = optimal_precision(
            &m0(),
            &WelfareCoefficients::direct(2.0, 0.0),
            &CostSpec::isoelastic(1.0, 1.0).unwrap(),
        );
        assert_eq!(v.region, Some(Region::Boundary));
        assert_eq!(v.method, VerdictMethod::BoundaryCompare);
        assert_eq!(v.candidates.as_ref().map(Vec::len), Some(2));
        assert!(v.note.is_some());
    }

    #[test]
    fn numeric_fallback_for_tabulated_costs() {
        let p = m0();
        // A flat tabulated marginal cost behaves like the linear family.
        let tab = CostSpec::tabulated([(0.0, 0.04), (20.0, 0.04)]).unwrap();
        let wc = WelfareCoefficients::direct(1.0, 1.0);
        let v = optimal_precision(&p, &wc, &tab);
        assert_eq!(v.region, None);
        assert_eq!(v.method, VerdictMethod::NumericOnly);
        assert_eq!(v.optimal_tau_y, PrecisionChoice::Infinite);
    }

    #[test]
    fn gross_shift_vanishes_for_large_elasticity() {
        // As lambda grows the gross shift 1/(lambda+1) disappears, so the
        // gross and net classifications coincide.
        let p = m0();
        let wc = WelfareCoefficients::direct(1.0, 1.0);
        let cost = CostSpec::isoelastic(1.0, 1e9).unwrap();
        let net = optimal_precision(&p, &wc, &cost);
        let gross = gross_optimal_precision(&p, &wc, &cost);
        assert_eq!(net.region, gross.region);
    }
}
