//! Worst-case welfare over convex cost families and robust disclosure.
//!
//! The worst-case cost function is linear: among all convex costs inducing
//! the same private precision, the linear one has the highest total cost. The
//! worst-case welfare therefore reduces to minimizing
//! `W0 = eta V + (zeta - 1) D` over the private precision up to the cap
//! `kappa`, which this module does analytically from the sign structure of
//! the partial derivatives.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{ModelParams, PrecisionChoice, WelfareCoefficients};
use crate::welfare::{dispersion, volatility, volatility_limit};

#[derive(Debug, Error)]
pub enum RobustError {
    /// The analytic case split excludes `eta = 0`; the worst case is then
    /// driven by `(zeta - 1) inf D` and is handed to the grid oracle.
    #[error("eta = 0 is outside the analytic robust case split; use the grid oracle")]
    EtaZero,
}

/// Welfare under the worst-case (linear) cost when the acquired private
/// precision is `tau_x`: `W0 = eta V + (zeta - 1) D`.
pub fn w0(p: &ModelParams, wc: &WelfareCoefficients, tau_x: f64, tau_y: f64) -> f64 {
    wc.eta * volatility(p, tau_x, tau_y) + (wc.zeta - 1.0) * dispersion(p, tau_x, tau_y)
}

/// Limit of `W0` as the acquired precision grows without bound: the
/// dispersion vanishes and the volatility tends to its limit, leaving
/// `eta * beta^2 / ((1 - alpha)^2 tau_theta)` independently of `tau_y`.
pub fn w0_unbounded_acquisition_limit(p: &ModelParams, wc: &WelfareCoefficients) -> f64 {
    wc.eta * volatility_limit(p)
}

/// The stationary point of `W0` in the private precision at fixed `tau_y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InteriorStationary {
    /// `tau_x = -(zeta - 1)(tau_y + tau_theta) / (2 eta - (1-alpha)(zeta-1)) >= 0`.
    At(f64),
    /// The stationary point lies at negative precision.
    Negative,
    /// `2 eta - (1 - alpha)(zeta - 1) = 0`: the derivative never changes sign.
    DegenerateDenominator,
}

impl InteriorStationary {
    pub fn value(&self) -> Option<f64> {
        match self {
            Self::At(x) => Some(*x),
            _ => None,
        }
    }
}

/// Stationary point of `W0(., tau_y)`; a minimum when
/// `2 eta - (1-alpha)(zeta-1) > 0` and a maximum when it is negative.
pub fn interior_minimizer(
    p: &ModelParams,
    wc: &WelfareCoefficients,
    tau_y: f64,
) -> InteriorStationary {
    let denom = 2.0 * wc.eta - p.one_minus_alpha() * (wc.zeta - 1.0);
    if denom == 0.0 {
        return InteriorStationary::DegenerateDenominator;
    }
    let f = -(wc.zeta - 1.0) * (tau_y + p.tau_theta()) / denom;
    if f >= 0.0 {
        InteriorStationary::At(f)
    } else {
        InteriorStationary::Negative
    }
}

/// Worst-case welfare at one public precision and the precision attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorstCase {
    pub value: f64,
    pub argmin_tau_x: PrecisionChoice,
}

/// `F_kappa(tau_y) = inf over tau_x <= kappa of W0(tau_x, tau_y)`.
///
/// The derivative of `W0` in `tau_x` changes sign at most once, so the
/// infimum is attained among the endpoints and the interior stationary point;
/// the unbounded cap uses the analytic limit rather than a large proxy.
pub fn worst_case_welfare(
    p: &ModelParams,
    wc: &WelfareCoefficients,
    tau_y: f64,
    kappa: PrecisionChoice,
) -> WorstCase {
    let mut candidates: Vec<(PrecisionChoice, f64)> = Vec::with_capacity(3);
    candidates.push((PrecisionChoice::Finite(0.0), w0(p, wc, 0.0, tau_y)));
    if let InteriorStationary::At(f) = interior_minimizer(p, wc, tau_y) {
        let in_range = match kappa {
            PrecisionChoice::Finite(k) => f > 0.0 && f < k,
            PrecisionChoice::Infinite => f > 0.0,
        };
        if in_range {
            candidates.push((PrecisionChoice::Finite(f), w0(p, wc, f, tau_y)));
        }
    }
    match kappa {
        PrecisionChoice::Finite(k) => {
            candidates.push((PrecisionChoice::Finite(k), w0(p, wc, k, tau_y)));
        }
        PrecisionChoice::Infinite => {
            candidates.push((
                PrecisionChoice::Infinite,
                w0_unbounded_acquisition_limit(p, wc),
            ));
        }
    }
    let (argmin_tau_x, value) = candidates
        .into_iter()
        .reduce(|best, cand| if cand.1 < best.1 { cand } else { best })
        .expect("candidate set is nonempty");
    WorstCase {
        value,
        argmin_tau_x,
    }
}

/// Peak of `F_kappa` in the public precision for a finite cap:
/// `g(kappa) = -(1-alpha)(3 eta - 2 (1-alpha)(zeta-1)) kappa / eta - tau_theta`.
pub fn g_of_kappa(p: &ModelParams, wc: &WelfareCoefficients, kappa: f64) -> f64 {
    let oma = p.one_minus_alpha();
    -oma * (3.0 * wc.eta - 2.0 * oma * (wc.zeta - 1.0)) * kappa / wc.eta - p.tau_theta()
}

/// Monotonicity of the worst-case welfare in the public precision at the
/// verdict's cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FBehavior {
    Increasing,
    Constant,
    Decreasing,
    /// Single-peaked: increasing up to `g(kappa)`, decreasing beyond.
    NonMonotone,
}

/// Where the infimum over the private precision sits as `tau_y` varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MinimizerPath {
    AtZero,
    AtKappa,
    /// At the interior stationary point, capped at `kappa`.
    Interior,
    /// The infimum switches between the two endpoints as `tau_y` varies.
    EndpointDependent,
}

/// The robust-disclosure verdict for a given cap on acquirable precision.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RobustVerdict {
    pub kappa: PrecisionChoice,
    pub robust_tau_y: PrecisionChoice,
    pub f_behavior: FBehavior,
    pub minimizer_path: MinimizerPath,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g_kappa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// The `kappa`-robust precision of public information.
///
/// `eta > 0`: the worst-case welfare strictly increases, full disclosure is
/// robust for every cap. `eta < 0` with `eta <= 2(1-alpha)(zeta-1)/3`: it
/// strictly decreases (constant at an unbounded cap), no disclosure is
/// robust. Otherwise it is single-peaked at `g(kappa)` for finite caps, and
/// at an unbounded cap it is constant or increasing depending on
/// `eta` versus `(1-alpha)(zeta-1)/2`.
pub fn robust_precision(
    p: &ModelParams,
    wc: &WelfareCoefficients,
    kappa: PrecisionChoice,
) -> Result<RobustVerdict, RobustError> {
    if wc.eta == 0.0 {
        return Err(RobustError::EtaZero);
    }
    let oma = p.one_minus_alpha();
    let two_thirds_bound = 2.0 * oma * (wc.zeta - 1.0) / 3.0;
    if wc.eta > 0.0 {
        let path = if wc.zeta < 1.0 {
            MinimizerPath::Interior
        } else {
            MinimizerPath::AtZero
        };
        return Ok(RobustVerdict {
            kappa,
            robust_tau_y: PrecisionChoice::Infinite,
            f_behavior: FBehavior::Increasing,
            minimizer_path: path,
            g_kappa: None,
            note: None,
        });
    }
    // eta < 0 from here on.
    if wc.eta <= two_thirds_bound {
        let (f_behavior, path) = match kappa {
            PrecisionChoice::Finite(_) => {
                let path = if wc.zeta <= 1.0 {
                    MinimizerPath::AtKappa
                } else {
                    MinimizerPath::EndpointDependent
                };
                (FBehavior::Decreasing, path)
            }
            PrecisionChoice::Infinite => (FBehavior::Constant, MinimizerPath::AtKappa),
        };
        return Ok(RobustVerdict {
            kappa,
            robust_tau_y: PrecisionChoice::Finite(0.0),
            f_behavior,
            minimizer_path: path,
            g_kappa: None,
            note: matches!(f_behavior, FBehavior::Constant).then(|| {
                "worst-case welfare is constant at an unbounded cap; every precision attains \
                 the supremum"
                    .into()
            }),
        });
    }
    // 0 > eta > 2(1-alpha)(zeta-1)/3, which forces zeta < 1.
    let half_bound = oma * (wc.zeta - 1.0) / 2.0;
    match kappa {
        PrecisionChoice::Finite(k) => {
            let g = g_of_kappa(p, wc, k);
            let f_behavior = if g > 0.0 {
                FBehavior::NonMonotone
            } else {
                FBehavior::Decreasing
            };
            let path = if wc.eta <= half_bound {
                MinimizerPath::AtKappa
            } else {
                MinimizerPath::Interior
            };
            Ok(RobustVerdict {
                kappa,
                robust_tau_y: PrecisionChoice::Finite(g.max(0.0)),
                f_behavior,
                minimizer_path: path,
                g_kappa: Some(g),
                note: None,
            })
        }
        PrecisionChoice::Infinite => {
            if wc.eta <= half_bound {
                Ok(RobustVerdict {
                    kappa,
                    robust_tau_y: PrecisionChoice::Finite(0.0),
                    f_behavior: FBehavior::Constant,
                    minimizer_path: MinimizerPath::AtKappa,
                    g_kappa: None,
                    note: Some(
                        "worst-case welfare is constant at an unbounded cap; every precision \
                         attains the supremum"
                            .into(),
                    ),
                })
            } else {
                Ok(RobustVerdict {
                    kappa,
                    robust_tau_y: PrecisionChoice::Infinite,
                    f_behavior: FBehavior::Increasing,
                    minimizer_path: MinimizerPath::Interior,
                    g_kappa: None,
                    note: None,
                })
            }
        }
    }
}

/// Monotonicity of the welfare in public precision across every convex cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostFreeMonotonicity {
    /// The welfare strictly increases with public precision for every convex
    /// cost while acquisition stays interior.
    AlwaysIncreasing,
    /// The welfare strictly decreases for every convex cost.
    AlwaysDecreasing,
    /// Some convex cost makes the welfare non-monotone.
    CostDependent,
}

/// Classifies `(zeta, eta)` by whether the welfare is monotone in the public
/// precision regardless of the cost function. The inequalities mix weak and
/// strict comparisons piece by piece.
pub fn classify_cost_free_monotonicity(
    p: &ModelParams,
    wc: &WelfareCoefficients,
) -> CostFreeMonotonicity {
    let oma = p.one_minus_alpha();
    let (zeta, eta) = (wc.zeta, wc.eta);
    let increasing = if zeta <= 0.0 {
        eta >= 0.0
    } else if zeta < 3.0 {
        eta >= 2.0 * oma * zeta / 3.0
    } else {
        eta > oma * (zeta - 1.0)
    };
    if increasing {
        return CostFreeMonotonicity::AlwaysIncreasing;
    }
    let decreasing = if zeta <= 1.0 {
        eta < oma * (zeta - 1.0)
    } else {
        eta <= 0.0
    };
    if decreasing {
        CostFreeMonotonicity::AlwaysDecreasing
    } else {
        CostFreeMonotonicity::CostDependent
    }
}
