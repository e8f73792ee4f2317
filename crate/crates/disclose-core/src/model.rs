//! Game primitives: model parameters, information-cost functions, and the
//! mapping from quadratic material benefits to the dispersion/volatility
//! welfare weights (ζ, η).
//!
//! All types are immutable values after construction and every operation is
//! pure, so they are safe to share across threads without synchronization.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised while constructing or validating model primitives.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("alpha must be < 1, got {0}")]
    AlphaOutOfRange(f64),
    #[error("beta must be > 0, got {0}")]
    NonPositiveBeta(f64),
    #[error("tau_theta must be > 0, got {0}")]
    NonPositiveTauTheta(f64),
    #[error("cost scale c must be > 0, got {0}")]
    NonPositiveCostScale(f64),
    #[error("marginal-cost elasticity lambda must be >= 0, got {0}")]
    NegativeElasticity(f64),
    #[error("tabulated cost: {0}")]
    TabulatedCost(String),
    #[error("precision must be a finite value >= 0, got {0}")]
    InvalidPrecision(f64),
    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },
}

fn require_finite(name: &'static str, value: f64) -> Result<f64, ModelError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(ModelError::NonFinite { name, value })
    }
}

/// Primitives of the quadratic game: strategic interaction `alpha` (< 1),
/// state sensitivity `beta` (> 0), prior precision `tau_theta` (> 0), and
/// prior mean `theta_bar`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelParamsRepr", into = "ModelParamsRepr")]
pub struct ModelParams {
    alpha: f64,
    beta: f64,
    tau_theta: f64,
    theta_bar: f64,
}

#[derive(Serialize, Deserialize)]
struct ModelParamsRepr {
    alpha: f64,
    beta: f64,
    tau_theta: f64,
    #[serde(default)]
    theta_bar: f64,
}

impl TryFrom<ModelParamsRepr> for ModelParams {
    type Error = ModelError;
    fn try_from(r: ModelParamsRepr) -> Result<Self, ModelError> {
        ModelParams::new(r.alpha, r.beta, r.tau_theta, r.theta_bar)
    }
}

impl From<ModelParams> for ModelParamsRepr {
    fn from(p: ModelParams) -> Self {
        ModelParamsRepr {
            alpha: p.alpha,
            beta: p.beta,
            tau_theta: p.tau_theta,
            theta_bar: p.theta_bar,
        }
    }
}

impl ModelParams {
    /// Validates `alpha < 1`, `beta > 0`, `tau_theta > 0`.
    ///
    /// A non-positive `beta` is rejected rather than sign-normalized: silently
    /// flipping the sign would corrupt the (ζ, η) mapping of welfare weights.
    pub fn new(alpha: f64, beta: f64, tau_theta: f64, theta_bar: f64) -> Result<Self, ModelError> {
        require_finite("alpha", alpha)?;
        require_finite("beta", beta)?;
        require_finite("tau_theta", tau_theta)?;
        require_finite("theta_bar", theta_bar)?;
        if alpha >= 1.0 {
            return Err(ModelError::AlphaOutOfRange(alpha));
        }
        if beta <= 0.0 {
            return Err(ModelError::NonPositiveBeta(beta));
        }
        if tau_theta <= 0.0 {
            return Err(ModelError::NonPositiveTauTheta(tau_theta));
        }
        Ok(Self {
            alpha,
            beta,
            tau_theta,
            theta_bar,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn tau_theta(&self) -> f64 {
        self.tau_theta
    }

    pub fn theta_bar(&self) -> f64 {
        self.theta_bar
    }

    /// `1 - alpha`, strictly positive by construction.
    pub fn one_minus_alpha(&self) -> f64 {
        1.0 - self.alpha
    }
}

/// Pointwise evaluation of an information-cost function: total cost `C`,
/// marginal cost `C'`, curvature `C''`, and the elasticity of marginal cost
/// `rho = tau * C'' / C'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostEval {
    pub cost: f64,
    pub marginal: f64,
    /// `C''`; positive infinity for an isoelastic cost with `0 < lambda < 1`
    /// evaluated at `tau = 0`, where the curvature is unbounded.
    pub curvature: f64,
    pub elasticity: f64,
}

#[derive(Debug, Clone, PartialEq)]
enum CostKind {
    Linear { c: f64 },
    Isoelastic { c: f64, lambda: f64 },
    Tabulated(TabulatedCost),
}

/// A strictly increasing convex information cost with `C(0) = 0`,
/// `C'(tau) > 0`, and `C''(tau) >= 0`.
///
/// Three families are supported: linear `C = c*tau`, isoelastic
/// `C = c*tau^(lambda+1)/(lambda+1)` (constant elasticity of marginal cost
/// `lambda`), and a user-tabulated convex cost given as samples of `C'`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CostSpecRepr", into = "CostSpecRepr")]
pub struct CostSpec {
    kind: CostKind,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum CostSpecRepr {
    Linear { c: f64 },
    Isoelastic { c: f64, lambda: f64 },
    Tabulated { points: Vec<[f64; 2]> },
}

impl TryFrom<CostSpecRepr> for CostSpec {
    type Error = ModelError;
    fn try_from(r: CostSpecRepr) -> Result<Self, ModelError> {
        match r {
            CostSpecRepr::Linear { c } => CostSpec::linear(c),
            CostSpecRepr::Isoelastic { c, lambda } => CostSpec::isoelastic(c, lambda),
            CostSpecRepr::Tabulated { points } => {
                CostSpec::tabulated(points.iter().map(|p| (p[0], p[1])))
            }
        }
    }
}

impl From<CostSpec> for CostSpecRepr {
    fn from(spec: CostSpec) -> Self {
        match spec.kind {
            CostKind::Linear { c } => CostSpecRepr::Linear { c },
            CostKind::Isoelastic { c, lambda } => CostSpecRepr::Isoelastic { c, lambda },
            CostKind::Tabulated(t) => CostSpecRepr::Tabulated {
                points: t
                    .taus
                    .iter()
                    .zip(&t.marginals)
                    .map(|(&tau, &m)| [tau, m])
                    .collect(),
            },
        }
    }
}

impl CostSpec {
    /// Linear cost `C(tau) = c * tau` with marginal cost `c > 0`.
    pub fn linear(c: f64) -> Result<Self, ModelError> {
        require_finite("c", c)?;
        if c <= 0.0 {
            return Err(ModelError::NonPositiveCostScale(c));
        }
        Ok(Self {
            kind: CostKind::Linear { c },
        })
    }

    /// Isoelastic cost `C(tau) = c * tau^(lambda+1) / (lambda+1)`; the
    /// elasticity of marginal cost equals `lambda` at every `tau > 0`.
    /// `lambda = 0` coincides with the linear family.
    pub fn isoelastic(c: f64, lambda: f64) -> Result<Self, ModelError> {
        require_finite("c", c)?;
        require_finite("lambda", lambda)?;
        if c <= 0.0 {
            return Err(ModelError::NonPositiveCostScale(c));
        }
        if lambda < 0.0 {
            return Err(ModelError::NegativeElasticity(lambda));
        }
        Ok(Self {
            kind: CostKind::Isoelastic { c, lambda },
        })
    }

    /// Convex cost from samples `(tau, C'(tau))` of the marginal cost.
    ///
    /// The samples must start at `tau = 0`, have strictly increasing `tau`,
    /// strictly positive `C'`, and nondecreasing `C'` (convexity is validated
    /// at load time). `C'` is interpolated piecewise-linearly between samples
    /// and extended beyond the last sample with the final segment's slope;
    /// `C` is the exact integral of that interpolant.
    pub fn tabulated(points: impl IntoIterator<Item = (f64, f64)>) -> Result<Self, ModelError> {
        let tab = TabulatedCost::new(points)?;
        Ok(Self {
            kind: CostKind::Tabulated(tab),
        })
    }

    /// The constant elasticity of marginal cost, when the family has one:
    /// `Some(0)` for linear, `Some(lambda)` for isoelastic, `None` for
    /// tabulated costs.
    pub fn constant_elasticity(&self) -> Option<f64> {
        match &self.kind {
            CostKind::Linear { .. } => Some(0.0),
            CostKind::Isoelastic { lambda, .. } => Some(*lambda),
            CostKind::Tabulated(_) => None,
        }
    }

    /// The scale `c` for the linear/isoelastic families.
    pub fn scale(&self) -> Option<f64> {
        match &self.kind {
            CostKind::Linear { c } | CostKind::Isoelastic { c, .. } => Some(*c),
            CostKind::Tabulated(_) => None,
        }
    }

    /// Marginal cost at zero, used by the corner test of the acquisition
    /// first-order condition.
    pub fn marginal_at_zero(&self) -> f64 {
        match &self.kind {
            CostKind::Linear { c } => *c,
            CostKind::Isoelastic { c, lambda } => {
                if *lambda == 0.0 {
                    *c
                } else {
                    0.0
                }
            }
            CostKind::Tabulated(t) => t.marginals[0],
        }
    }

    /// Evaluates `(C, C', C'', rho)` at `tau_x >= 0`.
    ///
    /// For an isoelastic cost the elasticity is reported as `lambda` even at
    /// `tau_x = 0` (constant-elasticity convention), and the curvature at
    /// zero with `0 < lambda < 1` is reported as positive infinity.
    pub fn eval(&self, tau_x: f64) -> CostEval {
        debug_assert!(tau_x >= 0.0, "cost evaluated at negative precision");
        match &self.kind {
            CostKind::Linear { c } => CostEval {
                cost: c * tau_x,
                marginal: *c,
                curvature: 0.0,
                elasticity: 0.0,
            },
            CostKind::Isoelastic { c, lambda } => {
                let l = *lambda;
                let cost = c * tau_x.powf(l + 1.0) / (l + 1.0);
                let marginal = c * tau_x.powf(l);
                let curvature = if l == 0.0 {
                    0.0
                } else if tau_x == 0.0 {
                    if l > 1.0 {
                        0.0
                    } else if l == 1.0 {
                        *c
                    } else {
                        f64::INFINITY
                    }
                } else {
                    c * l * tau_x.powf(l - 1.0)
                };
                CostEval {
                    cost,
                    marginal,
                    curvature,
                    elasticity: l,
                }
            }
            CostKind::Tabulated(t) => t.eval(tau_x),
        }
    }
}

/// Piecewise-linear marginal cost with its exact integral precomputed at the
/// knots.
#[derive(Debug, Clone, PartialEq)]
struct TabulatedCost {
    taus: Vec<f64>,
    marginals: Vec<f64>,
    cumulative: Vec<f64>,
}

impl TabulatedCost {
    fn new(points: impl IntoIterator<Item = (f64, f64)>) -> Result<Self, ModelError> {
        let pts: Vec<(f64, f64)> = points.into_iter().collect();
        if pts.len() < 2 {
            return Err(ModelError::TabulatedCost(
                "need at least two (tau, C') samples".into(),
            ));
        }
        if pts[0].0 != 0.0 {
            return Err(ModelError::TabulatedCost(format!(
                "first sample must be at tau = 0, got tau = {}",
                pts[0].0
            )));
        }
        for (i, &(tau, m)) in pts.iter().enumerate() {
            if !tau.is_finite() || !m.is_finite() {
                return Err(ModelError::TabulatedCost(format!(
                    "non-finite sample at index {i}"
                )));
            }
            if m <= 0.0 {
                return Err(ModelError::TabulatedCost(format!(
                    "marginal cost must be > 0, got {m} at tau = {tau}"
                )));
            }
            if i > 0 {
                let (prev_tau, prev_m) = pts[i - 1];
                if tau <= prev_tau {
                    return Err(ModelError::TabulatedCost(format!(
                        "tau samples must be strictly increasing, got {prev_tau} then {tau}"
                    )));
                }
                if m < prev_m {
                    return Err(ModelError::TabulatedCost(format!(
                        "marginal cost samples must be nondecreasing (convexity), \
                         got {prev_m} then {m}"
                    )));
                }
            }
        }
        let (taus, marginals): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
        // Exact trapezoid integral of the piecewise-linear interpolant.
        let mut cumulative = vec![0.0; taus.len()];
        for i in 1..taus.len() {
            let dt = taus[i] - taus[i - 1];
            cumulative[i] = cumulative[i - 1] + 0.5 * (marginals[i] + marginals[i - 1]) * dt;
        }
        Ok(Self {
            taus,
            marginals,
            cumulative,
        })
    }

    fn last_slope(&self) -> f64 {
        let n = self.taus.len();
        (self.marginals[n - 1] - self.marginals[n - 2]) / (self.taus[n - 1] - self.taus[n - 2])
    }

    fn eval(&self, tau: f64) -> CostEval {
        let n = self.taus.len();
        let (cost, marginal, curvature) = if tau >= self.taus[n - 1] {
            let slope = self.last_slope();
            let dt = tau - self.taus[n - 1];
            let m_end = self.marginals[n - 1];
            let marginal = m_end + slope * dt;
            let cost = self.cumulative[n - 1] + 0.5 * (m_end + marginal) * dt;
            (cost, marginal, slope)
        } else {
            // partition_point returns the first knot strictly beyond tau, so
            // seg is the segment index with taus[seg] <= tau < taus[seg+1];
            // knots take the right segment's slope.
            let seg = self.taus.partition_point(|&t| t <= tau).saturating_sub(1);
            let dt = tau - self.taus[seg];
            let slope =
                (self.marginals[seg + 1] - self.marginals[seg]) / (self.taus[seg + 1] - self.taus[seg]);
            let marginal = self.marginals[seg] + slope * dt;
            let cost = self.cumulative[seg] + 0.5 * (self.marginals[seg] + marginal) * dt;
            (cost, marginal, slope)
        };
        CostEval {
            cost,
            marginal,
            curvature,
            elasticity: tau * curvature / marginal,
        }
    }
}

/// Coefficients of a quadratic material benefit
/// `c1 * mean(a_j^2) + c2 * mean(a_j)^2 + c3 * theta * mean(a_j) + c4 * mean(a_j) + c5`.
///
/// `c4` and `c5` only enter the additive welfare constant that is dropped
/// from every reported welfare number; they are accepted and ignored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialWelfareSpec {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    #[serde(default)]
    pub c4: f64,
    #[serde(default)]
    pub c5: f64,
}

/// Where a pair of welfare weights came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Derived from a quadratic material benefit via [`coefficients_from_material`].
    FromMaterial,
    /// Supplied directly as (ζ, η).
    Direct,
    /// One of the built-in application presets.
    Preset,
}

/// The pair (ζ, η) weighting dispersion and volatility in the expected
/// welfare `W = ζ D + η V - C`, with the additive constant dropped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WelfareCoefficients {
    pub zeta: f64,
    pub eta: f64,
    pub provenance: Provenance,
}

impl WelfareCoefficients {
    pub fn direct(zeta: f64, eta: f64) -> Self {
        Self {
            zeta,
            eta,
            provenance: Provenance::Direct,
        }
    }

    pub(crate) fn preset(zeta: f64, eta: f64) -> Self {
        Self {
            zeta,
            eta,
            provenance: Provenance::Preset,
        }
    }

    /// Same weights with a different ζ; keeps the provenance.
    pub fn with_zeta(self, zeta: f64) -> Self {
        Self { zeta, ..self }
    }
}

/// Maps a quadratic material benefit to the welfare weights:
/// `zeta = c1 + c3/beta` and `eta = c1 + c2 + (1 - alpha) * c3 / beta`.
///
/// The mapping is linear in `(c1, c2, c3)`; `c4` and `c5` are ignored because
/// they only shift the dropped additive constant.
pub fn coefficients_from_material(m: &MaterialWelfareSpec, p: &ModelParams) -> WelfareCoefficients {
    WelfareCoefficients {
        zeta: m.c1 + m.c3 / p.beta(),
        eta: m.c1 + m.c2 + p.one_minus_alpha() * m.c3 / p.beta(),
        provenance: Provenance::FromMaterial,
    }
}

/// An extended nonnegative real used for precisions and precision-like
/// quantities: either a finite value `>= 0` or infinity.
///
/// Serialized as a JSON number when finite and as the string `"inf"` when
/// infinite (JSON has no infinity literal).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PrecisionChoice {
    Finite(f64),
    Infinite,
}

impl PrecisionChoice {
    pub fn finite(x: f64) -> Result<Self, ModelError> {
        if x.is_finite() && x >= 0.0 {
            Ok(Self::Finite(x))
        } else if x == f64::INFINITY {
            Ok(Self::Infinite)
        } else {
            Err(ModelError::InvalidPrecision(x))
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Self::Infinite)
    }

    pub fn as_finite(&self) -> Option<f64> {
        match self {
            Self::Finite(x) => Some(*x),
            Self::Infinite => None,
        }
    }

    /// The value as an `f64`, with infinity for [`PrecisionChoice::Infinite`].
    pub fn as_f64(&self) -> f64 {
        match self {
            Self::Finite(x) => *x,
            Self::Infinite => f64::INFINITY,
        }
    }
}

impl std::fmt::Display for PrecisionChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Finite(x) => write!(f, "{x}"),
            Self::Infinite => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for PrecisionChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(Self::Infinite);
        }
        let x: f64 = t
            .parse()
            .map_err(|_| format!("expected a nonnegative number or \"inf\", got {s:?}"))?;
        Self::finite(x).map_err(|e| e.to_string())
    }
}

impl Serialize for PrecisionChoice {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            Self::Finite(x) => ser.serialize_f64(*x),
            Self::Infinite => ser.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for PrecisionChoice {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error;

        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Number(f64),
            Text(String),
        }

        match Repr::deserialize(de)? {
            Repr::Number(x) => Self::finite(x).map_err(D::Error::custom),
            Repr::Text(s) => s.parse().map_err(D::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m0() -> ModelParams {
        ModelParams::new(0.0, 1.0, 1.0, 0.0).unwrap()
    }

    #[test]
    fn rejects_invalid_params() {
        assert!(ModelParams::new(1.0, 1.0, 1.0, 0.0).is_err());
        assert!(ModelParams::new(0.0, 0.0, 1.0, 0.0).is_err());
        assert!(ModelParams::new(0.0, -1.0, 1.0, 0.0).is_err());
        assert!(ModelParams::new(0.0, 1.0, 0.0, 0.0).is_err());
        assert!(ModelParams::new(f64::NAN, 1.0, 1.0, 0.0).is_err());
        assert!(ModelParams::new(0.9999, 1.0, 1.0, 5.0).is_ok());
    }

    #[test]
    fn cournot_material_maps_to_unit_weights() {
        let delta = 2.0;
        let p = ModelParams::new(-delta / 2.0, 0.5, 1.0, 0.0).unwrap();
        let m = MaterialWelfareSpec {
            c1: -1.0,
            c2: -delta,
            c3: 1.0,
            c4: 0.0,
            c5: 0.0,
        };
        let wc = coefficients_from_material(&m, &p);
        assert_eq!(wc.zeta, 1.0);
        assert_eq!(wc.eta, 1.0);
        assert_eq!(wc.provenance, Provenance::FromMaterial);
    }

    #[test]
    fn pure_state_tracking_material() {
        let p = ModelParams::new(0.3, 2.0, 1.0, 0.0).unwrap();
        let m = MaterialWelfareSpec {
            c1: 0.0,
            c2: 0.0,
            c3: p.beta(),
            c4: 0.0,
            c5: 0.0,
        };
        let wc = coefficients_from_material(&m, &p);
        assert!((wc.zeta - 1.0).abs() < 1e-15);
        assert!((wc.eta - (1.0 - p.alpha())).abs() < 1e-15);
    }

    #[test]
    fn scaled_squared_error_material_matches_beauty_pair() {
        // v = -(1-r) * (a_i - theta)^2 up to the dropped constant:
        // (c1, c2, c3) = (-(1-r), 0, 2(1-r)).
        let r = 0.5;
        let p = ModelParams::new(r, 1.0 - r, 1.0, 0.0).unwrap();
        let m = MaterialWelfareSpec {
            c1: -(1.0 - r),
            c2: 0.0,
            c3: 2.0 * (1.0 - r),
            c4: 0.0,
            c5: 0.0,
        };
        let wc = coefficients_from_material(&m, &p);
        assert!((wc.zeta - 1.5).abs() < 1e-15);
        assert!((wc.eta - 0.5).abs() < 1e-15);
    }

    #[test]
    fn linear_cost_eval() {
        let cost = CostSpec::linear(0.04).unwrap();
        let e = cost.eval(3.0);
        assert!((e.cost - 0.12).abs() < 1e-15);
        assert_eq!(e.marginal, 0.04);
        assert_eq!(e.curvature, 0.0);
        assert_eq!(e.elasticity, 0.0);
    }

    #[test]
    fn isoelastic_cost_eval() {
        let cost = CostSpec::isoelastic(1.0, 1.0).unwrap();
        let e = cost.eval(1.0);
        assert_eq!(e.cost, 0.5);
        assert_eq!(e.marginal, 1.0);
        assert_eq!(e.curvature, 1.0);
        assert_eq!(e.elasticity, 1.0);
    }

    #[test]
    fn cost_vanishes_at_zero_precision() {
        for cost in [
            CostSpec::linear(0.7).unwrap(),
            CostSpec::isoelastic(2.0, 0.5).unwrap(),
            CostSpec::tabulated([(0.0, 0.1), (1.0, 0.5), (2.0, 1.5)]).unwrap(),
        ] {
            assert_eq!(cost.eval(0.0).cost, 0.0);
        }
    }

    #[test]
    fn isoelastic_curvature_at_zero() {
        // 0 < lambda < 1: curvature is unbounded at zero.
        let e = CostSpec::isoelastic(1.0, 0.5).unwrap().eval(0.0);
        assert_eq!(e.curvature, f64::INFINITY);
        assert_eq!(e.elasticity, 0.5);
        // lambda > 1: curvature vanishes at zero.
        assert_eq!(CostSpec::isoelastic(1.0, 2.0).unwrap().eval(0.0).curvature, 0.0);
        // lambda = 1: quadratic cost, constant curvature.
        assert_eq!(CostSpec::isoelastic(3.0, 1.0).unwrap().eval(0.0).curvature, 3.0);
    }

    #[test]
    fn tabulated_validation() {
        // Must start at tau = 0.
        assert!(CostSpec::tabulated([(0.5, 1.0), (1.0, 2.0)]).is_err());
        // Decreasing marginals violate convexity.
        assert!(CostSpec::tabulated([(0.0, 1.0), (1.0, 0.5)]).is_err());
        // Nonpositive marginals violate strict increase of C.
        assert!(CostSpec::tabulated([(0.0, 0.0), (1.0, 1.0)]).is_err());
        // Duplicate tau.
        assert!(CostSpec::tabulated([(0.0, 1.0), (0.0, 2.0)]).is_err());
        assert!(CostSpec::tabulated([(0.0, 1.0), (1.0, 1.0), (2.0, 3.0)]).is_ok());
    }

    #[test]
    fn tabulated_matches_linear_when_flat() {
        let lin = CostSpec::linear(0.3).unwrap();
        let tab = CostSpec::tabulated([(0.0, 0.3), (5.0, 0.3)]).unwrap();
        for tau in [0.0, 0.5, 2.5, 5.0, 9.0] {
            let a = lin.eval(tau);
            let b = tab.eval(tau);
            assert!((a.cost - b.cost).abs() < 1e-14);
            assert!((a.marginal - b.marginal).abs() < 1e-14);
        }
    }

    #[test]
    fn tabulated_interpolation_and_extension() {
        let tab = CostSpec::tabulated([(0.0, 1.0), (2.0, 2.0)]).unwrap();
        let e = tab.eval(1.0);
        assert!((e.marginal - 1.5).abs() < 1e-15);
        assert!((e.cost - 1.25).abs() < 1e-15);
        assert!((e.curvature - 0.5).abs() < 1e-15);
        assert!((e.elasticity - 1.0 / 3.0).abs() < 1e-15);
        // Beyond the last knot the final slope extends the marginal cost.
        let e = tab.eval(4.0);
        assert!((e.marginal - 3.0).abs() < 1e-15);
        assert!((e.cost - (3.0 + 5.0)).abs() < 1e-14);
    }

    #[test]
    fn precision_choice_parsing_and_display() {
        assert_eq!("inf".parse::<PrecisionChoice>().unwrap(), PrecisionChoice::Infinite);
        assert_eq!(
            "2.5".parse::<PrecisionChoice>().unwrap(),
            PrecisionChoice::Finite(2.5)
        );
        assert!("-1".parse::<PrecisionChoice>().is_err());
        assert_eq!(PrecisionChoice::Infinite.to_string(), "inf");
    }

    #[test]
    fn precision_choice_json_round_trip() {
        let inf = serde_json::to_string(&PrecisionChoice::Infinite).unwrap();
        assert_eq!(inf, "\"inf\"");
        assert_eq!(
            serde_json::from_str::<PrecisionChoice>(&inf).unwrap(),
            PrecisionChoice::Infinite
        );
        let fin = serde_json::to_string(&PrecisionChoice::Finite(3.0)).unwrap();
        assert_eq!(
            serde_json::from_str::<PrecisionChoice>(&fin).unwrap(),
            PrecisionChoice::Finite(3.0)
        );
        assert!(serde_json::from_str::<PrecisionChoice>("-2.0").is_err());
    }

    #[test]
    fn cost_spec_json_schema() {
        let lin: CostSpec = serde_json::from_str(r#"{"kind":"linear","c":0.04}"#).unwrap();
        assert_eq!(lin.marginal_at_zero(), 0.04);
        let iso: CostSpec =
            serde_json::from_str(r#"{"kind":"isoelastic","c":1.0,"lambda":2.0}"#).unwrap();
        assert_eq!(iso.constant_elasticity(), Some(2.0));
        let tab: CostSpec =
            serde_json::from_str(r#"{"kind":"tabulated","points":[[0.0,0.1],[1.0,0.2]]}"#).unwrap();
        assert_eq!(tab.constant_elasticity(), None);
        // Invalid payloads are rejected at parse time.
        assert!(serde_json::from_str::<CostSpec>(r#"{"kind":"linear","c":-1.0}"#).is_err());
        // Round trip.
        for spec in [lin, iso, tab] {
            let s = serde_json::to_string(&spec).unwrap();
            let back: CostSpec = serde_json::from_str(&s).unwrap();
            assert_eq!(back, spec);
        }
        let _ = m0();
    }
}
