//! Equilibria, welfare decompositions, and optimal/robust disclosure of
//! public information in a linear-quadratic Gaussian game where agents also
//! acquire costly private information.
//!
//! The model has three stages: a policymaker picks the precision of a public
//! signal, a continuum of agents each pick the precision of a private signal
//! at a convex cost, and everyone then plays a quadratic coordination game.
//! More public precision crowds out private acquisition, which cuts both the
//! agents' information and their information spending; the welfare effect is
//! resolved here through the marginal welfare with respect to dispersion
//! (MWD) and its decomposition by the elasticity of marginal cost.
//!
//! The crate is organized in layers:
//!
//! * [`model`] — primitives, cost functions, welfare weights;
//! * [`equilibrium`] — the action coefficients and the private-precision
//!   fixed point with its inverse and slope;
//! * [`welfare`] — volatility/dispersion decomposition on and off the path;
//! * [`mwd`] — the MWD/MVD machinery and the threshold `eta_lower`;
//! * [`optimal`] — region classification and the optimal precision;
//! * [`robust`] — worst-case welfare over convex costs and robust precision;
//! * [`applications`] — Cournot and beauty-contest presets and thresholds;
//! * [`oracles`] — Monte Carlo, finite-difference, and grid-search engines
//!   that independently verify the closed forms;
//! * [`checks`] — the named verification battery built from those oracles.
//!
//! Everything is deterministic given a seed; with the default `parallel`
//! feature the heavy loops fan out over rayon and still produce bit-identical
//! results (keyed ChaCha streams, order-independent reductions).

pub mod applications;
pub mod checks;
pub mod equilibrium;
pub mod exec;
pub mod model;
pub mod mwd;
pub mod optimal;
pub mod oracles;
pub mod robust;
pub mod welfare;

pub use applications::{
    beauty_thresholds, cournot_thresholds, ApplicationPreset, BeautyThresholds, CorollaryReport,
    CournotThresholds, PresetKind,
};
pub use equilibrium::{
    crowding_out_slope, equilibrium_coefficients, marginal_benefit, phi_inverse,
    solve_private_precision, EquilibriumCoefficients, SolveError,
};
pub use model::{
    coefficients_from_material, CostEval, CostSpec, MaterialWelfareSpec, ModelError, ModelParams,
    PrecisionChoice, Provenance, WelfareCoefficients,
};
pub use mwd::{eta_lower, mwd, mwd0, mwd_star, mvd, MwdBreakdown, MwdError};
pub use optimal::{
    classify_region, gross_optimal_precision, optimal_precision, tau_bar, DisclosureError,
    DisclosureVerdict, Region, TauBars, VerdictMethod,
};
pub use oracles::{GridSpec, McMoments, OracleConfig, OracleError};
pub use robust::{
    classify_cost_free_monotonicity, interior_minimizer, robust_precision, w0,
    worst_case_welfare, CostFreeMonotonicity, FBehavior, MinimizerPath, RobustError, RobustVerdict,
    WorstCase,
};
pub use welfare::{
    dispersion, gross_welfare, solve_at, volatility, welfare, EquilibriumSolution, WelfareError,
};
