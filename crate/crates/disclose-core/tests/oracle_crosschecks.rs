//! Cross-checks of specific solved examples against the Monte Carlo,
//! finite-difference, and grid oracles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use disclose_core::equilibrium::{equilibrium_coefficients, solve_private_precision};
use disclose_core::model::{CostSpec, ModelParams, PrecisionChoice, WelfareCoefficients};
use disclose_core::mwd::mwd;
use disclose_core::optimal::{optimal_precision, tau_bar};
use disclose_core::oracles::{
    fd_social_value, grid_optimal_tau_y, grid_robust_tau_y, mc_moments, GridSpec, OracleConfig,
};
use disclose_core::welfare::{dispersion, volatility, welfare_along_path};

fn m0() -> ModelParams {
    ModelParams::new(0.0, 1.0, 1.0, 0.0).unwrap()
}

/// Test-side projection oracle: regresses the best-response target
/// `alpha * avg + beta * theta` on the two signal deviations using sample
/// moments, independently of the closed-form coefficient expressions.
fn regression_weights(p: &ModelParams, tau_x: f64, tau_y: f64, n: usize, seed: u64) -> (f64, f64) {
    let b = equilibrium_coefficients(p, tau_x, tau_y);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sxx, mut sxy, mut syy, mut stx, mut sty) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for _ in 0..n {
        let zt: f64 = rng.sample(StandardNormal);
        let zy: f64 = rng.sample(StandardNormal);
        let zx: f64 = rng.sample(StandardNormal);
        let theta_dev = zt / p.tau_theta().sqrt();
        let y_dev = theta_dev + zy / tau_y.sqrt();
        let x_dev = theta_dev + zx / tau_x.sqrt();
        // Opponents play the candidate linear strategy; the average action
        // over the continuum integrates the idiosyncratic noise out.
        let avg_dev = b.b_x * theta_dev + b.b_y * y_dev;
        let target = p.alpha() * avg_dev + p.beta() * theta_dev;
        sxx += x_dev * x_dev;
        sxy += x_dev * y_dev;
        syy += y_dev * y_dev;
        stx += target * x_dev;
        sty += target * y_dev;
    }
    // Solve the 2x2 normal equations.
    let det = sxx * syy - sxy * sxy;
    ((stx * syy - sty * sxy) / det, (sty * sxx - stx * sxy) / det)
}

#[test]
fn regression_oracle_recovers_equilibrium_weights() {
    let cases = [
        (m0(), 1.0, 1.0, (1.0 / 3.0, 1.0 / 3.0)),
        (
            ModelParams::new(0.5, 1.0, 1.0, 0.0).unwrap(),
            2.0,
            1.0,
            (2.0 / 3.0, 2.0 / 3.0),
        ),
    ];
    for (i, (p, tx, ty, want)) in cases.into_iter().enumerate() {
        let (bx, by) = regression_weights(&p, tx, ty, 400_000, 40 + i as u64);
        assert!((bx - want.0).abs() < 0.02 * want.0, "b_x {bx} vs {}", want.0);
        assert!((by - want.1).abs() < 0.02 * want.1, "b_y {by} vs {}", want.1);
    }
}

#[test]
fn dispersion_matches_var_minus_cov_estimate() {
    let p = m0();
    let cfg = OracleConfig::new(100_000, 400, 17, GridSpec::default_tau(), 1e-5).unwrap();
    let m = mc_moments(&p, 1.0, 1.0, &cfg);
    let d_est = m.var_i - m.cov_ij;
    let d = dispersion(&p, 1.0, 1.0);
    assert!((d_est - d).abs() < 0.02 * d, "{d_est} vs {d}");
    // The agent-sample-mean covariance estimator agrees with the exact-mean
    // one up to its small-sample bias.
    assert!((m.cov_ij_agent_mean - m.cov_ij).abs() < 5.0 * m.se_cov_ij);
}

#[test]
fn volatility_limit_consistency() {
    let p = m0();
    // V at no acquisition and huge public precision approaches beta^2 /
    // ((1-alpha)^2 tau_theta) = 1.
    assert!((volatility(&p, 0.0, 1e8) - 1.0).abs() < 1e-6);
}

#[test]
fn fd_ratio_matches_mwd_at_unit_equilibrium() {
    let p = m0();
    let wc = WelfareCoefficients::direct(1.0, 1.0);
    let cost = CostSpec::isoelastic(1.0 / 9.0, 1.0).unwrap();
    let cfg = OracleConfig::default();
    let b = mwd(&p, &wc, &cost, 1.0).unwrap();
    assert!((b.mwd - 1.25).abs() < 1e-9);
    let dw = fd_social_value(&p, &wc, &cost, 1.0, &cfg).unwrap();
    assert!(!dw.one_sided);
    let h = cfg.fd_step * 2.0;
    let d_at = |t: f64| {
        let phi = solve_private_precision(&p, &cost, t).unwrap();
        dispersion(&p, phi, t)
    };
    let dd = (d_at(1.0 + h / 2.0) - d_at(1.0 - h / 2.0)) / h;
    let ratio = dw.value / dd.abs();
    assert!((ratio - 1.25).abs() < 1e-5, "ratio {ratio}");
}

#[test]
fn fd_social_value_positive_for_linear_cost_unit_weights() {
    let p = m0();
    let wc = WelfareCoefficients::direct(1.0, 1.0);
    let cost = CostSpec::linear(0.01).unwrap();
    let cfg = OracleConfig::default();
    for k in 0..20 {
        let ty = 0.35 * k as f64;
        if solve_private_precision(&p, &cost, ty).unwrap() <= 0.0 {
            break;
        }
        let est = fd_social_value(&p, &wc, &cost, ty, &cfg).unwrap();
        assert!(est.value > 0.0, "negative social value at tau_y = {ty}");
    }
}

#[test]
fn fd_vanishes_at_interior_optimum() {
    let p = m0();
    let wc = WelfareCoefficients::direct(0.0, -0.2);
    let cost = CostSpec::isoelastic(1.0, 1.0).unwrap();
    let bars = tau_bar(&p, &wc, &cost).unwrap();
    let cfg = OracleConfig::default();
    let est = fd_social_value(&p, &wc, &cost, bars.tau_y, &cfg).unwrap();
    let scale = welfare_along_path(&p, &wc, &cost, bars.tau_y).unwrap().abs() + 1.0;
    assert!(est.value.abs() < 1e-6 * scale, "fd at optimum: {}", est.value);
}

#[test]
fn grid_oracle_examples() {
    let grid = GridSpec::default_tau();

    // Monotone-increasing configuration: the limit wins.
    let p = ModelParams::new(-0.5, 0.5, 1.0, 0.0).unwrap();
    let wc = WelfareCoefficients::direct(1.0, 1.0);
    let cost = CostSpec::isoelastic(1.0, 1.0).unwrap();
    let opt = grid_optimal_tau_y(&p, &wc, &cost, &grid);
    assert_eq!(opt.arg, PrecisionChoice::Infinite);

    // Interior peak near the closed-form threshold.
    let p = m0();
    let wc = WelfareCoefficients::direct(0.0, -0.2);
    let opt = grid_optimal_tau_y(&p, &wc, &cost, &grid);
    let got = opt.arg.as_finite().expect("interior argmax");
    let bars = tau_bar(&p, &wc, &cost).unwrap();
    let step = (grid.hi / grid.lo).powf(1.0 / (grid.points - 1) as f64);
    assert!(
        got / bars.tau_y < step * 1.01 && bars.tau_y / got < step * 1.01,
        "grid argmax {got} vs threshold {}",
        bars.tau_y
    );
    let verdict = optimal_precision(&p, &wc, &cost);
    assert!((verdict.optimal_tau_y.as_finite().unwrap() - 0.5143).abs() < 1e-4);

    // Robust peak: g(1) = 16 for weights (0, -0.1).
    let wc = WelfareCoefficients::direct(0.0, -0.1);
    let opt = grid_robust_tau_y(&p, &wc, PrecisionChoice::Finite(1.0), &grid);
    let got = opt.arg.as_finite().expect("finite robust argmax");
    assert!(
        got / 16.0 < step * 1.01 && 16.0 / got < step * 1.01,
        "robust argmax {got} vs 16"
    );
}
