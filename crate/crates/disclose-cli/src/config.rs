//! Run-configuration resolution: JSON config files, presets, and flag
//! overrides.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use disclose_core::{
    coefficients_from_material, ApplicationPreset, CostSpec, MaterialWelfareSpec, ModelParams,
    WelfareCoefficients,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Io { .. } => "io",
            CliError::Usage(_) => "usage",
        }
    }
}

/// On-disk model configuration.
///
/// ```json
/// {
///   "alpha": 0.0, "beta": 1.0, "tau_theta": 1.0, "theta_bar": 0.0,
///   "cost": {"kind": "isoelastic", "c": 0.111, "lambda": 1.0},
///   "welfare": {"zeta": 1.0, "eta": 1.0}
/// }
/// ```
///
/// `cost.kind` is one of `linear` (`c`), `isoelastic` (`c`, `lambda`), or
/// `tabulated` (`points` as `[tau, marginal]` pairs). `welfare` is either the
/// weights `{zeta, eta}` or material-benefit coefficients `{c1..c5}`.
#[derive(Debug, Deserialize)]
struct FileConfig {
    alpha: f64,
    beta: f64,
    tau_theta: f64,
    #[serde(default)]
    theta_bar: f64,
    cost: CostSpec,
    welfare: WelfareInput,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum WelfareInput {
    Direct(DirectWelfare),
    Material(MaterialInput),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DirectWelfare {
    zeta: f64,
    eta: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialInput {
    c1: f64,
    c2: f64,
    c3: f64,
    #[serde(default)]
    c4: f64,
    #[serde(default)]
    c5: f64,
}

/// Which built-in application to instantiate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PresetName {
    Cournot,
    Beauty,
}

/// Model-selection flags shared by every analysis subcommand.
#[derive(Debug, clap::Args)]
pub struct ModelArgs {
    /// JSON model configuration file (see README for the schema).
    #[arg(long, value_name = "PATH", conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    /// Built-in application preset.
    #[arg(long, value_enum)]
    pub preset: Option<PresetName>,
    /// Demand slope for the cournot preset (> 0).
    #[arg(long)]
    pub delta: Option<f64>,
    /// Complementarity for the beauty preset (in (0, 1)).
    #[arg(long)]
    pub r: Option<f64>,
    /// Elasticity of marginal cost; builds an isoelastic cost together with
    /// --c, overriding any cost from --config.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Cost scale for the isoelastic cost built from flags.
    #[arg(long)]
    pub c: Option<f64>,
    /// Prior precision used with --preset.
    #[arg(long, default_value_t = 1.0)]
    pub tau_theta: f64,
}

/// A fully resolved model: primitives, cost, and welfare weights.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub params: ModelParams,
    pub cost: CostSpec,
    pub welfare: WelfareCoefficients,
}

pub fn resolve(args: &ModelArgs) -> Result<Resolved, CliError> {
    match (&args.config, args.preset) {
        (Some(path), None) => from_file(path, args),
        (None, Some(preset)) => from_preset(preset, args),
        (None, None) => Err(CliError::Usage(
            "supply a model with --config <path> or --preset <cournot|beauty>".into(),
        )),
        (Some(_), Some(_)) => unreachable!("clap rejects --config with --preset"),
    }
}

fn flag_cost(args: &ModelArgs) -> Result<Option<CostSpec>, CliError> {
    if args.lambda.is_none() && args.c.is_none() {
        return Ok(None);
    }
    let cost = CostSpec::isoelastic(args.c.unwrap_or(1.0), args.lambda.unwrap_or(0.0))
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(Some(cost))
}

fn from_file(path: &Path, args: &ModelArgs) -> Result<Resolved, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let file: FileConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let params = ModelParams::new(file.alpha, file.beta, file.tau_theta, file.theta_bar)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let welfare = match file.welfare {
        WelfareInput::Direct(d) => WelfareCoefficients::direct(d.zeta, d.eta),
        WelfareInput::Material(m) => {
            let m = MaterialWelfareSpec {
                c1: m.c1,
                c2: m.c2,
                c3: m.c3,
                c4: m.c4,
                c5: m.c5,
            };
            coefficients_from_material(&m, &params)
        }
    };
    let cost = flag_cost(args)?.unwrap_or(file.cost);
    Ok(Resolved {
        params,
        cost,
        welfare,
    })
}

fn from_preset(preset: PresetName, args: &ModelArgs) -> Result<Resolved, CliError> {
    let lambda = args.lambda.unwrap_or(1.0);
    let c = args.c.unwrap_or(1.0);
    let preset = match preset {
        PresetName::Cournot => {
            let delta = args.delta.ok_or_else(|| {
                CliError::Usage("the cournot preset requires --delta <slope>".into())
            })?;
            ApplicationPreset::cournot(delta, lambda, args.tau_theta)
        }
        PresetName::Beauty => {
            let r = args.r.ok_or_else(|| {
                CliError::Usage("the beauty preset requires --r <complementarity>".into())
            })?;
            ApplicationPreset::beauty(r, lambda, args.tau_theta)
        }
    }
    .map_err(|e| CliError::Config(e.to_string()))?;
    let cost =
        CostSpec::isoelastic(c, lambda).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(Resolved {
        params: preset.params,
        cost,
        welfare: preset.welfare,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args_with_config(json: &str) -> (tempfile::TempDir, ModelArgs) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        std::fs::write(&path, json).unwrap();
        let args = ModelArgs {
            config: Some(path),
            preset: None,
            delta: None,
            r: None,
            lambda: None,
            c: None,
            tau_theta: 1.0,
        };
        (dir, args)
    }

    #[test]
    fn parses_direct_welfare_config() {
        let (_dir, args) = args_with_config(
            r#"{"alpha": 0.0, "beta": 1.0, "tau_theta": 1.0,
                "cost": {"kind": "linear", "c": 0.04},
                "welfare": {"zeta": 1.0, "eta": 1.0}}"#,
        );
        let r = resolve(&args).unwrap();
        assert_eq!(r.welfare.zeta, 1.0);
        assert_eq!(r.cost.marginal_at_zero(), 0.04);
    }

    #[test]
    fn parses_material_welfare_config() {
        let (_dir, args) = args_with_config(
            r#"{"alpha": -1.0, "beta": 0.5, "tau_theta": 1.0,
                "cost": {"kind": "isoelastic", "c": 1.0, "lambda": 2.0},
                "welfare": {"c1": -1.0, "c2": -2.0, "c3": 1.0}}"#,
        );
        let r = resolve(&args).unwrap();
        // Total-profit material benefit for delta = 2 maps to (1, 1).
        assert!((r.welfare.zeta - 1.0).abs() < 1e-15);
        assert!((r.welfare.eta - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_invalid_and_ambiguous_welfare() {
        let (_dir, args) = args_with_config(
            r#"{"alpha": 0.0, "beta": 1.0, "tau_theta": 1.0,
                "cost": {"kind": "linear", "c": 0.04},
                "welfare": {"zeta": 1.0}}"#,
        );
        assert!(matches!(resolve(&args), Err(CliError::Config(_))));
        let (_dir, args) = args_with_config(
            r#"{"alpha": 2.0, "beta": 1.0, "tau_theta": 1.0,
                "cost": {"kind": "linear", "c": 0.04},
                "welfare": {"zeta": 1.0, "eta": 1.0}}"#,
        );
        assert!(matches!(resolve(&args), Err(CliError::Config(_))));
    }

    #[test]
    fn flag_cost_overrides_file_cost() {
        let (_dir, mut args) = args_with_config(
            r#"{"alpha": 0.0, "beta": 1.0, "tau_theta": 1.0,
                "cost": {"kind": "linear", "c": 0.04},
                "welfare": {"zeta": 1.0, "eta": 1.0}}"#,
        );
        args.lambda = Some(2.0);
        args.c = Some(0.5);
        let r = resolve(&args).unwrap();
        assert_eq!(r.cost.constant_elasticity(), Some(2.0));
    }

    #[test]
    fn preset_requires_its_parameter() {
        let args = ModelArgs {
            config: None,
            preset: Some(PresetName::Cournot),
            delta: None,
            r: None,
            lambda: None,
            c: None,
            tau_theta: 1.0,
        };
        assert!(matches!(resolve(&args), Err(CliError::Usage(_))));
    }
}
