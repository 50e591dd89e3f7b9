use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::Failure;

#[derive(Debug, Parser)]
#[command(
    name = "riccati",
    version,
    about = "Homographic time stepping for Riccati differential equations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate one case and write its eigenvalue trajectory as CSV.
    Run(RunArgs),
    /// Run the homographic, Euler and RK2 schemes side by side.
    Compare(RunArgs),
    /// Check the vehicle-string reference solution and reproduce it.
    #[command(name = "validate-figure13")]
    ValidateFigure13(ValidateArgs),
    /// Observed convergence order of the scalar scheme.
    ScalarOrder(ScalarOrderArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseArg {
    SquareRoot,
    Oscillator,
    Vehicles,
    Wave,
    Scalar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeArg {
    Homographic,
    Euler,
    Rk2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightingArg {
    Separations,
    Velocities,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(try_from = "RawMu")]
pub enum MuSetting {
    Value(f64),
    Auto,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawMu {
    Number(f64),
    Text(String),
}

impl TryFrom<RawMu> for MuSetting {
    type Error = String;

    fn try_from(raw: RawMu) -> Result<Self, String> {
        match raw {
            RawMu::Number(v) => Ok(Self::Value(v)),
            RawMu::Text(s) => parse_mu(&s),
        }
    }
}

fn parse_mu(s: &str) -> Result<MuSetting, String> {
    if s == "auto" {
        return Ok(MuSetting::Auto);
    }
    s.parse::<f64>()
        .map(MuSetting::Value)
        .map_err(|_| format!("`{s}` is neither a number nor `auto`"))
}

#[derive(Debug, Clone, Args, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunArgs {
    /// JSON file with any of these options; flags take precedence.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub case: Option<CaseArg>,
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeArg>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// Shift parameter, or `auto` for max(λmax(A + Aᵗ), 0) + 0.1.
    #[arg(long, value_parser = parse_mu)]
    pub mu: Option<MuSetting>,
    #[arg(long, conflicts_with = "steady")]
    pub t_end: Option<f64>,
    /// Iterate until the relative step change drops below --tol.
    #[arg(long)]
    #[serde(default)]
    pub steady: bool,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_steps: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,

    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub omega2: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long, value_enum)]
    pub weighting: Option<WeightingArg>,
    #[arg(long)]
    pub modes: Option<usize>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub length: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub d: Option<f64>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident; $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl RunArgs {
    /// File options overlaid with the command-line flags.
    pub fn resolve(self) -> Result<RunConfig, Failure> {
        let mut merged = match &self.config {
            Some(path) => read_config(path)?,
            None => RunArgs::default(),
        };
        let file_steady = merged.steady;
        let file_t_end = merged.t_end;
        let flags = self;
        overlay!(merged, flags; case, scheme, dt, mu, tol, max_steps, output,
                 alpha, omega2, delta, b, weighting, modes, c, length, beta, k, a, q, d);
        let (t_end, steady) = match (flags.t_end, flags.steady) {
            (Some(t), _) => (Some(t), false),
            (None, true) => (None, true),
            (None, false) => {
                if file_steady && file_t_end.is_some() {
                    return Err(Failure::usage("config sets both `t_end` and `steady`"));
                }
                (file_t_end, file_steady)
            }
        };
        let case = merged
            .case
            .ok_or_else(|| Failure::usage("no case given; use --case or a config file"))?;
        if let Some(dt) = merged.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(Failure::usage(format!("--dt must be positive, got {dt}")));
            }
        }
        if let Some(t) = t_end {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Failure::usage(format!(
                    "--t-end must be nonnegative, got {t}"
                )));
            }
        }
        Ok(RunConfig {
            case,
            scheme: merged.scheme.unwrap_or(SchemeArg::Homographic),
            dt: merged.dt,
            mu: merged.mu,
            horizon: if steady {
                Horizon::Steady
            } else {
                Horizon::Until(t_end.unwrap_or(DEFAULT_T_END))
            },
            tol: merged.tol,
            max_steps: merged.max_steps,
            output: merged.output.clone(),
            params: merged,
        })
    }
}

pub const DEFAULT_T_END: f64 = 10.0;

fn read_config(path: &Path) -> Result<RunArgs, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("invalid config {}: {e}", path.display())))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Horizon {
    Until(f64),
    Steady,
}

/// Fully merged run options.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub case: CaseArg,
    pub scheme: SchemeArg,
    pub dt: Option<f64>,
    pub mu: Option<MuSetting>,
    pub horizon: Horizon,
    pub tol: Option<f64>,
    pub max_steps: Option<usize>,
    pub output: Option<PathBuf>,
    /// Case-parameter overrides.
    pub params: RunArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(long, default_value_t = 0.1)]
    pub mu: f64,
    #[arg(long, default_value_t = 0.1)]
    pub dt: f64,
    #[arg(long, default_value_t = 100_000)]
    pub max_steps: usize,
    #[arg(long, value_enum, default_value = "separations")]
    pub weighting: WeightingArg,
}

#[derive(Debug, Clone, Args)]
pub struct ScalarOrderArgs {
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0)]
    pub q: f64,
    #[arg(long, default_value_t = 0.0)]
    pub d: f64,
    /// Initial value of the scheme; defaults to `d`.
    #[arg(long)]
    pub d_delta: Option<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.1,0.05,0.025")]
    pub dt_list: Vec<f64>,
    #[arg(long, default_value_t = 10.0)]
    pub t_end: f64,
}
