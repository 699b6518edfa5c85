//! Command-line grammar. Every subcommand's arguments also serialize into the
//! `inputs` block of a report, so a report can be replayed.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "epperturb", version, about = "Perturbation theory at exceptional points of the tridiagonal benchmark family")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format; grids (scan, pseudo) default to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", content = "inputs", rename_all = "lowercase")]
pub enum Command {
    /// Print the benchmark matrix.
    Build(ModelArgs),
    /// Eigenvalues and reality flags.
    Spectrum(ModelArgs),
    /// Path functions ξ_n(t) and couplings g_n(t).
    Path(ModelArgs),
    /// Jordan chain at the degenerate eigenvalue trace(H)/N.
    Jordan(JordanArgs),
    /// Perturbation seen from the Jordan frame of the EP, secular roots and states.
    Perturb(PerturbArgs),
    /// Classify a 1- or 2-axis parameter grid as physical/broken/near_boundary.
    Scan(ScanArgs),
    /// Bisect along a ray for the edge of the physical domain.
    Boundary(BoundaryArgs),
    /// Metric Θ = Σ κ u u† from left eigenvectors.
    Metric(MetricArgs),
    /// Smallest singular value of zI − H on a grid.
    Pseudo(PseudoArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Build(_) => "build",
            Command::Spectrum(_) => "spectrum",
            Command::Path(_) => "path",
            Command::Jordan(_) => "jordan",
            Command::Perturb(_) => "perturb",
            Command::Scan(_) => "scan",
            Command::Boundary(_) => "boundary",
            Command::Metric(_) => "metric",
            Command::Pseudo(_) => "pseudo",
        }
    }

    pub fn model(&self) -> &ModelArgs {
        match self {
            Command::Build(m) | Command::Spectrum(m) | Command::Path(m) => m,
            Command::Jordan(a) => &a.model,
            Command::Perturb(a) => &a.model,
            Command::Scan(a) => &a.model,
            Command::Boundary(a) => &a.model,
            Command::Metric(a) => &a.model,
            Command::Pseudo(a) => &a.model,
        }
    }

    pub fn default_format(&self) -> Format {
        match self {
            Command::Scan(_) | Command::Pseudo(_) => Format::Csv,
            _ => Format::Json,
        }
    }
}

fn dimension(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n < 2 {
        return Err("N must be at least 2".into());
    }
    Ok(n)
}

fn positive(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if !(x > 0.0 && x.is_finite()) {
        return Err("must be a positive number".into());
    }
    Ok(x)
}

/// Point of the benchmark family.
#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ModelArgs {
    /// Matrix dimension (≥ 2).
    #[arg(long = "N", value_parser = dimension)]
    #[serde(rename = "N")]
    pub n: usize,
    /// Position on the path from the EP (t = 0) to the diagonal limit (t = 1).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "g")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    /// Explicit couplings g_1,…,g_J, outermost first.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<f64>>,
    /// Top-order path coefficients G_1,…,G_J (default 2 − J each).
    #[arg(long = "G", value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(rename = "G", default, skip_serializing_if = "Option::is_none")]
    pub g_top: Option<Vec<f64>>,
    /// Spectral shift added to the diagonal.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub s: f64,
    /// Innermost coupling g_J.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    /// Next-to-innermost coupling g_{J−1}.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    /// Numerical tolerance.
    #[arg(long, default_value_t = 1e-10, value_parser = positive)]
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct JordanArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// Block size; detected from the rank sequence when absent.
    #[arg(long = "K")]
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct PerturbArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// Wave-function order: leading, exact, or a number of series terms.
    #[arg(long, default_value = "exact", value_parser = parse_order)]
    pub order: OrderSpec,
    /// Smallness scale of W (default: t, or ‖W‖∞ off the path).
    #[arg(long, value_parser = positive)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderSpec {
    Leading,
    Exact,
    Terms(usize),
}

fn parse_order(s: &str) -> Result<OrderSpec, String> {
    match s {
        "leading" => Ok(OrderSpec::Leading),
        "exact" => Ok(OrderSpec::Exact),
        n => match n.parse::<usize>() {
            Ok(0) | Err(_) => Err("expected leading, exact or a positive number of terms".into()),
            Ok(n) => Ok(OrderSpec::Terms(n)),
        },
    }
}

fn fields<const K: usize>(s: &str) -> Result<[&str; K], String> {
    let parts: Vec<&str> = s.split(':').collect();
    parts.try_into().map_err(|_| format!("expected {K} ':'-separated fields"))
}

fn num(s: &str) -> Result<f64, String> {
    s.parse::<f64>().map_err(|e| format!("'{s}': {e}"))
}

/// `name:lo:hi:count`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

fn parse_axis(s: &str) -> Result<AxisSpec, String> {
    let [name, lo, hi, count] = fields::<4>(s)?;
    let count: usize = count.parse().map_err(|e| format!("'{count}': {e}"))?;
    if count == 0 {
        return Err("axis needs at least one point".into());
    }
    Ok(AxisSpec { name: name.into(), lo: num(lo)?, hi: num(hi)?, count })
}

/// `name:from:to`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RaySpec {
    pub name: String,
    pub from: f64,
    pub to: f64,
}

fn parse_ray(s: &str) -> Result<RaySpec, String> {
    let [name, from, to] = fields::<3>(s)?;
    Ok(RaySpec { name: name.into(), from: num(from)?, to: num(to)? })
}

/// `re_min:re_max:im_min:im_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

fn parse_window(s: &str) -> Result<WindowSpec, String> {
    let [a, b, c, d] = fields::<4>(s)?;
    Ok(WindowSpec { re_min: num(a)?, re_max: num(b)?, im_min: num(c)?, im_max: num(d)? })
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ScanArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// Grid axis `name:lo:hi:count` with name t, s, a, b or g1…gJ; give once or twice.
    #[arg(long, required = true, num_args = 1, allow_hyphen_values = true, value_parser = parse_axis)]
    pub axis: Vec<AxisSpec>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct BoundaryArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// Ray `name:from:to`; must start inside and end outside the physical domain.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_ray)]
    pub ray: RaySpec,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct MetricArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// Positive weights κ_n, one per level (default all ones).
    #[arg(long, value_delimiter = ',')]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct PseudoArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// Window `re_min:re_max:im_min:im_max`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
    pub window: WindowSpec,
    /// Grid points per axis (≥ 2).
    #[arg(long, default_value_t = 51)]
    pub res: usize,
    /// Levels ε for the membership columns s_min ≤ ε.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(default)]
    pub eps: Vec<f64>,
}
