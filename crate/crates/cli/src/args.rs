use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "entlab",
    version,
    about = "Entanglability of thermal spin states under Bell-basis unitaries"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Negativity over an (N, α) grid.
    Negativity(NegativityArgs),
    /// Boundary α of separability/distillability curves over a range of N.
    Bounds(BoundsArgs),
    /// Critical qubit count of one curve at fixed α.
    Threshold(ThresholdArgs),
    /// PPT/NPT per split and full separability/distillability of E_φ(UρU†).
    Classify(ClassifyArgs),
    /// Random search for a reachable state that is NPT on some split.
    Search(SearchArgs),
    /// Unitary-reachability feasibility of a candidate spectrum read from CSV.
    Feasible(FeasibleArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write the table here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NRange {
    #[arg(long, default_value_t = 2)]
    pub n_min: u64,
    #[arg(long, default_value_t = 12)]
    pub n_max: u64,
    #[arg(long, default_value_t = 1)]
    pub n_step: u64,
}

impl NRange {
    pub fn values(&self) -> Result<Vec<u64>, String> {
        if self.n_min < 2 || self.n_max < self.n_min || self.n_step == 0 {
            return Err(format!(
                "invalid N range {}..={} step {}: need 2 <= n-min <= n-max and step >= 1",
                self.n_min, self.n_max, self.n_step
            ));
        }
        Ok((self.n_min..=self.n_max)
            .step_by(self.n_step as usize)
            .collect())
    }
}

/// `A:B`, a range of log₁₀(1/α).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decades {
    pub from: f64,
    pub to: f64,
}

impl FromStr for Decades {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| format!("expected A:B, got `{s}`"))?;
        let parse = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
        let d = Decades {
            from: parse(a)?,
            to: parse(b)?,
        };
        if !(d.from.is_finite() && d.to.is_finite()) || d.to < d.from {
            return Err(format!("decade range `{s}` must be finite and increasing"));
        }
        Ok(d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CircuitArg {
    Ch,
    Chfan,
}

impl CircuitArg {
    pub fn as_str(&self) -> &'static str {
        match self {
            CircuitArg::Ch => "ch",
            CircuitArg::Chfan => "chfan",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitArg {
    /// Qubit 1 against the rest.
    One,
    /// First N/2 qubits against the last N/2.
    Half,
    /// Set bits (qubit 1 = most significant) form party A.
    Mask(u64),
}

impl FromStr for SplitArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "one" => Ok(SplitArg::One),
            "half" => Ok(SplitArg::Half),
            _ => {
                let hex = s
                    .strip_prefix("mask:")
                    .ok_or_else(|| format!("expected one, half or mask:<hex>, got `{s}`"))?;
                let hex = hex.trim_start_matches("0x");
                u64::from_str_radix(hex, 16)
                    .map(SplitArg::Mask)
                    .map_err(|e| format!("bad mask `{hex}`: {e}"))
            }
        }
    }
}

impl std::fmt::Display for SplitArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SplitArg::One => f.write_str("one"),
            SplitArg::Half => f.write_str("half"),
            SplitArg::Mask(m) => write!(f, "mask:{m:x}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PathArg {
    /// Closed form when available, dense otherwise.
    Auto,
    Analytic,
    Dense,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Approximate,
}

impl From<ModeArg> for entlab_core::EpsilonMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => entlab_core::EpsilonMode::Exact,
            ModeArg::Approximate => entlab_core::EpsilonMode::Approximate,
        }
    }
}

#[derive(Debug, Args)]
pub struct NegativityArgs {
    #[command(flatten)]
    pub n: NRange,
    /// Range of log₁₀(1/α), e.g. `0:5`.
    #[arg(long, default_value = "0:5")]
    pub alpha_decades: Decades,
    #[arg(long, default_value_t = 10)]
    pub points_per_decade: u32,
    #[arg(long, value_enum, default_value_t = CircuitArg::Ch)]
    pub circuit: CircuitArg,
    #[arg(long, default_value = "one")]
    pub split: SplitArg,
    #[arg(long, value_enum, default_value_t = PathArg::Auto)]
    pub path: PathArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Comma-separated curve ids; all curves when omitted.
    #[arg(long, value_delimiter = ',')]
    pub curves: Vec<String>,
    #[command(flatten)]
    pub n: NRange,
    /// ε(N, α) conversion for ε-space curves.
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    /// A curve id, or `effpure_dist` for effective-pure distillability.
    pub curve: String,
    #[arg(long)]
    pub alpha: f64,
    /// ε(N, α) conversion; `effpure_dist` reports both modes when omitted.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = CircuitArg::Ch)]
    pub circuit: CircuitArg,
    /// Report a single split instead of one row per Hamming weight.
    #[arg(long, conflicts_with = "all_splits")]
    pub split: Option<SplitArg>,
    /// Every canonical split, cross-checked against the dense oracle (N ≤ 12).
    #[arg(long)]
    pub all_splits: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1000)]
    pub budget: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FeasibleArgs {
    /// CSV with a `# n=<N>` header and one eigenvalue per line.
    #[arg(long)]
    pub spectrum: PathBuf,
    #[arg(long)]
    pub alpha: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}
