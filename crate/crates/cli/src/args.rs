use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "powmap", version, about = "Exact differential, exponential-sum, code and curve computations over GF(p^n)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub run: RunArgs,
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Largest number of (u, v) pairs or codewords a full sweep may visit.
    #[arg(long, global = true)]
    pub budget: Option<u128>,

    /// Largest field size, in elements, that may be built.
    #[arg(long, global = true)]
    pub cap: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Either the family `(p, l)` over GF(p^4l), or an explicit field and exponent.
#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    /// Characteristic.
    #[arg(long)]
    pub p: u32,

    /// Family parameter; the field is GF(p^4l) and the exponent p^3l - p^2l + p^l.
    #[arg(long, conflicts_with_all = ["n", "d"])]
    pub l: Option<u32>,

    /// Field degree (explicit mode).
    #[arg(long)]
    pub n: Option<u32>,

    /// Exponent (explicit mode); negative values are reduced mod p^n - 1.
    #[arg(long, allow_negative_numbers = true)]
    pub d: Option<i64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Field descriptor, primitive element and beta.
    FieldInfo(FieldArgs),
    /// Differential spectrum, compared with the closed form in family mode.
    Diffspec(DiffspecArgs),
    /// c-differential uniformity for one c, or a sweep over c outside mu_{p^l+1}.
    Cdiff(CdiffArgs),
    /// One exponential sum S(u, v).
    Expsum(ExpsumArgs),
    /// Value distribution of S(u, v) over u != 0.
    ExpsumDist(ExpsumDistArgs),
    /// Weight enumerator of the trace code.
    CodeWeights(CodeWeightsArgs),
    /// Points on alpha x^n1 + beta y^n2 + 1 = 0.
    CurveCount(CurveArgs),
    /// Whether x^2 + a x + b has both roots in mu_{2^m+1}.
    QuadMu(QuadArgs),
    /// Run every closed-form versus oracle comparison for a list of families.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpectrumMethod {
    /// One pass with a = 1.
    Oracle,
    /// Every a != 0, checking the reduction to a = 1.
    Audit,
}

#[derive(Debug, Args)]
pub struct DiffspecArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long, value_enum, default_value_t = SpectrumMethod::Oracle)]
    pub method: SpectrumMethod,
}

#[derive(Debug, Args)]
pub struct CdiffArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// The multiplier c as 0, 1 or psi^k; omit to sweep.
    #[arg(long)]
    pub c: Option<String>,
}

#[derive(Debug, Args)]
pub struct ExpsumArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    pub u: String,
    #[arg(long)]
    pub v: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistMethod {
    /// Full oracle within the budget, otherwise the reduced rows.
    Auto,
    Oracle,
    Reduced,
    Closed,
}

#[derive(Debug, Args)]
pub struct ExpsumDistArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long, value_enum, default_value_t = DistMethod::Auto)]
    pub method: DistMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightsMethod {
    /// Every method that fits the budget, required to agree.
    Auto,
    Direct,
    ViaSums,
    Closed,
}

#[derive(Debug, Args)]
pub struct CodeWeightsArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long, value_enum, default_value_t = WeightsMethod::Auto)]
    pub method: WeightsMethod,
    /// Also write the 2n generator rows of the short code as CSV digits.
    #[arg(long)]
    pub generator_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub s: u32,
    #[arg(long)]
    pub n1: u64,
    #[arg(long)]
    pub n2: u64,
    /// alpha as an element; defaults to psi^r1.
    #[arg(long, conflicts_with = "r1")]
    pub alpha: Option<String>,
    /// beta as an element; defaults to psi^r2.
    #[arg(long, conflicts_with = "r2")]
    pub beta: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub r1: u64,
    #[arg(long, default_value_t = 0)]
    pub r2: u64,
    /// Also count with the plain double loop.
    #[arg(long)]
    pub naive: bool,
}

#[derive(Debug, Args)]
pub struct QuadArgs {
    /// Half the degree; the field is GF(2^2m).
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub a: String,
    #[arg(long)]
    pub b: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Fields up to 2^14 elements with full oracles.
    Desk,
    /// Desk plus (11, 1) through the reduced routes.
    Extended,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Preset::Desk)]
    pub preset: Preset,
    /// Families as `p,l`; replaces the preset's family list.
    #[arg(long = "family", value_parser = parse_family)]
    pub families: Vec<(u32, u32)>,
    /// Include wall-clock times (makes the report nondeterministic).
    #[arg(long)]
    pub timings: bool,
}

fn parse_family(s: &str) -> Result<(u32, u32), String> {
    let (p, l) = s.split_once(',').ok_or("expected p,l")?;
    let p = p.trim().parse().map_err(|_| format!("bad p in {s:?}"))?;
    let l = l.trim().parse().map_err(|_| format!("bad l in {s:?}"))?;
    Ok((p, l))
}
