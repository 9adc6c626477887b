use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sumcol::verifier::DEFAULT_CAP;
use sumcol::{FreeMode, Layer};

#[derive(Debug, Parser)]
#[command(
    name = "sumcol",
    version,
    about = "Colourings of 4-free abelian groups without monochromatic {2a, 2b, a+b}"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the JSON report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decompose a presentation and check it for elements of order 4.
    Analyze(AnalyzeArgs),
    /// Show where each canonical generator lands in the ambient group.
    Embed(EmbedArgs),
    /// Print the colour of each element given in canonical text form.
    Colour(ColourArgs),
    /// Sweep a finite window for monochromatic {2a, 2b, a+b}.
    Verify(VerifyArgs),
    /// Show how an element of order 4 breaks the construction.
    Demo(DemoArgs),
    /// Exhaustive colouring search in a small finite group.
    Search(SearchArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Presentation file (`-` for stdin).
    #[arg(long, short)]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    /// Presentation file (`-` for stdin).
    #[arg(long, short)]
    pub input: PathBuf,

    #[arg(long, value_enum, default_value_t = FreeModeArg::Rational)]
    pub free_mode: FreeModeArg,
}

/// Where the ambient group comes from. Without either flag the default
/// sweep signature is used.
#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Presentation file (`-` for stdin); its embedding fixes the signature.
    #[arg(long, short, conflicts_with = "signature")]
    pub input: Option<PathBuf>,

    /// Ambient signature, e.g. `prufer=[3,5];s=2;r=2`.
    #[arg(long)]
    pub signature: Option<String>,

    /// Overrides the mode carried by `--signature` (default rational).
    #[arg(long, value_enum)]
    pub free_mode: Option<FreeModeArg>,
}

#[derive(Debug, Args)]
pub struct ColourArgs {
    #[command(flatten)]
    pub source: SourceArgs,

    /// Colour layer to leave out (repeatable).
    #[arg(long, value_enum)]
    pub drop_layer: Vec<LayerArg>,

    /// Elements in canonical text form, e.g. `d:{0=1/9};t:01;q:(0,3/2)`.
    #[arg(required = true)]
    pub elements: Vec<String>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Start from a documented window; other flags override its bounds.
    #[arg(long, value_enum, conflicts_with_all = ["input", "signature"])]
    pub sample: Option<Preset>,

    /// Prüfer denominators up to p^depth [default: 2, or the largest odd
    /// exponent of the presentation].
    #[arg(long)]
    pub prufer_depth: Option<u32>,

    /// Free numerators n with |n| <= bound [default: 2].
    #[arg(long)]
    pub q_bound: Option<u64>,

    /// Free denominators up to this bound, rational mode only [default: 2].
    #[arg(long)]
    pub q_den_bound: Option<u64>,

    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    pub mode: ModeArg,

    /// Elements drawn in random mode.
    #[arg(long, default_value_t = 10_000)]
    pub count: usize,

    /// Seed for random mode.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Largest number of sample elements.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: SourceArgs,

    #[command(flatten)]
    pub sample: SampleArgs,

    /// Worker threads for the pair sweep.
    #[arg(long, default_value_t = 1)]
    pub parallel: usize,

    /// Colour layer to leave out (repeatable); a diagnostic.
    #[arg(long, value_enum)]
    pub drop_layer: Vec<LayerArg>,

    /// Violations listed in the report (all are counted).
    #[arg(long, default_value_t = sumcol::verifier::DEFAULT_VIOLATION_LIMIT)]
    pub violation_limit: usize,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    /// Cyclic orders of the finite group, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "4,4")]
    pub group: Vec<u64>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Cyclic orders of the finite group, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub group: Vec<u64>,

    /// Number of colours.
    #[arg(long, default_value_t = 2, conflicts_with = "min")]
    pub colours: u32,

    /// Find the least number of colours instead.
    #[arg(long)]
    pub min: bool,

    /// Colour assignments tried before giving up.
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FreeModeArg {
    Rational,
    Integer,
}

impl From<FreeModeArg> for FreeMode {
    fn from(m: FreeModeArg) -> Self {
        match m {
            FreeModeArg::Rational => FreeMode::Rational,
            FreeModeArg::Integer => FreeMode::Integer,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Exhaustive,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LayerArg {
    D,
    Y,
    Halvable,
}

impl From<LayerArg> for Layer {
    fn from(l: LayerArg) -> Self {
        match l {
            LayerArg::D => Layer::DProfile,
            LayerArg::Y => Layer::YProfile,
            LayerArg::Halvable => Layer::Halvable,
        }
    }
}

/// Documented windows. `halvable`, `d` and `y` each show violations once
/// that layer is dropped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Default,
    Halvable,
    D,
    Y,
}
