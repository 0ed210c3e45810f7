use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "rankdec", version, about = "Randomized decoding of Gabidulin codes beyond the unique radius")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Work-factor table for one parameter set or a batch file.
    Analyze(AnalyzeArgs),
    /// Monte Carlo estimate of the per-guess success rate.
    Simulate(SimulateArgs),
    /// Decode one instance file.
    Decode(DecodeArgs),
    /// Cross-check the library against brute-force oracles.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum CombPoly {
    #[default]
    Cubic,
    None,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum AlgRule {
    #[default]
    Reference,
    AsPrinted,
}

/// `--delta`: a fixed guess dimension or `auto`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DeltaArg {
    #[default]
    Auto,
    Fixed(u32),
}

impl FromStr for DeltaArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(Self::Auto);
        }
        s.parse()
            .map(Self::Fixed)
            .map_err(|_| format!("expected a non-negative integer or `auto`, got `{s}`"))
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long, default_value_t = 2)]
    pub q: u32,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub w: Option<u32>,
    /// JSON array of `{q, m, n, k, w}` objects.
    #[arg(long, conflicts_with_all = ["m", "n", "k", "w"])]
    pub batch: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Polynomial prefactor of the combinatorial attacks.
    #[arg(long, value_enum, default_value_t)]
    pub comb_poly: CombPoly,
    /// Case selection of the algebraic attack estimate.
    #[arg(long, value_enum, default_value_t)]
    pub alg_rule: AlgRule,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimMode {
    /// One guess per fresh instance; counts per-guess successes.
    #[default]
    PerGuess,
    /// Run the decoder to completion per instance; counts guesses.
    Geometric,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 2)]
    pub q: u32,
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub w: u32,
    #[arg(long, default_value = "auto")]
    pub delta: DeltaArg,
    /// Guesses in per-guess mode, instances in geometric mode.
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// Per-instance budget in geometric mode.
    #[arg(long)]
    pub max_iter: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, value_enum, default_value_t)]
    pub mode: SimMode,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    /// Instance JSON file.
    pub instance: PathBuf,
    /// Overrides the radius stored in the instance.
    #[arg(long)]
    pub w: Option<u32>,
    #[arg(long, default_value = "auto")]
    pub delta: DeltaArg,
    #[arg(long)]
    pub max_iter: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Level {
    #[default]
    Fast,
    Full,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, value_enum, default_value_t)]
    pub level: Level,
    /// Perturb one Gaussian binomial to check that the harness notices.
    #[arg(long)]
    pub inject_fault: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn delta_parsing() {
        assert_eq!("auto".parse::<DeltaArg>(), Ok(DeltaArg::Auto));
        assert_eq!("4".parse::<DeltaArg>(), Ok(DeltaArg::Fixed(4)));
        assert!("-1".parse::<DeltaArg>().is_err());
        assert!("four".parse::<DeltaArg>().is_err());
    }

    #[test]
    fn unknown_flags_are_rejected() {
        assert!(Cli::try_parse_from(["rankdec", "analyze", "--m", "8", "--bogus", "1"]).is_err());
        assert!(Cli::try_parse_from(["rankdec", "simulate", "--m", "8", "--n", "8", "--k", "2"]).is_err());
        let cli = Cli::try_parse_from([
            "rankdec", "simulate", "--m", "24", "--n", "24", "--k", "16", "--w", "6", "--delta", "4",
        ])
        .unwrap();
        match cli.command {
            Command::Simulate(a) => {
                assert_eq!(a.delta, DeltaArg::Fixed(4));
                assert_eq!(a.mode, SimMode::PerGuess);
            }
            _ => panic!("wrong subcommand"),
        }
    }
}
