use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qmetro::mc::DEFAULT_SEED;

/// Quantum-limited phase estimation: precision bounds, NOON and squeezed
/// probes under loss, heralded photon statistics and Monte-Carlo checks.
///
/// Every command emits a dataset (CSV or JSON) to standard output, to
/// --out, or to $QMETRO_OUT_DIR/<figure_id>.<ext> when that is set.
/// Exit status: 0 success, 2 invalid input, 1 runtime failure.
#[derive(Debug, Parser)]
#[command(name = "qmetro", version)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv, global = true)]
    pub format: OutputFormat,

    /// Output file, written atomically.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Phase bounds: SQL 1/(2√n_sig) and 1/√n0, Heisenberg 1/n0,
    /// squeezed-vacuum CRB 1/(2√(2(n²+n))), loss bound √((1-η)/η)/(2√n_sig).
    Limits(LimitsArgs),
    /// NOON states under loss: Δφ = √((η^-N + 1)/2)/N per state,
    /// threshold η = (N-1)^(-1/N), optimum N ln η + η^N + 1 = 0, flux 4 n_sig/N².
    Noon(NoonArgs),
    /// Squeezed homodyne: Δφ = √[(V + (1-η)/η)/(4 n_sig - V - 1/V + 2)],
    /// V_opt = (η + √(4η(1-η) n_sig + 1))/(4η n_sig + η + 1).
    Squeezed(SqueezedArgs),
    /// Ratio Δφ_NOON/Δφ_SQZ of the optimal strategies, at a point or on the
    /// default efficiency × photon grid.
    Compare(CompareArgs),
    /// Photon distribution at the sample after a twin-beam herald:
    /// thinning p'(N) = Σ C(N',N) η^N (1-η)^(N'-N) p(N') and Bayes' rule.
    Condition(ConditionArgs),
    /// Seeded Monte-Carlo checks of the closed forms.
    Simulate {
        #[command(subcommand)]
        sim: SimCommand,
    },
    /// Figure datasets with default grids recorded in the metadata.
    Figure {
        #[command(subcommand)]
        figure: FigureCommand,
    },
}

#[derive(Debug, Args)]
pub struct LimitsArgs {
    /// Mean photon number through the sample.
    #[arg(long)]
    pub n_sig: f64,
    /// Probe-arm efficiency; adds the quantum-noise and loss bounds.
    #[arg(long)]
    pub eta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct NoonArgs {
    /// NOON state size N.
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub n_sig: Option<f64>,
    /// Efficiency above which N-photon NOON beats the SQL, (N-1)^(-1/N).
    #[arg(long, conflicts_with_all = ["optimal", "flux"], requires = "n")]
    pub threshold: bool,
    /// Optimal N at --eta: root of N ln η + η^N + 1 = 0.
    #[arg(long, conflicts_with = "flux", requires = "eta")]
    pub optimal: bool,
    /// Lossless trial rate matching the SQL of --n-sig photons, 4 n_sig/N².
    #[arg(long, requires_all = ["n", "n_sig"])]
    pub flux: bool,
}

#[derive(Debug, Args)]
pub struct SqueezedArgs {
    #[arg(long)]
    pub n_sig: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    /// Squeezed variance (vacuum = 1); omit to use the optimum.
    #[arg(long)]
    pub v_sqz: Option<f64>,
    /// Coherent amplitude for the fixed-amplitude form (1/(2α))√(V + (1-η)/η).
    #[arg(long, conflicts_with = "n_sig")]
    pub alpha: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, requires = "n_sig")]
    pub eta: Option<f64>,
    #[arg(long, requires = "eta")]
    pub n_sig: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Probe,
    Detector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Detector {
    NumberResolving,
    Bucket,
}

#[derive(Debug, Args)]
pub struct ConditionArgs {
    /// Twin-beam interaction strength, mean photons ε/(1-ε).
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    #[arg(long, value_enum, default_value_t = Side::Probe)]
    pub side: Side,
    #[arg(long, value_enum, default_value_t = Detector::NumberResolving)]
    pub detector: Detector,
    /// Reference-detector count (number-resolving only).
    #[arg(long, default_value_t = 1)]
    pub n_det: usize,
}

#[derive(Debug, Args)]
pub struct SeedArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum SimCommand {
    /// Coherent Mach-Zehnder: φ̂ = π/2 - (n_A - n_B)/(η n0), reference 1/√(η n0).
    Mz {
        #[arg(long, default_value_t = 10_000.0)]
        n0: f64,
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        #[arg(long, default_value_t = FRAC_PI_2)]
        phase: f64,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[command(flatten)]
        seed: SeedArgs,
    },
    /// Squeezed homodyne: Y = √η(2αφ + √V z₁) + √(1-η) z₂, φ̂ = Y/(2α√η).
    Homodyne {
        #[arg(long, default_value_t = 10.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        v_sqz: f64,
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        #[arg(long, default_value_t = 0.0)]
        phase: f64,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[command(flatten)]
        seed: SeedArgs,
    },
    /// Two-photon NOON fringe P = (1 + cos 2φ)/2 against the classical (1 + cos φ)/2.
    NoonFringe {
        #[arg(long, default_value_t = 64)]
        points: usize,
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        #[command(flatten)]
        seed: SeedArgs,
    },
    /// Hong-Ou-Mandel: coincidence probability (1 - s²)/2 for mode overlap s.
    Hom {
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long)]
        distinguishable: bool,
        #[command(flatten)]
        seed: SeedArgs,
    },
    /// Absorption estimate 1 - k/n_sig: Var α(1-α)/n_sig heralded, (1-α)/n_sig coherent.
    Absorption {
        #[arg(long, default_value_t = 0.1)]
        alpha: f64,
        #[arg(long, default_value_t = 10_000)]
        n_sig: u64,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[command(flatten)]
        seed: SeedArgs,
    },
}

// variant names mirror the figure-* subcommand names
#[allow(clippy::enum_variant_names)]
#[derive(Debug, Subcommand)]
pub enum FigureCommand {
    /// SQL, Heisenberg, squeezed CRB and loss boundaries against n_sig.
    FigLimits {
        /// Comma-separated efficiencies for the loss boundaries.
        #[arg(long, value_delimiter = ',', default_values_t = [0.5, 0.9, 0.99])]
        etas: Vec<f64>,
    },
    /// Optimal NOON size and enhancement against η.
    FigNoonLoss,
    /// Optimal squeezing and enhancement against η for n_sig ∈ {1, 10, 100, 1000}.
    FigSqueezedLoss,
    /// NOON/squeezed precision ratio heat map.
    FigCompare,
    /// Conditional photon distributions at η ∈ {1, 0.7, 0.4, 0.1}, ε = 0.5.
    FigConditional {
        #[arg(long, value_enum, default_value_t = Side::Probe)]
        side: Side,
        #[arg(long, value_enum, default_value_t = Detector::NumberResolving)]
        detector: Detector,
    },
    /// Best NOON precision against n_sig at one efficiency.
    FigNoonCurve {
        #[arg(long, default_value_t = 0.9)]
        eta: f64,
    },
}
