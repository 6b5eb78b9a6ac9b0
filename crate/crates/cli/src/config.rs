use std::path::PathBuf;

use clap::builder::FalseyValueParser;
use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use tauzeta::identities::{EvalOptions, DEFAULT_DIRICHLET_TERMS, DEFAULT_MAX_LEVEL_2D, DEFAULT_TOLERANCE_2D};
use tauzeta::qexpansion::DEFAULT_MAX_ORDER;
use tauzeta::quadrature::DEFAULT_MAX_LEVEL;
use tauzeta::PrecCtx;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "tauzeta",
    version,
    about = "Compute τ(n) and L(Δ, k), and verify the identities they satisfy",
    after_help = "Environment: TAUZETA_PRECISION sets --precision, TAUZETA_THREADS sets --threads, \
                  TAUZETA_NO_TIMING=1 sets --no-timing.\n\
                  Exit codes: 0 success, 2 resource exhausted, 3 unconverged, 64 usage error, \
                  100 + n when n verifications fail (n capped at 99)."
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Target precision in bits (at least 64)
    #[arg(long, global = true, env = "TAUZETA_PRECISION", default_value_t = 128)]
    pub precision: u32,

    /// Acceptance tolerance; defaults depend on the identity
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tolerance: Option<f64>,

    /// Largest q-series order any computation may build
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ORDER)]
    pub qseries_order: usize,

    /// Refinement limit of one-dimensional quadrature
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_LEVEL)]
    pub quad_max_level: u32,

    /// Refinement limit of each level of the double integrals
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_LEVEL_2D)]
    pub quad_max_level_2d: u32,

    /// Number of τ values the Dirichlet series may use
    #[arg(long, global = true, default_value_t = DEFAULT_DIRICHLET_TERMS)]
    pub dirichlet_terms: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads (default: all cores)
    #[arg(long, global = true, env = "TAUZETA_THREADS")]
    pub threads: Option<usize>,

    /// Report elapsed_ms as 0 so identical runs give identical output
    #[arg(long, global = true, env = "TAUZETA_NO_TIMING", action = ArgAction::SetTrue, value_parser = FalseyValueParser::new())]
    pub no_timing: bool,

    /// Suppress progress messages on standard error
    #[arg(long, short, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print τ(n) for 1 <= n <= limit
    Tau {
        #[arg(long)]
        limit: usize,
    },
    /// Compute L(Δ, k) by one method
    Lvalue {
        #[arg(long)]
        k: i64,
        /// dirichlet, mellin, critical, theorem11, corollary or theorem31
        #[arg(long, default_value = "mellin")]
        method: String,
    },
    /// Run a verification suite or a single identity
    Verify {
        /// exact, analytic1d, analytic2d or all
        #[arg(long, conflicts_with = "id", required_unless_present = "id")]
        suite: Option<String>,
        /// Identity name, e.g. lemma21, theorem11, corollary_k
        #[arg(long)]
        id: Option<String>,
        #[arg(long)]
        k: Option<i64>,
        /// Number of q-coefficients for the exact checks
        #[arg(long)]
        n: Option<usize>,
    },
}

/// Validated settings shared by every command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub ctx: PrecCtx,
    pub tolerance: Option<f64>,
    pub qseries_order: usize,
    pub opts: EvalOptions,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
    pub timing: bool,
    pub quiet: bool,
}

impl RunConfig {
    pub fn from_args(g: &GlobalArgs) -> Result<Self, String> {
        if g.precision < 64 {
            return Err(format!("--precision must be at least 64, got {}", g.precision));
        }
        if let Some(t) = g.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return Err(format!("--tolerance must be positive, got {t}"));
            }
        }
        if g.threads == Some(0) {
            return Err("--threads must be at least 1".into());
        }
        let tolerance_2d = g.tolerance.unwrap_or(DEFAULT_TOLERANCE_2D);
        Ok(RunConfig {
            ctx: PrecCtx::new(g.precision),
            tolerance: g.tolerance,
            qseries_order: g.qseries_order,
            opts: EvalOptions {
                max_level: g.quad_max_level,
                max_level_2d: g.quad_max_level_2d,
                tolerance_2d,
                dirichlet_terms: g.dirichlet_terms,
            },
            format: g.format,
            output: g.output.clone(),
            threads: g.threads,
            timing: !g.no_timing,
            quiet: g.quiet,
        })
    }
}
