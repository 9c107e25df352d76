mod commands;
mod render;
mod source;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::render::Format;
use crate::source::FormArgs;

#[derive(Parser, Debug)]
#[command(
    name = "littlewood",
    version,
    about = "Extremal multilinear forms, mixed norms and constant bounds"
)]
struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Worker threads: a positive integer or `auto`.
    #[arg(long, global = true, default_value = "auto")]
    threads: String,

    /// Write the output to a file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the coefficients of T_m or L_m.
    Construct(ConstructArgs),
    /// Mixed (q_1,…,q_m)-norm of a form's coefficients.
    MixedNorm(MixedNormArgs),
    /// Exact sup norm over the unit sup-norm balls.
    Opnorm(OpnormArgs),
    /// Constant bounds for a given arity and exponent vector.
    Bounds(BoundsArgs),
    /// Hull certificates and interpolated exponent vectors.
    Interpolate(InterpolateArgs),
    /// Run a verification suite; exit status 1 if any check fails.
    Verify(VerifyArgs),
    /// Sweep the 3-linear families over a (τ, θ) grid.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub form: source::Family,
    #[arg(long)]
    pub m: usize,
    /// Use the full 2^(m-1) dimension in every slot.
    #[arg(long)]
    pub full: bool,
}

#[derive(Args, Debug)]
pub struct MixedNormArgs {
    #[command(flatten)]
    pub source: FormArgs,
    /// Comma-separated exponents, e.g. `1,2,2` or `40/23,40/29,10/7`.
    #[arg(long)]
    pub q: String,
    /// Reject q with Σ 1/q_i > (m+1)/2.
    #[arg(long)]
    pub require_admissible: bool,
}

#[derive(Args, Debug)]
pub struct OpnormArgs {
    #[command(flatten)]
    pub source: FormArgs,
    /// Enumerate every slot instead of optimizing the last one analytically.
    #[arg(long)]
    pub brute_force: bool,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[arg(long)]
    pub m: usize,
    /// Exponent vector for the lower bounds carried by T_m and L_m.
    #[arg(long)]
    pub q: Option<String>,
    /// τ of a 3-linear family point (requires --theta).
    #[arg(long, requires = "theta")]
    pub tau: Option<String>,
    /// θ of a 3-linear family point (requires --tau).
    #[arg(long, requires = "tau")]
    pub theta: Option<String>,
    #[arg(long, value_enum, default_value = "pos1")]
    pub variant: source::VariantArg,
}

#[derive(Args, Debug)]
pub struct InterpolateArgs {
    /// Anchor exponent vector; repeat for each anchor.
    #[arg(long = "anchor", required = true)]
    pub anchors: Vec<String>,
    /// Target exponent vector: certify it against the anchors.
    #[arg(long, conflicts_with = "weights")]
    pub q: Option<String>,
    /// Weights θ_k: compute the interpolated exponent vector.
    #[arg(long)]
    pub weights: Option<String>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: verify::Suite,
    /// Inclusive arity range `a..b` or a single arity.
    #[arg(long)]
    pub m: Option<String>,
    /// Largest m for the envelope suite.
    #[arg(long, default_value_t = 500)]
    pub max_m: usize,
    /// Grid size for the 3-linear suite.
    #[arg(long, default_value_t = 9)]
    pub grid: usize,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Points per axis; τ and θ range over {0, 1/(g-1), …, 1}.
    #[arg(long, default_value_t = 9)]
    pub grid: usize,
    #[arg(long, value_enum, default_value = "both")]
    pub variant: source::SweepVariant,
}

fn configure_threads(spec: &str) -> Result<(), commands::Failure> {
    let n =
        match spec {
            "auto" => return Ok(()),
            s => s.parse::<usize>().ok().filter(|&n| n > 0).ok_or_else(|| {
                commands::Failure::config(format!("invalid --threads value {s:?}"))
            })?,
        };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| commands::Failure::config(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads(&cli.threads).and_then(|_| {
        let out = match &cli.command {
            Command::Construct(a) => commands::construct(a, cli.format),
            Command::MixedNorm(a) => commands::mixed_norm(a, cli.format),
            Command::Opnorm(a) => commands::opnorm(a, cli.format),
            Command::Bounds(a) => commands::bounds(a, cli.format),
            Command::Interpolate(a) => commands::interpolate(a, cli.format),
            Command::Verify(a) => verify::run(a, cli.format),
            Command::Sweep(a) => commands::sweep(a, cli.format),
        }?;
        render::emit(&out, cli.output.as_deref())?;
        Ok(out.status)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
