use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use massey_cli::commands::{self, error_report};
use massey_cli::{load_input, FixedArgs, Report};

/// Exact cohomology, triple Massey products and equivariant transfer checks.
///
/// INPUT is a model file or `builtin:<name>` (heisenberg, torus,
/// kodaira_thurston, sphere, truncated_polynomial, point, two_points,
/// sphere_equivariant, sphere_rotation, families).
///
/// Exit codes: 0 ok, 1 failure, 2 parse error, 3 invalid input,
/// 10 vanishes, 11 undefined, 12 cap too small, 13 premise failed,
/// 14 invalid datum, 15 findings, 16 budget exhausted, 17 inconclusive.
#[derive(Parser)]
#[command(name = "massey", version)]
struct Cli {
    #[arg(long, value_enum, default_value = "human", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Human,
    Structured,
}

#[derive(Args)]
struct FixedFlags {
    /// Fixed-component algebra (defaults to the config's, then the first).
    #[arg(long)]
    algebra: Option<String>,
    /// Config block to take the algebra, bundles, cap and datum from.
    #[arg(long)]
    config: Option<String>,
    /// Degree cap of the Cartan model.
    #[arg(long)]
    cap: Option<usize>,
    /// Line bundle as C1:WEIGHT, e.g. `0:1` or `x*z:2`; repeatable.
    #[arg(long = "bundle", allow_hyphen_values = true)]
    bundles: Vec<String>,
}

impl From<FixedFlags> for FixedArgs {
    fn from(f: FixedFlags) -> Self {
        FixedArgs {
            algebra: f.algebra,
            config: f.config,
            cap: f.cap,
            bundles: f.bundles,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Betti numbers and class bases.
    Cohomology {
        input: String,
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Triple Massey product <a, b, c>.
    Massey {
        input: String,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(allow_hyphen_values = true)]
        c: String,
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Equivariant Euler class of the given line bundles.
    Euler {
        input: String,
        #[command(flatten)]
        fixed: FixedFlags,
    },
    /// Non-vanishing of <χu, χv, χw> in the Cartan model.
    Lemma32 {
        input: String,
        #[arg(allow_hyphen_values = true)]
        u: String,
        #[arg(allow_hyphen_values = true)]
        v: String,
        #[arg(allow_hyphen_values = true)]
        w: String,
        #[command(flatten)]
        fixed: FixedFlags,
    },
    /// Validate a transfer datum; with a triple, transfer its product.
    Transfer {
        input: String,
        #[arg(num_args = 0..=3, allow_hyphen_values = true)]
        triple: Vec<String>,
        #[arg(long)]
        config: Option<String>,
    },
    /// Full chain from the fixed component to the ambient ring.
    Theorem11 {
        input: String,
        #[arg(allow_hyphen_values = true)]
        u: String,
        #[arg(allow_hyphen_values = true)]
        v: String,
        #[arg(allow_hyphen_values = true)]
        w: String,
        #[command(flatten)]
        fixed: FixedFlags,
        /// none, tautological, corrupt:N or config.
        #[arg(long)]
        datum: Option<String>,
    },
    /// Search a family of configurations for transfer failures.
    Scan {
        input: String,
        /// Maximum number of Massey product evaluations.
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
    },
}

fn input_of(command: &Command) -> (&'static str, &str) {
    match command {
        Command::Cohomology { input, .. } => ("cohomology", input),
        Command::Massey { input, .. } => ("massey", input),
        Command::Euler { input, .. } => ("euler", input),
        Command::Lemma32 { input, .. } => ("lemma32", input),
        Command::Transfer { input, .. } => ("transfer", input),
        Command::Theorem11 { input, .. } => ("theorem11", input),
        Command::Scan { input, .. } => ("scan", input),
    }
}

fn execute(command: Command) -> Report {
    let (name, path) = input_of(&command);
    let input = match load_input(path) {
        Ok(i) => i,
        Err(e) => return error_report(name, &e),
    };
    match command {
        Command::Cohomology {
            algebra,
            cap,
            max_degree,
            ..
        } => commands::cohomology(&input, algebra.as_deref(), cap, max_degree),
        Command::Massey { a, b, c, algebra, cap, .. } => {
            commands::massey(&input, algebra.as_deref(), cap, &[a, b, c])
        }
        Command::Euler { fixed, .. } => commands::euler(&input, &fixed.into()),
        Command::Lemma32 { u, v, w, fixed, .. } => commands::lemma32(&input, &fixed.into(), &[u, v, w]),
        Command::Transfer { triple, config, .. } => {
            if !(triple.is_empty() || triple.len() == 3) {
                let e = massey_core::Error::InvalidArgument("transfer takes zero or three classes".into());
                return error_report("transfer", &e);
            }
            commands::transfer(&input, config.as_deref(), &triple)
        }
        Command::Theorem11 {
            u, v, w, fixed, datum, ..
        } => commands::theorem11(&input, &fixed.into(), &[u, v, w], datum.as_deref()),
        Command::Scan { budget, .. } => commands::scan(&input, budget),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = execute(cli.command);
    let text = match cli.format {
        Format::Human => report.to_human(),
        Format::Structured => report.to_structured(),
    };
    print!("{text}");
    ExitCode::from(report.exit_code as u8)
}
