use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use valueset_cli::families::{example_text, Family, FamilyParams};
use valueset_cli::report::{invariant_report, ReportOptions};
use valueset_cli::verify::{verify, VerifyOptions};
use valueset_cli::{load_map, plot, CliError};

/// Value sets and dilation invariants of polynomial maps over finite fields.
#[derive(Parser)]
#[command(name = "valueset", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FieldArgs {
    /// Field order q; defaults to a `# q=<q>` header in the map file.
    #[arg(long)]
    q: Option<u64>,
    /// Modulus coefficients, constant term first (e.g. `1,1,1` for x^2+x+1).
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u64>>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the invariant report of a map file as JSON.
    Invariants {
        file: PathBuf,
        #[command(flatten)]
        field: FieldArgs,
        /// Do not enumerate the value set.
        #[arg(long)]
        no_value_set: bool,
        /// Also compute U(f).
        #[arg(long)]
        u: bool,
        /// Largest k tried for U(f); defaults to q^n - 1.
        #[arg(long)]
        u_cap: Option<u64>,
        /// Skip heavy steps beyond their envelope instead of failing.
        #[arg(long)]
        skip_heavy: bool,
    },
    /// Check every bound on a seeded random or exhaustive corpus.
    Verify {
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Enumerate every map of total degree <= --max-degree.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long, default_value_t = 3)]
        max_terms: usize,
        /// Also check U(f) (needs q^n <= 4096).
        #[arg(long)]
        u: bool,
    },
    /// Print a sharp example map: cusick-muller, norm-map or zan-cao.
    Example {
        name: String,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        a: Option<u64>,
        #[arg(long)]
        k: Option<u32>,
    },
    /// Draw the Newton polytope of a two-variable map as SVG.
    Plot {
        file: PathBuf,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Invariants {
            file,
            field,
            no_value_set,
            u,
            u_cap,
            skip_heavy,
        } => {
            let text = std::fs::read_to_string(file)?;
            let map = load_map(&text, field.q, field.modulus)?;
            let opts = ReportOptions {
                value_set: !no_value_set,
                u,
                u_cap,
                skip_heavy,
            };
            println!("{}", to_json(&invariant_report(&map, &opts)?));
        }
        Command::Verify {
            q,
            n,
            count,
            seed,
            exhaustive,
            max_degree,
            max_terms,
            u,
        } => {
            let opts = VerifyOptions {
                qs: q,
                ns: n,
                count,
                seed,
                exhaustive,
                max_degree,
                max_terms,
                check_u: u,
            };
            let summary = verify(&opts)?;
            println!("{}", to_json(&summary));
            if !summary.violations.is_empty() {
                return Err(CliError::Violation(format!(
                    "{} violation(s)",
                    summary.violations.len()
                )));
            }
        }
        Command::Example { name, q, n, a, k } => {
            let family: Family = name.parse()?;
            print!("{}", example_text(family, FamilyParams { q, n, a, k })?);
        }
        Command::Plot { file, field, out } => {
            let text = std::fs::read_to_string(file)?;
            let map = load_map(&text, field.q, field.modulus)?;
            std::fs::write(out, plot::plot(&map)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
