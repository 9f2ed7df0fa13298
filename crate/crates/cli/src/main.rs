use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use ssr_cli::commands::{self, Group, Outcome, SsrChoice};
use ssr_cli::report::Format;
use ssr_cli::CliError;
use ssr_core::entanglement::Method;

/// Superselection-constrained entanglement of qubit ensembles.
#[derive(Parser)]
#[command(name = "ssrent", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SsrArg {
    Sn,
    Su2,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Closed,
    Numeric,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    Sn,
    U1,
}

#[derive(Clone, Copy, ValueEnum)]
enum CovarianceGroupArg {
    Sn,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Spin sectors of N qubits: dimensions, multiplicities, and their sum.
    Multiplicities {
        #[arg(long)]
        n: usize,
    },
    /// Constrained entanglement of N Bell pairs.
    Bell {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "both")]
        ssr: SsrArg,
        #[arg(long, value_enum, default_value = "closed")]
        method: MethodArg,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
    /// Closed-form rows over a list of pair counts.
    Sweep {
        /// Comma-separated pair counts.
        #[arg(long, value_delimiter = ',', num_args = 1.., conflicts_with = "n_max", required_unless_present = "n_max")]
        n_list: Vec<usize>,
        /// Use 4, 16, 64, … up to this value.
        #[arg(long)]
        n_max: Option<usize>,
        /// Write here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
    /// Twirl a state file over S_n (factor permutations) or U(1) (charge rotations).
    Twirl {
        #[arg(long, value_enum)]
        group: GroupArg,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Sector-wise S_n twirl in the Schur basis (qubits only).
        #[arg(long)]
        fast: bool,
        /// Operator file holding the charge generator, for `--group u1`.
        #[arg(long)]
        generator: Option<PathBuf>,
    },
    /// Check a channel file for covariance under permutations of N qubits.
    Covariance {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long, value_enum, default_value = "sn")]
        group: CovarianceGroupArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Cross-check fast paths and closed forms against brute force (N ≤ 4).
    Verify {
        #[arg(long)]
        n: usize,
    },
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let outcome = match cli.command {
        Command::Multiplicities { n } => commands::multiplicities(n)?,
        Command::Bell { n, ssr, method, format } => {
            let ssr = match ssr {
                SsrArg::Sn => SsrChoice::Sn,
                SsrArg::Su2 => SsrChoice::Su2,
                SsrArg::Both => SsrChoice::Both,
            };
            let method = match method {
                MethodArg::Closed => Method::ClosedForm,
                MethodArg::Numeric => Method::BruteForce,
            };
            commands::bell(n, ssr, method, format.into())?
        }
        Command::Sweep {
            n_list,
            n_max,
            out,
            format,
        } => {
            let n_values = match n_max {
                Some(max) => commands::geometric_n_values(max),
                None => n_list,
            };
            commands::sweep(&n_values, format.into(), out.as_deref())?
        }
        Command::Twirl {
            group,
            input,
            out,
            fast,
            generator,
        } => {
            let group = match group {
                GroupArg::Sn => Group::Sn,
                GroupArg::U1 => Group::U1,
            };
            commands::twirl(group, &input, &out, fast, generator.as_deref())
                .with_context(|| format!("twirling {}", input.display()))?
        }
        Command::Covariance { channel, group, n, tol } => {
            let CovarianceGroupArg::Sn = group;
            commands::covariance(&channel, n, tol).with_context(|| format!("checking {}", channel.display()))?
        }
        Command::Verify { n } => commands::verify(n)?,
    };
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(outcome.stdout.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(3);
            }
            ExitCode::from(outcome.status)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = err.downcast_ref::<CliError>().map_or(3, CliError::exit_code);
            ExitCode::from(code)
        }
    }
}
