use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod output;

use commands::CliError;

/// Mahler measure of P_d(x, y) = Σ_{0 ≤ i+j ≤ d} x^i y^j.
#[derive(Debug, Parser)]
#[command(name = "mahler", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute m(P_d) for one d.
    Measure {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        d: u32,
        #[arg(long, value_enum, default_value_t = MeasureMethod::Aggregated)]
        method: MeasureMethod,
        /// Gauss–Legendre nodes per panel for the oracle.
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(2..))]
        nodes: u32,
    },
    /// Tabulate m(P_d) over a range of d as CSV.
    Sweep {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        from: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        to: u32,
        /// Also run the quadrature oracle for d up to this value.
        #[arg(long, default_value_t = 0)]
        oracle_up_to: u32,
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(2..))]
        nodes: u32,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit one of the CSV reports.
    Report {
        #[arg(value_enum)]
        kind: ReportKind,
        /// Degree (toric) or comma-separated degrees (limit).
        #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u32).range(1..))]
        d: Vec<u32>,
        /// Comma-separated grid sizes (riemann).
        #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u32).range(2..))]
        n: Vec<u32>,
        /// Subdivisions of each side of T (vol-grid).
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..))]
        grid: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureMethod {
    Pointwise,
    Volsum,
    Aggregated,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportKind {
    Toric,
    VolGrid,
    Limit,
    VolIntegral,
    Riemann,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("MAHLER_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("MAHLER_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot configure {threads} threads: {e}")))
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Measure { d, method, nodes } => commands::measure(d, method, nodes as usize),
        Command::Sweep {
            from,
            to,
            oracle_up_to,
            nodes,
            out,
        } => commands::sweep(from, to, oracle_up_to, nodes as usize, out.as_deref()),
        Command::Report {
            kind,
            d,
            n,
            grid,
            out,
        } => commands::report(kind, &d, &n, grid, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mahler: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
