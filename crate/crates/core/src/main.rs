use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tricell::conditions::{Moduli, Rational};
use tricell::report::{
    cmd_codim, cmd_homology, cmd_report, cmd_validate, resolve_data_dir, CodimParams, ErrataChoice, OutputFormat, RunConfig,
};

/// Verify the mod-2 chain complex of trinitary algebras and certify its cells.
#[derive(Debug, Parser)]
#[command(name = "tricell", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Directory with the data files; the built-in copy is used when absent.
    #[arg(long, global = true, env = "TRICELL_DATA")]
    data: Option<PathBuf>,
    /// Errata ledger to apply (default: errata.txt in the data directory).
    #[arg(long, global = true, conflicts_with = "raw")]
    errata: Option<PathBuf>,
    /// Use the boundary data exactly as transcribed, without errata.
    #[arg(long, global = true)]
    raw: bool,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for random parameter draws.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Highest monomial degree of the polynomial test space.
    #[arg(long, global = true, default_value_t = tricell::rank::DEFAULT_DEGREE)]
    degree: usize,
    /// Worker threads for the codimension sweep.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)] // parsed once per process
enum Command {
    /// Lint the data, apply errata, cross-check matrices and check that the boundary squares to zero.
    Validate,
    /// Betti numbers, generators and class relations.
    Homology,
    /// Exact codimension of one cell's jet conditions.
    Codim {
        /// Cell name, e.g. V1+, bJ321-, TH.
        cell: String,
        /// Comma-separated support points, e.g. 1/3,7/5.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        points: Option<Vec<Rational>>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<Rational>,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<Rational>,
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<Rational>,
    },
    /// Full JSON dossier (text summary without --json).
    Report,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = &cli.common;
    let config = RunConfig {
        // clap already folds the environment variable into `data`.
        data_dir: resolve_data_dir(c.data.as_deref(), None),
        errata: match (&c.errata, c.raw) {
            (_, true) => ErrataChoice::Off,
            (Some(p), false) => ErrataChoice::File(p.clone()),
            (None, false) => ErrataChoice::Auto,
        },
        output: if c.json { OutputFormat::Json } else { OutputFormat::Text },
        seed: c.seed,
        degree_bound: c.degree,
        jobs: c.jobs.max(1),
    };
    let result = match &cli.command {
        Command::Validate => cmd_validate(&config),
        Command::Homology => cmd_homology(&config),
        Command::Codim {
            cell,
            points,
            alpha,
            beta,
            gamma,
        } => {
            let params = CodimParams {
                points: points.clone(),
                moduli: Moduli {
                    alpha: alpha.clone(),
                    beta: beta.clone(),
                    gamma: gamma.clone(),
                },
            };
            cmd_codim(&config, cell, &params)
        }
        Command::Report => cmd_report(&config),
    };
    match result {
        Ok(report) => {
            print!("{}", report.render(config.output));
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("tricell: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
