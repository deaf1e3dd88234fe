use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "twgd", version, about = "Twisted groupoid algebras and Drinfeld doubles of finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Group: a registry string (cyclic:4, product:cyclic:2,cyclic:2, symmetric:3, dihedral:4, klein, z2cubed) or a JSON file.
    #[arg(long, global = true)]
    group: Option<String>,

    /// Cocycle: a registry string (cocycle:z2cubed-omega, cocycle:klein-thetaV, cocycle:trivial:n, cocycle:cyclic3:n:k) or a JSON file.
    #[arg(long, global = true)]
    cocycle: Option<String>,

    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Increase log verbosity (-v, -vv).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Check the cocycle and normalization conditions.
    CheckCocycle,
    /// Transgress a cocycle to the k-fold loop groupoid.
    Transgress {
        #[arg(long, default_value_t = 1)]
        times: usize,
    },
    /// Build the twisted Drinfeld double of a 3-cocycle and cross-check its product.
    Double,
    /// Decompose the twisted algebra into irreducibles.
    Irreps,
    /// Count irreducibles by every available route.
    Count,
    /// Irreducible characters, their inner products and (for doubles) the elliptic relation.
    Characters,
    /// Induce representations of a centralizer up to the double.
    Induce {
        /// Element whose centralizer is induced from.
        #[arg(long)]
        at: usize,
        /// Representation file for the centralizer; all its irreducibles when omitted.
        #[arg(long)]
        rep: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = commands::RunConfig {
        command: match &cli.command {
            Command::CheckCocycle => commands::Cmd::CheckCocycle,
            Command::Transgress { times } => commands::Cmd::Transgress { times: *times },
            Command::Double => commands::Cmd::Double,
            Command::Irreps => commands::Cmd::Irreps,
            Command::Count => commands::Cmd::Count,
            Command::Characters => commands::Cmd::Characters,
            Command::Induce { at, rep } => commands::Cmd::Induce { at: *at, rep: rep.clone() },
        },
        group: cli.group,
        cocycle: cli.cocycle,
        seed: cli.seed,
        out: cli.out,
        verbosity: cli.verbose,
    };
    let level = match config.verbosity {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).init();
    match run(&config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(config: &commands::RunConfig) -> anyhow::Result<()> {
    let report = commands::run(config)?;
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    match &config.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}
