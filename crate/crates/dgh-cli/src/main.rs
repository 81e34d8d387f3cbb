//! `dgh`: classify, synthesize, sweep, verify and evolve bounded
//! travelling waves of the Dullin-Gottwald-Holm equation.

mod commands;
mod config;

use clap::{Parser, Subcommand};

use commands::{cmd_classify, cmd_evolve, cmd_sweep, cmd_synth, cmd_verify, EXIT_USAGE};
use config::{resolve, ConfigArgs};

#[derive(Parser)]
#[command(
    name = "dgh",
    version,
    about = "Bounded travelling waves of the Dullin-Gottwald-Holm equation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the bounded travelling wave admitted by a problem.
    #[command(allow_negative_numbers = true)]
    Classify(ConfigArgs),
    /// Synthesize a wave profile, write it as CSV and verify residuals.
    #[command(allow_negative_numbers = true)]
    Synth(ConfigArgs),
    /// Classify every cell of a grid in the (m, M) or (A, B) plane.
    #[command(allow_negative_numbers = true)]
    Sweep(ConfigArgs),
    /// Synthesize and run the full verification report.
    #[command(allow_negative_numbers = true)]
    Verify(ConfigArgs),
    /// Evolve a smooth wave pseudo-spectrally and measure shape drift.
    #[command(allow_negative_numbers = true)]
    Evolve(ConfigArgs),
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage problems are exit code 1, including --help/--version
            // short-circuits which clap reports as "errors".
            if e.use_stderr() {
                let _ = e.print();
                std::process::exit(EXIT_USAGE);
            }
            let _ = e.print();
            std::process::exit(0);
        }
    };
    let args = match &cli.command {
        Command::Classify(a)
        | Command::Synth(a)
        | Command::Sweep(a)
        | Command::Verify(a)
        | Command::Evolve(a) => a,
    };
    let cfg = match resolve(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(EXIT_USAGE);
        }
    };
    let code = match cli.command {
        Command::Classify(_) => cmd_classify(&cfg),
        Command::Synth(_) => cmd_synth(&cfg),
        Command::Sweep(_) => cmd_sweep(&cfg),
        Command::Verify(_) => cmd_verify(&cfg),
        Command::Evolve(_) => cmd_evolve(&cfg),
    };
    std::process::exit(code);
}
