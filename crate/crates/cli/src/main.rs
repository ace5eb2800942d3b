use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gpe_cli::{run, Overrides};

#[derive(Parser)]
#[command(name = "gpe", version, about = "Hermite-spectral Gross-Pitaevskii experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Replaces the config's top-level `seed`.
        #[arg(long)]
        seed_override: Option<u64>,
        /// Replaces the config's `output.dir`.
        #[arg(long)]
        output_override: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            seed_override,
            output_override,
        } => {
            let overrides = Overrides {
                seed: seed_override,
                output_dir: output_override,
            };
            match run(&config, &overrides) {
                Ok(summary) => {
                    println!("{summary}");
                    ExitCode::SUCCESS
                }
                Err(err) => {
                    eprintln!("gpe: {err}");
                    ExitCode::from(err.exit_code() as u8)
                }
            }
        }
    }
}
