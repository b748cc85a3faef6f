use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use optomech::config::{load_config, Pipeline};
use optomech::run::{run, EXIT_FATAL};

#[derive(Parser)]
#[command(name = "optomech", version, about = "Optomechanical entanglement pipelines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed Born-Oppenheimer evolution: t,n_thermal,negativity
    BoUnitary(RunArgs),
    /// Lossy Born-Oppenheimer evolution: t,negativity
    BoDissipative(RunArgs),
    /// Driven steady-state sweep over detuning and occupancy
    SteadySweep(RunArgs),
    /// Drift-matrix stability over a detuning grid
    Stability(RunArgs),
    /// Parse and validate a config without running it
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (pipeline, args) = match cli.command {
        Command::Validate { config } => {
            return match load_config(&config) {
                Ok(c) => {
                    println!("{}: ok ({})", config.display(), c.pipeline);
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(EXIT_FATAL as u8)
                }
            };
        }
        Command::BoUnitary(a) => (Pipeline::BoUnitary, a),
        Command::BoDissipative(a) => (Pipeline::BoDissipative, a),
        Command::SteadySweep(a) => (Pipeline::SteadySweep, a),
        Command::Stability(a) => (Pipeline::Stability, a),
    };

    let outcome = load_config(&args.config).and_then(|mut config| {
        if config.pipeline != pipeline {
            return Err(optomech::Error::Config(format!(
                "config is for pipeline {}, not {pipeline}",
                config.pipeline
            )));
        }
        if args.threads.is_some() {
            config.threads = args.threads;
        }
        config.validate()?;
        run(&config, args.out.as_deref())
    });
    match outcome {
        Ok(o) => {
            eprintln!("wrote {} rows to {} ({} flagged)", o.rows, o.path.display(), o.flagged);
            ExitCode::from(o.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FATAL as u8)
        }
    }
}
