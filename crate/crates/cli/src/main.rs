use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use disperscan_cli::{run, CliError, Engine, Overrides};

#[derive(Parser)]
#[command(name = "disperscan", version, about = "Dispersion-cancellation interferogram simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan tau1 for a configured setup and write CSV (and SVG) output.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        engine: Option<EngineArg>,
        /// Shorthand for `--engine both`.
        #[arg(long, conflicts_with = "engine")]
        oracle: bool,
        #[arg(long)]
        output_dir: Option<PathBuf>,
        #[arg(long)]
        plot: bool,
        /// Materials file, overriding the one named in the config.
        #[arg(long)]
        materials: Option<PathBuf>,
    },
    /// Inspect the materials file.
    Materials {
        #[command(subcommand)]
        command: MaterialsCommand,
    },
}

#[derive(Subcommand)]
enum MaterialsCommand {
    /// Print every material with its validity range and source.
    List {
        #[arg(long)]
        materials: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Analytic,
    Oracle,
    Both,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Analytic => Engine::Analytic,
            EngineArg::Oracle => Engine::Oracle,
            EngineArg::Both => Engine::Both,
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run {
            config,
            engine,
            oracle,
            output_dir,
            plot,
            materials,
        } => {
            let overrides = Overrides {
                engine: if oracle { Some(Engine::Both) } else { engine.map(Engine::from) },
                output_dir,
                plot,
                materials_file: materials,
            };
            let out = run::run(&config, &overrides)?;
            print!("{}", out.summary);
        }
        Command::Materials {
            command: MaterialsCommand::List { materials },
        } => print!("{}", run::list_materials(materials.as_deref())?),
    }
    Ok(())
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
