use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use wec_satlin::cli::{run, Analysis, RunConfig};

#[derive(Clone, Copy, ValueEnum)]
enum Command {
    Matched,
    Smith,
    Pareto,
    Fsat,
    Saturate,
    Verify,
}

impl From<Command> for Analysis {
    fn from(c: Command) -> Self {
        match c {
            Command::Matched => Analysis::Matched,
            Command::Smith => Analysis::Smith,
            Command::Pareto => Analysis::Pareto,
            Command::Fsat => Analysis::Fsat,
            Command::Saturate => Analysis::Saturate,
            Command::Verify => Analysis::Verify,
        }
    }
}

/// Power and constraint tradeoffs for mismatched, current-limited wave energy converters.
#[derive(Parser)]
#[command(name = "wec-satlin", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: [output] dir in the config, else ./out).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write SVG figures.
    #[arg(long)]
    svg: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = RunConfig::from_path(&args.config).and_then(|cfg| {
        let out = run(args.command.into(), &cfg, args.svg || cfg.output.svg)?;
        let dir = args.out.clone().unwrap_or_else(|| cfg.out_dir());
        out.write_to(&dir)?;
        Ok((out, dir))
    });
    match result {
        Ok((out, dir)) => {
            println!("{}", out.summary);
            for f in &out.files {
                println!("wrote {}", dir.join(&f.name).display());
            }
            if out.verification_failed {
                eprintln!("verification failed");
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
