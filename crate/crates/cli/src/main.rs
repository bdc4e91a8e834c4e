use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use herzlab_cli::output::{output_dir, write_error, write_report};
use herzlab_cli::{execute, CliError, RunConfig};

/// Herz-type Besov and Triebel-Lizorkin norm lab.
#[derive(Parser, Debug)]
#[command(name = "herzlab", version, about)]
struct Args {
    /// Run configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; defaults to the config's [output] dir, then $HERZLAB_OUT.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; 0 picks the number of cores.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

fn run(args: &Args, config: &mut Option<RunConfig>) -> Result<PathBuf, CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", args.config.display())))?;
    let parsed = RunConfig::parse(&text)?;
    let dir = output_dir(args.out.as_deref(), Some(&parsed), std::env::var("HERZLAB_OUT").ok());
    *config = Some(parsed.clone());
    rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build_global()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let report = execute(&parsed, args.seed)?;
    write_report(&dir, &parsed, &report)?;
    Ok(dir)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut config = None;
    match run(&args, &mut config) {
        Ok(dir) => {
            println!("{}", dir.display());
            ExitCode::SUCCESS
        }
        Err(err) => {
            let dir = output_dir(args.out.as_deref(), config.as_ref(), std::env::var("HERZLAB_OUT").ok());
            write_error(&dir, &err);
            eprintln!("{}", serde_json::to_string(&err.to_object()).unwrap_or_default());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
