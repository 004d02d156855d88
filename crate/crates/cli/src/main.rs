use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use praxis_core::sim::{self, Manifest, SimConfig, SimError};

/// Run a scenario manifest and print a summary.
#[derive(Parser, Debug)]
#[command(name = "praxis", version)]
struct Args {
    /// Scenario manifest (.scn).
    #[arg(long)]
    scenario: PathBuf,

    /// Simulation steps; defaults to the manifest's `steps(N)`.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    steps: Option<u64>,

    /// Write the JSON-lines trace here.
    #[arg(long)]
    trace_out: Option<PathBuf>,

    /// Ignore social practice declarations.
    #[arg(long)]
    no_practice: bool,

    /// Run with and without the practice and print both.
    #[arg(long, conflicts_with = "no_practice")]
    compare: bool,

    /// Ticks between metadeliberation passes.
    #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
    meta_period: Option<i64>,

    /// Log internal actions and warnings to stderr.
    #[arg(short, long)]
    verbose: bool,
}

fn write_trace(path: &Path, lines: &[String]) -> Result<(), SimError> {
    let mut text = lines.join("\n");
    if !text.is_empty() {
        text.push('\n');
    }
    std::fs::write(path, text).map_err(|e| SimError::Io(path.to_path_buf(), e.to_string()))
}

fn sibling(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("trace");
    let name = match path.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}.{tag}.{ext}"),
        None => format!("{stem}.{tag}"),
    };
    path.with_file_name(name)
}

fn run(args: &Args) -> Result<(), SimError> {
    let manifest = Manifest::load(&args.scenario)?;
    let config = SimConfig {
        practice: !args.no_practice,
        meta_period: args.meta_period,
        steps: args.steps.map(|s| s as usize),
    };
    if args.compare {
        let (with, without) = sim::compare(&manifest, &config)?;
        if let Some(path) = &args.trace_out {
            write_trace(path, &with.trace)?;
            write_trace(&sibling(path, "no-practice"), &without.trace)?;
        }
        println!("== with practice ==\n{}", with.summary);
        println!("== without practice ==\n{}", without.summary);
        print!("{}", sim::compare_table(&with.summary, &without.summary));
    } else {
        let out = sim::run(&manifest, &config)?;
        if let Some(path) = &args.trace_out {
            write_trace(path, &out.trace)?;
        }
        print!("{}", out.summary);
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    let level = if args.verbose {
        tracing::Level::INFO
    } else {
        tracing::Level::WARN
    };
    tracing_subscriber::fmt()
        .with_max_level(level)
        .with_writer(std::io::stderr)
        .without_time()
        .init();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
