//! `polyvem`: runs the convergence, strip, block and single-solve studies from a config file.

mod config;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use config::{StudyConfig, StudyKind};

#[derive(Parser, Debug)]
#[command(name = "polyvem", version, about = "Virtual element studies on polygonal meshes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Manufactured-solution refinement study (error table and rates).
    Convergence(Common),
    /// J2 plane-strain strip with a circular hole.
    Strip(Common),
    /// Neo-Hookean block under a horizontal body force.
    Block(Common),
    /// One incremental solve with a constant body force.
    Solve(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// Study configuration (`key = value` lines, `#` comments).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads for element loops (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Seed of the Voronoi generator; overrides the config.
    #[arg(long)]
    seed: Option<u64>,
}

fn execute(kind: StudyKind, args: &Common) -> Result<run::Outcome> {
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let mut cfg = match &args.config {
        Some(path) => StudyConfig::load(path)?,
        None => StudyConfig::default(),
    };
    if let Some(study) = cfg.study {
        if study != kind {
            bail!("config declares study `{study}` but the `{kind}` subcommand was run");
        }
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    std::fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    match kind {
        StudyKind::Convergence => run::convergence(&cfg, &args.out),
        StudyKind::Strip => run::strip(&cfg, &args.out),
        StudyKind::Block => run::block(&cfg, &args.out),
        StudyKind::Solve => run::solve(&cfg, &args.out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::Convergence(a) => (StudyKind::Convergence, a),
        Command::Strip(a) => (StudyKind::Strip, a),
        Command::Block(a) => (StudyKind::Block, a),
        Command::Solve(a) => (StudyKind::Solve, a),
    };
    match execute(kind, args) {
        Ok(outcome) if outcome.failed_rows == 0 => ExitCode::SUCCESS,
        Ok(outcome) => {
            eprintln!("{} row(s) failed", outcome.failed_rows);
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
