//! `nff`: runs one near-field focusing experiment and writes CSVs plus a
//! manifest to the output directory.

mod config;
mod manifest;
mod runner;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Parser, ValueEnum};
use nff_core::DbConvention;

use config::RunConfig;
use runner::{Experiment, RunStatus};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DbArg {
    Field10,
    Field20,
}

impl From<DbArg> for DbConvention {
    fn from(a: DbArg) -> Self {
        match a {
            DbArg::Field10 => DbConvention::Field10,
            DbArg::Field20 => DbConvention::Field20,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "nff",
    version,
    about = "Near-field focusing experiments for circular arrays"
)]
struct Cli {
    /// Experiment to run.
    experiment: Experiment,
    /// TOML config; omitted keys take the reference defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// dB convention for gain columns (overrides the config).
    #[arg(long, value_enum)]
    db_convention: Option<DbArg>,
    /// Worker threads; 0 or unset uses all cores.
    #[arg(long)]
    threads: Option<usize>,
}

fn real_main(cli: Cli) -> anyhow::Result<RunStatus> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(db) = cli.db_convention {
        cfg.db_convention = db.into();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
        .context("building thread pool")?;
    let threads = pool.current_num_threads();
    log::info!("{} with {threads} threads", cli.experiment);

    let start = Instant::now();
    let artifacts = pool.install(|| runner::run(cli.experiment, &cfg))?;
    let manifest = manifest::write_all(
        &cli.out,
        cli.experiment,
        &cfg,
        threads,
        &artifacts,
        start.elapsed(),
    )?;

    for o in &manifest.outputs {
        println!("{}  {}", o.sha256, cli.out.join(&o.path).display());
    }
    if cli.experiment == Experiment::Validate {
        if let Some((_, body)) = artifacts.files.first() {
            print!("{}", String::from_utf8_lossy(body));
        }
    }
    for n in &artifacts.notes {
        eprintln!("note: {n}");
    }
    Ok(artifacts.status)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match real_main(Cli::parse()) {
        Ok(RunStatus::Ok) => ExitCode::SUCCESS,
        Ok(RunStatus::Partial) => ExitCode::from(2),
        Ok(RunStatus::Failed) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
