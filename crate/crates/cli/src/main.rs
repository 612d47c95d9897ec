use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use pslshade_core::benchmark::{make_transformed_suite, suite_manifest};
use pslshade_core::harness::{
    diagnostics_summary, group_records, run_experiment, ExperimentConfig, Progress, ResultStore, RunOptions,
};
use pslshade_core::metrics::{score_pipeline, Scoreboard};
use pslshade_core::Combo;

#[derive(Parser)]
#[command(name = "pslshade", version, about = "Run and score LSHADE / psLSHADE experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute every pending cell of an experiment config.
    Run(RunArgs),
    /// Aggregate one or more result stores into a scoreboard.
    Score {
        /// Store directory; repeat to merge stores.
        #[arg(long = "out", required = true)]
        stores: Vec<PathBuf>,
        /// Also write the scoreboard CSV here.
        #[arg(long)]
        write: Option<PathBuf>,
    },
    /// Run a config with diagnostics on and write per-generation tables.
    Diag(RunArgs),
    /// Print the benchmark suite manifest.
    Suite {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "none")]
        combo: Combo,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Store directory; defaults to `results/<experiment name>`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Re-run cells that are already done.
    #[arg(long)]
    force: bool,
    #[arg(long)]
    threads: Option<usize>,
    /// Stop after this many new cells.
    #[arg(long)]
    max_cells: Option<usize>,
    #[arg(long, short)]
    quiet: bool,
}

fn print_scoreboard(board: &Scoreboard) {
    println!(
        "{:<16} {:>12} {:>10} {:>8} {:>8} {:>8}",
        "algorithm", "SNE", "SR", "Score1", "Score2", "Score"
    );
    for r in &board.rows {
        println!(
            "{:<16} {:>12.6} {:>10.2} {:>8.2} {:>8.2} {:>8.2}",
            r.algorithm, r.sne, r.sr, r.score1, r.score2, r.score
        );
    }
}

fn report_progress(p: &Progress) {
    let status = p.error.map_or(String::new(), |e| format!("  FAILED: {e}"));
    eprintln!(
        "[{}/{} {:>7.1}s] {} F{} {} {}D rep {}{}",
        p.completed,
        p.pending,
        p.elapsed.as_secs_f64(),
        p.algorithm,
        p.cell.function,
        p.cell.combo,
        p.cell.dim,
        p.cell.rep,
        status
    );
}

fn execute(args: &RunArgs, diagnostics: bool) -> Result<(ExperimentConfig, ResultStore)> {
    let mut config = ExperimentConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    if diagnostics {
        config.diagnostics = true;
    }
    let out = args
        .out
        .clone()
        .unwrap_or_else(|| Path::new("results").join(&config.name));
    let mut store = ResultStore::open(&out).with_context(|| format!("opening store {}", out.display()))?;
    let options = RunOptions {
        force: args.force,
        max_new_cells: args.max_cells,
        threads: args.threads,
    };
    let quiet = args.quiet;
    let report = run_experiment(&config, &mut store, &options, |p| {
        if !quiet {
            report_progress(p)
        }
    })?;
    eprintln!(
        "{}: {} cells run, {} already done, {} failed in {:.1}s; store {}",
        config.name,
        report.executed,
        report.skipped,
        report.failed.len(),
        report.elapsed.as_secs_f64(),
        out.display()
    );
    match &report.scoreboard {
        Some(board) => print_scoreboard(board),
        None => eprintln!("grid incomplete; no scoreboard"),
    }
    if !report.failed.is_empty() {
        bail!("{} cells failed; see {}", report.failed.len(), store.manifest_path().display());
    }
    Ok((config, store))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => {
            execute(&args, false)?;
        }
        Command::Diag(args) => {
            let (config, store) = execute(&args, true)?;
            let table = diagnostics_summary(&config, &store)?;
            let path = store.root().join("diagnostics_summary.csv");
            std::fs::write(&path, &table)?;
            eprintln!("per-generation diagnostics written to {}", path.display());
        }
        Command::Score { stores, write } => {
            let mut records = Vec::new();
            for dir in &stores {
                let store =
                    ResultStore::open_existing(dir).with_context(|| format!("reading store {}", dir.display()))?;
                records.extend(store.records()?);
            }
            if records.is_empty() {
                bail!("no completed runs in the given stores");
            }
            let board = score_pipeline(&group_records(&records)?)?;
            print_scoreboard(&board);
            if let Some(path) = write {
                std::fs::write(&path, board.to_csv()).with_context(|| format!("writing {}", path.display()))?;
            }
        }
        Command::Suite { dim, seed, combo } => {
            let suite = make_transformed_suite(dim, seed, combo)?;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(suite_manifest(&suite, seed).as_bytes())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
