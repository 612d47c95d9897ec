use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::{Duration, Instant};

use super::config::{AlgorithmSpec, ExperimentConfig};
use super::run::{run_cell, Cell, CellOutput};
use super::store::{group_records, ResultStore};
use crate::error::{Error, Result};
use crate::metrics::{score_pipeline, Scoreboard};

pub const SCOREBOARD_FILE: &str = "scoreboard.csv";

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Re-run cells that are already done.
    pub force: bool,
    /// Stop after this many cells have been executed.
    pub max_new_cells: Option<usize>,
    /// Overrides the configured worker count.
    pub threads: Option<usize>,
}

/// Reported to the caller after each executed cell.
#[derive(Debug, Clone)]
pub struct Progress<'a> {
    pub algorithm: &'a str,
    pub cell: Cell,
    pub completed: usize,
    pub pending: usize,
    pub elapsed: Duration,
    pub error: Option<&'a str>,
}

#[derive(Debug)]
pub struct ExperimentReport {
    pub executed: usize,
    pub skipped: usize,
    pub failed: Vec<(String, Cell, String)>,
    /// Present once every cell of the grid is done.
    pub scoreboard: Option<Scoreboard>,
    pub elapsed: Duration,
}

/// Every `(algorithm, cell)` of the grid, in a fixed order.
pub fn grid(config: &ExperimentConfig) -> Vec<(&AlgorithmSpec, Cell)> {
    let mut out = Vec::with_capacity(config.cell_count());
    for alg in &config.algorithms {
        for &dim in &config.dimensions {
            for &function in &config.functions {
                for &combo in &config.combos {
                    for rep in 0..config.repetitions {
                        out.push((alg, Cell { function, combo, dim, rep }));
                    }
                }
            }
        }
    }
    out
}

/// Scores the grid from the store, refusing incomplete or stale cells.
pub fn score_config(config: &ExperimentConfig, store: &ResultStore) -> Result<Scoreboard> {
    let mut records = Vec::with_capacity(config.cell_count());
    for (alg, cell) in grid(config) {
        if !store.is_done(&alg.name, &cell, config.cell_hash(alg)) {
            return Err(Error::Input(format!(
                "{} F{} {} {}D rep {} has no current result",
                alg.name, cell.function, cell.combo, cell.dim, cell.rep
            )));
        }
        records.push(store.read_record(&alg.name, &cell)?);
    }
    score_pipeline(&group_records(&records)?)
}

/// Runs every pending cell of the grid into the store at `root`.
///
/// Cells run on worker threads; this thread alone writes to the store.
pub fn run_experiment(
    config: &ExperimentConfig,
    store: &mut ResultStore,
    options: &RunOptions,
    mut progress: impl FnMut(&Progress),
) -> Result<ExperimentReport> {
    config.validate()?;
    let start = Instant::now();
    let all = grid(config);
    let mut jobs: Vec<(&AlgorithmSpec, Cell, u64)> = all
        .iter()
        .map(|&(alg, cell)| (alg, cell, config.cell_hash(alg)))
        .filter(|(alg, cell, hash)| options.force || !store.is_done(&alg.name, cell, *hash))
        .collect();
    let skipped = all.len() - jobs.len();
    if let Some(limit) = options.max_new_cells {
        jobs.truncate(limit);
    }
    let threads = options.threads.unwrap_or(config.threads).clamp(1, jobs.len().max(1));

    let next = AtomicUsize::new(0);
    let mut failed = Vec::new();
    let mut executed = 0;
    let mut write_error = None;
    std::thread::scope(|scope| {
        let (tx, rx) = mpsc::channel::<(usize, Result<CellOutput>)>();
        for _ in 0..threads {
            let tx = tx.clone();
            let jobs = &jobs;
            let next = &next;
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(alg, cell, _)) = jobs.get(i) else {
                    break;
                };
                if tx.send((i, run_cell(config, alg, cell))).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        for (i, result) in rx {
            let (alg, cell, hash) = jobs[i];
            executed += 1;
            let (written, message) = match result {
                Ok(output) => (store.record_success(&cell, hash, &output), None),
                Err(e) => {
                    let msg = e.to_string();
                    failed.push((alg.name.clone(), cell, msg.clone()));
                    (store.record_failure(&alg.name, &cell, hash, &msg), Some(msg))
                }
            };
            if let Err(e) = written {
                // Stop handing out work; running cells finish and are dropped.
                next.store(jobs.len(), Ordering::Relaxed);
                write_error.get_or_insert(e);
            }
            progress(&Progress {
                algorithm: &alg.name,
                cell,
                completed: executed,
                pending: jobs.len(),
                elapsed: start.elapsed(),
                error: message.as_deref(),
            });
        }
    });
    if let Some(e) = write_error {
        return Err(e);
    }

    let scoreboard = match score_config(config, store) {
        Ok(board) => {
            let path = store.root().join(SCOREBOARD_FILE);
            std::fs::write(path, board.to_csv())?;
            Some(board)
        }
        Err(_) => None,
    };
    Ok(ExperimentReport {
        executed,
        skipped,
        failed,
        scoreboard,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmark::Combo;
    use crate::harness::config::Budget;

    fn tiny() -> ExperimentConfig {
        ExperimentConfig {
            algorithms: vec![AlgorithmSpec::lshade(), AlgorithmSpec::pslshade(3)],
            dimensions: vec![3],
            functions: vec![1],
            combos: vec![Combo::Shift],
            repetitions: 2,
            budget: Budget::Hundred,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn counts_runs_and_scores_both_algorithms() {
        let dir = tempfile::tempdir().unwrap();
        let mut store = ResultStore::open(dir.path()).unwrap();
        let report = run_experiment(&tiny(), &mut store, &RunOptions::default(), |_| {}).unwrap();
        assert_eq!(report.executed, 4);
        let board = report.scoreboard.unwrap();
        assert_eq!(board.rows.len(), 2);
        assert!(dir.path().join(SCOREBOARD_FILE).exists());

        let again = run_experiment(&tiny(), &mut store, &RunOptions::default(), |_| {}).unwrap();
        assert_eq!((again.executed, again.skipped), (0, 4));
        let forced = RunOptions { force: true, ..RunOptions::default() };
        assert_eq!(run_experiment(&tiny(), &mut store, &forced, |_| {}).unwrap().executed, 4);
    }

    #[test]
    fn partial_grid_has_no_scoreboard() {
        let dir = tempfile::tempdir().unwrap();
        let mut store = ResultStore::open(dir.path()).unwrap();
        let opts = RunOptions { max_new_cells: Some(3), ..RunOptions::default() };
        let report = run_experiment(&tiny(), &mut store, &opts, |_| {}).unwrap();
        assert_eq!(report.executed, 3);
        assert!(report.scoreboard.is_none());
        assert!(score_config(&tiny(), &store).is_err());
    }

    #[test]
    fn changed_config_reruns_cells() {
        let dir = tempfile::tempdir().unwrap();
        let mut store = ResultStore::open(dir.path()).unwrap();
        run_experiment(&tiny(), &mut store, &RunOptions::default(), |_| {}).unwrap();
        let mut other = tiny();
        other.master_seed = 2;
        let report = run_experiment(&other, &mut store, &RunOptions::default(), |_| {}).unwrap();
        assert_eq!(report.executed, 4);
    }
}
