use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use pslshade_core::benchmark::suite_member;
use pslshade_core::harness::{
    grid, run_cell, run_cell_with_seed, run_experiment, run_objective, AlgorithmSpec, Budget, Cell, ExperimentConfig,
    ResultStore, RunOptions,
};
use pslshade_core::{Combo, InitMethod};

fn snapshot(root: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut files = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                files.insert(rel, fs::read(&path).unwrap());
            }
        }
    }
    files
}

fn small() -> ExperimentConfig {
    ExperimentConfig {
        algorithms: vec![AlgorithmSpec::lshade(), AlgorithmSpec::pslshade(4)],
        dimensions: vec![4],
        functions: vec![1, 6],
        combos: vec![Combo::None, Combo::BiasShiftRotation],
        repetitions: 2,
        budget: Budget::Hundred,
        threads: 2,
        ..ExperimentConfig::default()
    }
}

#[test]
fn interrupted_run_resumes_to_identical_store() {
    let config = small();
    let total = config.cell_count();
    assert_eq!(total, 16);

    let clean = tempfile::tempdir().unwrap();
    let mut store = ResultStore::open(clean.path()).unwrap();
    let report = run_experiment(&config, &mut store, &RunOptions::default(), |_| {}).unwrap();
    assert_eq!(report.executed, total);
    let clean_board = report.scoreboard.unwrap();

    let resumed = tempfile::tempdir().unwrap();
    let mut store = ResultStore::open(resumed.path()).unwrap();
    let half = RunOptions { max_new_cells: Some(total / 2), ..RunOptions::default() };
    let first = run_experiment(&config, &mut store, &half, |_| {}).unwrap();
    assert_eq!(first.executed, total / 2);
    assert!(first.scoreboard.is_none());
    drop(store);

    let mut store = ResultStore::open(resumed.path()).unwrap();
    let second = run_experiment(&config, &mut store, &RunOptions::default(), |_| {}).unwrap();
    assert_eq!((second.executed, second.skipped), (total / 2, total / 2));
    assert_eq!(second.scoreboard.unwrap(), clean_board);
    assert_eq!(snapshot(clean.path()), snapshot(resumed.path()));
}

#[test]
fn thread_count_does_not_change_results() {
    let mut config = small();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    config.threads = 1;
    run_experiment(&config, &mut ResultStore::open(a.path()).unwrap(), &RunOptions::default(), |_| {}).unwrap();
    config.threads = 3;
    run_experiment(&config, &mut ResultStore::open(b.path()).unwrap(), &RunOptions::default(), |_| {}).unwrap();
    assert_eq!(snapshot(a.path()), snapshot(b.path()));
}

#[test]
fn forced_rerun_rewrites_identical_bytes() {
    let config = small();
    let dir = tempfile::tempdir().unwrap();
    let mut store = ResultStore::open(dir.path()).unwrap();
    run_experiment(&config, &mut store, &RunOptions::default(), |_| {}).unwrap();
    let before = snapshot(dir.path());
    let forced = RunOptions { force: true, ..RunOptions::default() };
    assert_eq!(run_experiment(&config, &mut store, &forced, |_| {}).unwrap().executed, 16);
    assert_eq!(before, snapshot(dir.path()));
}

#[test]
fn single_trial_with_uniform_init_equals_plain_engine() {
    let config = ExperimentConfig { budget: Budget::Thousand, ..small() };
    let plain = AlgorithmSpec::lshade();
    let screened = AlgorithmSpec { init: InitMethod::Uniform, ..AlgorithmSpec::pslshade(1) };
    for function in [1, 4, 9] {
        let cell = Cell { function, combo: Combo::ShiftRotation, dim: 10, rep: 0 };
        let a = run_cell_with_seed(&config, &plain, cell, 1234).unwrap();
        let b = run_cell_with_seed(&config, &screened, cell, 1234).unwrap();
        assert_eq!(a.record.checkpoints, b.record.checkpoints);
        assert_eq!(a.record.final_error.to_bits(), b.record.final_error.to_bits());
    }
}

#[test]
fn budget_of_initial_population_records_initial_best() {
    let dim = 5;
    let f = suite_member(dim, 1, 3, Combo::Shift).unwrap();
    let n_init = 18 * dim;
    let (checkpoints, _, evaluations) = run_objective(&AlgorithmSpec::pslshade(5), &f, n_init, 9, false).unwrap();
    assert_eq!(evaluations, n_init);
    assert_eq!(checkpoints.len(), 16);
    assert_eq!(checkpoints.last().unwrap().0, n_init);
}

#[test]
fn diagnostic_evaluations_are_off_budget() {
    let config = ExperimentConfig { diagnostics: true, budget: Budget::Thousand, ..small() };
    let cell = Cell { function: 1, combo: Combo::None, dim: 4, rep: 0 };
    let out = run_cell(&config, &AlgorithmSpec::pslshade(4), cell).unwrap();
    assert_eq!(out.evaluations, 4_000);
    let trace = out.diagnostics.unwrap();
    assert!(trace.extra_evaluations > 0);
    assert!(trace.screened * 3 >= trace.extra_evaluations);
    for row in &trace.rows {
        assert!(row.hypervolume >= 0.0);
        if let Some(a) = row.accuracy {
            assert!((0.0..=1.0).contains(&a));
        }
        if let Some(r2) = row.r2 {
            assert!((0.0..=1.0).contains(&r2));
        }
    }
    let mut plain_config = config.clone();
    plain_config.diagnostics = false;
    let plain = run_cell(&plain_config, &AlgorithmSpec::pslshade(4), cell).unwrap();
    assert_eq!(plain.record, out.record);
}

#[test]
fn default_protocol_counts_three_thousand_runs_per_algorithm() {
    let config = ExperimentConfig::default();
    let per_algorithm = config.cell_count() / config.algorithms.len();
    assert_eq!(per_algorithm, 10 * 5 * 30 * 2);
    assert_eq!(grid(&config).len(), config.cell_count());
}

#[test]
fn cell_seed_changes_with_repetition() {
    let config = ExperimentConfig::default();
    let seeds: std::collections::BTreeSet<u64> =
        (0..30).map(|rep| config.cell_seed("pslshade", 3, Combo::Shift, 10, rep)).collect();
    assert_eq!(seeds.len(), 30);
}
