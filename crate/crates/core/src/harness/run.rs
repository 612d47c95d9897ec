use super::config::{AlgorithmKind, AlgorithmSpec, ExperimentConfig};
use crate::benchmark::{suite_member, Combo, ObjectiveFunction, SearchBounds};
use crate::de::{ControlParams, Lshade};
use crate::error::{Error, Result};
use crate::metrics::{
    checkpoint_schedule, hyper_volume, kendall_tau, selection_accuracy, ConvergenceRecorder, DiagnosticRow,
    DiagnosticTrace, RunRecord,
};
use crate::prescreen::{PsLshade, ScreeningConfig};

/// Coordinates of one run in an experiment grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub function: usize,
    pub combo: Combo,
    pub dim: usize,
    pub rep: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellOutput {
    pub record: RunRecord,
    /// Present in diagnostic mode.
    pub diagnostics: Option<DiagnosticTrace>,
    /// Budgeted evaluations actually spent.
    pub evaluations: usize,
}

enum Driver {
    Plain(Box<Lshade>),
    Screened(Box<PsLshade>),
}

impl Driver {
    fn ask(&mut self) -> Vec<Vec<f64>> {
        match self {
            Driver::Plain(e) => e.ask(),
            Driver::Screened(e) => e.ask(),
        }
    }

    fn tell(&mut self, fitness: &[f64]) -> Result<()> {
        match self {
            Driver::Plain(e) => e.tell(fitness),
            Driver::Screened(e) => e.tell(fitness),
        }
    }

    fn state(&self) -> &crate::de::DeState {
        match self {
            Driver::Plain(e) => e.state(),
            Driver::Screened(e) => e.state(),
        }
    }
}

/// Checkpoints, optional diagnostics and budgeted evaluations of one run.
pub type RunOutput = (Vec<(usize, f64)>, Option<DiagnosticTrace>, usize);

/// Runs `algorithm` on `objective` until `max_nfe` evaluations are spent.
///
/// Errors are recorded as `max(f - f*, 0)`. In diagnostic mode every
/// candidate of a screened generation is evaluated as well; those extra
/// evaluations never reach the optimizer.
pub fn run_objective(
    algorithm: &AlgorithmSpec,
    objective: &ObjectiveFunction,
    max_nfe: usize,
    seed: u64,
    diagnostics: bool,
) -> Result<RunOutput> {
    let dim = objective.dimension();
    let params = ControlParams::for_dimension(dim, max_nfe);
    let bounds = SearchBounds::standard(dim);
    let mut driver = match algorithm.kind {
        AlgorithmKind::Lshade => Driver::Plain(Box::new(Lshade::with_init(params, bounds, seed, algorithm.init)?)),
        AlgorithmKind::PsLshade => {
            let config = ScreeningConfig {
                n_s: algorithm.n_s,
                init: algorithm.init,
                screener: algorithm.screener,
                always_fit: diagnostics,
                ..ScreeningConfig::default()
            };
            Driver::Screened(Box::new(PsLshade::new(params, bounds, seed, config)?))
        }
    };

    let optimum = objective.optimum_value();
    let mut recorder = ConvergenceRecorder::new(checkpoint_schedule(max_nfe, dim));
    let mut trace = diagnostics.then(DiagnosticTrace::default);
    let mut evaluations = 0;
    loop {
        let points = driver.ask();
        if points.is_empty() {
            break;
        }
        let mut fitness = Vec::with_capacity(points.len());
        for p in &points {
            let f = objective.evaluate(p);
            evaluations += 1;
            if !f.is_finite() {
                return Err(Error::NonFinite { value: f, nfe: evaluations });
            }
            recorder.observe((f - optimum).max(0.0));
            fitness.push(f);
        }
        let row = match (&mut trace, &driver) {
            (Some(trace), _) if driver.state().initialized() => Some(diagnose(trace, &driver, objective, &fitness)),
            _ => None,
        };
        driver.tell(&fitness)?;
        if let (Some(trace), Some(mut row)) = (&mut trace, row) {
            let state = driver.state();
            let positions: Vec<&[f64]> = state.population().members.iter().map(|m| m.position.as_slice()).collect();
            row.generation = state.population().generation;
            row.nfe = state.nfe();
            row.hypervolume = hyper_volume(&positions);
            trace.rows.push(row);
        }
    }
    let checkpoints = recorder.finish();
    Ok((checkpoints, trace, evaluations))
}

/// Scores the pending generation before it is told to the optimizer.
fn diagnose(trace: &mut DiagnosticTrace, driver: &Driver, objective: &ObjectiveFunction, fitness: &[f64]) -> DiagnosticRow {
    let mut row = DiagnosticRow {
        generation: 0,
        nfe: 0,
        accuracy: None,
        r2: None,
        tau: None,
        hypervolume: 0.0,
        archive_size: 0,
        r2_raw: None,
    };
    let Driver::Screened(engine) = driver else {
        return row;
    };
    let Some(screening) = engine.pending_screening() else {
        return row;
    };
    row.archive_size = engine.samples().len();
    let model = engine.model();
    if !screening.surrogate.is_empty() && model.is_fitted() {
        row.r2_raw = model.r_squared();
        row.r2 = row.r2_raw.map(|r| r.clamp(0.0, 1.0));
        let predicted: Vec<f64> = (0..screening.evaluated)
            .filter_map(|i| screening.chosen_surrogate(i))
            .collect();
        if predicted.len() == screening.evaluated {
            row.tau = kendall_tau(fitness, &predicted);
        }
    }

    let (mut screened, mut correct) = (0, 0);
    for (i, set) in screening.sets[..screening.evaluated].iter().enumerate() {
        if set.trials.len() < 2 {
            continue;
        }
        let chosen = screening.chosen[i];
        let values: Vec<f64> = set
            .trials
            .iter()
            .enumerate()
            .map(|(j, t)| {
                if j == chosen {
                    fitness[i]
                } else {
                    trace.extra_evaluations += 1;
                    objective.evaluate(t)
                }
            })
            .collect();
        screened += 1;
        if selection_accuracy(&values, chosen) {
            correct += 1;
        }
    }
    if screened > 0 {
        row.accuracy = Some(correct as f64 / screened as f64);
        trace.screened += screened;
        trace.correct += correct;
    }
    row
}

/// Runs one grid cell with the seed the experiment assigns to it.
pub fn run_cell(config: &ExperimentConfig, algorithm: &AlgorithmSpec, cell: Cell) -> Result<CellOutput> {
    let seed = config.cell_seed(&algorithm.name, cell.function, cell.combo, cell.dim, cell.rep);
    run_cell_with_seed(config, algorithm, cell, seed)
}

pub fn run_cell_with_seed(
    config: &ExperimentConfig,
    algorithm: &AlgorithmSpec,
    cell: Cell,
    seed: u64,
) -> Result<CellOutput> {
    let objective = suite_member(cell.dim, config.suite_seed, cell.function, cell.combo)?;
    let max_nfe = config.budget.max_nfe(cell.dim);
    let (checkpoints, diagnostics, evaluations) =
        run_objective(algorithm, &objective, max_nfe, seed, config.diagnostics)?;
    let final_error = checkpoints.last().map_or(f64::INFINITY, |c| c.1);
    Ok(CellOutput {
        record: RunRecord {
            algorithm: algorithm.name.clone(),
            function: cell.function,
            combo: cell.combo,
            dim: cell.dim,
            rep: cell.rep,
            checkpoints,
            final_error,
        },
        diagnostics,
        evaluations,
    })
}
