//! Convergence checkpoints and per-generation diagnostics.

use std::fmt::Write as _;

use crate::benchmark::Combo;

pub const CHECKPOINTS: usize = 16;

/// Evaluation counts at which the best error is recorded:
/// `ceil(max_nfe * dim^(k/5 - 3))` for `k = 0..16`, clamped to `[1, max_nfe]`.
pub fn checkpoint_schedule(max_nfe: usize, dim: usize) -> Vec<usize> {
    (0..CHECKPOINTS)
        .map(|k| {
            let v = max_nfe as f64 * (dim as f64).powf(k as f64 / 5.0 - 3.0);
            // Powers that should be exact can land a hair above an integer.
            let nearest = v.round();
            let n = if (v - nearest).abs() <= 1e-9 * v.max(1.0) { nearest } else { v.ceil() };
            (n as usize).clamp(1, max_nfe.max(1))
        })
        .collect()
}

/// Index of the checkpoint closest to `nfe`, earlier one on ties.
pub fn nearest_checkpoint(schedule: &[usize], nfe: usize) -> usize {
    let mut best = 0;
    for (k, &c) in schedule.iter().enumerate() {
        if c.abs_diff(nfe) < schedule[best].abs_diff(nfe) {
            best = k;
        }
    }
    best
}

/// Tracks the best error over sequential evaluations.
#[derive(Debug, Clone)]
pub struct ConvergenceRecorder {
    schedule: Vec<usize>,
    points: Vec<(usize, f64)>,
    nfe: usize,
    best: f64,
}

impl ConvergenceRecorder {
    pub fn new(schedule: Vec<usize>) -> Self {
        Self {
            schedule,
            points: Vec::with_capacity(CHECKPOINTS),
            nfe: 0,
            best: f64::INFINITY,
        }
    }

    pub fn nfe(&self) -> usize {
        self.nfe
    }

    pub fn best(&self) -> f64 {
        self.best
    }

    /// Registers the next evaluation's error.
    pub fn observe(&mut self, error: f64) {
        self.nfe += 1;
        if error < self.best {
            self.best = error;
        }
        while self.points.len() < self.schedule.len() && self.schedule[self.points.len()] <= self.nfe {
            let k = self.points.len();
            self.points.push((self.schedule[k], self.best));
        }
    }

    /// Checkpoints; any not yet reached take the final best.
    pub fn finish(mut self) -> Vec<(usize, f64)> {
        while self.points.len() < self.schedule.len() {
            let k = self.points.len();
            self.points.push((self.schedule[k], self.best));
        }
        self.points
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub algorithm: String,
    pub function: usize,
    pub combo: Combo,
    pub dim: usize,
    pub rep: usize,
    /// `(nfe, best error so far)` pairs.
    pub checkpoints: Vec<(usize, f64)>,
    pub final_error: f64,
}

pub const RECORD_HEADER: &str = "algorithm,function,combo,dim,rep,checkpoint_k,nfe,error";

impl RunRecord {
    /// One line per checkpoint, without the header.
    pub fn csv_rows(&self) -> String {
        let mut out = String::new();
        for (k, (nfe, err)) in self.checkpoints.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},F{},{},{},{},{},{},{}",
                self.algorithm, self.function, self.combo, self.dim, self.rep, k, nfe, err
            );
        }
        out
    }
}

/// Diagnostics of one generation. Missing statistics are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticRow {
    pub generation: usize,
    pub nfe: usize,
    pub accuracy: Option<f64>,
    /// Clamped to `[0, 1]`.
    pub r2: Option<f64>,
    pub tau: Option<f64>,
    pub hypervolume: f64,
    pub archive_size: usize,
    pub r2_raw: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiagnosticTrace {
    pub rows: Vec<DiagnosticRow>,
    /// Screening events scored and how many picked the truly best trial.
    pub screened: usize,
    pub correct: usize,
    /// True evaluations spent on diagnostics only.
    pub extra_evaluations: usize,
}

pub const DIAGNOSTIC_HEADER: &str = "generation,nfe,accuracy,r2,tau,hypervolume,archive_size,r2_raw";

fn opt(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| x.to_string())
}

impl DiagnosticTrace {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(DIAGNOSTIC_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.generation,
                r.nfe,
                opt(r.accuracy),
                opt(r.r2),
                opt(r.tau),
                r.hypervolume,
                r.archive_size,
                opt(r.r2_raw)
            );
        }
        out
    }

    /// Share of screening events that picked the truly best trial.
    pub fn overall_accuracy(&self) -> Option<f64> {
        (self.screened > 0).then(|| self.correct as f64 / self.screened as f64)
    }
}
