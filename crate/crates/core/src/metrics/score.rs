//! Normalized-error and rank based aggregate scores.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::benchmark::Combo;
use crate::error::{Error, Result};

/// Identifies one function, transformation and dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellKey {
    pub function: usize,
    pub combo: Combo,
    pub dim: usize,
}

/// Final errors of all repetitions of one algorithm on one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub algorithm: String,
    pub cell: CellKey,
    pub final_errors: Vec<f64>,
}

/// `(best - optimum) / (worst_best - optimum)`, zero when the numerator is.
pub fn normalized_error(best: f64, optimum: f64, worst_best: f64) -> Result<f64> {
    if worst_best < best {
        return Err(Error::Input(format!(
            "worst best value {worst_best} is below the best value {best}"
        )));
    }
    let num = best - optimum;
    if num == 0.0 {
        Ok(0.0)
    } else {
        Ok(num / (worst_best - optimum))
    }
}

/// One-based ranks, tied values sharing the mean of their positions.
pub fn shared_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // Positions start+1 ..= end share their mean.
        let mean = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = mean;
        }
        start = end;
    }
    ranks
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRow {
    pub algorithm: String,
    pub sne: f64,
    pub sr: f64,
    pub score1: f64,
    pub score2: f64,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scoreboard {
    pub rows: Vec<ScoreRow>,
    pub cells: usize,
}

pub const SCOREBOARD_HEADER: &str = "algorithm,sne,sr,score1,score2,score";

impl Scoreboard {
    pub fn row(&self, algorithm: &str) -> Option<&ScoreRow> {
        self.rows.iter().find(|r| r.algorithm == algorithm)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(SCOREBOARD_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{},{},{}", r.algorithm, r.sne, r.sr, r.score1, r.score2, r.score);
        }
        out
    }
}

fn relative_score(value: f64, min: f64) -> f64 {
    if value == 0.0 {
        50.0
    } else {
        (1.0 - (value - min) / value) * 50.0
    }
}

/// Aggregates per-cell results of several algorithms.
///
/// Every algorithm must cover the same cells with the same repetition
/// count. Each cell contributes half its normalized error to SNE and half
/// its mean-error rank to SR.
pub fn score_pipeline(results: &[CellResult]) -> Result<Scoreboard> {
    let mut table: BTreeMap<&str, BTreeMap<CellKey, &[f64]>> = BTreeMap::new();
    for r in results {
        if r.final_errors.is_empty() {
            return Err(Error::Input(format!("{} has no repetitions on {:?}", r.algorithm, r.cell)));
        }
        if let Some(e) = r.final_errors.iter().find(|e| !e.is_finite() || **e < 0.0) {
            return Err(Error::Input(format!("invalid error value {e} for {} on {:?}", r.algorithm, r.cell)));
        }
        let prior = table.entry(&r.algorithm).or_default().insert(r.cell, &r.final_errors);
        if prior.is_some() {
            return Err(Error::Input(format!("duplicate result for {} on {:?}", r.algorithm, r.cell)));
        }
    }
    if table.is_empty() {
        return Err(Error::Input("nothing to score".into()));
    }
    let algorithms: Vec<&str> = table.keys().copied().collect();
    let cells: BTreeSet<CellKey> = table.values().flat_map(|m| m.keys().copied()).collect();
    for cell in &cells {
        let counts: BTreeSet<usize> = algorithms
            .iter()
            .map(|a| table[a].get(cell).map_or(0, |e| e.len()))
            .collect();
        if counts.len() != 1 || counts.contains(&0) {
            return Err(Error::Input(format!(
                "ragged repetitions on {cell:?}: counts {counts:?} across {} algorithms",
                algorithms.len()
            )));
        }
    }

    let mut sne = vec![0.0; algorithms.len()];
    let mut sr = vec![0.0; algorithms.len()];
    for cell in &cells {
        let errors: Vec<&[f64]> = algorithms.iter().map(|a| table[a][cell]).collect();
        let best: Vec<f64> = errors
            .iter()
            .map(|e| e.iter().copied().fold(f64::INFINITY, f64::min))
            .collect();
        let worst_best = best.iter().copied().fold(0.0, f64::max);
        for (a, &b) in best.iter().enumerate() {
            sne[a] += 0.5 * normalized_error(b, 0.0, worst_best)?;
        }
        let means: Vec<f64> = errors.iter().map(|e| e.iter().sum::<f64>() / e.len() as f64).collect();
        for (a, rank) in shared_ranks(&means).into_iter().enumerate() {
            sr[a] += 0.5 * rank;
        }
    }
    let sne_min = sne.iter().copied().fold(f64::INFINITY, f64::min);
    let sr_min = sr.iter().copied().fold(f64::INFINITY, f64::min);
    let rows = algorithms
        .iter()
        .enumerate()
        .map(|(a, name)| {
            let score1 = relative_score(sne[a], sne_min);
            let score2 = relative_score(sr[a], sr_min);
            ScoreRow {
                algorithm: name.to_string(),
                sne: sne[a],
                sr: sr[a],
                score1,
                score2,
                score: score1 + score2,
            }
        })
        .collect();
    Ok(Scoreboard {
        rows,
        cells: cells.len(),
    })
}
