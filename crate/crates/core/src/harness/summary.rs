use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::config::ExperimentConfig;
use super::experiment::grid;
use super::store::ResultStore;
use crate::error::{Error, Result};

pub const DIAGNOSTIC_SUMMARY_HEADER: &str = "algorithm,function,dim,generation,nfe,accuracy,r2,tau,hypervolume,archive_size,runs";

#[derive(Default)]
struct Mean {
    sum: f64,
    n: usize,
}

impl Mean {
    fn add(&mut self, v: Option<f64>) {
        if let Some(v) = v {
            self.sum += v;
            self.n += 1;
        }
    }

    fn get(&self) -> String {
        if self.n == 0 {
            String::new()
        } else {
            (self.sum / self.n as f64).to_string()
        }
    }
}

#[derive(Default)]
struct Bucket {
    nfe: usize,
    accuracy: Mean,
    r2: Mean,
    tau: Mean,
    hypervolume: Mean,
    archive_size: Mean,
    runs: usize,
}

/// Per-generation means over combos and repetitions, one table per
/// algorithm, function and dimension.
pub fn diagnostics_summary(config: &ExperimentConfig, store: &ResultStore) -> Result<String> {
    let mut buckets: BTreeMap<(String, usize, usize, usize), Bucket> = BTreeMap::new();
    for (alg, cell) in grid(config) {
        if !store.is_done(&alg.name, &cell, config.cell_hash(alg)) {
            return Err(Error::Input(format!(
                "{} F{} {} {}D rep {} has no current result",
                alg.name, cell.function, cell.combo, cell.dim, cell.rep
            )));
        }
        let trace = store.read_diagnostics(&alg.name, &cell)?;
        for row in trace.rows {
            let b = buckets
                .entry((alg.name.clone(), cell.function, cell.dim, row.generation))
                .or_default();
            b.nfe = b.nfe.max(row.nfe);
            b.accuracy.add(row.accuracy);
            b.r2.add(row.r2);
            b.tau.add(row.tau);
            b.hypervolume.add(Some(row.hypervolume));
            b.archive_size.add(Some(row.archive_size as f64));
            b.runs += 1;
        }
    }
    let mut out = String::from(DIAGNOSTIC_SUMMARY_HEADER);
    out.push('\n');
    for ((alg, function, dim, generation), b) in &buckets {
        let _ = writeln!(
            out,
            "{alg},F{function},{dim},{generation},{},{},{},{},{},{},{}",
            b.nfe,
            b.accuracy.get(),
            b.r2.get(),
            b.tau.get(),
            b.hypervolume.get(),
            b.archive_size.get(),
            b.runs
        );
    }
    Ok(out)
}
