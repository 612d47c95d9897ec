//! On-disk results: one record file per cell plus a manifest.
//!
//! ```text
//! <root>/manifest.csv
//! <root>/records/<algorithm>/<dim>d_F<id>_<combo>_r<rep>.csv
//! <root>/diagnostics/<algorithm>/<dim>d_F<id>_<combo>_r<rep>.csv
//! ```
//!
//! Every file starts with a schema line followed by a CSV header. Files are
//! written to a temporary name and renamed into place, and the manifest is
//! rewritten only after the files it lists exist.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::run::{Cell, CellOutput};
use crate::benchmark::Combo;
use crate::error::{Error, Result};
use crate::metrics::{CellKey, CellResult, DiagnosticRow, DiagnosticTrace, RunRecord, DIAGNOSTIC_HEADER, RECORD_HEADER};

pub const SCHEMA_LINE: &str = "#schema=1";
pub const MANIFEST_HEADER: &str = "algorithm,function,combo,dim,rep,status,hash,detail";
const MANIFEST_FILE: &str = "manifest.csv";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellStatus {
    Done,
    Failed,
}

impl CellStatus {
    fn as_str(self) -> &'static str {
        match self {
            CellStatus::Done => "done",
            CellStatus::Failed => "failed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub status: CellStatus,
    /// Identity of the configuration that produced the cell.
    pub hash: u64,
    pub detail: String,
}

#[derive(Debug)]
pub struct ResultStore {
    root: PathBuf,
    entries: BTreeMap<(String, Cell), ManifestEntry>,
}

fn malformed(path: &Path, reason: impl Into<String>) -> Error {
    Error::Store {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

/// Writes `contents` next to `path` and renames it into place.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Splits a schema-tagged CSV into data lines, checking the header.
fn data_lines<'a>(path: &Path, text: &'a str, header: &str) -> Result<Vec<&'a str>> {
    let mut lines = text.lines();
    if lines.next() != Some(SCHEMA_LINE) {
        return Err(malformed(path, format!("missing `{SCHEMA_LINE}` line")));
    }
    if lines.next() != Some(header) {
        return Err(malformed(path, "unexpected header"));
    }
    Ok(lines.filter(|l| !l.is_empty()).collect())
}

fn parse_function(field: &str) -> Option<usize> {
    field.strip_prefix('F')?.parse().ok()
}

fn cell_file_name(cell: &Cell) -> String {
    format!("{}d_F{}_{}_r{}.csv", cell.dim, cell.function, cell.combo.slug(), cell.rep)
}

impl ResultStore {
    /// Opens or creates a store. Done entries whose record file is missing
    /// are dropped so the cell runs again.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root)?;
        let mut store = Self {
            root,
            entries: BTreeMap::new(),
        };
        let path = store.manifest_path();
        if path.exists() {
            store.entries = Self::read_manifest(&path)?;
            let before = store.entries.len();
            let root = store.root.clone();
            store.entries.retain(|(alg, cell), e| {
                e.status != CellStatus::Done || Self::record_path_in(&root, alg, cell).exists()
            });
            if store.entries.len() != before {
                store.flush()?;
            }
        }
        Ok(store)
    }

    /// Opens an existing store without creating anything.
    pub fn open_existing(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        let path = root.join(MANIFEST_FILE);
        if !path.is_file() {
            return Err(malformed(&path, "no manifest; not a result store"));
        }
        Ok(Self {
            entries: Self::read_manifest(&path)?,
            root,
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn manifest_path(&self) -> PathBuf {
        self.root.join(MANIFEST_FILE)
    }

    fn record_path_in(root: &Path, algorithm: &str, cell: &Cell) -> PathBuf {
        root.join("records").join(algorithm).join(cell_file_name(cell))
    }

    pub fn record_path(&self, algorithm: &str, cell: &Cell) -> PathBuf {
        Self::record_path_in(&self.root, algorithm, cell)
    }

    pub fn diagnostics_path(&self, algorithm: &str, cell: &Cell) -> PathBuf {
        self.root.join("diagnostics").join(algorithm).join(cell_file_name(cell))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(String, Cell), &ManifestEntry)> {
        self.entries.iter()
    }

    pub fn entry(&self, algorithm: &str, cell: &Cell) -> Option<&ManifestEntry> {
        self.entries.get(&(algorithm.to_string(), *cell))
    }

    /// True if the cell finished under the configuration identified by `hash`.
    pub fn is_done(&self, algorithm: &str, cell: &Cell, hash: u64) -> bool {
        self.entry(algorithm, cell)
            .is_some_and(|e| e.status == CellStatus::Done && e.hash == hash)
    }

    pub fn done_count(&self) -> usize {
        self.entries.values().filter(|e| e.status == CellStatus::Done).count()
    }

    /// Persists a finished cell and its manifest entry.
    pub fn record_success(&mut self, cell: &Cell, hash: u64, output: &CellOutput) -> Result<()> {
        let algorithm = &output.record.algorithm;
        let mut text = format!("{SCHEMA_LINE}\n{RECORD_HEADER}\n");
        text.push_str(&output.record.csv_rows());
        write_atomic(&self.record_path(algorithm, cell), &text)?;
        let diag_path = self.diagnostics_path(algorithm, cell);
        match &output.diagnostics {
            Some(trace) => write_atomic(&diag_path, &format!("{SCHEMA_LINE}\n{}", trace.to_csv()))?,
            None if diag_path.exists() => fs::remove_file(&diag_path)?,
            None => {}
        }
        self.entries.insert(
            (algorithm.clone(), *cell),
            ManifestEntry {
                status: CellStatus::Done,
                hash,
                detail: String::new(),
            },
        );
        self.flush()
    }

    pub fn record_failure(&mut self, algorithm: &str, cell: &Cell, hash: u64, reason: &str) -> Result<()> {
        let path = self.record_path(algorithm, cell);
        if path.exists() {
            fs::remove_file(&path)?;
        }
        let detail: String = reason
            .chars()
            .map(|c| if c == ',' || c == '\n' { ';' } else { c })
            .collect();
        self.entries.insert(
            (algorithm.to_string(), *cell),
            ManifestEntry {
                status: CellStatus::Failed,
                hash,
                detail,
            },
        );
        self.flush()
    }

    /// Rewrites the manifest from memory, in sorted order.
    pub fn flush(&self) -> Result<()> {
        let mut text = format!("{SCHEMA_LINE}\n{MANIFEST_HEADER}\n");
        for ((alg, cell), e) in &self.entries {
            let _ = writeln!(
                text,
                "{alg},F{},{},{},{},{},{:016x},{}",
                cell.function,
                cell.combo.slug(),
                cell.dim,
                cell.rep,
                e.status.as_str(),
                e.hash,
                e.detail
            );
        }
        write_atomic(&self.manifest_path(), &text)
    }

    fn read_manifest(path: &Path) -> Result<BTreeMap<(String, Cell), ManifestEntry>> {
        let text = fs::read_to_string(path)?;
        let mut entries = BTreeMap::new();
        for line in data_lines(path, &text, MANIFEST_HEADER)? {
            let f: Vec<&str> = line.splitn(8, ',').collect();
            let bad = || malformed(path, format!("bad manifest line `{line}`"));
            if f.len() != 8 {
                return Err(bad());
            }
            let cell = Cell {
                function: parse_function(f[1]).ok_or_else(bad)?,
                combo: f[2].parse::<Combo>().map_err(|_| bad())?,
                dim: f[3].parse().map_err(|_| bad())?,
                rep: f[4].parse().map_err(|_| bad())?,
            };
            let status = match f[5] {
                "done" => CellStatus::Done,
                "failed" => CellStatus::Failed,
                _ => return Err(bad()),
            };
            let hash = u64::from_str_radix(f[6], 16).map_err(|_| bad())?;
            entries.insert(
                (f[0].to_string(), cell),
                ManifestEntry {
                    status,
                    hash,
                    detail: f[7].to_string(),
                },
            );
        }
        Ok(entries)
    }

    pub fn read_record(&self, algorithm: &str, cell: &Cell) -> Result<RunRecord> {
        let path = self.record_path(algorithm, cell);
        let text = fs::read_to_string(&path).map_err(|e| malformed(&path, e.to_string()))?;
        let mut checkpoints = Vec::new();
        for (k, line) in data_lines(&path, &text, RECORD_HEADER)?.into_iter().enumerate() {
            let f: Vec<&str> = line.split(',').collect();
            let bad = || malformed(&path, format!("bad record line `{line}`"));
            if f.len() != 8 {
                return Err(bad());
            }
            let matches = f[0] == algorithm
                && parse_function(f[1]) == Some(cell.function)
                && f[2].parse::<Combo>().ok() == Some(cell.combo)
                && f[3].parse::<usize>().ok() == Some(cell.dim)
                && f[4].parse::<usize>().ok() == Some(cell.rep)
                && f[5].parse::<usize>().ok() == Some(k);
            if !matches {
                return Err(malformed(&path, format!("line `{line}` does not belong to this cell")));
            }
            let nfe: usize = f[6].parse().map_err(|_| bad())?;
            let err: f64 = f[7].parse().map_err(|_| bad())?;
            if !(err >= 0.0) {
                return Err(bad());
            }
            checkpoints.push((nfe, err));
        }
        let final_error = checkpoints
            .last()
            .map(|c| c.1)
            .ok_or_else(|| malformed(&path, "no checkpoints"))?;
        Ok(RunRecord {
            algorithm: algorithm.to_string(),
            function: cell.function,
            combo: cell.combo,
            dim: cell.dim,
            rep: cell.rep,
            checkpoints,
            final_error,
        })
    }

    /// Per-generation rows of a cell's diagnostics file.
    pub fn read_diagnostics(&self, algorithm: &str, cell: &Cell) -> Result<DiagnosticTrace> {
        let path = self.diagnostics_path(algorithm, cell);
        let text = fs::read_to_string(&path).map_err(|e| malformed(&path, e.to_string()))?;
        let mut trace = DiagnosticTrace::default();
        for line in data_lines(&path, &text, DIAGNOSTIC_HEADER)? {
            let f: Vec<&str> = line.split(',').collect();
            let bad = || malformed(&path, format!("bad diagnostics line `{line}`"));
            if f.len() != 8 {
                return Err(bad());
            }
            let opt = |s: &str| -> Result<Option<f64>> {
                if s.is_empty() {
                    Ok(None)
                } else {
                    s.parse().map(Some).map_err(|_| bad())
                }
            };
            trace.rows.push(DiagnosticRow {
                generation: f[0].parse().map_err(|_| bad())?,
                nfe: f[1].parse().map_err(|_| bad())?,
                accuracy: opt(f[2])?,
                r2: opt(f[3])?,
                tau: opt(f[4])?,
                hypervolume: f[5].parse().map_err(|_| bad())?,
                archive_size: f[6].parse().map_err(|_| bad())?,
                r2_raw: opt(f[7])?,
            });
        }
        Ok(trace)
    }

    /// Every completed record, in manifest order.
    pub fn records(&self) -> Result<Vec<RunRecord>> {
        self.entries
            .iter()
            .filter(|(_, e)| e.status == CellStatus::Done)
            .map(|((alg, cell), _)| self.read_record(alg, cell))
            .collect()
    }

    /// Final errors grouped per algorithm and cell, repetitions in order.
    pub fn cell_results(&self) -> Result<Vec<CellResult>> {
        group_records(&self.records()?)
    }
}

pub fn group_records(records: &[RunRecord]) -> Result<Vec<CellResult>> {
    let mut groups: BTreeMap<(String, CellKey), BTreeMap<usize, f64>> = BTreeMap::new();
    for r in records {
        let key = CellKey {
            function: r.function,
            combo: r.combo,
            dim: r.dim,
        };
        let reps = groups.entry((r.algorithm.clone(), key)).or_default();
        if reps.insert(r.rep, r.final_error).is_some() {
            return Err(Error::Input(format!(
                "duplicate repetition {} for {} on F{} {} {}D",
                r.rep, r.algorithm, r.function, r.combo, r.dim
            )));
        }
    }
    Ok(groups
        .into_iter()
        .map(|((algorithm, cell), reps)| CellResult {
            algorithm,
            cell,
            final_errors: reps.into_values().collect(),
        })
        .collect())
}
