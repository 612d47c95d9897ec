use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use crate::benchmark::{suite::SUITE_SIZE, Combo};
use crate::de::InitMethod;
use crate::error::{Error, Result};
use crate::prescreen::Screener;
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgorithmKind {
    Lshade,
    PsLshade,
}

impl AlgorithmKind {
    pub fn name(self) -> &'static str {
        match self {
            AlgorithmKind::Lshade => "lshade",
            AlgorithmKind::PsLshade => "pslshade",
        }
    }
}

/// One optimizer configuration in an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmSpec {
    /// Label used in records, seeds and scoreboards.
    pub name: String,
    pub kind: AlgorithmKind,
    pub n_s: usize,
    pub init: InitMethod,
    pub screener: Screener,
}

impl AlgorithmSpec {
    pub fn lshade() -> Self {
        Self {
            name: "lshade".into(),
            kind: AlgorithmKind::Lshade,
            n_s: 1,
            init: InitMethod::Uniform,
            screener: Screener::Surrogate,
        }
    }

    pub fn pslshade(n_s: usize) -> Self {
        Self {
            name: "pslshade".into(),
            kind: AlgorithmKind::PsLshade,
            n_s,
            init: InitMethod::LatinHypercube,
            screener: Screener::Surrogate,
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Canonical description; any change here changes result identity.
    pub fn fingerprint(&self) -> String {
        format!(
            "{}:{}:n_s={}:init={:?}:screener={:?}",
            self.name,
            self.kind.name(),
            self.n_s,
            self.init,
            self.screener
        )
    }
}

/// Evaluation budget per dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Budget {
    Hundred,
    Thousand,
    TenThousand,
}

impl Budget {
    pub fn multiplier(self) -> usize {
        match self {
            Budget::Hundred => 100,
            Budget::Thousand => 1_000,
            Budget::TenThousand => 10_000,
        }
    }

    pub fn max_nfe(self, dim: usize) -> usize {
        self.multiplier() * dim
    }

    pub fn from_multiplier(m: usize) -> Result<Self> {
        match m {
            100 => Ok(Budget::Hundred),
            1_000 => Ok(Budget::Thousand),
            10_000 => Ok(Budget::TenThousand),
            _ => Err(Error::Config(format!("budget multiplier must be 100, 1000 or 10000, got {m}"))),
        }
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*D", self.multiplier())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub algorithms: Vec<AlgorithmSpec>,
    pub dimensions: Vec<usize>,
    pub functions: Vec<usize>,
    pub combos: Vec<Combo>,
    pub budget: Budget,
    pub repetitions: usize,
    pub master_seed: u64,
    /// Seed of the suite's transformation instances.
    pub suite_seed: u64,
    pub diagnostics: bool,
    pub threads: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            name: "experiment".into(),
            algorithms: vec![AlgorithmSpec::lshade(), AlgorithmSpec::pslshade(5)],
            dimensions: vec![10, 20],
            functions: (1..=SUITE_SIZE).collect(),
            combos: Combo::ALL.to_vec(),
            budget: Budget::Thousand,
            repetitions: 30,
            master_seed: 1,
            suite_seed: 1,
            diagnostics: false,
            threads: 1,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    experiment: RawExperiment,
    #[serde(default)]
    algorithm: Vec<RawAlgorithm>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExperiment {
    name: Option<String>,
    dimensions: Option<Vec<usize>>,
    functions: Option<Vec<usize>>,
    combos: Option<Vec<String>>,
    budget_multiplier: Option<usize>,
    repetitions: Option<usize>,
    master_seed: Option<u64>,
    suite_seed: Option<u64>,
    diagnostics: Option<bool>,
    threads: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgorithm {
    kind: String,
    name: Option<String>,
    n_s: Option<usize>,
    init: Option<String>,
    screener: Option<String>,
}

impl RawAlgorithm {
    fn resolve(self) -> Result<AlgorithmSpec> {
        let mut spec = match self.kind.to_ascii_lowercase().as_str() {
            "lshade" => {
                if self.n_s.is_some_and(|n| n != 1) || self.screener.is_some() {
                    return Err(Error::Config("lshade takes neither n_s nor screener".into()));
                }
                AlgorithmSpec::lshade()
            }
            "pslshade" => AlgorithmSpec::pslshade(self.n_s.unwrap_or(5)),
            other => return Err(Error::Config(format!("unknown algorithm kind `{other}`"))),
        };
        if let Some(name) = self.name {
            spec.name = name;
        }
        if let Some(init) = self.init {
            spec.init = match init.to_ascii_lowercase().as_str() {
                "uniform" => InitMethod::Uniform,
                "lhs" | "latin_hypercube" => InitMethod::LatinHypercube,
                other => return Err(Error::Config(format!("unknown init method `{other}`"))),
            };
        }
        if let Some(screener) = self.screener {
            spec.screener = match screener.to_ascii_lowercase().as_str() {
                "surrogate" => Screener::Surrogate,
                "random" => Screener::Random,
                other => return Err(Error::Config(format!("unknown screener `{other}`"))),
            };
        }
        Ok(spec)
    }
}

impl FromStr for ExperimentConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let raw: RawFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let defaults = ExperimentConfig::default();
        let e = raw.experiment;
        let combos = match e.combos {
            Some(list) => list.iter().map(|c| c.parse()).collect::<Result<Vec<Combo>>>()?,
            None => defaults.combos,
        };
        let algorithms = if raw.algorithm.is_empty() {
            defaults.algorithms
        } else {
            raw.algorithm
                .into_iter()
                .map(RawAlgorithm::resolve)
                .collect::<Result<Vec<_>>>()?
        };
        let master_seed = e.master_seed.unwrap_or(defaults.master_seed);
        let config = ExperimentConfig {
            name: e.name.unwrap_or(defaults.name),
            algorithms,
            dimensions: e.dimensions.unwrap_or(defaults.dimensions),
            functions: e.functions.unwrap_or(defaults.functions),
            combos,
            budget: match e.budget_multiplier {
                Some(m) => Budget::from_multiplier(m)?,
                None => defaults.budget,
            },
            repetitions: e.repetitions.unwrap_or(defaults.repetitions),
            master_seed,
            suite_seed: e.suite_seed.unwrap_or(master_seed),
            diagnostics: e.diagnostics.unwrap_or(false),
            threads: e.threads.unwrap_or(1),
        };
        config.validate()?;
        Ok(config)
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        text.parse()
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.algorithms.is_empty() {
            return fail("no algorithms configured".into());
        }
        let mut names: Vec<&str> = self.algorithms.iter().map(|a| a.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return fail("algorithm names must be unique".into());
        }
        for a in &self.algorithms {
            let ok_name = !a.name.is_empty()
                && a.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
            if !ok_name {
                return fail(format!("algorithm name `{}` must be alphanumeric, `_` or `-`", a.name));
            }
            if a.n_s == 0 {
                return fail(format!("{}: n_s must be at least 1", a.name));
            }
        }
        if self.repetitions == 0 {
            return fail("repetitions must be at least 1".into());
        }
        if self.dimensions.is_empty() || self.functions.is_empty() || self.combos.is_empty() {
            return fail("dimensions, functions and combos must be non-empty".into());
        }
        for &d in &self.dimensions {
            if !(2..=100).contains(&d) {
                return fail(format!("dimension {d} outside 2..=100"));
            }
        }
        for &f in &self.functions {
            if !(1..=SUITE_SIZE).contains(&f) {
                return fail(format!("function id {f} outside 1..={SUITE_SIZE}"));
            }
        }
        if self.threads == 0 {
            return fail("threads must be at least 1".into());
        }
        Ok(())
    }

    pub fn algorithm(&self, name: &str) -> Option<&AlgorithmSpec> {
        self.algorithms.iter().find(|a| a.name == name)
    }

    /// Stream seed of one run.
    pub fn cell_seed(&self, algorithm: &str, function: usize, combo: Combo, dim: usize, rep: usize) -> u64 {
        let combo_index = Combo::ALL.iter().position(|c| *c == combo).unwrap_or(0) as u64;
        seed::mix(
            self.master_seed,
            &[
                seed::label_hash(algorithm),
                function as u64,
                combo_index,
                dim as u64,
                rep as u64,
            ],
        )
    }

    /// Identity of everything that determines a cell's output.
    pub fn cell_hash(&self, algorithm: &AlgorithmSpec) -> u64 {
        seed::label_hash(&format!(
            "{}|budget={}|master={}|suite={}|diag={}",
            algorithm.fingerprint(),
            self.budget.multiplier(),
            self.master_seed,
            self.suite_seed,
            self.diagnostics
        ))
    }

    pub fn cell_count(&self) -> usize {
        self.algorithms.len() * self.dimensions.len() * self.functions.len() * self.combos.len() * self.repetitions
    }
}
