use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::archive::SampleArchive;
use super::features::feature_count;
use super::model::{argmin_surrogate, MetaModel};
use crate::benchmark::SearchBounds;
use crate::de::{ControlParams, DeState, InitMethod, Outcome, TrialSet};
use crate::error::{Error, Result};
use crate::seed;

/// How the evaluated trial is picked among the candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Screener {
    #[default]
    Surrogate,
    /// Uniform random pick; a baseline for the surrogate's accuracy.
    Random,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScreeningConfig {
    /// Trial vectors per individual.
    pub n_s: usize,
    /// Sample archive capacity; `None` means twice the model's term count.
    pub archive_capacity: Option<usize>,
    pub init: InitMethod,
    pub screener: Screener,
    /// Fit the model even when there is nothing to choose between.
    pub always_fit: bool,
}

impl Default for ScreeningConfig {
    fn default() -> Self {
        Self {
            n_s: 5,
            archive_capacity: None,
            init: InitMethod::LatinHypercube,
            screener: Screener::Surrogate,
            always_fit: false,
        }
    }
}

impl ScreeningConfig {
    pub fn with_trials(n_s: usize) -> Self {
        Self { n_s, ..Self::default() }
    }
}

/// Candidates and choices of one generation, member order.
#[derive(Debug, Clone, PartialEq)]
pub struct Screening {
    pub sets: Vec<TrialSet>,
    /// Surrogate values per candidate; empty when no model was used.
    pub surrogate: Vec<Vec<f64>>,
    pub chosen: Vec<usize>,
    /// Leading members whose chosen trial is evaluated this generation.
    pub evaluated: usize,
}

impl Screening {
    pub fn chosen_trial(&self, i: usize) -> &[f64] {
        &self.sets[i].trials[self.chosen[i]]
    }

    pub fn chosen_surrogate(&self, i: usize) -> Option<f64> {
        self.surrogate.get(i).map(|s| s[self.chosen[i]])
    }
}

#[derive(Debug, Clone)]
enum Pending {
    Nothing,
    Initial(Vec<Vec<f64>>),
    Generation(Screening),
}

/// LSHADE with surrogate pre-screening of several trials per individual.
#[derive(Debug, Clone)]
pub struct PsLshade {
    state: DeState,
    config: ScreeningConfig,
    samples: SampleArchive,
    model: MetaModel,
    fitted_version: Option<u64>,
    screen_rng: ChaCha8Rng,
    pending: Pending,
}

impl PsLshade {
    pub fn new(params: ControlParams, bounds: SearchBounds, seed: u64, config: ScreeningConfig) -> Result<Self> {
        let dim = bounds.dimension();
        let df = feature_count(dim);
        let capacity = config.archive_capacity.unwrap_or(2 * df);
        if config.n_s == 0 {
            return Err(Error::Config("n_s must be at least 1".into()));
        }
        if capacity < df {
            return Err(Error::Config(format!(
                "sample archive capacity {capacity} is below the model's {df} terms"
            )));
        }
        Ok(Self {
            state: DeState::new(params, bounds, seed)?,
            config,
            samples: SampleArchive::new(capacity),
            model: MetaModel::unfitted(dim),
            fitted_version: None,
            screen_rng: ChaCha8Rng::seed_from_u64(seed::mix(seed, &[seed::label_hash("screen")])),
            pending: Pending::Nothing,
        })
    }

    pub fn state(&self) -> &DeState {
        &self.state
    }

    pub fn config(&self) -> &ScreeningConfig {
        &self.config
    }

    pub fn samples(&self) -> &SampleArchive {
        &self.samples
    }

    /// Model used by the current or most recent generation.
    pub fn model(&self) -> &MetaModel {
        &self.model
    }

    pub fn is_done(&self) -> bool {
        self.state.is_done()
    }

    /// Candidate sets behind the points returned by the last `ask`.
    pub fn pending_screening(&self) -> Option<&Screening> {
        match &self.pending {
            Pending::Generation(s) => Some(s),
            _ => None,
        }
    }

    fn refit(&mut self) {
        if self.fitted_version != Some(self.samples.version()) {
            self.model = MetaModel::fit(&self.samples, self.state.bounds().dimension());
            self.fitted_version = Some(self.samples.version());
        }
    }

    pub fn ask(&mut self) -> Vec<Vec<f64>> {
        if matches!(self.pending, Pending::Nothing) {
            if !self.state.initialized() {
                self.pending = Pending::Initial(self.state.initial_positions(self.config.init));
            } else if self.state.remaining() > 0 {
                self.pending = Pending::Generation(self.screen_generation());
            }
        }
        match &self.pending {
            Pending::Nothing => Vec::new(),
            Pending::Initial(points) => points.clone(),
            Pending::Generation(s) => (0..s.evaluated).map(|i| s.chosen_trial(i).to_vec()).collect(),
        }
    }

    fn screen_generation(&mut self) -> Screening {
        let df = feature_count(self.state.bounds().dimension());
        let model_ready = self.samples.len() >= df;
        let n_s = if model_ready { self.config.n_s } else { 1 };
        let sets = self.state.generate_generation(n_s);
        let evaluated = sets.len().min(self.state.remaining());

        let mut surrogate = Vec::new();
        if model_ready && (n_s > 1 || self.config.always_fit) {
            self.refit();
            if self.model.is_fitted() {
                surrogate = sets
                    .iter()
                    .map(|s| s.trials.iter().map(|t| self.model.predict(t)).collect())
                    .collect();
            }
        }
        let chosen = (0..sets.len())
            .map(|i| match self.config.screener {
                _ if sets[i].trials.len() == 1 => 0,
                Screener::Random => self.screen_rng.random_range(0..sets[i].trials.len()),
                Screener::Surrogate => surrogate.get(i).map_or(0, |v: &Vec<f64>| argmin_surrogate(v)),
            })
            .collect();
        Screening {
            sets,
            surrogate,
            chosen,
            evaluated,
        }
    }

    pub fn tell(&mut self, fitness: &[f64]) -> Result<()> {
        match std::mem::replace(&mut self.pending, Pending::Nothing) {
            Pending::Nothing => Err(Error::Input("tell without a pending ask".into())),
            Pending::Initial(points) => {
                let ok = fitness.len() == points.len() && fitness.iter().all(|v| v.is_finite());
                if ok {
                    for (p, &f) in points.iter().zip(fitness) {
                        self.samples.insert(p, f);
                    }
                }
                self.state.set_initial(points, fitness)
            }
            Pending::Generation(s) => {
                if fitness.len() != s.evaluated {
                    return Err(Error::Input(format!(
                        "expected {} fitness values, got {}",
                        s.evaluated,
                        fitness.len()
                    )));
                }
                let outcomes: Vec<Outcome> = (0..s.evaluated)
                    .map(|i| {
                        let j = s.chosen[i];
                        Outcome {
                            trial: s.sets[i].trials[j].clone(),
                            fitness: fitness[i],
                            f: s.sets[i].f[j],
                            cr: s.sets[i].cr,
                        }
                    })
                    .collect();
                if fitness.iter().all(|v| v.is_finite()) {
                    for o in &outcomes {
                        self.samples.insert(&o.trial, o.fitness);
                    }
                }
                self.state.finish_generation(outcomes).map(|_| ())
            }
        }
    }

    pub fn run(&mut self, mut objective: impl FnMut(&[f64]) -> f64) -> Result<()> {
        loop {
            let points = self.ask();
            if points.is_empty() {
                return Ok(());
            }
            let fitness: Vec<f64> = points.iter().map(|p| objective(p)).collect();
            self.tell(&fitness)?;
        }
    }
}
