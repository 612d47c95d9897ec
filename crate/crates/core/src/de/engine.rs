use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::memory::{sample_cr, sample_f, ParameterMemory};
use super::operators::{crossover, mutate, repair, trial_wins};
use super::params::{lpsr_next_size, ControlParams};
use super::population::{ExternalArchive, Individual, Population};
use crate::benchmark::SearchBounds;
use crate::error::{Error, Result};
use crate::prescreen::lhs_init;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitMethod {
    #[default]
    Uniform,
    LatinHypercube,
}

/// Uniform random points in the box.
pub fn uniform_init<R: Rng + ?Sized>(n: usize, bounds: &SearchBounds, rng: &mut R) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            bounds
                .lower()
                .iter()
                .zip(bounds.upper())
                .map(|(&lo, &hi)| lo + (hi - lo) * rng.random::<f64>())
                .collect()
        })
        .collect()
}

/// Candidates generated for one parent. All share the memory slot, CR,
/// forced coordinate and crossover draws; each has its own F and donors.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialSet {
    pub parent: usize,
    pub slot: usize,
    pub cr: f64,
    pub d_rand: usize,
    pub f: Vec<f64>,
    pub trials: Vec<Vec<f64>>,
}

/// The trial chosen for true evaluation, with its control values.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub trial: Vec<f64>,
    pub fitness: f64,
    pub f: f64,
    pub cr: f64,
}

/// Result of one generation's selection.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GenerationSummary {
    pub successes: usize,
    pub evaluated: usize,
}

/// Population, external archive, memory, budget and random stream shared by
/// the plain and pre-screening engines.
#[derive(Debug, Clone)]
pub struct DeState {
    params: ControlParams,
    bounds: SearchBounds,
    population: Population,
    archive: ExternalArchive,
    memory: ParameterMemory,
    nfe: usize,
    rng: ChaCha8Rng,
}

impl DeState {
    pub fn new(params: ControlParams, bounds: SearchBounds, seed: u64) -> Result<Self> {
        params.validate()?;
        let memory = ParameterMemory::new(params.memory_size, params.m_f_init, params.m_cr_init);
        let archive = ExternalArchive::new(params.archive_capacity(params.n_init));
        Ok(Self {
            params,
            bounds,
            population: Population::default(),
            archive,
            memory,
            nfe: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn params(&self) -> &ControlParams {
        &self.params
    }

    pub fn bounds(&self) -> &SearchBounds {
        &self.bounds
    }

    pub fn population(&self) -> &Population {
        &self.population
    }

    pub fn archive(&self) -> &ExternalArchive {
        &self.archive
    }

    pub fn memory(&self) -> &ParameterMemory {
        &self.memory
    }

    pub fn nfe(&self) -> usize {
        self.nfe
    }

    pub fn remaining(&self) -> usize {
        self.params.max_nfe.saturating_sub(self.nfe)
    }

    pub fn initialized(&self) -> bool {
        !self.population.is_empty()
    }

    pub fn is_done(&self) -> bool {
        self.initialized() && self.remaining() == 0
    }

    pub fn initial_positions(&mut self, method: InitMethod) -> Vec<Vec<f64>> {
        let n = self.params.n_init;
        match method {
            InitMethod::Uniform => uniform_init(n, &self.bounds, &mut self.rng),
            InitMethod::LatinHypercube => lhs_init(n, &self.bounds, &mut self.rng),
        }
    }

    pub fn set_initial(&mut self, positions: Vec<Vec<f64>>, fitness: &[f64]) -> Result<()> {
        if positions.len() != fitness.len() {
            return Err(Error::Input(format!(
                "{} initial points but {} fitness values",
                positions.len(),
                fitness.len()
            )));
        }
        self.check_finite(fitness)?;
        self.nfe += fitness.len();
        self.population.members = positions
            .into_iter()
            .zip(fitness)
            .map(|(position, &fitness)| Individual { position, fitness })
            .collect();
        Ok(())
    }

    fn check_finite(&self, fitness: &[f64]) -> Result<()> {
        match fitness.iter().position(|v| !v.is_finite()) {
            Some(k) => Err(Error::NonFinite {
                value: fitness[k],
                nfe: self.nfe + k + 1,
            }),
            None => Ok(()),
        }
    }

    /// Generates `n_s` trials for member `parent`.
    ///
    /// Draw order: memory slot, CR, forced coordinate, crossover draws, then
    /// per trial F, pbest, r1, r2. With `n_s = 1` this is the plain step.
    pub fn generate_trials(&mut self, ranking: &[usize], parent: usize, n_s: usize) -> TrialSet {
        let n = self.population.len();
        let dim = self.bounds.dimension();
        let rng = &mut self.rng;
        let slot = rng.random_range(0..self.memory.len());
        let cr = sample_cr(self.memory.cr_slot(slot), rng);
        let d_rand = rng.random_range(0..dim);
        let draws: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
        let m_f = self.memory.f_slot(slot);
        let pool = self.params.pbest_pool(n);
        let members = &self.population.members;
        let x = &members[parent].position;

        let mut fs = Vec::with_capacity(n_s);
        let mut trials = Vec::with_capacity(n_s);
        for _ in 0..n_s {
            let f = sample_f(m_f, rng);
            let pbest = ranking[rng.random_range(0..pool)];
            let r1 = loop {
                let r = rng.random_range(0..n);
                if r != parent {
                    break r;
                }
            };
            let r2 = loop {
                let r = rng.random_range(0..n + self.archive.len());
                if r != parent && r != r1 {
                    break r;
                }
            };
            let x_r2 = if r2 < n {
                &members[r2].position[..]
            } else {
                self.archive.get(r2 - n)
            };
            let v = mutate(x, &members[pbest].position, &members[r1].position, x_r2, f);
            let mut u = crossover(x, &v, cr, d_rand, &draws);
            repair(&mut u, x, self.bounds.lower(), self.bounds.upper());
            fs.push(f);
            trials.push(u);
        }
        TrialSet {
            parent,
            slot,
            cr,
            d_rand,
            f: fs,
            trials,
        }
    }

    /// One trial set per member, in member order.
    pub fn generate_generation(&mut self, n_s: usize) -> Vec<TrialSet> {
        let ranking = self.population.ranking();
        (0..self.population.len())
            .map(|i| self.generate_trials(&ranking, i, n_s))
            .collect()
    }

    /// Greedy selection for the first `outcomes.len()` members, memory
    /// update and population size reduction.
    pub fn finish_generation(&mut self, outcomes: Vec<Outcome>) -> Result<GenerationSummary> {
        if outcomes.len() > self.population.len() || outcomes.len() > self.remaining() {
            return Err(Error::Input(format!(
                "{} outcomes for {} members and {} remaining evaluations",
                outcomes.len(),
                self.population.len(),
                self.remaining()
            )));
        }
        let fitness: Vec<f64> = outcomes.iter().map(|o| o.fitness).collect();
        self.check_finite(&fitness)?;
        self.nfe += outcomes.len();

        let evaluated = outcomes.len();
        let mut s_f = Vec::new();
        let mut s_cr = Vec::new();
        for (i, o) in outcomes.into_iter().enumerate() {
            let parent_fitness = self.population.members[i].fitness;
            if trial_wins(o.fitness, parent_fitness) {
                let delta = parent_fitness - o.fitness;
                s_f.push((o.f, delta));
                s_cr.push((o.cr, delta));
                let old = std::mem::replace(
                    &mut self.population.members[i],
                    Individual {
                        position: o.trial,
                        fitness: o.fitness,
                    },
                );
                self.archive.push(old.position, &mut self.rng);
            }
        }
        self.memory.update(&s_f, &s_cr);

        let size = lpsr_next_size(&self.params, self.nfe);
        self.population.shrink(size);
        let capacity = self.params.archive_capacity(self.population.len());
        self.archive.resize(capacity, &mut self.rng);
        self.population.generation += 1;
        Ok(GenerationSummary {
            successes: s_f.len(),
            evaluated,
        })
    }
}

/// Step-wise LSHADE driver: `ask` returns points to evaluate, `tell` takes
/// their fitness values in the same order.
#[derive(Debug, Clone)]
pub struct Lshade {
    state: DeState,
    init: InitMethod,
    pending: Pending,
}

#[derive(Debug, Clone)]
enum Pending {
    Nothing,
    Initial(Vec<Vec<f64>>),
    Generation(Vec<TrialSet>, usize),
}

impl Lshade {
    pub fn new(params: ControlParams, bounds: SearchBounds, seed: u64) -> Result<Self> {
        Self::with_init(params, bounds, seed, InitMethod::Uniform)
    }

    pub fn with_init(params: ControlParams, bounds: SearchBounds, seed: u64, init: InitMethod) -> Result<Self> {
        Ok(Self {
            state: DeState::new(params, bounds, seed)?,
            init,
            pending: Pending::Nothing,
        })
    }

    pub fn state(&self) -> &DeState {
        &self.state
    }

    pub fn is_done(&self) -> bool {
        self.state.is_done()
    }

    /// Points awaiting evaluation; empty once the budget is spent. A
    /// generation that would overrun the budget is cut to the leading members.
    pub fn ask(&mut self) -> Vec<Vec<f64>> {
        if !matches!(self.pending, Pending::Nothing) {
            return self.pending_points();
        }
        if !self.state.initialized() {
            let points = self.state.initial_positions(self.init);
            self.pending = Pending::Initial(points);
        } else if self.state.remaining() > 0 {
            let sets = self.state.generate_generation(1);
            let k = sets.len().min(self.state.remaining());
            self.pending = Pending::Generation(sets, k);
        }
        self.pending_points()
    }

    fn pending_points(&self) -> Vec<Vec<f64>> {
        match &self.pending {
            Pending::Nothing => Vec::new(),
            Pending::Initial(points) => points.clone(),
            Pending::Generation(sets, k) => sets[..*k].iter().map(|s| s.trials[0].clone()).collect(),
        }
    }

    pub fn tell(&mut self, fitness: &[f64]) -> Result<()> {
        match std::mem::replace(&mut self.pending, Pending::Nothing) {
            Pending::Nothing => Err(Error::Input("tell without a pending ask".into())),
            Pending::Initial(points) => self.state.set_initial(points, fitness),
            Pending::Generation(sets, k) => {
                if fitness.len() != k {
                    return Err(Error::Input(format!("expected {k} fitness values, got {}", fitness.len())));
                }
                let outcomes = sets
                    .into_iter()
                    .zip(fitness)
                    .map(|(mut s, &fitness)| Outcome {
                        trial: s.trials.swap_remove(0),
                        fitness,
                        f: s.f[0],
                        cr: s.cr,
                    })
                    .collect();
                self.state.finish_generation(outcomes).map(|_| ())
            }
        }
    }

    /// Runs to budget exhaustion with a sequential objective.
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
