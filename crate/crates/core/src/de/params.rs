use crate::error::{Error, Result};

/// LSHADE control parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlParams {
    pub n_init: usize,
    pub n_min: usize,
    /// Share of the population forming the pbest pool.
    pub p_best: f64,
    /// External archive capacity as a multiple of the population size.
    pub archive_rate: f64,
    pub memory_size: usize,
    pub m_f_init: f64,
    pub m_cr_init: f64,
    pub max_nfe: usize,
}

impl ControlParams {
    /// Standard settings for `dimension`: `N_init = 18 D`, `N_min = 4`,
    /// `M_F = M_CR = 0.5`, `p = 0.11`, `a = 1.4`, `H = 5`.
    pub fn for_dimension(dimension: usize, max_nfe: usize) -> Self {
        Self {
            n_init: 18 * dimension,
            n_min: 4,
            p_best: 0.11,
            archive_rate: 1.4,
            memory_size: 5,
            m_f_init: 0.5,
            m_cr_init: 0.5,
            max_nfe,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.n_min < 4 {
            return fail(format!("n_min must be at least 4, got {}", self.n_min));
        }
        if self.n_init < self.n_min {
            return fail(format!("n_init {} is below n_min {}", self.n_init, self.n_min));
        }
        if !(self.p_best > 0.0 && self.p_best <= 1.0) {
            return fail(format!("p_best must lie in (0, 1], got {}", self.p_best));
        }
        if !(self.archive_rate >= 0.0 && self.archive_rate.is_finite()) {
            return fail(format!("archive_rate must be finite and non-negative, got {}", self.archive_rate));
        }
        if self.memory_size == 0 {
            return fail("memory_size must be positive".into());
        }
        if !(self.m_f_init > 0.0 && self.m_f_init <= 1.0) {
            return fail(format!("m_f_init must lie in (0, 1], got {}", self.m_f_init));
        }
        if !(0.0..=1.0).contains(&self.m_cr_init) {
            return fail(format!("m_cr_init must lie in [0, 1], got {}", self.m_cr_init));
        }
        if self.max_nfe < self.n_init {
            return fail(format!(
                "budget {} is smaller than the initial population {}",
                self.max_nfe, self.n_init
            ));
        }
        Ok(())
    }

    /// `floor(a * N)`, with slack so that e.g. `1.4 * 360` gives 504.
    pub fn archive_capacity(&self, population: usize) -> usize {
        let exact = self.archive_rate * population as f64;
        (exact + 1e-9 * exact.max(1.0)).floor() as usize
    }

    /// Size of the pbest pool for a population of `population`.
    pub fn pbest_pool(&self, population: usize) -> usize {
        ((self.p_best * population as f64).round() as usize)
            .max(2)
            .min(population)
    }
}

/// Linear population size reduction: the size after `nfe` evaluations.
///
/// Evaluated in exact rational arithmetic, rounding halves up, so ties such
/// as 8.5 never depend on floating-point error.
pub fn lpsr_next_size(params: &ControlParams, nfe: usize) -> usize {
    let max = params.max_nfe.max(1) as u128;
    let n_init = params.n_init as u128;
    let span = params.n_init.saturating_sub(params.n_min) as u128;
    let numer = n_init * max - span * nfe.min(params.max_nfe) as u128;
    let size = ((2 * numer + max) / (2 * max)) as usize;
    size.clamp(params.n_min.min(params.n_init), params.n_init)
}
