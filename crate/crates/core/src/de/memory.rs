use rand::Rng;
use rand_distr::{Cauchy, Distribution, Normal};

/// Scale of the Cauchy and normal draws around a memory slot.
pub const SAMPLING_SCALE: f64 = 0.1;
/// Redraws of a non-positive scaling factor before falling back to the slot value.
pub const MAX_F_REDRAWS: usize = 100;

/// Success-history memory of `(M_F, M_CR)` pairs.
///
/// A CR slot holding `None` is terminal and always yields `CR = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterMemory {
    f: Vec<f64>,
    cr: Vec<Option<f64>>,
    cursor: usize,
}

impl ParameterMemory {
    pub fn new(size: usize, m_f: f64, m_cr: f64) -> Self {
        assert!(size > 0, "memory needs at least one slot");
        Self {
            f: vec![m_f; size],
            cr: vec![Some(m_cr); size],
            cursor: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    pub fn f_slot(&self, k: usize) -> f64 {
        self.f[k]
    }

    pub fn cr_slot(&self, k: usize) -> Option<f64> {
        self.cr[k]
    }

    pub fn is_terminal(&self, k: usize) -> bool {
        self.cr[k].is_none()
    }

    /// Slot the next update writes to (0-based).
    pub fn cursor(&self) -> usize {
        self.cursor
    }

    /// Records one generation of successes, given as `(value, improvement)`.
    ///
    /// Nothing changes when there were no successes. A CR slot becomes
    /// terminal when every successful CR is zero, and stays terminal.
    pub fn update(&mut self, s_f: &[(f64, f64)], s_cr: &[(f64, f64)]) {
        let (Some(mean_f), false) = (weighted_lehmer(s_f), s_cr.is_empty()) else {
            return;
        };
        let k = self.cursor;
        self.f[k] = mean_f;
        let all_zero = s_cr.iter().all(|(cr, _)| *cr == 0.0);
        self.cr[k] = match self.cr[k] {
            None => None,
            Some(_) if all_zero => None,
            Some(old) => Some(weighted_lehmer(s_cr).unwrap_or(old)),
        };
        self.cursor = (k + 1) % self.f.len();
    }
}

/// Improvement-weighted Lehmer mean `sum(w s^2) / sum(w s)`; `None` if empty
/// or degenerate.
pub fn weighted_lehmer(successes: &[(f64, f64)]) -> Option<f64> {
    let total: f64 = successes.iter().map(|(_, d)| d).sum();
    if successes.is_empty() || !(total > 0.0) {
        return None;
    }
    let (num, den) = successes.iter().fold((0.0, 0.0), |(n, d), &(s, delta)| {
        let w = delta / total;
        (n + w * s * s, d + w * s)
    });
    if den > 0.0 {
        Some(num / den)
    } else {
        None
    }
}

/// Scaling factor from raw location-`m_f` Cauchy draws supplied by `draw`.
///
/// Draws above 1 are truncated to 1, non-positive draws are redrawn.
pub fn sample_f_with(m_f: f64, mut draw: impl FnMut() -> f64) -> f64 {
    for _ in 0..MAX_F_REDRAWS {
        let f = draw();
        if f > 0.0 {
            return f.min(1.0);
        }
    }
    m_f
}

pub fn sample_f<R: Rng + ?Sized>(m_f: f64, rng: &mut R) -> f64 {
    let cauchy = Cauchy::new(m_f, SAMPLING_SCALE).expect("positive scale");
    sample_f_with(m_f, || cauchy.sample(rng))
}

/// Crossover rate from one raw normal draw; terminal slots give 0.
pub fn sample_cr_with(m_cr: Option<f64>, draw: impl FnOnce() -> f64) -> f64 {
    match m_cr {
        None => 0.0,
        Some(_) => draw().clamp(0.0, 1.0),
    }
}

pub fn sample_cr<R: Rng + ?Sized>(m_cr: Option<f64>, rng: &mut R) -> f64 {
    sample_cr_with(m_cr, || {
        let m = m_cr.unwrap_or(0.0);
        Normal::new(m, SAMPLING_SCALE).expect("positive scale").sample(rng)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lehmer_hand_values() {
        assert_eq!(weighted_lehmer(&[(0.5, 3.0)]), Some(0.5));
        let v = weighted_lehmer(&[(0.2, 1.0), (0.8, 1.0)]).unwrap();
        assert!((v - 0.68).abs() < 1e-12);
        let c = weighted_lehmer(&[(0.3, 0.1), (0.3, 7.0)]).unwrap();
        assert!((c - 0.3).abs() < 1e-15);
        assert_eq!(weighted_lehmer(&[]), None);
    }

    #[test]
    fn f_truncation_and_redraw() {
        assert_eq!(sample_f_with(0.5, || 1.7), 1.0);
        let mut raws = [-0.2, 0.6].into_iter();
        assert_eq!(sample_f_with(0.5, || raws.next().unwrap()), 0.6);
        let mut calls = 0;
        assert_eq!(
            sample_f_with(0.4, || {
                calls += 1;
                -1.0
            }),
            0.4
        );
        assert_eq!(calls, MAX_F_REDRAWS);
    }

    #[test]
    fn cr_clipping_and_terminal() {
        assert_eq!(sample_cr_with(None, || 0.7), 0.0);
        assert_eq!(sample_cr_with(Some(0.5), || 1.3), 1.0);
        assert_eq!(sample_cr_with(Some(0.5), || -0.1), 0.0);
    }

    #[test]
    fn sampled_f_stays_in_unit_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100_000 {
            let f = sample_f(0.5, &mut rng);
            assert!(f > 0.0 && f <= 1.0);
        }
    }

    #[test]
    fn empty_successes_leave_memory_unchanged() {
        let mut m = ParameterMemory::new(5, 0.5, 0.5);
        let before = m.clone();
        m.update(&[], &[]);
        assert_eq!(m, before);
    }

    #[test]
    fn zero_crs_mark_slot_terminal_for_good() {
        let mut m = ParameterMemory::new(1, 0.5, 0.5);
        m.update(&[(0.4, 1.0)], &[(0.0, 1.0), (0.0, 2.0), (0.0, 0.5)]);
        assert!(m.is_terminal(0));
        m.update(&[(0.6, 1.0)], &[(0.9, 1.0)]);
        assert!(m.is_terminal(0));
        assert_eq!(m.f_slot(0), 0.6);
    }

    #[test]
    fn cursor_wraps() {
        let mut m = ParameterMemory::new(5, 0.5, 0.5);
        for _ in 0..6 {
            m.update(&[(0.3, 1.0)], &[(0.3, 1.0)]);
        }
        // Six writes filled slots 1..5 then 1 again; the seventh lands on slot 2.
        assert_eq!(m.cursor(), 1);
    }
}
