/// Equality tolerance for positions and fitness values.
pub const SIMILARITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsertOutcome {
    Inserted,
    /// The worst entry was evicted to make room.
    Replaced,
    RejectedSimilar,
    RejectedWorse,
}

impl InsertOutcome {
    pub fn changed(self) -> bool {
        matches!(self, InsertOutcome::Inserted | InsertOutcome::Replaced)
    }
}

/// Bounded store of evaluated `(point, fitness)` pairs for model fitting.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleArchive {
    positions: Vec<Vec<f64>>,
    fitness: Vec<f64>,
    capacity: usize,
    version: u64,
}

impl SampleArchive {
    pub fn new(capacity: usize) -> Self {
        Self {
            positions: Vec::with_capacity(capacity),
            fitness: Vec::with_capacity(capacity),
            capacity,
            version: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn positions(&self) -> &[Vec<f64>] {
        &self.positions
    }

    pub fn fitness(&self) -> &[f64] {
        &self.fitness
    }

    /// Bumped on every change to the contents.
    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn worst(&self) -> Option<(usize, f64)> {
        self.fitness
            .iter()
            .copied()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))
    }

    pub fn is_similar(&self, position: &[f64], fitness: f64) -> bool {
        self.positions.iter().zip(&self.fitness).any(|(p, &f)| {
            (f - fitness).abs() <= SIMILARITY_TOL
                || p.iter().zip(position).all(|(a, b)| (a - b).abs() <= SIMILARITY_TOL)
        })
    }

    pub fn insert(&mut self, position: &[f64], fitness: f64) -> InsertOutcome {
        if self.capacity == 0 {
            return InsertOutcome::RejectedWorse;
        }
        if self.is_similar(position, fitness) {
            return InsertOutcome::RejectedSimilar;
        }
        if self.len() < self.capacity {
            self.positions.push(position.to_vec());
            self.fitness.push(fitness);
            self.version += 1;
            return InsertOutcome::Inserted;
        }
        let (worst, worst_fitness) = self.worst().expect("full archive is non-empty");
        if fitness < worst_fitness {
            self.positions[worst] = position.to_vec();
            self.fitness[worst] = fitness;
            self.version += 1;
            InsertOutcome::Replaced
        } else {
            InsertOutcome::RejectedWorse
        }
    }
}
