use rand::Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub position: Vec<f64>,
    pub fitness: f64,
}

/// Members with a generation counter.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Population {
    pub members: Vec<Individual>,
    pub generation: usize,
}

impl Population {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Member indices from best to worst, ties by index.
    pub fn ranking(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.members.len()).collect();
        order.sort_by(|&a, &b| self.members[a].fitness.total_cmp(&self.members[b].fitness));
        order
    }

    pub fn best(&self) -> Option<&Individual> {
        self.ranking().first().map(|&i| &self.members[i])
    }

    /// Keeps the `new_size` best members, in their original order.
    pub fn shrink(&mut self, new_size: usize) {
        if new_size >= self.members.len() {
            return;
        }
        let mut keep = vec![false; self.members.len()];
        for &i in &self.ranking()[..new_size] {
            keep[i] = true;
        }
        let mut flags = keep.into_iter();
        self.members.retain(|_| flags.next().unwrap());
    }
}

/// Parents displaced by better trials, used as extra difference donors.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExternalArchive {
    entries: Vec<Vec<f64>>,
    capacity: usize,
}

impl ExternalArchive {
    pub fn new(capacity: usize) -> Self {
        Self {
            entries: Vec::with_capacity(capacity),
            capacity,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn get(&self, k: usize) -> &[f64] {
        &self.entries[k]
    }

    /// Adds `position`, overwriting a random entry when full.
    pub fn push<R: Rng + ?Sized>(&mut self, position: Vec<f64>, rng: &mut R) {
        if self.capacity == 0 {
            return;
        }
        if self.entries.len() < self.capacity {
            self.entries.push(position);
        } else {
            let k = rng.random_range(0..self.entries.len());
            self.entries[k] = position;
        }
    }

    /// Sets a new capacity, evicting random entries down to it.
    pub fn resize<R: Rng + ?Sized>(&mut self, capacity: usize, rng: &mut R) {
        self.capacity = capacity;
        while self.entries.len() > capacity {
            let k = rng.random_range(0..self.entries.len());
            self.entries.swap_remove(k);
        }
    }
}
