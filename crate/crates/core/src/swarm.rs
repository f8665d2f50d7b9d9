use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objectives::Objective;
use crate::rng::Stream;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub position: Vec<f64>,
    /// Position one iteration earlier.
    pub previous_position: Vec<f64>,
    pub fitness: f64,
}

impl Individual {
    pub fn new(position: Vec<f64>, fitness: f64) -> Self {
        Self {
            previous_position: position.clone(),
            position,
            fitness,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    Roller,
    Brooder,
    Forager,
    Thief,
}

/// Sizes of the four role groups. Roles occupy contiguous index ranges in
/// the order rollers, brooders, foragers, thieves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleCounts {
    pub roll: usize,
    pub brood: usize,
    pub forage: usize,
    pub thief: usize,
}

impl RoleCounts {
    /// Reference split for a population of 30.
    pub const REFERENCE: RoleCounts = RoleCounts {
        roll: 6,
        brood: 6,
        forage: 7,
        thief: 11,
    };

    /// Largest-remainder scaling of [`RoleCounts::REFERENCE`] to `pop` individuals.
    pub fn proportional(pop: usize) -> Self {
        let reference = [6usize, 6, 7, 11];
        let total: usize = reference.iter().sum();
        let mut counts = [0usize; 4];
        let mut remainders = [(0usize, 0usize); 4];
        for (g, &r) in reference.iter().enumerate() {
            let scaled = r * pop;
            counts[g] = scaled / total;
            remainders[g] = (scaled % total, g);
        }
        let mut left = pop - counts.iter().sum::<usize>();
        // Largest remainder first; ties go to the later (larger) group.
        remainders.sort_by(|a, b| b.0.cmp(&a.0).then(b.1.cmp(&a.1)));
        for &(_, g) in remainders.iter() {
            if left == 0 {
                break;
            }
            counts[g] += 1;
            left -= 1;
        }
        RoleCounts {
            roll: counts[0],
            brood: counts[1],
            forage: counts[2],
            thief: counts[3],
        }
    }

    pub fn total(&self) -> usize {
        self.roll + self.brood + self.forage + self.thief
    }

    pub fn role_of(&self, index: usize) -> Role {
        if index < self.roll {
            Role::Roller
        } else if index < self.roll + self.brood {
            Role::Brooder
        } else if index < self.roll + self.brood + self.forage {
            Role::Forager
        } else {
            Role::Thief
        }
    }
}

/// Population plus the tracked best and worst individuals.
#[derive(Debug, Clone, PartialEq)]
pub struct SwarmState {
    pub individuals: Vec<Individual>,
    pub roles: RoleCounts,
    /// Completed iterations.
    pub iteration: usize,
    pub max_iters: usize,
    /// Best individual ever observed (X*).
    pub global_best: Individual,
    /// Best individual of the current iteration (X^b).
    pub iteration_best: Individual,
    /// Worst individual of the current iteration (X^w).
    pub global_worst: Individual,
    pub evaluations: u64,
    /// Stream consumed by noisy objectives.
    pub noise: Stream,
}

impl SwarmState {
    /// Evaluates `positions` and builds the iteration-0 state.
    pub fn new(
        positions: Vec<Vec<f64>>,
        objective: &dyn Objective,
        roles: RoleCounts,
        max_iters: usize,
        mut noise: Stream,
    ) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::EmptyRequest("swarm needs at least one individual"));
        }
        if roles.total() != positions.len() {
            return Err(Error::Config(format!(
                "role counts sum to {} but the population has {} individuals",
                roles.total(),
                positions.len()
            )));
        }
        let individuals = positions
            .into_iter()
            .map(|p| {
                let f = objective.evaluate(&p, &mut noise)?;
                Ok(Individual::new(p, f))
            })
            .collect::<Result<Vec<_>>>()?;
        let evaluations = individuals.len() as u64;
        let first = individuals[0].clone();
        let mut state = Self {
            individuals,
            roles,
            iteration: 0,
            max_iters,
            global_best: first.clone(),
            iteration_best: first.clone(),
            global_worst: first,
            evaluations,
            noise,
        };
        state.refresh_extremes();
        Ok(state)
    }

    pub fn len(&self) -> usize {
        self.individuals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.individuals.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.individuals[0].position.len()
    }

    pub fn evaluate(&mut self, objective: &dyn Objective, x: &[f64]) -> f64 {
        self.evaluations += 1;
        objective.value(x, &mut self.noise)
    }

    /// Recomputes X^b and X^w from the current population and folds X^b into X*.
    pub fn refresh_extremes(&mut self) {
        let mut best = 0;
        let mut worst = 0;
        for (i, ind) in self.individuals.iter().enumerate() {
            if ind.fitness < self.individuals[best].fitness {
                best = i;
            }
            if ind.fitness > self.individuals[worst].fitness {
                worst = i;
            }
        }
        self.iteration_best = self.individuals[best].clone();
        self.global_worst = self.individuals[worst].clone();
        if self.iteration_best.fitness < self.global_best.fitness {
            self.global_best = self.iteration_best.clone();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_split_for_thirty() {
        assert_eq!(RoleCounts::proportional(30), RoleCounts::REFERENCE);
    }

    #[test]
    fn proportional_split_sums_to_population() {
        for pop in 1..200 {
            let c = RoleCounts::proportional(pop);
            assert_eq!(c.total(), pop, "pop {pop}");
        }
        assert_eq!(RoleCounts::proportional(60).thief, 22);
        assert_eq!(
            RoleCounts::proportional(1),
            RoleCounts {
                roll: 0,
                brood: 0,
                forage: 0,
                thief: 1
            }
        );
    }

    #[test]
    fn roles_by_index() {
        let c = RoleCounts::REFERENCE;
        assert_eq!(c.role_of(0), Role::Roller);
        assert_eq!(c.role_of(6), Role::Brooder);
        assert_eq!(c.role_of(12), Role::Forager);
        assert_eq!(c.role_of(18), Role::Forager);
        assert_eq!(c.role_of(19), Role::Thief);
        assert_eq!(c.role_of(29), Role::Thief);
    }
}
