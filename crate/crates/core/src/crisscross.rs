//! Horizontal and vertical (longitudinal) crossover with greedy retention.
//!
//! Horizontal crossover blends two individuals dimension by dimension:
//!
//! ```text
//! ms_i[d] = r1·x_i[d] + (1 - r1)·x_j[d] + c1·(x_i[d] - x_j[d])
//! ms_j[d] = r2·x_j[d] + (1 - r2)·x_i[d] + c2·(x_j[d] - x_i[d])
//! ```
//!
//! with `r1, r2 ~ U[0, 1]` and `c1, c2 ~ U[-1, 1]`. Vertical crossover blends
//! two dimensions of one individual, `ms[d1] = r·x[d1] + (1 - r)·x[d2]`.
//! An offspring replaces its parent only when strictly fitter.
//!
//! Draw order per call: the pairing permutation, then for each pair one
//! uniform against `Ph` followed (if selected) by `r1, r2, c1, c2` for each
//! dimension, then for each individual one uniform against `Pv` followed
//! (if selected) by `d1`, `d2`, and `r`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objectives::Objective;
use crate::rng::Draws;
use crate::space::SearchBox;
use crate::swarm::{Individual, SwarmState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossoverParams {
    /// Probability that a pair undergoes horizontal crossover.
    pub horizontal_prob: f64,
    /// Probability that an individual undergoes vertical crossover.
    pub vertical_prob: f64,
}

impl Default for CrossoverParams {
    fn default() -> Self {
        Self {
            horizontal_prob: 1.0,
            vertical_prob: 0.6,
        }
    }
}

impl CrossoverParams {
    pub fn new(horizontal_prob: f64, vertical_prob: f64) -> Result<Self> {
        let p = Self {
            horizontal_prob,
            vertical_prob,
        };
        p.validate()?;
        Ok(p)
    }

    /// Both probabilities in `[0, 1]` and `Pv < Ph`, except that the
    /// all-off setting `Ph = Pv = 0` is accepted.
    pub fn validate(&self) -> Result<()> {
        let (ph, pv) = (self.horizontal_prob, self.vertical_prob);
        if !(0.0..=1.0).contains(&ph) || !(0.0..=1.0).contains(&pv) {
            return Err(Error::Config(format!(
                "crossover probabilities must lie in [0, 1], got ph={ph}, pv={pv}"
            )));
        }
        if pv >= ph && !(ph == 0.0 && pv == 0.0) {
            return Err(Error::Config(format!(
                "vertical probability ({pv}) must be lower than horizontal ({ph})"
            )));
        }
        Ok(())
    }
}

/// Offspring coordinates for dimension `d` of the pair `(xi, xj)`.
pub fn horizontal_cross(
    xi: &[f64],
    xj: &[f64],
    d: usize,
    r1: f64,
    r2: f64,
    c1: f64,
    c2: f64,
) -> (f64, f64) {
    let (a, b) = (xi[d], xj[d]);
    (
        r1 * a + (1.0 - r1) * b + c1 * (a - b),
        r2 * b + (1.0 - r2) * a + c2 * (b - a),
    )
}

/// Blend of dimensions `d1` and `d2` of `x`, destined for dimension `d1`.
pub fn vertical_cross(x: &[f64], d1: usize, d2: usize, r: f64) -> f64 {
    r * x[d1] + (1.0 - r) * x[d2]
}

/// The fitter of the two; ties keep the parent.
pub fn compete(parent: Individual, offspring: Individual) -> Individual {
    if offspring.fitness < parent.fitness {
        offspring
    } else {
        parent
    }
}

fn offspring_of(parent: &Individual, position: Vec<f64>, fitness: f64) -> Individual {
    Individual {
        position,
        previous_position: parent.previous_position.clone(),
        fitness,
    }
}

fn retain(slot: &mut Individual, candidate: Individual) {
    if candidate.fitness < slot.fitness {
        *slot = candidate;
    }
}

/// Horizontal pass over randomly paired individuals.
fn horizontal_pass<D: Draws + ?Sized>(
    state: &mut SwarmState,
    objective: &dyn Objective,
    params: &CrossoverParams,
    search_box: &SearchBox,
    rng: &mut D,
) {
    let n = state.len();
    let dim = state.dim();
    let mut order: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut order);
    // With an odd population the last entry of the permutation sits out.
    for pair in order.chunks_exact(2) {
        let (i, j) = (pair[0], pair[1]);
        if rng.uniform() >= params.horizontal_prob {
            continue;
        }
        let mut child_i = Vec::with_capacity(dim);
        let mut child_j = Vec::with_capacity(dim);
        {
            let xi = &state.individuals[i].position;
            let xj = &state.individuals[j].position;
            for d in 0..dim {
                let r1 = rng.uniform();
                let r2 = rng.uniform();
                let c1 = rng.uniform_in(-1.0, 1.0);
                let c2 = rng.uniform_in(-1.0, 1.0);
                let (a, b) = horizontal_cross(xi, xj, d, r1, r2, c1, c2);
                child_i.push(search_box.clamp_coord(d, a));
                child_j.push(search_box.clamp_coord(d, b));
            }
        }
        let fi = state.evaluate(objective, &child_i);
        let fj = state.evaluate(objective, &child_j);
        let oi = offspring_of(&state.individuals[i], child_i, fi);
        let oj = offspring_of(&state.individuals[j], child_j, fj);
        retain(&mut state.individuals[i], oi);
        retain(&mut state.individuals[j], oj);
    }
}

fn vertical_pass<D: Draws + ?Sized>(
    state: &mut SwarmState,
    objective: &dyn Objective,
    params: &CrossoverParams,
    search_box: &SearchBox,
    rng: &mut D,
) {
    let dim = state.dim();
    if dim < 2 {
        return;
    }
    for i in 0..state.len() {
        if rng.uniform() >= params.vertical_prob {
            continue;
        }
        let d1 = rng.index(dim);
        // Uniform over the other dim - 1 indices.
        let mut d2 = rng.index(dim - 1);
        if d2 >= d1 {
            d2 += 1;
        }
        let r = rng.uniform();
        let parent = &state.individuals[i];
        let mut child = parent.position.clone();
        child[d1] = search_box.clamp_coord(d1, vertical_cross(&parent.position, d1, d2, r));
        let f = state.evaluate(objective, &child);
        let offspring = offspring_of(&state.individuals[i], child, f);
        retain(&mut state.individuals[i], offspring);
    }
}

/// Horizontal then vertical crossover over the whole population, followed by
/// a refresh of X*, X^b and X^w. Populations smaller than two are left as is.
pub fn apply_crisscross<D: Draws + ?Sized>(
    state: &mut SwarmState,
    objective: &dyn Objective,
    params: &CrossoverParams,
    rng: &mut D,
) {
    if state.len() < 2 {
        return;
    }
    let search_box = objective.search_box();
    horizontal_pass(state, objective, params, search_box, rng);
    vertical_pass(state, objective, params, search_box, rng);
    state.refresh_extremes();
}
