use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::config::{Algorithm, InitScheme, OptimizerConfig};
use crate::chaos::CircleParams;
use crate::crisscross::apply_crisscross;
use crate::dbo::dbo_step;
use crate::error::{Error, Result};
use crate::objectives::Objective;
use crate::rng::{self, Draws};
use crate::swarm::SwarmState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub iteration: usize,
    pub best_so_far: f64,
}

/// Outcome of one seeded run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub fingerprint: String,
    pub algorithm: Algorithm,
    pub objective: String,
    pub dim: usize,
    pub pop_size: usize,
    pub max_iters: usize,
    pub seed: u64,
    /// Best-so-far fitness after initialization and after every iteration.
    pub trace: Vec<TracePoint>,
    pub final_best_position: Vec<f64>,
    pub final_best_fitness: f64,
    pub evaluations: u64,
    /// Wall-clock seconds; the only field that varies between identical runs.
    pub wall_time: f64,
}

impl RunRecord {
    pub fn best_at(&self, iteration: usize) -> Option<f64> {
        self.trace.get(iteration).map(|p| p.best_so_far)
    }
}

fn initial_positions<D: Draws>(
    config: &OptimizerConfig,
    objective: &dyn Objective,
    rng: &mut D,
) -> Result<Vec<Vec<f64>>> {
    let search_box = objective.search_box();
    match config.init {
        InitScheme::Circle => {
            let mut x0 = rng.uniform();
            while x0 == 0.0 {
                x0 = rng.uniform();
            }
            CircleParams::default().init_population(search_box, config.pop_size, x0)
        }
        InitScheme::UniformRandom => Ok((0..config.pop_size)
            .map(|_| {
                (0..search_box.dim())
                    .map(|d| search_box.lerp(d, rng.uniform()))
                    .collect()
            })
            .collect()),
    }
}

/// Runs the configured optimizer on `objective`.
pub fn run_optimizer(config: &OptimizerConfig, objective: &dyn Objective) -> Result<RunRecord> {
    run_optimizer_with(config, objective, &[])
}

/// As [`run_optimizer`], with `injected` positions overwriting the first
/// individuals of the initial population (after clamping to the box).
pub fn run_optimizer_with(
    config: &OptimizerConfig,
    objective: &dyn Objective,
    injected: &[Vec<f64>],
) -> Result<RunRecord> {
    config.validate()?;
    let search_box = objective.search_box();
    if injected.len() > config.pop_size {
        return Err(Error::Config(format!(
            "{} injected individuals exceed pop_size {}",
            injected.len(),
            config.pop_size
        )));
    }
    if let Some(bad) = injected.iter().find(|p| p.len() != search_box.dim()) {
        return Err(Error::Domain(format!(
            "injected position has {} coordinates, objective expects {}",
            bad.len(),
            search_box.dim()
        )));
    }

    let started = Instant::now();
    let mut rng = rng::operator_stream(config.seed);
    let mut positions = initial_positions(config, objective, &mut rng)?;
    for (slot, p) in positions.iter_mut().zip(injected) {
        slot.clone_from(p);
        search_box.clamp(slot);
    }

    let roles = config.dbo.roles_for(config.pop_size);
    let mut state = SwarmState::new(
        positions,
        objective,
        roles,
        config.max_iters,
        rng::noise_stream(config.seed),
    )?;

    let mut trace = Vec::with_capacity(config.max_iters + 1);
    trace.push(TracePoint {
        iteration: 0,
        best_so_far: state.global_best.fitness,
    });
    for t in 1..=config.max_iters {
        dbo_step(&mut state, objective, &config.dbo, &mut rng);
        if config.algorithm == Algorithm::Cicrdbo {
            apply_crisscross(&mut state, objective, &config.crossover, &mut rng);
        }
        trace.push(TracePoint {
            iteration: t,
            best_so_far: state.global_best.fitness,
        });
    }

    Ok(RunRecord {
        fingerprint: config.fingerprint(),
        algorithm: config.algorithm,
        objective: objective.name().to_string(),
        dim: search_box.dim(),
        pop_size: config.pop_size,
        max_iters: config.max_iters,
        seed: config.seed,
        trace,
        final_best_fitness: state.global_best.fitness,
        final_best_position: state.global_best.position,
        evaluations: state.evaluations,
        wall_time: started.elapsed().as_secs_f64(),
    })
}
