//! Shared fixtures for the benchmarks.

use scarab_core::rf::{synthetic, Dataset};
use scarab_core::rng::{self, Draws};
use scarab_core::{Benchmark, BenchmarkKind, Objective, RoleCounts, SwarmState};

/// A uniformly initialised swarm on `kind` at the given size.
pub fn swarm(kind: BenchmarkKind, dim: usize, pop: usize, seed: u64) -> (Benchmark, SwarmState) {
    let objective = Benchmark::new(kind, dim).expect("valid dimension");
    let mut r = rng::operator_stream(seed);
    let b = objective.search_box().clone();
    let positions = (0..pop)
        .map(|_| (0..dim).map(|d| b.lerp(d, r.uniform())).collect())
        .collect();
    let state = SwarmState::new(
        positions,
        &objective,
        RoleCounts::proportional(pop),
        500,
        rng::noise_stream(seed),
    )
    .expect("valid swarm");
    (objective, state)
}

/// One-hot encoded wholesale-shaped data with `n_rows` rows.
pub fn wholesale(n_rows: usize) -> Dataset {
    synthetic::wholesale_like(n_rows, 5)
        .expect("synthetic data")
        .one_hot()
}
