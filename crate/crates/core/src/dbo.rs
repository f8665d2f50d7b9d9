//! Baseline dung beetle optimizer.
//!
//! Four role groups move every iteration:
//!
//! * rollers: `x + α·k·x(t-1) + b·|x - X^w|`, or with probability
//!   `obstacle_prob` a dance step `x + tan θ·|x - x(t-1)|`;
//! * brooders: spawn inside the region `[X*(1-R), X*(1+R)]`;
//! * foragers: move relative to the region around X^b;
//! * thieves: `X^b + S·g·(|x - X*| + |x - X^b|)`.
//!
//! `R = 1 - t/T_max`. All results are clamped to the search box.
//!
//! Draw order per iteration, individuals in index order: a roller draws one
//! uniform (dance or roll), then either θ or the deviation uniform; a brooder
//! draws `b1` then `b2` (`dim` uniforms each); a forager draws `C1` (`dim`
//! normals) then `C2` (`dim` uniforms); a thief draws `g` (`dim` normals).
//! Objective noise, if any, comes from the state's own stream.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objectives::Objective;
use crate::rng::Draws;
use crate::space::SearchBox;
use crate::swarm::{Individual, Role, RoleCounts, SwarmState};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DboParams {
    /// Deflection coefficient `k`.
    pub k: f64,
    /// Light-intensity coefficient `b` of the rolling rule.
    pub b_roll: f64,
    /// Stealing scale `S`.
    pub steal_scale: f64,
    /// Probability that a rolling beetle deviates (`α = -1`).
    pub deviation_prob: f64,
    /// Probability that a roller meets an obstacle and dances.
    pub obstacle_prob: f64,
    /// Explicit role sizes; `None` scales the 6/6/7/11 reference split.
    pub role_counts: Option<RoleCounts>,
}

impl Default for DboParams {
    fn default() -> Self {
        Self {
            k: 0.1,
            b_roll: 0.3,
            steal_scale: 0.5,
            deviation_prob: 0.1,
            obstacle_prob: 0.1,
            role_counts: None,
        }
    }
}

impl DboParams {
    pub fn validate(&self, pop_size: usize) -> Result<()> {
        if !(self.k > 0.0 && self.k <= 0.2) {
            return Err(Error::Config(format!(
                "k must lie in (0, 0.2], got {}",
                self.k
            )));
        }
        if !(self.b_roll > 0.0 && self.b_roll < 1.0) {
            return Err(Error::Config(format!(
                "b_roll must lie in (0, 1), got {}",
                self.b_roll
            )));
        }
        if !(self.steal_scale > 0.0 && self.steal_scale.is_finite()) {
            return Err(Error::Config(format!(
                "S must be positive, got {}",
                self.steal_scale
            )));
        }
        for (name, p) in [
            ("deviation_prob", self.deviation_prob),
            ("obstacle_prob", self.obstacle_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("{name} must lie in [0, 1], got {p}")));
            }
        }
        if let Some(c) = self.role_counts {
            if c.total() != pop_size {
                return Err(Error::Config(format!(
                    "role counts sum to {} but pop_size is {pop_size}",
                    c.total()
                )));
            }
        }
        Ok(())
    }

    pub fn roles_for(&self, pop_size: usize) -> RoleCounts {
        self.role_counts
            .unwrap_or_else(|| RoleCounts::proportional(pop_size))
    }
}

/// `R = 1 - t/T_max`, clamped to `[0, 1]`.
pub fn shrink_factor(iteration: usize, max_iters: usize) -> f64 {
    (1.0 - iteration as f64 / max_iters as f64).clamp(0.0, 1.0)
}

/// The region `[max(c(1-R), Lb), min(c(1+R), Ub)]` for one coordinate.
/// An inverted interval collapses onto the clamped centre.
pub fn shrink_region(center: f64, r: f64, lo: f64, hi: f64) -> (f64, f64) {
    let a = (center * (1.0 - r)).max(lo);
    let b = (center * (1.0 + r)).min(hi);
    if a > b {
        let c = center.clamp(lo, hi);
        (c, c)
    } else {
        (a, b)
    }
}

pub fn roll_update(
    ind: &Individual,
    worst: &[f64],
    alpha: f64,
    params: &DboParams,
    search_box: &SearchBox,
) -> Vec<f64> {
    ind.position
        .iter()
        .zip(&ind.previous_position)
        .zip(worst)
        .enumerate()
        .map(|(d, ((&x, &prev), &w))| {
            let v = x + alpha * params.k * prev + params.b_roll * (x - w).abs();
            search_box.clamp_coord(d, v)
        })
        .collect()
}

pub fn dance_update(ind: &Individual, theta: f64, search_box: &SearchBox) -> Vec<f64> {
    if theta == 0.0 || theta == FRAC_PI_2 || theta == PI {
        return ind.position.clone();
    }
    let t = theta.tan();
    ind.position
        .iter()
        .zip(&ind.previous_position)
        .enumerate()
        .map(|(d, (&x, &prev))| search_box.clamp_coord(d, x + t * (x - prev).abs()))
        .collect()
}

pub fn brood_update(
    ind: &Individual,
    best: &[f64],
    r: f64,
    b1: &[f64],
    b2: &[f64],
    search_box: &SearchBox,
) -> Vec<f64> {
    (0..ind.position.len())
        .map(|d| {
            let (lo, hi) = shrink_region(best[d], r, search_box.lower()[d], search_box.upper()[d]);
            let x = ind.position[d];
            search_box.clamp_coord(d, best[d] + b1[d] * (x - lo) + b2[d] * (x - hi))
        })
        .collect()
}

pub fn forage_update(
    ind: &Individual,
    iteration_best: &[f64],
    r: f64,
    c1: &[f64],
    c2: &[f64],
    search_box: &SearchBox,
) -> Vec<f64> {
    (0..ind.position.len())
        .map(|d| {
            let (lo, hi) = shrink_region(
                iteration_best[d],
                r,
                search_box.lower()[d],
                search_box.upper()[d],
            );
            let x = ind.position[d];
            search_box.clamp_coord(d, x + c1[d] * (x - lo) + c2[d] * (x - hi))
        })
        .collect()
}

pub fn steal_update(
    ind: &Individual,
    best: &[f64],
    iteration_best: &[f64],
    g: &[f64],
    params: &DboParams,
    search_box: &SearchBox,
) -> Vec<f64> {
    (0..ind.position.len())
        .map(|d| {
            let x = ind.position[d];
            let spread = (x - best[d]).abs() + (x - iteration_best[d]).abs();
            search_box.clamp_coord(d, iteration_best[d] + params.steal_scale * g[d] * spread)
        })
        .collect()
}

/// One synchronous DBO iteration: every individual moves from the pre-step
/// state, then all are re-evaluated and the extremes refreshed.
pub fn dbo_step<D: Draws + ?Sized>(
    state: &mut SwarmState,
    objective: &dyn Objective,
    params: &DboParams,
    rng: &mut D,
) {
    let search_box = objective.search_box();
    let dim = state.dim();
    let r = shrink_factor(state.iteration + 1, state.max_iters);
    let best = state.global_best.position.clone();
    let iteration_best = state.iteration_best.position.clone();
    let worst = state.global_worst.position.clone();

    let draw_vec = |rng: &mut D, normal: bool| -> Vec<f64> {
        (0..dim)
            .map(|_| if normal { rng.normal() } else { rng.uniform() })
            .collect()
    };

    let moved: Vec<Vec<f64>> = state
        .individuals
        .iter()
        .enumerate()
        .map(|(i, ind)| match state.roles.role_of(i) {
            Role::Roller => {
                if rng.uniform() < params.obstacle_prob {
                    let theta = rng.uniform() * PI;
                    dance_update(ind, theta, search_box)
                } else {
                    let alpha = if rng.uniform() < params.deviation_prob {
                        -1.0
                    } else {
                        1.0
                    };
                    roll_update(ind, &worst, alpha, params, search_box)
                }
            }
            Role::Brooder => {
                let b1 = draw_vec(rng, false);
                let b2 = draw_vec(rng, false);
                brood_update(ind, &best, r, &b1, &b2, search_box)
            }
            Role::Forager => {
                let c1 = draw_vec(rng, true);
                let c2 = draw_vec(rng, false);
                forage_update(ind, &iteration_best, r, &c1, &c2, search_box)
            }
            Role::Thief => {
                let g = draw_vec(rng, true);
                steal_update(ind, &best, &iteration_best, &g, params, search_box)
            }
        })
        .collect();

    for (i, position) in moved.into_iter().enumerate() {
        let fitness = state.evaluate(objective, &position);
        let ind = &mut state.individuals[i];
        ind.previous_position = std::mem::replace(&mut ind.position, position);
        ind.fitness = fitness;
    }
    state.iteration += 1;
    state.refresh_extremes();
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ind(x: f64, prev: f64) -> Individual {
        Individual {
            position: vec![x],
            previous_position: vec![prev],
            fitness: 0.0,
        }
    }

    fn wide() -> SearchBox {
        SearchBox::uniform(-100.0, 100.0, 1).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * b.abs().max(1.0)
    }

    #[test]
    fn roll_examples() {
        let p = DboParams::default();
        assert_eq!(
            roll_update(&ind(0.0, 0.0), &[0.0], 1.0, &p, &wide()),
            vec![0.0]
        );
        let p = DboParams {
            k: 0.1,
            b_roll: 0.3,
            ..DboParams::default()
        };
        let v = roll_update(&ind(2.0, 1.0), &[5.0], -1.0, &p, &wide());
        assert!(close(v[0], 2.8));
        let v = roll_update(&ind(1.0, 1.0), &[1.0], 1.0, &p, &wide());
        assert!(close(v[0], 1.1));
    }

    #[test]
    fn roll_is_clamped() {
        let p = DboParams::default();
        let b = SearchBox::uniform(-1.0, 1.0, 1).unwrap();
        let v = roll_update(&ind(0.9, 0.9), &[-1.0], 1.0, &p, &b);
        assert_eq!(v, vec![1.0]);
    }

    #[test]
    fn dance_examples() {
        for theta in [0.3, 1.0, 2.5] {
            assert_eq!(dance_update(&ind(4.0, 4.0), theta, &wide()), vec![4.0]);
        }
        assert_eq!(dance_update(&ind(3.0, 1.0), FRAC_PI_2, &wide()), vec![3.0]);
        assert_eq!(dance_update(&ind(3.0, 1.0), 0.0, &wide()), vec![3.0]);
        assert_eq!(dance_update(&ind(3.0, 1.0), PI, &wide()), vec![3.0]);
        let v = dance_update(&ind(3.0, 1.0), std::f64::consts::FRAC_PI_4, &wide());
        assert!(close(v[0], 5.0));
    }

    #[test]
    fn brood_examples() {
        let b = SearchBox::uniform(-5.0, 5.0, 1).unwrap();
        let v = brood_update(&ind(3.0, 0.0), &[1.5], 0.7, &[0.0], &[0.0], &b);
        assert_eq!(v, vec![1.5]);
        let v = brood_update(&ind(1.0, 0.0), &[1.0], 0.5, &[0.2], &[0.4], &b);
        assert!(close(v[0], 0.9));
        // R = 0 collapses the region onto X*.
        let (x, best, b1, b2) = (2.0, 1.25, 0.3, 0.6);
        let v = brood_update(&ind(x, 0.0), &[best], 0.0, &[b1], &[b2], &b);
        assert!(close(v[0], best + (b1 + b2) * (x - best)));
    }

    #[test]
    fn brood_region_degeneracy_collapses_to_clamped_best() {
        // Negative centre inverts the interval.
        assert_eq!(shrink_region(-2.0, 0.5, -5.0, 5.0), (-2.0, -2.0));
        // Centre outside the box collapses onto the boundary.
        assert_eq!(shrink_region(-8.0, 0.5, -5.0, 5.0), (-5.0, -5.0));
        let (lo, hi) = shrink_region(2.0, 0.5, -5.0, 5.0);
        assert!(lo <= hi);
        assert_eq!((lo, hi), (1.0, 3.0));
    }

    #[test]
    fn forage_examples() {
        assert_eq!(
            forage_update(&ind(2.0, 0.0), &[0.5], 0.3, &[0.0], &[0.0], &wide()),
            vec![2.0]
        );
        // X^b = 2 with R = 0.5 gives the region [1, 3].
        let v = forage_update(&ind(2.0, 0.0), &[2.0], 0.5, &[1.0], &[0.5], &wide());
        assert!(close(v[0], 2.5));
        // x = Lb^b = Ub^b: R = 0 around x itself.
        let v = forage_update(&ind(2.0, 0.0), &[2.0], 0.0, &[1.3], &[0.7], &wide());
        assert!(close(v[0], 2.0));
    }

    #[test]
    fn steal_examples() {
        let p = DboParams {
            steal_scale: 0.5,
            ..DboParams::default()
        };
        assert_eq!(
            steal_update(&ind(7.0, 0.0), &[1.0], &[3.0], &[0.0], &p, &wide()),
            vec![3.0]
        );
        let v = steal_update(&ind(2.0, 0.0), &[1.0], &[0.0], &[1.0], &p, &wide());
        assert!(close(v[0], 1.5));
        let v = steal_update(&ind(4.0, 0.0), &[4.0], &[4.0], &[2.3], &p, &wide());
        assert!(close(v[0], 4.0));
    }

    #[test]
    fn params_validation() {
        assert!(DboParams::default().validate(30).is_ok());
        assert!(DboParams {
            k: 0.0,
            ..DboParams::default()
        }
        .validate(30)
        .is_err());
        assert!(DboParams {
            k: 0.3,
            ..DboParams::default()
        }
        .validate(30)
        .is_err());
        assert!(DboParams {
            b_roll: 1.0,
            ..DboParams::default()
        }
        .validate(30)
        .is_err());
        assert!(DboParams {
            steal_scale: 0.0,
            ..DboParams::default()
        }
        .validate(30)
        .is_err());
        assert!(DboParams {
            obstacle_prob: 1.5,
            ..DboParams::default()
        }
        .validate(30)
        .is_err());
        let bad = DboParams {
            role_counts: Some(RoleCounts::REFERENCE),
            ..DboParams::default()
        };
        assert!(bad.validate(31).is_err());
        assert!(bad.validate(30).is_ok());
    }

    #[test]
    fn shrink_factor_endpoints() {
        assert_eq!(shrink_factor(0, 500), 1.0);
        assert_eq!(shrink_factor(500, 500), 0.0);
        assert_eq!(shrink_factor(250, 500), 0.5);
    }
}
