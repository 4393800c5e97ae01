//! QPSO position sampling: mean best, weighted mean best, local
//! attractors, and the logarithmic jump update.

use crate::error::{Error, Result};
use crate::rng::RandStream;
use crate::types::{Bounds, Swarm, TargetState};

/// Per-dimension arithmetic mean of all personal bests.
pub fn mean_best(swarm: &Swarm) -> Result<TargetState> {
    if swarm.is_empty() {
        return Err(Error::EmptySwarm);
    }
    let dim = swarm.dim();
    let m = swarm.len() as f64;
    let mut out = vec![0.0; dim];
    for p in &swarm.particles {
        for d in 0..dim {
            out[d] += p.personal_best.coord(d);
        }
    }
    for v in &mut out {
        *v /= m;
    }
    Ok(TargetState::from_coords(out))
}

/// Rank-linear weights: the particle with the lowest personal-best cost
/// gets `alpha_max`, the worst gets `alpha_min`, linearly in between. Ties
/// resolve by particle index. A single particle gets weight 1.
///
/// Returned in particle-index order.
pub fn rank_weights(personal_best_costs: &[f64], alpha_max: f64, alpha_min: f64) -> Vec<f64> {
    let m = personal_best_costs.len();
    if m == 1 {
        return vec![1.0];
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        personal_best_costs[a]
            .total_cmp(&personal_best_costs[b])
            .then(a.cmp(&b))
    });
    let mut weights = vec![0.0; m];
    let span = alpha_max - alpha_min;
    for (rank, &idx) in order.iter().enumerate() {
        weights[idx] = alpha_max - span * rank as f64 / (m - 1) as f64;
    }
    weights
}

/// Mean best with rank-linear weights:
/// `(1/M) * sum_i tau_i * pbest_i` per dimension.
///
/// Accumulation runs in particle-index order, so with all weights equal to
/// one this reproduces [`mean_best`] bit for bit.
pub fn weighted_mean_best(swarm: &Swarm, alpha_max: f64, alpha_min: f64) -> Result<TargetState> {
    if swarm.is_empty() {
        return Err(Error::EmptySwarm);
    }
    let costs: Vec<f64> = swarm.particles.iter().map(|p| p.personal_best_cost).collect();
    let tau = rank_weights(&costs, alpha_max, alpha_min);
    let dim = swarm.dim();
    let m = swarm.len() as f64;
    let mut out = vec![0.0; dim];
    for (p, &w) in swarm.particles.iter().zip(tau.iter()) {
        for d in 0..dim {
            out[d] += w * p.personal_best.coord(d);
        }
    }
    for v in &mut out {
        *v /= m;
    }
    Ok(TargetState::from_coords(out))
}

/// One attractor component: `phi*pbest + (1 - phi)*gbest`.
pub fn attractor_component(pbest: f64, gbest: f64, phi: f64) -> f64 {
    phi * pbest + (1.0 - phi) * gbest
}

/// Local attractor with fresh `phi ~ U(0,1)` per dimension. Each component
/// lies on the segment between the corresponding inputs.
pub fn local_attractor(pbest: &TargetState, gbest: &TargetState, stream: &mut RandStream) -> TargetState {
    let coords = (0..pbest.dim())
        .map(|d| attractor_component(pbest.coord(d), gbest.coord(d), stream.uniform()))
        .collect();
    TargetState::from_coords(coords)
}

/// One jump component: `p +- beta * |mbest - x| * ln(1/u)`.
pub fn jump_component(x: f64, attractor: f64, mbest: f64, beta: f64, u: f64, plus: bool) -> f64 {
    let step = beta * (mbest - x).abs() * (1.0 / u).ln();
    if plus {
        attractor + step
    } else {
        attractor - step
    }
}

/// QPSO position update. Per dimension, with fresh `u` in `(0, 1]` (the
/// stream's half-open draw is remapped so `ln(1/u)` stays finite) and a
/// fresh sign draw `s ~ U(0,1)`: the jump is additive iff `s < 0.5`. The
/// result is clamped to bounds.
pub fn qpso_position_update(
    x: &TargetState,
    attractor: &TargetState,
    mbest: &TargetState,
    beta: f64,
    stream: &mut RandStream,
    bounds: &Bounds,
) -> Result<TargetState> {
    let mut coords = Vec::with_capacity(x.dim());
    for d in 0..x.dim() {
        let u = stream.uniform_open();
        let plus = stream.uniform() < 0.5;
        coords.push(jump_component(
            x.coord(d),
            attractor.coord(d),
            mbest.coord(d),
            beta,
            u,
            plus,
        ));
    }
    clamped(TargetState::from_coords(coords), bounds)
}

fn clamped(mut s: TargetState, bounds: &Bounds) -> Result<TargetState> {
    if s.dim() != bounds.dim() {
        return Err(Error::DimensionMismatch {
            expected: bounds.dim(),
            got: s.dim(),
        });
    }
    bounds.clamp_in_place(&mut s);
    Ok(s)
}

/// Linear contraction-expansion schedule:
/// `beta = (beta_hi - beta_lo) * (t_max - t) / t_max + beta_lo`.
pub fn beta_schedule(t_current: usize, t_max: usize, beta_hi: f64, beta_lo: f64) -> Result<f64> {
    if t_max == 0 || t_current > t_max {
        return Err(Error::IterationOutOfRange {
            t: t_current,
            t_max,
        });
    }
    let ratio = (t_max - t_current) as f64 / t_max as f64;
    Ok((beta_hi - beta_lo) * ratio + beta_lo)
}
