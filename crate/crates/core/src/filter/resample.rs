//! Systematic resampling.

use crate::error::{Error, Result};
use crate::rng::RandStream;
use crate::types::Swarm;

/// Ancestor indices for systematic resampling: N evenly spaced points
/// offset by `u0` in `[0, 1/N)` select against the cumulative weights.
/// With uniform weights every particle is selected exactly once for any
/// offset.
pub fn systematic_ancestors(weights: &[f64], u0: f64) -> Vec<usize> {
    let n = weights.len();
    let mut ancestors = Vec::with_capacity(n);
    let mut cumulative = weights[0];
    let mut j = 0;
    for i in 0..n {
        let point = u0 + i as f64 / n as f64;
        while cumulative <= point && j + 1 < n {
            j += 1;
            cumulative += weights[j];
        }
        ancestors.push(j);
    }
    ancestors
}

/// Systematic resampling: the output holds N ancestor copies with weights
/// reset to uniform. States absent from the input multiset are never
/// fabricated.
pub fn sir_resample(swarm: &Swarm, stream: &mut RandStream) -> Result<Swarm> {
    if swarm.is_empty() {
        return Err(Error::EmptySwarm);
    }
    let weights = swarm.weights();
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::UnnormalizedWeights { sum });
    }
    let n = weights.len();
    let u0 = stream.uniform() / n as f64;
    let ancestors = systematic_ancestors(&weights, u0);
    let w = 1.0 / n as f64;
    let particles = ancestors
        .iter()
        .map(|&a| {
            let mut p = swarm.particles[a].clone();
            p.weight = w;
            p
        })
        .collect();
    Ok(Swarm {
        particles,
        global_best: swarm.global_best.clone(),
        global_best_cost: swarm.global_best_cost,
        iteration: swarm.iteration,
    })
}
