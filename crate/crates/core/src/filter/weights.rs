//! Importance weighting, effective sample size, and the posterior-mean
//! state estimate.

use crate::error::{Error, Result};
use crate::types::{Swarm, TargetState};

/// Normalized weights plus a degeneracy flag for all-zero likelihoods.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightUpdate {
    pub weights: Vec<f64>,
    /// All likelihoods were zero; the weights fell back to uniform.
    pub degenerate: bool,
}

/// Bootstrap weighting: after a resampling pass the prior weights are
/// uniform, so the new weights are the likelihoods normalized to sum one.
/// All-zero likelihoods yield uniform weights and set the degeneracy flag.
pub fn importance_weights(likelihoods: &[f64]) -> Result<WeightUpdate> {
    if likelihoods.is_empty() {
        return Err(Error::EmptySwarm);
    }
    for (index, &value) in likelihoods.iter().enumerate() {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidLikelihood { index, value });
        }
    }
    let total: f64 = likelihoods.iter().sum();
    if total <= 0.0 {
        let w = 1.0 / likelihoods.len() as f64;
        return Ok(WeightUpdate {
            weights: vec![w; likelihoods.len()],
            degenerate: true,
        });
    }
    Ok(WeightUpdate {
        weights: likelihoods.iter().map(|l| l / total).collect(),
        degenerate: false,
    })
}

/// `N_eff = 1 / sum(w_i^2)`, in `[1, N]` for normalized weights.
pub fn effective_sample_size(weights: &[f64]) -> Result<f64> {
    if weights.is_empty() {
        return Err(Error::EmptySwarm);
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::UnnormalizedWeights { sum });
    }
    // Kahan summation keeps the uniform-weight case exact to ~1e-13 even
    // for large populations.
    let mut acc = 0.0f64;
    let mut carry = 0.0f64;
    for w in weights {
        let term = w * w - carry;
        let next = acc + term;
        carry = (next - acc) - term;
        acc = next;
    }
    Ok(1.0 / acc)
}

/// Weight-weighted mean of the particle states (the posterior mean of the
/// weighted Dirac mixture).
pub fn estimate_state(swarm: &Swarm) -> Result<TargetState> {
    if swarm.is_empty() {
        return Err(Error::EmptySwarm);
    }
    let dim = swarm.dim();
    let mut out = vec![0.0; dim];
    for p in &swarm.particles {
        for d in 0..dim {
            out[d] += p.weight * p.state.coord(d);
        }
    }
    Ok(TargetState::from_coords(out))
}
