//! Simulated-annealing operators: exponential cooling and Metropolis
//! acceptance.

use crate::rng::RandStream;

/// Cooling state with `temperature = t0 * exp(-iteration)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealState {
    t0: f64,
    temperature: f64,
    iteration: usize,
}

impl AnnealState {
    /// Fresh state at iteration 0, so the temperature starts at `t0`.
    pub fn new(t0: f64) -> Self {
        Self::at(t0, 0)
    }

    /// State resumed at an arbitrary point of the schedule.
    pub fn at(t0: f64, iteration: usize) -> Self {
        Self {
            t0,
            temperature: t0 * (-(iteration as f64)).exp(),
            iteration,
        }
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }
}

/// Advances the schedule one iteration.
pub fn cooling_step(a: AnnealState) -> AnnealState {
    let iteration = a.iteration + 1;
    AnnealState {
        t0: a.t0,
        temperature: a.t0 * (-(iteration as f64)).exp(),
        iteration,
    }
}

/// Metropolis criterion: improvements (`delta_f < 0`) are always accepted;
/// otherwise acceptance has probability `exp(-delta_f / temperature)`.
///
/// `delta_f` is candidate cost minus incumbent cost.
pub fn metropolis_accept(delta_f: f64, temperature: f64, stream: &mut RandStream) -> bool {
    if delta_f < 0.0 {
        true
    } else {
        stream.uniform() < (-delta_f / temperature).exp()
    }
}
