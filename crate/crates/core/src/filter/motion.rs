//! Memory-guided motion model: adaptive step size from recent velocities
//! plus Gaussian diffusion.

use crate::error::Result;
use crate::rng::{RandStream, StreamPurpose};
use crate::types::{Bounds, Swarm};

/// Up to three most recent per-frame velocity vectors, most recent last.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityMemory {
    dim: usize,
    recent: Vec<Vec<f64>>,
}

impl VelocityMemory {
    pub fn new(dim: usize) -> Self {
        Self { dim, recent: Vec::new() }
    }

    pub fn push(&mut self, v: Vec<f64>) {
        debug_assert_eq!(v.len(), self.dim);
        if self.recent.len() == 3 {
            self.recent.remove(0);
        }
        self.recent.push(v);
    }

    pub fn len(&self) -> usize {
        self.recent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.recent.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// How the ascending-sorted velocity weights pair with the stored
/// velocities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaPairing {
    /// Smallest sorted weight multiplies the most recent velocity.
    Literal,
    /// Largest sorted weight multiplies the most recent velocity.
    Descending,
}

/// Weight-normalized step size over the last three velocities:
/// speed fractions are sorted ascending and paired against the velocities
/// newest-first, and the weighted sum is doubled. With fewer than three
/// stored velocities or all-zero speeds the step is zero.
pub fn memory_step_size(memory: &VelocityMemory, pairing: LambdaPairing) -> Vec<f64> {
    let dim = memory.dim();
    if memory.len() < 3 {
        return vec![0.0; dim];
    }
    let speeds: Vec<f64> = memory
        .recent
        .iter()
        .map(|v| v.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    let total: f64 = speeds.iter().sum();
    if total <= 0.0 {
        return vec![0.0; dim];
    }
    let mut lambda: Vec<f64> = speeds.iter().map(|s| s / total).collect();
    lambda.sort_by(f64::total_cmp);
    if pairing == LambdaPairing::Descending {
        lambda.reverse();
    }
    // memory.recent is oldest-first; lambda[a] pairs the a-th most recent.
    let mut out = vec![0.0; dim];
    for (a, weight) in lambda.iter().enumerate() {
        let v = &memory.recent[2 - a];
        for d in 0..dim {
            out[d] += weight * v[d];
        }
    }
    for x in &mut out {
        *x *= 2.0;
    }
    out
}

/// Moves every particle by `x' = x + omega_d * v_f_d + g_d` per dimension,
/// with fresh `omega_d ~ U(-1, 1)` and `g_d ~ N(0, diffusion_d)` from that
/// particle's stream, then clamps to bounds.
pub fn propagate(
    swarm: &mut Swarm,
    v_f: &[f64],
    diffusion: &[f64],
    bounds: &Bounds,
    seed: u64,
    frame: usize,
) -> Result<()> {
    let std_devs: Vec<f64> = diffusion.iter().map(|v| v.sqrt()).collect();
    for (i, p) in swarm.particles.iter_mut().enumerate() {
        let mut stream = RandStream::for_purpose(seed, StreamPurpose::Propagate, frame, i);
        for d in 0..p.state.dim() {
            let drift = stream.signed_unit() * v_f[d];
            let noise = if std_devs[d] > 0.0 { stream.gaussian(std_devs[d]) } else { 0.0 };
            p.state.as_mut_slice()[d] += drift + noise;
        }
        bounds.clamp_in_place(&mut p.state);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::TargetState;

    fn memory_of(vs: &[[f64; 2]]) -> VelocityMemory {
        let mut m = VelocityMemory::new(2);
        for v in vs {
            m.push(v.to_vec());
        }
        m
    }

    #[test]
    fn equal_velocities_double() {
        let m = memory_of(&[[1.0, 0.0], [1.0, 0.0], [1.0, 0.0]]);
        let v = memory_step_size(&m, LambdaPairing::Literal);
        assert!((v[0] - 2.0).abs() < 1e-12);
        assert_eq!(v[1], 0.0);
    }

    #[test]
    fn literal_pairing_gives_newest_velocity_the_smallest_weight() {
        // Only the newest velocity is non-zero, so its sorted weight is the
        // largest; the literal pairing hands the newest the smallest
        // weight, zeroing the step.
        let m = memory_of(&[[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]);
        let v = memory_step_size(&m, LambdaPairing::Literal);
        assert_eq!(v, vec![0.0, 0.0]);
    }

    #[test]
    fn descending_pairing_flips_that_case() {
        let m = memory_of(&[[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]);
        let v = memory_step_size(&m, LambdaPairing::Descending);
        assert!((v[0] - 2.0).abs() < 1e-12);
        assert_eq!(v[1], 0.0);
    }

    #[test]
    fn all_zero_velocities_fall_back_to_zero() {
        let m = memory_of(&[[0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]);
        assert_eq!(memory_step_size(&m, LambdaPairing::Literal), vec![0.0, 0.0]);
    }

    #[test]
    fn short_memory_yields_zero_step() {
        let m = memory_of(&[[5.0, 5.0], [3.0, 3.0]]);
        assert_eq!(memory_step_size(&m, LambdaPairing::Literal), vec![0.0, 0.0]);
    }

    #[test]
    fn mixed_speeds_hand_values() {
        // Speeds 3, 4, 1 give fractions [3/8, 4/8, 1/8]; ascending sort is
        // [1/8, 3/8, 4/8].
        let m = memory_of(&[[3.0, 0.0], [0.0, 4.0], [1.0, 0.0]]);
        let lit = memory_step_size(&m, LambdaPairing::Literal);
        assert!((lit[0] - 3.25).abs() < 1e-12);
        assert!((lit[1] - 3.0).abs() < 1e-12);
        let desc = memory_step_size(&m, LambdaPairing::Descending);
        assert!((desc[0] - 1.75).abs() < 1e-12);
        assert!((desc[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn memory_keeps_three_most_recent() {
        let mut m = VelocityMemory::new(1);
        for i in 0..5 {
            m.push(vec![i as f64]);
        }
        assert_eq!(m.len(), 3);
        assert_eq!(m.recent, vec![vec![2.0], vec![3.0], vec![4.0]]);
    }

    fn swarm_at_origin(n: usize) -> Swarm {
        let states = (0..n)
            .map(|_| TargetState::from_coords(vec![0.0, 0.0]))
            .collect();
        Swarm::from_states(states).unwrap()
    }

    #[test]
    fn zero_drift_zero_diffusion_is_identity() {
        let b = Bounds::new(vec![[-100.0, 100.0], [-100.0, 100.0]]).unwrap();
        let mut s = swarm_at_origin(10);
        let before = s.clone();
        propagate(&mut s, &[0.0, 0.0], &[0.0, 0.0], &b, 7, 0).unwrap();
        assert_eq!(s.particles, before.particles);
    }

    #[test]
    fn drift_bounded_by_step_magnitude() {
        let b = Bounds::new(vec![[-100.0, 100.0], [-100.0, 100.0]]).unwrap();
        let mut s = swarm_at_origin(500);
        propagate(&mut s, &[2.0, 0.5], &[0.0, 0.0], &b, 7, 1).unwrap();
        for p in &s.particles {
            assert!(p.state.x().abs() <= 2.0);
            assert!(p.state.y().abs() <= 0.5);
        }
    }

    #[test]
    fn mean_displacement_is_centered() {
        // E[omega * v] = 0 and E[g] = 0; over 1e4 particles the sample
        // mean displacement stays within +-0.05 per dimension.
        let b = Bounds::new(vec![[-1000.0, 1000.0], [-1000.0, 1000.0]]).unwrap();
        let n = 10_000;
        let mut s = swarm_at_origin(n);
        propagate(&mut s, &[2.0, 0.0], &[1.0, 1.0], &b, 42, 3).unwrap();
        let mean_x: f64 = s.particles.iter().map(|p| p.state.x()).sum::<f64>() / n as f64;
        let mean_y: f64 = s.particles.iter().map(|p| p.state.y()).sum::<f64>() / n as f64;
        assert!(mean_x.abs() < 0.05, "mean_x = {mean_x}");
        assert!(mean_y.abs() < 0.05, "mean_y = {mean_y}");
    }

    #[test]
    fn particle_draws_do_not_depend_on_population_size() {
        // Each particle owns its (seed, frame, index) stream, so shrinking
        // the population leaves the remaining particles' moves untouched.
        let b = Bounds::new(vec![[-100.0, 100.0], [-100.0, 100.0]]).unwrap();
        let mut big = swarm_at_origin(20);
        let mut small = swarm_at_origin(5);
        propagate(&mut big, &[1.0, 1.0], &[0.5, 0.5], &b, 11, 2).unwrap();
        propagate(&mut small, &[1.0, 1.0], &[0.5, 0.5], &b, 11, 2).unwrap();
        for i in 0..5 {
            assert_eq!(big.particles[i].state, small.particles[i].state);
        }
    }
}
