//! Canonical PSO velocity/position kinematics.

use crate::error::Result;
use crate::rng::RandStream;
use crate::types::{Bounds, Swarm};

/// One velocity component update:
/// `v' = omega*v + c1*r1*(pbest - x) + c2*r2*(gbest - x)`.
pub fn pso_velocity(
    v: f64,
    x: f64,
    pbest: f64,
    gbest: f64,
    omega: f64,
    c1: f64,
    c2: f64,
    r1: f64,
    r2: f64,
) -> f64 {
    omega * v + c1 * r1 * (pbest - x) + c2 * r2 * (gbest - x)
}

/// Moves every particle one PSO step against the swarm's current global
/// best. Fresh `r1, r2 ~ U(0,1)` are drawn per particle per dimension from
/// that particle's stream; positions are clamped to bounds afterward.
pub fn pso_step(
    swarm: &mut Swarm,
    omega: f64,
    c1: f64,
    c2: f64,
    bounds: &Bounds,
    streams: &mut [RandStream],
) -> Result<()> {
    let gbest = swarm.global_best.clone();
    for (p, stream) in swarm.particles.iter_mut().zip(streams.iter_mut()) {
        for d in 0..p.state.dim() {
            let r1 = stream.uniform();
            let r2 = stream.uniform();
            let v = pso_velocity(
                p.velocity[d],
                p.state.coord(d),
                p.personal_best.coord(d),
                gbest.coord(d),
                omega,
                c1,
                c2,
                r1,
                r2,
            );
            p.velocity[d] = v;
            p.state.as_mut_slice()[d] += v;
        }
        bounds.clamp_in_place(&mut p.state);
    }
    Ok(())
}
