//! Metaheuristic kernels operating on a swarm against an arbitrary cost
//! function: PSO, QPSO, and annealed-weighted QPSO.
//!
//! All three kernels minimize. Tracking passes `cost = -fitness`, so the
//! likelihood peak is the cost minimum.

mod anneal;
mod pso;
mod qpso;

pub use anneal::{cooling_step, metropolis_accept, AnnealState};
pub use pso::{pso_step, pso_velocity};
pub use qpso::{
    attractor_component, beta_schedule, jump_component, local_attractor, mean_best, rank_weights,
    qpso_position_update, weighted_mean_best,
};

use crate::config::TrackerConfig;
use crate::error::{Error, Result};
use crate::rng::{RandStream, StreamPurpose};
use crate::types::{Bounds, Particle, Swarm, TargetState};

/// Which kernel runs, with its variant parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum OptimizerVariant {
    Pso {
        omega: f64,
        c1: f64,
        c2: f64,
    },
    Qpso {
        beta_hi: f64,
        beta_lo: f64,
    },
    Awqpso {
        beta_hi: f64,
        beta_lo: f64,
        t0: f64,
        alpha_max: f64,
        alpha_min: f64,
    },
}

impl OptimizerVariant {
    pub fn pso_from(cfg: &TrackerConfig) -> Self {
        OptimizerVariant::Pso {
            omega: cfg.omega,
            c1: cfg.c1,
            c2: cfg.c2,
        }
    }

    pub fn qpso_from(cfg: &TrackerConfig) -> Self {
        OptimizerVariant::Qpso {
            beta_hi: cfg.beta_hi,
            beta_lo: cfg.beta_lo,
        }
    }

    pub fn awqpso_from(cfg: &TrackerConfig) -> Self {
        OptimizerVariant::Awqpso {
            beta_hi: cfg.beta_hi,
            beta_lo: cfg.beta_lo,
            t0: cfg.t0,
            alpha_max: cfg.alpha_max,
            alpha_min: cfg.alpha_min,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            OptimizerVariant::Pso { .. } => "PSO",
            OptimizerVariant::Qpso { .. } => "QPSO",
            OptimizerVariant::Awqpso { .. } => "AWQPSO",
        }
    }
}

/// Run parameters shared by the three kernels.
#[derive(Debug, Clone)]
pub struct RunSettings<'a> {
    pub bounds: &'a Bounds,
    pub t_max: usize,
    /// Terminate once the global best cost drops to or below this value.
    pub stop_cost: Option<f64>,
    /// Seed for the per-particle streams.
    pub seed: u64,
    /// Stream namespace; the tracker passes the frame index, benchmark
    /// harnesses pass a run index.
    pub frame: usize,
    /// Where AWQPSO resumes its cooling schedule. Zero starts a fresh
    /// anneal; a tracker carrying iterations across frames passes its
    /// running total.
    pub anneal_start_iteration: usize,
}

/// Replaces the personal best when the new cost strictly improves on it.
pub fn update_personal_best(p: &mut Particle, cost: f64) -> Result<()> {
    if !cost.is_finite() {
        return Err(Error::NonFiniteCost {
            state: p.state.as_slice().to_vec(),
            value: cost,
        });
    }
    if cost < p.personal_best_cost {
        p.personal_best = p.state.clone();
        p.personal_best_cost = cost;
    }
    Ok(())
}

fn eval_cost<F: Fn(&TargetState) -> f64>(cost: &F, state: &TargetState) -> Result<f64> {
    let c = cost(state);
    if !c.is_finite() {
        return Err(Error::NonFiniteCost {
            state: state.as_slice().to_vec(),
            value: c,
        });
    }
    Ok(c)
}

/// Runs the selected kernel on `swarm` until the stop cost is reached or
/// `t_max` iterations complete (at least one iteration always runs).
///
/// Every iteration moves each particle, evaluates the cost at the new
/// position, updates personal bests, and refreshes the global best in
/// index order. AWQPSO additionally filters moves through Metropolis
/// acceptance (rejected candidates revert to their prior position) and
/// cools its temperature once per iteration.
pub fn run_optimizer<F: Fn(&TargetState) -> f64>(
    variant: &OptimizerVariant,
    cost: &F,
    settings: &RunSettings,
    swarm: Swarm,
) -> Result<Swarm> {
    run_optimizer_traced(variant, cost, settings, swarm, &mut |_| {})
}

/// [`run_optimizer`] with a hook observing the global best cost after each
/// iteration.
pub fn run_optimizer_traced<F: Fn(&TargetState) -> f64>(
    variant: &OptimizerVariant,
    cost: &F,
    settings: &RunSettings,
    mut swarm: Swarm,
    on_iteration: &mut dyn FnMut(f64),
) -> Result<Swarm> {
    if swarm.is_empty() {
        return Err(Error::EmptySwarm);
    }
    let n = swarm.len();
    let dim = swarm.dim();

    // Init pass: evaluate current positions. The QPSO kernels re-score any
    // carried-over personal best under this run's cost and keep the better
    // of the two; their attractors then stay anchored even for particles
    // that strayed. PSO re-bases its personal bests on the current
    // positions, matching its per-run position/velocity initialization —
    // a carried attractor under its acceleration constants overshoots.
    // A swarm fresh from `Swarm::from_states` has `personal_best == state`
    // either way, so nothing is evaluated twice there.
    let warm_start = !matches!(variant, OptimizerVariant::Pso { .. });
    for p in &mut swarm.particles {
        let c = eval_cost(cost, &p.state)?;
        p.cost = c;
        p.velocity = vec![0.0; dim];
        if warm_start && p.personal_best != p.state {
            let carried = eval_cost(cost, &p.personal_best)?;
            if carried < c {
                p.personal_best_cost = carried;
            } else {
                p.personal_best = p.state.clone();
                p.personal_best_cost = c;
            }
        } else {
            p.personal_best = p.state.clone();
            p.personal_best_cost = c;
        }
    }
    swarm.refresh_global_best();
    swarm.iteration = 0;

    let mut move_streams: Vec<RandStream> = (0..n)
        .map(|i| RandStream::for_purpose(settings.seed, StreamPurpose::Optimize, settings.frame, i))
        .collect();
    let mut accept_streams: Vec<RandStream> = match variant {
        OptimizerVariant::Awqpso { .. } => (0..n)
            .map(|i| RandStream::for_purpose(settings.seed, StreamPurpose::Anneal, settings.frame, i))
            .collect(),
        _ => Vec::new(),
    };
    let mut anneal = match variant {
        OptimizerVariant::Awqpso { t0, .. } => {
            Some(AnnealState::at(*t0, settings.anneal_start_iteration))
        }
        _ => None,
    };

    loop {
        let t_current = swarm.iteration;
        match variant {
            OptimizerVariant::Pso { omega, c1, c2 } => {
                pso_step(&mut swarm, *omega, *c1, *c2, settings.bounds, &mut move_streams)?;
                for p in &mut swarm.particles {
                    let c = eval_cost(cost, &p.state)?;
                    p.cost = c;
                    update_personal_best(p, c)?;
                }
            }
            OptimizerVariant::Qpso { beta_hi, beta_lo } => {
                let mbest = mean_best(&swarm)?;
                let beta = beta_schedule(t_current, settings.t_max, *beta_hi, *beta_lo)?;
                let gbest = swarm.global_best.clone();
                for (p, stream) in swarm.particles.iter_mut().zip(move_streams.iter_mut()) {
                    let attractor = local_attractor(&p.personal_best, &gbest, stream);
                    let next =
                        qpso_position_update(&p.state, &attractor, &mbest, beta, stream, settings.bounds)?;
                    let c = eval_cost(cost, &next)?;
                    p.state = next;
                    p.cost = c;
                    update_personal_best(p, c)?;
                }
            }
            OptimizerVariant::Awqpso {
                beta_hi,
                beta_lo,
                alpha_max,
                alpha_min,
                ..
            } => {
                let mbest = weighted_mean_best(&swarm, *alpha_max, *alpha_min)?;
                let beta = beta_schedule(t_current, settings.t_max, *beta_hi, *beta_lo)?;
                let temperature = anneal.as_ref().expect("anneal state").temperature();
                let gbest = swarm.global_best.clone();
                for ((p, stream), accept_stream) in swarm
                    .particles
                    .iter_mut()
                    .zip(move_streams.iter_mut())
                    .zip(accept_streams.iter_mut())
                {
                    let attractor = local_attractor(&p.personal_best, &gbest, stream);
                    let candidate =
                        qpso_position_update(&p.state, &attractor, &mbest, beta, stream, settings.bounds)?;
                    let candidate_cost = eval_cost(cost, &candidate)?;
                    let delta_f = candidate_cost - p.cost;
                    if metropolis_accept(delta_f, temperature, accept_stream) {
                        p.state = candidate;
                        p.cost = candidate_cost;
                    }
                    let current_cost = p.cost;
                    update_personal_best(p, current_cost)?;
                }
                anneal = anneal.map(cooling_step);
            }
        }
        swarm.refresh_global_best();
        swarm.iteration += 1;
        on_iteration(swarm.global_best_cost);

        if let Some(stop) = settings.stop_cost {
            if swarm.global_best_cost <= stop {
                break;
            }
        }
        if swarm.iteration >= settings.t_max {
            break;
        }
    }
    Ok(swarm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere(s: &TargetState) -> f64 {
        s.as_slice().iter().map(|x| x * x).sum()
    }

    fn bounds2() -> Bounds {
        Bounds::new(vec![[-5.12, 5.12], [-5.12, 5.12]]).unwrap()
    }

    fn uniform_swarm(n: usize, bounds: &Bounds, seed: u64) -> Swarm {
        let states: Vec<TargetState> = (0..n)
            .map(|i| {
                let mut stream = RandStream::for_purpose(seed, StreamPurpose::SwarmInit, 0, i);
                let coords = (0..bounds.dim())
                    .map(|d| {
                        let [lo, hi] = bounds.interval(d);
                        stream.uniform_in(lo, hi)
                    })
                    .collect();
                TargetState::from_coords(coords)
            })
            .collect();
        Swarm::from_states(states).unwrap()
    }

    #[test]
    fn personal_best_replaced_on_strict_improvement() {
        let mut p = Particle::new(TargetState::from_coords(vec![1.0, 1.0]));
        p.personal_best_cost = 5.0;
        p.personal_best = TargetState::from_coords(vec![9.0, 9.0]);
        update_personal_best(&mut p, 3.0).unwrap();
        assert_eq!(p.personal_best_cost, 3.0);
        assert_eq!(p.personal_best, p.state);
    }

    #[test]
    fn personal_best_unchanged_on_tie_or_worse() {
        let mut p = Particle::new(TargetState::from_coords(vec![1.0, 1.0]));
        p.personal_best_cost = 5.0;
        let kept = TargetState::from_coords(vec![9.0, 9.0]);
        p.personal_best = kept.clone();
        update_personal_best(&mut p, 5.0).unwrap();
        assert_eq!(p.personal_best, kept);
        update_personal_best(&mut p, 7.0).unwrap();
        assert_eq!(p.personal_best, kept);
        assert_eq!(p.personal_best_cost, 5.0);
    }

    #[test]
    fn non_finite_cost_rejected() {
        let mut p = Particle::new(TargetState::from_coords(vec![1.0]));
        assert!(update_personal_best(&mut p, f64::NAN).is_err());
    }

    #[test]
    fn constant_cost_runs_to_t_max_without_improvement() {
        let b = bounds2();
        let swarm = uniform_swarm(20, &b, 3);
        for variant in [
            OptimizerVariant::Pso { omega: 0.5, c1: 2.05, c2: 2.05 },
            OptimizerVariant::Qpso { beta_hi: 0.9, beta_lo: 0.5 },
            OptimizerVariant::Awqpso {
                beta_hi: 0.9,
                beta_lo: 0.5,
                t0: 100.0,
                alpha_max: 1.5,
                alpha_min: 0.5,
            },
        ] {
            let settings = RunSettings { bounds: &b, t_max: 10, stop_cost: None, seed: 3, frame: 0, anneal_start_iteration: 0 };
            let out = run_optimizer(&variant, &|_s: &TargetState| 7.5, &settings, swarm.clone()).unwrap();
            assert_eq!(out.global_best_cost, 7.5, "{}", variant.tag());
            assert_eq!(out.iteration, 10, "{}", variant.tag());
        }
    }

    #[test]
    fn global_best_cost_never_increases() {
        let b = bounds2();
        for (vi, variant) in [
            OptimizerVariant::Pso { omega: 0.5, c1: 2.05, c2: 2.05 },
            OptimizerVariant::Qpso { beta_hi: 0.9, beta_lo: 0.5 },
            OptimizerVariant::Awqpso {
                beta_hi: 0.9,
                beta_lo: 0.5,
                t0: 100.0,
                alpha_max: 1.5,
                alpha_min: 0.5,
            },
        ]
        .into_iter()
        .enumerate()
        {
            for seed in 0..20u64 {
                let swarm = uniform_swarm(15, &b, 40 + seed);
                let settings = RunSettings {
                    bounds: &b,
                    t_max: 25,
                    stop_cost: None,
                    seed: 40 + seed + 1000 * vi as u64,
                    frame: 0,
                    anneal_start_iteration: 0,
                };
                let mut trace = Vec::new();
                run_optimizer_traced(&variant, &sphere, &settings, swarm, &mut |c| trace.push(c))
                    .unwrap();
                assert_eq!(trace.len(), 25);
                for pair in trace.windows(2) {
                    assert!(
                        pair[1] <= pair[0],
                        "{} best cost rose from {} to {}",
                        variant.tag(),
                        pair[0],
                        pair[1]
                    );
                }
            }
        }
    }

    #[test]
    fn single_particle_qpso_degenerates_gracefully() {
        let b = bounds2();
        let swarm = Swarm::from_states(vec![TargetState::from_coords(vec![1.0, -2.0])]).unwrap();
        let settings = RunSettings { bounds: &b, t_max: 5, stop_cost: None, seed: 9, frame: 0, anneal_start_iteration: 0 };
        let variant = OptimizerVariant::Qpso { beta_hi: 0.9, beta_lo: 0.5 };
        let out = run_optimizer(&variant, &sphere, &settings, swarm).unwrap();
        assert_eq!(out.len(), 1);
        assert!(out.global_best_cost <= 5.0);
        assert!(out.global_best_cost.is_finite());
    }

    #[test]
    fn stop_cost_terminates_early() {
        let b = bounds2();
        let swarm = uniform_swarm(30, &b, 5);
        let settings = RunSettings { bounds: &b, t_max: 50, stop_cost: Some(1.0), seed: 5, frame: 0, anneal_start_iteration: 0 };
        let variant = OptimizerVariant::Qpso { beta_hi: 0.9, beta_lo: 0.5 };
        let out = run_optimizer(&variant, &sphere, &settings, swarm).unwrap();
        assert!(out.global_best_cost <= 1.0);
        assert!(out.iteration < 50, "expected early stop, ran {}", out.iteration);
        assert!(out.iteration >= 1);
    }

    #[test]
    fn non_finite_cost_function_reports_offending_state() {
        let b = bounds2();
        let swarm = uniform_swarm(4, &b, 6);
        let settings = RunSettings { bounds: &b, t_max: 5, stop_cost: None, seed: 6, frame: 0, anneal_start_iteration: 0 };
        let variant = OptimizerVariant::Pso { omega: 0.5, c1: 2.05, c2: 2.05 };
        let err = run_optimizer(&variant, &|_s: &TargetState| f64::NAN, &settings, swarm).unwrap_err();
        assert!(matches!(err, Error::NonFiniteCost { .. }));
    }

    #[test]
    fn kernels_are_deterministic_under_fixed_seed() {
        let b = bounds2();
        for variant in [
            OptimizerVariant::Pso { omega: 0.5, c1: 2.05, c2: 2.05 },
            OptimizerVariant::Qpso { beta_hi: 0.9, beta_lo: 0.5 },
            OptimizerVariant::Awqpso {
                beta_hi: 0.9,
                beta_lo: 0.5,
                t0: 100.0,
                alpha_max: 1.5,
                alpha_min: 0.5,
            },
        ] {
            let settings = RunSettings { bounds: &b, t_max: 20, stop_cost: None, seed: 11, frame: 2, anneal_start_iteration: 0 };
            let a = run_optimizer(&variant, &sphere, &settings, uniform_swarm(25, &b, 11)).unwrap();
            let c = run_optimizer(&variant, &sphere, &settings, uniform_swarm(25, &b, 11)).unwrap();
            assert_eq!(a, c, "{}", variant.tag());
        }
    }
}
