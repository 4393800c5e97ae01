//! The particle-filter pipeline: memory-guided propagation, likelihood
//! weighting, optional evolutionary redistribution, state estimation, and
//! ESS-gated resampling.

mod motion;
mod resample;
mod weights;

pub use motion::{memory_step_size, propagate, LambdaPairing, VelocityMemory};
pub use resample::{sir_resample, systematic_ancestors};
pub use weights::{effective_sample_size, estimate_state, importance_weights, WeightUpdate};

use std::str::FromStr;
use std::time::Instant;

use crate::config::{ObservationKind, TrackerConfig};
use crate::error::{Error, Result};
use crate::frame::IntegralImage;
use crate::metrics::{frame_rmse, frame_rmse_literal, TrackReport};
use crate::observe::{
    color_patch_likelihood_integral, point_likelihood, ColorReference, GaussianObservationModel,
};
use crate::optim::{run_optimizer, OptimizerVariant, RunSettings};
use crate::rng::{RandStream, StreamPurpose};
use crate::scenesim::{FrameData, Sequence, SequenceMode};
use crate::types::{BoundingBox, Bounds, Swarm, TargetState};

/// Which tracker runs the sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrackerKind {
    /// Bootstrap particle filter.
    Pf,
    /// Particle filter with in-frame PSO redistribution.
    PsoPf,
    /// Particle filter with in-frame annealed-weighted QPSO redistribution.
    AwqpsoPf,
}

impl TrackerKind {
    pub const ALL: [TrackerKind; 3] = [TrackerKind::Pf, TrackerKind::PsoPf, TrackerKind::AwqpsoPf];

    pub fn tag(&self) -> &'static str {
        match self {
            TrackerKind::Pf => "PF",
            TrackerKind::PsoPf => "PSO-PF",
            TrackerKind::AwqpsoPf => "AWQPSO-PF",
        }
    }
}

impl std::fmt::Display for TrackerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for TrackerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "PF" => Ok(TrackerKind::Pf),
            "PSO-PF" => Ok(TrackerKind::PsoPf),
            "AWQPSO-PF" => Ok(TrackerKind::AwqpsoPf),
            other => Err(Error::InvalidConfig(format!(
                "unknown tracker '{other}'; valid tags: PF, PSO-PF, AWQPSO-PF"
            ))),
        }
    }
}

enum FrameObservation<'a> {
    Raster {
        integral: IntegralImage,
        reference: &'a ColorReference,
    },
    Point {
        observation: [f64; 2],
        model: &'a GaussianObservationModel,
    },
}

impl FrameObservation<'_> {
    fn likelihood(&self, state: &TargetState) -> f64 {
        match self {
            FrameObservation::Raster { integral, reference } => {
                color_patch_likelihood_integral(state, integral, reference)
            }
            FrameObservation::Point { observation, model } => {
                point_likelihood(state, observation, model).unwrap_or(0.0)
            }
        }
    }

    fn peak_fitness(&self) -> f64 {
        match self {
            FrameObservation::Raster { reference, .. } => reference.peak_fitness(),
            FrameObservation::Point { model, .. } => model.peak_fitness(),
        }
    }
}

fn tracking_bounds(config: &TrackerConfig, sequence: &Sequence, dim: usize) -> Result<Bounds> {
    if let Some(b) = &config.search_bounds {
        let bounds = Bounds::new(b.clone())?;
        if bounds.dim() != dim {
            return Err(Error::InvalidConfig(format!(
                "search_bounds covers {} dimensions, tracked state has {dim}",
                bounds.dim()
            )));
        }
        return Ok(bounds);
    }
    let w = sequence.width as f64;
    let h = sequence.height as f64;
    let mut intervals = vec![[0.0, w], [0.0, h]];
    if dim == 4 {
        intervals.push([2.0, w]);
        intervals.push([2.0, h]);
    }
    Bounds::new(intervals)
}

fn initial_state(gt0: &BoundingBox, box_mode: bool) -> Result<TargetState> {
    if box_mode {
        TargetState::boxed(gt0.cx, gt0.cy, gt0.w, gt0.h)
    } else {
        TargetState::center(gt0.cx, gt0.cy)
    }
}

/// Runs one tracker over a sequence.
///
/// Per frame: propagate with the memory-guided step, optionally
/// redistribute the swarm with the tracker's optimizer against
/// `cost = -likelihood`, weight by likelihood, estimate the state, update
/// the velocity memory, and resample when `N_eff` drops below the
/// configured fraction of the population.
pub fn track_sequence(
    sequence: &Sequence,
    tracker: TrackerKind,
    config: &TrackerConfig,
) -> Result<TrackReport> {
    config.validate()?;
    let n_frames = sequence.frame_count();
    if n_frames < 2 {
        return Err(Error::SequenceTooShort(n_frames));
    }
    match (config.observation, sequence.mode()) {
        (Some(ObservationKind::Point), SequenceMode::Raster) => {
            return Err(Error::ModelMismatch { model: "point".into(), mode: "raster".into() })
        }
        (Some(ObservationKind::Color), SequenceMode::Point) => {
            return Err(Error::ModelMismatch { model: "color".into(), mode: "point".into() })
        }
        _ => {}
    }

    let dim = config.state_dim();
    let diffusion = config.diffusion_for_dim(dim)?;
    let bounds = tracking_bounds(config, sequence, dim)?;
    let seed = config.seed;
    let n = config.population;
    let gt0 = sequence.ground_truth[0];
    let fixed_extent = (gt0.w, gt0.h);
    let pairing = if config.pair_descending {
        LambdaPairing::Descending
    } else {
        LambdaPairing::Literal
    };

    // Observation context shared across frames.
    let color_reference = match &sequence.frames {
        FrameData::Raster(frames) => {
            Some(ColorReference::from_frame(&frames[0], &gt0, config.color_variance)?)
        }
        FrameData::Points(_) => None,
    };
    let point_model = match &sequence.frames {
        FrameData::Points(_) => {
            let variances = match &config.observation_variance {
                Some(v) => {
                    if v.len() != 2 {
                        return Err(Error::InvalidConfig(
                            "observation_variance must have 2 entries in point mode".into(),
                        ));
                    }
                    v.clone()
                }
                None => {
                    let sigma = sequence.scenario.pixel_noise_sigma.max(1.0);
                    vec![sigma * sigma; 2]
                }
            };
            Some(GaussianObservationModel::new(variances)?)
        }
        FrameData::Raster(_) => None,
    };

    let variant = match tracker {
        TrackerKind::Pf => None,
        TrackerKind::PsoPf => Some(OptimizerVariant::pso_from(config)),
        TrackerKind::AwqpsoPf => Some(OptimizerVariant::awqpso_from(config)),
    };

    // Initial cloud: first-frame annotation plus diffusion.
    let center = initial_state(&gt0, config.box_mode)?;
    let init_states: Vec<TargetState> = (0..n)
        .map(|i| {
            let mut stream = RandStream::for_purpose(seed, StreamPurpose::SwarmInit, 0, i);
            let mut coords = Vec::with_capacity(dim);
            for d in 0..dim {
                let sd = diffusion[d].sqrt();
                let x = center.coord(d) + if sd > 0.0 { stream.gaussian(sd) } else { 0.0 };
                coords.push(bounds.clamp_value(d, x));
            }
            TargetState::from_coords(coords)
        })
        .collect();
    let mut swarm = Swarm::from_states(init_states)?;

    let mut memory = VelocityMemory::new(dim);
    let mut previous_estimate: Option<TargetState> = None;
    let mut estimates = Vec::with_capacity(n_frames);
    let mut swarm_errors = Vec::with_capacity(n_frames);
    let mut boxes = Vec::with_capacity(n_frames);
    let mut degenerate_frames = Vec::new();
    let mut likelihoods = vec![0.0f64; n];
    // The annealing schedule runs over the sequence: each frame's
    // optimization resumes where the previous one cooled to.
    let mut anneal_iterations = 0usize;

    let started = Instant::now();
    for t in 0..n_frames {
        if t > 0 {
            let v_f = memory_step_size(&memory, pairing);
            propagate(&mut swarm, &v_f, &diffusion, &bounds, seed, t)?;
        }

        let observation = match &sequence.frames {
            FrameData::Raster(frames) => FrameObservation::Raster {
                integral: IntegralImage::from_frame(&frames[t]),
                reference: color_reference.as_ref().expect("raster reference"),
            },
            FrameData::Points(points) => FrameObservation::Point {
                observation: points[t],
                model: point_model.as_ref().expect("point model"),
            },
        };

        match &variant {
            Some(variant) => {
                // The optimizer minimizes the peak-normalized negative
                // fitness, so Metropolis differences are on a unit scale
                // regardless of the observation model's normalizer.
                let peak = observation.peak_fitness();
                let settings = RunSettings {
                    bounds: &bounds,
                    t_max: config.t_max,
                    stop_cost: Some(-config.fitness_stop_fraction),
                    seed,
                    frame: t,
                    anneal_start_iteration: anneal_iterations,
                };
                let cost = |s: &TargetState| -observation.likelihood(s) / peak;
                swarm = run_optimizer(variant, &cost, &settings, swarm)?;
                anneal_iterations += swarm.iteration;
                for (l, p) in likelihoods.iter_mut().zip(&swarm.particles) {
                    *l = -p.cost;
                }
            }
            None => {
                for (l, p) in likelihoods.iter_mut().zip(&swarm.particles) {
                    *l = observation.likelihood(&p.state);
                }
            }
        }

        let update = importance_weights(&likelihoods)?;
        for (p, w) in swarm.particles.iter_mut().zip(&update.weights) {
            p.weight = *w;
        }

        let estimate = estimate_state(&swarm)?;
        let gt_center = sequence.ground_truth[t].center();
        let particle_states: Vec<TargetState> =
            swarm.particles.iter().map(|p| p.state.clone()).collect();
        let error = if config.rmse_literal {
            frame_rmse_literal(&particle_states, gt_center)?
        } else {
            frame_rmse(&particle_states, gt_center)?
        };
        let (bw, bh) = estimate.extent().unwrap_or(fixed_extent);
        boxes.push(BoundingBox { cx: estimate.x(), cy: estimate.y(), w: bw, h: bh });

        if let Some(prev) = &previous_estimate {
            let v: Vec<f64> = estimate
                .as_slice()
                .iter()
                .zip(prev.as_slice())
                .map(|(a, b)| a - b)
                .collect();
            memory.push(v);
        }
        previous_estimate = Some(estimate.clone());
        estimates.push(estimate);
        swarm_errors.push(error);

        if update.degenerate {
            degenerate_frames.push(t);
        } else {
            let ess = effective_sample_size(&update.weights)?;
            if ess < config.ess_threshold_fraction * n as f64 {
                let mut stream = RandStream::for_purpose(seed, StreamPurpose::Resample, t, 0);
                swarm = sir_resample(&swarm, &mut stream)?;
            }
        }
    }
    let wall_clock_seconds = started.elapsed().as_secs_f64();

    Ok(TrackReport {
        tracker_tag: tracker.tag().to_string(),
        seed,
        frames_processed: n_frames,
        wall_clock_seconds,
        per_frame_estimates: estimates,
        per_frame_swarm_errors: swarm_errors,
        per_frame_boxes: boxes,
        degenerate_frames,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenesim::Scenario;

    fn stationary_point_sequence(frames: usize) -> Sequence {
        let bb = BoundingBox { cx: 50.0, cy: 40.0, w: 10.0, h: 14.0 };
        Sequence {
            width: 100,
            height: 80,
            frames: FrameData::Points(vec![[bb.cx, bb.cy]; frames]),
            ground_truth: vec![bb; frames],
            scenario: {
                let mut sc = Scenario::new(crate::scenesim::ScenarioKind::ConstantVelocity, frames, 0);
                sc.mode = SequenceMode::Point;
                sc.pixel_noise_sigma = 0.0;
                sc
            },
        }
    }

    fn small_config(seed: u64) -> TrackerConfig {
        TrackerConfig {
            population: 60,
            t_max: 15,
            seed,
            ..TrackerConfig::default()
        }
    }

    #[test]
    fn stationary_target_error_bounded_by_diffusion_scale() {
        let seq = stationary_point_sequence(40);
        let cfg = small_config(5);
        let bound = 3.0 * cfg.motion_diffusion.iter().cloned().fold(0.0f64, f64::max).sqrt();
        for tracker in TrackerKind::ALL {
            let report = track_sequence(&seq, tracker, &cfg).unwrap();
            assert_eq!(report.frames_processed, 40);
            for (t, e) in report.per_frame_swarm_errors.iter().enumerate() {
                assert!(
                    *e <= bound,
                    "{} frame {t}: error {e} exceeds {bound}",
                    tracker.tag()
                );
            }
        }
    }

    #[test]
    fn identical_runs_produce_identical_reports() {
        let seq = stationary_point_sequence(12);
        let cfg = small_config(9);
        for tracker in TrackerKind::ALL {
            let a = track_sequence(&seq, tracker, &cfg).unwrap();
            let b = track_sequence(&seq, tracker, &cfg).unwrap();
            assert_eq!(a.normalized(), b.normalized(), "{}", tracker.tag());
            assert_eq!(a.per_frame_estimates, b.per_frame_estimates);
        }
    }

    #[test]
    fn short_sequence_rejected() {
        let seq = stationary_point_sequence(1);
        let err = track_sequence(&seq, TrackerKind::Pf, &small_config(1)).unwrap_err();
        assert!(matches!(err, Error::SequenceTooShort(1)));
    }

    #[test]
    fn model_mismatch_rejected() {
        let seq = stationary_point_sequence(5);
        let mut cfg = small_config(1);
        cfg.observation = Some(ObservationKind::Color);
        let err = track_sequence(&seq, TrackerKind::Pf, &cfg).unwrap_err();
        assert!(matches!(err, Error::ModelMismatch { .. }));
    }

    #[test]
    fn population_one_degenerates_gracefully() {
        let seq = stationary_point_sequence(10);
        let mut cfg = small_config(3);
        cfg.population = 1;
        for tracker in TrackerKind::ALL {
            let report = track_sequence(&seq, tracker, &cfg).unwrap();
            assert_eq!(report.per_frame_estimates.len(), 10);
            assert!(report.per_frame_swarm_errors.iter().all(|e| e.is_finite()));
        }
    }

    #[test]
    fn raster_tracking_follows_a_moving_target() {
        let mut sc = Scenario::new(crate::scenesim::ScenarioKind::ConstantVelocity, 30, 11);
        sc.frame_size = (200, 150);
        sc.pixel_noise_sigma = 4.0;
        // Keep the path inside the smaller frame.
        let seq = {
            let mut seq = crate::scenesim::simulate(&sc).unwrap();
            seq.scenario = sc.clone();
            seq
        };
        let cfg = TrackerConfig { population: 80, t_max: 12, seed: 2, ..TrackerConfig::default() };
        let report = track_sequence(&seq, TrackerKind::AwqpsoPf, &cfg).unwrap();
        let last_err = *report.per_frame_swarm_errors.last().unwrap();
        assert!(last_err < 15.0, "final swarm error {last_err}");
    }

    #[test]
    fn tracker_tags_parse_round_trip() {
        for t in TrackerKind::ALL {
            assert_eq!(t.tag().parse::<TrackerKind>().unwrap(), t);
        }
        assert!("pf".parse::<TrackerKind>().is_ok());
        assert!("bogus".parse::<TrackerKind>().is_err());
    }
}
