use swarmtrack::scenesim::{Scenario, ScenarioKind, simulate, FrameData};
use swarmtrack::frame::IntegralImage;
use swarmtrack::observe::{ColorReference, color_patch_likelihood_integral};
use swarmtrack::optim::{run_optimizer, OptimizerVariant, RunSettings};
use swarmtrack::filter::{memory_step_size, propagate, importance_weights, effective_sample_size, estimate_state, sir_resample, LambdaPairing, VelocityMemory};
use swarmtrack::rng::{RandStream, StreamPurpose};
use swarmtrack::types::{Bounds, Swarm, TargetState};
use swarmtrack::metrics::frame_rmse;
use swarmtrack::TrackerConfig;

fn main() {
    let mut sc = Scenario::new(ScenarioKind::DistractorCross, 101, 1002);
    sc.pixel_noise_sigma = 6.0;
    let seq = simulate(&sc).unwrap();
    let cfg = TrackerConfig { population: 100, seed: 5002, ..TrackerConfig::default() };
    let FrameData::Raster(frames) = &seq.frames else { panic!() };
    let gt0 = seq.ground_truth[0];
    let reference = ColorReference::from_frame(&frames[0], &gt0, cfg.color_variance).unwrap();
    let peak = reference.peak_fitness();
    let bounds = Bounds::new(vec![[0.0, 480.0], [0.0, 360.0]]).unwrap();
    let diffusion = [1.0, 1.0];
    let n = cfg.population;
    let seed = cfg.seed;
    let init: Vec<TargetState> = (0..n).map(|i| {
        let mut s = RandStream::for_purpose(seed, StreamPurpose::SwarmInit, 0, i);
        TargetState::from_coords(vec![gt0.cx + s.gaussian(1.0), gt0.cy + s.gaussian(1.0)])
    }).collect();
    let mut swarm = Swarm::from_states(init).unwrap();
    let variant = OptimizerVariant::awqpso_from(&cfg);
    let mut memory = VelocityMemory::new(2);
    let mut prev: Option<TargetState> = None;
    let mut tau = 0usize;
    for t in 0..45 {
        if t > 0 {
            let vf = memory_step_size(&memory, LambdaPairing::Literal);
            propagate(&mut swarm, &vf, &diffusion, &bounds, seed, t).unwrap();
        }
        let integral = IntegralImage::from_frame(&frames[t]);
        let settings = RunSettings { bounds: &bounds, t_max: 50, stop_cost: Some(-0.95), seed, frame: t, anneal_start_iteration: tau };
        let cost = |s: &TargetState| -color_patch_likelihood_integral(s, &integral, &reference) / peak;
        swarm = run_optimizer(&variant, &cost, &settings, swarm).unwrap();
        let iters = swarm.iteration;
        tau += iters;
        let likes: Vec<f64> = swarm.particles.iter().map(|p| -p.cost).collect();
        let wu = importance_weights(&likes).unwrap();
        for (p, w) in swarm.particles.iter_mut().zip(&wu.weights) { p.weight = *w; }
        let est = estimate_state(&swarm).unwrap();
        let states: Vec<TargetState> = swarm.particles.iter().map(|p| p.state.clone()).collect();
        let err = frame_rmse(&states, seq.ground_truth[t].center()).unwrap();
        if let Some(p) = &prev { memory.push(vec![est.x()-p.x(), est.y()-p.y()]); }
        prev = Some(est.clone());
        let ess = effective_sample_size(&wu.weights).unwrap();
        let resample = !wu.degenerate && ess < 0.5 * n as f64;
        // distance histogram: fraction of particles farther than 10/20/40 px from gt
        let gt = seq.ground_truth[t];
        let far: Vec<usize> = [10.0, 20.0, 40.0].iter().map(|r| states.iter().filter(|s| {
            let dx = s.x()-gt.cx; let dy = s.y()-gt.cy; (dx*dx+dy*dy).sqrt() > *r
        }).count()).collect();
        println!("t {t:3} iters {iters:3} tau {tau:4} err {err:7.2} ess {ess:6.1} rs {} far10/20/40 {:3}/{:3}/{:3} bestfit {:.3}",
            resample as u8, far[0], far[1], far[2], -swarm.global_best_cost);
        if resample {
            let mut stream = RandStream::for_purpose(seed, StreamPurpose::Resample, t, 0);
            swarm = sir_resample(&swarm, &mut stream).unwrap();
        }
    }
}
