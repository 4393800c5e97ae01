use swarmtrack::scenesim::{Scenario, ScenarioKind, simulate};
use swarmtrack::filter::{track_sequence, TrackerKind};
use swarmtrack::metrics::lost_targets;
use swarmtrack::TrackerConfig;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let frames: usize = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(101);
    let pop: usize = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(100);
    let trials: usize = args.get(3).map(|s| s.parse().unwrap()).unwrap_or(3);

    for trial in 0..trials as u64 {
        let mut sc = Scenario::new(ScenarioKind::DistractorCross, frames, 1000 + trial);
        sc.pixel_noise_sigma = 6.0;
        let seq = simulate(&sc).unwrap();
        println!("--- trial {trial} ({frames} frames, pop {pop}) ---");
        for tracker in [TrackerKind::Pf, TrackerKind::PsoPf, TrackerKind::AwqpsoPf] {
            let cfg = TrackerConfig { population: pop, seed: 5000 + trial, ..TrackerConfig::default() };
            let t0 = std::time::Instant::now();
            let report = track_sequence(&seq, tracker, &cfg).unwrap();
            let secs = t0.elapsed().as_secs_f64();
            let errs = &report.per_frame_swarm_errors;
            let max = errs.iter().cloned().fold(0.0f64, f64::max);
            let mean = errs.iter().sum::<f64>() / errs.len() as f64;
            let lost20 = lost_targets(errs, 20.0).unwrap();
            let lost30 = lost_targets(errs, 30.0).unwrap();
            let est_err_last = {
                let e = report.per_frame_estimates.last().unwrap();
                let gt = seq.ground_truth.last().unwrap();
                ((e.x()-gt.cx).powi(2) + (e.y()-gt.cy).powi(2)).sqrt()
            };
            println!("{:10} mean {:6.2} max {:6.1} lost20 {:4} lost30 {:4} final-est-err {:6.1} fps {:7.1}",
                tracker.tag(), mean, max, lost20, lost30, est_err_last, frames as f64 / secs);
        }
    }
}
