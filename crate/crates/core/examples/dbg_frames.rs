use swarmtrack::scenesim::{Scenario, ScenarioKind, simulate, FrameData};
use swarmtrack::frame::box_to_pixel_rect;
use swarmtrack::filter::{track_sequence, TrackerKind};
use swarmtrack::TrackerConfig;

fn main() {
    let mut sc = Scenario::new(ScenarioKind::DistractorCross, 101, 1003);
    sc.pixel_noise_sigma = 6.0;
    let seq = simulate(&sc).unwrap();
    let cfg = TrackerConfig { population: 100, seed: 5003, ..TrackerConfig::default() };
    let report = track_sequence(&seq, TrackerKind::Pf, &cfg).unwrap();
    let FrameData::Raster(_frames) = &seq.frames else { panic!() };
    // distractor path recomputed from the trajectory generator
    let traj = swarmtrack::scenesim::generate_trajectory(&sc).unwrap();
    let d = traj.distractor.unwrap();
    for t in 44..78 {
        let gt = seq.ground_truth[t];
        let e = &report.per_frame_estimates[t];
        let est_err = ((e.x()-gt.cx).powi(2) + (e.y()-gt.cy).powi(2)).sqrt();
        let dist_err = ((e.x()-d[t].cx).powi(2) + (e.y()-d[t].cy).powi(2)).sqrt();
        let sep = ((gt.cx-d[t].cx).powi(2) + (gt.cy-d[t].cy).powi(2)).sqrt();
        let dvis = box_to_pixel_rect(&d[t], seq.width, seq.height).is_some();
        println!("t {t:3} sep {sep:6.1} est->gt {est_err:6.1} est->distractor {dist_err:6.1} dvis {dvis}");
    }
}
