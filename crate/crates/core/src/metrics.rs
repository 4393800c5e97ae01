//! Tracking quality indices computed from a track report plus ground
//! truth: per-frame swarm error, precision/recall curves, overlap, lost
//! targets, and FPS.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{BoundingBox, TargetState};

/// Per-frame outcome of one tracking run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackReport {
    pub tracker_tag: String,
    pub seed: u64,
    pub frames_processed: usize,
    pub wall_clock_seconds: f64,
    pub per_frame_estimates: Vec<TargetState>,
    /// Root mean squared center distance of the swarm to ground truth.
    pub per_frame_swarm_errors: Vec<f64>,
    pub per_frame_boxes: Vec<BoundingBox>,
    /// Frames whose likelihoods were all zero (weights fell back to
    /// uniform and resampling was skipped).
    pub degenerate_frames: Vec<usize>,
}

impl TrackReport {
    /// Copy with timing zeroed, for byte-stable comparisons.
    pub fn normalized(&self) -> TrackReport {
        let mut out = self.clone();
        out.wall_clock_seconds = 0.0;
        out
    }

    pub fn fps(&self) -> Result<f64> {
        fps(self.frames_processed, self.wall_clock_seconds)
    }
}

/// Root of the mean squared center distance over particles:
/// `sqrt((1/N) * sum_z [(x_z - x_gt)^2 + (y_z - y_gt)^2])`.
pub fn frame_rmse(states: &[TargetState], gt_center: (f64, f64)) -> Result<f64> {
    let sum = center_square_sum(states, gt_center)?;
    Ok((sum / states.len() as f64).sqrt())
}

/// Literal variant placing the particle-count division outside the root:
/// `sqrt(sum_z [...]) / N`.
pub fn frame_rmse_literal(states: &[TargetState], gt_center: (f64, f64)) -> Result<f64> {
    let sum = center_square_sum(states, gt_center)?;
    Ok(sum.sqrt() / states.len() as f64)
}

fn center_square_sum(states: &[TargetState], gt_center: (f64, f64)) -> Result<f64> {
    if states.is_empty() {
        return Err(Error::InvalidMetricInput("frame RMSE over an empty particle list".into()));
    }
    let mut sum = 0.0;
    for s in states {
        let dx = s.x() - gt_center.0;
        let dy = s.y() - gt_center.1;
        sum += dx * dx + dy * dy;
    }
    Ok(sum)
}

/// Arithmetic mean of the per-frame errors.
pub fn sequence_rmse(report: &TrackReport) -> f64 {
    if report.per_frame_swarm_errors.is_empty() {
        return 0.0;
    }
    report.per_frame_swarm_errors.iter().sum::<f64>() / report.per_frame_swarm_errors.len() as f64
}

/// Intersection over union; 0 when the union has no area.
pub fn overlap_score(a: &BoundingBox, b: &BoundingBox) -> f64 {
    let ix = (a.right().min(b.right()) - a.left().max(b.left())).max(0.0);
    let iy = (a.bottom().min(b.bottom()) - a.top().max(b.top())).max(0.0);
    let inter = ix * iy;
    let union = a.area() + b.area() - inter;
    if union <= 0.0 {
        0.0
    } else {
        inter / union
    }
}

fn check_thresholds_sorted(thresholds: &[f64]) -> Result<()> {
    if thresholds.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidMetricInput("thresholds must be sorted ascending".into()));
    }
    Ok(())
}

/// Number of frames with error strictly below the threshold.
pub fn frames_under(frame_errors: &[f64], threshold: f64) -> usize {
    frame_errors.iter().filter(|e| **e < threshold).count()
}

/// Per threshold, the fraction of frames whose error is strictly below it.
/// Monotone non-decreasing in the threshold.
pub fn precision_curve(frame_errors: &[f64], thresholds: &[f64]) -> Result<Vec<(f64, f64)>> {
    if frame_errors.is_empty() {
        return Err(Error::InvalidMetricInput("precision over an empty frame list".into()));
    }
    check_thresholds_sorted(thresholds)?;
    let total = frame_errors.len() as f64;
    Ok(thresholds
        .iter()
        .map(|&t| (t, frames_under(frame_errors, t) as f64 / total))
        .collect())
}

/// Per threshold, the fraction of frames whose overlap strictly exceeds
/// it. Monotone non-increasing in the threshold.
pub fn recall_curve(overlaps: &[f64], thresholds: &[f64]) -> Result<Vec<(f64, f64)>> {
    if overlaps.is_empty() {
        return Err(Error::InvalidMetricInput("recall over an empty overlap list".into()));
    }
    for (i, o) in overlaps.iter().enumerate() {
        if !(0.0..=1.0).contains(o) {
            return Err(Error::InvalidMetricInput(format!(
                "overlap {o} at index {i} outside [0, 1]"
            )));
        }
    }
    check_thresholds_sorted(thresholds)?;
    let total = overlaps.len() as f64;
    Ok(thresholds
        .iter()
        .map(|&t| {
            let passing = overlaps.iter().filter(|o| **o > t).count();
            (t, passing as f64 / total)
        })
        .collect())
}

/// Count of frames with error at or above the center error threshold —
/// the complement of the precision pass set.
pub fn lost_targets(frame_errors: &[f64], cet: f64) -> Result<usize> {
    if !(cet > 0.0) {
        return Err(Error::InvalidMetricInput(format!("CET must be positive, got {cet}")));
    }
    Ok(frame_errors.iter().filter(|e| **e >= cet).count())
}

/// Frames processed per wall-clock second.
pub fn fps(frames: usize, seconds: f64) -> Result<f64> {
    if frames == 0 {
        return Err(Error::InvalidMetricInput("FPS over zero frames".into()));
    }
    if !(seconds > 0.0) {
        return Err(Error::InvalidMetricInput(format!(
            "FPS over non-positive duration {seconds}"
        )));
    }
    Ok(frames as f64 / seconds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn states(coords: &[(f64, f64)]) -> Vec<TargetState> {
        coords
            .iter()
            .map(|&(x, y)| TargetState::from_coords(vec![x, y]))
            .collect()
    }

    #[test]
    fn rmse_zero_when_all_particles_on_target() {
        let s = states(&[(3.0, 4.0), (3.0, 4.0)]);
        assert_eq!(frame_rmse(&s, (3.0, 4.0)).unwrap(), 0.0);
    }

    #[test]
    fn rmse_single_particle_equals_center_distance() {
        let s = states(&[(3.0, 4.0)]);
        assert_eq!(frame_rmse(&s, (0.0, 0.0)).unwrap(), 5.0);
        let far = states(&[(7.0, 0.0)]);
        assert_eq!(frame_rmse(&far, (0.0, 0.0)).unwrap(), 7.0);
    }

    #[test]
    fn rmse_two_particles_hand_value() {
        // Distances 3 and 4: sqrt((9 + 16) / 2).
        let s = states(&[(3.0, 0.0), (0.0, 4.0)]);
        let v = frame_rmse(&s, (0.0, 0.0)).unwrap();
        assert!((v - (25.0f64 / 2.0).sqrt()).abs() < 1e-12);
        assert!((v - 3.53553).abs() < 1e-5);
    }

    #[test]
    fn rmse_literal_divides_outside_the_root() {
        let s = states(&[(3.0, 0.0), (0.0, 4.0)]);
        let v = frame_rmse_literal(&s, (0.0, 0.0)).unwrap();
        assert!((v - 25.0f64.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn rmse_empty_rejected() {
        assert!(frame_rmse(&[], (0.0, 0.0)).is_err());
    }

    #[test]
    fn sequence_rmse_averages_frames() {
        let mut report = TrackReport {
            tracker_tag: "PF".into(),
            seed: 0,
            frames_processed: 3,
            wall_clock_seconds: 1.0,
            per_frame_estimates: vec![],
            per_frame_swarm_errors: vec![1.0, 2.0, 6.0],
            per_frame_boxes: vec![],
            degenerate_frames: vec![],
        };
        assert_eq!(sequence_rmse(&report), 3.0);
        report.per_frame_swarm_errors = vec![2.0, 4.0];
        assert_eq!(sequence_rmse(&report), 3.0);
        report.per_frame_swarm_errors = vec![0.0, 0.0];
        assert_eq!(sequence_rmse(&report), 0.0);
    }

    #[test]
    fn overlap_identical_boxes_is_one() {
        let b = BoundingBox { cx: 5.0, cy: 5.0, w: 4.0, h: 4.0 };
        assert_eq!(overlap_score(&b, &b), 1.0);
    }

    #[test]
    fn overlap_disjoint_boxes_is_zero() {
        let a = BoundingBox { cx: 0.0, cy: 0.0, w: 2.0, h: 2.0 };
        let b = BoundingBox { cx: 10.0, cy: 0.0, w: 2.0, h: 2.0 };
        assert_eq!(overlap_score(&a, &b), 0.0);
    }

    #[test]
    fn overlap_hand_value() {
        // Corner spans (0,0)-(2,2) and (1,0)-(3,2): intersection 2, union 6.
        let a = BoundingBox { cx: 1.0, cy: 1.0, w: 2.0, h: 2.0 };
        let b = BoundingBox { cx: 2.0, cy: 1.0, w: 2.0, h: 2.0 };
        let v = overlap_score(&a, &b);
        assert!((v - 2.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn overlap_symmetric_and_translation_invariant() {
        let a = BoundingBox { cx: 1.0, cy: 2.0, w: 3.0, h: 5.0 };
        let b = BoundingBox { cx: 2.5, cy: 0.5, w: 4.0, h: 2.0 };
        assert_eq!(overlap_score(&a, &b), overlap_score(&b, &a));
        let shift = |bb: &BoundingBox| BoundingBox {
            cx: bb.cx + 17.0,
            cy: bb.cy - 4.0,
            ..*bb
        };
        assert_eq!(overlap_score(&a, &b), overlap_score(&shift(&a), &shift(&b)));
    }

    #[test]
    fn overlap_zero_area_union_is_zero() {
        let a = BoundingBox { cx: 1.0, cy: 1.0, w: 0.0, h: 0.0 };
        assert_eq!(overlap_score(&a, &a), 0.0);
    }

    #[test]
    fn precision_counts_strictly_under_threshold() {
        let errors = [5.0, 15.0, 25.0];
        let curve = precision_curve(&errors, &[20.0]).unwrap();
        assert_eq!(curve, vec![(20.0, 2.0 / 3.0)]);
        // Threshold equal to an error does not count it (strict <).
        let curve = precision_curve(&errors, &[15.0]).unwrap();
        assert_eq!(curve[0].1, 1.0 / 3.0);
    }

    #[test]
    fn precision_extremes() {
        let errors = [5.0, 15.0, 25.0];
        assert_eq!(precision_curve(&errors, &[1.0]).unwrap()[0].1, 0.0);
        assert_eq!(precision_curve(&errors, &[100.0]).unwrap()[0].1, 1.0);
    }

    #[test]
    fn precision_monotone_non_decreasing() {
        let errors = [3.0, 9.0, 9.0, 14.0, 2.0, 40.0];
        let thresholds: Vec<f64> = (0..=50).map(|t| t as f64).collect();
        let curve = precision_curve(&errors, &thresholds).unwrap();
        for pair in curve.windows(2) {
            assert!(pair[1].1 >= pair[0].1);
        }
    }

    #[test]
    fn precision_rejects_empty_or_unsorted() {
        assert!(precision_curve(&[], &[1.0]).is_err());
        assert!(precision_curve(&[1.0], &[2.0, 1.0]).is_err());
    }

    #[test]
    fn recall_counts_strictly_over_threshold() {
        let overlaps = [0.2, 0.6, 0.9];
        let curve = recall_curve(&overlaps, &[0.5]).unwrap();
        assert_eq!(curve, vec![(0.5, 2.0 / 3.0)]);
        assert_eq!(recall_curve(&overlaps, &[0.0]).unwrap()[0].1, 1.0);
        // Strict >: nothing exceeds 1.
        assert_eq!(recall_curve(&[1.0, 1.0], &[1.0]).unwrap()[0].1, 0.0);
    }

    #[test]
    fn recall_monotone_non_increasing() {
        let overlaps = [0.1, 0.4, 0.4, 0.8, 0.95];
        let thresholds: Vec<f64> = (0..=20).map(|t| t as f64 / 20.0).collect();
        let curve = recall_curve(&overlaps, &thresholds).unwrap();
        for pair in curve.windows(2) {
            assert!(pair[1].1 <= pair[0].1);
        }
    }

    #[test]
    fn recall_rejects_out_of_range_overlap() {
        assert!(recall_curve(&[1.2], &[0.5]).is_err());
        assert!(recall_curve(&[-0.1], &[0.5]).is_err());
    }

    #[test]
    fn lost_targets_counts_at_or_above_cet() {
        assert_eq!(lost_targets(&[5.0, 25.0, 15.0], 20.0).unwrap(), 1);
        assert_eq!(lost_targets(&[5.0, 20.0, 15.0], 20.0).unwrap(), 1);
        assert_eq!(lost_targets(&[1.0, 2.0], 20.0).unwrap(), 0);
        assert_eq!(lost_targets(&[30.0, 40.0], 20.0).unwrap(), 2);
        assert!(lost_targets(&[1.0], 0.0).is_err());
    }

    #[test]
    fn lost_targets_complements_precision() {
        let errors = [5.0, 20.0, 19.999, 31.0, 7.5, 20.0];
        for cet in [10.0, 20.0, 30.0] {
            let lost = lost_targets(&errors, cet).unwrap();
            let passed = frames_under(&errors, cet);
            assert_eq!(lost + passed, errors.len());
            let p = precision_curve(&errors, &[cet]).unwrap()[0].1;
            assert!((lost as f64 - errors.len() as f64 * (1.0 - p)).abs() < 1e-9);
        }
    }

    #[test]
    fn fps_direct_quotients() {
        assert_eq!(fps(301, 10.0).unwrap(), 30.1);
        assert_eq!(fps(100, 4.0).unwrap(), 25.0);
        assert_eq!(fps(1, 0.5).unwrap(), 2.0);
    }

    #[test]
    fn fps_rejects_degenerate_inputs() {
        assert!(fps(0, 1.0).is_err());
        assert!(fps(10, 0.0).is_err());
        assert!(fps(10, -1.0).is_err());
    }
}
