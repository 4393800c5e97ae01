//! Shared domain types: target states, bounding boxes, particles, swarms,
//! and search-bound handling.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Position (and optional box extent) of a tracked target in frame
/// coordinates. Two layouts are used: `[x, y]` for center tracking with a
/// fixed box extent, and `[x, y, w, h]` when box mode is enabled.
///
/// Optimizer benchmarks reuse the same type for arbitrary-dimension search
/// points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TargetState {
    coords: Vec<f64>,
}

impl TargetState {
    /// State from raw coordinates. No validation; callers that enter the
    /// domain from outside should use [`TargetState::center`] or
    /// [`TargetState::boxed`].
    pub fn from_coords(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    /// 2-D center state.
    pub fn center(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite()) {
            return Err(Error::InvalidConfig(format!("non-finite state ({x}, {y})")));
        }
        Ok(Self { coords: vec![x, y] })
    }

    /// 4-D center-plus-extent state. Extent must be strictly positive.
    pub fn boxed(x: f64, y: f64, w: f64, h: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && w.is_finite() && h.is_finite()) {
            return Err(Error::InvalidConfig(format!("non-finite state ({x}, {y}, {w}, {h})")));
        }
        if w <= 0.0 || h <= 0.0 {
            return Err(Error::InvalidConfig(format!("box extent must be positive, got {w}x{h}")));
        }
        Ok(Self { coords: vec![x, y, w, h] })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn x(&self) -> f64 {
        self.coords[0]
    }

    pub fn y(&self) -> f64 {
        self.coords[1]
    }

    /// `(w, h)` when the state carries a box extent.
    pub fn extent(&self) -> Option<(f64, f64)> {
        if self.coords.len() >= 4 {
            Some((self.coords[2], self.coords[3]))
        } else {
            None
        }
    }

    pub fn coord(&self, d: usize) -> f64 {
        self.coords[d]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.coords
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }
}

/// Axis-aligned box in center format.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub cx: f64,
    pub cy: f64,
    pub w: f64,
    pub h: f64,
}

impl BoundingBox {
    pub fn new(cx: f64, cy: f64, w: f64, h: f64) -> Result<Self> {
        if w < 0.0 || h < 0.0 {
            return Err(Error::InvalidConfig(format!("box extent must be non-negative, got {w}x{h}")));
        }
        Ok(Self { cx, cy, w, h })
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    pub fn left(&self) -> f64 {
        self.cx - self.w / 2.0
    }

    pub fn right(&self) -> f64 {
        self.cx + self.w / 2.0
    }

    pub fn top(&self) -> f64 {
        self.cy - self.h / 2.0
    }

    pub fn bottom(&self) -> f64 {
        self.cy + self.h / 2.0
    }

    pub fn center(&self) -> (f64, f64) {
        (self.cx, self.cy)
    }
}

/// A candidate target state carrying an importance weight and the
/// optimizer's bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    pub state: TargetState,
    /// Per-dimension velocity; only PSO uses it.
    pub velocity: Vec<f64>,
    /// Normalized importance weight.
    pub weight: f64,
    /// Cost of `state` under the most recent cost evaluation.
    pub cost: f64,
    pub personal_best: TargetState,
    pub personal_best_cost: f64,
}

impl Particle {
    pub fn new(state: TargetState) -> Self {
        let dim = state.dim();
        Self {
            personal_best: state.clone(),
            state,
            velocity: vec![0.0; dim],
            weight: 0.0,
            cost: f64::INFINITY,
            personal_best_cost: f64::INFINITY,
        }
    }
}

/// The particle population plus global best and iteration state.
#[derive(Debug, Clone, PartialEq)]
pub struct Swarm {
    pub particles: Vec<Particle>,
    pub global_best: TargetState,
    pub global_best_cost: f64,
    pub iteration: usize,
}

impl Swarm {
    /// Swarm over the given states with uniform weights and unevaluated
    /// costs.
    pub fn from_states(states: Vec<TargetState>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::EmptySwarm);
        }
        let n = states.len();
        let w = 1.0 / n as f64;
        let global_best = states[0].clone();
        let mut particles: Vec<Particle> = states.into_iter().map(Particle::new).collect();
        for p in &mut particles {
            p.weight = w;
        }
        Ok(Self {
            particles,
            global_best,
            global_best_cost: f64::INFINITY,
            iteration: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.particles[0].state.dim()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.particles.iter().map(|p| p.weight).collect()
    }

    pub fn set_uniform_weights(&mut self) {
        let w = 1.0 / self.particles.len() as f64;
        for p in &mut self.particles {
            p.weight = w;
        }
    }

    /// Recomputes the global best as the minimum personal best, scanning in
    /// index order so ties resolve to the lowest index.
    pub fn refresh_global_best(&mut self) {
        let mut best_idx = 0;
        let mut best_cost = self.particles[0].personal_best_cost;
        for (i, p) in self.particles.iter().enumerate().skip(1) {
            if p.personal_best_cost < best_cost {
                best_cost = p.personal_best_cost;
                best_idx = i;
            }
        }
        self.global_best = self.particles[best_idx].personal_best.clone();
        self.global_best_cost = best_cost;
    }
}

/// Per-dimension search intervals. Construction rejects malformed
/// intervals, so a `Bounds` value is always well-formed.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    intervals: Vec<[f64; 2]>,
}

impl Bounds {
    pub fn new(intervals: Vec<[f64; 2]>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::InvalidConfig("bounds must cover at least one dimension".into()));
        }
        for (dim, [lo, hi]) in intervals.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
                return Err(Error::InvalidBounds { dim, lo: *lo, hi: *hi });
            }
        }
        Ok(Self { intervals })
    }

    pub fn dim(&self) -> usize {
        self.intervals.len()
    }

    pub fn interval(&self, d: usize) -> [f64; 2] {
        self.intervals[d]
    }

    pub fn clamp_value(&self, d: usize, x: f64) -> f64 {
        let [lo, hi] = self.intervals[d];
        x.clamp(lo, hi)
    }

    /// Clamps a state in place.
    pub fn clamp_in_place(&self, state: &mut TargetState) {
        for (d, x) in state.as_mut_slice().iter_mut().enumerate() {
            let [lo, hi] = self.intervals[d];
            *x = x.clamp(lo, hi);
        }
    }
}

/// Projects each coordinate of `s` into its interval. In-bounds input is
/// returned unchanged.
pub fn clamp_state(s: &TargetState, bounds: &Bounds) -> Result<TargetState> {
    if s.dim() != bounds.dim() {
        return Err(Error::DimensionMismatch {
            expected: bounds.dim(),
            got: s.dim(),
        });
    }
    let mut out = s.clone();
    bounds.clamp_in_place(&mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_box_bounds() -> Bounds {
        Bounds::new(vec![[0.0, 10.0], [0.0, 10.0]]).unwrap()
    }

    #[test]
    fn clamp_projects_low_coordinate() {
        let s = TargetState::from_coords(vec![-5.0, 3.0]);
        let c = clamp_state(&s, &unit_box_bounds()).unwrap();
        assert_eq!(c.as_slice(), &[0.0, 3.0]);
    }

    #[test]
    fn clamp_leaves_interior_point_unchanged() {
        let s = TargetState::from_coords(vec![4.0, 4.0]);
        let c = clamp_state(&s, &unit_box_bounds()).unwrap();
        assert_eq!(c, s);
    }

    #[test]
    fn clamp_projects_both_edges() {
        let s = TargetState::from_coords(vec![12.0, -1.0]);
        let c = clamp_state(&s, &unit_box_bounds()).unwrap();
        assert_eq!(c.as_slice(), &[10.0, 0.0]);
    }

    #[test]
    fn clamp_is_idempotent() {
        let b = unit_box_bounds();
        for coords in [[-3.0, 20.0], [5.0, 5.0], [10.0, 0.0], [-0.0, 10.5]] {
            let s = TargetState::from_coords(coords.to_vec());
            let once = clamp_state(&s, &b).unwrap();
            let twice = clamp_state(&once, &b).unwrap();
            assert_eq!(once, twice);
        }
    }

    #[test]
    fn malformed_bounds_rejected() {
        assert!(Bounds::new(vec![[1.0, 1.0]]).is_err());
        assert!(Bounds::new(vec![[2.0, 1.0]]).is_err());
        assert!(Bounds::new(vec![[0.0, f64::INFINITY]]).is_err());
    }

    #[test]
    fn clamp_dimension_mismatch_rejected() {
        let s = TargetState::from_coords(vec![1.0, 2.0, 3.0]);
        assert!(clamp_state(&s, &unit_box_bounds()).is_err());
    }

    #[test]
    fn boxed_state_requires_positive_extent() {
        assert!(TargetState::boxed(1.0, 2.0, 0.0, 5.0).is_err());
        assert!(TargetState::boxed(1.0, 2.0, 3.0, -1.0).is_err());
        let s = TargetState::boxed(1.0, 2.0, 3.0, 4.0).unwrap();
        assert_eq!(s.extent(), Some((3.0, 4.0)));
    }

    #[test]
    fn empty_swarm_rejected() {
        assert!(Swarm::from_states(vec![]).is_err());
    }

    #[test]
    fn refresh_global_best_takes_minimum_in_index_order() {
        let states = vec![
            TargetState::center(0.0, 0.0).unwrap(),
            TargetState::center(1.0, 1.0).unwrap(),
            TargetState::center(2.0, 2.0).unwrap(),
        ];
        let mut swarm = Swarm::from_states(states).unwrap();
        swarm.particles[0].personal_best_cost = 5.0;
        swarm.particles[1].personal_best_cost = 2.0;
        swarm.particles[2].personal_best_cost = 2.0;
        swarm.refresh_global_best();
        assert_eq!(swarm.global_best_cost, 2.0);
        assert_eq!(swarm.global_best, swarm.particles[1].personal_best);
    }
}
