//! Tracker configuration with published defaults.
//!
//! Every field is optional in the configuration file; omitted fields take
//! the defaults below. Unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::Bounds;

/// Which observation model scores particle states. `None` selects the
/// model matching the sequence mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservationKind {
    /// Gaussian likelihood of a noisy position measurement.
    Point,
    /// Mean-color patch likelihood against a reference patch.
    Color,
}

impl ObservationKind {
    pub fn name(&self) -> &'static str {
        match self {
            ObservationKind::Point => "point",
            ObservationKind::Color => "color",
        }
    }
}

/// Tracker and optimizer parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrackerConfig {
    /// Swarm/particle population size.
    pub population: usize,
    /// PSO cognitive acceleration constant.
    pub c1: f64,
    /// PSO social acceleration constant.
    pub c2: f64,
    /// PSO inertia weight.
    pub omega: f64,
    /// Maximum in-frame optimizer iterations.
    pub t_max: usize,
    /// Initial annealing temperature.
    pub t0: f64,
    /// Contraction-expansion coefficient at the start of a run.
    pub beta_hi: f64,
    /// Contraction-expansion coefficient at the end of a run.
    pub beta_lo: f64,
    /// Fraction of the peak fitness that terminates in-frame optimization.
    pub fitness_stop_fraction: f64,
    /// Per-dimension motion diffusion variances.
    pub motion_diffusion: Vec<f64>,
    /// Per-dimension `[lo, hi]` search bounds; `None` derives bounds from
    /// the sequence frame size.
    pub search_bounds: Option<Vec<[f64; 2]>>,
    pub seed: u64,
    /// Resample when `N_eff` falls below this fraction of the population.
    pub ess_threshold_fraction: f64,
    /// Rank-weight upper bound for the weighted mean best.
    pub alpha_max: f64,
    /// Rank-weight lower bound for the weighted mean best.
    pub alpha_min: f64,
    /// Track `[x, y, w, h]` instead of a fixed-extent center.
    pub box_mode: bool,
    /// Pair the largest sorted velocity weight with the most recent
    /// velocity instead of the literal ascending pairing.
    pub pair_descending: bool,
    /// Divide by the particle count outside the square root in the
    /// per-frame swarm error.
    pub rmse_literal: bool,
    /// Per-channel color variances for the patch likelihood.
    pub color_variance: [f64; 3],
    /// Per-dimension variances for the point observation model; `None`
    /// derives them from the sequence's measurement noise.
    pub observation_variance: Option<Vec<f64>>,
    /// Observation model override.
    pub observation: Option<ObservationKind>,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        Self {
            population: 300,
            c1: 2.05,
            c2: 2.05,
            omega: 0.5,
            t_max: 50,
            t0: 100.0,
            beta_hi: 0.9,
            beta_lo: 0.5,
            fitness_stop_fraction: 0.95,
            motion_diffusion: vec![4.0, 4.0],
            search_bounds: None,
            seed: 0,
            ess_threshold_fraction: 0.5,
            alpha_max: 1.5,
            alpha_min: 0.5,
            box_mode: false,
            pair_descending: false,
            rmse_literal: false,
            color_variance: [64.0, 64.0, 64.0],
            observation_variance: None,
            observation: None,
        }
    }
}

impl TrackerConfig {
    /// Parses a TOML configuration. Unknown keys are rejected.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: TrackerConfig = toml::from_str(text).map_err(|e| Error::Parse {
            path: "<config>".into(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: TrackerConfig = toml::from_str(&text).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.population == 0 {
            return Err(Error::InvalidConfig("population must be positive".into()));
        }
        if self.t_max == 0 {
            return Err(Error::InvalidConfig("t_max must be positive".into()));
        }
        if !(self.t0 > 0.0) {
            return Err(Error::InvalidConfig("t0 must be positive".into()));
        }
        if !(self.beta_hi > self.beta_lo) {
            return Err(Error::InvalidConfig(format!(
                "beta_hi ({}) must exceed beta_lo ({})",
                self.beta_hi, self.beta_lo
            )));
        }
        if !(self.fitness_stop_fraction > 0.0 && self.fitness_stop_fraction <= 1.0) {
            return Err(Error::InvalidConfig("fitness_stop_fraction must be in (0, 1]".into()));
        }
        if !(self.ess_threshold_fraction > 0.0 && self.ess_threshold_fraction <= 1.0) {
            return Err(Error::InvalidConfig("ess_threshold_fraction must be in (0, 1]".into()));
        }
        if self.motion_diffusion.is_empty() || self.motion_diffusion.iter().any(|v| !(*v >= 0.0)) {
            return Err(Error::InvalidConfig("motion_diffusion variances must be >= 0".into()));
        }
        if !(self.alpha_min > 0.0 && self.alpha_max >= self.alpha_min) {
            return Err(Error::InvalidConfig("require alpha_max >= alpha_min > 0".into()));
        }
        if self.color_variance.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::InvalidConfig("color_variance entries must be positive".into()));
        }
        if let Some(vars) = &self.observation_variance {
            if vars.is_empty() || vars.iter().any(|v| !(*v > 0.0)) {
                return Err(Error::InvalidConfig("observation_variance entries must be positive".into()));
            }
        }
        if let Some(bounds) = &self.search_bounds {
            Bounds::new(bounds.clone())?;
        }
        Ok(())
    }

    /// Tracked state dimension under this configuration.
    pub fn state_dim(&self) -> usize {
        if self.box_mode {
            4
        } else {
            2
        }
    }

    /// Motion diffusion variances extended to the tracked dimension.
    /// A 2-entry vector in box mode gains slow extent diffusion.
    pub fn diffusion_for_dim(&self, dim: usize) -> Result<Vec<f64>> {
        if self.motion_diffusion.len() == dim {
            return Ok(self.motion_diffusion.clone());
        }
        if dim == 4 && self.motion_diffusion.len() == 2 {
            let mut v = self.motion_diffusion.clone();
            v.extend_from_slice(&[0.25, 0.25]);
            return Ok(v);
        }
        Err(Error::InvalidConfig(format!(
            "motion_diffusion has {} entries, tracked state has {dim} dimensions",
            self.motion_diffusion.len()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_published_values() {
        let cfg = TrackerConfig::default();
        assert_eq!(cfg.population, 300);
        assert_eq!(cfg.c1, 2.05);
        assert_eq!(cfg.c2, 2.05);
        assert_eq!(cfg.omega, 0.5);
        assert_eq!(cfg.t_max, 50);
        assert_eq!(cfg.t0, 100.0);
        assert_eq!(cfg.beta_hi, 0.9);
        assert_eq!(cfg.beta_lo, 0.5);
        assert_eq!(cfg.fitness_stop_fraction, 0.95);
        assert_eq!(cfg.ess_threshold_fraction, 0.5);
    }

    #[test]
    fn empty_config_round_trips_defaults() {
        let cfg = TrackerConfig::from_toml_str("").unwrap();
        assert_eq!(cfg, TrackerConfig::default());
    }

    #[test]
    fn partial_overrides_keep_remaining_defaults() {
        let cfg = TrackerConfig::from_toml_str("population = 50\nseed = 9\n").unwrap();
        assert_eq!(cfg.population, 50);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.c1, 2.05);
        assert_eq!(cfg.t_max, 50);
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = TrackerConfig::from_toml_str("popullation = 50\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "got {err:?}");
    }

    #[test]
    fn invalid_beta_order_rejected() {
        let err = TrackerConfig::from_toml_str("beta_hi = 0.4\nbeta_lo = 0.5\n").unwrap_err();
        assert!(matches!(err, Error::InvalidConfig(_)));
    }

    #[test]
    fn invalid_search_bounds_rejected() {
        let err = TrackerConfig::from_toml_str("search_bounds = [[10.0, 0.0]]\n").unwrap_err();
        assert!(matches!(err, Error::InvalidBounds { .. }));
    }

    #[test]
    fn diffusion_extension_for_box_mode() {
        let cfg = TrackerConfig::default();
        assert_eq!(cfg.diffusion_for_dim(2).unwrap(), vec![4.0, 4.0]);
        assert_eq!(cfg.diffusion_for_dim(4).unwrap(), vec![4.0, 4.0, 0.25, 0.25]);
        assert!(cfg.diffusion_for_dim(3).is_err());
    }
}
