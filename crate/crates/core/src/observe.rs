//! Likelihood models mapping a particle state to a fitness against the
//! current frame's observation.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::frame::{box_to_pixel_rect, IntegralImage, RasterFrame};
use crate::types::{BoundingBox, TargetState};

/// Diagonal-covariance Gaussian observation model over position
/// measurements.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianObservationModel {
    variances: Vec<f64>,
}

impl GaussianObservationModel {
    pub fn new(variances: Vec<f64>) -> Result<Self> {
        if variances.is_empty() || variances.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::InvalidConfig("observation variances must be positive".into()));
        }
        Ok(Self { variances })
    }

    pub fn n(&self) -> usize {
        self.variances.len()
    }

    pub fn variances(&self) -> &[f64] {
        &self.variances
    }

    /// Fitness value at zero distance.
    pub fn peak_fitness(&self) -> f64 {
        gaussian_fitness(0.0, &self.variances)
    }
}

/// Reference color patch for the color-cue likelihood.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorReference {
    /// Per-channel mean color of the reference patch, range 0-255.
    pub reference_color: [f64; 3],
    /// Window extent `(w, h)` in pixels.
    pub window: (f64, f64),
    /// Per-channel variances.
    pub variances: [f64; 3],
}

impl ColorReference {
    pub fn new(reference_color: [f64; 3], window: (f64, f64), variances: [f64; 3]) -> Result<Self> {
        if reference_color.iter().any(|c| !(0.0..=255.0).contains(c)) {
            return Err(Error::InvalidConfig("reference color channels must be in 0-255".into()));
        }
        if variances.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::InvalidConfig("color variances must be positive".into()));
        }
        if !(window.0 > 0.0 && window.1 > 0.0) {
            return Err(Error::InvalidConfig("reference window must have positive extent".into()));
        }
        Ok(Self { reference_color, window, variances })
    }

    /// Builds a reference from the annotated box in a frame: the window is
    /// the box extent and the reference color is its mean color.
    pub fn from_frame(frame: &RasterFrame, annotation: &BoundingBox, variances: [f64; 3]) -> Result<Self> {
        let rect = box_to_pixel_rect(annotation, frame.width(), frame.height()).ok_or_else(|| {
            Error::InvalidScenario("first-frame annotation lies outside the frame".into())
        })?;
        let integral = IntegralImage::from_frame(frame);
        let mean = integral.mean_rect(&rect);
        Self::new(mean, (annotation.w, annotation.h), variances)
    }

    pub fn peak_fitness(&self) -> f64 {
        gaussian_fitness(0.0, &self.variances)
    }
}

/// Diagonal Mahalanobis distance
/// `sqrt(sum_d (c_d - c_ref_d)^2 / var_d)`.
pub fn mahalanobis(c: &[f64], c_ref: &[f64], variances: &[f64]) -> Result<f64> {
    if c.len() != c_ref.len() || c.len() != variances.len() {
        return Err(Error::DimensionMismatch {
            expected: variances.len(),
            got: c.len(),
        });
    }
    let mut acc = 0.0;
    for ((a, b), v) in c.iter().zip(c_ref).zip(variances) {
        let d = a - b;
        acc += d * d / v;
    }
    Ok(acc.sqrt())
}

/// Gaussian fitness
/// `(2*pi)^(-n/2) * |Sigma|^(-1/2) * exp(-delta^2 / 2)` with `n` and the
/// determinant taken from the diagonal variances. Strictly decreasing in
/// `delta`, peaking at `delta = 0`.
pub fn gaussian_fitness(delta: f64, variances: &[f64]) -> f64 {
    let n = variances.len() as f64;
    let det: f64 = variances.iter().product();
    TAU.powf(-n / 2.0) * det.powf(-0.5) * (-delta * delta / 2.0).exp()
}

/// Gaussian likelihood of a noisy position measurement given a state.
pub fn point_likelihood(
    state: &TargetState,
    observation: &[f64],
    model: &GaussianObservationModel,
) -> Result<f64> {
    let n = model.n();
    if state.dim() < n || observation.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: observation.len().min(state.dim()),
        });
    }
    let position = &state.as_slice()[..n];
    let delta = mahalanobis(position, observation, model.variances())?;
    Ok(gaussian_fitness(delta, model.variances()))
}

fn state_window(state: &TargetState, reference: &ColorReference) -> BoundingBox {
    let (w, h) = state.extent().unwrap_or(reference.window);
    BoundingBox {
        cx: state.x(),
        cy: state.y(),
        w: w.max(0.0),
        h: h.max(0.0),
    }
}

/// Color-cue likelihood: mean color over the state's window (clipped to
/// the frame) scored against the reference. A window entirely outside the
/// frame scores zero.
pub fn color_patch_likelihood(state: &TargetState, frame: &RasterFrame, reference: &ColorReference) -> f64 {
    let window = state_window(state, reference);
    let Some(rect) = box_to_pixel_rect(&window, frame.width(), frame.height()) else {
        return 0.0;
    };
    let mut sums = [0u64; 3];
    for y in rect.y0..rect.y1 {
        for x in rect.x0..rect.x1 {
            let p = frame.pixel(x, y);
            for c in 0..3 {
                sums[c] += p[c] as u64;
            }
        }
    }
    let n = rect.pixel_count() as f64;
    let mean = [sums[0] as f64 / n, sums[1] as f64 / n, sums[2] as f64 / n];
    score_mean_color(&mean, reference)
}

/// Same likelihood computed from a precomputed integral image. Produces
/// bit-identical values to [`color_patch_likelihood`]: both divide the
/// same exact integer channel sums by the same pixel count.
pub fn color_patch_likelihood_integral(
    state: &TargetState,
    integral: &IntegralImage,
    reference: &ColorReference,
) -> f64 {
    let window = state_window(state, reference);
    let Some(rect) = box_to_pixel_rect(&window, integral.width(), integral.height()) else {
        return 0.0;
    };
    let mean = integral.mean_rect(&rect);
    score_mean_color(&mean, reference)
}

fn score_mean_color(mean: &[f64; 3], reference: &ColorReference) -> f64 {
    let delta = mahalanobis(mean, &reference.reference_color, &reference.variances)
        .expect("fixed 3-channel dimensions");
    gaussian_fitness(delta, &reference.variances)
}
