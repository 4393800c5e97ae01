//! Deterministic synthetic sequence generator with exact ground truth.
//!
//! Each scenario scripts a target path (and, depending on the kind, a
//! crossing distractor, an occlusion interval, or a scale ramp), renders
//! it either as RGB8 raster frames or as noisy point observations, and
//! carries the true box per frame as ground truth.

use std::fmt;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{box_to_pixel_rect, RasterFrame};
use crate::rng::{RandStream, StreamPurpose};
use crate::types::BoundingBox;

pub const SEQUENCE_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    ConstantVelocity,
    Sinusoidal,
    AbruptTurn,
    DistractorCross,
    Occlusion,
    ScaleChange,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 6] = [
        ScenarioKind::ConstantVelocity,
        ScenarioKind::Sinusoidal,
        ScenarioKind::AbruptTurn,
        ScenarioKind::DistractorCross,
        ScenarioKind::Occlusion,
        ScenarioKind::ScaleChange,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::ConstantVelocity => "constant_velocity",
            ScenarioKind::Sinusoidal => "sinusoidal",
            ScenarioKind::AbruptTurn => "abrupt_turn",
            ScenarioKind::DistractorCross => "distractor_cross",
            ScenarioKind::Occlusion => "occlusion",
            ScenarioKind::ScaleChange => "scale_change",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant_velocity" => Ok(ScenarioKind::ConstantVelocity),
            "sinusoidal" => Ok(ScenarioKind::Sinusoidal),
            "abrupt_turn" => Ok(ScenarioKind::AbruptTurn),
            "distractor_cross" => Ok(ScenarioKind::DistractorCross),
            "occlusion" => Ok(ScenarioKind::Occlusion),
            "scale_change" => Ok(ScenarioKind::ScaleChange),
            other => Err(Error::InvalidScenario(format!(
                "unknown scenario kind '{other}'; expected one of: constant_velocity, sinusoidal, abrupt_turn, distractor_cross, occlusion, scale_change"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceMode {
    Raster,
    Point,
}

impl SequenceMode {
    pub fn name(&self) -> &'static str {
        match self {
            SequenceMode::Raster => "raster",
            SequenceMode::Point => "point",
        }
    }
}

impl FromStr for SequenceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raster" => Ok(SequenceMode::Raster),
            "point" => Ok(SequenceMode::Point),
            other => Err(Error::InvalidScenario(format!(
                "unknown sequence mode '{other}'; expected raster or point"
            ))),
        }
    }
}

/// Scenario parameters. `Scenario::new` fills kind-appropriate defaults;
/// fields are public for targeted overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub frame_count: usize,
    pub frame_size: (usize, usize),
    pub mode: SequenceMode,
    pub target_color: [u8; 3],
    pub background_color: [u8; 3],
    pub distractor_color: [u8; 3],
    pub occluder_color: [u8; 3],
    /// Raster mode: per-pixel Gaussian noise. Point mode: measurement
    /// noise on the emitted center.
    pub pixel_noise_sigma: f64,
    /// Frame index parameterizing the scenario's event (turn, crossing, or
    /// occlusion onset). `None` defaults to the middle of the sequence.
    pub event_frame: Option<usize>,
    pub seed: u64,
}

impl Scenario {
    pub fn new(kind: ScenarioKind, frame_count: usize, seed: u64) -> Self {
        Self {
            kind,
            frame_count,
            frame_size: (480, 360),
            mode: SequenceMode::Raster,
            target_color: [200, 60, 50],
            background_color: [70, 70, 70],
            distractor_color: [192, 68, 56],
            occluder_color: [115, 115, 115],
            pixel_noise_sigma: 6.0,
            event_frame: None,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.frame_count < 2 {
            return Err(Error::InvalidScenario(format!(
                "frame_count must be at least 2, got {}",
                self.frame_count
            )));
        }
        if self.frame_size.0 < 32 || self.frame_size.1 < 32 {
            return Err(Error::InvalidScenario("frame_size must be at least 32x32".into()));
        }
        if !(self.pixel_noise_sigma >= 0.0) {
            return Err(Error::InvalidScenario("pixel_noise_sigma must be >= 0".into()));
        }
        if let Some(e) = self.event_frame {
            if e >= self.frame_count {
                return Err(Error::InvalidScenario(format!(
                    "event_frame {e} outside [0, {})",
                    self.frame_count
                )));
            }
        }
        Ok(())
    }

    pub fn event(&self) -> usize {
        self.event_frame.unwrap_or(self.frame_count / 2)
    }

    /// Occlusion interval `[start, end)` for the occlusion scenario.
    pub fn occlusion_span(&self) -> (usize, usize) {
        let start = self.event();
        let len = (self.frame_count / 15).max(5);
        (start, (start + len).min(self.frame_count))
    }
}

/// Scripted paths for one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub target: Vec<BoundingBox>,
    pub distractor: Option<Vec<BoundingBox>>,
    /// Frames in `[start, end)` hide the target behind the occluder.
    pub occluded: Option<(usize, usize)>,
}

const TARGET_W: f64 = 28.0;
const TARGET_H: f64 = 40.0;

fn linear_path(start: (f64, f64), v: (f64, f64), frames: usize) -> Vec<(f64, f64)> {
    (0..frames)
        .map(|t| (start.0 + v.0 * t as f64, start.1 + v.1 * t as f64))
        .collect()
}

/// Piecewise-linear path that switches velocity at the event frame.
fn turn_path(start: (f64, f64), v1: (f64, f64), v2: (f64, f64), event: usize, frames: usize) -> Vec<(f64, f64)> {
    (0..frames)
        .map(|t| {
            if t <= event {
                (start.0 + v1.0 * t as f64, start.1 + v1.1 * t as f64)
            } else {
                let dt = (t - event) as f64;
                let pivot = (start.0 + v1.0 * event as f64, start.1 + v1.1 * event as f64);
                (pivot.0 + v2.0 * dt, pivot.1 + v2.1 * dt)
            }
        })
        .collect()
}

/// Deterministic scripted center path and extent per frame.
pub fn generate_trajectory(scenario: &Scenario) -> Result<Trajectory> {
    scenario.validate()?;
    let frames = scenario.frame_count;
    let event = scenario.event();

    let mut distractor = None;
    let mut occluded = None;

    let (centers, extents): (Vec<(f64, f64)>, Vec<(f64, f64)>) = match scenario.kind {
        ScenarioKind::ConstantVelocity => {
            let c = linear_path((60.0, 120.0), (1.2, 0.3), frames);
            (c, vec![(TARGET_W, TARGET_H); frames])
        }
        ScenarioKind::Sinusoidal => {
            let c = (0..frames)
                .map(|t| {
                    let t = t as f64;
                    (60.0 + 1.2 * t, 180.0 + 50.0 * (std::f64::consts::TAU * t / 60.0).sin())
                })
                .collect();
            (c, vec![(TARGET_W, TARGET_H); frames])
        }
        ScenarioKind::AbruptTurn => {
            let v = (1.8, 0.2);
            let c = turn_path((60.0, 180.0), v, (-v.0, -v.1), event, frames);
            (c, vec![(TARGET_W, TARGET_H); frames])
        }
        ScenarioKind::DistractorCross => {
            let v1 = (1.7, 0.5);
            let v2 = (-1.8, -1.1);
            let c = turn_path((50.0, 120.0), v1, v2, event, frames);
            // The distractor rides the target's pre-event line at 2.5x the
            // speed: it trails, coincides exactly at the event frame, then
            // pulls ahead along the old direction while the target turns
            // away faster than diffusion alone can follow.
            let cross = c[event];
            let vd = (2.5 * v1.0, 2.5 * v1.1);
            let d: Vec<BoundingBox> = (0..frames)
                .map(|t| {
                    let dt = t as f64 - event as f64;
                    BoundingBox {
                        cx: cross.0 + vd.0 * dt,
                        cy: cross.1 + vd.1 * dt,
                        w: TARGET_W,
                        h: TARGET_H,
                    }
                })
                .collect();
            distractor = Some(d);
            (c, vec![(TARGET_W, TARGET_H); frames])
        }
        ScenarioKind::Occlusion => {
            let c = linear_path((60.0, 150.0), (1.3, 0.4), frames);
            occluded = Some(scenario.occlusion_span());
            (c, vec![(TARGET_W, TARGET_H); frames])
        }
        ScenarioKind::ScaleChange => {
            let c = linear_path((70.0, 140.0), (1.2, 0.35), frames);
            let e = (0..frames)
                .map(|t| {
                    let s = 1.0 + 0.8 * t as f64 / (frames - 1) as f64;
                    (TARGET_W * s, TARGET_H * s)
                })
                .collect();
            (c, e)
        }
    };

    let target: Vec<BoundingBox> = centers
        .iter()
        .zip(extents.iter())
        .map(|(&(cx, cy), &(w, h))| BoundingBox { cx, cy, w, h })
        .collect();

    let (fw, fh) = (scenario.frame_size.0 as f64, scenario.frame_size.1 as f64);
    for (t, bb) in target.iter().enumerate() {
        if bb.left() < 0.0 || bb.top() < 0.0 || bb.right() > fw || bb.bottom() > fh {
            return Err(Error::InvalidScenario(format!(
                "target box escapes the {fw}x{fh} frame at frame {t}: center ({}, {}), extent {}x{}",
                bb.cx, bb.cy, bb.w, bb.h
            )));
        }
    }

    Ok(Trajectory { target, distractor, occluded })
}

/// Per-frame data: raster frames or point observations.
#[derive(Debug, Clone, PartialEq)]
pub enum FrameData {
    Raster(Vec<RasterFrame>),
    Points(Vec<[f64; 2]>),
}

/// Ordered frames with per-frame ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct Sequence {
    pub width: usize,
    pub height: usize,
    pub frames: FrameData,
    pub ground_truth: Vec<BoundingBox>,
    pub scenario: Scenario,
}

impl Sequence {
    pub fn frame_count(&self) -> usize {
        self.ground_truth.len()
    }

    pub fn mode(&self) -> SequenceMode {
        match self.frames {
            FrameData::Raster(_) => SequenceMode::Raster,
            FrameData::Points(_) => SequenceMode::Point,
        }
    }
}

/// Renders the scripted trajectory. Raster mode paints background, target,
/// distractor, then the occluder over the target, and finally adds seeded
/// per-pixel noise. Point mode emits the true center plus Gaussian
/// measurement noise. Ground truth always carries the true (unoccluded)
/// box.
pub fn render_sequence(scenario: &Scenario, trajectory: &Trajectory) -> Sequence {
    let (w, h) = scenario.frame_size;
    let frames = match scenario.mode {
        SequenceMode::Raster => {
            let mut out = Vec::with_capacity(scenario.frame_count);
            for (t, bb) in trajectory.target.iter().enumerate() {
                let mut frame = RasterFrame::filled(w, h, scenario.background_color);
                if let Some(rect) = box_to_pixel_rect(bb, w, h) {
                    frame.paint_rect(&rect, scenario.target_color);
                }
                if let Some(d) = &trajectory.distractor {
                    if let Some(rect) = box_to_pixel_rect(&d[t], w, h) {
                        frame.paint_rect(&rect, scenario.distractor_color);
                    }
                }
                if let Some((start, end)) = trajectory.occluded {
                    if t >= start && t < end {
                        if let Some(rect) = box_to_pixel_rect(bb, w, h) {
                            frame.paint_rect(&rect, scenario.occluder_color);
                        }
                    }
                }
                let mut stream =
                    RandStream::for_purpose(scenario.seed, StreamPurpose::PixelNoise, t, 0);
                frame.add_noise(scenario.pixel_noise_sigma, &mut stream);
                out.push(frame);
            }
            FrameData::Raster(out)
        }
        SequenceMode::Point => {
            let mut out = Vec::with_capacity(scenario.frame_count);
            for (t, bb) in trajectory.target.iter().enumerate() {
                let mut stream =
                    RandStream::for_purpose(scenario.seed, StreamPurpose::Measurement, t, 0);
                let ox = bb.cx + stream.gaussian(scenario.pixel_noise_sigma);
                let oy = bb.cy + stream.gaussian(scenario.pixel_noise_sigma);
                out.push([ox, oy]);
            }
            FrameData::Points(out)
        }
    };
    Sequence {
        width: w,
        height: h,
        frames,
        ground_truth: trajectory.target.clone(),
        scenario: scenario.clone(),
    }
}

/// Generates and renders a scenario.
pub fn simulate(scenario: &Scenario) -> Result<Sequence> {
    let trajectory = generate_trajectory(scenario)?;
    Ok(render_sequence(scenario, &trajectory))
}

#[derive(Debug, Serialize, Deserialize)]
struct SequenceManifest {
    schema_version: u32,
    mode: SequenceMode,
    width: usize,
    height: usize,
    frame_count: usize,
    scenario: Scenario,
}

/// On-disk layout: `manifest.json`, `groundtruth.csv`
/// (`frame_index,cx,cy,w,h` per line), and either `frames.bin` (flat RGB8
/// rows, frames concatenated) or `observations.csv`
/// (`frame_index,ox,oy` per line).
pub fn write_sequence(sequence: &Sequence, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let manifest = SequenceManifest {
        schema_version: SEQUENCE_SCHEMA_VERSION,
        mode: sequence.mode(),
        width: sequence.width,
        height: sequence.height,
        frame_count: sequence.frame_count(),
        scenario: sequence.scenario.clone(),
    };
    let manifest_text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    std::fs::write(dir.join("manifest.json"), manifest_text + "\n")?;

    let mut gt = BufWriter::new(std::fs::File::create(dir.join("groundtruth.csv"))?);
    for (t, bb) in sequence.ground_truth.iter().enumerate() {
        writeln!(gt, "{},{},{},{},{}", t, bb.cx, bb.cy, bb.w, bb.h)?;
    }
    gt.flush()?;

    match &sequence.frames {
        FrameData::Raster(frames) => {
            let mut bin = BufWriter::new(std::fs::File::create(dir.join("frames.bin"))?);
            for frame in frames {
                bin.write_all(frame.as_bytes())?;
            }
            bin.flush()?;
        }
        FrameData::Points(points) => {
            let mut obs = BufWriter::new(std::fs::File::create(dir.join("observations.csv"))?);
            for (t, p) in points.iter().enumerate() {
                writeln!(obs, "{},{},{}", t, p[0], p[1])?;
            }
            obs.flush()?;
        }
    }
    Ok(())
}

fn parse_f64(field: &str, line: usize, file: &str) -> Result<f64> {
    field.parse().map_err(|_| {
        Error::SequenceFormat(format!("{file}: line {line}: invalid number '{field}'"))
    })
}

pub fn read_sequence(dir: &Path) -> Result<Sequence> {
    let manifest_path = dir.join("manifest.json");
    let manifest_text = std::fs::read_to_string(&manifest_path)?;
    let manifest: SequenceManifest = serde_json::from_str(&manifest_text).map_err(|e| Error::Parse {
        path: manifest_path.display().to_string(),
        message: e.to_string(),
    })?;
    if manifest.schema_version != SEQUENCE_SCHEMA_VERSION {
        return Err(Error::SequenceFormat(format!(
            "unsupported sequence schema version {}",
            manifest.schema_version
        )));
    }

    let gt_file = BufReader::new(std::fs::File::open(dir.join("groundtruth.csv"))?);
    let mut ground_truth = Vec::with_capacity(manifest.frame_count);
    for (i, line) in gt_file.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::SequenceFormat(format!(
                "groundtruth.csv: line {i}: expected 5 fields, got {}",
                fields.len()
            )));
        }
        ground_truth.push(BoundingBox {
            cx: parse_f64(fields[1], i, "groundtruth.csv")?,
            cy: parse_f64(fields[2], i, "groundtruth.csv")?,
            w: parse_f64(fields[3], i, "groundtruth.csv")?,
            h: parse_f64(fields[4], i, "groundtruth.csv")?,
        });
    }
    if ground_truth.len() != manifest.frame_count {
        return Err(Error::SequenceFormat(format!(
            "groundtruth.csv has {} records, manifest declares {}",
            ground_truth.len(),
            manifest.frame_count
        )));
    }

    let frames = match manifest.mode {
        SequenceMode::Raster => {
            let frame_bytes = manifest.width * manifest.height * 3;
            let mut raw = Vec::new();
            std::fs::File::open(dir.join("frames.bin"))?.read_to_end(&mut raw)?;
            if raw.len() != frame_bytes * manifest.frame_count {
                return Err(Error::SequenceFormat(format!(
                    "frames.bin holds {} bytes, expected {}",
                    raw.len(),
                    frame_bytes * manifest.frame_count
                )));
            }
            let frames = raw
                .chunks_exact(frame_bytes)
                .map(|chunk| {
                    RasterFrame::from_bytes(manifest.width, manifest.height, chunk.to_vec())
                        .expect("chunk size checked")
                })
                .collect();
            FrameData::Raster(frames)
        }
        SequenceMode::Point => {
            let obs_file = BufReader::new(std::fs::File::open(dir.join("observations.csv"))?);
            let mut points = Vec::with_capacity(manifest.frame_count);
            for (i, line) in obs_file.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let fields: Vec<&str> = line.split(',').collect();
                if fields.len() != 3 {
                    return Err(Error::SequenceFormat(format!(
                        "observations.csv: line {i}: expected 3 fields, got {}",
                        fields.len()
                    )));
                }
                points.push([
                    parse_f64(fields[1], i, "observations.csv")?,
                    parse_f64(fields[2], i, "observations.csv")?,
                ]);
            }
            if points.len() != manifest.frame_count {
                return Err(Error::SequenceFormat(format!(
                    "observations.csv has {} records, manifest declares {}",
                    points.len(),
                    manifest.frame_count
                )));
            }
            FrameData::Points(points)
        }
    };

    Ok(Sequence {
        width: manifest.width,
        height: manifest.height,
        frames,
        ground_truth,
        scenario: manifest.scenario,
    })
}
