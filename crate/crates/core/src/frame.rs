//! Raster frames and the integral image used for constant-time window
//! means.

use crate::rng::RandStream;
use crate::types::BoundingBox;

/// An RGB8 frame stored as row-major interleaved bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterFrame {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl RasterFrame {
    pub fn filled(width: usize, height: usize, color: [u8; 3]) -> Self {
        let mut data = Vec::with_capacity(width * height * 3);
        for _ in 0..width * height {
            data.extend_from_slice(&color);
        }
        Self { width, height, data }
    }

    pub fn from_bytes(width: usize, height: usize, data: Vec<u8>) -> Option<Self> {
        if data.len() != width * height * 3 {
            return None;
        }
        Some(Self { width, height, data })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.data
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub fn paint_rect(&mut self, rect: &PixelRect, color: [u8; 3]) {
        for y in rect.y0..rect.y1 {
            let row = y * self.width;
            for x in rect.x0..rect.x1 {
                let i = (row + x) * 3;
                self.data[i..i + 3].copy_from_slice(&color);
            }
        }
    }

    /// Adds per-pixel Gaussian noise to every channel, drawing in row-major
    /// order from the given stream. Values are rounded and clamped to the
    /// byte range.
    pub fn add_noise(&mut self, sigma: f64, stream: &mut RandStream) {
        if sigma <= 0.0 {
            return;
        }
        for v in &mut self.data {
            let noisy = *v as f64 + stream.gaussian(sigma);
            *v = noisy.round().clamp(0.0, 255.0) as u8;
        }
    }
}

/// Half-open pixel rectangle `[x0, x1) x [y0, y1)`, already clipped to the
/// frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PixelRect {
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
}

impl PixelRect {
    pub fn pixel_count(&self) -> usize {
        (self.x1 - self.x0) * (self.y1 - self.y0)
    }
}

/// Rasterizes a center-format box to pixel indices, clipping to the frame.
/// Returns `None` when no pixel remains. Painter and observer share this
/// so a window placed exactly on a painted box covers exactly its pixels.
pub fn box_to_pixel_rect(bb: &BoundingBox, width: usize, height: usize) -> Option<PixelRect> {
    let x0 = bb.left().round() as i64;
    let x1 = bb.right().round() as i64;
    let y0 = bb.top().round() as i64;
    let y1 = bb.bottom().round() as i64;
    let x0 = x0.max(0) as usize;
    let y0 = y0.max(0) as usize;
    let x1 = x1.min(width as i64).max(0) as usize;
    let y1 = y1.min(height as i64).max(0) as usize;
    if x0 >= x1 || y0 >= y1 {
        return None;
    }
    Some(PixelRect { x0, y0, x1, y1 })
}

/// Per-channel prefix sums over a frame; any rectangular sum costs four
/// lookups per channel.
#[derive(Debug, Clone)]
pub struct IntegralImage {
    width: usize,
    height: usize,
    // (width + 1) * (height + 1) entries per channel, row-major.
    sums: [Vec<u64>; 3],
}

impl IntegralImage {
    pub fn from_frame(frame: &RasterFrame) -> Self {
        let w = frame.width();
        let h = frame.height();
        let stride = w + 1;
        let mut sums = [
            vec![0u64; stride * (h + 1)],
            vec![0u64; stride * (h + 1)],
            vec![0u64; stride * (h + 1)],
        ];
        let bytes = frame.as_bytes();
        for y in 0..h {
            let mut row_acc = [0u64; 3];
            for x in 0..w {
                let i = (y * w + x) * 3;
                for c in 0..3 {
                    row_acc[c] += bytes[i + c] as u64;
                    sums[c][(y + 1) * stride + (x + 1)] = sums[c][y * stride + (x + 1)] + row_acc[c];
                }
            }
        }
        Self { width: w, height: h, sums }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn sum_rect(&self, rect: &PixelRect) -> [u64; 3] {
        let stride = self.width + 1;
        let mut out = [0u64; 3];
        for c in 0..3 {
            let s = &self.sums[c];
            out[c] = s[rect.y1 * stride + rect.x1] + s[rect.y0 * stride + rect.x0]
                - s[rect.y0 * stride + rect.x1]
                - s[rect.y1 * stride + rect.x0];
        }
        out
    }

    /// Mean color over a non-empty rectangle.
    pub fn mean_rect(&self, rect: &PixelRect) -> [f64; 3] {
        let n = rect.pixel_count() as f64;
        let s = self.sum_rect(rect);
        [s[0] as f64 / n, s[1] as f64 / n, s[2] as f64 / n]
    }
}
