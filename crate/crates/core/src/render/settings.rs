use serde::{Deserialize, Serialize};

use super::RenderError;

/// Pixel rectangle `[x0, x1) x [y0, y1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CropWindow {
    pub x0: u32,
    pub y0: u32,
    pub x1: u32,
    pub y1: u32,
}

impl CropWindow {
    pub fn full(width: u32, height: u32) -> Self {
        CropWindow {
            x0: 0,
            y0: 0,
            x1: width,
            y1: height,
        }
    }

    pub fn width(&self) -> u32 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> u32 {
        self.y1 - self.y0
    }

    pub fn contains(&self, x: u32, y: u32) -> bool {
        x >= self.x0 && x < self.x1 && y >= self.y0 && y < self.y1
    }

    /// Square window of half-size `half` around `(cx, cy)`, clipped to the
    /// image.
    pub fn around(cx: f64, cy: f64, half: f64, width: u32, height: u32) -> Self {
        let clip = |v: f64, hi: u32| v.floor().clamp(0.0, hi as f64) as u32;
        CropWindow {
            x0: clip(cx - half, width),
            y0: clip(cy - half, height),
            x1: clip(cx + half + 1.0, width),
            y1: clip(cy + half + 1.0, height),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RenderSettings {
    pub samples_per_pixel: u32,
    pub max_depth: u32,
    pub seed: u64,
    pub gamma: f64,
    /// Fail on the first non-finite sample instead of clamping it.
    pub strict: bool,
    pub crop: Option<CropWindow>,
}

impl Default for RenderSettings {
    fn default() -> Self {
        RenderSettings {
            samples_per_pixel: 256,
            max_depth: 16,
            seed: 1,
            gamma: 2.2,
            strict: false,
            crop: None,
        }
    }
}

pub const MIN_DEPTH: u32 = 5;

impl RenderSettings {
    pub fn validate(&self) -> Result<(), RenderError> {
        if self.samples_per_pixel == 0 {
            return Err(RenderError::InvalidSettings(
                "samples_per_pixel must be at least 1".into(),
            ));
        }
        if self.max_depth < MIN_DEPTH {
            return Err(RenderError::InvalidSettings(format!(
                "max_depth must be at least {MIN_DEPTH}, got {}",
                self.max_depth
            )));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(RenderError::InvalidSettings(format!(
                "gamma must be positive, got {}",
                self.gamma
            )));
        }
        if let Some(c) = self.crop {
            if c.x1 <= c.x0 || c.y1 <= c.y0 {
                return Err(RenderError::InvalidSettings("crop window is empty".into()));
            }
        }
        Ok(())
    }
}
