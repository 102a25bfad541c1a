use crate::color::Rgb;

use super::image::Image;
use super::settings::CropWindow;

/// Per-pixel radiance sums and sample counts.
#[derive(Debug, Clone, PartialEq)]
pub struct Film {
    pub width: u32,
    pub height: u32,
    sum: Vec<Rgb>,
    count: Vec<u32>,
}

impl Film {
    pub fn new(width: u32, height: u32) -> Self {
        let n = width as usize * height as usize;
        Film {
            width,
            height,
            sum: vec![Rgb::BLACK; n],
            count: vec![0; n],
        }
    }

    /// Adds a finite, non-negative sample.
    pub fn add(&mut self, x: u32, y: u32, radiance: Rgb) {
        debug_assert!(radiance.is_finite() && radiance.min_channel() >= 0.0);
        let i = y as usize * self.width as usize + x as usize;
        self.sum[i] += radiance;
        self.count[i] += 1;
    }

    /// Copies a finished tile of per-pixel sums into place.
    pub(crate) fn merge_tile(&mut self, tile: CropWindow, sums: &[Rgb], samples: u32) {
        let mut k = 0;
        for y in tile.y0..tile.y1 {
            for x in tile.x0..tile.x1 {
                let i = y as usize * self.width as usize + x as usize;
                self.sum[i] += sums[k];
                self.count[i] += samples;
                k += 1;
            }
        }
    }

    pub fn samples(&self, x: u32, y: u32) -> u32 {
        self.count[y as usize * self.width as usize + x as usize]
    }

    /// Mean radiance per pixel; pixels without samples stay black.
    pub fn finalize(&self) -> Image {
        Image {
            width: self.width,
            height: self.height,
            pixels: self
                .sum
                .iter()
                .zip(&self.count)
                .map(|(&s, &n)| if n == 0 { Rgb::BLACK } else { s / n as f64 })
                .collect(),
        }
    }
}
