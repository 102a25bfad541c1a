//! Whether the orb shows the background upright or point-reflected.

use serde::{Deserialize, Serialize};

use crate::geom::Point2;
use crate::render::Image;

use super::{check_same_size, AnalysisError, Circle};

/// Only the inner part of the disc is compared; the rim is dominated by
/// reflections.
const MASK_FRACTION: f64 = 0.9;
/// Coefficient of variation under which a region counts as textureless.
const TEXTURE_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InversionStatus {
    Inverted,
    Upright,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InversionResult {
    /// `corr_inverted - corr_upright`, zero when indeterminate.
    pub score: f64,
    pub corr_upright: f64,
    pub corr_inverted: f64,
    pub status: InversionStatus,
}

struct Lum<'a> {
    w: u32,
    h: u32,
    data: &'a [f64],
}

impl Lum<'_> {
    fn bilinear(&self, p: Point2) -> Option<f64> {
        let (x, y) = (p.x - 0.5, p.y - 0.5);
        if !(x >= 0.0 && y >= 0.0 && x <= (self.w - 1) as f64 && y <= (self.h - 1) as f64) {
            return None;
        }
        let (x0, y0) = (x.floor() as usize, y.floor() as usize);
        let (x1, y1) = ((x0 + 1).min(self.w as usize - 1), (y0 + 1).min(self.h as usize - 1));
        let (fx, fy) = (x - x0 as f64, y - y0 as f64);
        let at = |i: usize, j: usize| self.data[j * self.w as usize + i];
        Some(
            (at(x0, y0) * (1.0 - fx) + at(x1, y0) * fx) * (1.0 - fy) + (at(x0, y1) * (1.0 - fx) + at(x1, y1) * fx) * fy,
        )
    }
}

fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    let cv = |s: f64, m: f64| (s / n).sqrt() / m.abs().max(1e-300);
    if cv(saa, ma) < TEXTURE_FLOOR || cv(sbb, mb) < TEXTURE_FLOOR {
        return None;
    }
    Some((sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
}

/// Correlates the luminance inside the silhouette with the orb-free image at
/// the same pixels and at their point reflections through the centre.
pub fn detect_inversion(
    with_orb: &Image,
    without_orb: &Image,
    silhouette: Circle,
) -> Result<InversionResult, AnalysisError> {
    check_same_size(with_orb, without_orb)?;
    let a = with_orb.luminance();
    let b = without_orb.luminance();
    let bg = Lum {
        w: without_orb.width,
        h: without_orb.height,
        data: &b,
    };
    let c = silhouette.center;
    let r = silhouette.radius * MASK_FRACTION;
    let (mut seen, mut upright, mut inverted) = (Vec::new(), Vec::new(), Vec::new());
    let (x0, x1) = (
        (c.x - r).floor().max(0.0) as u32,
        ((c.x + r).ceil() as u32).min(with_orb.width),
    );
    let (y0, y1) = (
        (c.y - r).floor().max(0.0) as u32,
        ((c.y + r).ceil() as u32).min(with_orb.height),
    );
    for y in y0..y1 {
        for x in x0..x1 {
            let p = Point2::new(x as f64 + 0.5, y as f64 + 0.5);
            if (p - c).length() >= r {
                continue;
            }
            let Some(refl) = bg.bilinear(c * 2.0 - p) else { continue };
            let i = y as usize * with_orb.width as usize + x as usize;
            seen.push(a[i]);
            upright.push(b[i]);
            inverted.push(refl);
        }
    }
    if seen.is_empty() {
        return Err(AnalysisError::EmptyMask);
    }
    let indeterminate = InversionResult {
        score: 0.0,
        corr_upright: 0.0,
        corr_inverted: 0.0,
        status: InversionStatus::Indeterminate,
    };
    let (Some(up), Some(inv)) = (pearson(&seen, &upright), pearson(&seen, &inverted)) else {
        return Ok(indeterminate);
    };
    let score = inv - up;
    Ok(InversionResult {
        score,
        corr_upright: up,
        corr_inverted: inv,
        status: if score > 0.0 {
            InversionStatus::Inverted
        } else {
            InversionStatus::Upright
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::color::Rgb;

    fn gradient(w: u32, f: impl Fn(f64, f64) -> f64) -> Image {
        let mut img = Image::new(w, w);
        for y in 0..w {
            for x in 0..w {
                img.set(x, y, Rgb::gray(f(x as f64 + 0.5, y as f64 + 0.5)));
            }
        }
        img
    }

    #[test]
    fn identical_images_are_upright() {
        let img = gradient(64, |x, y| 0.2 + 0.005 * x + 0.002 * y);
        let r = detect_inversion(&img, &img, Circle::new(Point2::new(32.0, 32.0), 20.0)).unwrap();
        assert!((r.corr_upright - 1.0).abs() < 1e-12);
        assert!(r.score <= 0.0);
        assert_eq!(r.status, InversionStatus::Upright);
    }

    #[test]
    fn reflected_content_is_inverted() {
        let bg = gradient(64, |x, y| 0.2 + 0.005 * x + 0.002 * y + 0.05 * (x * 0.3).sin());
        let orb = gradient(64, |x, y| {
            0.2 + 0.005 * (64.0 - x) + 0.002 * (64.0 - y) + 0.05 * ((64.0 - x) * 0.3).sin()
        });
        let r = detect_inversion(&orb, &bg, Circle::new(Point2::new(32.0, 32.0), 20.0)).unwrap();
        assert!(r.score > 1.5, "{r:?}");
        assert_eq!(r.status, InversionStatus::Inverted);
    }

    #[test]
    fn flat_region_is_indeterminate() {
        let flat = Image::filled(64, 64, Rgb::gray(0.4));
        let r = detect_inversion(&flat, &flat, Circle::new(Point2::new(32.0, 32.0), 20.0)).unwrap();
        assert_eq!(r.status, InversionStatus::Indeterminate);
        assert!(detect_inversion(&flat, &Image::new(8, 8), Circle::new(Point2::ZERO, 1.0)).is_err());
    }
}
