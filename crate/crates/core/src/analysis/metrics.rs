use crate::geom::Point2;
use crate::render::Image;

use super::{check_same_size, AnalysisError, Circle};

/// Boolean pixel mask.
#[derive(Debug, Clone, PartialEq)]
pub struct Mask {
    pub width: u32,
    pub height: u32,
    bits: Vec<bool>,
}

impl Mask {
    pub fn all(width: u32, height: u32) -> Self {
        Mask {
            width,
            height,
            bits: vec![true; width as usize * height as usize],
        }
    }

    /// Pixels whose centres lie inside `circle` shrunk by `band` px.
    pub fn interior(width: u32, height: u32, circle: Circle, band: f64) -> Self {
        let r = circle.radius - band;
        let mut bits = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                let p = Point2::new(x as f64 + 0.5, y as f64 + 0.5);
                bits.push((p - circle.center).length() < r);
            }
        }
        Mask { width, height, bits }
    }

    /// Drops pixels of `image` brighter than anything in `reference` under the
    /// mask; such pixels can only be highlights.
    pub fn without_highlights(mut self, image: &Image, reference: &Image) -> Self {
        let li = image.luminance();
        let lr = reference.luminance();
        let ceiling = self
            .bits
            .iter()
            .zip(&lr)
            .filter(|(m, _)| **m)
            .map(|(_, &l)| l)
            .fold(0.0, f64::max);
        for (bit, &l) in self.bits.iter_mut().zip(&li) {
            if l > ceiling {
                *bit = false;
            }
        }
        self
    }

    pub fn get(&self, x: u32, y: u32) -> bool {
        self.bits[y as usize * self.width as usize + x as usize]
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }
}

/// Root-mean-square difference over masked pixels and all channels, in linear
/// radiance.
pub fn image_rmse(a: &Image, b: &Image, mask: &Mask) -> Result<f64, AnalysisError> {
    check_same_size(a, b)?;
    if (mask.width, mask.height) != (a.width, a.height) {
        return Err(AnalysisError::SizeMismatch(mask.width, mask.height, a.width, a.height));
    }
    let mut sum = 0.0;
    let mut n = 0usize;
    for ((pa, pb), &m) in a.pixels.iter().zip(&b.pixels).zip(&mask.bits) {
        if m {
            for (x, y) in pa.channels().iter().zip(pb.channels()) {
                sum += (x - y).powi(2);
            }
            n += 3;
        }
    }
    if n == 0 {
        return Err(AnalysisError::EmptyMask);
    }
    Ok((sum / n as f64).sqrt())
}

/// RMSE after the best per-channel affine map of `b` onto `a`. Separates
/// geometric differences from uniform attenuation and veiling light.
pub fn image_rmse_affine(a: &Image, b: &Image, mask: &Mask) -> Result<f64, AnalysisError> {
    check_same_size(a, b)?;
    let idx: Vec<usize> = (0..mask.bits.len()).filter(|&i| mask.bits[i]).collect();
    if idx.is_empty() {
        return Err(AnalysisError::EmptyMask);
    }
    let n = idx.len() as f64;
    let mut sum = 0.0;
    for ch in 0..3 {
        let x: Vec<f64> = idx.iter().map(|&i| b.pixels[i].channels()[ch]).collect();
        let y: Vec<f64> = idx.iter().map(|&i| a.pixels[i].channels()[ch]).collect();
        let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
        let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
        let sxy: f64 = x.iter().zip(&y).map(|(u, v)| (u - mx) * (v - my)).sum();
        let k = if sxx > 0.0 { sxy / sxx } else { 0.0 };
        sum += x
            .iter()
            .zip(&y)
            .map(|(u, v)| (v - my - k * (u - mx)).powi(2))
            .sum::<f64>();
    }
    Ok((sum / (3.0 * n)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::color::Rgb;

    #[test]
    fn rmse_basics() {
        let black = Image::new(8, 8);
        let white = Image::filled(8, 8, Rgb::WHITE);
        let all = Mask::all(8, 8);
        assert_eq!(image_rmse(&white, &white, &all).unwrap(), 0.0);
        assert_eq!(image_rmse(&black, &white, &all).unwrap(), 1.0);
        let none = Mask::interior(8, 8, Circle::new(Point2::new(4.0, 4.0), 2.0), 3.0);
        assert_eq!(image_rmse(&black, &white, &none), Err(AnalysisError::EmptyMask));
        assert!(image_rmse(&black, &Image::new(4, 4), &all).is_err());
    }

    #[test]
    fn affine_rmse_ignores_gain_and_offset() {
        let mut a = Image::new(8, 8);
        for y in 0..8 {
            for x in 0..8 {
                a.set(x, y, Rgb::gray(0.1 * x as f64 + 0.03 * y as f64));
            }
        }
        let b = a.map(|p| p.map(|v| 0.85 * v + 0.01));
        let all = Mask::all(8, 8);
        assert!(image_rmse(&b, &a, &all).unwrap() > 0.01);
        assert!(image_rmse_affine(&b, &a, &all).unwrap() < 1e-12);
    }

    #[test]
    fn interior_mask_and_highlights() {
        let m = Mask::interior(100, 100, Circle::new(Point2::new(50.0, 50.0), 20.0), 3.0);
        let expected = std::f64::consts::PI * 17.0 * 17.0;
        assert!((m.count() as f64 - expected).abs() < 0.05 * expected);
        let reference = Image::filled(100, 100, Rgb::gray(0.5));
        let mut img = reference.clone();
        img.set(50, 50, Rgb::gray(2.0));
        let n = m.count();
        let m = m.without_highlights(&img, &reference);
        assert_eq!(m.count(), n - 1);
        assert!(!m.get(50, 50));
    }
}
