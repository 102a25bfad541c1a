//! Log-luminance sampling and dark-track location on cross profiles.

use crate::geom::{Point2, Vec2};
use crate::render::Image;

/// Relative floor under which luminance is clamped before the logarithm.
const LOG_FLOOR: f64 = 1e-6;

/// Natural log of luminance. Working in logs makes track depths independent
/// of exposure, and only scales them under a gamma change.
#[derive(Debug, Clone)]
pub struct LogLuminance {
    pub width: u32,
    pub height: u32,
    data: Vec<f64>,
}

impl LogLuminance {
    pub fn new(image: &Image) -> Self {
        let lum = image.luminance();
        let max = lum.iter().cloned().fold(0.0, f64::max);
        let floor = if max > 0.0 { LOG_FLOOR * max } else { f64::MIN_POSITIVE };
        LogLuminance {
            width: image.width,
            height: image.height,
            data: lum.into_iter().map(|l| l.max(floor).ln()).collect(),
        }
    }

    /// Bilinear sample with pixel centres at half-integers; `None` off the
    /// image.
    pub fn sample(&self, p: Point2) -> Option<f64> {
        let x = p.x - 0.5;
        let y = p.y - 0.5;
        if !(x >= 0.0 && y >= 0.0 && x <= (self.width - 1) as f64 && y <= (self.height - 1) as f64) {
            return None;
        }
        let (x0, y0) = (x.floor() as usize, y.floor() as usize);
        let (x1, y1) = (
            (x0 + 1).min(self.width as usize - 1),
            (y0 + 1).min(self.height as usize - 1),
        );
        let (fx, fy) = (x - x0 as f64, y - y0 as f64);
        let w = self.width as usize;
        let at = |i: usize, j: usize| self.data[j * w + i];
        let top = at(x0, y0) * (1.0 - fx) + at(x1, y0) * fx;
        let bottom = at(x0, y1) * (1.0 - fx) + at(x1, y1) * fx;
        Some(top * (1.0 - fy) + bottom * fy)
    }
}

pub(crate) const PROFILE_STEP: f64 = 0.25;

/// Dark track found on one cross profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct TrackHit {
    /// Offset of the centroid along the profile normal.
    pub offset: f64,
    /// Baseline minus minimum, in log units.
    pub depth: f64,
}

/// Samples the profile through `p` along `normal` over `[-half, half]`.
pub(crate) fn profile(log: &LogLuminance, p: Point2, normal: Vec2, half: f64) -> Option<Vec<(f64, f64)>> {
    let n = (half / PROFILE_STEP).round() as i64;
    let mut out = Vec::with_capacity(2 * n as usize + 1);
    for k in -n..=n {
        let u = k as f64 * PROFILE_STEP;
        out.push((u, log.sample(p + normal * u)?));
    }
    Some(out)
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Deepest minimum of `prof` with offset in `[lo, hi]`, centroided over the
/// connected run below half depth. The baseline is the profile median.
pub(crate) fn locate_track(prof: &[(f64, f64)], lo: f64, hi: f64) -> Option<TrackHit> {
    let baseline = median(prof.iter().map(|p| p.1).collect());
    let (imin, &(_, vmin)) = prof
        .iter()
        .enumerate()
        .filter(|(_, (u, _))| *u >= lo && *u <= hi)
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))?;
    let depth = baseline - vmin;
    if !(depth > 0.0) {
        return Some(TrackHit {
            offset: prof[imin].0,
            depth: 0.0,
        });
    }
    let thr = vmin + 0.5 * depth;
    let (mut a, mut b) = (imin, imin);
    while a > 0 && prof[a - 1].1 < thr {
        a -= 1;
    }
    while b + 1 < prof.len() && prof[b + 1].1 < thr {
        b += 1;
    }
    let (mut sw, mut su) = (0.0, 0.0);
    for &(u, v) in &prof[a..=b] {
        let w = thr - v;
        sw += w;
        su += w * u;
    }
    Some(TrackHit {
        offset: if sw > 0.0 { su / sw } else { prof[imin].0 },
        depth,
    })
}

/// Least-squares polynomial fit of degree 1 or 2: coefficients `[c0, c1, c2]`.
pub(crate) fn polyfit(points: &[(f64, f64)], degree: usize) -> Option<[f64; 3]> {
    let m = degree + 1;
    if points.len() < m {
        return None;
    }
    // Centre and scale the abscissa for conditioning.
    let mean = points.iter().map(|p| p.0).sum::<f64>() / points.len() as f64;
    let scale = points.iter().map(|p| (p.0 - mean).abs()).fold(0.0, f64::max).max(1e-12);
    let mut ata = [[0.0; 3]; 3];
    let mut atb = [0.0; 3];
    for &(x, y) in points {
        let t = (x - mean) / scale;
        let basis = [1.0, t, t * t];
        for i in 0..m {
            atb[i] += basis[i] * y;
            for j in 0..m {
                ata[i][j] += basis[i] * basis[j];
            }
        }
    }
    let c = solve(ata, atb, m)?;
    // Expand back to the original abscissa.
    let (a, b, q) = (c[0], c[1] / scale, if m == 3 { c[2] / (scale * scale) } else { 0.0 });
    Some([a - b * mean + q * mean * mean, b - 2.0 * q * mean, q])
}

fn solve(mut a: [[f64; 3]; 3], mut b: [f64; 3], m: usize) -> Option<[f64; 3]> {
    for col in 0..m {
        let piv = (col..m).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in 0..m {
            if row != col {
                let f = a[row][col] / a[col][col];
                let pivot = a[col];
                for (x, p) in a[row][col..m].iter_mut().zip(&pivot[col..m]) {
                    *x -= f * p;
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = [0.0; 3];
    for i in 0..m {
        x[i] = b[i] / a[i][i];
    }
    Some(x)
}

pub(crate) fn poly_eval(c: &[f64; 3], x: f64) -> f64 {
    c[0] + c[1] * x + c[2] * x * x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polyfit_recovers_a_parabola() {
        let pts: Vec<(f64, f64)> = (0..20)
            .map(|i| {
                let x = 100.0 + i as f64;
                (x, 2.0 - 0.5 * x + 0.01 * x * x)
            })
            .collect();
        let c = polyfit(&pts, 2).unwrap();
        assert!((poly_eval(&c, 0.0) - 2.0).abs() < 1e-6);
        assert!((c[2] - 0.01).abs() < 1e-10);
        let l = polyfit(&pts[..2], 1).unwrap();
        assert!((poly_eval(&l, 100.0) - pts[0].1).abs() < 1e-9);
    }

    #[test]
    fn symmetric_dip_is_centred() {
        let prof: Vec<(f64, f64)> = (-40..=40)
            .map(|k| {
                let u = k as f64 * PROFILE_STEP;
                (u, if (u - 1.3).abs() < 2.0 { -2.0 } else { 0.0 })
            })
            .collect();
        let hit = locate_track(&prof, -10.0, 10.0).unwrap();
        assert!((hit.offset - 1.375).abs() < 0.2, "{hit:?}");
        assert_eq!(hit.depth, 2.0);
    }
}
