#![allow(dead_code)]

//! Independent oracles shared by the integration tests.

pub mod strategies;

/// Brute-force chief-ray tracer through a concentric shell centred at the
/// origin. Interfaces are located by fixed-step marching on the region
/// indicator and bisection, and refraction uses the scalar angle form of
/// Snell's law. Shares no code with the library tracer.
pub fn march_shell_2d(
    eye: (f64, f64),
    dir: (f64, f64),
    radius: f64,
    thickness: f64,
    ior: f64,
    step: f64,
) -> ((f64, f64), (f64, f64)) {
    let inner = radius - thickness;
    let region = |x: f64, y: f64| {
        let r = x.hypot(y);
        if r > radius {
            0
        } else if r > inner {
            1
        } else {
            2
        }
    };
    let index = |reg: u8| if reg == 1 { ior } else { 1.0 };
    let (mut px, mut py) = eye;
    let norm = dir.0.hypot(dir.1);
    let (mut dx, mut dy) = (dir.0 / norm, dir.1 / norm);
    // Skip the empty stretch in front of the orb by a conservative amount.
    let skip = (px.hypot(py) - radius - 1.0).max(0.0);
    px += dx * skip;
    py += dy * skip;
    let mut reg = region(px, py);
    for _ in 0..16 {
        let mut t = 0.0;
        let limit = 4.0 * radius + 2.0;
        loop {
            let s = t + step;
            if region(px + dx * s, py + dy * s) != reg {
                break;
            }
            t = s;
            if t > limit {
                return ((px, py), (dx, dy));
            }
        }
        let (mut lo, mut hi) = (t, t + step);
        for _ in 0..200 {
            let m = 0.5 * (lo + hi);
            if region(px + dx * m, py + dy * m) == reg {
                lo = m;
            } else {
                hi = m;
            }
        }
        let (hx, hy) = (px + dx * hi, py + dy * hi);
        let next = region(hx, hy);
        let rad = hy.atan2(hx);
        let along = if dx * rad.cos() + dy * rad.sin() > 0.0 {
            rad
        } else {
            rad + std::f64::consts::PI
        };
        let phi = dy.atan2(dx);
        let a_i = (phi - along).sin().atan2((phi - along).cos());
        let s = index(reg) / index(next) * a_i.sin();
        let (phi2, new_reg) = if s.abs() > 1.0 {
            (along + std::f64::consts::PI - a_i, reg)
        } else {
            (along + s.asin(), next)
        };
        dx = phi2.cos();
        dy = phi2.sin();
        px = hx + dx * 1e-12;
        py = hy + dy * 1e-12;
        reg = new_reg;
        if reg == 0 {
            return ((px, py), (dx, dy));
        }
    }
    ((px, py), (dx, dy))
}

/// Small deterministic generator for test inputs (SplitMix64).
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * ((self.next_u64() >> 11) as f64 / (1u64 << 53) as f64)
    }

    pub fn unit_vector(&mut self) -> (f64, f64, f64) {
        let z = self.uniform(-1.0, 1.0);
        let phi = self.uniform(0.0, std::f64::consts::TAU);
        let s = (1.0 - z * z).sqrt();
        (s * phi.cos(), s * phi.sin(), z)
    }
}
