//! Path tracing of a built scene into a linear-radiance film.

mod film;
mod image;
mod integrator;
mod sampler;
mod settings;

pub use film::Film;
pub use image::{write_image, Image, ImageFormat};
pub use integrator::{radiance, shade_dielectric, DielectricEvent, GLASS};
pub use sampler::{SampleStream, CAMERA_BOUNCE};
pub use settings::{CropWindow, RenderSettings, MIN_DEPTH};

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use crate::color::Rgb;
use crate::optics::{CalciteSpec, OpticsError};
use crate::scene::Scene;

const TILE: u32 = 16;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RenderError {
    #[error("invalid render settings: {0}")]
    InvalidSettings(String),
    #[error("non-finite radiance at pixel ({x}, {y}), sample {sample}")]
    NonFinite { x: u32, y: u32, sample: u32 },
    #[error(transparent)]
    Optics(#[from] OpticsError),
    #[error("cannot write {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RenderStats {
    pub elapsed: Duration,
    pub paths: u64,
    /// Samples replaced by black because their radiance was not finite.
    pub clamped: u64,
}

impl RenderStats {
    pub fn paths_per_second(&self) -> f64 {
        self.paths as f64 / self.elapsed.as_secs_f64().max(1e-9)
    }
}

struct TileResult {
    index: usize,
    sums: Vec<Rgb>,
    clamped: u64,
}

fn tiles(window: CropWindow) -> Vec<CropWindow> {
    let mut out = Vec::new();
    let mut y = window.y0;
    while y < window.y1 {
        let mut x = window.x0;
        while x < window.x1 {
            out.push(CropWindow {
                x0: x,
                y0: y,
                x1: (x + TILE).min(window.x1),
                y1: (y + TILE).min(window.y1),
            });
            x += TILE;
        }
        y += TILE;
    }
    out
}

fn render_tile(
    scene: &Scene,
    settings: &RenderSettings,
    tile: CropWindow,
    index: usize,
) -> Result<TileResult, RenderError> {
    let mut sums = Vec::with_capacity((tile.width() * tile.height()) as usize);
    let mut clamped = 0;
    for y in tile.y0..tile.y1 {
        for x in tile.x0..tile.x1 {
            let mut sum = Rgb::BLACK;
            for s in 0..settings.samples_per_pixel {
                let stream = SampleStream::new(settings.seed, x, y, s);
                let ray = scene.camera.generate_ray(
                    x as f64 + stream.get(CAMERA_BOUNCE, 0),
                    y as f64 + stream.get(CAMERA_BOUNCE, 1),
                );
                let l = radiance(scene, ray, &stream, settings.max_depth)?;
                if l.is_finite() && l.min_channel() >= 0.0 {
                    sum += l;
                } else if settings.strict {
                    return Err(RenderError::NonFinite { x, y, sample: s });
                } else {
                    if clamped == 0 {
                        log::warn!("non-finite radiance at pixel ({x}, {y}), sample {s}; using black");
                    }
                    clamped += 1;
                }
            }
            sums.push(sum);
        }
    }
    Ok(TileResult { index, sums, clamped })
}

/// Renders `scene` on `threads` workers. Pixels outside the crop window
/// stay black. The result does not depend on the thread count.
pub fn render(scene: &Scene, settings: &RenderSettings, threads: usize) -> Result<(Film, RenderStats), RenderError> {
    settings.validate()?;
    let (w, h) = (scene.camera.width(), scene.camera.height());
    let window = settings.crop.unwrap_or(CropWindow::full(w, h));
    if window.x1 > w || window.y1 > h {
        return Err(RenderError::InvalidSettings(
            "crop window extends past the image".into(),
        ));
    }
    let start = Instant::now();
    let work = tiles(window);
    let next = AtomicUsize::new(0);
    let done = AtomicUsize::new(0);
    let threads = threads.clamp(1, work.len().max(1));
    let results: Vec<Result<Vec<TileResult>, RenderError>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|_| {
                s.spawn(|| {
                    let mut mine = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        if i >= work.len() {
                            break;
                        }
                        mine.push(render_tile(scene, settings, work[i], i)?);
                        let d = done.fetch_add(1, Ordering::Relaxed) + 1;
                        if d * 10 / work.len() != (d - 1) * 10 / work.len() {
                            log::info!("rendered {}%", d * 100 / work.len());
                        }
                    }
                    Ok(mine)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("render worker panicked"))
            .collect()
    });
    let mut film = Film::new(w, h);
    let mut stats = RenderStats::default();
    for r in results {
        for t in r? {
            film.merge_tile(work[t.index], &t.sums, settings.samples_per_pixel);
            stats.clamped += t.clamped;
        }
    }
    if stats.clamped > 0 {
        log::warn!("{} samples had non-finite radiance and were dropped", stats.clamped);
    }
    stats.elapsed = start.elapsed();
    stats.paths = window.width() as u64 * window.height() as u64 * settings.samples_per_pixel as u64;
    Ok((film, stats))
}

/// Renders and returns the mean radiance image.
pub fn render_image(scene: &Scene, settings: &RenderSettings, threads: usize) -> Result<Image, RenderError> {
    Ok(render(scene, settings, threads)?.0.finalize())
}

/// Mean of two renders of a solid orb with identical seeds, one at each
/// calcite index, in linear radiance.
pub fn birefringent_render_pair(
    scene: &Scene,
    calcite: &CalciteSpec,
    settings: &RenderSettings,
    threads: usize,
) -> Result<Image, RenderError> {
    calcite.validate()?;
    match &scene.orb {
        Some(orb) if orb.shell.is_solid() => {}
        Some(_) => {
            return Err(OpticsError::InvalidExperiment("birefringent rendering needs a solid orb".into()).into())
        }
        None => return Err(OpticsError::InvalidExperiment("scene has no orb".into()).into()),
    }
    let mut ordinary = scene.clone();
    ordinary.set_orb_ior(calcite.ior_ordinary);
    let mut extraordinary = scene.clone();
    extraordinary.set_orb_ior(calcite.ior_extraordinary);
    let a = render_image(&ordinary, settings, threads)?;
    let b = render_image(&extraordinary, settings, threads)?;
    Ok(Image::average(&a, &b))
}

/// Thread count from `ORBTRACE_THREADS`, else the available parallelism.
pub fn default_threads() -> usize {
    std::env::var("ORBTRACE_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}
