//! Linear-radiance rasters and their 8-bit export.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::color::{encode_u8, Rgb};

use super::RenderError;

#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    pub width: u32,
    pub height: u32,
    /// Row-major from the top-left.
    pub pixels: Vec<Rgb>,
}

impl Image {
    pub fn new(width: u32, height: u32) -> Self {
        Image::filled(width, height, Rgb::BLACK)
    }

    pub fn filled(width: u32, height: u32, value: Rgb) -> Self {
        Image {
            width,
            height,
            pixels: vec![value; width as usize * height as usize],
        }
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> Rgb {
        self.pixels[y as usize * self.width as usize + x as usize]
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, v: Rgb) {
        self.pixels[y as usize * self.width as usize + x as usize] = v;
    }

    /// Luminance raster.
    pub fn luminance(&self) -> Vec<f64> {
        self.pixels.iter().map(|p| p.luminance()).collect()
    }

    pub fn map(&self, f: impl Fn(Rgb) -> Rgb) -> Image {
        Image {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|&p| f(p)).collect(),
        }
    }

    pub fn mean(&self) -> Rgb {
        let n = self.pixels.len().max(1) as f64;
        self.pixels.iter().fold(Rgb::BLACK, |a, &p| a + p) / n
    }

    /// Per-pixel average of two images of equal size.
    pub fn average(a: &Image, b: &Image) -> Image {
        assert_eq!((a.width, a.height), (b.width, b.height), "image sizes differ");
        Image {
            width: a.width,
            height: a.height,
            pixels: a.pixels.iter().zip(&b.pixels).map(|(&p, &q)| (p + q) * 0.5).collect(),
        }
    }

    /// Gamma-encoded interleaved RGB bytes.
    pub fn encode(&self, gamma: f64) -> Vec<u8> {
        self.pixels
            .iter()
            .flat_map(|p| p.channels().map(|c| encode_u8(c, gamma)))
            .collect()
    }

    pub fn to_ppm(&self, gamma: f64) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend(self.encode(gamma));
        out
    }

    /// Writes an 8-bit file; the format follows the extension (`.png` or
    /// `.ppm`).
    pub fn write(&self, path: &Path, gamma: f64) -> Result<(), RenderError> {
        let format = ImageFormat::from_path(path)?;
        write_image(self, path, format, gamma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageFormat {
    Png,
    Ppm,
}

impl ImageFormat {
    pub fn from_path(path: &Path) -> Result<Self, RenderError> {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase())
            .as_deref()
        {
            Some("png") => Ok(ImageFormat::Png),
            Some("ppm") => Ok(ImageFormat::Ppm),
            _ => Err(RenderError::Io {
                path: path.display().to_string(),
                message: "unsupported image extension, expected .png or .ppm".into(),
            }),
        }
    }
}

pub fn write_image(image: &Image, path: &Path, format: ImageFormat, gamma: f64) -> Result<(), RenderError> {
    let io = |e: &dyn std::fmt::Display| RenderError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    let file = File::create(path).map_err(|e| io(&e))?;
    let mut w = BufWriter::new(file);
    match format {
        ImageFormat::Ppm => w.write_all(&image.to_ppm(gamma)).map_err(|e| io(&e))?,
        ImageFormat::Png => {
            let mut enc = png::Encoder::new(&mut w, image.width, image.height);
            enc.set_color(png::ColorType::Rgb);
            enc.set_depth(png::BitDepth::Eight);
            let mut writer = enc.write_header().map_err(|e| io(&e))?;
            writer.write_image_data(&image.encode(gamma)).map_err(|e| io(&e))?;
            writer.finish().map_err(|e| io(&e))?;
        }
    }
    w.flush().map_err(|e| io(&e))
}
