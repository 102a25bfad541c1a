//! 8-bit PNG and binary PPM textures, linearised on load.

use std::fs::File;
use std::io::{BufReader, Read};
use std::path::Path;

use crate::color::{decode_u8, Rgb};

use super::SceneError;

const TEXTURE_GAMMA: f64 = 2.2;

#[derive(Debug, Clone, PartialEq)]
pub struct Texture {
    pub width: usize,
    pub height: usize,
    /// Linear RGB, row-major from the top-left.
    pub texels: Vec<Rgb>,
}

impl Texture {
    pub fn from_srgb8(width: usize, height: usize, bytes: &[u8]) -> Self {
        let lut: Vec<f64> = (0..=255u8).map(|c| decode_u8(c, TEXTURE_GAMMA)).collect();
        let texels = bytes
            .chunks_exact(3)
            .map(|px| Rgb::new(lut[px[0] as usize], lut[px[1] as usize], lut[px[2] as usize]))
            .collect();
        Texture { width, height, texels }
    }

    /// Bilinear lookup at normalised `(u, v)`, `v` running downwards.
    pub fn sample(&self, u: f64, v: f64) -> Rgb {
        let x = (u * self.width as f64 - 0.5).clamp(0.0, (self.width - 1) as f64);
        let y = (v * self.height as f64 - 0.5).clamp(0.0, (self.height - 1) as f64);
        let (x0, y0) = (x.floor() as usize, y.floor() as usize);
        let (x1, y1) = ((x0 + 1).min(self.width - 1), (y0 + 1).min(self.height - 1));
        let (fx, fy) = (x - x0 as f64, y - y0 as f64);
        let at = |i: usize, j: usize| self.texels[j * self.width + i];
        let top = at(x0, y0) * (1.0 - fx) + at(x1, y0) * fx;
        let bottom = at(x0, y1) * (1.0 - fx) + at(x1, y1) * fx;
        top * (1.0 - fy) + bottom * fy
    }
}

fn texture_error(path: &Path, message: impl Into<String>) -> SceneError {
    SceneError::Texture {
        path: path.display().to_string(),
        message: message.into(),
    }
}

fn parse_ppm(path: &Path, data: &[u8]) -> Result<Texture, SceneError> {
    let mut fields = Vec::new();
    let mut i = 2;
    while fields.len() < 3 {
        while i < data.len() && data[i].is_ascii_whitespace() {
            i += 1;
        }
        if i < data.len() && data[i] == b'#' {
            while i < data.len() && data[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        while i < data.len() && data[i].is_ascii_digit() {
            i += 1;
        }
        if start == i {
            return Err(texture_error(path, "malformed PPM header"));
        }
        let v: usize = std::str::from_utf8(&data[start..i])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| texture_error(path, "malformed PPM header"))?;
        fields.push(v);
    }
    // Exactly one whitespace byte separates the header from the raster.
    i += 1;
    let (w, h, maxval) = (fields[0], fields[1], fields[2]);
    if maxval != 255 {
        return Err(texture_error(
            path,
            format!("only 8-bit PPM is supported, maxval {maxval}"),
        ));
    }
    if w == 0 || h == 0 {
        return Err(texture_error(path, "empty image"));
    }
    let need = w * h * 3;
    let raster = data
        .get(i..i + need)
        .ok_or_else(|| texture_error(path, "truncated PPM raster"))?;
    Ok(Texture::from_srgb8(w, h, raster))
}

fn decode_png(path: &Path, file: File) -> Result<Texture, SceneError> {
    let decoder = png::Decoder::new(BufReader::new(file));
    let mut reader = decoder.read_info().map_err(|e| texture_error(path, e.to_string()))?;
    let mut buf = vec![0; reader.output_buffer_size()];
    let info = reader
        .next_frame(&mut buf)
        .map_err(|e| texture_error(path, e.to_string()))?;
    if info.bit_depth != png::BitDepth::Eight {
        return Err(texture_error(path, "only 8-bit PNG is supported"));
    }
    let bytes = &buf[..info.buffer_size()];
    let (w, h) = (info.width as usize, info.height as usize);
    let rgb: Vec<u8> = match info.color_type {
        png::ColorType::Rgb => bytes.to_vec(),
        png::ColorType::Rgba => bytes.chunks_exact(4).flat_map(|p| [p[0], p[1], p[2]]).collect(),
        png::ColorType::Grayscale => bytes.iter().flat_map(|&g| [g, g, g]).collect(),
        png::ColorType::GrayscaleAlpha => bytes.chunks_exact(2).flat_map(|p| [p[0], p[0], p[0]]).collect(),
        png::ColorType::Indexed => return Err(texture_error(path, "indexed PNG is not supported")),
    };
    Ok(Texture::from_srgb8(w, h, &rgb))
}

/// Loads a PNG or binary PPM (P6) file, chosen by its magic bytes.
pub fn load_texture(path: &Path) -> Result<Texture, SceneError> {
    let mut file = File::open(path).map_err(|e| SceneError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let mut magic = [0u8; 2];
    file.read_exact(&mut magic)
        .map_err(|_| texture_error(path, "file too short"))?;
    if magic == *b"P6" {
        let mut data = magic.to_vec();
        file.read_to_end(&mut data)
            .map_err(|e| texture_error(path, e.to_string()))?;
        parse_ppm(path, &data)
    } else if magic == [0x89, b'P'] {
        decode_png(path, File::open(path).map_err(|e| texture_error(path, e.to_string()))?)
    } else {
        Err(texture_error(path, "not a PNG or binary PPM file"))
    }
}
