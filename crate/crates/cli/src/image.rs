//! Binary PPM (P6) and PGM (P5) images, and the renders that produce them.

use std::fs;
use std::path::Path;

use dgsnmf_core::Matrix;

use crate::error::{Error, Result};

pub type Rgb = [u8; 3];

/// Red, green, blue, black.
pub const DEFAULT_PALETTE: [Rgb; 4] = [[255, 0, 0], [0, 255, 0], [0, 0, 255], [0, 0, 0]];

/// 8-bit raster, either grayscale (1 channel) or RGB (3 channels),
/// row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    pub channels: usize,
    pub pixels: Vec<u8>,
}

impl Image {
    pub fn encode(&self) -> Vec<u8> {
        let magic = if self.channels == 1 { "P5" } else { "P6" };
        let mut out = format!("{magic}\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    /// Parses the headers written by [`Image::encode`] (comments and
    /// arbitrary whitespace are accepted, only `maxval` 255).
    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let mut pos = 0;
        let mut token = || -> Result<String> {
            loop {
                while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                    pos += 1;
                }
                if pos < bytes.len() && bytes[pos] == b'#' {
                    while pos < bytes.len() && bytes[pos] != b'\n' {
                        pos += 1;
                    }
                    continue;
                }
                break;
            }
            let start = pos;
            while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if start == pos {
                return Err(Error::BadImage("header ends early".into()));
            }
            Ok(String::from_utf8_lossy(&bytes[start..pos]).into_owned())
        };
        let channels = match token()?.as_str() {
            "P5" => 1,
            "P6" => 3,
            other => return Err(Error::BadImage(format!("magic {other:?}"))),
        };
        let mut number = |name: &str| -> Result<usize> {
            let t = token()?;
            t.parse().map_err(|_| Error::BadImage(format!("{name} {t:?}")))
        };
        let (width, height, maxval) = (number("width")?, number("height")?, number("maxval")?);
        if maxval != 255 {
            return Err(Error::BadImage(format!("maxval {maxval}")));
        }
        // exactly one whitespace byte separates the header from the raster
        let start = pos + 1;
        let expected = width * height * channels;
        let raster = bytes.get(start..).unwrap_or(&[]);
        if raster.len() != expected {
            return Err(Error::BadImage(format!("{} raster bytes, expected {expected}", raster.len())));
        }
        Ok(Self {
            width,
            height,
            channels,
            pixels: raster.to_vec(),
        })
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.encode()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::decode(&fs::read(path).map_err(|e| Error::io(path, e))?)
    }
}

fn quantize(v: f64) -> u8 {
    (v * 255.0).round().clamp(0.0, 255.0) as u8
}

fn check_grid(n: usize, width: usize, height: usize) -> Result<()> {
    if n != width * height {
        return Err(dgsnmf_core::Error::ShapeMismatch(format!("{n} pixels for a {width}x{height} image")).into());
    }
    Ok(())
}

/// Colours pixel `n` as `Σₖ âₖₙ · palette[k]` where `â` is column `n` of
/// `abundances` scaled to sum to one.
pub fn render_pseudo_color(abundances: &Matrix, width: usize, height: usize, palette: &[Rgb]) -> Result<Image> {
    let (k, n) = abundances.shape();
    if k > palette.len() {
        return Err(Error::TooManyEndmembers {
            k,
            palette: palette.len(),
        });
    }
    check_grid(n, width, height)?;
    let mut pixels = Vec::with_capacity(3 * n);
    for p in 0..n {
        let col = abundances.col(p);
        let total: f64 = col.iter().sum();
        if total.is_nan() || total <= 0.0 {
            return Err(Error::DegeneratePixel(p));
        }
        for channel in 0..3 {
            let v: f64 = col
                .iter()
                .zip(palette)
                .map(|(a, colour)| a / total * f64::from(colour[channel]) / 255.0)
                .sum();
            pixels.push(quantize(v));
        }
    }
    Ok(Image {
        width,
        height,
        channels: 3,
        pixels,
    })
}

/// Linear ramp: `0` is black, `1` is white, values outside are clamped.
pub fn render_grayscale(values: &[f64], width: usize, height: usize) -> Result<Image> {
    check_grid(values.len(), width, height)?;
    Ok(Image {
        width,
        height,
        channels: 1,
        pixels: values.iter().map(|&v| quantize(v)).collect(),
    })
}

/// Parses a comma-separated list of `rrggbb` hex colours.
pub fn parse_palette(text: &str) -> Result<Vec<Rgb>> {
    text.split(',')
        .map(|s| {
            let s = s.trim().trim_start_matches('#');
            let bad = || Error::BadImage(format!("colour {s:?} is not rrggbb"));
            if s.len() != 6 {
                return Err(bad());
            }
            let v = u32::from_str_radix(s, 16).map_err(|_| bad())?;
            Ok([(v >> 16) as u8, (v >> 8) as u8, v as u8])
        })
        .collect()
}
