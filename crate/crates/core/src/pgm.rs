//! 8-bit PGM reading (P5 and P2) and writing (P5).

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::Image;
use crate::scalar::Real;

pub fn load_pgm<T: Real>(path: impl AsRef<Path>) -> Result<Image<T>> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_pgm(&bytes)
}

pub fn save_pgm<T: Real>(img: &Image<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(&encode_pgm(img)).map_err(|e| Error::io(path, e))
}

/// Quantize a sample for storage: clamp to `[0, 255]`, round half away from zero.
pub fn quantize<T: Real>(v: T) -> u8 {
    v.as_f64().clamp(0.0, 255.0).round() as u8
}

pub fn encode_pgm<T: Real>(img: &Image<T>) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend(img.data().iter().map(|&v| quantize(v)));
    out
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn number(&mut self, field: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Format(format!("missing or non-numeric {field}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Format(format!("{field} out of range")))
    }
}

pub fn decode_pgm<T: Real>(bytes: &[u8]) -> Result<Image<T>> {
    if bytes.len() < 2 {
        return Err(Error::Format("missing magic number".into()));
    }
    let binary = match &bytes[..2] {
        b"P5" => true,
        b"P2" => false,
        other => {
            return Err(Error::Format(format!(
                "unsupported magic {:?}, expected P5 or P2",
                String::from_utf8_lossy(other)
            )))
        }
    };
    let mut hdr = Header { bytes, pos: 2 };
    let width = hdr.number("width")?;
    let height = hdr.number("height")?;
    let maxval = hdr.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::Format(format!("width/height must be positive, got {width}x{height}")));
    }
    if maxval == 0 || maxval > 255 {
        return Err(Error::Format(format!("maxval {maxval} not in 1..=255")));
    }
    let count = width
        .checked_mul(height)
        .ok_or_else(|| Error::Format("width x height overflows".into()))?;

    let samples: Vec<T> = if binary {
        // exactly one whitespace byte separates maxval from the raster
        match bytes.get(hdr.pos) {
            Some(b) if b.is_ascii_whitespace() => hdr.pos += 1,
            _ => return Err(Error::Format("unexpected end of pixel data".into())),
        }
        let raster = &bytes[hdr.pos..];
        if raster.len() < count {
            return Err(Error::Format("unexpected end of pixel data".into()));
        }
        raster[..count].iter().map(|&b| T::from_u8(b).unwrap()).collect()
    } else {
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            hdr.skip_space_and_comments();
            if hdr.pos >= bytes.len() {
                return Err(Error::Format("unexpected end of pixel data".into()));
            }
            let v = hdr.number("pixel value")?;
            if v > maxval {
                return Err(Error::Format(format!("pixel value {v} exceeds maxval {maxval}")));
            }
            out.push(T::from_count(v));
        }
        out
    };
    Image::new(width, height, samples)
}
