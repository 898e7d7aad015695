//! Binary PGM (P5, maxval 255) and synthetic test images.

use crate::image::{check_dims, Image};
use crate::keysched::ByteStream;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

fn pgm_err(offset: usize, reason: impl Into<String>) -> Error {
    Error::Pgm { offset, reason: reason.into() }
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    /// Returns the token's offset and value.
    fn number(&mut self, what: &str) -> Result<(usize, usize)> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(pgm_err(start, format!("expected {what}")));
        }
        let value = std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| pgm_err(start, format!("{what} too large")))?;
        Ok((start, value))
    }
}

pub fn read_pgm(bytes: &[u8]) -> Result<Image> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(pgm_err(0, "bad magic, expected P5"));
    }
    let mut h = Header { bytes, pos: 2 };
    let (_, width) = h.number("width")?;
    let (_, height) = h.number("height")?;
    let (max_at, maxval) = h.number("maxval")?;
    if maxval != 255 {
        return Err(pgm_err(max_at, format!("maxval {maxval} unsupported, only 255")));
    }
    match bytes.get(h.pos) {
        Some(b) if b.is_ascii_whitespace() => h.pos += 1,
        _ => return Err(pgm_err(h.pos, "expected whitespace after maxval")),
    }
    if width == 0 || height == 0 {
        return Err(pgm_err(2, format!("empty image {width}x{height}")));
    }
    let need = width
        .checked_mul(height)
        .ok_or_else(|| pgm_err(2, "dimensions overflow"))?;
    let payload = &bytes[h.pos..];
    if payload.len() < need {
        return Err(pgm_err(bytes.len(), format!("truncated payload: {} of {need} bytes", payload.len())));
    }
    if payload.len() > need {
        return Err(pgm_err(h.pos + need, "trailing bytes after payload"));
    }
    Image::new(height, width, payload.to_vec())
}

pub fn write_pgm(img: &Image) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.pixels());
    out
}

pub fn load_pgm(path: &Path) -> Result<Image> {
    read_pgm(&std::fs::read(path)?)
}

pub fn save_pgm(path: &Path, img: &Image) -> Result<()> {
    std::fs::write(path, write_pgm(img))?;
    Ok(())
}

pub const MOSAIC_BLOCK: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Synth {
    Constant(u8),
    /// 1-based position and value; every other pixel is 0.
    SinglePixel { index: usize, value: u8 },
    UniformRandom,
    Mosaic,
}

pub fn synth_image(kind: Synth, height: usize, width: usize, seed: u64) -> Result<Image> {
    check_dims(height, width, 2)?;
    let len = height * width;
    match kind {
        Synth::Constant(v) => Image::filled(height, width, v),
        Synth::SinglePixel { index, value } => {
            if index == 0 || index > len {
                return Err(Error::InvalidArgument(format!("pixel index {index} outside 1..={len}")));
            }
            let mut img = Image::zeros(height, width)?;
            img.pixels_mut()[index - 1] = value;
            Ok(img)
        }
        Synth::UniformRandom => Image::new(height, width, ByteStream::new(seed).bytes(len)),
        Synth::Mosaic => {
            let mut rng = ByteStream::new(seed);
            let bw = width.div_ceil(MOSAIC_BLOCK);
            let blocks = rng.bytes(height.div_ceil(MOSAIC_BLOCK) * bw);
            let mut img = Image::zeros(height, width)?;
            for i in 0..height {
                for j in 0..width {
                    img.set(i, j, blocks[(i / MOSAIC_BLOCK) * bw + j / MOSAIC_BLOCK]);
                }
            }
            Ok(img)
        }
    }
}
