use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Grayscale image stored row-major; the 1-D stretch is the pixel buffer itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Image {
    height: usize,
    width: usize,
    pixels: Vec<u8>,
}

impl Image {
    pub fn new(height: usize, width: usize, pixels: Vec<u8>) -> Result<Self> {
        check_dims(height, width, 1)?;
        if pixels.len() != height * width {
            return Err(Error::SizeMismatch {
                expected: format!("{} pixels", height * width),
                actual: format!("{} pixels", pixels.len()),
            });
        }
        Ok(Image { height, width, pixels })
    }

    pub fn zeros(height: usize, width: usize) -> Result<Self> {
        Self::filled(height, width, 0)
    }

    pub fn filled(height: usize, width: usize, value: u8) -> Result<Self> {
        check_dims(height, width, 1)?;
        Ok(Image { height, width, pixels: vec![value; height * width] })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    /// Row-major 1-D view.
    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    /// 0-based (row, column).
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.pixels[i * self.width + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.pixels[i * self.width + j] = v;
    }

    /// Pixel at 1-based stretch index `l`.
    pub fn at(&self, l: usize) -> u8 {
        self.pixels[l - 1]
    }

    /// 1-based `l` to 1-based `(i, j)`.
    pub fn to_2d(&self, l: usize) -> (usize, usize) {
        (l.div_ceil(self.width), (l - 1) % self.width + 1)
    }

    /// 1-based `(i, j)` to 1-based `l`.
    pub fn to_1d(&self, i: usize, j: usize) -> usize {
        (i - 1) * self.width + j
    }

    pub fn same_dims(&self, other: &Image) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::SizeMismatch {
                expected: format!("{}x{}", self.height, self.width),
                actual: format!("{}x{}", other.height, other.width),
            });
        }
        Ok(())
    }
}

pub(crate) fn check_dims(height: usize, width: usize, min: usize) -> Result<()> {
    if height < min || width < min || height.checked_mul(width).is_none() {
        return Err(Error::InvalidDimensions { height, width });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_conventions() {
        let img = Image::new(2, 3, vec![1, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!(img.to_2d(1), (1, 1));
        assert_eq!(img.to_2d(3), (1, 3));
        assert_eq!(img.to_2d(4), (2, 1));
        for l in 1..=6 {
            let (i, j) = img.to_2d(l);
            assert_eq!(img.to_1d(i, j), l);
            assert_eq!(img.get(i - 1, j - 1), img.at(l));
        }
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(Image::new(0, 3, vec![]).is_err());
        assert!(Image::new(2, 2, vec![0; 3]).is_err());
        assert!(Image::new(1, 1, vec![7]).is_ok());
    }
}
