use crate::error::{Error, Result};

/// Row-major grayscale intensity matrix.
///
/// Intensities are finite and non-negative; everything downstream (mass
/// conservation, histogram weights) relies on that.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

/// Axis-aligned pixel rectangle inside an image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rect {
    pub x: usize,
    pub y: usize,
    pub width: usize,
    pub height: usize,
}

impl Rect {
    pub fn new(x: usize, y: usize, width: usize, height: usize) -> Self {
        Self {
            x,
            y,
            width,
            height,
        }
    }

    pub fn right(&self) -> usize {
        self.x + self.width
    }

    pub fn bottom(&self) -> usize {
        self.y + self.height
    }

    pub fn area(&self) -> usize {
        self.width * self.height
    }
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "expected {} pixels for {width}x{height}, got {}",
                width * height,
                pixels.len()
            )));
        }
        if let Some(i) = pixels.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidImage(format!(
                "pixel {i} has invalid intensity {}",
                pixels[i]
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn zeros(width: usize, height: usize) -> Result<Self> {
        Self::filled(width, height, 0.0)
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    /// Builds an image by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<f64> {
        self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.pixels[y * self.width + x]
    }

    pub fn is_square(&self) -> bool {
        self.width == self.height
    }

    pub fn mass(&self) -> f64 {
        self.pixels.iter().sum()
    }

    pub fn transpose(&self) -> GrayImage {
        let mut pixels = Vec::with_capacity(self.pixels.len());
        for x in 0..self.width {
            for y in 0..self.height {
                pixels.push(self.get(x, y));
            }
        }
        GrayImage {
            width: self.height,
            height: self.width,
            pixels,
        }
    }

    /// Multiplies every intensity by `factor` (must be finite and >= 0).
    pub fn scaled(&self, factor: f64) -> Result<GrayImage> {
        GrayImage::new(
            self.width,
            self.height,
            self.pixels.iter().map(|v| v * factor).collect(),
        )
    }

    /// Copies `rect` out of the image. The rectangle must lie inside the image.
    pub fn crop(&self, rect: Rect) -> Result<GrayImage> {
        if rect.width == 0 || rect.height == 0 || rect.right() > self.width || rect.bottom() > self.height {
            return Err(Error::InvalidImage(format!(
                "crop {rect:?} outside {}x{} image",
                self.width, self.height
            )));
        }
        let mut pixels = Vec::with_capacity(rect.area());
        for y in rect.y..rect.bottom() {
            let row = y * self.width;
            pixels.extend_from_slice(&self.pixels[row + rect.x..row + rect.right()]);
        }
        Ok(GrayImage {
            width: rect.width,
            height: rect.height,
            pixels,
        })
    }

    /// Copies `rect` into a square window of side `max(width, height)`,
    /// zero-filling the extra rows or columns at the bottom/right.
    pub fn crop_square(&self, rect: Rect) -> Result<GrayImage> {
        let window = self.crop(rect)?;
        if window.is_square() {
            return Ok(window);
        }
        let side = rect.width.max(rect.height);
        let mut pixels = vec![0.0; side * side];
        for y in 0..window.height {
            let src = &window.pixels[y * window.width..(y + 1) * window.width];
            pixels[y * side..y * side + window.width].copy_from_slice(src);
        }
        Ok(GrayImage {
            width: side,
            height: side,
            pixels,
        })
    }
}
