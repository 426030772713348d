use std::path::Path;

use image::{imageops, DynamicImage, ImageBuffer, Luma};

use crate::error::{Error, Result};
use crate::gray::GrayImage;

/// Default side of standardized images.
pub const DEFAULT_SIDE: usize = 256;
pub const MIN_SIDE: usize = 16;

/// How an image is brought to `side x side`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ResizeMode {
    /// Scale (bilinear, aspect preserving) until the longer side fits, then
    /// zero-pad symmetrically.
    #[default]
    ScaleThenPad,
    /// Zero-pad symmetrically without scaling; larger images are
    /// center-cropped.
    PadOnly,
}

impl ResizeMode {
    pub fn name(&self) -> &'static str {
        match self {
            ResizeMode::ScaleThenPad => "scale",
            ResizeMode::PadOnly => "pad",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "scale" => Ok(ResizeMode::ScaleThenPad),
            "pad" => Ok(ResizeMode::PadOnly),
            other => Err(Error::InvalidParams(format!("unknown resize mode `{other}`"))),
        }
    }
}

/// Decodes PNG, PGM, BMP or JPEG into grayscale intensities in `[0, 255]`.
/// Color images are converted with the usual luma weights.
pub fn load_image(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let decoded = image::open(path).map_err(|source| Error::Decode {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(from_dynamic(&decoded))
}

pub fn from_dynamic(img: &DynamicImage) -> GrayImage {
    let (w, h) = (img.width() as usize, img.height() as usize);
    let pixels: Vec<f64> = match img {
        DynamicImage::ImageLuma8(_)
        | DynamicImage::ImageLumaA8(_)
        | DynamicImage::ImageRgb8(_)
        | DynamicImage::ImageRgba8(_) => img.to_luma8().into_raw().into_iter().map(f64::from).collect(),
        _ => img
            .to_luma32f()
            .into_raw()
            .into_iter()
            .map(|v| (f64::from(v) * 255.0).clamp(0.0, 255.0))
            .collect(),
    };
    GrayImage::new(w, h, pixels).expect("decoded image has valid intensities")
}

/// Converts to an 8-bit image, clamping to `[0, 255]`.
pub fn to_luma8(img: &GrayImage) -> ImageBuffer<Luma<u8>, Vec<u8>> {
    let raw = img
        .pixels()
        .iter()
        .map(|v| v.round().clamp(0.0, 255.0) as u8)
        .collect();
    ImageBuffer::from_raw(img.width() as u32, img.height() as u32, raw).expect("buffer size matches")
}

// The resampler clamps float pixels to [0, 1], so intensities are scaled
// into that range and back.
fn resize_bilinear(img: &GrayImage, width: usize, height: usize) -> GrayImage {
    let peak = img.pixels().iter().copied().fold(0.0, f64::max);
    if peak == 0.0 {
        return GrayImage::zeros(width, height).expect("target size is positive");
    }
    let buf: ImageBuffer<Luma<f32>, Vec<f32>> = ImageBuffer::from_raw(
        img.width() as u32,
        img.height() as u32,
        img.pixels().iter().map(|v| (v / peak) as f32).collect(),
    )
    .expect("buffer size matches");
    let out = imageops::resize(&buf, width as u32, height as u32, imageops::FilterType::Triangle);
    let pixels = out.into_raw().into_iter().map(|v| f64::from(v).max(0.0) * peak).collect();
    GrayImage::new(width, height, pixels).expect("resized image is valid")
}

// Places `img` centered on a zero canvas, cropping whatever does not fit.
fn center_on_canvas(img: &GrayImage, side: usize) -> GrayImage {
    let mut pixels = vec![0.0; side * side];
    let offset = |src: usize| -> (usize, usize, usize) {
        // (source start, destination start, length)
        if src <= side {
            (0, (side - src) / 2, src)
        } else {
            ((src - side) / 2, 0, side)
        }
    };
    let (sx, dx, w) = offset(img.width());
    let (sy, dy, h) = offset(img.height());
    for row in 0..h {
        let src = (sy + row) * img.width() + sx;
        let dst = (dy + row) * side + dx;
        pixels[dst..dst + w].copy_from_slice(&img.pixels()[src..src + w]);
    }
    GrayImage::new(side, side, pixels).expect("canvas is valid")
}

/// Brings `image` to `side x side`. Images that already have that size are
/// returned unchanged.
pub fn standardize(image: &GrayImage, side: usize, mode: ResizeMode) -> Result<GrayImage> {
    if side < MIN_SIDE {
        return Err(Error::InvalidParams(format!("side must be >= {MIN_SIDE}, got {side}")));
    }
    if image.width() == side && image.height() == side {
        return Ok(image.clone());
    }
    match mode {
        ResizeMode::PadOnly => Ok(center_on_canvas(image, side)),
        ResizeMode::ScaleThenPad => {
            let longer = image.width().max(image.height()) as f64;
            let scale = side as f64 / longer;
            let w = ((image.width() as f64 * scale).round() as usize).clamp(1, side);
            let h = ((image.height() as f64 * scale).round() as usize).clamp(1, side);
            let scaled = if (w, h) == (image.width(), image.height()) {
                image.clone()
            } else {
                resize_bilinear(image, w, h)
            };
            Ok(center_on_canvas(&scaled, side))
        }
    }
}
