//! Brings non-square images to the common 256x256 canvas with both resize
//! modes.

use lrd::io::{standardize, ResizeMode, DEFAULT_SIDE};
use lrd::GrayImage;

fn main() -> lrd::Result<()> {
    for (w, h) in [(400, 300), (120, 200), (600, 600)] {
        let image = GrayImage::filled(w, h, 100.0)?;
        for mode in [ResizeMode::ScaleThenPad, ResizeMode::PadOnly] {
            let out = standardize(&image, DEFAULT_SIDE, mode)?;
            let covered = out.pixels().iter().filter(|v| **v > 0.0).count();
            println!(
                "{w}x{h} {:<14} -> {}x{}  covered {covered:>6} px  mass {:.0}",
                mode.name(),
                out.width(),
                out.height(),
                out.mass()
            );
        }
    }
    Ok(())
}
