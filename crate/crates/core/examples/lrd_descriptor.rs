//! Extracts descriptors with both presets and a custom configuration.

use lrd::descriptor::{Normalization, PairingKind};
use lrd::{lrd_descriptor, GrayImage, LrdParams};

fn texture(side: usize) -> lrd::Result<GrayImage> {
    GrayImage::from_fn(side, side, |x, y| {
        let stripes = if (x + 2 * y) % 16 < 6 { 200.0 } else { 40.0 };
        let blob = if x > side / 2 && y > side / 2 { 55.0 } else { 0.0 };
        stripes + blob
    })
}

fn main() -> lrd::Result<()> {
    let image = texture(256)?;
    let custom = LrdParams::new(4, 16, 12, PairingKind::Orthogonal)?
        .with_overlap(0.25)
        .with_normalization(Normalization::None);

    for (name, params) in [("irma", LrdParams::irma()), ("holidays", LrdParams::holidays()), ("custom", custom)] {
        let d = lrd_descriptor(&image, &params)?;
        let nonzero = d.values.iter().filter(|v| **v > 0.0).count();
        println!(
            "{name:<9} length {:>4} (expected {:>4})  mass {:>10.3}  non-zero {nonzero}",
            d.len(),
            params.length(),
            d.mass()
        );
        println!("          {}", d.params_digest);
    }
    Ok(())
}
