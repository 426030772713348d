//! Two images that contain the same patches in swapped positions: the global
//! Radon baseline barely tells them apart, the local descriptor does.

use lrd::{global_radon_descriptor, lrd_descriptor, GrParams, GrayImage, LrdParams, Metric};

const SIDE: usize = 256;
const BLOCK: usize = 51;

fn background(x: usize, y: usize) -> f64 {
    ((x * 7 + y * 13) % 23) as f64
}

fn bars(_: usize, y: usize) -> f64 {
    if y % 8 < 2 { 255.0 } else { 0.0 }
}

fn speckle(x: usize, y: usize) -> f64 {
    ((x * 131 + y * 71 + x * y * 17) % 251) as f64
}

fn compose(swapped: bool) -> lrd::Result<GrayImage> {
    let (first, second) = (0, 2 * BLOCK);
    GrayImage::from_fn(SIDE, SIDE, |x, y| {
        let row = [first, second].iter().position(|s| (*s..s + BLOCK).contains(&y));
        let col = [BLOCK, 3 * BLOCK].iter().position(|s| (*s..s + BLOCK).contains(&x));
        match (row, col) {
            (Some(r), Some(c)) => {
                let diagonal = r == c;
                let (px, py) = (x % BLOCK, y % BLOCK);
                if diagonal != swapped { bars(px, py) } else { speckle(px, py) }
            }
            _ => background(x, y),
        }
    })
}

fn main() -> lrd::Result<()> {
    let a = compose(false)?;
    let b = compose(true)?;
    let gr = GrParams { n_angles: 2, target_length: None };

    let (ga, gb) = (global_radon_descriptor(&a, &gr)?, global_radon_descriptor(&b, &gr)?);
    let (la, lb) = (lrd_descriptor(&a, &LrdParams::irma())?, lrd_descriptor(&b, &LrdParams::irma())?);

    let rel = |x: &lrd::Descriptor, y: &lrd::Descriptor| Metric::L1.eval(&x.values, &y.values) / (x.mass() + y.mass());
    println!("global radon: relative L1 {:.3e}", rel(&ga, &gb));
    println!("local radon:  relative L1 {:.3e}", rel(&la, &lb));
    Ok(())
}
