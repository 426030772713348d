//! Full 0..180 degree sinogram of a centered square, written as CSV to stdout.

use lrd::{sinogram, GrayImage};

fn main() -> lrd::Result<()> {
    let image = GrayImage::from_fn(32, 32, |x, y| if (12..20).contains(&x) && (12..20).contains(&y) { 1.0 } else { 0.0 })?;
    let sino = sinogram(&image)?;
    eprintln!("{} angles x {} detector bins", sino.n_angles(), sino.detector_length());

    for i in 0..sino.detector_length() {
        let row: Vec<String> = (0..sino.n_angles()).map(|j| format!("{:.4}", sino.get(i, j))).collect();
        println!("{:.1},{}", sino.rho(i), row.join(","));
    }
    Ok(())
}
