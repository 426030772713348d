//! Window layout for the two descriptor presets on a 256x256 image, with
//! and without overlap.

use lrd::grid::block_grid;
use lrd::GrayImage;

fn main() -> lrd::Result<()> {
    let image = GrayImage::zeros(256, 256)?;
    for (n, overlap) in [(5, 0.0), (3, 0.0), (3, 0.25)] {
        let grid = block_grid(&image, n, n, overlap)?;
        println!("{n}x{n} overlap {overlap}: {} windows", grid.len());
        for row in 0..grid.n_rows {
            let cells: Vec<String> = (0..grid.n_cols)
                .map(|col| {
                    let r = grid.window(row, col);
                    format!("({},{} {}x{})", r.x, r.y, r.width, r.height)
                })
                .collect();
            println!("  {}", cells.join(" "));
        }
    }
    Ok(())
}
