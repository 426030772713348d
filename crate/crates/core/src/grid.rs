use crate::error::{Error, Result};
use crate::gray::{GrayImage, Rect};

/// Largest accepted overlap fraction between adjacent blocks.
pub const MAX_OVERLAP: f64 = 0.9;

/// Regular dense-sampling layout of (possibly overlapping) blocks.
///
/// Windows are stored in row-major block order. The last row and column
/// absorb rounding remainders so that the windows always reach the image
/// border.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockGrid {
    pub n_rows: usize,
    pub n_cols: usize,
    pub overlap: f64,
    pub windows: Vec<Rect>,
}

impl BlockGrid {
    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    /// Window of block `(row, col)`.
    pub fn window(&self, row: usize, col: usize) -> Rect {
        self.windows[row * self.n_cols + col]
    }
}

// Splits `extent` pixels into `n` windows where neighbours share `overlap`
// of the window size. Returns (start, size) pairs.
fn split_axis(extent: usize, n: usize, overlap: f64) -> Vec<(usize, usize)> {
    let size = (extent as f64 / ((n - 1) as f64 * (1.0 - overlap) + 1.0)).floor() as usize;
    let stride = ((size as f64 * (1.0 - overlap)).round() as usize).max(1);
    (0..n)
        .map(|k| {
            let start = k * stride;
            let len = if k + 1 == n { extent - start } else { size };
            (start, len)
        })
        .collect()
}

/// Lays an `n_rows x n_cols` grid of blocks over `image`.
///
/// With `overlap = 0` the blocks partition the image; with `overlap = f`
/// adjacent blocks share a fraction `f` of their side.
pub fn block_grid(image: &GrayImage, n_rows: usize, n_cols: usize, overlap: f64) -> Result<BlockGrid> {
    if n_rows == 0 || n_cols == 0 {
        return Err(Error::InvalidGrid(format!(
            "grid must have at least one block, got {n_rows}x{n_cols}"
        )));
    }
    if !(0.0..=MAX_OVERLAP).contains(&overlap) {
        return Err(Error::InvalidGrid(format!(
            "overlap {overlap} outside [0, {MAX_OVERLAP}]"
        )));
    }
    let too_fine = |extent: usize, n: usize| {
        (extent as f64 / ((n - 1) as f64 * (1.0 - overlap) + 1.0)) < 1.0
            || n > extent
    };
    if too_fine(image.width(), n_cols) || too_fine(image.height(), n_rows) {
        return Err(Error::InvalidGrid(format!(
            "{n_rows}x{n_cols} grid is finer than one pixel per block on a {}x{} image",
            image.width(),
            image.height()
        )));
    }

    let cols = split_axis(image.width(), n_cols, overlap);
    let rows = split_axis(image.height(), n_rows, overlap);
    let windows = rows
        .iter()
        .flat_map(|&(y, h)| cols.iter().map(move |&(x, w)| Rect::new(x, y, w, h)))
        .collect();
    Ok(BlockGrid {
        n_rows,
        n_cols,
        overlap,
        windows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn image(side: usize) -> GrayImage {
        GrayImage::zeros(side, side).unwrap()
    }

    #[test]
    fn five_by_five_partitions_256() {
        let g = block_grid(&image(256), 5, 5, 0.0).unwrap();
        assert_eq!(g.len(), 25);
        let mut covered = vec![0u8; 256 * 256];
        for r in &g.windows {
            assert!(r.width >= 51 && r.width <= 51 + 4);
            assert!(r.height >= 51 && r.height <= 51 + 4);
            for y in r.y..r.bottom() {
                for x in r.x..r.right() {
                    covered[y * 256 + x] += 1;
                }
            }
        }
        assert!(covered.iter().all(|c| *c == 1));
    }

    #[test]
    fn single_block_is_whole_image() {
        let g = block_grid(&image(256), 1, 1, 0.0).unwrap();
        assert_eq!(g.windows, vec![Rect::new(0, 0, 256, 256)]);
    }

    #[test]
    fn half_overlap_shares_half_the_width() {
        let g = block_grid(&image(256), 3, 3, 0.5).unwrap();
        assert_eq!(g.len(), 9);
        for row in 0..3 {
            for col in 0..2 {
                let a = g.window(row, col);
                let b = g.window(row, col + 1);
                let shared = a.right() - b.x;
                assert_eq!(shared * 2, a.width);
            }
        }
        assert_eq!(g.window(2, 2).right(), 256);
        assert_eq!(g.window(2, 2).bottom(), 256);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(block_grid(&image(4), 0, 1, 0.0).is_err());
        assert!(block_grid(&image(4), 5, 5, 0.0).is_err());
        assert!(block_grid(&image(4), 2, 2, 0.95).is_err());
    }
}
