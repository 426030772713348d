//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's projection, histogram or search code.

#![allow(dead_code)]

use rand::Rng;

/// Square window as rows of intensities.
pub type Window = Vec<Vec<f64>>;

pub fn random_window<R: Rng>(rng: &mut R, side: usize) -> Window {
    (0..side)
        .map(|_| (0..side).map(|_| rng.gen_range(0.0..255.0)).collect())
        .collect()
}

pub fn flatten(w: &Window) -> Vec<f64> {
    w.iter().flatten().copied().collect()
}

// Bilinear interpolation of pixel-center samples (pixel (x, y) sits at
// (x + 0.5, y + 0.5)); zero outside the sampled grid.
fn bilinear(w: &Window, px: f64, py: f64) -> f64 {
    let n = w.len() as isize;
    let gx = px - 0.5;
    let gy = py - 0.5;
    let x0 = gx.floor();
    let y0 = gy.floor();
    let fx = gx - x0;
    let fy = gy - y0;
    let sample = |x: isize, y: isize| {
        if x < 0 || y < 0 || x >= n || y >= n {
            0.0
        } else {
            w[y as usize][x as usize]
        }
    };
    let (x0, y0) = (x0 as isize, y0 as isize);
    sample(x0, y0) * (1.0 - fx) * (1.0 - fy)
        + sample(x0 + 1, y0) * fx * (1.0 - fy)
        + sample(x0, y0 + 1) * (1.0 - fx) * fy
        + sample(x0 + 1, y0 + 1) * fx * fy
}

/// Line-integral projection: for every detector offset, walk the line
/// across the window in 0.1 pixel steps and sum bilinear intensities.
pub fn rasterized_projection(w: &Window, degrees: f64, detector_len: usize) -> Vec<f64> {
    const STEP: f64 = 0.1;
    let side = w.len() as f64;
    let c = side / 2.0;
    let theta = degrees.to_radians();
    let (dir_x, dir_y) = (theta.cos(), theta.sin());
    let (along_x, along_y) = (-theta.sin(), theta.cos());
    let reach = side; // longer than the padded diagonal half-length
    let steps = (2.0 * reach / STEP).round() as usize;
    (0..detector_len)
        .map(|i| {
            let rho = i as f64 - (detector_len - 1) as f64 / 2.0;
            let mut acc = 0.0;
            for k in 0..steps {
                let t = -reach + (k as f64 + 0.5) * STEP;
                let px = c + rho * dir_x + t * along_x;
                let py = c + rho * dir_y + t * along_y;
                acc += bilinear(w, px, py);
            }
            acc * STEP
        })
        .collect()
}

pub fn detector_len(side: usize) -> usize {
    (side as f64 * 2f64.sqrt()).ceil() as usize + 1
}

// ---------------------------------------------------------------------------
// Straight-line reference LRD. Everything below is written from the
// algorithm description only: pixel footprints, detector grid, block
// layout, pairing, derivatives and histograms are recomputed here.

/// Reference extraction settings.
pub struct RefConfig {
    pub rows: usize,
    pub cols: usize,
    pub overlap: f64,
    pub bins: usize,
    pub degrees: Vec<f64>,
    /// Pairs of angles in degrees: (numerator, denominator) of the atan2.
    pub pairs: Vec<(f64, f64)>,
    pub normalize: bool,
}

/// Characteristic pairing written out by hand: 0 degrees against every
/// angle strictly between 0 and 90, 90 degrees against every angle above.
pub fn characteristic_pairs(degrees: &[f64]) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = degrees
        .iter()
        .filter(|d| **d > 0.0 && **d < 90.0)
        .map(|d| (0.0, *d))
        .collect();
    out.extend(degrees.iter().filter(|d| **d > 90.0).map(|d| (90.0, *d)));
    out
}

pub fn ten_degree_angles() -> Vec<f64> {
    (0..18).map(|k| 10.0 * k as f64).collect()
}

// Unit-area triangle of half-width h.
fn tri(u: f64, h: f64) -> f64 {
    if u.abs() >= h {
        0.0
    } else {
        (h - u.abs()) / (h * h)
    }
}

/// Projection of one pixel's bilinear tent onto detector offset `u`:
/// integral of tri_a(u - v) * tri_b(v) dv by two-point Gauss-Legendre on
/// every linear piece.
pub fn footprint(u: f64, a: f64, b: f64) -> f64 {
    if b < 1e-12 {
        return tri(u, a);
    }
    if a < 1e-12 {
        return tri(u, b);
    }
    let mut cuts = vec![-b, 0.0, b, u - a, u, u + a];
    cuts.retain(|c| *c >= -b && *c <= b);
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let g = 0.5 / 3f64.sqrt();
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let len = hi - lo;
        for v in [mid - g * len, mid + g * len] {
            total += 0.5 * len * tri(u - v, a) * tri(v, b);
        }
    }
    total
}

/// Projection of a square window at one angle onto `ceil(side*sqrt2)+1`
/// detector bins, each pixel's footprint rescaled to unit mass.
pub fn reference_projection(w: &Window, degrees: f64) -> Vec<f64> {
    let side = w.len();
    let len = detector_len(side);
    let (mut s, mut c) = degrees.to_radians().sin_cos();
    if s.abs() < 1e-12 {
        s = 0.0;
    }
    if c.abs() < 1e-12 {
        c = 0.0;
    }
    let (a, b) = (c.abs(), s.abs());
    let reach = a + b;
    let centre = (len - 1) as f64 / 2.0;
    let mut out = vec![0.0; len];
    for (y, row) in w.iter().enumerate() {
        for (x, &v) in row.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            let px = x as f64 + 0.5 - side as f64 / 2.0;
            let py = y as f64 + 0.5 - side as f64 / 2.0;
            let t = px * c + py * s + centre;
            let first = (t - reach).ceil().max(0.0) as usize;
            let last = ((t + reach).floor() as usize).min(len - 1);
            let weights: Vec<f64> = (first..=last).map(|i| footprint(i as f64 - t, a, b)).collect();
            let sum: f64 = weights.iter().sum();
            for (i, wt) in (first..=last).zip(weights) {
                out[i] += v * wt / sum;
            }
        }
    }
    out
}

// Block windows along one axis: (start, length).
fn spans(extent: usize, n: usize, overlap: f64) -> Vec<(usize, usize)> {
    let size = (extent as f64 / ((n as f64 - 1.0) * (1.0 - overlap) + 1.0)).floor() as usize;
    let stride = ((size as f64 * (1.0 - overlap)).round() as usize).max(1);
    let mut out = Vec::new();
    for k in 0..n {
        let start = k * stride;
        let length = if k == n - 1 { extent - start } else { size };
        out.push((start, length));
    }
    out
}

/// Full LRD of a row-major image.
pub fn reference_lrd(img: &Window, cfg: &RefConfig) -> Vec<f64> {
    let height = img.len();
    let width = img[0].len();
    let mut descriptor = Vec::new();
    for (y0, h) in spans(height, cfg.rows, cfg.overlap) {
        for (x0, wd) in spans(width, cfg.cols, cfg.overlap) {
            // copy the block into a zero square of side max(w, h)
            let side = wd.max(h);
            let mut block = vec![vec![0.0; side]; side];
            for y in 0..h {
                for x in 0..wd {
                    block[y][x] = img[y0 + y][x0 + x];
                }
            }
            let mut hist = vec![0.0; cfg.bins];
            for &(p, q) in &cfg.pairs {
                let rp = reference_projection(&block, p);
                let rq = reference_projection(&block, q);
                for i in 0..rp.len() - 1 {
                    let dp = rp[i + 1] - rp[i];
                    let dq = rq[i + 1] - rq[i];
                    let weight = (dp + dq).abs();
                    if weight == 0.0 {
                        continue;
                    }
                    let angle = dp.atan2(dq);
                    let pi = std::f64::consts::PI;
                    let mut bin = ((angle + pi) / (2.0 * pi) * cfg.bins as f64) as usize;
                    if bin >= cfg.bins {
                        bin = cfg.bins - 1;
                    }
                    hist[bin] += weight;
                }
            }
            if cfg.normalize {
                let total: f64 = hist.iter().sum();
                if total > 0.0 {
                    for v in hist.iter_mut() {
                        *v /= total;
                    }
                }
            }
            descriptor.extend(hist);
        }
    }
    descriptor
}

// ---------------------------------------------------------------------------
// Retrieval oracles.

pub fn naive_l2(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        let d = a[i] - b[i];
        s += d * d;
    }
    s.sqrt()
}

/// Full scan: every (id, distance) sorted by distance then id.
pub fn brute_force_ranking(
    items: &[(String, Vec<f64>)],
    query: &[f64],
    dist: impl Fn(&[f64], &[f64]) -> f64,
) -> Vec<(String, f64)> {
    let mut all: Vec<(String, f64)> = items.iter().map(|(id, v)| (id.clone(), dist(v, query))).collect();
    all.sort_by(|x, y| x.1.partial_cmp(&y.1).unwrap().then_with(|| x.0.cmp(&y.0)));
    all
}

/// Distances written out from their textbook definitions.
pub fn oracle_distance(name: &str, a: &[f64], b: &[f64]) -> f64 {
    match name {
        "l1" => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
        "l2" => naive_l2(a, b),
        "chi2" => a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y).powi(2) / (x + y + 1e-12))
            .sum(),
        "cosine" => {
            let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
            let na: f64 = a.iter().map(|x| x * x).sum();
            let nb: f64 = b.iter().map(|x| x * x).sum();
            if na == 0.0 && nb == 0.0 {
                0.0
            } else if na == 0.0 || nb == 0.0 {
                1.0
            } else {
                1.0 - dot / (na * nb).sqrt()
            }
        }
        other => panic!("unknown metric {other}"),
    }
}

pub fn to_image(w: &Window) -> lrd::GrayImage {
    lrd::GrayImage::from_fn(w[0].len(), w.len(), |x, y| w[y][x]).unwrap()
}

pub fn random_image<R: Rng>(rng: &mut R, width: usize, height: usize) -> Window {
    (0..height)
        .map(|_| (0..width).map(|_| rng.gen_range(0.0..255.0)).collect())
        .collect()
}
