//! Local Radon descriptor (LRD) and the global Radon baseline.
//!
//! For every block of a dense grid the window is projected at `n`
//! equidistant angles. Each projection is differentiated along the detector
//! axis, and for every configured pair of angles the element-wise direction
//! `atan2(d_first, d_second)` is quantized into `b` bins over `[-pi, pi]`,
//! weighted by `|d_first + d_second|`. All pairs of a block feed the same
//! `b`-bin histogram; the descriptor is the row-major concatenation of the
//! block histograms.

mod global;
mod pairing;
pub(crate) mod params;

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::block_grid;
use crate::gray::GrayImage;
use crate::radon::{ProjectionSet, RadonProjector};

pub use global::global_radon_descriptor;
pub use pairing::{pair_angles, PairingKind, PairingScheme};
pub use params::{parse_grid, Extractor, GrParams, LrdParams, Normalization};

/// Flat feature vector tagged with the configuration that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Descriptor {
    pub values: Vec<f64>,
    pub params_digest: String,
    pub source_id: String,
}

impl Descriptor {
    pub fn new(values: Vec<f64>, params_digest: impl Into<String>) -> Self {
        Self {
            values,
            params_digest: params_digest.into(),
            source_id: String::new(),
        }
    }

    pub fn with_source_id(mut self, id: impl Into<String>) -> Self {
        self.source_id = id.into();
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mass(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Rounds every value to `f32`, the precision of descriptor files, so a
    /// fresh descriptor compares exactly with its stored copy.
    pub fn at_stored_precision(mut self) -> Self {
        self.values.iter_mut().for_each(|v| *v = f64::from(*v as f32));
        self
    }
}

/// First differences of every projection along the detector axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivatives {
    len: usize,
    // column-major, like ProjectionSet
    values: Vec<f64>,
}

impl Derivatives {
    /// Length of each derivative vector (`L - 1`).
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn n_angles(&self) -> usize {
        self.values.len() / self.len
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.values[j * self.len..(j + 1) * self.len]
    }

    pub fn pair(&self, (first, second): (usize, usize)) -> DerivativePair<'_> {
        DerivativePair {
            first: self.column(first),
            second: self.column(second),
        }
    }
}

/// Derivative vectors of two paired directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativePair<'a> {
    first: &'a [f64],
    second: &'a [f64],
}

impl<'a> DerivativePair<'a> {
    pub fn new(first: &'a [f64], second: &'a [f64]) -> Result<Self> {
        if first.len() != second.len() {
            return Err(Error::LengthMismatch {
                expected: first.len(),
                actual: second.len(),
            });
        }
        Ok(Self { first, second })
    }

    pub fn first(&self) -> &'a [f64] {
        self.first
    }

    pub fn second(&self) -> &'a [f64] {
        self.second
    }
}

/// `d_j(i) = R(rho_{i+1}, theta_j) - R(rho_i, theta_j)` for every angle.
pub fn derivatives(proj: &ProjectionSet) -> Result<Derivatives> {
    let l = proj.detector_length();
    if l < 2 {
        return Err(Error::InvalidParams(format!(
            "detector length {l} too short to differentiate"
        )));
    }
    let mut values = Vec::with_capacity((l - 1) * proj.n_angles());
    for column in proj.columns() {
        values.extend(column.windows(2).map(|w| w[1] - w[0]));
    }
    Ok(Derivatives { len: l - 1, values })
}

/// Bin of `angle` under uniform left-closed quantization of `[-pi, pi]`,
/// with `pi` itself in the last bin.
pub fn angle_bin(angle: f64, bins: usize) -> usize {
    let bin = ((angle + PI) / (2.0 * PI) * bins as f64).floor() as usize;
    bin.min(bins - 1)
}

fn accumulate_pair(pair: DerivativePair<'_>, hist: &mut [f64]) {
    let bins = hist.len();
    for (&a, &b) in pair.first.iter().zip(pair.second) {
        let weight = (a + b).abs();
        if weight == 0.0 {
            continue;
        }
        hist[angle_bin(a.atan2(b), bins)] += weight;
    }
}

/// Weighted direction histogram of one derivative pair.
pub fn pair_histogram(pair: DerivativePair<'_>, bins: usize) -> Result<Vec<f64>> {
    if bins < 2 {
        return Err(Error::InvalidParams(format!("need at least 2 bins, got {bins}")));
    }
    let mut hist = vec![0.0; bins];
    accumulate_pair(pair, &mut hist);
    Ok(hist)
}

/// Histogram of one window accumulated over all pairs of `params`.
/// `projector` must use the angles of `params`.
pub fn block_histogram(window: &GrayImage, projector: &RadonProjector, params: &LrdParams) -> Result<Vec<f64>> {
    let proj = projector.project(window)?;
    let deriv = derivatives(&proj)?;
    let mut hist = vec![0.0; params.bins];
    for &pair in params.pairing.pairs() {
        accumulate_pair(deriv.pair(pair), &mut hist);
    }
    if params.normalize == Normalization::L1 {
        let mass: f64 = hist.iter().sum();
        if mass > 0.0 {
            hist.iter_mut().for_each(|v| *v /= mass);
        }
    }
    Ok(hist)
}

/// Local Radon descriptor of `image`.
///
/// Blocks that are not square (remainder rows/columns) are zero-padded to
/// a square before projection.
pub fn lrd_descriptor(image: &GrayImage, params: &LrdParams) -> Result<Descriptor> {
    params.validate()?;
    let grid = block_grid(image, params.n_rows, params.n_cols, params.overlap)?;
    let projector = RadonProjector::new(&params.angles())?;
    let blocks = grid
        .windows
        .par_iter()
        .map(|&rect| block_histogram(&image.crop_square(rect)?, &projector, params))
        .collect::<Result<Vec<_>>>()?;
    let values = blocks.concat();
    debug_assert_eq!(values.len(), params.length());
    Ok(Descriptor::new(values, Extractor::Lrd(params.clone()).digest()))
}

impl Extractor {
    pub fn extract(&self, image: &GrayImage) -> Result<Descriptor> {
        match self {
            Extractor::Lrd(p) => lrd_descriptor(image, p),
            Extractor::Gr(p) => global_radon_descriptor(image, p),
        }
    }
}
