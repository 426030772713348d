use crate::error::{Error, Result};
use crate::gray::{GrayImage, Rect};
use crate::radon::{radon_project, AngleSet};

use super::{Descriptor, Extractor, GrParams};

/// Global Radon baseline: the whole-image projections, concatenated.
///
/// With a target length each projection is reduced to `target / n_angles`
/// bins by integrating it over equal-width detector intervals, which keeps
/// the projection mass.
pub fn global_radon_descriptor(image: &GrayImage, params: &GrParams) -> Result<Descriptor> {
    let angles = AngleSet::equidistant(params.n_angles)?;
    let square = image.crop_square(Rect::new(0, 0, image.width(), image.height()))?;
    let proj = radon_project(&square, &angles)?;

    let values = match params.target_length {
        None => proj.columns().flatten().copied().collect(),
        Some(target) => {
            if target == 0 || target % params.n_angles != 0 {
                return Err(Error::InvalidParams(format!(
                    "target length {target} is not a positive multiple of {}",
                    params.n_angles
                )));
            }
            let per = target / params.n_angles;
            if per > proj.detector_length() {
                return Err(Error::InvalidParams(format!(
                    "target length {target} exceeds the full length {}",
                    params.n_angles * proj.detector_length()
                )));
            }
            proj.columns().flat_map(|c| integrate_bins(c, per)).collect()
        }
    };
    Ok(Descriptor::new(values, Extractor::Gr(*params).digest()))
}

// Integrates a piecewise-constant signal over `out` equal intervals.
fn integrate_bins(signal: &[f64], out: usize) -> Vec<f64> {
    let scale = signal.len() as f64 / out as f64;
    (0..out)
        .map(|k| {
            let lo = k as f64 * scale;
            let hi = (k + 1) as f64 * scale;
            let mut acc = 0.0;
            let mut i = lo.floor() as usize;
            while (i as f64) < hi && i < signal.len() {
                let overlap = (hi.min(i as f64 + 1.0) - lo.max(i as f64)).max(0.0);
                acc += signal[i] * overlap;
                i += 1;
            }
            acc
        })
        .collect()
}
