//! Discrete Radon projections of square windows.
//!
//! The window is modelled as the bilinear interpolation of its pixel
//! centers. For a direction `theta` every pixel contributes its projected
//! bilinear tent, centered at `rho = x cos(theta) + y sin(theta)`
//! (coordinates relative to the window center, `y` pointing down the
//! rows). The tent projection is the convolution of two triangles of
//! half-widths `|cos(theta)|` and `|sin(theta)|`; it is sampled at the
//! detector bins and rescaled so each pixel deposits exactly its own
//! intensity. Every projection therefore sums to the window's total
//! intensity. On the axes the tent projects to a unit triangle, i.e. plain
//! linear interpolation between the two nearest bins.
//!
//! All angles of one window share a detector of `ceil(w * sqrt(2)) + 1` bins
//! centered on `rho = 0`, wide enough for the window diagonal. Bins that no
//! pixel reaches stay zero.

use crate::error::{Error, Result};
use crate::gray::GrayImage;

/// Projection directions in degrees, each in `[0, 180)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleSet {
    degrees: Vec<f64>,
}

impl AngleSet {
    /// `n` equidistant directions `j * 180 / n` for `j = 0..n`.
    pub fn equidistant(n: usize) -> Result<Self> {
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::InvalidAngles(format!(
                "angle count must be even and >= 2, got {n}"
            )));
        }
        let step = 180.0 / n as f64;
        Ok(Self {
            degrees: (0..n).map(|j| j as f64 * step).collect(),
        })
    }

    /// An arbitrary list of directions, for diagnostics and baselines.
    pub fn custom(degrees: Vec<f64>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::InvalidAngles("empty angle list".into()));
        }
        if let Some(a) = degrees.iter().find(|a| !a.is_finite() || **a < 0.0 || **a >= 180.0) {
            return Err(Error::InvalidAngles(format!("angle {a} outside [0, 180)")));
        }
        Ok(Self { degrees })
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    /// Index of the direction equal to `degrees` (within 1e-9), if present.
    pub fn position(&self, degrees: f64) -> Option<usize> {
        self.degrees.iter().position(|a| (a - degrees).abs() < 1e-9)
    }
}

/// Detector length shared by every projection of a `side x side` window.
pub fn detector_length(side: usize) -> usize {
    (side as f64 * std::f64::consts::SQRT_2).ceil() as usize + 1
}

// Exact unit vectors on the axes keep 0/90 degree projections free of
// 1e-17 cross terms.
fn direction(deg: f64) -> (f64, f64) {
    if deg == 0.0 {
        (0.0, 1.0)
    } else if deg == 90.0 {
        (1.0, 0.0)
    } else {
        deg.to_radians().sin_cos()
    }
}

// Unit-area triangle of half-width `a`.
fn triangle(u: f64, a: f64) -> f64 {
    (1.0 - (u / a).abs()).max(0.0) / a
}

// Piecewise Simpson integration of the triangle convolution; exact because
// the integrand is quadratic between knots.
fn tent_projection_quadrature(u: f64, a: f64, b: f64) -> f64 {
    let mut knots = [-b, 0.0, b, u - a, u, u + a];
    knots.sort_by(f64::total_cmp);
    let f = |v: f64| triangle(u - v, a) * triangle(v, b);
    knots
        .windows(2)
        .map(|k| (k[0].max(-b), k[1].min(b)))
        .filter(|(l, r)| r > l)
        .map(|(l, r)| (r - l) / 6.0 * (f(l) + 4.0 * f((l + r) / 2.0) + f(r)))
        .sum()
}

/// Projection of a unit bilinear tent onto a direction with
/// `a = |cos|`, `b = |sin|`: the convolution of unit-area triangles of
/// half-widths `a` and `b`.
///
/// Uses the truncated-power form
/// `sum_ij c_i c_j (-u - i a - j b)_+^3 / (6 a^2 b^2)` with `c = (1, -2, 1)`,
/// which loses precision as `a * b -> 0`; near the axes the convolution is
/// integrated piecewise instead.
pub fn tent_projection(u: f64, a: f64, b: f64) -> f64 {
    const COEF: [(f64, f64); 3] = [(-1.0, 1.0), (0.0, -2.0), (1.0, 1.0)];
    let (a, b) = if a >= b { (a, b) } else { (b, a) };
    if b == 0.0 {
        return triangle(u, a);
    }
    let u = u.abs();
    if u >= a + b {
        return 0.0;
    }
    if a * b < 1e-3 {
        return tent_projection_quadrature(u, a, b);
    }
    // Same sum over the mirrored powers (-x)_+^3; for u >= 0 only the few
    // terms left of the origin survive, so the tail carries no cancellation
    // noise.
    let mut acc = 0.0;
    for (i, ci) in COEF {
        for (j, cj) in COEF {
            let x = -(u + i * a + j * b);
            if x > 0.0 {
                acc += ci * cj * x * x * x;
            }
        }
    }
    (acc / (6.0 * a * a * b * b)).max(0.0)
}

// Projected tent for one direction.
#[derive(Debug, Clone, Copy)]
struct Footprint {
    sin: f64,
    cos: f64,
    // half-width of the footprint; 0 marks the axis-aligned fast path
    reach: f64,
}

impl Footprint {
    fn new(deg: f64) -> Self {
        let (sin, cos) = direction(deg);
        let reach = if sin == 0.0 || cos == 0.0 {
            0.0
        } else {
            sin.abs() + cos.abs()
        };
        Self { sin, cos, reach }
    }

    // Deposits `v` centered at detector coordinate `t` (in bin units).
    fn splat(&self, column: &mut [f64], t: f64, v: f64) {
        if self.reach == 0.0 {
            let lower = t.floor();
            let frac = t - lower;
            let i = lower as usize;
            column[i] += v * (1.0 - frac);
            if frac > 0.0 {
                column[i + 1] += v * frac;
            }
            return;
        }
        let (a, b) = (self.cos.abs(), self.sin.abs());
        let lo = (t - self.reach).ceil().max(0.0) as usize;
        let hi = ((t + self.reach).floor() as usize).min(column.len() - 1);
        // reach <= sqrt(2), so at most three bins are touched
        let mut weights = [0.0; 3];
        let mut total = 0.0;
        for (w, i) in weights.iter_mut().zip(lo..=hi) {
            *w = tent_projection(i as f64 - t, a, b);
            total += *w;
        }
        let scale = v / total;
        for (w, c) in weights.iter().zip(&mut column[lo..=hi]) {
            *c += w * scale;
        }
    }
}

/// Projects square windows at a fixed set of angles.
#[derive(Debug, Clone)]
pub struct RadonProjector {
    angles: AngleSet,
    footprints: Vec<Footprint>,
}

impl RadonProjector {
    pub fn new(angles: &AngleSet) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::InvalidAngles("empty angle list".into()));
        }
        Ok(Self {
            angles: angles.clone(),
            footprints: angles.degrees().iter().map(|d| Footprint::new(*d)).collect(),
        })
    }

    pub fn angles(&self) -> &AngleSet {
        &self.angles
    }

    pub fn project(&self, window: &GrayImage) -> Result<ProjectionSet> {
        if !window.is_square() {
            return Err(Error::NonSquareWindow {
                width: window.width(),
                height: window.height(),
            });
        }
        let side = window.width();
        let l = detector_length(side);
        let half_detector = (l - 1) as f64 / 2.0;
        let half_window = side as f64 / 2.0;
        let mut values = vec![0.0; l * self.footprints.len()];

        for (column, fp) in values.chunks_exact_mut(l).zip(&self.footprints) {
            for (y, row) in window.pixels().chunks_exact(side).enumerate() {
                let cy = y as f64 + 0.5 - half_window;
                for (x, &v) in row.iter().enumerate() {
                    if v == 0.0 {
                        continue;
                    }
                    let cx = x as f64 + 0.5 - half_window;
                    fp.splat(column, cx * fp.cos + cy * fp.sin + half_detector, v);
                }
            }
        }

        Ok(ProjectionSet {
            window_size: side,
            detector_length: l,
            angles: self.angles.clone(),
            values,
        })
    }
}

/// Radon projections of one square window, one column per angle.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionSet {
    window_size: usize,
    detector_length: usize,
    angles: AngleSet,
    // column-major: angle j occupies values[j * L..(j + 1) * L]
    values: Vec<f64>,
}

impl ProjectionSet {
    pub fn window_size(&self) -> usize {
        self.window_size
    }

    pub fn detector_length(&self) -> usize {
        self.detector_length
    }

    pub fn angles(&self) -> &AngleSet {
        &self.angles
    }

    pub fn n_angles(&self) -> usize {
        self.angles.len()
    }

    /// Projection at angle index `j`.
    pub fn column(&self, j: usize) -> &[f64] {
        let l = self.detector_length;
        &self.values[j * l..(j + 1) * l]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.detector_length)
    }

    /// `R(rho_i, theta_j)`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.detector_length + i]
    }

    /// Detector coordinate of bin `i`.
    pub fn rho(&self, i: usize) -> f64 {
        i as f64 - (self.detector_length - 1) as f64 / 2.0
    }
}

/// Projects a square window onto the common detector grid at every angle.
pub fn radon_project(window: &GrayImage, angles: &AngleSet) -> Result<ProjectionSet> {
    RadonProjector::new(angles)?.project(window)
}

/// 180 projections at 1 degree spacing. Non-square images are zero-padded
/// at the bottom/right to a square first.
pub fn sinogram(image: &GrayImage) -> Result<ProjectionSet> {
    let angles = AngleSet::equidistant(180)?;
    if image.is_square() {
        radon_project(image, &angles)
    } else {
        let rect = crate::gray::Rect::new(0, 0, image.width(), image.height());
        radon_project(&image.crop_square(rect)?, &angles)
    }
}
