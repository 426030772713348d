//! IRMA codes and the hierarchical per-query retrieval error.
//!
//! A code has four axes (technical, directional, anatomical, biological)
//! of 4, 3, 3 and 3 characters. Along an axis, position `i` (1-based) weighs
//! `1 / (b_i * i)` where `b_i` is the branching factor at that position.
//! A correct character costs 0, an unspecified one (`*`) half the weight
//! and a wrong one the full weight; once a position is wrong every later
//! position of the axis counts as wrong. Each axis error is divided by its
//! all-wrong value and the four axis errors are averaged.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const AXIS_LENGTHS: [usize; 4] = [4, 3, 3, 3];
pub const CODE_LENGTH: usize = 13;
pub const WILDCARD: char = '*';
pub const DEFAULT_BRANCHING: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IrmaCode {
    chars: [char; CODE_LENGTH],
}

impl IrmaCode {
    /// Four axis segments, e.g. `("1121", "127", "700", "500")`.
    pub fn axes(&self) -> [String; 4] {
        let mut start = 0;
        AXIS_LENGTHS.map(|len| {
            let s: String = self.chars[start..start + len].iter().collect();
            start += len;
            s
        })
    }

    fn axis(&self, axis: usize) -> &[char] {
        let start: usize = AXIS_LENGTHS[..axis].iter().sum();
        &self.chars[start..start + AXIS_LENGTHS[axis]]
    }
}

impl fmt::Display for IrmaCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.axes().join("-"))
    }
}

impl FromStr for IrmaCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_irma_code(s)
    }
}

/// Parses a 13-character code, with or without `-` axis separators.
pub fn parse_irma_code(text: &str) -> Result<IrmaCode> {
    let fail = |position: usize, reason: String| Error::InvalidIrmaCode {
        code: text.to_string(),
        position,
        reason,
    };
    let trimmed = text.trim();
    let has_separators = trimmed.contains('-');
    if has_separators {
        let parts: Vec<&str> = trimmed.split('-').collect();
        let lens: Vec<usize> = parts.iter().map(|p| p.chars().count()).collect();
        if lens != AXIS_LENGTHS {
            return Err(fail(0, format!("axis lengths {lens:?}, expected {AXIS_LENGTHS:?}")));
        }
    }
    let mut chars = ['0'; CODE_LENGTH];
    let mut n = 0;
    for (pos, c) in trimmed.chars().enumerate() {
        if c == '-' && has_separators {
            continue;
        }
        if !(c.is_ascii_alphanumeric() || c == WILDCARD) {
            return Err(fail(pos, format!("illegal character `{c}`")));
        }
        if n == CODE_LENGTH {
            return Err(fail(pos, format!("more than {CODE_LENGTH} characters")));
        }
        chars[n] = c.to_ascii_lowercase();
        n += 1;
    }
    if n != CODE_LENGTH {
        return Err(fail(n, format!("expected {CODE_LENGTH} characters, got {n}")));
    }
    Ok(IrmaCode { chars })
}

/// Branching factors per axis position.
#[derive(Debug, Clone, PartialEq)]
pub struct IrmaErrorScheme {
    branching: [Vec<f64>; 4],
}

impl Default for IrmaErrorScheme {
    fn default() -> Self {
        Self {
            branching: AXIS_LENGTHS.map(|len| vec![DEFAULT_BRANCHING; len]),
        }
    }
}

impl IrmaErrorScheme {
    /// Replaces the branching factors of one axis.
    pub fn with_branching(mut self, axis: usize, factors: Vec<f64>) -> Result<Self> {
        if axis >= 4 || factors.len() != AXIS_LENGTHS[axis] {
            return Err(Error::InvalidParams(format!(
                "axis {axis} needs {} branching factors",
                AXIS_LENGTHS.get(axis).copied().unwrap_or(0)
            )));
        }
        if factors.iter().any(|b| !(b.is_finite() && *b >= 1.0)) {
            return Err(Error::InvalidParams("branching factors must be >= 1".into()));
        }
        self.branching[axis] = factors;
        Ok(self)
    }

    pub fn uses_default_branching(&self) -> bool {
        self.branching.iter().flatten().all(|b| *b == DEFAULT_BRANCHING)
    }

    /// Normalized error of one axis in `[0, 1]`.
    pub fn axis_error(&self, axis: usize, truth: &IrmaCode, predicted: &IrmaCode) -> f64 {
        let weights = &self.branching[axis];
        let mut err = 0.0;
        let mut max = 0.0;
        let mut wrong = false;
        for (i, (&t, &p)) in truth.axis(axis).iter().zip(predicted.axis(axis)).enumerate() {
            let w = 1.0 / (weights[i] * (i + 1) as f64);
            max += w;
            let delta = if wrong {
                1.0
            } else if t == p {
                0.0
            } else if t == WILDCARD || p == WILDCARD {
                0.5
            } else {
                wrong = true;
                1.0
            };
            err += w * delta;
        }
        err / max
    }

    /// Mean of the four axis errors.
    pub fn error(&self, truth: &IrmaCode, predicted: &IrmaCode) -> f64 {
        (0..4).map(|a| self.axis_error(a, truth, predicted)).sum::<f64>() / 4.0
    }
}

/// Per-query error with the default branching factors.
pub fn irma_error(truth: &IrmaCode, predicted: &IrmaCode) -> f64 {
    IrmaErrorScheme::default().error(truth, predicted)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(s: &str) -> IrmaCode {
        s.parse().unwrap()
    }

    #[test]
    fn parses_axes() {
        let c = code("1121-127-700-500");
        assert_eq!(c.axes(), ["1121", "127", "700", "500"].map(String::from));
        assert_eq!(code("1121127700500"), c);
        assert_eq!(c.to_string(), "1121-127-700-500");
    }

    #[test]
    fn rejects_bad_codes() {
        assert!(parse_irma_code("1121-127-700-50").is_err());
        assert!(parse_irma_code("112112770050").is_err());
        assert!(parse_irma_code("112-1127-700-500").is_err());
        let err = parse_irma_code("1121-12#-700-500").unwrap_err();
        assert!(matches!(err, Error::InvalidIrmaCode { position: 7, .. }));
    }

    #[test]
    fn accepts_wildcards() {
        let c = code("1121-12*-7**-500");
        assert_eq!(c.axes()[2], "7**");
    }

    #[test]
    fn identical_is_zero_all_wrong_is_one() {
        let t = code("1121-127-700-500");
        assert_eq!(irma_error(&t, &t), 0.0);
        assert_eq!(irma_error(&t, &code("2121-227-800-600")), 1.0);
    }

    #[test]
    fn single_wrong_position_propagates() {
        // axis 4: positions 2 and 3 wrong -> (1/2 + 1/3) / (1 + 1/2 + 1/3) = 5/11
        let e = irma_error(&code("1121-127-700-500"), &code("1121-127-700-510"));
        assert!((e - 5.0 / 44.0).abs() < 1e-15);
    }

    #[test]
    fn wildcard_costs_half() {
        // axis 2 position 3 unspecified: 0.5 * (1/3) / (11/6) = 1/11
        let e = irma_error(&code("1121-127-700-500"), &code("1121-12*-700-500"));
        assert!((e - 1.0 / 44.0).abs() < 1e-15);
    }

    #[test]
    fn custom_branching() {
        let s = IrmaErrorScheme::default()
            .with_branching(3, vec![2.0, 4.0, 4.0])
            .unwrap();
        assert!(!s.uses_default_branching());
        // wrong at position 3 only: (1/12) / (1/2 + 1/8 + 1/12)
        let e = s.axis_error(3, &code("1121-127-700-500"), &code("1121-127-700-501"));
        assert!((e - (1.0 / 12.0) / (0.5 + 0.125 + 1.0 / 12.0)).abs() < 1e-15);
        assert!(IrmaErrorScheme::default().with_branching(0, vec![2.0]).is_err());
    }
}
