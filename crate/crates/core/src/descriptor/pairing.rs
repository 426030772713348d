use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::radon::AngleSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairingKind {
    /// Every direction below 90 degrees paired with its perpendicular.
    Orthogonal,
    /// Directions in (0, 90) paired with 0 degrees, directions in (90, 180)
    /// paired with 90 degrees.
    Characteristic,
    Custom,
}

impl fmt::Display for PairingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairingKind::Orthogonal => "orthogonal",
            PairingKind::Characteristic => "characteristic",
            PairingKind::Custom => "custom",
        })
    }
}

impl FromStr for PairingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "orthogonal" => Ok(PairingKind::Orthogonal),
            "characteristic" => Ok(PairingKind::Characteristic),
            "custom" => Ok(PairingKind::Custom),
            other => Err(Error::InvalidParams(format!("unknown pairing scheme `{other}`"))),
        }
    }
}

/// Which projections are combined. Each pair is `(first, second)` angle
/// indices; `first` is the numerator direction of the ratio.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairingScheme {
    kind: PairingKind,
    pairs: Vec<(usize, usize)>,
}

impl PairingScheme {
    pub fn custom(pairs: Vec<(usize, usize)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidParams("custom pairing needs at least one pair".into()));
        }
        if let Some((a, b)) = pairs.iter().find(|(a, b)| a == b) {
            return Err(Error::InvalidParams(format!("pair ({a}, {b}) repeats an angle")));
        }
        Ok(Self {
            kind: PairingKind::Custom,
            pairs,
        })
    }

    pub fn kind(&self) -> PairingKind {
        self.kind
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Checks that every pair indexes into `angles`.
    pub fn validate(&self, angles: &AngleSet) -> Result<()> {
        let n = angles.len();
        match self.pairs.iter().find(|(a, b)| *a >= n || *b >= n) {
            Some((a, b)) => Err(Error::InvalidParams(format!(
                "pair ({a}, {b}) out of range for {n} angles"
            ))),
            None => Ok(()),
        }
    }

    /// The pairs expressed in degrees.
    pub fn degree_pairs(&self, angles: &AngleSet) -> Vec<(f64, f64)> {
        let d = angles.degrees();
        self.pairs.iter().map(|&(a, b)| (d[a], d[b])).collect()
    }
}

/// Builds the pairing of `kind` over `angles`.
pub fn pair_angles(angles: &AngleSet, kind: PairingKind) -> Result<PairingScheme> {
    let n = angles.len();
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParams(format!(
            "pairing needs an even number of angles, got {n}"
        )));
    }
    let degrees = angles.degrees();
    let pairs = match kind {
        PairingKind::Orthogonal => {
            let mut pairs = Vec::with_capacity(n / 2);
            for (j, &deg) in degrees.iter().enumerate().filter(|(_, d)| **d < 90.0) {
                let k = angles.position(deg + 90.0).ok_or_else(|| {
                    Error::InvalidParams(format!("no perpendicular for {deg} degrees"))
                })?;
                pairs.push((j, k));
            }
            if pairs.len() != n / 2 {
                return Err(Error::InvalidParams(format!(
                    "orthogonal pairing expects {} pairs, found {}",
                    n / 2,
                    pairs.len()
                )));
            }
            pairs
        }
        PairingKind::Characteristic => {
            let zero = angles.position(0.0);
            let right = angles.position(90.0);
            let (Some(zero), Some(right)) = (zero, right) else {
                return Err(Error::InvalidParams(
                    "characteristic pairing needs 0 and 90 degrees in the angle set".into(),
                ));
            };
            let mut pairs = Vec::with_capacity(n - 2);
            for (j, &deg) in degrees.iter().enumerate() {
                if deg > 0.0 && deg < 90.0 {
                    pairs.push((zero, j));
                }
            }
            for (j, &deg) in degrees.iter().enumerate() {
                if deg > 90.0 {
                    pairs.push((right, j));
                }
            }
            pairs
        }
        PairingKind::Custom => {
            return Err(Error::InvalidParams(
                "custom pairings are built with PairingScheme::custom".into(),
            ))
        }
    };
    Ok(PairingScheme { kind, pairs })
}
