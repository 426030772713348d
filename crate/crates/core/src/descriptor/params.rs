use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::radon::AngleSet;

use super::pairing::{pair_angles, PairingKind, PairingScheme};

/// Per-block histogram normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Normalization {
    /// Scale each block histogram to unit sum when its mass is positive.
    #[default]
    L1,
    None,
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::L1 => "l1",
            Normalization::None => "none",
        })
    }
}

impl FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l1" => Ok(Normalization::L1),
            "none" => Ok(Normalization::None),
            other => Err(Error::InvalidParams(format!("unknown normalization `{other}`"))),
        }
    }
}

/// Full configuration of the local Radon descriptor.
#[derive(Debug, Clone, PartialEq)]
pub struct LrdParams {
    pub n_rows: usize,
    pub n_cols: usize,
    pub overlap: f64,
    pub n_angles: usize,
    pub bins: usize,
    pub pairing: PairingScheme,
    pub normalize: Normalization,
}

impl LrdParams {
    /// Square grid of `grid x grid` blocks with a named pairing scheme.
    pub fn new(grid: usize, bins: usize, n_angles: usize, pairing: PairingKind) -> Result<Self> {
        let angles = AngleSet::equidistant(n_angles)?;
        let params = Self {
            n_rows: grid,
            n_cols: grid,
            overlap: 0.0,
            n_angles,
            bins,
            pairing: pair_angles(&angles, pairing)?,
            normalize: Normalization::L1,
        };
        params.validate()?;
        Ok(params)
    }

    /// 5x5 blocks, 12 bins, 18 angles, characteristic pairing.
    pub fn irma() -> Self {
        Self::new(5, 12, 18, PairingKind::Characteristic).expect("valid preset")
    }

    /// 3x3 blocks, 22 bins, 18 angles, characteristic pairing.
    pub fn holidays() -> Self {
        Self::new(3, 22, 18, PairingKind::Characteristic).expect("valid preset")
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "irma" => Ok(Self::irma()),
            "holidays" => Ok(Self::holidays()),
            other => Err(Error::InvalidParams(format!("unknown preset `{other}`"))),
        }
    }

    pub fn with_overlap(mut self, overlap: f64) -> Self {
        self.overlap = overlap;
        self
    }

    pub fn with_normalization(mut self, normalize: Normalization) -> Self {
        self.normalize = normalize;
        self
    }

    pub fn with_grid(mut self, n_rows: usize, n_cols: usize) -> Self {
        self.n_rows = n_rows;
        self.n_cols = n_cols;
        self
    }

    pub fn with_bins(mut self, bins: usize) -> Self {
        self.bins = bins;
        self
    }

    pub fn angles(&self) -> AngleSet {
        AngleSet::equidistant(self.n_angles).expect("validated angle count")
    }

    /// Descriptor length: one `bins`-bin histogram per block.
    pub fn length(&self) -> usize {
        self.n_rows * self.n_cols * self.bins
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_rows == 0 || self.n_cols == 0 {
            return Err(Error::InvalidParams("grid must be at least 1x1".into()));
        }
        if self.bins < 2 {
            return Err(Error::InvalidParams(format!("need at least 2 bins, got {}", self.bins)));
        }
        if !(0.0..=crate::grid::MAX_OVERLAP).contains(&self.overlap) {
            return Err(Error::InvalidParams(format!("overlap {} out of range", self.overlap)));
        }
        let angles = AngleSet::equidistant(self.n_angles)?;
        self.pairing.validate(&angles)
    }

    fn write_fields(&self, fields: &mut BTreeMap<&'static str, String>) {
        fields.insert("grid", format!("{}x{}", self.n_rows, self.n_cols));
        fields.insert("overlap", format!("{}", self.overlap));
        fields.insert("angles", self.n_angles.to_string());
        fields.insert("bins", self.bins.to_string());
        let pairing = match self.pairing.kind() {
            PairingKind::Custom => {
                let pairs: Vec<String> = self
                    .pairing
                    .pairs()
                    .iter()
                    .map(|(a, b)| format!("{a}-{b}"))
                    .collect();
                format!("custom:{}", pairs.join("+"))
            }
            kind => kind.to_string(),
        };
        fields.insert("pairing", pairing);
        fields.insert("norm", self.normalize.to_string());
    }

    fn from_fields(fields: &BTreeMap<String, String>) -> Result<Self> {
        let (n_rows, n_cols) = parse_grid(field(fields, "grid")?)?;
        let n_angles: usize = parse_num(fields, "angles")?;
        let pairing = match field(fields, "pairing")? {
            custom if custom.starts_with("custom:") => {
                let pairs = custom["custom:".len()..]
                    .split('+')
                    .map(|p| {
                        let (a, b) = p.split_once('-').ok_or_else(|| bad_field("pairing", custom))?;
                        Ok((
                            a.parse().map_err(|_| bad_field("pairing", custom))?,
                            b.parse().map_err(|_| bad_field("pairing", custom))?,
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?;
                PairingScheme::custom(pairs)?
            }
            kind => pair_angles(&AngleSet::equidistant(n_angles)?, kind.parse()?)?,
        };
        let params = Self {
            n_rows,
            n_cols,
            overlap: parse_num(fields, "overlap")?,
            n_angles,
            bins: parse_num(fields, "bins")?,
            pairing,
            normalize: field(fields, "norm")?.parse()?,
        };
        params.validate()?;
        Ok(params)
    }
}

/// Configuration of the global Radon baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GrParams {
    /// Number of equidistant whole-image projections.
    pub n_angles: usize,
    /// Optional total length after down-sampling; must be a multiple of
    /// `n_angles`.
    pub target_length: Option<usize>,
}

impl Default for GrParams {
    fn default() -> Self {
        Self {
            n_angles: 4,
            target_length: None,
        }
    }
}

/// Descriptor method plus its parameters. The digest is a canonical
/// `key=value;...` string that round-trips through [`Extractor::from_digest`].
#[derive(Debug, Clone, PartialEq)]
pub enum Extractor {
    Lrd(LrdParams),
    Gr(GrParams),
}

impl Extractor {
    pub fn digest(&self) -> String {
        let mut fields = BTreeMap::new();
        self.write_fields(&mut fields);
        render_fields(&fields)
    }

    pub(crate) fn write_fields(&self, fields: &mut BTreeMap<&'static str, String>) {
        match self {
            Extractor::Lrd(p) => {
                fields.insert("method", "lrd".into());
                p.write_fields(fields);
            }
            Extractor::Gr(p) => {
                fields.insert("method", "gr".into());
                fields.insert("angles", p.n_angles.to_string());
                fields.insert(
                    "length",
                    p.target_length.map_or_else(|| "full".to_string(), |l| l.to_string()),
                );
            }
        }
    }

    pub fn from_digest(digest: &str) -> Result<Self> {
        Self::from_fields(&parse_fields(digest)?)
    }

    pub(crate) fn from_fields(fields: &BTreeMap<String, String>) -> Result<Self> {
        match field(fields, "method")? {
            "lrd" => Ok(Extractor::Lrd(LrdParams::from_fields(fields)?)),
            "gr" => {
                let length = field(fields, "length")?;
                Ok(Extractor::Gr(GrParams {
                    n_angles: parse_num(fields, "angles")?,
                    target_length: if length == "full" {
                        None
                    } else {
                        Some(length.parse().map_err(|_| bad_field("length", length))?)
                    },
                }))
            }
            other => Err(Error::InvalidParams(format!("unknown method `{other}`"))),
        }
    }

    /// Length of descriptors produced for a `side x side` image.
    pub fn length(&self, side: usize) -> usize {
        match self {
            Extractor::Lrd(p) => p.length(),
            Extractor::Gr(p) => p
                .target_length
                .unwrap_or(p.n_angles * crate::radon::detector_length(side)),
        }
    }
}

pub(crate) fn render_fields(fields: &BTreeMap<&'static str, String>) -> String {
    fields
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

pub(crate) fn parse_fields(digest: &str) -> Result<BTreeMap<String, String>> {
    digest
        .split(';')
        .filter(|s| !s.is_empty())
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| Error::InvalidParams(format!("malformed digest entry `{kv}`")))
        })
        .collect()
}

pub(crate) fn field<'a>(fields: &'a BTreeMap<String, String>, key: &str) -> Result<&'a str> {
    fields
        .get(key)
        .map(String::as_str)
        .ok_or_else(|| Error::InvalidParams(format!("digest lacks `{key}`")))
}

pub(crate) fn parse_num<T: FromStr>(fields: &BTreeMap<String, String>, key: &str) -> Result<T> {
    let raw = field(fields, key)?;
    raw.parse().map_err(|_| bad_field(key, raw))
}

fn bad_field(key: &str, value: &str) -> Error {
    Error::InvalidParams(format!("bad value `{value}` for `{key}`"))
}

/// Parses `RxC` (or a single `N` for a square grid).
pub fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let parse = |v: &str| {
        v.trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidParams(format!("bad grid `{s}`")))
    };
    match s.split_once(['x', 'X', '×']) {
        Some((r, c)) => Ok((parse(r)?, parse(c)?)),
        None => {
            let n = parse(s)?;
            Ok((n, n))
        }
    }
}
