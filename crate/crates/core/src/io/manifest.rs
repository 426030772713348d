//! CSV dataset manifests with header `path,id,label`.

use std::collections::{HashMap, HashSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluation::parse_irma_code;

const IMAGE_EXTENSIONS: [&str; 6] = ["png", "pgm", "bmp", "jpg", "jpeg", "tif"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DatasetKind {
    /// Labels are IRMA codes.
    Irma,
    /// Labels are category ids; the first image of a category is its query.
    Holidays,
    #[default]
    Generic,
}

impl std::str::FromStr for DatasetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "irma" => Ok(DatasetKind::Irma),
            "holidays" => Ok(DatasetKind::Holidays),
            "generic" => Ok(DatasetKind::Generic),
            other => Err(Error::Manifest(format!("unknown dataset kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub path: PathBuf,
    pub id: String,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetManifest {
    pub kind: DatasetKind,
    pub records: Vec<ManifestRecord>,
}

impl DatasetManifest {
    pub fn new(kind: DatasetKind, records: Vec<ManifestRecord>) -> Result<Self> {
        let m = Self { kind, records };
        m.validate()?;
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let mut ids = HashSet::with_capacity(self.records.len());
        for (row, r) in self.records.iter().enumerate() {
            if r.path.as_os_str().is_empty() {
                return Err(Error::Manifest(format!("row {}: empty path", row + 1)));
            }
            if r.id.is_empty() {
                return Err(Error::Manifest(format!("row {}: empty id", row + 1)));
            }
            if !ids.insert(r.id.as_str()) {
                return Err(Error::Manifest(format!("row {}: duplicate id `{}`", row + 1, r.id)));
            }
            match self.kind {
                DatasetKind::Irma => {
                    parse_irma_code(&r.label)?;
                }
                DatasetKind::Holidays => {
                    if r.label.is_empty() || !r.label.chars().all(|c| c.is_ascii_alphanumeric()) {
                        return Err(Error::Manifest(format!(
                            "row {}: bad category `{}`",
                            row + 1,
                            r.label
                        )));
                    }
                }
                DatasetKind::Generic => {}
            }
        }
        Ok(())
    }

    /// Parses manifest CSV text. Relative paths stay relative.
    pub fn parse(text: &str, kind: DatasetKind) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let headers = reader.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["path", "id", "label"] {
            return Err(Error::Manifest(format!(
                "expected header `path,id,label`, got `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let records = reader.deserialize().collect::<std::result::Result<Vec<ManifestRecord>, _>>()?;
        Self::new(kind, records)
    }

    pub fn emit(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.records {
            w.serialize(r)?;
        }
        if self.records.is_empty() {
            w.write_record(["path", "id", "label"])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Manifest(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Reads a manifest file; relative image paths resolve against the
    /// manifest's directory.
    pub fn read(path: impl AsRef<Path>, kind: DatasetKind) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut m = Self::parse(&text, kind)?;
        if let Some(base) = path.parent() {
            for r in &mut m.records {
                if r.path.is_relative() {
                    r.path = base.join(&r.path);
                }
            }
        }
        Ok(m)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.emit()?).map_err(|e| Error::io(path, e))
    }

    /// Splits a Holidays manifest into (queries, database): the first record
    /// of each category in manifest order is that category's query.
    pub fn holidays_split(&self) -> (DatasetManifest, DatasetManifest) {
        let mut seen = HashSet::new();
        let (queries, database): (Vec<_>, Vec<_>) =
            self.records.iter().cloned().partition(|r| seen.insert(r.label.clone()));
        (
            DatasetManifest {
                kind: self.kind,
                records: queries,
            },
            DatasetManifest {
                kind: self.kind,
                records: database,
            },
        )
    }

    /// Builds a Holidays manifest from a directory of `NNNNNN.jpg` files;
    /// category = image number / 100. Records are sorted by image number.
    pub fn from_holidays_dir(dir: impl AsRef<Path>) -> Result<Self> {
        let mut numbered = Vec::new();
        for path in list_images(dir.as_ref())? {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
            let number: u64 = stem
                .parse()
                .map_err(|_| Error::Manifest(format!("{}: not a numbered Holidays image", path.display())))?;
            numbered.push((number, stem.to_string(), path));
        }
        numbered.sort();
        let records = numbered
            .into_iter()
            .map(|(number, id, path)| ManifestRecord {
                path,
                id,
                label: (number / 100).to_string(),
            })
            .collect();
        Self::new(DatasetKind::Holidays, records)
    }

    /// Builds an IRMA manifest from an explicit code list (`image_id;code`
    /// or `image_id,code` per line, optional header) and the directory
    /// holding the images. Rows follow the code list order.
    pub fn from_irma_codes(dir: impl AsRef<Path>, codes: &str) -> Result<Self> {
        let dir = dir.as_ref();
        let available: HashMap<String, PathBuf> = list_images(dir)?
            .into_iter()
            .filter_map(|p| Some((p.file_stem()?.to_str()?.to_string(), p)))
            .collect();
        let mut records = Vec::new();
        for (n, line) in codes.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let Some((id, code)) = line.split_once([';', ',', '\t']) else {
                return Err(Error::Manifest(format!("code list line {}: `{line}`", n + 1)));
            };
            let (id, code) = (id.trim(), code.trim());
            if n == 0 && parse_irma_code(code).is_err() {
                continue; // header
            }
            let path = available
                .get(id)
                .cloned()
                .ok_or_else(|| Error::Manifest(format!("no image for id `{id}` in {}", dir.display())))?;
            records.push(ManifestRecord {
                path,
                id: id.to_string(),
                label: code.to_string(),
            });
        }
        Self::new(DatasetKind::Irma, records)
    }
}

fn list_images(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .unwrap_or_default();
        if path.is_file() && IMAGE_EXTENSIONS.contains(&ext.as_str()) {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_emit() {
        let text = "path,id,label\na.png,a,1121-127-700-500\nb.png,b,1121-120-200-700\n";
        let m = DatasetManifest::parse(text, DatasetKind::Irma).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.emit().unwrap(), text);
    }

    #[test]
    fn rejects_invalid_rows() {
        assert!(DatasetManifest::parse("path,id,label\na.png,a,x\na.png,a,y\n", DatasetKind::Generic).is_err());
        assert!(DatasetManifest::parse("path,id,label\na.png,a,notacode\n", DatasetKind::Irma).is_err());
        assert!(DatasetManifest::parse("file,id,label\na.png,a,1\n", DatasetKind::Generic).is_err());
        assert!(DatasetManifest::parse("path,id,label\n,a,1\n", DatasetKind::Generic).is_err());
    }

    #[test]
    fn holidays_directory_and_split() {
        let dir = tempfile::tempdir().unwrap();
        for name in ["100000.jpg", "100001.jpg", "100100.jpg", "100101.jpg", "100102.jpg", "notes.txt"] {
            std::fs::write(dir.path().join(name), b"").unwrap();
        }
        let m = DatasetManifest::from_holidays_dir(dir.path()).unwrap();
        assert_eq!(m.len(), 5);
        assert_eq!(m.records[2].label, "1001");
        let (q, db) = m.holidays_split();
        let qids: Vec<_> = q.records.iter().map(|r| r.id.as_str()).collect();
        assert_eq!(qids, ["100000", "100100"]);
        assert_eq!(db.len(), 3);
    }

    #[test]
    fn irma_from_code_list() {
        let dir = tempfile::tempdir().unwrap();
        for name in ["1.png", "2.png"] {
            std::fs::write(dir.path().join(name), b"").unwrap();
        }
        let m = DatasetManifest::from_irma_codes(dir.path(), "image_id;irma_code\n2;1121-127-700-500\n1;1121-120-200-700\n")
            .unwrap();
        assert_eq!(m.records[0].id, "2");
        assert!(DatasetManifest::from_irma_codes(dir.path(), "3;1121-127-700-500\n").is_err());
    }
}
