//! Binary descriptor files.
//!
//! ```text
//! magic        4 bytes  "LRDF"
//! version      u32
//! length       u32      values per descriptor
//! count        u64      number of descriptors
//! digest       u32 byte length + UTF-8
//! metric hint  u32 byte length + UTF-8 (may be empty)
//! payload      count * length * f32
//! trailer      count * (u32 len + id, u32 len + label)
//! ```
//!
//! All integers and floats are little-endian.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use crate::descriptor::Descriptor;
use crate::error::{Error, Result};
use crate::retrieval::IndexEntry;

pub const MAGIC: &[u8; 4] = b"LRDF";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct DescriptorRecord {
    pub id: String,
    pub label: String,
    pub values: Vec<f32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DescriptorFile {
    pub params_digest: String,
    pub metric_hint: String,
    pub length: usize,
    pub records: Vec<DescriptorRecord>,
}

impl DescriptorFile {
    pub fn from_entries(entries: &[IndexEntry], params_digest: &str, metric_hint: &str) -> Result<Self> {
        let length = entries.first().map_or(0, |e| e.descriptor.len());
        let records = entries
            .iter()
            .map(|e| {
                if e.descriptor.len() != length {
                    return Err(Error::LengthMismatch {
                        expected: length,
                        actual: e.descriptor.len(),
                    });
                }
                if e.descriptor.params_digest != params_digest {
                    return Err(Error::DigestMismatch {
                        expected: params_digest.to_string(),
                        actual: e.descriptor.params_digest.clone(),
                    });
                }
                Ok(DescriptorRecord {
                    id: e.source_id.clone(),
                    label: e.label.clone(),
                    values: e.descriptor.values.iter().map(|v| *v as f32).collect(),
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            params_digest: params_digest.to_string(),
            metric_hint: metric_hint.to_string(),
            length,
            records,
        })
    }

    /// Records as index entries, widened to `f64`.
    pub fn entries(&self) -> Vec<IndexEntry> {
        self.records
            .iter()
            .map(|r| {
                let values = r.values.iter().map(|v| f64::from(*v)).collect();
                IndexEntry::new(r.id.clone(), r.label.clone(), Descriptor::new(values, self.params_digest.clone()))
            })
            .collect()
    }

    pub fn expect_digest(&self, digest: &str) -> Result<()> {
        if self.params_digest != digest {
            return Err(Error::DigestMismatch {
                expected: digest.to_string(),
                actual: self.params_digest.clone(),
            });
        }
        Ok(())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = DescriptorWriter::create(
            path,
            &self.params_digest,
            &self.metric_hint,
            self.length,
            self.records.len(),
        )?;
        for r in &self.records {
            w.append_f32(&r.values)?;
        }
        w.finish(self.records.iter().map(|r| (r.id.as_str(), r.label.as_str())))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut r = Reader {
            inner: BufReader::new(file),
            path,
        };
        let mut magic = [0u8; 4];
        r.exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Format(format!("{}: bad magic {magic:?}", path.display())));
        }
        let version = r.u32()?;
        if version != VERSION {
            return Err(Error::Format(format!(
                "{}: unsupported version {version}",
                path.display()
            )));
        }
        let length = r.u32()? as usize;
        let count = usize::try_from(r.u64()?).map_err(|_| Error::Format("count overflow".into()))?;
        let params_digest = r.string()?;
        let metric_hint = r.string()?;

        let mut values = Vec::with_capacity(count.min(1 << 20));
        let mut buf = vec![0u8; length * 4];
        for _ in 0..count {
            r.exact(&mut buf)?;
            values.push(
                buf.chunks_exact(4)
                    .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]))
                    .collect::<Vec<_>>(),
            );
        }
        let mut records = Vec::with_capacity(values.len());
        for v in values {
            let id = r.string()?;
            let label = r.string()?;
            records.push(DescriptorRecord { id, label, values: v });
        }
        let mut rest = [0u8; 1];
        if r.inner.read(&mut rest).map_err(|e| Error::io(path, e))? != 0 {
            return Err(Error::Format(format!("{}: trailing bytes", path.display())));
        }
        Ok(Self {
            params_digest,
            metric_hint,
            length,
            records,
        })
    }
}

/// Streams descriptors to disk in order; the id/label trailer is written by
/// [`DescriptorWriter::finish`].
pub struct DescriptorWriter {
    inner: BufWriter<File>,
    path: PathBuf,
    length: usize,
    expected: usize,
    written: usize,
}

impl DescriptorWriter {
    pub fn create(
        path: impl AsRef<Path>,
        params_digest: &str,
        metric_hint: &str,
        length: usize,
        count: usize,
    ) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
        let length_u32 = u32::try_from(length).map_err(|_| Error::Format("length overflow".into()))?;
        let mut w = Self {
            inner: BufWriter::new(file),
            path,
            length,
            expected: count,
            written: 0,
        };
        w.put(MAGIC)?;
        w.put(&VERSION.to_le_bytes())?;
        w.put(&length_u32.to_le_bytes())?;
        w.put(&(count as u64).to_le_bytes())?;
        w.put_str(params_digest)?;
        w.put_str(metric_hint)?;
        Ok(w)
    }

    fn put(&mut self, bytes: &[u8]) -> Result<()> {
        self.inner.write_all(bytes).map_err(|e| Error::io(&self.path, e))
    }

    fn put_str(&mut self, s: &str) -> Result<()> {
        let len = u32::try_from(s.len()).map_err(|_| Error::Format("string too long".into()))?;
        self.put(&len.to_le_bytes())?;
        self.put(s.as_bytes())
    }

    fn check_next(&self, len: usize) -> Result<()> {
        if len != self.length {
            return Err(Error::LengthMismatch {
                expected: self.length,
                actual: len,
            });
        }
        if self.written == self.expected {
            return Err(Error::Format(format!("more than {} descriptors", self.expected)));
        }
        Ok(())
    }

    /// Appends one descriptor, narrowing to `f32`.
    pub fn append(&mut self, values: &[f64]) -> Result<()> {
        self.check_next(values.len())?;
        for v in values {
            self.put(&(*v as f32).to_le_bytes())?;
        }
        self.written += 1;
        Ok(())
    }

    pub fn append_f32(&mut self, values: &[f32]) -> Result<()> {
        self.check_next(values.len())?;
        for v in values {
            self.put(&v.to_le_bytes())?;
        }
        self.written += 1;
        Ok(())
    }

    pub fn finish<'a>(mut self, names: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<()> {
        if self.written != self.expected {
            return Err(Error::Format(format!(
                "wrote {} of {} descriptors",
                self.written, self.expected
            )));
        }
        let mut n = 0;
        for (id, label) in names {
            self.put_str(id)?;
            self.put_str(label)?;
            n += 1;
        }
        if n != self.expected {
            return Err(Error::Format(format!("{n} names for {} descriptors", self.expected)));
        }
        self.inner.flush().map_err(|e| Error::io(&self.path, e))
    }
}

struct Reader<'a> {
    inner: BufReader<File>,
    path: &'a Path,
}

impl Reader<'_> {
    fn exact(&mut self, buf: &mut [u8]) -> Result<()> {
        self.inner.read_exact(buf).map_err(|e| {
            if e.kind() == std::io::ErrorKind::UnexpectedEof {
                Error::Format(format!("{}: truncated file", self.path.display()))
            } else {
                Error::io(self.path, e)
            }
        })
    }

    fn u32(&mut self) -> Result<u32> {
        let mut b = [0u8; 4];
        self.exact(&mut b)?;
        Ok(u32::from_le_bytes(b))
    }

    fn u64(&mut self) -> Result<u64> {
        let mut b = [0u8; 8];
        self.exact(&mut b)?;
        Ok(u64::from_le_bytes(b))
    }

    fn string(&mut self) -> Result<String> {
        let len = self.u32()? as usize;
        let mut b = vec![0u8; len];
        self.exact(&mut b)?;
        String::from_utf8(b).map_err(|_| Error::Format(format!("{}: invalid UTF-8", self.path.display())))
    }
}

/// Saves labeled descriptors sharing one digest.
pub fn save_descriptors(path: impl AsRef<Path>, entries: &[IndexEntry], metric_hint: &str) -> Result<()> {
    let digest = entries
        .first()
        .map(|e| e.descriptor.params_digest.clone())
        .unwrap_or_default();
    DescriptorFile::from_entries(entries, &digest, metric_hint)?.save(path)
}

pub fn load_descriptors(path: impl AsRef<Path>) -> Result<DescriptorFile> {
    DescriptorFile::load(path)
}

/// True when the file starts with the descriptor-file magic.
pub fn is_descriptor_file(path: impl AsRef<Path>) -> bool {
    let mut magic = [0u8; 4];
    File::open(path)
        .and_then(|mut f| f.read_exact(&mut magic))
        .map(|_| &magic == MAGIC)
        .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entries(n: usize, len: usize) -> Vec<IndexEntry> {
        (0..n)
            .map(|i| {
                let values = (0..len).map(|j| (i * len + j) as f64 * 0.25).collect();
                IndexEntry::new(format!("img{i}"), format!("{i}"), Descriptor::new(values, "method=lrd"))
            })
            .collect()
    }

    #[test]
    fn payload_size_and_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.lrdf");
        let e = entries(3, 300);
        save_descriptors(&path, &e, "l1").unwrap();
        let header = 4 + 4 + 4 + 8 + (4 + 10) + (4 + 2);
        let trailer: usize = (0..3).map(|i| 4 + format!("img{i}").len() + 4 + 1).sum();
        let size = std::fs::metadata(&path).unwrap().len() as usize;
        assert_eq!(size, header + 3 * 300 * 4 + trailer);
        let loaded = load_descriptors(&path).unwrap();
        assert_eq!(loaded.metric_hint, "l1");
        assert_eq!(loaded.entries(), e);
        assert!(is_descriptor_file(&path));
    }

    #[test]
    fn truncated_and_bad_magic() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.lrdf");
        save_descriptors(&path, &entries(2, 10), "").unwrap();
        let bytes = std::fs::read(&path).unwrap();
        std::fs::write(&path, &bytes[..bytes.len() - 30]).unwrap();
        assert!(matches!(load_descriptors(&path), Err(Error::Format(_))));
        let mut bad = bytes.clone();
        bad[0] = b'X';
        std::fs::write(&path, &bad).unwrap();
        assert!(matches!(load_descriptors(&path), Err(Error::Format(_))));
        let mut version = bytes;
        version[4] = 9;
        std::fs::write(&path, &version).unwrap();
        assert!(matches!(load_descriptors(&path), Err(Error::Format(_))));
    }

    #[test]
    fn digest_mismatch_refused() {
        let mut e = entries(2, 4);
        e[1].descriptor.params_digest = "method=gr".into();
        assert!(matches!(
            DescriptorFile::from_entries(&e, "method=lrd", ""),
            Err(Error::DigestMismatch { .. })
        ));
        let file = DescriptorFile::from_entries(&entries(1, 4), "method=lrd", "").unwrap();
        assert!(file.expect_digest("method=gr").is_err());
    }

    #[test]
    fn writer_enforces_count() {
        let dir = tempfile::tempdir().unwrap();
        let mut w = DescriptorWriter::create(dir.path().join("w.lrdf"), "d", "", 2, 2).unwrap();
        w.append(&[1.0, 2.0]).unwrap();
        assert!(w.append(&[1.0]).is_err());
        assert!(w.finish([("a", "x")]).is_err());
    }
}
