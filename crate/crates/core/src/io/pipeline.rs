use std::path::Path;

use rayon::prelude::*;

use super::format::DescriptorWriter;
use super::ingest::{load_image, standardize, ResizeMode, DEFAULT_SIDE};
use super::manifest::DatasetManifest;
use crate::descriptor::params::{field, parse_fields, parse_num, render_fields};
use crate::descriptor::{Descriptor, Extractor};
use crate::error::{Error, Result};
use crate::gray::GrayImage;
use crate::retrieval::IndexEntry;

/// Environment variable capping the extraction worker pool.
pub const THREADS_ENV: &str = "LRD_THREADS";

// Images per ordered write batch in `describe_manifest`.
const BATCH: usize = 64;

/// Standardization followed by descriptor extraction.
#[derive(Debug, Clone, PartialEq)]
pub struct Pipeline {
    pub extractor: Extractor,
    pub side: usize,
    pub resize: ResizeMode,
}

impl Pipeline {
    pub fn new(extractor: Extractor) -> Self {
        Self {
            extractor,
            side: DEFAULT_SIDE,
            resize: ResizeMode::default(),
        }
    }

    pub fn digest(&self) -> String {
        let mut fields = std::collections::BTreeMap::new();
        self.extractor.write_fields(&mut fields);
        fields.insert("side", self.side.to_string());
        fields.insert("resize", self.resize.name().to_string());
        render_fields(&fields)
    }

    pub fn from_digest(digest: &str) -> Result<Self> {
        let fields = parse_fields(digest)?;
        Ok(Self {
            extractor: Extractor::from_fields(&fields)?,
            side: parse_num(&fields, "side")?,
            resize: ResizeMode::from_name(field(&fields, "resize")?)?,
        })
    }

    pub fn descriptor_length(&self) -> usize {
        self.extractor.length(self.side)
    }

    pub fn describe_image(&self, image: &GrayImage) -> Result<Descriptor> {
        let standardized = standardize(image, self.side, self.resize)?;
        let mut d = self.extractor.extract(&standardized)?;
        d.params_digest = self.digest();
        Ok(d)
    }

    pub fn describe_path(&self, path: impl AsRef<Path>) -> Result<Descriptor> {
        self.describe_image(&load_image(path)?)
    }

    /// Describes every manifest image, in manifest order.
    pub fn describe_entries(&self, manifest: &DatasetManifest) -> Result<Vec<IndexEntry>> {
        manifest
            .records
            .par_iter()
            .map(|r| Ok(IndexEntry::new(r.id.clone(), r.label.clone(), self.describe_path(&r.path)?)))
            .collect()
    }

    /// Describes a manifest straight into a descriptor file. Images are
    /// processed in parallel batches; records are written in manifest order.
    pub fn describe_manifest(&self, manifest: &DatasetManifest, out: impl AsRef<Path>, metric_hint: &str) -> Result<()> {
        let digest = self.digest();
        let mut writer = DescriptorWriter::create(out, &digest, metric_hint, self.descriptor_length(), manifest.len())?;
        for batch in manifest.records.chunks(BATCH) {
            let descriptors = batch
                .par_iter()
                .map(|r| self.describe_path(&r.path))
                .collect::<Result<Vec<_>>>()?;
            for d in descriptors {
                writer.append(&d.values)?;
            }
        }
        writer.finish(manifest.records.iter().map(|r| (r.id.as_str(), r.label.as_str())))
    }
}

/// Worker pool sized by `LRD_THREADS` (all cores when unset).
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        let n: usize = raw
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParams(format!("{THREADS_ENV}={raw} is not a thread count")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| Error::InvalidParams(format!("cannot start worker pool: {e}")))
}
