//! Image ingestion, dataset manifests and descriptor persistence.

mod config;
mod format;
mod ingest;
mod manifest;
mod pipeline;

pub use config::{expand_config_args, parse_config};
pub use format::{
    is_descriptor_file, load_descriptors, save_descriptors, DescriptorFile, DescriptorRecord, DescriptorWriter,
    MAGIC, VERSION,
};
pub use ingest::{from_dynamic, load_image, standardize, to_luma8, ResizeMode, DEFAULT_SIDE, MIN_SIDE};
pub use manifest::{DatasetKind, DatasetManifest, ManifestRecord};
pub use pipeline::{thread_pool, Pipeline, THREADS_ENV};
