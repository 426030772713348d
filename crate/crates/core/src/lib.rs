//! Local Radon descriptors (LRD) for content-based image retrieval.
//!
//! The crate covers the full path from pixels to retrieval scores:
//!
//! - [`radon`]: discrete Radon projections of square windows and sinograms
//! - [`grid`]: dense block layouts with optional overlap
//! - [`descriptor`]: the local descriptor, its pairing schemes and presets,
//!   and the global Radon baseline
//! - [`retrieval`]: exact k-NN search under L1, L2, chi-square and cosine
//! - [`evaluation`]: IRMA code error and Holidays true-retrieval scoring
//! - [`io`]: image loading and standardization, manifests, descriptor files
//! - [`cli`]: the `lrd` command-line driver

pub mod cli;
pub mod descriptor;
pub mod error;
pub mod evaluation;
pub mod gray;
pub mod grid;
pub mod io;
pub mod radon;
pub mod retrieval;

pub use descriptor::{global_radon_descriptor, lrd_descriptor, Descriptor, Extractor, GrParams, LrdParams};
pub use error::{Error, Result};
pub use gray::{GrayImage, Rect};
pub use radon::{radon_project, sinogram, AngleSet, ProjectionSet};
pub use retrieval::{build_index, DescriptorIndex, IndexEntry, Metric};
