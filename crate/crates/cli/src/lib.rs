//! Batch evaluation of ranked retrieval runs against graded relevance
//! judgments: file formats, the measure vocabulary, and the threaded
//! per-topic driver. The measure kernels live in `gradeval-core`.

pub mod driver;
pub mod formats;
pub mod measures;
