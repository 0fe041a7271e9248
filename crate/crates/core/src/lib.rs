//! Measure kernels for graded-relevance retrieval evaluation.
//!
//! Everything in this crate is pure computation over in-memory judgment and
//! ranking data: gain schemes, scored lists, single-topic effectiveness
//! measures, intent-aware diversity measures, and a slow reference oracle.
//! File formats, batch drivers, and the command line live in the companion
//! `gradeval` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod adhoc;
pub mod corpus;
pub mod diversity;
pub mod gain;
pub mod oracle;

mod math;
