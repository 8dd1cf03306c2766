//! Character-counting machinery for split finite reductive groups with
//! disconnected center.
//!
//! The Borel side ([`borel`]) parametrizes the p′-characters of `B^F` by
//! labels `(J, z, ψ)` and counts them per central character and per
//! diagonal-automorphism orbit. The group side ([`matgrp`], [`chartab`])
//! enumerates small matrix groups and computes exact character tables with
//! the Dixon–Schneider method. [`mckay`] compares the two and builds
//! equivariant bijections with machine-checked certificates.

pub mod borel;
pub mod chartab;
pub mod cli;
pub mod error;
pub mod lattice;
pub mod matgrp;
pub mod mckay;
pub mod rootdata;
pub mod twist;

pub use error::{Error, Result};

/// Version tag written into every JSON/TSV export.
pub const SCHEMA_VERSION: u32 = 1;
