//! Measurement ingestion and accuracy estimators.
//!
//! Two line-delimited JSON formats live here: measurement records (one per
//! configuration) and sample pools (one per benchmark instance).

mod estimate;
mod pools;
mod records;

pub use estimate::{
    derive_record, maj_at_g, pass_at_1, subset_count, EstimateOptions, Method, TiePolicy,
    ENUMERATION_CAP,
};
pub use pools::{load_pools, Sample, SamplePool, INVALID_ANSWER, POOL_SCHEMA_VERSION};
pub use records::{load_measurements, Dataset, MeasurementRecord, MEASUREMENT_SCHEMA_VERSION};

use thiserror::Error;

use crate::config::ConfigKey;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasurementError {
    #[error("line {line}: field {field:?}: {reason}")]
    Parse {
        line: usize,
        field: String,
        reason: String,
    },
    #[error("line {line}: duplicate configuration {key} (first seen on line {first_line})")]
    DuplicateKey {
        line: usize,
        first_line: usize,
        key: ConfigKey,
    },
    #[error("sample pool is empty")]
    EmptyPool,
    #[error("no sample pools given")]
    NoPools,
    #[error("pools have different sizes ({0} vs {1})")]
    NonUniformPools(usize, usize),
    #[error("group size {group} exceeds pool size {pool}")]
    GroupTooLarge { group: u32, pool: usize },
    #[error("group size must be at least 1")]
    ZeroGroup,
    #[error("Monte Carlo needs at least one resample")]
    ZeroResamples,
    #[error("exact enumeration needs {subsets} subsets, above the cap of {cap}; use the Monte Carlo method")]
    EnumerationCap { subsets: u128, cap: u128 },
    #[error("{0}")]
    Io(String),
}

impl MeasurementError {
    pub fn code(&self) -> &'static str {
        match self {
            MeasurementError::Parse { .. } => "SCHEMA_VIOLATION",
            MeasurementError::DuplicateKey { .. } => "DUPLICATE_CONFIG",
            MeasurementError::EnumerationCap { .. } => "CAPACITY_EXCEEDED",
            MeasurementError::Io(_) => "IO_ERROR",
            MeasurementError::GroupTooLarge { .. } | MeasurementError::ZeroGroup => "INVALID_GROUP",
            _ => "DOMAIN_ERROR",
        }
    }
}
