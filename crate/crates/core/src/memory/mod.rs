//! Memory cost model: weights plus KV cache, byte-exact.

mod catalog;
mod cost;
mod spec;
pub mod units;

pub use catalog::{ModelCatalog, ThresholdRef, ThresholdSpec, Thresholds, MODEL_SPEC_SCHEMA_VERSION};
pub use cost::{
    amortized_memory_exact, breakdown, effective_size_bytes, floor_bytes, kv_bytes_per_token,
    kv_memory_bytes, kv_memory_exact, total_memory_exact, weight_memory_bytes,
    weight_memory_exact, ExactBytes, MemoryBreakdown,
};
pub use spec::{KvCacheStrategy, KvQuantSpec, ModelSpec, WeightQuantSpec};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MemoryError {
    #[error("invalid model spec {model:?}: {field} {reason}")]
    InvalidSpec {
        model: String,
        field: &'static str,
        reason: String,
    },
    #[error("invalid weight quantization: {field} {reason}")]
    InvalidQuant { field: &'static str, reason: String },
    #[error("invalid KV cache strategy: {0}")]
    InvalidKvStrategy(String),
    #[error("group size must be at least 1")]
    InvalidGroupSize,
    #[error("amortization batch must be at least 1")]
    InvalidBatch,
    #[error("byte count exceeds the representable range")]
    Overflow,
    #[error("unknown model {0:?}")]
    ModelNotFound(String),
    #[error("model spec file: {0}")]
    SpecFile(String),
}

impl MemoryError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            MemoryError::ModelNotFound(_) => "MODEL_NOT_FOUND",
            MemoryError::Overflow => "RANGE_ERROR",
            MemoryError::SpecFile(_) => "SPEC_FILE_INVALID",
            _ => "INVALID_REQUEST",
        }
    }
}
