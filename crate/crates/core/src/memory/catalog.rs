//! Model spec file: a versioned JSON document listing [`ModelSpec`]s and the
//! effective-size thresholds the planner annotates against.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "models": [ { "name": "Qwen3-4B", "n_layers": 36, "n_kv_heads": 8, "d_head": 128,
//!                 "n_params_quantizable": 3632067000, "n_params_unquantizable": 402667000,
//!                 "native_precision_bits": 16, "provenance": "..." } ],
//!   "thresholds": { "small": { "model": "Qwen3-4B", "precision_bits": 8 },
//!                   "kv": { "model": "Qwen3-8B", "precision_bits": 8 },
//!                   "long_budget_tokens": 20000 }
//! }
//! ```

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::cost::effective_size_bytes;
use super::spec::{ModelSpec, WeightQuantSpec};
use super::MemoryError;

pub const MODEL_SPEC_SCHEMA_VERSION: u32 = 1;

const BUILTIN_QWEN3: &str = include_str!("../../fixtures/qwen3.json");

/// A model named at a given weight precision; its effective size is the threshold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdRef {
    pub model: String,
    pub precision_bits: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdSpec {
    /// Boundary below which weights beat longer generations.
    pub small: ThresholdRef,
    /// Boundary below which eviction beats KV quantization.
    pub kv: ThresholdRef,
    /// Token budgets at or above this count are considered long.
    #[serde(default = "default_long_budget")]
    pub long_budget_tokens: u64,
    /// Free-form observations shipped with the data.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub observations: Vec<String>,
}

fn default_long_budget() -> u64 {
    20_000
}

/// Thresholds resolved to byte counts against a catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thresholds {
    pub small_bytes: u64,
    pub kv_bytes: u64,
    pub long_budget_tokens: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelCatalog {
    pub schema_version: u32,
    pub models: Vec<ModelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<ThresholdSpec>,
}

impl Default for ModelCatalog {
    fn default() -> Self {
        ModelCatalog {
            schema_version: MODEL_SPEC_SCHEMA_VERSION,
            models: Vec::new(),
            thresholds: None,
        }
    }
}

impl ModelCatalog {
    /// The shipped Qwen3 0.6B-32B fixtures.
    pub fn builtin() -> Self {
        Self::from_json_str(BUILTIN_QWEN3).expect("shipped model fixture is valid")
    }

    pub fn builtin_json() -> &'static str {
        BUILTIN_QWEN3
    }

    /// Parses a spec document. Whitespace-only input is an empty catalog.
    pub fn from_json_str(text: &str) -> Result<Self, MemoryError> {
        if text.trim().is_empty() {
            return Ok(Self::default());
        }
        let catalog: ModelCatalog =
            serde_json::from_str(text).map_err(|e| MemoryError::SpecFile(e.to_string()))?;
        catalog.validate()?;
        Ok(catalog)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, MemoryError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| MemoryError::SpecFile(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn new(models: Vec<ModelSpec>, thresholds: Option<ThresholdSpec>) -> Result<Self, MemoryError> {
        let catalog = ModelCatalog {
            schema_version: MODEL_SPEC_SCHEMA_VERSION,
            models,
            thresholds,
        };
        catalog.validate()?;
        Ok(catalog)
    }

    fn validate(&self) -> Result<(), MemoryError> {
        if self.schema_version != MODEL_SPEC_SCHEMA_VERSION {
            return Err(MemoryError::SpecFile(format!(
                "unsupported schema_version {} (expected {MODEL_SPEC_SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let mut seen = HashSet::new();
        for m in &self.models {
            if !seen.insert(m.name.as_str()) {
                return Err(MemoryError::SpecFile(format!("duplicate model {:?}", m.name)));
            }
        }
        if self.thresholds.is_some() {
            self.thresholds()?;
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&ModelSpec, MemoryError> {
        self.models
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| MemoryError::ModelNotFound(name.to_string()))
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    fn resolve(&self, r: &ThresholdRef) -> Result<u64, MemoryError> {
        let spec = self.get(&r.model)?;
        effective_size_bytes(spec, &WeightQuantSpec::symmetric(r.precision_bits)?)
    }

    /// Resolves the threshold section to bytes. Errors when absent or when it
    /// names a model the catalog does not contain.
    pub fn thresholds(&self) -> Result<Thresholds, MemoryError> {
        let spec = self
            .thresholds
            .as_ref()
            .ok_or_else(|| MemoryError::SpecFile("no thresholds section".into()))?;
        Ok(Thresholds {
            small_bytes: self.resolve(&spec.small)?,
            kv_bytes: self.resolve(&spec.kv)?,
            long_budget_tokens: spec.long_budget_tokens,
        })
    }
}
