//! A single point in the deployment configuration space.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::memory::{
    breakdown, effective_size_bytes, floor_bytes, kv_memory_bytes, weight_memory_bytes,
    KvCacheStrategy, MemoryBreakdown, MemoryError, ModelCatalog, WeightQuantSpec,
};

/// Identifies one measured or measurable configuration. Unique within a dataset.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConfigKey {
    pub model: String,
    pub precision_bits: u32,
    pub kv: KvCacheStrategy,
    pub token_budget: u64,
    pub group_size: u32,
}

impl fmt::Display for ConfigKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/w{}/{}/T={}/G={}",
            self.model, self.precision_bits, self.kv, self.token_budget, self.group_size
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InferenceConfig {
    /// Name of a model in the catalog.
    pub model: String,
    pub weight_quant: WeightQuantSpec,
    pub kv_strategy: KvCacheStrategy,
    pub token_budget: u64,
    pub group_size: u32,
    #[serde(default = "one")]
    pub amortization_batch: u32,
}

fn one() -> u32 {
    1
}

impl InferenceConfig {
    /// Default-quantized config (g=128, FP16 scales, symmetric) with batch 1.
    pub fn new(
        model: impl Into<String>,
        precision_bits: u32,
        kv_strategy: KvCacheStrategy,
        token_budget: u64,
        group_size: u32,
    ) -> Result<Self, MemoryError> {
        let config = InferenceConfig {
            model: model.into(),
            weight_quant: WeightQuantSpec::symmetric(precision_bits)?,
            kv_strategy,
            token_budget,
            group_size,
            amortization_batch: 1,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_batch(mut self, batch: u32) -> Self {
        self.amortization_batch = batch;
        self
    }

    pub fn validate(&self) -> Result<(), MemoryError> {
        if self.group_size == 0 {
            return Err(MemoryError::InvalidGroupSize);
        }
        if self.amortization_batch == 0 {
            return Err(MemoryError::InvalidBatch);
        }
        self.kv_strategy.validate()
    }

    pub fn key(&self) -> ConfigKey {
        ConfigKey {
            model: self.model.clone(),
            precision_bits: self.weight_quant.precision_bits,
            kv: self.kv_strategy,
            token_budget: self.token_budget,
            group_size: self.group_size,
        }
    }
}

impl fmt::Display for InferenceConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.key())?;
        if self.amortization_batch > 1 {
            write!(f, "/B={}", self.amortization_batch)?;
        }
        Ok(())
    }
}

impl ModelCatalog {
    pub fn weight_memory_bytes(&self, config: &InferenceConfig) -> Result<u64, MemoryError> {
        weight_memory_bytes(self.get(&config.model)?, &config.weight_quant)
    }

    pub fn effective_size_bytes(&self, config: &InferenceConfig) -> Result<u64, MemoryError> {
        effective_size_bytes(self.get(&config.model)?, &config.weight_quant)
    }

    pub fn kv_memory_bytes(&self, config: &InferenceConfig) -> Result<u64, MemoryError> {
        kv_memory_bytes(
            self.get(&config.model)?,
            &config.kv_strategy,
            config.token_budget,
            config.group_size,
        )
    }

    /// Weights plus KV cache for the config's token budget and group size.
    pub fn total_memory_bytes(&self, config: &InferenceConfig) -> Result<u64, MemoryError> {
        Ok(self.breakdown(config)?.total)
    }

    /// Weights divided over `batch` generations plus one generation's KV.
    pub fn amortized_memory_bytes(
        &self,
        config: &InferenceConfig,
        batch: u32,
    ) -> Result<u64, MemoryError> {
        let spec = self.get(&config.model)?;
        floor_bytes(crate::memory::amortized_memory_exact(
            spec,
            &config.weight_quant,
            &config.kv_strategy,
            config.token_budget,
            config.group_size,
            batch,
        )?)
    }

    pub fn breakdown(&self, config: &InferenceConfig) -> Result<MemoryBreakdown, MemoryError> {
        config.validate()?;
        breakdown(
            self.get(&config.model)?,
            &config.weight_quant,
            &config.kv_strategy,
            config.token_budget,
            config.group_size,
            config.amortization_batch,
        )
    }

    /// The planner's memory cost: amortized when the batch exceeds 1, total otherwise.
    pub fn memory_cost_bytes(&self, config: &InferenceConfig) -> Result<u64, MemoryError> {
        let b = self.breakdown(config)?;
        Ok(if config.amortization_batch > 1 { b.amortized } else { b.total })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::memory::units::gib_2dp;

    #[test]
    fn decomposition_examples() {
        let c = ModelCatalog::builtin();
        let cfg = InferenceConfig::new("Qwen3-4B", 4, KvCacheStrategy::Full, 30_000, 1).unwrap();
        let b = c.breakdown(&cfg).unwrap();
        assert_eq!(gib_2dp(b.weights), "2.49");
        assert_eq!(gib_2dp(b.kv), "4.12");
        assert_eq!(gib_2dp(b.total), "6.61");

        let cfg = InferenceConfig::new("Qwen3-8B", 8, KvCacheStrategy::Full, 18_000, 1).unwrap();
        let b = c.breakdown(&cfg).unwrap();
        assert_eq!((gib_2dp(b.weights).as_str(), gib_2dp(b.kv).as_str()), ("8.94", "2.47"));
        assert_eq!(gib_2dp(b.total), "11.41");
    }

    #[test]
    fn zero_tokens_is_weights_only() {
        let c = ModelCatalog::builtin();
        let cfg = InferenceConfig::new("Qwen3-1.7B", 16, KvCacheStrategy::Full, 0, 4).unwrap();
        assert_eq!(c.total_memory_bytes(&cfg).unwrap(), c.weight_memory_bytes(&cfg).unwrap());
    }

    #[test]
    fn amortized_example() {
        let c = ModelCatalog::builtin();
        let cfg = InferenceConfig::new("Qwen3-4B", 8, KvCacheStrategy::Full, 30_000, 1).unwrap();
        assert_eq!(gib_2dp(c.amortized_memory_bytes(&cfg, 16).unwrap()), "4.38");
        assert_eq!(
            c.amortized_memory_bytes(&cfg, 1).unwrap(),
            c.total_memory_bytes(&cfg).unwrap()
        );
        let batched = cfg.clone().with_batch(16);
        assert_eq!(
            c.memory_cost_bytes(&batched).unwrap(),
            c.amortized_memory_bytes(&cfg, 16).unwrap()
        );
    }

    #[test]
    fn unknown_model_is_lookup_error() {
        let c = ModelCatalog::builtin();
        let cfg = InferenceConfig::new("Mystery-3B", 8, KvCacheStrategy::Full, 10, 1).unwrap();
        assert!(matches!(c.total_memory_bytes(&cfg), Err(MemoryError::ModelNotFound(_))));
    }
}
