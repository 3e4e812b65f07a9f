use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::PlanError;
use crate::config::InferenceConfig;
use crate::measurements::Dataset;
use crate::memory::{KvCacheStrategy, WeightQuantSpec};

/// Axes of the configuration grid. The cross product is taken in field order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSpace {
    pub models: Vec<String>,
    pub precisions: Vec<u32>,
    pub kv_strategies: Vec<KvCacheStrategy>,
    pub token_budgets: Vec<u64>,
    pub group_sizes: Vec<u32>,
    #[serde(default = "one")]
    pub amortization_batch: u32,
}

fn one() -> u32 {
    1
}

impl SearchSpace {
    /// Every distinct axis value present in `dataset`, each axis sorted.
    pub fn from_dataset(dataset: &Dataset) -> Self {
        let mut models = BTreeSet::new();
        let mut precisions = BTreeSet::new();
        let mut kv = BTreeSet::new();
        let mut budgets = BTreeSet::new();
        let mut groups = BTreeSet::new();
        for r in dataset.iter() {
            models.insert(r.model.clone());
            precisions.insert(r.precision_bits);
            kv.insert(r.kv);
            budgets.insert(r.token_budget);
            groups.insert(r.group_size);
        }
        SearchSpace {
            models: models.into_iter().collect(),
            precisions: precisions.into_iter().collect(),
            kv_strategies: kv.into_iter().collect(),
            token_budgets: budgets.into_iter().collect(),
            group_sizes: groups.into_iter().collect(),
            amortization_batch: 1,
        }
    }

    /// Qwen3 0.6B-32B at 4/8/16-bit; full, evicted (2k/4k/8k tokens retained) and
    /// quantized (2/4/8-bit) KV; budgets 2k-30k in 4k steps; G in
    /// {1,3,4,6,8,12,16}. 7,056 configurations.
    pub fn reference_grid() -> Self {
        SearchSpace {
            models: ["0.6B", "1.7B", "4B", "8B", "14B", "32B"]
                .iter()
                .map(|s| format!("Qwen3-{s}"))
                .collect(),
            precisions: vec![4, 8, 16],
            kv_strategies: vec![
                KvCacheStrategy::Full,
                KvCacheStrategy::evict(2_000),
                KvCacheStrategy::evict(4_000),
                KvCacheStrategy::evict(8_000),
                KvCacheStrategy::quant(2),
                KvCacheStrategy::quant(4),
                KvCacheStrategy::quant(8),
            ],
            token_budgets: (0..8).map(|i| 2_000 + 4_000 * i).collect(),
            group_sizes: vec![1, 3, 4, 6, 8, 12, 16],
            amortization_batch: 1,
        }
    }

    pub fn size(&self) -> usize {
        self.models.len()
            * self.precisions.len()
            * self.kv_strategies.len()
            * self.token_budgets.len()
            * self.group_sizes.len()
    }
}

/// Full cross product ordered by (model, precision, strategy, budget, group).
pub fn enumerate_configs(space: &SearchSpace) -> Result<Vec<InferenceConfig>, PlanError> {
    let axes = [
        ("models", space.models.is_empty()),
        ("precisions", space.precisions.is_empty()),
        ("kv_strategies", space.kv_strategies.is_empty()),
        ("token_budgets", space.token_budgets.is_empty()),
        ("group_sizes", space.group_sizes.is_empty()),
    ];
    if let Some((name, _)) = axes.iter().find(|(_, empty)| *empty) {
        return Err(PlanError::EmptyAxis(name));
    }
    if space.amortization_batch == 0 {
        return Err(crate::memory::MemoryError::InvalidBatch.into());
    }
    let mut out = Vec::with_capacity(space.size());
    for model in &space.models {
        for &bits in &space.precisions {
            let weight_quant = WeightQuantSpec::symmetric(bits)?;
            for kv in &space.kv_strategies {
                kv.validate()?;
                for &t in &space.token_budgets {
                    for &g in &space.group_sizes {
                        if g == 0 {
                            return Err(crate::memory::MemoryError::InvalidGroupSize.into());
                        }
                        out.push(InferenceConfig {
                            model: model.clone(),
                            weight_quant,
                            kv_strategy: *kv,
                            token_budget: t,
                            group_size: g,
                            amortization_batch: space.amortization_batch,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_space() -> SearchSpace {
        SearchSpace {
            models: vec!["Qwen3-4B".into()],
            precisions: vec![8],
            kv_strategies: vec![KvCacheStrategy::Full],
            token_budgets: vec![2_000],
            group_sizes: vec![1],
            amortization_batch: 1,
        }
    }

    #[test]
    fn one_value_per_axis() {
        assert_eq!(enumerate_configs(&unit_space()).unwrap().len(), 1);
    }

    #[test]
    fn product_arithmetic() {
        let mut s = SearchSpace::reference_grid();
        s.kv_strategies = vec![KvCacheStrategy::Full];
        s.group_sizes = vec![1];
        assert_eq!(enumerate_configs(&s).unwrap().len(), 144);
        assert_eq!(enumerate_configs(&SearchSpace::reference_grid()).unwrap().len(), 7_056);
    }

    #[test]
    fn ordering_is_lexicographic_in_axis_order() {
        let mut s = unit_space();
        s.precisions = vec![4, 8];
        s.token_budgets = vec![2_000, 6_000];
        let keys: Vec<_> = enumerate_configs(&s)
            .unwrap()
            .iter()
            .map(|c| (c.weight_quant.precision_bits, c.token_budget))
            .collect();
        assert_eq!(keys, vec![(4, 2_000), (4, 6_000), (8, 2_000), (8, 6_000)]);
    }

    #[test]
    fn empty_axis_rejected() {
        let mut s = unit_space();
        s.group_sizes.clear();
        assert!(matches!(enumerate_configs(&s), Err(PlanError::EmptyAxis("group_sizes"))));
    }
}
