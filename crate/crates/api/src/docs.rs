//! Request and response documents. Field names are part of the public
//! contract.

use serde::{Deserialize, Serialize};

use memplan_core::frontier::CostUnit;
use memplan_core::measurements::{EstimateOptions, SamplePool};
use memplan_core::memory::ThresholdSpec;
use memplan_core::{CompositionRow64, CostAxis, KvCacheStrategy, ModelSpec, Objective, SearchSpace, TaskType};

fn one() -> u32 {
    1
}

fn full() -> KvCacheStrategy {
    KvCacheStrategy::Full
}

fn yes() -> bool {
    true
}

fn two() -> usize {
    2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub models: usize,
    pub records: usize,
    pub pool_sets: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelList {
    pub models: Vec<ModelSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<ThresholdSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemoryRequest {
    pub model: String,
    pub precision_bits: u32,
    #[serde(default = "full")]
    pub kv: KvCacheStrategy,
    pub token_budget: u64,
    #[serde(default = "one")]
    pub group_size: u32,
    #[serde(default = "one")]
    pub amortization_batch: u32,
}

/// Exact bytes plus display strings (`"4.12 GiB"`, `"0 B"`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemoryReport {
    pub model: String,
    pub precision_bits: u32,
    pub kv: KvCacheStrategy,
    pub token_budget: u64,
    pub group_size: u32,
    pub amortization_batch: u32,
    pub weights_bytes: u64,
    pub kv_bytes: u64,
    pub total_bytes: u64,
    pub amortized_bytes: u64,
    pub weights_display: String,
    pub kv_display: String,
    pub total_display: String,
    pub amortized_display: String,
}

/// Restricts the dataset before a frontier is built. Absent axes pass.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Filters {
    pub models: Option<Vec<String>>,
    pub precisions: Option<Vec<u32>>,
    pub kv_strategies: Option<Vec<KvCacheStrategy>>,
    pub token_budgets: Option<Vec<u64>>,
    pub group_sizes: Option<Vec<u32>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrontierRequest {
    #[serde(default)]
    pub axis: CostAxis,
    #[serde(default)]
    pub filters: Filters,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontierReport {
    pub unit: CostUnit,
    pub points: Vec<CompositionRow64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanRequest {
    /// In the objective's unit (bytes or seconds). Absent or null: unlimited.
    #[serde(default)]
    pub budget: Option<f64>,
    #[serde(default)]
    pub objective: Objective,
    #[serde(default)]
    pub amortization_batch: Option<u32>,
    #[serde(default = "yes")]
    pub annotate: bool,
    #[serde(default)]
    pub task_type: TaskType,
    #[serde(default = "two")]
    pub neighborhood_radius: usize,
    #[serde(default)]
    pub filters: Filters,
    /// Defaults to every axis value present in the (filtered) dataset.
    #[serde(default)]
    pub space: Option<SearchSpace>,
}

impl Default for PlanRequest {
    fn default() -> Self {
        PlanRequest {
            budget: None,
            objective: Objective::Memory,
            amortization_batch: None,
            annotate: true,
            task_type: TaskType::Unspecified,
            neighborhood_radius: 2,
            filters: Filters::default(),
            space: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRequest {
    /// Inline pools; exclusive with `pool_set`.
    #[serde(default)]
    pub pools: Option<Vec<SamplePool>>,
    /// Name of a pool set loaded at startup.
    #[serde(default)]
    pub pool_set: Option<String>,
    pub group_size: u32,
    #[serde(flatten)]
    pub options: EstimateOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceEstimate {
    pub instance_id: String,
    pub pool_size: usize,
    pub estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub group_size: u32,
    #[serde(flatten)]
    pub options: EstimateOptions,
    pub mean: f64,
    pub instances: Vec<InstanceEstimate>,
}
