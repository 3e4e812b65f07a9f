//! Memory accounting, accuracy estimation, Pareto frontiers and
//! budget-constrained planning for reasoning-model deployments.
//!
//! Byte quantities are exact (`u64`, computed through `Ratio<u128>`).
//! Accuracy and cost axes are generic over [`Scalar`]; the `*64` / `*32`
//! aliases below fix the float type.

pub mod config;
pub mod frontier;
pub mod measurements;
pub mod memory;
pub mod planner;
pub mod scalar;

pub use config::{ConfigKey, InferenceConfig};
pub use frontier::{
    cost_points, dominates, frontier_composition, interpolate_accuracy, pareto_frontier,
    write_frontier_table, CompositionRow, CostAxis, CostPoint, CostUnit, Frontier, FrontierError,
    FrontierPoint,
};
pub use measurements::{
    derive_record, load_measurements, load_pools, maj_at_g, pass_at_1, Dataset, EstimateOptions,
    MeasurementError, MeasurementRecord, Method, SamplePool, TiePolicy,
};
pub use memory::{
    KvCacheStrategy, KvQuantSpec, MemoryBreakdown, MemoryError, ModelCatalog, ModelSpec,
    Thresholds, WeightQuantSpec,
};
pub use planner::{
    annotate_rules, enumerate_configs, plan, Objective, PlanError, PlanOptions, Recommendation,
    RuleAnnotation, SearchSpace, TaskType,
};
pub use scalar::Scalar;

pub type CostPoint64 = CostPoint<f64>;
pub type CostPoint32 = CostPoint<f32>;
pub type Frontier64 = Frontier<f64>;
pub type Frontier32 = Frontier<f32>;
pub type Recommendation64 = Recommendation<f64>;
pub type Recommendation32 = Recommendation<f32>;
pub type CompositionRow64 = CompositionRow<f64>;

/// Version stamped on every serialized object this crate emits.
pub const SCHEMA_VERSION: u32 = 1;
