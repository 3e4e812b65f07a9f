//! Advisory annotations keyed to five scale-dependent regularities.
//!
//! `triggered` means the rule suggests changing something about the config;
//! every rule always emits an explanation. Annotations never feed back into
//! the planner's choice.

use serde::{Deserialize, Serialize};

use crate::config::InferenceConfig;
use crate::memory::units::gib_2dp;
use crate::memory::{KvCacheStrategy, Thresholds};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskType {
    Math,
    KnowledgeIntensive,
    #[default]
    Unspecified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleContext {
    pub thresholds: Thresholds,
    #[serde(default)]
    pub task_type: TaskType,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleAnnotation {
    pub rule_id: u8,
    pub triggered: bool,
    pub explanation: String,
}

fn note(rule_id: u8, triggered: bool, explanation: String) -> RuleAnnotation {
    RuleAnnotation {
        rule_id,
        triggered,
        explanation,
    }
}

/// Evaluates all five rules for `config`, whose weights occupy
/// `effective_size_bytes`.
pub fn annotate_rules(
    config: &InferenceConfig,
    effective_size_bytes: u64,
    ctx: &RuleContext,
) -> Vec<RuleAnnotation> {
    let th = &ctx.thresholds;
    let size = gib_2dp(effective_size_bytes);
    let small = gib_2dp(th.small_bytes);
    let kv_th = gib_2dp(th.kv_bytes);
    let below_small = effective_size_bytes < th.small_bytes;
    let long = config.token_budget >= th.long_budget_tokens;

    let allocation = match (below_small, long) {
        (true, true) => note(
            1,
            true,
            format!(
                "effective size {size} GiB is below {small} GiB and the token budget is long: \
                 memory is better spent on a larger effective model size than on more tokens"
            ),
        ),
        (true, false) => note(
            1,
            false,
            format!(
                "effective size {size} GiB is below {small} GiB: grow effective size before \
                 the token budget"
            ),
        ),
        (false, false) => note(
            1,
            true,
            format!(
                "effective size {size} GiB is at or above {small} GiB: extend the token budget \
                 until accuracy saturates"
            ),
        ),
        (false, true) => note(
            1,
            false,
            format!(
                "effective size {size} GiB is at or above {small} GiB and the token budget is \
                 already long"
            ),
        ),
    };

    let bits = config.weight_quant.precision_bits;
    let precision = match ctx.task_type {
        TaskType::KnowledgeIntensive if bits != 4 => note(
            2,
            true,
            format!("{bits}-bit weights on a knowledge-intensive task: 4-bit is broadly memory-optimal"),
        ),
        TaskType::KnowledgeIntensive => note(
            2,
            false,
            "4-bit weights are broadly memory-optimal for knowledge-intensive tasks".into(),
        ),
        TaskType::Math if bits == 4 => note(
            2,
            true,
            "4-bit weights on a mathematical task: 8-bit is memory-optimal for small models, \
             8- and 16-bit are competitive for larger ones"
                .into(),
        ),
        TaskType::Math => note(
            2,
            false,
            format!("{bits}-bit weights suit mathematical reasoning"),
        ),
        TaskType::Unspecified => note(
            2,
            false,
            "task type not given; weight-precision guidance depends on it".into(),
        ),
    };

    let g = config.group_size;
    let parallel = match (g > 1, below_small) {
        (true, true) => note(
            3,
            true,
            format!(
                "G={g} below {small} GiB effective size: serial scaling alone gives a better \
                 memory-accuracy trade-off, use G=1"
            ),
        ),
        (true, false) => note(
            3,
            false,
            format!(
                "G={g} at or above {small} GiB effective size: parallel scaling improves the \
                 trade-off, and the memory-optimal G grows with the budget"
            ),
        ),
        (false, true) => note(
            3,
            false,
            format!("below {small} GiB effective size serial scaling is preferred"),
        ),
        (false, false) => note(
            3,
            false,
            "parallel scaling (G > 1) can improve the trade-off at larger budgets".into(),
        ),
    };

    let compression = if config.kv_strategy.is_compressed() {
        note(4, false, format!("KV cache compressed ({})", config.kv_strategy))
    } else {
        note(
            4,
            true,
            "weight quantization alone is not memory-optimal: compressing the KV cache \
             advances the frontier at every weight precision"
                .into(),
        )
    };

    let kv_choice = match (effective_size_bytes < th.kv_bytes, config.kv_strategy) {
        (true, KvCacheStrategy::Evict { .. }) => note(
            5,
            false,
            format!("eviction is the better KV strategy below {kv_th} GiB effective size"),
        ),
        (true, s) => note(
            5,
            true,
            format!(
                "effective size {size} GiB is below {kv_th} GiB: KV eviction gives a better \
                 trade-off than {}",
                if s.is_compressed() { "KV quantization" } else { "an uncompressed cache" }
            ),
        ),
        (false, _) => note(
            5,
            false,
            format!(
                "effective size {size} GiB is at or above {kv_th} GiB: KV quantization and \
                 eviction are competitive"
            ),
        ),
    };

    vec![allocation, precision, parallel, compression, kv_choice]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::memory::ModelCatalog;

    fn ctx(task_type: TaskType) -> RuleContext {
        RuleContext {
            thresholds: ModelCatalog::builtin().thresholds().unwrap(),
            task_type,
        }
    }

    fn eval(model: &str, bits: u32, kv: KvCacheStrategy, t: u64, g: u32, task: TaskType) -> Vec<RuleAnnotation> {
        let catalog = ModelCatalog::builtin();
        let cfg = InferenceConfig::new(model, bits, kv, t, g).unwrap();
        annotate_rules(&cfg, catalog.effective_size_bytes(&cfg).unwrap(), &ctx(task))
    }

    #[test]
    fn small_model_long_budget_triggers_allocation_rule() {
        let notes = eval("Qwen3-1.7B", 8, KvCacheStrategy::Full, 30_000, 1, TaskType::Unspecified);
        assert_eq!(notes.len(), 5);
        assert!(notes[0].triggered);
        assert!(notes[0].explanation.contains("larger effective model size"));
    }

    #[test]
    fn parallel_scaling_above_threshold() {
        let notes = eval("Qwen3-14B", 8, KvCacheStrategy::Full, 18_000, 8, TaskType::Unspecified);
        assert_eq!(notes[2].rule_id, 3);
        assert!(!notes[2].triggered);
        assert!(notes[2].explanation.contains("parallel scaling improves"));
        let small = eval("Qwen3-0.6B", 8, KvCacheStrategy::Full, 18_000, 8, TaskType::Unspecified);
        assert!(small[2].triggered);
    }

    #[test]
    fn threshold_itself_counts_as_at_or_above() {
        let th = ctx(TaskType::Unspecified);
        let cfg = InferenceConfig::new("x", 8, KvCacheStrategy::Full, 2_000, 1).unwrap();
        let at = annotate_rules(&cfg, th.thresholds.small_bytes, &th);
        assert!(at[0].explanation.contains("at or above"));
        let below = annotate_rules(&cfg, th.thresholds.small_bytes - 1, &th);
        assert!(below[0].explanation.contains("is below"));
        let at_kv = annotate_rules(&cfg, th.thresholds.kv_bytes, &th);
        assert!(!at_kv[4].triggered);
    }

    #[test]
    fn precision_rule_depends_on_task() {
        assert!(eval("Qwen3-8B", 8, KvCacheStrategy::Full, 2_000, 1, TaskType::KnowledgeIntensive)[1].triggered);
        assert!(!eval("Qwen3-8B", 4, KvCacheStrategy::Full, 2_000, 1, TaskType::KnowledgeIntensive)[1].triggered);
        assert!(eval("Qwen3-8B", 4, KvCacheStrategy::Full, 2_000, 1, TaskType::Math)[1].triggered);
        assert!(!eval("Qwen3-8B", 4, KvCacheStrategy::Full, 2_000, 1, TaskType::Unspecified)[1].triggered);
    }

    #[test]
    fn kv_rules() {
        let full = eval("Qwen3-1.7B", 8, KvCacheStrategy::Full, 2_000, 1, TaskType::Unspecified);
        assert!(full[3].triggered && full[4].triggered);
        let quant = eval("Qwen3-1.7B", 8, KvCacheStrategy::quant(4), 2_000, 1, TaskType::Unspecified);
        assert!(!quant[3].triggered && quant[4].triggered);
        let evict = eval("Qwen3-1.7B", 8, KvCacheStrategy::evict(4_096), 2_000, 1, TaskType::Unspecified);
        assert!(!evict[4].triggered);
        let big = eval("Qwen3-32B", 8, KvCacheStrategy::quant(4), 2_000, 1, TaskType::Unspecified);
        assert!(!big[4].triggered);
    }
}
