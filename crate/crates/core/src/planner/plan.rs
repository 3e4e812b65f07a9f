use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::rules::{annotate_rules, RuleAnnotation, RuleContext, TaskType};
use super::space::{enumerate_configs, SearchSpace};
use super::PlanError;
use crate::config::{ConfigKey, InferenceConfig};
use crate::frontier::{interpolate_accuracy, pareto_frontier, CostPoint, CostUnit, Frontier};
use crate::measurements::Dataset;
use crate::memory::{KvCacheStrategy, ModelCatalog};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    #[default]
    Memory,
    Latency,
}

impl Objective {
    pub fn unit(self) -> CostUnit {
        match self {
            Objective::Memory => CostUnit::Bytes,
            Objective::Latency => CostUnit::Seconds,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct PlanOptions {
    pub objective: Objective,
    /// Overrides the search space's batch for the memory objective.
    pub amortization_batch: Option<u32>,
    pub annotate: bool,
    pub task_type: TaskType,
    pub neighborhood_radius: usize,
}

impl Default for PlanOptions {
    fn default() -> Self {
        PlanOptions {
            objective: Objective::Memory,
            amortization_batch: None,
            annotate: true,
            task_type: TaskType::Unspecified,
            neighborhood_radius: 2,
        }
    }
}

/// A configuration from the search space with a known accuracy and cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate<S> {
    pub config: InferenceConfig,
    pub accuracy: S,
    pub cost: S,
    /// Memory cost (amortized when the batch exceeds 1), whatever the objective.
    pub memory_bytes: u64,
    /// Accuracy (or latency) came from interpolation between measured budgets.
    pub interpolated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recommendation<S> {
    pub chosen: InferenceConfig,
    pub config_key: ConfigKey,
    pub achieved_accuracy: S,
    pub cost: S,
    pub unit: CostUnit,
    pub memory_bytes: u64,
    pub interpolated: bool,
    pub frontier_neighborhood: Frontier<S>,
    pub annotations: Vec<RuleAnnotation>,
}

type Family = (String, u32, KvCacheStrategy, u32);

struct Curves {
    accuracy: HashMap<Family, Vec<(u64, f64)>>,
    latency: HashMap<Family, Vec<(u64, f64)>>,
}

impl Curves {
    fn new(dataset: &Dataset) -> Self {
        let mut accuracy: HashMap<Family, Vec<(u64, f64)>> = HashMap::new();
        let mut latency: HashMap<Family, Vec<(u64, f64)>> = HashMap::new();
        for r in dataset.iter() {
            let fam = (r.model.clone(), r.precision_bits, r.kv, r.group_size);
            if let Some(l) = r.latency_seconds {
                latency.entry(fam.clone()).or_default().push((r.token_budget, l));
            }
            accuracy.entry(fam).or_default().push((r.token_budget, r.accuracy));
        }
        for curve in accuracy.values_mut().chain(latency.values_mut()) {
            curve.sort_by_key(|p| p.0);
        }
        Curves { accuracy, latency }
    }

    /// Value at `t` strictly within the measured range of the family, or None.
    fn lookup<S: Scalar>(map: &HashMap<Family, Vec<(u64, f64)>>, fam: &Family, t: u64) -> Option<S> {
        let curve: Vec<(u64, S)> = map.get(fam)?.iter().map(|&(t, v)| (t, S::of(v))).collect();
        match interpolate_accuracy(&curve, t) {
            Ok(v) if !v.is_clamped() => Some(v.accuracy),
            _ => None,
        }
    }
}

/// Every configuration of `space` whose accuracy (and, for the latency
/// objective, latency) is measured or interpolable within the grid.
/// Memory costs are computed from `catalog`; unknown models are an error.
pub fn candidates<S: Scalar>(
    dataset: &Dataset,
    catalog: &ModelCatalog,
    space: &SearchSpace,
    options: &PlanOptions,
) -> Result<Vec<Candidate<S>>, PlanError> {
    let mut space = space.clone();
    if let Some(b) = options.amortization_batch {
        space.amortization_batch = b;
    }
    let configs = enumerate_configs(&space)?;
    let curves = Curves::new(dataset);
    let mut out = Vec::new();
    for config in configs {
        let memory_bytes = catalog.memory_cost_bytes(&config)?;
        let key = config.key();
        let fam: Family = (key.model.clone(), key.precision_bits, key.kv, key.group_size);
        let record = dataset.get(&key);
        let (accuracy, acc_interp) = match record {
            Some(r) => (S::of(r.accuracy), false),
            None => match Curves::lookup::<S>(&curves.accuracy, &fam, key.token_budget) {
                Some(a) => (a, true),
                None => continue,
            },
        };
        let (cost, cost_interp) = match options.objective {
            Objective::Memory => (S::of_bytes(memory_bytes), false),
            Objective::Latency => match record.and_then(|r| r.latency_seconds) {
                Some(l) => (S::of(l), false),
                None => match Curves::lookup::<S>(&curves.latency, &fam, key.token_budget) {
                    Some(l) => (l, true),
                    None => continue,
                },
            },
        };
        out.push(Candidate {
            config,
            accuracy,
            cost,
            memory_bytes,
            interpolated: acc_interp || cost_interp,
        });
    }
    Ok(out)
}

/// Total preference order: `Less` means `a` is the better pick.
fn preference<S: Scalar>(a: &Candidate<S>, b: &Candidate<S>) -> Ordering {
    let (ca, cb) = (&a.config, &b.config);
    b.accuracy
        .partial_cmp(&a.accuracy)
        .unwrap_or(Ordering::Equal)
        .then_with(|| a.cost.partial_cmp(&b.cost).unwrap_or(Ordering::Equal))
        .then_with(|| ca.token_budget.cmp(&cb.token_budget))
        .then_with(|| ca.group_size.cmp(&cb.group_size))
        .then_with(|| cb.weight_quant.precision_bits.cmp(&ca.weight_quant.precision_bits))
        .then_with(|| ca.model.cmp(&cb.model))
        .then_with(|| ca.kv_strategy.cmp(&cb.kv_strategy))
}

/// Highest-accuracy configuration whose cost is within `budget`.
///
/// Ties go to lower cost, then smaller token budget, smaller G, higher
/// weight precision, model name and KV strategy. An infinite budget is
/// allowed and means unconstrained.
pub fn plan<S: Scalar>(
    budget: S,
    dataset: &Dataset,
    catalog: &ModelCatalog,
    space: &SearchSpace,
    options: &PlanOptions,
) -> Result<Recommendation<S>, PlanError> {
    if budget.is_nan() || budget <= S::zero() {
        return Err(PlanError::InvalidBudget);
    }
    let all = candidates::<S>(dataset, catalog, space, options)?;
    if all.is_empty() {
        return Err(PlanError::NoCandidates);
    }
    let best = all
        .iter()
        .filter(|c| c.cost <= budget)
        .min_by(|a, b| preference(a, b));
    let best = match best {
        Some(b) => b,
        None => {
            let cheapest = all
                .iter()
                .min_by(|a, b| {
                    a.cost
                        .partial_cmp(&b.cost)
                        .unwrap_or(Ordering::Equal)
                        .then_with(|| preference(a, b))
                })
                .expect("non-empty");
            return Err(PlanError::Infeasible {
                budget: budget.as_f64(),
                cheapest_cost: cheapest.cost.as_f64(),
                cheapest: cheapest.config.key(),
            });
        }
    };

    let unit = options.objective.unit();
    let points = all
        .iter()
        .map(|c| CostPoint::new(c.cost, unit, c.accuracy, c.config.key()))
        .collect::<Result<Vec<_>, _>>()?;
    let frontier = pareto_frontier(&points)?;
    let key = best.config.key();
    let frontier_neighborhood = match frontier.position(&key) {
        Some(i) => frontier.neighborhood(i, options.neighborhood_radius),
        None => frontier.neighborhood(0, 0),
    };

    let annotations = if options.annotate {
        let ctx = RuleContext {
            thresholds: catalog.thresholds()?,
            task_type: options.task_type,
        };
        annotate_rules(&best.config, catalog.effective_size_bytes(&best.config)?, &ctx)
    } else {
        Vec::new()
    };

    Ok(Recommendation {
        chosen: best.config.clone(),
        config_key: key,
        achieved_accuracy: best.accuracy,
        cost: best.cost,
        unit,
        memory_bytes: best.memory_bytes,
        interpolated: best.interpolated,
        frontier_neighborhood,
        annotations,
    })
}
