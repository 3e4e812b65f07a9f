//! Endpoint logic as plain functions over the loaded state. The HTTP layer
//! and the CLI both call these.

use memplan_core::measurements::{maj_at_g, pass_at_1, SamplePool};
use memplan_core::memory::units::human;
use memplan_core::{
    cost_points, frontier_composition, pareto_frontier, plan as plan_core, Dataset,
    InferenceConfig, MeasurementRecord, PlanOptions, Recommendation64, SearchSpace,
};

use crate::docs::*;
use crate::error::ApiError;
use crate::state::AppState;

pub fn health(state: &AppState) -> Health {
    Health {
        status: "ok".into(),
        models: state.catalog.len(),
        records: state.dataset.len(),
        pool_sets: state.pool_sets.keys().cloned().collect(),
    }
}

pub fn models(state: &AppState) -> ModelList {
    ModelList {
        models: state.catalog.models.clone(),
        thresholds: state.catalog.thresholds.clone(),
    }
}

pub fn memory(state: &AppState, req: &MemoryRequest) -> Result<MemoryReport, ApiError> {
    let config = InferenceConfig::new(
        req.model.clone(),
        req.precision_bits,
        req.kv,
        req.token_budget,
        req.group_size,
    )?
    .with_batch(req.amortization_batch);
    config.validate()?;
    let b = state.catalog.breakdown(&config)?;
    Ok(MemoryReport {
        model: req.model.clone(),
        precision_bits: req.precision_bits,
        kv: req.kv,
        token_budget: req.token_budget,
        group_size: req.group_size,
        amortization_batch: req.amortization_batch,
        weights_bytes: b.weights,
        kv_bytes: b.kv,
        total_bytes: b.total,
        amortized_bytes: b.amortized,
        weights_display: human(b.weights),
        kv_display: human(b.kv),
        total_display: human(b.total),
        amortized_display: human(b.amortized),
    })
}

fn keep(filters: &Filters, r: &MeasurementRecord) -> bool {
    fn ok<T: PartialEq>(axis: &Option<Vec<T>>, v: &T) -> bool {
        axis.as_ref().is_none_or(|vals| vals.contains(v))
    }
    ok(&filters.models, &r.model)
        && ok(&filters.precisions, &r.precision_bits)
        && ok(&filters.kv_strategies, &r.kv)
        && ok(&filters.token_budgets, &r.token_budget)
        && ok(&filters.group_sizes, &r.group_size)
}

pub fn filtered(dataset: &Dataset, filters: &Filters) -> Dataset {
    dataset.filter(|r| keep(filters, r))
}

pub fn frontier(state: &AppState, req: &FrontierRequest) -> Result<FrontierReport, ApiError> {
    let ds = filtered(&state.dataset, &req.filters);
    let points = cost_points::<f64>(&ds, &state.catalog, req.axis)?;
    let f = pareto_frontier(&points)?;
    Ok(FrontierReport {
        unit: f.unit(),
        points: frontier_composition(&f, &ds, &state.catalog)?,
    })
}

pub fn plan(state: &AppState, req: &PlanRequest) -> Result<Recommendation64, ApiError> {
    let ds = filtered(&state.dataset, &req.filters);
    let space = match &req.space {
        Some(s) => s.clone(),
        None => SearchSpace::from_dataset(&ds),
    };
    let options = PlanOptions {
        objective: req.objective,
        amortization_batch: req.amortization_batch,
        annotate: req.annotate,
        task_type: req.task_type,
        neighborhood_radius: req.neighborhood_radius,
    };
    let budget = req.budget.unwrap_or(f64::INFINITY);
    Ok(plan_core(budget, &ds, &state.catalog, &space, &options)?)
}

pub fn estimate(state: &AppState, req: &EstimateRequest) -> Result<EstimateReport, ApiError> {
    let pools: &[SamplePool] = match (&req.pools, &req.pool_set) {
        (Some(p), None) => p,
        (None, Some(name)) => state
            .pool_sets
            .get(name)
            .ok_or_else(|| ApiError::new("POOL_SET_NOT_FOUND", format!("no pool set named {name:?}")))?,
        _ => return Err(ApiError::invalid("give exactly one of `pools` and `pool_set`")),
    };
    if pools.is_empty() {
        return Err(ApiError::new("DOMAIN_ERROR", "no pools given"));
    }
    let mut instances = Vec::with_capacity(pools.len());
    for p in pools {
        p.validate().map_err(|e| ApiError::new("SCHEMA_VIOLATION", format!("pool {}: {e}", p.instance_id)))?;
        let estimate = if req.group_size == 1 {
            pass_at_1::<f64>(p)?
        } else {
            maj_at_g::<f64>(p, req.group_size, &req.options)?
        };
        instances.push(InstanceEstimate {
            instance_id: p.instance_id.clone(),
            pool_size: p.size(),
            estimate,
        });
    }
    let mean = instances.iter().map(|i| i.estimate).sum::<f64>() / instances.len() as f64;
    Ok(EstimateReport {
        group_size: req.group_size,
        options: req.options,
        mean,
        instances,
    })
}
