use serde::{Deserialize, Serialize};

use super::dominance::{CostPoint, CostUnit, Frontier};
use super::FrontierError;
use crate::config::ConfigKey;
use crate::measurements::Dataset;
use crate::memory::ModelCatalog;
use crate::scalar::Scalar;

/// Which cost a measurement is placed at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axis", rename_all = "snake_case")]
pub enum CostAxis {
    /// Total memory, or amortized memory per generation when the batch exceeds 1.
    Memory {
        #[serde(default = "one")]
        amortization_batch: u32,
    },
    Latency,
    Throughput,
}

fn one() -> u32 {
    1
}

impl Default for CostAxis {
    fn default() -> Self {
        CostAxis::Memory {
            amortization_batch: 1,
        }
    }
}

impl CostAxis {
    pub fn unit(self) -> CostUnit {
        match self {
            CostAxis::Memory { .. } => CostUnit::Bytes,
            CostAxis::Latency => CostUnit::Seconds,
            CostAxis::Throughput => CostUnit::InverseRps,
        }
    }
}

/// Places every record of `dataset` on `axis`. Records without the metric
/// the axis needs (latency, throughput) are left out.
pub fn cost_points<S: Scalar>(
    dataset: &Dataset,
    catalog: &ModelCatalog,
    axis: CostAxis,
) -> Result<Vec<CostPoint<S>>, FrontierError> {
    let unit = axis.unit();
    let mut out = Vec::with_capacity(dataset.len());
    for record in dataset.iter() {
        let cost = match axis {
            CostAxis::Memory { amortization_batch } => {
                let config = record.config()?.with_batch(amortization_batch);
                S::of_bytes(catalog.memory_cost_bytes(&config)?)
            }
            CostAxis::Latency => match record.latency_seconds {
                Some(s) => S::of(s),
                None => continue,
            },
            CostAxis::Throughput => match record.throughput_rps {
                Some(rps) => S::of(1.0 / rps),
                None => continue,
            },
        };
        out.push(CostPoint::new(cost, unit, S::of(record.accuracy), record.key())?);
    }
    Ok(out)
}

/// One frontier member projected onto the attributes a composition plot
/// needs: where on the cost axis, with what budget, effective size and group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositionRow<S> {
    pub cost: S,
    pub unit: CostUnit,
    pub accuracy: S,
    pub config_key: ConfigKey,
    pub token_budget: u64,
    pub effective_size_bytes: u64,
    pub group_size: u32,
    pub co_optimal: bool,
}

pub fn frontier_composition<S: Scalar>(
    frontier: &Frontier<S>,
    dataset: &Dataset,
    catalog: &ModelCatalog,
) -> Result<Vec<CompositionRow<S>>, FrontierError> {
    frontier
        .members()
        .iter()
        .map(|m| {
            let key = &m.point.config_key;
            let record = dataset
                .get(key)
                .ok_or_else(|| FrontierError::Unresolved(key.clone()))?;
            let config = record.config()?;
            Ok(CompositionRow {
                cost: m.point.cost,
                unit: m.point.unit,
                accuracy: m.point.accuracy,
                config_key: key.clone(),
                token_budget: record.token_budget,
                effective_size_bytes: catalog.effective_size_bytes(&config)?,
                group_size: record.group_size,
                co_optimal: m.co_optimal,
            })
        })
        .collect()
}
