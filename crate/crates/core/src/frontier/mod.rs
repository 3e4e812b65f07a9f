//! Pareto frontiers over (cost, accuracy) and the tooling around them.

mod composition;
mod dominance;
mod export;
mod interpolate;

pub use composition::{cost_points, frontier_composition, CompositionRow, CostAxis};
pub use dominance::{dominates, pareto_frontier, CostPoint, CostUnit, Frontier, FrontierPoint};
pub use export::{write_frontier_table, FRONTIER_COLUMNS};
pub use interpolate::{interpolate_accuracy, Extrapolation, Interpolated};

use thiserror::Error;

use crate::config::ConfigKey;
use crate::memory::MemoryError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrontierError {
    #[error("cost units differ: {0:?} vs {1:?}")]
    UnitMismatch(CostUnit, CostUnit),
    #[error("no points to build a frontier from")]
    Empty,
    #[error("invalid point {key}: {reason}")]
    InvalidPoint { key: ConfigKey, reason: String },
    #[error("curve must be strictly increasing in token budget")]
    UnsortedCurve,
    #[error("configuration {0} is not in the dataset")]
    Unresolved(ConfigKey),
    #[error(transparent)]
    Memory(#[from] MemoryError),
    #[error("export failed: {0}")]
    Export(String),
}

impl FrontierError {
    pub fn code(&self) -> &'static str {
        match self {
            FrontierError::Empty => "EMPTY_FRONTIER",
            FrontierError::Unresolved(_) => "CONFIG_NOT_FOUND",
            FrontierError::Memory(e) => e.code(),
            FrontierError::Export(_) => "IO_ERROR",
            _ => "DOMAIN_ERROR",
        }
    }
}
