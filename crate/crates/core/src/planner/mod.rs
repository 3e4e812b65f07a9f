//! Budget-constrained configuration search with rule annotations.

mod plan;
mod rules;
mod space;

pub use plan::{candidates, plan, Candidate, Objective, PlanOptions, Recommendation};
pub use rules::{annotate_rules, RuleAnnotation, RuleContext, TaskType};
pub use space::{enumerate_configs, SearchSpace};

use thiserror::Error;

use crate::config::ConfigKey;
use crate::frontier::FrontierError;
use crate::memory::MemoryError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanError {
    #[error("search space axis {0:?} is empty")]
    EmptyAxis(&'static str),
    #[error("budget must be a positive number")]
    InvalidBudget,
    #[error("the dataset covers no configuration in the search space")]
    NoCandidates,
    #[error("no configuration fits the budget of {budget}; the cheapest known is {cheapest} at {cheapest_cost}")]
    Infeasible {
        budget: f64,
        cheapest_cost: f64,
        cheapest: ConfigKey,
    },
    #[error(transparent)]
    Memory(#[from] MemoryError),
    #[error(transparent)]
    Frontier(#[from] FrontierError),
}

impl PlanError {
    pub fn code(&self) -> &'static str {
        match self {
            PlanError::Infeasible { .. } => "INFEASIBLE",
            PlanError::NoCandidates => "NO_CANDIDATES",
            PlanError::Memory(e) => e.code(),
            PlanError::Frontier(e) => e.code(),
            _ => "DOMAIN_ERROR",
        }
    }
}
