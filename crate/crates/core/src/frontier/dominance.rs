use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::FrontierError;
use crate::config::ConfigKey;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostUnit {
    Bytes,
    Seconds,
    /// Reciprocal throughput, seconds per request.
    InverseRps,
}

impl CostUnit {
    pub fn as_str(self) -> &'static str {
        match self {
            CostUnit::Bytes => "bytes",
            CostUnit::Seconds => "seconds",
            CostUnit::InverseRps => "inverse_rps",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostPoint<S> {
    pub cost: S,
    pub unit: CostUnit,
    pub accuracy: S,
    pub config_key: ConfigKey,
}

impl<S: Scalar> CostPoint<S> {
    pub fn new(
        cost: S,
        unit: CostUnit,
        accuracy: S,
        config_key: ConfigKey,
    ) -> Result<Self, FrontierError> {
        let p = CostPoint {
            cost,
            unit,
            accuracy,
            config_key,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<(), FrontierError> {
        let reason = if !(self.cost >= S::zero()) || self.cost.is_infinite() {
            Some(format!("cost {} is not a finite non-negative value", self.cost))
        } else if !(self.accuracy >= S::zero() && self.accuracy <= S::one()) {
            Some(format!("accuracy {} outside [0, 1]", self.accuracy))
        } else {
            None
        };
        match reason {
            Some(reason) => Err(FrontierError::InvalidPoint {
                key: self.config_key.clone(),
                reason,
            }),
            None => Ok(()),
        }
    }

    fn same_position(&self, other: &Self) -> bool {
        self.cost == other.cost && self.accuracy == other.accuracy
    }
}

/// `a` is no more expensive and no less accurate than `b`, and strictly
/// better on at least one axis.
pub fn dominates<S: Scalar>(a: &CostPoint<S>, b: &CostPoint<S>) -> Result<bool, FrontierError> {
    if a.unit != b.unit {
        return Err(FrontierError::UnitMismatch(a.unit, b.unit));
    }
    Ok(a.cost <= b.cost
        && a.accuracy >= b.accuracy
        && (a.cost < b.cost || a.accuracy > b.accuracy))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontierPoint<S> {
    #[serde(flatten)]
    pub point: CostPoint<S>,
    /// Another member sits at exactly the same (cost, accuracy).
    pub co_optimal: bool,
}

/// Non-dominated points ordered by cost. Distinct positions are strictly
/// increasing in both cost and accuracy; exact duplicates are all kept and
/// flagged `co_optimal`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Frontier<S> {
    unit: CostUnit,
    members: Vec<FrontierPoint<S>>,
}

impl<S: Scalar> Frontier<S> {
    pub fn unit(&self) -> CostUnit {
        self.unit
    }

    pub fn members(&self) -> &[FrontierPoint<S>] {
        &self.members
    }

    pub fn points(&self) -> impl Iterator<Item = &CostPoint<S>> {
        self.members.iter().map(|m| &m.point)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn keys(&self) -> impl Iterator<Item = &ConfigKey> {
        self.points().map(|p| &p.config_key)
    }

    pub fn position(&self, key: &ConfigKey) -> Option<usize> {
        self.keys().position(|k| k == key)
    }

    /// Members within `radius` positions of `center`, as a frontier.
    pub fn neighborhood(&self, center: usize, radius: usize) -> Frontier<S> {
        let lo = center.saturating_sub(radius);
        let hi = (center + radius + 1).min(self.members.len());
        Frontier {
            unit: self.unit,
            members: self.members[lo..hi.max(lo)].to_vec(),
        }
    }

    /// Highest-cost member whose cost is within `budget`.
    pub fn best_within(&self, budget: S) -> Option<&FrontierPoint<S>> {
        self.members.iter().rev().find(|m| m.point.cost <= budget)
    }
}

fn sweep_order<S: Scalar>(a: &CostPoint<S>, b: &CostPoint<S>) -> Ordering {
    a.cost
        .partial_cmp(&b.cost)
        .unwrap_or(Ordering::Equal)
        .then_with(|| b.accuracy.partial_cmp(&a.accuracy).unwrap_or(Ordering::Equal))
        .then_with(|| a.config_key.cmp(&b.config_key))
}

/// Sort-and-sweep extraction: ascending cost with accuracy descending as the
/// tie key, keeping each point whose accuracy beats every cheaper point.
pub fn pareto_frontier<S: Scalar>(points: &[CostPoint<S>]) -> Result<Frontier<S>, FrontierError> {
    let first = points.first().ok_or(FrontierError::Empty)?;
    let unit = first.unit;
    for p in points {
        if p.unit != unit {
            return Err(FrontierError::UnitMismatch(unit, p.unit));
        }
        p.validate()?;
    }
    let mut sorted: Vec<&CostPoint<S>> = points.iter().collect();
    sorted.sort_by(|a, b| sweep_order(a, b));

    let mut members: Vec<FrontierPoint<S>> = Vec::new();
    for p in sorted {
        match members.last_mut() {
            Some(last) if last.point.same_position(p) => {
                last.co_optimal = true;
                members.push(FrontierPoint {
                    point: p.clone(),
                    co_optimal: true,
                });
            }
            Some(last) if p.accuracy <= last.point.accuracy => {}
            _ => members.push(FrontierPoint {
                point: p.clone(),
                co_optimal: false,
            }),
        }
    }
    Ok(Frontier { unit, members })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::memory::KvCacheStrategy;

    fn key(i: u64) -> ConfigKey {
        ConfigKey {
            model: "m".into(),
            precision_bits: 8,
            kv: KvCacheStrategy::Full,
            token_budget: i,
            group_size: 1,
        }
    }

    fn pt(cost: f64, acc: f64, i: u64) -> CostPoint<f64> {
        CostPoint::new(cost, CostUnit::Bytes, acc, key(i)).unwrap()
    }

    #[test]
    fn dominance_examples() {
        assert!(!dominates(&pt(5.0, 0.6, 0), &pt(5.0, 0.6, 1)).unwrap());
        assert!(dominates(&pt(4.0, 0.6, 0), &pt(5.0, 0.6, 1)).unwrap());
        assert!(!dominates(&pt(4.0, 0.5, 0), &pt(5.0, 0.6, 1)).unwrap());
        let secs = CostPoint::new(4.0, CostUnit::Seconds, 0.6, key(2)).unwrap();
        assert!(matches!(
            dominates(&secs, &pt(5.0, 0.6, 1)),
            Err(FrontierError::UnitMismatch(..))
        ));
    }

    #[test]
    fn frontier_basics() {
        let single = pareto_frontier(&[pt(1.0, 0.5, 0)]).unwrap();
        assert_eq!(single.len(), 1);
        let two = pareto_frontier(&[pt(1.0, 0.5, 0), pt(2.0, 0.4, 1)]).unwrap();
        assert_eq!(two.keys().cloned().collect::<Vec<_>>(), vec![key(0)]);
        assert!(matches!(pareto_frontier::<f64>(&[]), Err(FrontierError::Empty)));
    }

    #[test]
    fn duplicates_are_co_optimal() {
        let f = pareto_frontier(&[pt(2.0, 0.7, 1), pt(1.0, 0.5, 0), pt(2.0, 0.7, 2), pt(2.0, 0.6, 3)])
            .unwrap();
        let flags: Vec<_> = f.members().iter().map(|m| (m.point.config_key.token_budget, m.co_optimal)).collect();
        assert_eq!(flags, vec![(0, false), (1, true), (2, true)]);
    }

    #[test]
    fn rejects_invalid_points() {
        assert!(CostPoint::new(f64::NAN, CostUnit::Bytes, 0.5, key(0)).is_err());
        assert!(CostPoint::new(1.0, CostUnit::Bytes, 1.5, key(0)).is_err());
        assert!(CostPoint::new(-1.0, CostUnit::Bytes, 0.5, key(0)).is_err());
    }

    #[test]
    fn neighborhood_and_budget_lookup() {
        let f = pareto_frontier(&[pt(1.0, 0.1, 0), pt(2.0, 0.2, 1), pt(3.0, 0.3, 2), pt(4.0, 0.4, 3)])
            .unwrap();
        assert_eq!(f.neighborhood(0, 1).len(), 2);
        assert_eq!(f.neighborhood(2, 1).len(), 3);
        assert_eq!(f.best_within(3.5).unwrap().point.config_key, key(2));
        assert!(f.best_within(0.5).is_none());
    }
}
