use std::collections::BTreeSet;

use memplan_core::frontier::{dominates, pareto_frontier, CostPoint, CostUnit};
use memplan_core::{ConfigKey, KvCacheStrategy};
use proptest::prelude::*;

fn key(i: usize) -> ConfigKey {
    ConfigKey {
        model: format!("m{i:04}"),
        precision_bits: 8,
        kv: KvCacheStrategy::Full,
        token_budget: i as u64,
        group_size: 1,
    }
}

fn points(raw: &[(u32, u32)]) -> Vec<CostPoint<f64>> {
    // Coarse grid so exact ties in one or both axes actually occur.
    raw.iter()
        .enumerate()
        .map(|(i, &(c, a))| CostPoint::new(c as f64, CostUnit::Bytes, a as f64 / 50.0, key(i)).unwrap())
        .collect()
}

fn oracle(pts: &[CostPoint<f64>]) -> BTreeSet<ConfigKey> {
    pts.iter()
        .filter(|p| !pts.iter().any(|q| dominates(q, p).unwrap()))
        .map(|p| p.config_key.clone())
        .collect()
}

fn keys(pts: &[CostPoint<f64>]) -> BTreeSet<ConfigKey> {
    pareto_frontier(pts).unwrap().keys().cloned().collect()
}

fn raw_points(max: usize) -> impl Strategy<Value = Vec<(u32, u32)>> {
    prop::collection::vec((0u32..100, 0u32..=50), 1..max)
}

proptest! {
    #[test]
    fn matches_pairwise_oracle(raw in raw_points(300)) {
        let pts = points(&raw);
        prop_assert_eq!(keys(&pts), oracle(&pts));
    }

    #[test]
    fn idempotent(raw in raw_points(200)) {
        let pts = points(&raw);
        let once: Vec<_> = pareto_frontier(&pts).unwrap().points().cloned().collect();
        let twice: Vec<_> = pareto_frontier(&once).unwrap().points().cloned().collect();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn dominated_point_changes_nothing(raw in raw_points(200), dc in 0u32..50, da in 1u32..50) {
        let mut pts = points(&raw);
        let before = keys(&pts);
        // Strictly worse than some frontier member in accuracy, no cheaper.
        let anchor = pareto_frontier(&pts).unwrap().points().next().unwrap().clone();
        let acc = (anchor.accuracy - da as f64 / 50.0).max(0.0);
        prop_assume!(acc < anchor.accuracy);
        pts.push(CostPoint::new(anchor.cost + dc as f64, CostUnit::Bytes, acc, key(9_999)).unwrap());
        prop_assert_eq!(keys(&pts), before);
    }

    #[test]
    fn scale_invariant_membership(raw in raw_points(200), k in 0.001f64..1000.0) {
        let pts = points(&raw);
        let scaled: Vec<_> = pts
            .iter()
            .map(|p| CostPoint::new(p.cost * k, p.unit, p.accuracy, p.config_key.clone()).unwrap())
            .collect();
        prop_assert_eq!(keys(&pts), keys(&scaled));
    }

    #[test]
    fn frontier_is_monotone(raw in raw_points(300)) {
        let f = pareto_frontier(&points(&raw)).unwrap();
        let pts: Vec<_> = f.points().collect();
        for w in pts.windows(2) {
            prop_assert!(w[0].cost <= w[1].cost);
            prop_assert!(w[0].accuracy <= w[1].accuracy);
        }
    }
}

#[test]
fn mixed_units_rejected() {
    let a = CostPoint::new(1.0, CostUnit::Bytes, 0.5, key(0)).unwrap();
    let b = CostPoint::new(1.0, CostUnit::Seconds, 0.5, key(1)).unwrap();
    assert!(dominates(&a, &b).is_err());
    assert!(pareto_frontier(&[a, b]).is_err());
}
