//! The measurement format can express every configuration axis of the
//! reference grid, and records survive a write/read cycle unchanged.

use std::io::Cursor;

use memplan_core::measurements::{load_measurements, MeasurementRecord};
use memplan_core::{enumerate_configs, Dataset, KvCacheStrategy, KvQuantSpec, ModelCatalog, SearchSpace};
use serde::Deserialize;

#[derive(Deserialize)]
struct Manifest {
    expected_configs: usize,
    space: SearchSpace,
}

fn manifest() -> Manifest {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/reference_grid.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn manifest_matches_builtin_grid() {
    let m = manifest();
    assert_eq!(m.space, SearchSpace::reference_grid());
    assert_eq!(enumerate_configs(&m.space).unwrap().len(), m.expected_configs);
    assert_eq!(m.expected_configs, 6 * 3 * 7 * 8 * 7);
}

#[test]
fn every_grid_config_round_trips() {
    let configs = enumerate_configs(&manifest().space).unwrap();
    let records: Vec<_> = configs
        .iter()
        .enumerate()
        .map(|(i, c)| MeasurementRecord::new(c.key(), (i % 1000) as f64 / 1000.0))
        .collect();
    let ds = Dataset::from_records(records).unwrap();
    let text = ds.to_jsonl();
    let back = load_measurements(Cursor::new(text.as_bytes())).unwrap();
    assert_eq!(back.len(), configs.len());
    assert_eq!(back.to_jsonl(), text);
    let catalog = ModelCatalog::builtin();
    for (c, r) in configs.iter().zip(back.iter()) {
        assert_eq!(r.config().unwrap(), *c);
        catalog.total_memory_bytes(c).unwrap();
    }
}

#[test]
fn non_default_kv_parameters_round_trip() {
    let kv = KvCacheStrategy::Quant(KvQuantSpec {
        precision_bits: 2,
        group_size: 32,
        scale_bits: 16,
        zero_point_bits: 2,
        residual_tokens: 0,
    });
    let mut key = enumerate_configs(&SearchSpace::reference_grid()).unwrap()[0].key();
    key.kv = kv;
    let line = MeasurementRecord::new(key.clone(), 0.5).to_json_line();
    let ds = load_measurements(Cursor::new(line.as_bytes())).unwrap();
    assert_eq!(ds.records()[0].key(), key);
}
