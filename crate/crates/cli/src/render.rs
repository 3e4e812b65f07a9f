//! Human-readable text output.

use std::fmt::Write;

use memplan_api::docs::{EstimateReport, MemoryReport};
use memplan_core::memory::units::human;
use memplan_core::{CostUnit, Recommendation64};

pub fn memory(r: &MemoryReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} {}-bit kv={} T={} G={} B={}",
        r.model, r.precision_bits, r.kv, r.token_budget, r.group_size, r.amortization_batch
    );
    for (label, display, bytes) in [
        ("weights", &r.weights_display, r.weights_bytes),
        ("kv", &r.kv_display, r.kv_bytes),
        ("total", &r.total_display, r.total_bytes),
        ("amortized", &r.amortized_display, r.amortized_bytes),
    ] {
        let _ = writeln!(s, "{label:<10}{display:>12}  ({bytes} bytes)");
    }
    s
}

fn cost(v: f64, unit: CostUnit) -> String {
    match unit {
        CostUnit::Bytes => human(v.round() as u64),
        CostUnit::Seconds => format!("{v:.3} s"),
        CostUnit::InverseRps => format!("{v:.4} s/request"),
    }
}

pub fn recommendation(r: &Recommendation64) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "chosen    {}", r.config_key);
    let _ = writeln!(
        s,
        "accuracy  {:.4}{}",
        r.achieved_accuracy,
        if r.interpolated { " (interpolated)" } else { "" }
    );
    let _ = writeln!(s, "cost      {}", cost(r.cost, r.unit));
    let _ = writeln!(s, "memory    {} ({} bytes)", human(r.memory_bytes), r.memory_bytes);
    let _ = writeln!(s, "neighborhood:");
    for m in r.frontier_neighborhood.members() {
        let p = &m.point;
        let mark = if p.config_key == r.config_key { "*" } else { " " };
        let _ = writeln!(s, "  {mark} {:>12}  {:.4}  {}", cost(p.cost, p.unit), p.accuracy, p.config_key);
    }
    if !r.annotations.is_empty() {
        let _ = writeln!(s, "rules:");
        for a in &r.annotations {
            let flag = if a.triggered { "!" } else { " " };
            let _ = writeln!(s, "  {flag} {}: {}", a.rule_id, a.explanation);
        }
    }
    s
}

pub fn estimate(r: &EstimateReport) -> String {
    let mut s = String::new();
    for i in &r.instances {
        let _ = writeln!(s, "{}\tS={}\t{:.6}", i.instance_id, i.pool_size, i.estimate);
    }
    let _ = writeln!(s, "mean maj@{} = {:.6} over {} instances", r.group_size, r.mean, r.instances.len());
    s
}
