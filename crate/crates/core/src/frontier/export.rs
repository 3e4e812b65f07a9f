use std::io::Write;

use super::composition::CompositionRow;
use super::FrontierError;
use crate::scalar::Scalar;

/// Column order of the frontier table. Frozen; append-only.
pub const FRONTIER_COLUMNS: [&str; 10] = [
    "cost",
    "unit",
    "accuracy",
    "model",
    "precision_bits",
    "kv_strategy",
    "token_budget",
    "group_size",
    "effective_size_bytes",
    "co_optimal",
];

/// Writes composition rows as CSV with a header line.
pub fn write_frontier_table<S: Scalar, W: Write>(
    rows: &[CompositionRow<S>],
    out: W,
) -> Result<(), FrontierError> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| FrontierError::Export(e.to_string());
    w.write_record(FRONTIER_COLUMNS).map_err(io)?;
    for r in rows {
        w.write_record([
            r.cost.to_string(),
            r.unit.as_str().to_string(),
            r.accuracy.to_string(),
            r.config_key.model.clone(),
            r.config_key.precision_bits.to_string(),
            r.config_key.kv.to_string(),
            r.token_budget.to_string(),
            r.group_size.to_string(),
            r.effective_size_bytes.to_string(),
            r.co_optimal.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| FrontierError::Export(e.to_string()))
}
