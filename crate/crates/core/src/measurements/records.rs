use std::collections::HashMap;
use std::io::BufRead;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::pools::SamplePool;
use super::MeasurementError;
use crate::config::{ConfigKey, InferenceConfig};
use crate::memory::{KvCacheStrategy, MemoryError, WeightQuantSpec};

pub const MEASUREMENT_SCHEMA_VERSION: u32 = 1;

/// Accuracy (and optionally speed) measured for one configuration.
///
/// One JSON object per line:
///
/// ```json
/// {"schema_version":1,"model":"Qwen3-4B","precision_bits":8,
///  "kv":{"strategy":"evict","retain_tokens":4096},"token_budget":18000,
///  "group_size":1,"accuracy":0.41,"latency_seconds":212.5}
/// ```
///
/// Fields not listed here are kept in `extra` and written back on export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub schema_version: u32,
    pub model: String,
    pub precision_bits: u32,
    pub kv: KvCacheStrategy,
    pub token_budget: u64,
    pub group_size: u32,
    pub accuracy: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub latency_seconds: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub throughput_rps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pools: Option<Vec<SamplePool>>,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

const KNOWN_FIELDS: [&str; 10] = [
    "schema_version",
    "model",
    "precision_bits",
    "kv",
    "token_budget",
    "group_size",
    "accuracy",
    "latency_seconds",
    "throughput_rps",
    "pools",
];

impl MeasurementRecord {
    pub fn new(key: ConfigKey, accuracy: f64) -> Self {
        MeasurementRecord {
            schema_version: MEASUREMENT_SCHEMA_VERSION,
            model: key.model,
            precision_bits: key.precision_bits,
            kv: key.kv,
            token_budget: key.token_budget,
            group_size: key.group_size,
            accuracy,
            latency_seconds: None,
            throughput_rps: None,
            pools: None,
            extra: Map::new(),
        }
    }

    pub fn with_latency(mut self, seconds: f64) -> Self {
        self.latency_seconds = Some(seconds);
        self
    }

    pub fn with_throughput(mut self, rps: f64) -> Self {
        self.throughput_rps = Some(rps);
        self
    }

    pub fn key(&self) -> ConfigKey {
        ConfigKey {
            model: self.model.clone(),
            precision_bits: self.precision_bits,
            kv: self.kv,
            token_budget: self.token_budget,
            group_size: self.group_size,
        }
    }

    /// The configuration this record measured, at batch 1 and default weight
    /// quantization parameters.
    pub fn config(&self) -> Result<InferenceConfig, MemoryError> {
        Ok(InferenceConfig {
            model: self.model.clone(),
            weight_quant: WeightQuantSpec::symmetric(self.precision_bits)?,
            kv_strategy: self.kv,
            token_budget: self.token_budget,
            group_size: self.group_size,
            amortization_batch: 1,
        })
    }

    /// Checks every invariant, reporting the first offending field.
    pub fn validate(&self) -> Result<(), (&'static str, String)> {
        if self.schema_version != MEASUREMENT_SCHEMA_VERSION {
            return Err(("schema_version", format!("unsupported version {}", self.schema_version)));
        }
        if self.model.trim().is_empty() {
            return Err(("model", "must be non-empty".into()));
        }
        if !WeightQuantSpec::SUPPORTED_BITS.contains(&self.precision_bits) {
            return Err(("precision_bits", format!("{} not in {{4, 8, 16}}", self.precision_bits)));
        }
        self.kv.validate().map_err(|e| ("kv", e.to_string()))?;
        if self.group_size == 0 {
            return Err(("group_size", "must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.accuracy) {
            return Err(("accuracy", format!("{} outside [0, 1]", self.accuracy)));
        }
        if let Some(l) = self.latency_seconds {
            if !(l > 0.0 && l.is_finite()) {
                return Err(("latency_seconds", format!("{l} is not a positive real")));
            }
        }
        if let Some(t) = self.throughput_rps {
            if !(t > 0.0 && t.is_finite()) {
                return Err(("throughput_rps", format!("{t} is not a positive real")));
            }
        }
        if let Some(pools) = &self.pools {
            for p in pools {
                p.validate().map_err(|e| ("pools", e))?;
            }
        }
        Ok(())
    }

    fn parse_line(line_no: usize, text: &str) -> Result<Self, MeasurementError> {
        let err = |field: &str, reason: String| MeasurementError::Parse {
            line: line_no,
            field: field.to_string(),
            reason,
        };
        let value: Value = serde_json::from_str(text).map_err(|e| err("<record>", e.to_string()))?;
        let Value::Object(map) = value else {
            return Err(err("<record>", "expected a JSON object".into()));
        };
        // Type-check each known field individually so the error names it.
        for field in &KNOWN_FIELDS {
            let v = map.get(*field);
            let check = match (*field, v) {
                ("latency_seconds" | "throughput_rps" | "pools", None) => Ok(()),
                (_, None) => Err(format!("missing field {field:?}")),
                ("schema_version" | "precision_bits" | "group_size", Some(v)) => {
                    serde_json::from_value::<u32>(v.clone()).map(drop).map_err(|e| e.to_string())
                }
                ("token_budget", Some(v)) => {
                    serde_json::from_value::<u64>(v.clone()).map(drop).map_err(|e| e.to_string())
                }
                ("model", Some(v)) => {
                    serde_json::from_value::<String>(v.clone()).map(drop).map_err(|e| e.to_string())
                }
                ("kv", Some(v)) => serde_json::from_value::<KvCacheStrategy>(v.clone())
                    .map(drop)
                    .map_err(|e| e.to_string()),
                ("accuracy" | "latency_seconds" | "throughput_rps", Some(v)) => {
                    serde_json::from_value::<f64>(v.clone()).map(drop).map_err(|e| e.to_string())
                }
                ("pools", Some(v)) => serde_json::from_value::<Vec<SamplePool>>(v.clone())
                    .map(drop)
                    .map_err(|e| e.to_string()),
                _ => Ok(()),
            };
            check.map_err(|reason| err(field, reason))?;
        }
        let record: MeasurementRecord =
            serde_json::from_value(Value::Object(map)).map_err(|e| err("<record>", e.to_string()))?;
        record.validate().map_err(|(field, reason)| err(field, reason))?;
        Ok(record)
    }

    /// Compact single-line JSON, field order as documented.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}

/// Validated measurement records with unique configuration keys.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Dataset {
    records: Vec<MeasurementRecord>,
    index: HashMap<ConfigKey, usize>,
}

impl Dataset {
    pub fn from_records(records: Vec<MeasurementRecord>) -> Result<Self, MeasurementError> {
        let mut ds = Dataset::default();
        for (i, record) in records.into_iter().enumerate() {
            record
                .validate()
                .map_err(|(field, reason)| MeasurementError::Parse {
                    line: i + 1,
                    field: field.to_string(),
                    reason,
                })?;
            ds.push(i + 1, record)?;
        }
        Ok(ds)
    }

    fn push(&mut self, line: usize, record: MeasurementRecord) -> Result<(), MeasurementError> {
        let key = record.key();
        if let Some(&first) = self.index.get(&key) {
            return Err(MeasurementError::DuplicateKey {
                line,
                first_line: first + 1,
                key,
            });
        }
        self.index.insert(key, self.records.len());
        self.records.push(record);
        Ok(())
    }

    pub fn records(&self) -> &[MeasurementRecord] {
        &self.records
    }

    pub fn iter(&self) -> impl Iterator<Item = &MeasurementRecord> {
        self.records.iter()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, key: &ConfigKey) -> Option<&MeasurementRecord> {
        self.index.get(key).map(|&i| &self.records[i])
    }

    /// A new dataset holding the records that satisfy `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&MeasurementRecord) -> bool) -> Dataset {
        let records: Vec<_> = self.records.iter().filter(|r| keep(r)).cloned().collect();
        Dataset::from_records(records).expect("subset of a valid dataset is valid")
    }

    /// Line-delimited export, one record per line, in load order.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.to_json_line());
            out.push('\n');
        }
        out
    }
}

/// Reads line-delimited measurement records. Blank lines are skipped; line
/// numbers in errors are 1-based physical lines.
pub fn load_measurements(source: impl BufRead) -> Result<Dataset, MeasurementError> {
    let mut ds = Dataset::default();
    for (i, line) in source.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| MeasurementError::Io(format!("line {line_no}: {e}")))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = MeasurementRecord::parse_line(line_no, &line)?;
        ds.push(line_no, record)?;
    }
    Ok(ds)
}
