use std::collections::HashMap;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use super::MeasurementError;

pub const POOL_SCHEMA_VERSION: u32 = 1;

/// Answer key for generations whose final answer could not be extracted.
/// Never correct, and never casts a vote.
pub const INVALID_ANSWER: &str = "INVALID";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    pub answer_key: String,
    pub correct: bool,
}

impl Sample {
    pub fn new(answer_key: impl Into<String>, correct: bool) -> Self {
        Sample {
            answer_key: answer_key.into(),
            correct,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.answer_key != INVALID_ANSWER
    }
}

/// Independent generations for one benchmark instance, in sampling order.
///
/// Pool file line:
///
/// ```json
/// {"schema_version":1,"instance_id":"aime25-07","samples":[
///   {"answer_key":"204","correct":true},{"answer_key":"96","correct":false}]}
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplePool {
    pub instance_id: String,
    pub samples: Vec<Sample>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PoolLine {
    schema_version: u32,
    instance_id: String,
    #[serde(default)]
    pool_size: Option<usize>,
    samples: Vec<Sample>,
}

impl SamplePool {
    pub fn new(instance_id: impl Into<String>, samples: Vec<Sample>) -> Result<Self, String> {
        let pool = SamplePool {
            instance_id: instance_id.into(),
            samples,
        };
        pool.validate()?;
        Ok(pool)
    }

    /// Pool from `(answer, correct)` pairs.
    pub fn from_pairs<'a>(
        instance_id: impl Into<String>,
        pairs: impl IntoIterator<Item = (&'a str, bool)>,
    ) -> Result<Self, String> {
        Self::new(
            instance_id,
            pairs.into_iter().map(|(a, c)| Sample::new(a, c)).collect(),
        )
    }

    /// Pool size `S`.
    pub fn size(&self) -> usize {
        self.samples.len()
    }

    pub fn correct_count(&self) -> usize {
        self.samples.iter().filter(|s| s.correct).count()
    }

    /// At most one answer key is correct, a key's correctness is consistent
    /// across samples, and `INVALID` is never correct.
    pub fn validate(&self) -> Result<(), String> {
        let mut verdict: HashMap<&str, bool> = HashMap::new();
        for s in &self.samples {
            if !s.is_valid() && s.correct {
                return Err(format!(
                    "instance {:?}: {INVALID_ANSWER} sample marked correct",
                    self.instance_id
                ));
            }
            if let Some(prev) = verdict.insert(&s.answer_key, s.correct) {
                if prev != s.correct {
                    return Err(format!(
                        "instance {:?}: answer {:?} marked both correct and incorrect",
                        self.instance_id, s.answer_key
                    ));
                }
            }
        }
        if verdict.values().filter(|&&c| c).count() > 1 {
            return Err(format!(
                "instance {:?}: more than one distinct correct answer",
                self.instance_id
            ));
        }
        Ok(())
    }

    pub fn to_json_line(&self) -> String {
        #[derive(Serialize)]
        struct Out<'a> {
            schema_version: u32,
            instance_id: &'a str,
            samples: &'a [Sample],
        }
        serde_json::to_string(&Out {
            schema_version: POOL_SCHEMA_VERSION,
            instance_id: &self.instance_id,
            samples: &self.samples,
        })
        .expect("pools serialize")
    }
}

/// Reads a sample-pool file, one instance per line.
pub fn load_pools(source: impl BufRead) -> Result<Vec<SamplePool>, MeasurementError> {
    let mut pools = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| MeasurementError::Io(format!("line {line_no}: {e}")))?;
        if line.trim().is_empty() {
            continue;
        }
        let err = |field: &str, reason: String| MeasurementError::Parse {
            line: line_no,
            field: field.to_string(),
            reason,
        };
        let raw: PoolLine = serde_json::from_str(&line).map_err(|e| err("<pool>", e.to_string()))?;
        if raw.schema_version != POOL_SCHEMA_VERSION {
            return Err(err(
                "schema_version",
                format!("unsupported version {}", raw.schema_version),
            ));
        }
        if let Some(n) = raw.pool_size {
            if n != raw.samples.len() {
                return Err(err(
                    "pool_size",
                    format!("{n} does not match {} samples", raw.samples.len()),
                ));
            }
        }
        let pool = SamplePool::new(raw.instance_id, raw.samples).map_err(|e| err("samples", e))?;
        pools.push(pool);
    }
    Ok(pools)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants() {
        assert!(SamplePool::from_pairs("a", [("A", true), ("B", true)]).is_err());
        assert!(SamplePool::from_pairs("a", [("A", true), ("A", false)]).is_err());
        assert!(SamplePool::from_pairs("a", [(INVALID_ANSWER, true)]).is_err());
        let p = SamplePool::from_pairs("a", [("A", true), ("A", true), ("B", false)]).unwrap();
        assert_eq!((p.size(), p.correct_count()), (3, 2));
    }

    #[test]
    fn file_round_trip() {
        let p = SamplePool::from_pairs("x", [("1", false), ("2", true)]).unwrap();
        let line = p.to_json_line();
        let back = load_pools(line.as_bytes()).unwrap();
        assert_eq!(back, vec![p]);
    }

    #[test]
    fn pool_size_must_match() {
        let line = r#"{"schema_version":1,"instance_id":"q","pool_size":3,"samples":[{"answer_key":"A","correct":true}]}"#;
        let err = load_pools(line.as_bytes()).unwrap_err();
        assert!(matches!(err, MeasurementError::Parse { ref field, .. } if field == "pool_size"));
    }
}
