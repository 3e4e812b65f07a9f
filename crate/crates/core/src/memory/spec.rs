//! Model architecture, weight quantization and KV-cache strategy descriptions.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::MemoryError;

/// Architecture and parameter counts of one model.
///
/// Construct through [`ModelSpec::new`] or deserialization; both validate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawModelSpec")]
pub struct ModelSpec {
    pub name: String,
    pub n_layers: u32,
    pub n_kv_heads: u32,
    pub d_head: u32,
    /// Parameters that weight quantization applies to (large linear layers).
    pub n_params_quantizable: u64,
    /// Parameters kept at native precision (embeddings, norms, LM head).
    pub n_params_unquantizable: u64,
    pub native_precision_bits: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModelSpec {
    name: String,
    n_layers: u32,
    n_kv_heads: u32,
    d_head: u32,
    n_params_quantizable: u64,
    n_params_unquantizable: u64,
    #[serde(default = "default_native_bits")]
    native_precision_bits: u32,
    #[serde(default)]
    provenance: Option<String>,
}

fn default_native_bits() -> u32 {
    16
}

impl TryFrom<RawModelSpec> for ModelSpec {
    type Error = MemoryError;

    fn try_from(raw: RawModelSpec) -> Result<Self, Self::Error> {
        let mut spec = ModelSpec::new(
            raw.name,
            raw.n_layers,
            raw.n_kv_heads,
            raw.d_head,
            raw.n_params_quantizable,
            raw.n_params_unquantizable,
        )?
        .with_native_precision_bits(raw.native_precision_bits)?;
        spec.provenance = raw.provenance;
        Ok(spec)
    }
}

impl ModelSpec {
    /// Builds a spec at the default 16-bit native precision.
    pub fn new(
        name: impl Into<String>,
        n_layers: u32,
        n_kv_heads: u32,
        d_head: u32,
        n_params_quantizable: u64,
        n_params_unquantizable: u64,
    ) -> Result<Self, MemoryError> {
        let spec = ModelSpec {
            name: name.into(),
            n_layers,
            n_kv_heads,
            d_head,
            n_params_quantizable,
            n_params_unquantizable,
            native_precision_bits: 16,
            provenance: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_native_precision_bits(mut self, bits: u32) -> Result<Self, MemoryError> {
        self.native_precision_bits = bits;
        self.validate()?;
        Ok(self)
    }

    pub fn with_provenance(mut self, note: impl Into<String>) -> Self {
        self.provenance = Some(note.into());
        self
    }

    /// Key and value elements cached per token across all layers.
    pub fn kv_elements_per_token(&self) -> u128 {
        u128::from(self.n_layers) * u128::from(self.n_kv_heads) * u128::from(self.d_head) * 2
    }

    pub fn total_params(&self) -> u64 {
        self.n_params_quantizable
            .saturating_add(self.n_params_unquantizable)
    }

    fn validate(&self) -> Result<(), MemoryError> {
        let invalid = |field: &'static str, reason: &str| MemoryError::InvalidSpec {
            model: self.name.clone(),
            field,
            reason: reason.to_string(),
        };
        if self.name.trim().is_empty() {
            return Err(invalid("name", "must be non-empty"));
        }
        if self.n_layers == 0 {
            return Err(invalid("n_layers", "must be positive"));
        }
        if self.n_kv_heads == 0 {
            return Err(invalid("n_kv_heads", "must be positive"));
        }
        if self.d_head == 0 {
            return Err(invalid("d_head", "must be positive"));
        }
        if self.n_params_quantizable == 0 && self.n_params_unquantizable == 0 {
            return Err(invalid(
                "n_params_quantizable",
                "parameter counts must not both be zero",
            ));
        }
        if self.native_precision_bits == 0 || self.native_precision_bits > 64 {
            return Err(invalid("native_precision_bits", "must be in 1..=64"));
        }
        let per_token_bits = self.kv_elements_per_token() * u128::from(self.native_precision_bits);
        if per_token_bits % 8 != 0 {
            return Err(invalid(
                "native_precision_bits",
                "per-token KV size must be a whole number of bytes",
            ));
        }
        if per_token_bits / 8 > u128::from(u64::MAX) {
            return Err(invalid("d_head", "per-token KV size exceeds the byte-count range"));
        }
        Ok(())
    }
}

/// Weight precision and the per-group metadata that comes with it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawWeightQuant")]
pub struct WeightQuantSpec {
    pub precision_bits: u32,
    pub group_size: u32,
    pub scale_bits: u32,
    pub zero_point_bits: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeightQuant {
    precision_bits: u32,
    #[serde(default = "default_weight_group")]
    group_size: u32,
    #[serde(default = "default_scale_bits")]
    scale_bits: u32,
    #[serde(default)]
    zero_point_bits: u32,
}

fn default_weight_group() -> u32 {
    WeightQuantSpec::DEFAULT_GROUP_SIZE
}

fn default_scale_bits() -> u32 {
    16
}

impl TryFrom<RawWeightQuant> for WeightQuantSpec {
    type Error = MemoryError;

    fn try_from(raw: RawWeightQuant) -> Result<Self, Self::Error> {
        WeightQuantSpec::new(
            raw.precision_bits,
            raw.group_size,
            raw.scale_bits,
            raw.zero_point_bits,
        )
    }
}

impl WeightQuantSpec {
    pub const DEFAULT_GROUP_SIZE: u32 = 128;
    pub const SUPPORTED_BITS: [u32; 3] = [4, 8, 16];

    pub fn new(
        precision_bits: u32,
        group_size: u32,
        scale_bits: u32,
        zero_point_bits: u32,
    ) -> Result<Self, MemoryError> {
        if !Self::SUPPORTED_BITS.contains(&precision_bits) {
            return Err(MemoryError::InvalidQuant {
                field: "precision_bits",
                reason: format!("{precision_bits} not in {{4, 8, 16}}"),
            });
        }
        if group_size == 0 {
            return Err(MemoryError::InvalidQuant {
                field: "group_size",
                reason: "must be positive".into(),
            });
        }
        Ok(WeightQuantSpec {
            precision_bits,
            group_size,
            scale_bits,
            zero_point_bits,
        })
    }

    /// Symmetric group-wise quantization with FP16 scales, group size 128.
    pub fn symmetric(precision_bits: u32) -> Result<Self, MemoryError> {
        Self::new(precision_bits, Self::DEFAULT_GROUP_SIZE, 16, 0)
    }

    pub fn is_native(&self) -> bool {
        self.precision_bits == 16
    }
}

/// Quantized KV-cache parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KvQuantSpec {
    pub precision_bits: u32,
    #[serde(default = "default_kv_group")]
    pub group_size: u32,
    #[serde(default = "default_scale_bits")]
    pub scale_bits: u32,
    #[serde(default)]
    pub zero_point_bits: u32,
    /// Most recent tokens kept at native precision.
    #[serde(default = "default_residual")]
    pub residual_tokens: u64,
}

fn default_kv_group() -> u32 {
    KvQuantSpec::DEFAULT_GROUP_SIZE
}

fn default_residual() -> u64 {
    KvQuantSpec::DEFAULT_RESIDUAL_TOKENS
}

impl KvQuantSpec {
    pub const DEFAULT_GROUP_SIZE: u32 = 64;
    pub const DEFAULT_RESIDUAL_TOKENS: u64 = 128;
    pub const SUPPORTED_BITS: [u32; 3] = [2, 4, 8];

    /// Symmetric quantization with group size 64, FP16 scales and a
    /// 128-token native residual buffer.
    pub fn symmetric(precision_bits: u32) -> Self {
        KvQuantSpec {
            precision_bits,
            group_size: Self::DEFAULT_GROUP_SIZE,
            scale_bits: 16,
            zero_point_bits: 0,
            residual_tokens: Self::DEFAULT_RESIDUAL_TOKENS,
        }
    }
}

/// How the KV cache is stored during decoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "lowercase")]
pub enum KvCacheStrategy {
    Full,
    Evict { retain_tokens: u64 },
    Quant(KvQuantSpec),
}

impl KvCacheStrategy {
    pub fn evict(retain_tokens: u64) -> Self {
        KvCacheStrategy::Evict { retain_tokens }
    }

    pub fn quant(precision_bits: u32) -> Self {
        KvCacheStrategy::Quant(KvQuantSpec::symmetric(precision_bits))
    }

    pub fn validate(&self) -> Result<(), MemoryError> {
        match *self {
            KvCacheStrategy::Full => Ok(()),
            KvCacheStrategy::Evict { retain_tokens } if retain_tokens == 0 => {
                Err(MemoryError::InvalidKvStrategy(
                    "retain_tokens must be positive".into(),
                ))
            }
            KvCacheStrategy::Evict { .. } => Ok(()),
            KvCacheStrategy::Quant(q) => {
                if !KvQuantSpec::SUPPORTED_BITS.contains(&q.precision_bits) {
                    return Err(MemoryError::InvalidKvStrategy(format!(
                        "precision_bits {} not in {{2, 4, 8}}",
                        q.precision_bits
                    )));
                }
                if q.group_size == 0 {
                    return Err(MemoryError::InvalidKvStrategy(
                        "group_size must be positive".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    pub fn is_compressed(&self) -> bool {
        !matches!(self, KvCacheStrategy::Full)
    }
}

impl fmt::Display for KvCacheStrategy {
    /// Compact descriptor: `full`, `evict:4096`, `quant:4` (defaults elided)
    /// or `quant:4/g64/s16/z0/r128`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KvCacheStrategy::Full => f.write_str("full"),
            KvCacheStrategy::Evict { retain_tokens } => write!(f, "evict:{retain_tokens}"),
            KvCacheStrategy::Quant(q) if *q == KvQuantSpec::symmetric(q.precision_bits) => {
                write!(f, "quant:{}", q.precision_bits)
            }
            KvCacheStrategy::Quant(q) => write!(
                f,
                "quant:{}/g{}/s{}/z{}/r{}",
                q.precision_bits, q.group_size, q.scale_bits, q.zero_point_bits, q.residual_tokens
            ),
        }
    }
}

impl std::str::FromStr for KvCacheStrategy {
    type Err = MemoryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || MemoryError::InvalidKvStrategy(format!("cannot parse descriptor {s:?}"));
        let s = s.trim();
        let strategy = if s.eq_ignore_ascii_case("full") {
            KvCacheStrategy::Full
        } else if let Some(rest) = s.strip_prefix("evict:") {
            KvCacheStrategy::Evict {
                retain_tokens: rest.parse().map_err(|_| bad())?,
            }
        } else if let Some(rest) = s.strip_prefix("quant:") {
            let mut parts = rest.split('/');
            let bits = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let mut q = KvQuantSpec::symmetric(bits);
            for part in parts {
                let (tag, value) = part.split_at(1.min(part.len()));
                let value: u64 = value.parse().map_err(|_| bad())?;
                let narrow = |v: u64| u32::try_from(v).map_err(|_| bad());
                match tag {
                    "g" => q.group_size = narrow(value)?,
                    "s" => q.scale_bits = narrow(value)?,
                    "z" => q.zero_point_bits = narrow(value)?,
                    "r" => q.residual_tokens = value,
                    _ => return Err(bad()),
                }
            }
            KvCacheStrategy::Quant(q)
        } else {
            return Err(bad());
        };
        strategy.validate()?;
        Ok(strategy)
    }
}
