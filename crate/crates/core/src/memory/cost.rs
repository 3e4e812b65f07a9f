//! Byte-exact memory cost of weights and KV cache.
//!
//! Every quantity is accumulated as an exact rational number of bytes
//! (bits over a common denominator) and floored to whole bytes once, at the
//! very end.

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, ToPrimitive};

use super::spec::{KvCacheStrategy, ModelSpec, WeightQuantSpec};
use super::MemoryError;

/// Exact byte count, possibly fractional before the final floor.
pub type ExactBytes = Ratio<u128>;

fn mul(a: ExactBytes, b: ExactBytes) -> Result<ExactBytes, MemoryError> {
    a.checked_mul(&b).ok_or(MemoryError::Overflow)
}

fn add(a: ExactBytes, b: ExactBytes) -> Result<ExactBytes, MemoryError> {
    a.checked_add(&b).ok_or(MemoryError::Overflow)
}

fn int(v: impl Into<u128>) -> ExactBytes {
    Ratio::from_integer(v.into())
}

/// Floors an exact byte count into the public `u64` representation.
pub fn floor_bytes(exact: ExactBytes) -> Result<u64, MemoryError> {
    exact.floor().to_integer().to_u64().ok_or(MemoryError::Overflow)
}

/// Bytes of full-precision K and V cached per token.
pub fn kv_bytes_per_token(spec: &ModelSpec) -> u64 {
    // Whole bytes and u64 range are validated at construction.
    (spec.kv_elements_per_token() * u128::from(spec.native_precision_bits) / 8) as u64
}

/// Storage cost per parameter (or element) as bits, with group metadata spread
/// over the group: `bits + (scale + zero) / group`.
fn per_element_bits(bits: u32, group: u32, scale_bits: u32, zero_bits: u32) -> ExactBytes {
    int(bits) + Ratio::new(u128::from(scale_bits) + u128::from(zero_bits), u128::from(group))
}

pub fn weight_memory_exact(
    spec: &ModelSpec,
    quant: &WeightQuantSpec,
) -> Result<ExactBytes, MemoryError> {
    let native = int(spec.native_precision_bits);
    let quantized_bits = if quant.is_native() {
        native
    } else {
        per_element_bits(
            quant.precision_bits,
            quant.group_size,
            quant.scale_bits,
            quant.zero_point_bits,
        )
    };
    let bits = add(
        mul(int(spec.n_params_quantizable), quantized_bits)?,
        mul(int(spec.n_params_unquantizable), native)?,
    )?;
    Ok(bits / 8)
}

/// Memory for the model weights, including group-quantization metadata.
pub fn weight_memory_bytes(spec: &ModelSpec, quant: &WeightQuantSpec) -> Result<u64, MemoryError> {
    floor_bytes(weight_memory_exact(spec, quant)?)
}

/// The weight footprint, under the name the planner's thresholds use.
pub fn effective_size_bytes(spec: &ModelSpec, quant: &WeightQuantSpec) -> Result<u64, MemoryError> {
    weight_memory_bytes(spec, quant)
}

pub fn kv_memory_exact(
    spec: &ModelSpec,
    strategy: &KvCacheStrategy,
    token_budget: u64,
    group_size: u32,
) -> Result<ExactBytes, MemoryError> {
    if group_size == 0 {
        return Err(MemoryError::InvalidGroupSize);
    }
    strategy.validate()?;
    let per_token = int(kv_bytes_per_token(spec));
    let per_sequence = match *strategy {
        KvCacheStrategy::Full => mul(int(token_budget), per_token)?,
        KvCacheStrategy::Evict { retain_tokens } => {
            mul(int(token_budget.min(retain_tokens)), per_token)?
        }
        KvCacheStrategy::Quant(q) => {
            let native_tokens = token_budget.min(q.residual_tokens);
            let quantized_tokens = token_budget.saturating_sub(q.residual_tokens);
            let element_bits =
                per_element_bits(q.precision_bits, q.group_size, q.scale_bits, q.zero_point_bits);
            let quantized = mul(
                mul(int(quantized_tokens), int(spec.kv_elements_per_token()))?,
                element_bits,
            )? / 8;
            add(mul(int(native_tokens), per_token)?, quantized)?
        }
    };
    mul(int(group_size), per_sequence)
}

/// KV-cache memory for `group_size` concurrent sequences of `token_budget`
/// cached tokens each.
pub fn kv_memory_bytes(
    spec: &ModelSpec,
    strategy: &KvCacheStrategy,
    token_budget: u64,
    group_size: u32,
) -> Result<u64, MemoryError> {
    floor_bytes(kv_memory_exact(spec, strategy, token_budget, group_size)?)
}

/// Weight and KV bytes of one configuration, plus the amortized figure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct MemoryBreakdown {
    pub weights: u64,
    pub kv: u64,
    pub total: u64,
    pub amortized: u64,
    pub amortization_batch: u32,
}

pub fn total_memory_exact(
    spec: &ModelSpec,
    quant: &WeightQuantSpec,
    strategy: &KvCacheStrategy,
    token_budget: u64,
    group_size: u32,
) -> Result<ExactBytes, MemoryError> {
    add(
        weight_memory_exact(spec, quant)?,
        kv_memory_exact(spec, strategy, token_budget, group_size)?,
    )
}

/// Weight memory shared by `batch` concurrent generations, plus one
/// generation's KV cache.
pub fn amortized_memory_exact(
    spec: &ModelSpec,
    quant: &WeightQuantSpec,
    strategy: &KvCacheStrategy,
    token_budget: u64,
    group_size: u32,
    batch: u32,
) -> Result<ExactBytes, MemoryError> {
    if batch == 0 {
        return Err(MemoryError::InvalidBatch);
    }
    let weights = weight_memory_exact(spec, quant)?
        .checked_div(&int(batch))
        .ok_or(MemoryError::Overflow)?;
    add(weights, kv_memory_exact(spec, strategy, token_budget, group_size)?)
}

pub fn breakdown(
    spec: &ModelSpec,
    quant: &WeightQuantSpec,
    strategy: &KvCacheStrategy,
    token_budget: u64,
    group_size: u32,
    batch: u32,
) -> Result<MemoryBreakdown, MemoryError> {
    let weights = weight_memory_exact(spec, quant)?;
    let kv = kv_memory_exact(spec, strategy, token_budget, group_size)?;
    let amortized = amortized_memory_exact(spec, quant, strategy, token_budget, group_size, batch)?;
    Ok(MemoryBreakdown {
        weights: floor_bytes(weights)?,
        kv: floor_bytes(kv)?,
        total: floor_bytes(add(weights, kv)?)?,
        amortized: floor_bytes(amortized)?,
        amortization_batch: batch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::memory::KvQuantSpec;

    fn qwen_06b() -> ModelSpec {
        ModelSpec::new("Qwen3-0.6B", 28, 8, 128, 679_612_000, 69_602_000).unwrap()
    }

    fn qwen_32b() -> ModelSpec {
        ModelSpec::new("Qwen3-32B", 64, 8, 128, 31_189_821_000, 1_651_941_000).unwrap()
    }

    #[test]
    fn per_token_bytes() {
        assert_eq!(kv_bytes_per_token(&qwen_06b()), 114_688);
        assert_eq!(kv_bytes_per_token(&qwen_32b()), 262_144);
        let tiny = ModelSpec::new("tiny", 1, 1, 1, 1, 0).unwrap();
        assert_eq!(kv_bytes_per_token(&tiny), 4);
    }

    #[test]
    fn per_parameter_cost_at_4_bit() {
        // 4 + 16/128 bits = 4.125 bits = 0.515625 bytes.
        let spec = ModelSpec::new("q", 1, 1, 1, 1_000_000, 0).unwrap();
        let q = WeightQuantSpec::symmetric(4).unwrap();
        assert_eq!(weight_memory_exact(&spec, &q).unwrap(), Ratio::new(515_625u128, 1));
        let one = ModelSpec::new("q", 1, 1, 1, 1, 0).unwrap();
        assert_eq!(weight_memory_exact(&one, &q).unwrap(), Ratio::new(33u128, 64));
    }

    #[test]
    fn unquantizable_only_is_two_bytes_per_param() {
        let spec = ModelSpec::new("emb", 1, 1, 1, 0, 12_345).unwrap();
        for bits in [4, 8, 16] {
            let q = WeightQuantSpec::symmetric(bits).unwrap();
            assert_eq!(weight_memory_bytes(&spec, &q).unwrap(), 24_690);
        }
    }

    #[test]
    fn sixteen_bit_has_no_scale_overhead() {
        let spec = qwen_06b();
        let q = WeightQuantSpec::new(16, 32, 16, 16).unwrap();
        assert_eq!(weight_memory_bytes(&spec, &q).unwrap(), spec.total_params() * 2);
    }

    #[test]
    fn kv_examples() {
        let spec = qwen_06b();
        assert_eq!(kv_memory_bytes(&spec, &KvCacheStrategy::Full, 2_000, 1).unwrap(), 229_376_000);
        assert_eq!(
            kv_memory_bytes(&spec, &KvCacheStrategy::evict(4_096), 30_000, 1).unwrap(),
            4_096 * 114_688
        );
        assert_eq!(
            kv_memory_bytes(&qwen_32b(), &KvCacheStrategy::Full, 30_000, 16).unwrap(),
            125_829_120_000
        );
        for s in [KvCacheStrategy::Full, KvCacheStrategy::evict(1), KvCacheStrategy::quant(2)] {
            assert_eq!(kv_memory_bytes(&spec, &s, 0, 7).unwrap(), 0);
        }
    }

    #[test]
    fn quant_kv_with_residual() {
        let spec = qwen_06b();
        let strategy = KvCacheStrategy::quant(4);
        // 57,344 elements/token; 4 + 16/64 = 4.25 bits each.
        let expected = 128 * 114_688 + (1_000 - 128) * 57_344 * 17 / 32;
        assert_eq!(kv_memory_bytes(&spec, &strategy, 1_000, 1).unwrap(), expected);
        // residual 0 recovers the bare formula.
        let bare = KvCacheStrategy::Quant(KvQuantSpec { residual_tokens: 0, ..KvQuantSpec::symmetric(4) });
        assert_eq!(kv_memory_bytes(&spec, &bare, 1_000, 1).unwrap(), 1_000 * 57_344 * 17 / 32);
        // Under the residual the cost is native.
        assert_eq!(
            kv_memory_bytes(&spec, &strategy, 100, 3).unwrap(),
            kv_memory_bytes(&spec, &KvCacheStrategy::Full, 100, 3).unwrap()
        );
    }

    #[test]
    fn floor_happens_once() {
        // 3 params at 4-bit with g=128: 3 * 4.125 / 8 = 1.546875 bytes -> 1.
        let spec = ModelSpec::new("odd", 1, 1, 1, 3, 0).unwrap();
        let q = WeightQuantSpec::symmetric(4).unwrap();
        assert_eq!(weight_memory_bytes(&spec, &q).unwrap(), 1);
        // Amortized across 2: 0.7734375 + 0 -> 0.
        let amort = amortized_memory_exact(&spec, &q, &KvCacheStrategy::Full, 0, 1, 2).unwrap();
        assert_eq!(floor_bytes(amort).unwrap(), 0);
    }

    #[test]
    fn amortized_identity_and_limit() {
        let spec = qwen_06b();
        let q = WeightQuantSpec::symmetric(8).unwrap();
        let s = KvCacheStrategy::Full;
        let b1 = breakdown(&spec, &q, &s, 30_000, 1, 1).unwrap();
        assert_eq!(b1.amortized, b1.total);
        let huge = breakdown(&spec, &q, &s, 30_000, 1, u32::MAX).unwrap();
        assert_eq!(huge.amortized, huge.kv);
        assert!(breakdown(&spec, &q, &s, 30_000, 1, 0).is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let spec = ModelSpec::new("big", u32::MAX, 1 << 20, 1, 1, 0).unwrap();
        let r = kv_memory_bytes(&spec, &KvCacheStrategy::Full, u64::MAX, u32::MAX);
        assert!(matches!(r, Err(MemoryError::Overflow)));
    }

    #[test]
    fn zero_group_rejected() {
        assert!(matches!(
            kv_memory_bytes(&qwen_06b(), &KvCacheStrategy::Full, 10, 0),
            Err(MemoryError::InvalidGroupSize)
        ));
    }
}
