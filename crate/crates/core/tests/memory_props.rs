use memplan_core::memory::{
    kv_bytes_per_token, kv_memory_bytes, weight_memory_bytes, KvCacheStrategy, KvQuantSpec,
    ModelCatalog, ModelSpec, WeightQuantSpec,
};
use proptest::prelude::*;

fn catalog() -> ModelCatalog {
    ModelCatalog::builtin()
}

fn model() -> impl Strategy<Value = ModelSpec> {
    let models = catalog().models;
    (0..models.len()).prop_map(move |i| models[i].clone())
}

fn strategy() -> impl Strategy<Value = KvCacheStrategy> {
    prop_oneof![
        Just(KvCacheStrategy::Full),
        (1u64..40_000).prop_map(KvCacheStrategy::evict),
        (prop::sample::select(vec![2u32, 4, 8]), 0u64..512).prop_map(|(b, r)| {
            KvCacheStrategy::Quant(KvQuantSpec {
                residual_tokens: r,
                ..KvQuantSpec::symmetric(b)
            })
        }),
    ]
}

/// Integer-only weight bytes: bits per quantized parameter scaled by the
/// group size, so the sum is exact before one final division.
fn oracle_weights(m: &ModelSpec, bits: u64) -> u64 {
    let (nq, nu) = (m.n_params_quantizable as u128, m.n_params_unquantizable as u128);
    let scaled = if bits == 16 {
        (nq + nu) * 16 * 128
    } else {
        nq * (bits as u128 * 128 + 16) + nu * 16 * 128
    };
    (scaled / (8 * 128)) as u64
}

#[test]
fn weights_match_integer_oracle() {
    for m in &catalog().models {
        for bits in [4u32, 8, 16] {
            let q = WeightQuantSpec::symmetric(bits).unwrap();
            assert_eq!(weight_memory_bytes(m, &q).unwrap(), oracle_weights(m, bits as u64), "{}", m.name);
        }
    }
}

#[test]
fn full_kv_matches_closed_form() {
    for m in &catalog().models {
        let per = u64::from(m.n_layers) * u64::from(m.n_kv_heads) * u64::from(m.d_head) * 2 * 2;
        assert_eq!(kv_bytes_per_token(m), per);
        for (t, g) in [(0u64, 1u32), (2_000, 1), (18_000, 1), (30_000, 16)] {
            assert_eq!(kv_memory_bytes(m, &KvCacheStrategy::Full, t, g).unwrap(), per * t * g as u64);
        }
    }
}

proptest! {
    #[test]
    fn kv_monotone_in_tokens_and_group(m in model(), s in strategy(), t in 0u64..100_000, dt in 0u64..10_000, g in 1u32..32) {
        let a = kv_memory_bytes(&m, &s, t, g).unwrap();
        prop_assert!(kv_memory_bytes(&m, &s, t + dt, g).unwrap() >= a);
        prop_assert!(kv_memory_bytes(&m, &s, t, g + 1).unwrap() >= a);
    }

    #[test]
    fn eviction_ceiling(m in model(), r in 1u64..40_000, t in 0u64..100_000, g in 1u32..32) {
        let evicted = kv_memory_bytes(&m, &KvCacheStrategy::evict(r), t, g).unwrap();
        let ceiling = kv_memory_bytes(&m, &KvCacheStrategy::Full, r, g).unwrap();
        prop_assert!(evicted <= ceiling);
        if t >= r {
            prop_assert_eq!(evicted, ceiling);
        }
    }

    #[test]
    fn quant_never_exceeds_full(m in model(), s in strategy(), t in 0u64..100_000, g in 1u32..32) {
        prop_assume!(matches!(s, KvCacheStrategy::Quant(_)));
        let full = kv_memory_bytes(&m, &KvCacheStrategy::Full, t, g).unwrap();
        prop_assert!(kv_memory_bytes(&m, &s, t, g).unwrap() <= full);
    }

    #[test]
    fn kv_linear_in_group(m in model(), s in strategy(), t in 0u64..100_000, g in 1u32..64) {
        // Linear before flooring: the floored value brackets g * floored(1).
        let one = kv_memory_bytes(&m, &s, t, 1).unwrap();
        let many = kv_memory_bytes(&m, &s, t, g).unwrap();
        prop_assert!(many >= one * g as u64);
        prop_assert!(many < (one + 1) * g as u64);
        if matches!(s, KvCacheStrategy::Full | KvCacheStrategy::Evict { .. }) {
            prop_assert_eq!(many, one * g as u64);
        }
    }

    #[test]
    fn lower_precision_is_smaller(m in model()) {
        let w = |b| weight_memory_bytes(&m, &WeightQuantSpec::symmetric(b).unwrap()).unwrap();
        prop_assert!(w(4) < w(8));
        prop_assert!(w(8) < w(16));
    }

    #[test]
    fn amortized_between_kv_and_total(m in model(), t in 0u64..40_000, g in 1u32..17, b in 1u32..64) {
        let cat = ModelCatalog::new(vec![m.clone()], None).unwrap();
        let cfg = memplan_core::InferenceConfig::new(m.name.clone(), 8, KvCacheStrategy::Full, t, g).unwrap();
        let bd = cat.breakdown(&cfg.clone().with_batch(b)).unwrap();
        prop_assert!(bd.amortized <= bd.total);
        prop_assert!(bd.amortized >= bd.kv);
        if b == 1 {
            prop_assert_eq!(bd.amortized, bd.total);
        }
    }
}
