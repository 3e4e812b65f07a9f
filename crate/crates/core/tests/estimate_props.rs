use memplan_core::measurements::{
    load_pools, maj_at_g, pass_at_1, EstimateOptions, Sample, SamplePool, TiePolicy,
};
use proptest::prelude::*;

/// Plain subset enumeration by bitmask; independent of the library's
/// class-count and combination walkers.
fn brute_force(pool: &SamplePool, g: usize, ties: TiePolicy) -> f64 {
    let n = pool.size();
    let mut total = 0.0;
    let mut subsets = 0u64;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != g {
            continue;
        }
        subsets += 1;
        let mut tally: Vec<(&str, bool, usize, usize)> = Vec::new();
        for (pos, s) in pool.samples.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0) {
            if s.answer_key == "INVALID" {
                continue;
            }
            match tally.iter_mut().find(|e| e.0 == s.answer_key) {
                Some(e) => e.2 += 1,
                None => tally.push((&s.answer_key, s.correct, 1, pos)),
            }
        }
        let top = tally.iter().map(|e| e.2).max().unwrap_or(0);
        let winners: Vec<_> = tally.iter().filter(|e| e.2 == top).collect();
        let correct_wins = winners.iter().any(|e| e.1);
        total += match ties {
            _ if top == 0 || !correct_wins => 0.0,
            _ if winners.len() == 1 => 1.0,
            TiePolicy::Uniform => 1.0 / winners.len() as f64,
            TiePolicy::CountAsWrong => 0.0,
            TiePolicy::FirstSampled => {
                let first = winners.iter().min_by_key(|e| e.3).unwrap();
                if first.1 { 1.0 } else { 0.0 }
            }
        };
    }
    total / subsets as f64
}

fn pool() -> impl Strategy<Value = SamplePool> {
    (
        prop::collection::vec(prop::sample::select(vec!["A", "B", "C", "D", "INVALID"]), 1..11),
        prop::sample::select(vec!["A", "B", "Z"]),
    )
        .prop_map(|(answers, correct)| {
            let samples = answers
                .into_iter()
                .map(|a| Sample::new(a, a == correct))
                .collect();
            SamplePool::new("p", samples).unwrap()
        })
}

fn ties() -> impl Strategy<Value = TiePolicy> {
    prop::sample::select(vec![TiePolicy::Uniform, TiePolicy::FirstSampled, TiePolicy::CountAsWrong])
}

proptest! {
    #[test]
    fn exact_matches_brute_force(p in pool(), g in 1usize..11, t in ties()) {
        prop_assume!(g <= p.size());
        let got: f64 = maj_at_g(&p, g as u32, &EstimateOptions::exact().with_ties(t)).unwrap();
        prop_assert!((got - brute_force(&p, g, t)).abs() < 1e-12);
    }

    #[test]
    fn permutation_invariant(p in pool(), g in 1usize..11, seed in any::<u64>()) {
        prop_assume!(g <= p.size());
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut samples = p.samples.clone();
        samples.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let q = SamplePool::new("p", samples).unwrap();
        for t in [TiePolicy::Uniform, TiePolicy::CountAsWrong] {
            let a: f64 = maj_at_g(&p, g as u32, &EstimateOptions::exact().with_ties(t)).unwrap();
            let b: f64 = maj_at_g(&q, g as u32, &EstimateOptions::exact().with_ties(t)).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn maj_at_one_is_pass_at_one(p in pool()) {
        let m: f64 = maj_at_g(&p, 1, &EstimateOptions::exact()).unwrap();
        prop_assert_eq!(m, pass_at_1::<f64>(&p).unwrap());
    }

    #[test]
    fn estimate_is_a_probability(p in pool(), g in 1usize..11, seed in any::<u64>()) {
        prop_assume!(g <= p.size());
        let mc: f64 = maj_at_g(&p, g as u32, &EstimateOptions::monte_carlo(200, seed)).unwrap();
        prop_assert!((0.0..=1.0).contains(&mc));
    }
}

#[test]
fn strict_majority_pool_is_always_right() {
    // 7 correct, 2 spread wrong: the correct answer leads every subset.
    let mut pairs = vec![("A", true); 7];
    pairs.extend([("B", false), ("C", false)]);
    let p = SamplePool::from_pairs("p", pairs).unwrap();
    for g in 1..=9 {
        let v: f64 = maj_at_g(&p, g, &EstimateOptions::exact()).unwrap();
        let expected = brute_force(&p, g as usize, TiePolicy::Uniform);
        assert!((v - expected).abs() < 1e-12);
    }
    let all_right = SamplePool::from_pairs("q", vec![("A", true); 5]).unwrap();
    for g in 1..=5 {
        assert_eq!(maj_at_g::<f64>(&all_right, g, &EstimateOptions::exact()).unwrap(), 1.0);
    }
}

#[test]
fn monte_carlo_converges_over_seeds() {
    let p = SamplePool::from_pairs(
        "p",
        vec![("A", true), ("A", true), ("B", false), ("B", false), ("C", false), ("A", true), ("D", false)],
    )
    .unwrap();
    let exact: f64 = maj_at_g(&p, 4, &EstimateOptions::exact()).unwrap();
    let mut worst: f64 = 0.0;
    let mut mean = 0.0;
    for seed in 0..100u64 {
        let mc: f64 = maj_at_g(&p, 4, &EstimateOptions::monte_carlo(20_000, seed)).unwrap();
        worst = worst.max((mc - exact).abs());
        mean += mc / 100.0;
    }
    // Standard error at 20k resamples is under 0.0036; 0.02 is > 5 sigma.
    assert!(worst < 0.02, "worst {worst}");
    assert!((mean - exact).abs() < 0.002, "mean {mean} exact {exact}");
}

#[test]
fn fixture_pools_load() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/pools.jsonl");
    let pools = load_pools(std::io::BufReader::new(std::fs::File::open(path).unwrap())).unwrap();
    assert_eq!(pools.len(), 50);
    assert!(pools.iter().all(|p| (1..=8).contains(&p.size())));
    for p in &pools {
        for g in 1..=p.size() {
            let a: f64 = maj_at_g(p, g as u32, &EstimateOptions::exact()).unwrap();
            assert!((a - brute_force(p, g, TiePolicy::Uniform)).abs() < 1e-12);
        }
    }
}
