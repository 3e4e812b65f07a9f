//! pass@1 and majority-vote accuracy estimated from a fixed sample pool.
//!
//! maj@G is the probability that a uniformly random size-`G` subset of the
//! pool, drawn without replacement, votes for the correct answer. This is
//! an estimator over a finite pool rather than fresh generations.

use std::collections::HashMap;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::pools::SamplePool;
use super::records::MeasurementRecord;
use super::MeasurementError;
use crate::config::ConfigKey;
use crate::scalar::Scalar;

/// Largest `C(S, G)` the exact method will enumerate.
pub const ENUMERATION_CAP: u128 = 1_000_000;

/// How ties among the most frequent answers are resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TiePolicy {
    /// Uniformly random among tied answers; exact mode credits `1/k`.
    #[default]
    Uniform,
    /// The tied answer sampled earliest (pool order) wins.
    FirstSampled,
    /// Any tie counts as wrong.
    CountAsWrong,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Method {
    Exact,
    MonteCarlo { resamples: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimateOptions {
    #[serde(flatten)]
    pub method: Method,
    #[serde(default)]
    pub ties: TiePolicy,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions {
            method: Method::Exact,
            ties: TiePolicy::Uniform,
        }
    }
}

impl EstimateOptions {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn monte_carlo(resamples: u64, seed: u64) -> Self {
        EstimateOptions {
            method: Method::MonteCarlo { resamples, seed },
            ties: TiePolicy::Uniform,
        }
    }

    pub fn with_ties(mut self, ties: TiePolicy) -> Self {
        self.ties = ties;
        self
    }
}

/// Fraction of correct samples.
pub fn pass_at_1<S: Scalar>(pool: &SamplePool) -> Result<S, MeasurementError> {
    if pool.size() == 0 {
        return Err(MeasurementError::EmptyPool);
    }
    Ok(S::of(pool.correct_count() as f64 / pool.size() as f64))
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn subset_count(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Pool reduced to vote classes. Class 0 is the correct answer (possibly
/// with zero members); invalid samples are tallied separately.
struct Classes {
    correct: usize,
    wrong: Vec<usize>,
    invalid: usize,
    /// Class id per sample in pool order: 0 correct, 1.. wrong, `usize::MAX` invalid.
    labels: Vec<usize>,
}

impl Classes {
    fn of(pool: &SamplePool) -> Self {
        let mut ids: HashMap<&str, usize> = HashMap::new();
        let mut wrong = Vec::new();
        let mut correct = 0;
        let mut invalid = 0;
        let mut labels = Vec::with_capacity(pool.size());
        for s in &pool.samples {
            let label = if !s.is_valid() {
                invalid += 1;
                usize::MAX
            } else if s.correct {
                correct += 1;
                0
            } else {
                let next = wrong.len() + 1;
                let id = *ids.entry(s.answer_key.as_str()).or_insert(next);
                if id == next {
                    wrong.push(0);
                }
                wrong[id - 1] += 1;
                id
            };
            labels.push(label);
        }
        Classes {
            correct,
            wrong,
            invalid,
            labels,
        }
    }
}

/// Credit for one vote outcome given the correct answer's vote count, the
/// highest count among wrong answers and how many wrong answers reach it.
fn credit(correct_votes: usize, best_wrong: usize, n_best_wrong: usize, ties: TiePolicy) -> f64 {
    if correct_votes == 0 || correct_votes < best_wrong {
        return 0.0;
    }
    if correct_votes > best_wrong {
        return 1.0;
    }
    match ties {
        TiePolicy::Uniform => 1.0 / (n_best_wrong + 1) as f64,
        TiePolicy::CountAsWrong => 0.0,
        TiePolicy::FirstSampled => unreachable!("order-dependent policy handled by enumeration"),
    }
}

/// Sums `weight * credit` over every multiset of per-class vote counts.
fn exact_by_class_counts(classes: &Classes, g: usize, ties: TiePolicy) -> f64 {
    // Each wrong class is visited in turn; state carries the votes still to
    // assign and the running (best, multiplicity) among wrong classes.
    fn walk(
        wrong: &[usize],
        remaining: usize,
        best: usize,
        n_best: usize,
        weight: f64,
        tail: &dyn Fn(usize, usize, usize, f64) -> f64,
    ) -> f64 {
        match wrong.split_first() {
            None => tail(remaining, best, n_best, weight),
            Some((&size, rest)) => {
                let mut total = 0.0;
                for take in 0..=size.min(remaining) {
                    let (b, n) = match take.cmp(&best) {
                        std::cmp::Ordering::Greater => (take, 1),
                        std::cmp::Ordering::Equal if take > 0 => (best, n_best + 1),
                        _ => (best, n_best),
                    };
                    let w = weight * subset_count(size, take) as f64;
                    total += walk(rest, remaining - take, b, n, w, tail);
                }
                total
            }
        }
    }
    let tail = |remaining: usize, best: usize, n_best: usize, weight: f64| {
        // Split what is left between the correct class and the invalid bucket.
        let mut sum = 0.0;
        for correct_votes in 0..=classes.correct.min(remaining) {
            let invalid_votes = remaining - correct_votes;
            if invalid_votes > classes.invalid {
                continue;
            }
            let c = credit(correct_votes, best, n_best, ties);
            if c > 0.0 {
                sum += c
                    * weight
                    * subset_count(classes.correct, correct_votes) as f64
                    * subset_count(classes.invalid, invalid_votes) as f64;
            }
        }
        sum
    };
    let favourable = walk(&classes.wrong, g, 0, 0, 1.0, &tail);
    favourable / subset_count(classes.labels.len(), g) as f64
}

/// Winner of one vote over the given sample indices (ascending pool order).
/// Returns `Some(true)` for correct, `Some(false)` for wrong, and `None`
/// when the outcome is a tie that involves the correct answer under the
/// uniform policy (the caller resolves it).
fn vote(labels: &[usize], subset: &[usize], counts: &mut Vec<usize>, ties: TiePolicy) -> Outcome {
    counts.iter_mut().for_each(|c| *c = 0);
    let mut first_seen: Vec<usize> = Vec::new();
    for (pos, &i) in subset.iter().enumerate() {
        let label = labels[i];
        if label == usize::MAX {
            continue;
        }
        if counts.len() <= label {
            counts.resize(label + 1, 0);
        }
        if first_seen.len() <= label {
            first_seen.resize(label + 1, usize::MAX);
        }
        if counts[label] == 0 {
            first_seen[label] = pos;
        }
        counts[label] += 1;
    }
    let top = counts.iter().copied().max().unwrap_or(0);
    if top == 0 {
        return Outcome::Wrong;
    }
    let correct_votes = counts.first().copied().unwrap_or(0);
    if correct_votes < top {
        return Outcome::Wrong;
    }
    let tied = counts.iter().filter(|&&c| c == top).count();
    if tied == 1 {
        return Outcome::Correct;
    }
    match ties {
        TiePolicy::CountAsWrong => Outcome::Wrong,
        TiePolicy::Uniform => Outcome::Tie(tied),
        TiePolicy::FirstSampled => {
            let earliest = counts
                .iter()
                .enumerate()
                .filter(|(_, &c)| c == top)
                .map(|(label, _)| first_seen[label])
                .min()
                .unwrap_or(usize::MAX);
            if first_seen[0] == earliest {
                Outcome::Correct
            } else {
                Outcome::Wrong
            }
        }
    }
}

enum Outcome {
    Correct,
    Wrong,
    /// Correct answer tied with this many answers in total.
    Tie(usize),
}

fn exact_by_subsets(classes: &Classes, g: usize, ties: TiePolicy) -> f64 {
    let n = classes.labels.len();
    let mut subset: Vec<usize> = (0..g).collect();
    let mut counts = Vec::new();
    let mut total = 0.0;
    let mut seen = 0u64;
    loop {
        total += match vote(&classes.labels, &subset, &mut counts, ties) {
            Outcome::Correct => 1.0,
            Outcome::Wrong => 0.0,
            Outcome::Tie(k) => 1.0 / k as f64,
        };
        seen += 1;
        // Next combination in lexicographic order.
        let mut i = g;
        loop {
            if i == 0 {
                return total / seen as f64;
            }
            i -= 1;
            if subset[i] < n - g + i {
                break;
            }
        }
        subset[i] += 1;
        for j in i + 1..g {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

fn monte_carlo(classes: &Classes, g: usize, ties: TiePolicy, resamples: u64, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = classes.labels.len();
    let mut counts = Vec::new();
    let mut wins = 0u64;
    for _ in 0..resamples {
        let mut subset = index::sample(&mut rng, n, g).into_vec();
        subset.sort_unstable();
        wins += match vote(&classes.labels, &subset, &mut counts, ties) {
            Outcome::Correct => 1,
            Outcome::Wrong => 0,
            Outcome::Tie(k) => u64::from(rng.random_range(0..k) == 0),
        };
    }
    wins as f64 / resamples as f64
}

/// Majority-vote accuracy at group size `g` over a fixed pool.
pub fn maj_at_g<S: Scalar>(
    pool: &SamplePool,
    g: u32,
    options: &EstimateOptions,
) -> Result<S, MeasurementError> {
    let size = pool.size();
    if size == 0 {
        return Err(MeasurementError::EmptyPool);
    }
    if g == 0 {
        return Err(MeasurementError::ZeroGroup);
    }
    let gu = g as usize;
    if gu > size {
        return Err(MeasurementError::GroupTooLarge { group: g, pool: size });
    }
    let classes = Classes::of(pool);
    let value = match options.method {
        Method::Exact => {
            let subsets = subset_count(size, gu);
            if subsets > ENUMERATION_CAP {
                return Err(MeasurementError::EnumerationCap {
                    subsets,
                    cap: ENUMERATION_CAP,
                });
            }
            match options.ties {
                TiePolicy::FirstSampled => exact_by_subsets(&classes, gu, options.ties),
                _ => exact_by_class_counts(&classes, gu, options.ties),
            }
        }
        Method::MonteCarlo { resamples, seed } => {
            if resamples == 0 {
                return Err(MeasurementError::ZeroResamples);
            }
            monte_carlo(&classes, gu, options.ties, resamples, seed)
        }
    };
    Ok(S::of(value))
}

/// Builds a measurement record whose accuracy is the mean per-instance
/// estimate: pass@1 at `G = 1`, maj@G otherwise.
pub fn derive_record(
    pools: &[SamplePool],
    key: ConfigKey,
    options: &EstimateOptions,
) -> Result<MeasurementRecord, MeasurementError> {
    let first = pools.first().ok_or(MeasurementError::NoPools)?;
    if let Some(p) = pools.iter().find(|p| p.size() != first.size()) {
        return Err(MeasurementError::NonUniformPools(first.size(), p.size()));
    }
    let mut sum = 0.0f64;
    for pool in pools {
        sum += if key.group_size == 1 {
            pass_at_1::<f64>(pool)?
        } else {
            maj_at_g::<f64>(pool, key.group_size, options)?
        };
    }
    Ok(MeasurementRecord::new(key, sum / pools.len() as f64))
}
