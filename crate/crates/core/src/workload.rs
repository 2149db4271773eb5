//! Deterministic synthetic datasets and trial plans.
//!
//! Everything here is a pure function of its seed: two runs with the same
//! `TrialSpec` produce byte-identical plans, which is what makes benchmark
//! CSVs reproducible.

use std::collections::HashSet;

use crate::error::Error;
use crate::hash::{mix64, GOLDEN_GAMMA};
use crate::prime::{is_prime, next_prime};

/// splitmix64 step: advance the Weyl state, output the mixed state.
#[inline]
pub fn splitmix_next(state: u64) -> (u64, u64) {
    let new_state = state.wrapping_add(GOLDEN_GAMMA);
    (new_state, mix64(new_state))
}

/// Seeded splitmix64 stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let (state, out) = splitmix_next(self.state);
        self.state = state;
        out
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// How a trial derives its table size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialMode {
    /// Entry count fixed; capacity is `next_prime(ceil(n / alpha))`.
    FixedN,
    /// Capacity given (must be prime); entry count is `floor(alpha * m)`.
    FixedM { capacity: usize },
}

/// Specification of one benchmark trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialSpec {
    pub n_entries: usize,
    /// Target load factor in (0, 1].
    pub target_alpha: f64,
    pub mode: TrialMode,
    pub seed: u64,
    /// Fraction of additional absent probe keys, in [0, 1].
    pub unsuccessful_fraction: f64,
}

/// Materialized trial: the table size, the keys to insert, and the keys to
/// look up (all inserted keys, then the absent ones).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialPlan {
    pub capacity_m: usize,
    pub keys: Vec<u64>,
    pub probe_keys: Vec<u64>,
}

impl TrialPlan {
    /// Load factor the plan actually reaches, `n / m`.
    pub fn achieved_alpha(&self) -> f64 {
        self.keys.len() as f64 / self.capacity_m as f64
    }
}

fn draw_distinct(rng: &mut SplitMix64, count: usize, taken: &mut HashSet<u64>) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let k = rng.next_u64();
        if taken.insert(k) {
            out.push(k);
        }
    }
    out
}

/// `n` distinct keys drawn from the seeded stream; duplicates are re-drawn.
pub fn gen_unique_keys(n: usize, seed: u64) -> Vec<u64> {
    let mut rng = SplitMix64::new(seed);
    let mut taken = HashSet::with_capacity(n * 2);
    draw_distinct(&mut rng, n, &mut taken)
}

/// Expands a spec into a concrete plan.
pub fn build_trial(spec: &TrialSpec) -> Result<TrialPlan, Error> {
    if !(spec.target_alpha > 0.0 && spec.target_alpha <= 1.0) {
        return Err(Error::InvalidSpec(format!(
            "target load factor {} outside (0, 1]",
            spec.target_alpha
        )));
    }
    if !(0.0..=1.0).contains(&spec.unsuccessful_fraction) {
        return Err(Error::InvalidSpec(format!(
            "unsuccessful fraction {} outside [0, 1]",
            spec.unsuccessful_fraction
        )));
    }
    let (capacity_m, n) = match spec.mode {
        TrialMode::FixedN => {
            let wanted = (spec.n_entries as f64 / spec.target_alpha).ceil() as usize;
            (next_prime(wanted.max(2)), spec.n_entries)
        }
        TrialMode::FixedM { capacity } => {
            if capacity < 2 || !is_prime(capacity) {
                return Err(Error::InvalidSpec(format!(
                    "fixed capacity {capacity} is not a prime >= 2"
                )));
            }
            (capacity, (spec.target_alpha * capacity as f64).floor() as usize)
        }
    };
    debug_assert!(n <= capacity_m);

    let mut rng = SplitMix64::new(spec.seed);
    let mut taken = HashSet::with_capacity(n * 2);
    let keys = draw_distinct(&mut rng, n, &mut taken);
    let absent = draw_distinct(
        &mut rng,
        (spec.unsuccessful_fraction * n as f64).floor() as usize,
        &mut taken,
    );
    let mut probe_keys = keys.clone();
    probe_keys.extend_from_slice(&absent);
    Ok(TrialPlan {
        capacity_m,
        keys,
        probe_keys,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_vectors() {
        // Known-good sequence for seed 1234567
        // (https://rosettacode.org/wiki/Pseudo-random_numbers/Splitmix64).
        let mut rng = SplitMix64::new(1_234_567);
        assert_eq!(rng.next_u64(), 6_457_827_717_110_365_317);
        assert_eq!(rng.next_u64(), 3_203_168_211_198_807_973);
        assert_eq!(rng.next_u64(), 9_817_491_932_198_370_423);
        assert_eq!(rng.next_u64(), 4_593_380_528_125_082_431);
        assert_eq!(rng.next_u64(), 16_408_922_859_458_223_821);
    }

    #[test]
    fn splitmix_first_outputs() {
        assert_eq!(splitmix_next(0).1, mix64(GOLDEN_GAMMA));
        assert_eq!(splitmix_next(0).1, 0xE220A8397B1DCDAF);
        assert_ne!(splitmix_next(1).1, splitmix_next(2).1);
    }

    #[test]
    fn splitmix_streams_are_reproducible() {
        let mut a = SplitMix64::new(9);
        let mut b = SplitMix64::new(9);
        for _ in 0..1000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn gen_unique_keys_basics() {
        assert!(gen_unique_keys(0, 1).is_empty());
        let keys = gen_unique_keys(10_000, 42);
        assert_eq!(keys.len(), 10_000);
        let set: HashSet<u64> = keys.iter().copied().collect();
        assert_eq!(set.len(), 10_000);
        assert_eq!(keys, gen_unique_keys(10_000, 42));
        assert_ne!(keys, gen_unique_keys(10_000, 43));
    }

    #[test]
    fn build_trial_fixed_n_examples() {
        let plan = build_trial(&TrialSpec {
            n_entries: 10_000,
            target_alpha: 0.95,
            mode: TrialMode::FixedN,
            seed: 1,
            unsuccessful_fraction: 0.0,
        })
        .unwrap();
        // ceil(10000 / 0.95) = 10527; the next prime is 10529.
        assert_eq!(plan.capacity_m, 10_529);
        assert!((plan.achieved_alpha() - 0.95).abs() < 0.01);

        let plan = build_trial(&TrialSpec {
            n_entries: 10_000,
            target_alpha: 0.10,
            mode: TrialMode::FixedN,
            seed: 1,
            unsuccessful_fraction: 0.0,
        })
        .unwrap();
        assert_eq!(plan.capacity_m, 100_003);
    }

    #[test]
    fn build_trial_fixed_m_boundary() {
        let plan = build_trial(&TrialSpec {
            n_entries: 0,
            target_alpha: 1.0,
            mode: TrialMode::FixedM { capacity: 7 },
            seed: 5,
            unsuccessful_fraction: 0.0,
        })
        .unwrap();
        assert_eq!(plan.capacity_m, 7);
        assert_eq!(plan.keys.len(), 7);
    }

    #[test]
    fn build_trial_rejects_bad_specs() {
        let bad_alpha = TrialSpec {
            n_entries: 10,
            target_alpha: 0.0,
            mode: TrialMode::FixedN,
            seed: 1,
            unsuccessful_fraction: 0.0,
        };
        assert!(matches!(build_trial(&bad_alpha), Err(Error::InvalidSpec(_))));

        let bad_capacity = TrialSpec {
            n_entries: 10,
            target_alpha: 0.5,
            mode: TrialMode::FixedM { capacity: 10 },
            seed: 1,
            unsuccessful_fraction: 0.0,
        };
        assert!(matches!(build_trial(&bad_capacity), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn absent_probe_keys_are_disjoint_from_inserted_keys() {
        let plan = build_trial(&TrialSpec {
            n_entries: 1000,
            target_alpha: 0.5,
            mode: TrialMode::FixedN,
            seed: 11,
            unsuccessful_fraction: 0.5,
        })
        .unwrap();
        assert_eq!(plan.probe_keys.len(), 1500);
        let inserted: HashSet<u64> = plan.keys.iter().copied().collect();
        for k in &plan.probe_keys[1000..] {
            assert!(!inserted.contains(k));
        }
    }

    #[test]
    fn achieved_alpha_close_to_target_across_grid() {
        for pct in (10..=95).step_by(5) {
            let alpha = pct as f64 / 100.0;
            let plan = build_trial(&TrialSpec {
                n_entries: 10_000,
                target_alpha: alpha,
                mode: TrialMode::FixedN,
                seed: 2,
                unsuccessful_fraction: 0.0,
            })
            .unwrap();
            assert!(
                (plan.achieved_alpha() - alpha).abs() < 0.01,
                "alpha {alpha}: achieved {}",
                plan.achieved_alpha()
            );
        }
    }
}
