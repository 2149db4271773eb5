//! Observation-driven probe-sequence generators.
//!
//! All four strategies sit behind the same feedback-iterator contract:
//! [`probe_start`] yields the home slot and an initial [`ProbeState`], then
//! each [`probe_next`] call consumes an [`Observation`] of the most recently
//! returned slot and either yields the next slot or reports exhaustion of the
//! strategy's probe budget (the table then falls back to a linear sweep).
//!
//! * `Random` — classic double hashing: a fixed per-key step `d0` derived
//!   from the second hash. With a prime table size the first `m` slots are a
//!   permutation of the table.
//! * `Bathroom` — adaptive double hashing. A run of `theta` consecutive
//!   occupied observations grows the step (additively by `delta` or by
//!   doubling) so the walk vaults over clusters; observing a vacancy shrinks
//!   it again (that branch is reachable only from the stall simulator, since
//!   a live table terminates on the first empty slot).
//! * `Elastic` — a fixed three-region schedule over the probe index: linear
//!   steps up to `t1`, double-hash steps up to `t2`, quadratic offsets past
//!   it. A simplified stand-in for the published elastic-hashing scheme, not
//!   an implementation of it.
//! * `Funnel` — geometrically shrinking sub-tables, a bounded number of
//!   double-hash probes per level, final level scanned linearly. Likewise a
//!   simplified stand-in; no key relocation is performed.
//!
//! Every sequence is a pure function of (strategy, params, [`HashPair`],
//! table size, observation stream): the table relies on that determinism to
//! replay insert paths at lookup time.

use crate::error::Error;
use crate::hash::HashPair;

/// How the adaptive step grows when a cluster is detected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Growth {
    Additive,
    Multiplicative,
}

/// Parameters of the adaptive (bathroom) rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdaptiveParams {
    /// Consecutive-occupied threshold that triggers a step change.
    pub theta: usize,
    /// Step increment (additive mode) or decrement unit.
    pub delta: usize,
    pub growth: Growth,
}

impl Default for AdaptiveParams {
    fn default() -> Self {
        AdaptiveParams {
            theta: 2,
            delta: 1,
            growth: Growth::Additive,
        }
    }
}

impl AdaptiveParams {
    pub fn validate(&self) -> Result<(), Error> {
        if self.theta < 1 {
            return Err(Error::InvalidParams("theta must be >= 1".into()));
        }
        if self.delta < 1 {
            return Err(Error::InvalidParams("delta must be >= 1".into()));
        }
        Ok(())
    }
}

/// Probe-index boundaries of the elastic strategy's three regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ElasticParams {
    pub t1: usize,
    pub t2: usize,
}

impl Default for ElasticParams {
    fn default() -> Self {
        ElasticParams { t1: 4, t2: 16 }
    }
}

impl ElasticParams {
    pub fn validate(&self) -> Result<(), Error> {
        if self.t1 < 1 || self.t1 >= self.t2 {
            return Err(Error::InvalidParams("elastic thresholds need 1 <= t1 < t2".into()));
        }
        Ok(())
    }
}

/// Level layout and per-level probe budget of the funnel strategy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunnelParams {
    /// Number of levels, including the final catch-all level.
    pub levels: usize,
    /// Geometric shrink factor between consecutive levels, in (0, 1).
    pub shrink: f64,
    /// Probes spent inside a non-final level before funneling down.
    pub budget_beta: usize,
}

impl Default for FunnelParams {
    fn default() -> Self {
        FunnelParams {
            levels: 3,
            shrink: 0.5,
            budget_beta: 4,
        }
    }
}

impl FunnelParams {
    pub fn validate(&self) -> Result<(), Error> {
        if self.levels < 2 {
            return Err(Error::InvalidParams("funnel needs at least 2 levels".into()));
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return Err(Error::InvalidParams("funnel shrink must lie in (0, 1)".into()));
        }
        if self.budget_beta < 1 {
            return Err(Error::InvalidParams("funnel budget_beta must be >= 1".into()));
        }
        Ok(())
    }
}

/// The collision-resolution strategy a table runs with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StrategyKind {
    Random,
    Bathroom(AdaptiveParams),
    Elastic(ElasticParams),
    Funnel(FunnelParams),
}

impl StrategyKind {
    pub fn name(&self) -> &'static str {
        match self {
            StrategyKind::Random => "random",
            StrategyKind::Bathroom(_) => "bathroom",
            StrategyKind::Elastic(_) => "elastic",
            StrategyKind::Funnel(_) => "funnel",
        }
    }

    /// Checks the parameter invariants, including the funnel layout against a
    /// concrete table size.
    pub fn validate(&self, m: usize) -> Result<(), Error> {
        match self {
            StrategyKind::Random => Ok(()),
            StrategyKind::Bathroom(p) => p.validate(),
            StrategyKind::Elastic(p) => p.validate(),
            StrategyKind::Funnel(p) => funnel_levels(m, p).map(|_| ()),
        }
    }

    /// Fixed metadata overhead charged to the strategy by the memory
    /// accounting contract, in bytes.
    pub fn metadata_bytes(&self) -> usize {
        match self {
            StrategyKind::Random => 0,
            StrategyKind::Bathroom(_) => 32,
            StrategyKind::Elastic(_) => 24,
            StrategyKind::Funnel(p) => 16 + 16 * p.levels,
        }
    }
}

/// What the caller saw in the slot a strategy just returned.
///
/// `OccupiedOther` and `TombstoneSeen` are equivalent for adaptation: both
/// extend a run of non-empty slots. `EmptySeen` only occurs in simulator
/// walks that continue through vacancies; a live table stops there.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observation {
    OccupiedOther,
    TombstoneSeen,
    Match,
    EmptySeen,
}

/// Result of advancing a probe sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepResult {
    NextSlot(usize),
    /// The strategy's observation budget is spent; switch to the fallback sweep.
    Exhausted,
}

/// Elastic probe-index regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    A,
    B,
    C,
}

/// Region of a 1-based probe index: A for `index <= t1`, B up to `t2`, C past it.
pub fn elastic_region(probe_index: usize, params: &ElasticParams) -> Region {
    debug_assert!(probe_index >= 1);
    if probe_index <= params.t1 {
        Region::A
    } else if probe_index <= params.t2 {
        Region::B
    } else {
        Region::C
    }
}

/// Cursor of one probe sequence.
///
/// `probes_made` counts observations consumed so far, so it is 0 right after
/// [`probe_start`] (the home slot has been produced but not yet observed) and
/// the budget is spent once it reaches the table size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeState {
    hashes: HashPair,
    pub current_slot: usize,
    pub step_d: usize,
    pub consec_c: usize,
    pub probes_made: usize,
    /// Funnel level currently being probed; 0 for the other strategies.
    pub level: usize,
    level_probes: usize,
}

/// Wraps a proposed step back into `[1, m-1]`.
#[inline]
fn normalize_step(x: usize, m: usize) -> usize {
    debug_assert!(x >= 1);
    if m < 2 {
        1
    } else {
        ((x - 1) % (m - 1)) + 1
    }
}

/// Base step from the second hash: `1 + (h2 mod (m-1))`.
#[inline]
fn base_step(h2: u64, m: usize) -> usize {
    if m < 2 {
        1
    } else {
        1 + (h2 % (m as u64 - 1)) as usize
    }
}

/// Shared core of the adaptive rule, operating on the (step, run-length) pair.
///
/// Occupied-class observations extend the run and grow the step once the run
/// reaches `theta`; a vacancy resets the run and shrinks the step (floored at
/// 1, no modular wrap on the way down).
pub(crate) fn update_step(
    step_d: usize,
    consec_c: usize,
    obs: Observation,
    params: &AdaptiveParams,
    m: usize,
) -> (usize, usize) {
    match obs {
        Observation::EmptySeen => {
            let shrunk = match params.growth {
                Growth::Additive => step_d.saturating_sub(params.delta),
                Growth::Multiplicative => step_d / 2,
            };
            (shrunk.max(1), 0)
        }
        _ => {
            let run = consec_c + 1;
            if run >= params.theta {
                let grown = match params.growth {
                    Growth::Additive => step_d + params.delta,
                    Growth::Multiplicative => step_d * 2,
                };
                (normalize_step(grown, m), 0)
            } else {
                (step_d, run)
            }
        }
    }
}

/// The adaptive (bathroom) counter/step update as a pure function, isolated
/// from slot stepping. Touches only `step_d` and `consec_c`.
pub fn adaptive_update(
    mut state: ProbeState,
    obs: Observation,
    params: &AdaptiveParams,
    m: usize,
) -> ProbeState {
    let (d, c) = update_step(state.step_d, state.consec_c, obs, params, m);
    state.step_d = d;
    state.consec_c = c;
    state
}

/// Geometric level layout of the funnel strategy as `(offset, length)` pairs.
///
/// Level 0 spans `⌊m·shrink⌋` slots, each following level `⌊previous·shrink⌋`
/// (clamped to 1), and the final level absorbs the remainder so the lengths
/// always sum to `m`. Errors if any level would be empty.
pub fn funnel_levels(m: usize, params: &FunnelParams) -> Result<Vec<(usize, usize)>, Error> {
    params.validate()?;
    if m < params.levels {
        return Err(Error::InvalidParams(format!(
            "table of {m} slots cannot host {} funnel levels",
            params.levels
        )));
    }
    let mut out = Vec::with_capacity(params.levels);
    for i in 0..params.levels {
        let (offset, len, _) = funnel_level_at(m, params, i);
        if len == 0 || offset + len > m {
            return Err(Error::InvalidParams(format!(
                "funnel level {i} would be empty for m = {m}"
            )));
        }
        out.push((offset, len));
    }
    Ok(out)
}

/// `(offset, length, is_final)` of level `k`, recomputed from the recurrence
/// without allocating. Only meaningful for layouts `funnel_levels` accepts.
fn funnel_level_at(m: usize, params: &FunnelParams, k: usize) -> (usize, usize, bool) {
    let mut offset = 0usize;
    let mut prev = 0usize;
    for i in 0..params.levels - 1 {
        let len = if i == 0 {
            (m as f64 * params.shrink) as usize
        } else {
            ((prev as f64 * params.shrink) as usize).max(1)
        };
        if i == k {
            return (offset, len, false);
        }
        offset += len;
        prev = len;
    }
    (offset, m.saturating_sub(offset), true)
}

/// Starts a probe sequence, returning the initial state and the home slot.
///
/// Funnel layouts must have been validated (the table does this at
/// construction); an invalid layout panics here.
pub fn probe_start(kind: &StrategyKind, hashes: HashPair, m: usize) -> (ProbeState, usize) {
    debug_assert!(m >= 1);
    let (home, step_d) = match kind {
        StrategyKind::Random | StrategyKind::Bathroom(_) => {
            ((hashes.h1 % m as u64) as usize, base_step(hashes.h2, m))
        }
        StrategyKind::Elastic(_) => ((hashes.h1 % m as u64) as usize, 1),
        StrategyKind::Funnel(p) => {
            let (offset, len, _) = funnel_level_at(m, p, 0);
            assert!(len >= 1 && offset + len <= m, "funnel layout not validated");
            (
                offset + (hashes.h1 % len as u64) as usize,
                base_step(hashes.h2, len),
            )
        }
    };
    let state = ProbeState {
        hashes,
        current_slot: home,
        step_d,
        consec_c: 0,
        probes_made: 0,
        level: 0,
        level_probes: 1,
    };
    (state, home)
}

/// Advances a probe sequence by one slot.
///
/// `obs` describes the slot most recently returned. The call consuming the
/// `m`-th observation returns `Exhausted` instead of a slot, so a sequence
/// produces at most `m` slots including the home; calling again after that is
/// a contract violation.
pub fn probe_next(
    kind: &StrategyKind,
    state: &mut ProbeState,
    obs: Observation,
    m: usize,
) -> Result<StepResult, Error> {
    if state.probes_made >= m {
        return Err(Error::ContractViolation("probe_next called after Exhausted"));
    }
    state.probes_made += 1;
    if state.probes_made == m {
        return Ok(StepResult::Exhausted);
    }
    let next = match kind {
        StrategyKind::Random => (state.current_slot + state.step_d) % m,
        StrategyKind::Bathroom(p) => {
            let (d, c) = update_step(state.step_d, state.consec_c, obs, p, m);
            state.step_d = d;
            state.consec_c = c;
            (state.current_slot + state.step_d) % m
        }
        StrategyKind::Elastic(p) => {
            // 1-based index of the slot being produced.
            let idx = state.probes_made + 1;
            let step = match elastic_region(idx, p) {
                Region::A => 1,
                Region::B => base_step(state.hashes.h2, m),
                Region::C => {
                    let s = ((idx as u64 * idx as u64) % m as u64) as usize;
                    if s == 0 {
                        1
                    } else {
                        s
                    }
                }
            };
            state.step_d = step;
            (state.current_slot + step) % m
        }
        StrategyKind::Funnel(p) => {
            let last = p.levels - 1;
            let (offset, len, is_final) = funnel_level_at(m, p, state.level);
            let attempts = if is_final { len } else { len.min(p.budget_beta) };
            if state.level_probes >= attempts {
                if is_final {
                    // Whole funnel spent before the m-observation budget;
                    // report early so the table starts its sweep.
                    state.probes_made = m;
                    return Ok(StepResult::Exhausted);
                }
                state.level += 1;
                let (noff, nlen, _) = funnel_level_at(m, p, state.level.min(last));
                state.level_probes = 1;
                state.step_d = base_step(state.hashes.h2, nlen);
                noff + (state.hashes.h1 % nlen as u64) as usize
            } else {
                state.level_probes += 1;
                let step = if is_final { 1 } else { state.step_d };
                offset + (state.current_slot - offset + step) % len
            }
        }
    };
    state.current_slot = next;
    Ok(StepResult::NextSlot(next))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hash::derive_hashes;

    /// Drives a sequence with a constant observation until exhaustion,
    /// returning every produced slot including the home.
    fn collect_slots(kind: &StrategyKind, hashes: HashPair, m: usize, obs: Observation) -> Vec<usize> {
        let (mut state, home) = probe_start(kind, hashes, m);
        let mut slots = vec![home];
        loop {
            match probe_next(kind, &mut state, obs, m).unwrap() {
                StepResult::NextSlot(i) => slots.push(i),
                StepResult::Exhausted => return slots,
            }
        }
    }

    #[test]
    fn probe_start_home_and_step() {
        let kind = StrategyKind::Random;
        let (state, home) = probe_start(&kind, HashPair { h1: 31, h2: 28 }, 13);
        assert_eq!(home, 5); // 31 mod 13
        assert_eq!(state.step_d, 5); // 1 + (28 mod 12)
        assert_eq!(state.probes_made, 0);
        assert_eq!(state.consec_c, 0);
    }

    #[test]
    fn bathroom_hand_trace() {
        // m=13, home=5, d0=3, theta=2, delta=1, all slots occupied:
        // 5 -> 8 (c=1) -> step grows to 4 after the second occupied -> 12 -> 3.
        let kind = StrategyKind::Bathroom(AdaptiveParams {
            theta: 2,
            delta: 1,
            growth: Growth::Additive,
        });
        let hashes = HashPair { h1: 5, h2: 2 }; // d0 = 1 + (2 mod 12) = 3
        let slots = collect_slots(&kind, hashes, 13, Observation::OccupiedOther);
        assert_eq!(&slots[..4], &[5, 8, 12, 3]);
        assert_eq!(slots.len(), 13);
    }

    #[test]
    fn bathroom_with_unreachable_threshold_matches_random() {
        for key in 0..1000u64 {
            let hashes = derive_hashes(key, 7);
            let m = 101;
            let random = collect_slots(&StrategyKind::Random, hashes, m, Observation::OccupiedOther);
            let bathroom = collect_slots(
                &StrategyKind::Bathroom(AdaptiveParams {
                    theta: m + 1,
                    delta: 1,
                    growth: Growth::Additive,
                }),
                hashes,
                m,
                Observation::OccupiedOther,
            );
            assert_eq!(random, bathroom);
        }
    }

    #[test]
    fn adaptive_update_examples() {
        let params = AdaptiveParams {
            theta: 2,
            delta: 1,
            growth: Growth::Additive,
        };
        let m = 13;
        let (mut state, _) = probe_start(&StrategyKind::Bathroom(params), HashPair { h1: 0, h2: 1 }, m);

        state.step_d = 3;
        state.consec_c = 1;
        let updated = adaptive_update(state, Observation::OccupiedOther, &params, m);
        assert_eq!((updated.step_d, updated.consec_c), (4, 0));

        let shrunk = adaptive_update(updated, Observation::EmptySeen, &params, m);
        assert_eq!((shrunk.step_d, shrunk.consec_c), (3, 0));

        state.step_d = 1;
        state.consec_c = 0;
        let clamped = adaptive_update(state, Observation::EmptySeen, &params, m);
        assert_eq!((clamped.step_d, clamped.consec_c), (1, 0));
    }

    #[test]
    fn tombstone_and_occupied_adapt_identically() {
        let params = AdaptiveParams::default();
        for d in 1..12 {
            for c in 0..3 {
                assert_eq!(
                    update_step(d, c, Observation::OccupiedOther, &params, 13),
                    update_step(d, c, Observation::TombstoneSeen, &params, 13)
                );
            }
        }
    }

    #[test]
    fn elastic_region_boundaries() {
        let p = ElasticParams { t1: 4, t2: 16 };
        assert_eq!(elastic_region(1, &p), Region::A);
        assert_eq!(elastic_region(4, &p), Region::A);
        assert_eq!(elastic_region(5, &p), Region::B);
        assert_eq!(elastic_region(16, &p), Region::B);
        assert_eq!(elastic_region(17, &p), Region::C);
    }

    #[test]
    fn elastic_trace_follows_regions() {
        let p = ElasticParams { t1: 4, t2: 16 };
        let kind = StrategyKind::Elastic(p);
        let m = 101;
        let hashes = HashPair { h1: 10, h2: 6 }; // home 10, d0 = 7
        let slots = collect_slots(&kind, hashes, m, Observation::OccupiedOther);
        // Indices 1-4: step 1 from the home.
        assert_eq!(&slots[..4], &[10, 11, 12, 13]);
        // Index 5 jumps by d0.
        assert_eq!(slots[4], 20);
        // Indices 6..=16 keep stepping by d0.
        for i in 5..16 {
            assert_eq!(slots[i], (slots[i - 1] + 7) % m);
        }
        // Index 17 onward: quadratic offsets idx^2 mod m.
        assert_eq!(slots[16], (slots[15] + 17 * 17 % m) % m);
        assert_eq!(slots[17], (slots[16] + 18 * 18 % m) % m);
    }

    #[test]
    fn funnel_levels_examples() {
        let layout = funnel_levels(
            100,
            &FunnelParams {
                levels: 3,
                shrink: 0.5,
                budget_beta: 4,
            },
        )
        .unwrap();
        assert_eq!(layout, vec![(0, 50), (50, 25), (75, 25)]);

        let layout = funnel_levels(
            7,
            &FunnelParams {
                levels: 2,
                shrink: 0.5,
                budget_beta: 4,
            },
        )
        .unwrap();
        assert_eq!(layout, vec![(0, 3), (3, 4)]);
    }

    #[test]
    fn funnel_rejects_empty_levels() {
        // Level 0 would be floor(7 * 0.1) = 0.
        assert!(funnel_levels(
            7,
            &FunnelParams {
                levels: 2,
                shrink: 0.1,
                budget_beta: 1,
            }
        )
        .is_err());
        // Intermediate levels eat the whole table, final level empty.
        assert!(funnel_levels(
            2,
            &FunnelParams {
                levels: 3,
                shrink: 0.5,
                budget_beta: 1,
            }
        )
        .is_err());
    }

    #[test]
    fn funnel_home_confined_to_level_zero() {
        let p = FunnelParams {
            levels: 3,
            shrink: 0.5,
            budget_beta: 4,
        };
        let kind = StrategyKind::Funnel(p);
        for key in 0..500u64 {
            let (_, home) = probe_start(&kind, derive_hashes(key, 3), 100);
            assert!(home < 50, "home {home} outside level 0");
        }
    }

    #[test]
    fn funnel_walk_respects_levels_then_exhausts() {
        let p = FunnelParams {
            levels: 3,
            shrink: 0.5,
            budget_beta: 4,
        };
        let kind = StrategyKind::Funnel(p);
        let m = 101; // levels (0,50) (50,25) (75,26)
        let hashes = derive_hashes(12345, 9);
        let slots = collect_slots(&kind, hashes, m, Observation::OccupiedOther);
        assert!(slots[..4].iter().all(|&s| s < 50));
        assert!(slots[4..8].iter().all(|&s| (50..75).contains(&s)));
        assert!(slots[8..].iter().all(|&s| (75..101).contains(&s)));
        // 4 + 4 + full 26-slot scan of the final level.
        assert_eq!(slots.len(), 34);
        // The final level is covered exactly once.
        let mut tail: Vec<usize> = slots[8..].to_vec();
        tail.sort_unstable();
        tail.dedup();
        assert_eq!(tail.len(), 26);
    }

    #[test]
    fn probe_next_after_exhaustion_is_an_error() {
        let kind = StrategyKind::Random;
        let m = 7;
        let (mut state, _) = probe_start(&kind, HashPair { h1: 1, h2: 1 }, m);
        loop {
            match probe_next(&kind, &mut state, Observation::OccupiedOther, m).unwrap() {
                StepResult::NextSlot(_) => {}
                StepResult::Exhausted => break,
            }
        }
        assert!(matches!(
            probe_next(&kind, &mut state, Observation::OccupiedOther, m),
            Err(Error::ContractViolation(_))
        ));
    }

    #[test]
    fn random_first_m_slots_form_permutation_small() {
        for m in [7usize, 101] {
            for home in 0..m {
                for d0 in 1..m {
                    let hashes = HashPair {
                        h1: home as u64,
                        h2: (d0 - 1) as u64,
                    };
                    let slots =
                        collect_slots(&StrategyKind::Random, hashes, m, Observation::OccupiedOther);
                    assert_eq!(slots.len(), m);
                    let mut seen = vec![false; m];
                    for &s in &slots {
                        assert!(!seen[s], "m={m} home={home} d0={d0} revisited slot {s}");
                        seen[s] = true;
                    }
                }
            }
        }
    }

    #[test]
    fn metadata_bytes_per_strategy() {
        assert_eq!(StrategyKind::Random.metadata_bytes(), 0);
        assert_eq!(StrategyKind::Bathroom(AdaptiveParams::default()).metadata_bytes(), 32);
        assert_eq!(StrategyKind::Elastic(ElasticParams::default()).metadata_bytes(), 24);
        let funnel = StrategyKind::Funnel(FunnelParams {
            levels: 3,
            shrink: 0.5,
            budget_beta: 4,
        });
        assert_eq!(funnel.metadata_bytes(), 64);
    }
}
