//! Runnable verification suites.
//!
//! Each suite checks one implementation path against an independent oracle —
//! a reference associative map, exhaustive enumeration, a from-scratch
//! reinterpretation of the walk rule, or a naive two-pass recomputation — and
//! returns a reproducer string (seed and parameters) on the first mismatch.
//! They back both the `verify` CLI subcommand and the acceptance tests.

use std::collections::HashMap;

use crate::metrics::{OpKind, Recorder};
use crate::sim::{simulate_search, Board, Cell, SearchPredicate};
use crate::sim_oracle::oracle_search;
use crate::strategy::{
    probe_next, probe_start, AdaptiveParams, ElasticParams, FunnelParams, Growth, Observation,
    StepResult, StrategyKind,
};
use crate::table::{DeleteOutcome, InsertOutcome, LookupOutcome, Table, TableConfig};
use crate::workload::{gen_unique_keys, SplitMix64};

fn default_strategies() -> [StrategyKind; 4] {
    [
        StrategyKind::Random,
        StrategyKind::Bathroom(AdaptiveParams::default()),
        StrategyKind::Elastic(ElasticParams::default()),
        StrategyKind::Funnel(FunnelParams::default()),
    ]
}

/// Differential test of the table against `std::collections::HashMap`:
/// randomized insert/lookup/delete streams per strategy, outcome-by-outcome.
///
/// Tombstones only ever accumulate, so once the empty pool is nearly drained
/// the table is rebuilt (a rehash cycle) to keep the stream exercising every
/// load regime instead of degenerating into full-table walks.
pub fn oracle_equivalence(seed: u64, ops_per_strategy: usize) -> Result<(), String> {
    let capacity = 509;
    let key_universe = 700u64;
    for strategy in default_strategies() {
        let mut table = Table::new(TableConfig {
            capacity_m: capacity,
            strategy,
            hash_seed: seed,
        })
        .map_err(|e| format!("suite=oracle strategy={} seed={seed}: {e}", strategy.name()))?;
        let mut reference: HashMap<u64, u64> = HashMap::new();
        let mut rng = SplitMix64::new(seed ^ 0xA5A5_5A5A_A5A5_5A5A);
        let fail = |op: usize, what: String| {
            Err(format!(
                "suite=oracle strategy={} seed={seed} op#{op}: {what}",
                strategy.name()
            ))
        };
        for op in 0..ops_per_strategy {
            if op % 1024 == 0 {
                let (occ, tomb, empty) = table.recount();
                if occ != table.occupied_count() || tomb != table.tombstone_count() {
                    return fail(
                        op,
                        format!(
                            "counters drifted: counted ({occ}, {tomb}), tracked ({}, {})",
                            table.occupied_count(),
                            table.tombstone_count()
                        ),
                    );
                }
                if occ != reference.len() {
                    return fail(op, format!("live keys {occ}, reference {}", reference.len()));
                }
                if empty < capacity / 10 {
                    table = Table::new(TableConfig {
                        capacity_m: capacity,
                        strategy,
                        hash_seed: seed,
                    })
                    .unwrap();
                    let mut pairs: Vec<(u64, u64)> =
                        reference.iter().map(|(&k, &v)| (k, v)).collect();
                    pairs.sort_unstable();
                    for (k, v) in pairs {
                        if !matches!(table.insert(k, v), InsertOutcome::Inserted { .. }) {
                            return fail(op, format!("rebuild failed to reinsert key {k}"));
                        }
                    }
                }
            }
            let roll = rng.next_u64() % 100;
            let key = rng.next_u64() % key_universe;
            if roll < 45 {
                let value = rng.next_u64();
                match table.insert(key, value) {
                    InsertOutcome::Inserted { probes } => {
                        if probes > 2 * capacity {
                            return fail(op, format!("insert probes {probes} over budget"));
                        }
                        if reference.insert(key, value).is_some() {
                            return fail(op, format!("Inserted but key {key} was present"));
                        }
                    }
                    InsertOutcome::Updated { probes } => {
                        if probes > 2 * capacity {
                            return fail(op, format!("update probes {probes} over budget"));
                        }
                        if reference.insert(key, value).is_none() {
                            return fail(op, format!("Updated but key {key} was absent"));
                        }
                    }
                    InsertOutcome::TableFull => {
                        if reference.contains_key(&key) {
                            return fail(op, format!("TableFull for present key {key}"));
                        }
                        if table.occupied_count() + table.tombstone_count() != capacity {
                            return fail(op, "TableFull with empty slots remaining".into());
                        }
                    }
                }
            } else if roll < 80 {
                match (table.lookup(key), reference.get(&key)) {
                    (LookupOutcome::Found { value, probes }, Some(&want)) => {
                        if value != want {
                            return fail(op, format!("lookup({key}) = {value}, want {want}"));
                        }
                        if probes > 2 * capacity {
                            return fail(op, format!("lookup probes {probes} over budget"));
                        }
                    }
                    (LookupOutcome::Absent { .. }, None) => {}
                    (got, want) => {
                        return fail(op, format!("lookup({key}) = {got:?}, reference has {want:?}"))
                    }
                }
            } else {
                match (table.delete(key), reference.remove(&key)) {
                    (DeleteOutcome::Deleted { .. }, Some(_)) => {}
                    (DeleteOutcome::NotFound { .. }, None) => {}
                    (got, want) => {
                        return fail(op, format!("delete({key}) = {got:?}, reference had {want:?}"))
                    }
                }
            }
        }
        for key in 0..key_universe {
            let got = table.lookup(key);
            match (got, reference.get(&key)) {
                (LookupOutcome::Found { value, .. }, Some(&want)) if value == want => {}
                (LookupOutcome::Absent { .. }, None) => {}
                (got, want) => {
                    return fail(
                        ops_per_strategy,
                        format!("final sweep: lookup({key}) = {got:?}, reference {want:?}"),
                    )
                }
            }
        }
    }
    Ok(())
}

fn first_m_slots(kind: &StrategyKind, h1: u64, h2: u64, m: usize) -> Vec<usize> {
    let (mut state, home) = probe_start(kind, crate::hash::HashPair { h1, h2 }, m);
    let mut slots = vec![home];
    loop {
        match probe_next(kind, &mut state, Observation::OccupiedOther, m).unwrap() {
            StepResult::NextSlot(i) => slots.push(i),
            StepResult::Exhausted => return slots,
        }
    }
}

/// The random strategy's first `m` probes must be a permutation of the table:
/// exhaustive over all (home, d0) for m in {7, 101}, sampled for m = 10007.
pub fn permutation_coverage(seed: u64) -> Result<(), String> {
    for m in [7usize, 101] {
        for home in 0..m {
            for d0 in 1..m {
                let slots = first_m_slots(&StrategyKind::Random, home as u64, (d0 - 1) as u64, m);
                let mut seen = vec![false; m];
                for &s in &slots {
                    if seen[s] {
                        return Err(format!(
                            "suite=permutation m={m} home={home} d0={d0}: slot {s} revisited"
                        ));
                    }
                    seen[s] = true;
                }
                if slots.len() != m {
                    return Err(format!(
                        "suite=permutation m={m} home={home} d0={d0}: {} slots produced",
                        slots.len()
                    ));
                }
            }
        }
    }
    let m = 10_007;
    let mut rng = SplitMix64::new(seed);
    for i in 0..1000 {
        let key = rng.next_u64();
        let hashes = crate::hash::derive_hashes(key, seed);
        let slots = first_m_slots(&StrategyKind::Random, hashes.h1, hashes.h2, m);
        let mut seen = vec![false; m];
        for &s in &slots {
            if seen[s] {
                return Err(format!(
                    "suite=permutation m={m} seed={seed} sample#{i} key={key}: slot {s} revisited"
                ));
            }
            seen[s] = true;
        }
    }
    Ok(())
}

/// With an unreachable threshold the adaptive strategy must degenerate to
/// plain double hashing: trace-identical tables at 70% load.
pub fn reduction_equivalence(seed: u64) -> Result<(), String> {
    let m = 10_007;
    let n = (0.7 * m as f64) as usize;
    let bathroom = StrategyKind::Bathroom(AdaptiveParams {
        theta: m + 1,
        delta: 1,
        growth: Growth::Additive,
    });
    let mut random_table = Table::new(TableConfig {
        capacity_m: m,
        strategy: StrategyKind::Random,
        hash_seed: seed,
    })
    .unwrap();
    let mut bathroom_table = Table::new(TableConfig {
        capacity_m: m,
        strategy: bathroom,
        hash_seed: seed,
    })
    .unwrap();
    let keys = gen_unique_keys(n, seed);
    for &k in &keys {
        let a = random_table.insert(k, k);
        let b = bathroom_table.insert(k, k);
        if a != b {
            return Err(format!(
                "suite=reduction seed={seed} key={k}: insert outcomes differ ({a:?} vs {b:?})"
            ));
        }
    }
    let mut rng = SplitMix64::new(seed ^ 1);
    for i in 0..1000 {
        // Half present keys, half random (almost surely absent).
        let key = if i % 2 == 0 {
            keys[(rng.next_u64() % keys.len() as u64) as usize]
        } else {
            rng.next_u64()
        };
        let a = random_table.probe_trace(key);
        let b = bathroom_table.probe_trace(key);
        if a != b {
            return Err(format!(
                "suite=reduction seed={seed} key={key}: traces diverge at probe {}",
                a.slots_visited
                    .iter()
                    .zip(&b.slots_visited)
                    .position(|(x, y)| x != y)
                    .unwrap_or(a.slots_visited.len().min(b.slots_visited.len()))
            ));
        }
    }
    Ok(())
}

/// Differential equality of `simulate_search` and `oracle_search`:
/// exhaustive over all boards up to `max_exhaustive_n` cells (every occupancy
/// pattern, start, theta in {1,2}, delta 1, d0 in {1,2,3}), then randomized
/// boards at n = 101.
pub fn sim_differential(seed: u64, max_exhaustive_n: usize, random_boards: usize) -> Result<(), String> {
    for n in 1..=max_exhaustive_n {
        for pattern in 0..(1u32 << n) {
            let cells: Vec<Cell> = (0..n)
                .map(|i| {
                    if pattern >> i & 1 == 1 {
                        Cell::Taken(i as u64)
                    } else {
                        Cell::Vacant
                    }
                })
                .collect();
            let board = Board::new(cells);
            let predicates = [
                SearchPredicate::FindVacant,
                SearchPredicate::FindId(n as u64 / 2),
                SearchPredicate::FindId(u64::MAX),
            ];
            for start in 0..n {
                for theta in [1usize, 2] {
                    for d0 in 1..=3usize.min((n - 1).max(1)) {
                        for predicate in predicates {
                            let params = AdaptiveParams {
                                theta,
                                delta: 1,
                                growth: Growth::Additive,
                            };
                            let a = simulate_search(&board, start, d0, predicate, &params);
                            let b = oracle_search(&board, start, d0, predicate, &params);
                            if a != b {
                                return Err(format!(
                                    "suite=sim n={n} pattern={pattern:#b} start={start} theta={theta} d0={d0} predicate={predicate:?}: {a:?} != {b:?}"
                                ));
                            }
                        }
                    }
                }
            }
        }
    }

    let n = 101;
    let mut rng = SplitMix64::new(seed);
    for i in 0..random_boards {
        let occupancy = (rng.next_u64() % 1001) as f64 / 1000.0;
        let board = Board::random(n, occupancy, &mut rng);
        let start = (rng.next_u64() % n as u64) as usize;
        let d0 = 1 + (rng.next_u64() % (n as u64 - 1)) as usize;
        let params = AdaptiveParams {
            theta: 1 + (rng.next_u64() % 4) as usize,
            delta: 1 + (rng.next_u64() % 3) as usize,
            growth: if rng.next_u64() % 2 == 0 {
                Growth::Additive
            } else {
                Growth::Multiplicative
            },
        };
        let predicate = match rng.next_u64() % 3 {
            0 => SearchPredicate::FindVacant,
            1 => {
                // Target an id actually on the board when one exists.
                let present = (0..n).find_map(|i| match board.cell(i) {
                    Cell::Taken(id) => Some(id),
                    Cell::Vacant => None,
                });
                SearchPredicate::FindId(present.unwrap_or(u64::MAX))
            }
            _ => SearchPredicate::FindId(u64::MAX),
        };
        let a = simulate_search(&board, start, d0, predicate, &params);
        let b = oracle_search(&board, start, d0, predicate, &params);
        if a != b {
            return Err(format!(
                "suite=sim seed={seed} random#{i} n={n} start={start} d0={d0} params={params:?} predicate={predicate:?}: mismatch"
            ));
        }
    }
    Ok(())
}

/// Streaming statistics against a naive two-pass recomputation, plus
/// merge-equals-concatenation, on a random sample stream.
pub fn metrics_oracle(seed: u64, samples: usize) -> Result<(), String> {
    let mut rng = SplitMix64::new(seed);
    let mut recorder = Recorder::new();
    let mut left = Recorder::new();
    let mut right = Recorder::new();
    let mut values: Vec<u64> = Vec::with_capacity(samples);
    let split = samples / 3;
    for i in 0..samples {
        let v = 1 + rng.next_u64() % 1000;
        values.push(v);
        recorder.record(OpKind::LookupHit, v);
        if i < split {
            left.record(OpKind::LookupHit, v);
        } else {
            right.record(OpKind::LookupHit, v);
        }
    }

    // Two-pass oracle over f64 accumulation (a different arithmetic route
    // from the integer-sum streaming path).
    let n = values.len() as f64;
    let naive_mean = values.iter().map(|&v| v as f64).sum::<f64>() / n;
    let naive_var = values
        .iter()
        .map(|&v| {
            let d = v as f64 - naive_mean;
            d * d
        })
        .sum::<f64>()
        / n;
    let naive_stddev = naive_var.sqrt();
    let mut sorted = values.clone();
    sorted.sort_unstable();
    let rank = ((0.99 * n).ceil() as usize).max(1);
    let naive_p99 = sorted[rank - 1];
    let naive_max = *sorted.last().unwrap();

    let s = recorder.summarize(OpKind::LookupHit);
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1.0);
    if rel(s.mean, naive_mean) > 1e-9 {
        return Err(format!(
            "suite=metrics seed={seed}: mean {} vs naive {naive_mean}",
            s.mean
        ));
    }
    if rel(s.stddev, naive_stddev) > 1e-9 {
        return Err(format!(
            "suite=metrics seed={seed}: stddev {} vs naive {naive_stddev}",
            s.stddev
        ));
    }
    if s.p99 != naive_p99 {
        return Err(format!(
            "suite=metrics seed={seed}: p99 {} vs naive {naive_p99}",
            s.p99
        ));
    }
    if s.max != naive_max {
        return Err(format!(
            "suite=metrics seed={seed}: max {} vs naive {naive_max}",
            s.max
        ));
    }
    if left.merge(&right) != recorder {
        return Err(format!(
            "suite=metrics seed={seed}: merge of split streams differs from concatenation"
        ));
    }
    Ok(())
}
