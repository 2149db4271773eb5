//! Fixed-capacity open-addressing hash table with pluggable probing.
//!
//! The table owns a prime-sized slot array and drives one of the probe
//! strategies through the feedback-iterator contract: every operation walks
//! the strategy phase (at most `m` observed slots) and, if that budget is
//! spent, a deterministic linear sweep from `home + 1` over the whole table.
//! The sweep restores completeness for strategies whose adaptive step
//! sequence is not a permutation.
//!
//! Deletion leaves tombstones. Tombstones count as occupied for probing and
//! adaptation and never terminate a search; that is what keeps lookup paths
//! identical to the insert paths that placed each key (non-empty slots never
//! become empty, so the observation stream a key's path adapts on is stable).
//! There is no automatic resize: experiments hold the table and vary load,
//! and a rehash is a rebuild into a fresh table.

use crate::error::Error;
use crate::hash::{derive_hashes, HashPair};
use crate::prime::is_prime;
use crate::strategy::{probe_next, probe_start, Observation, ProbeState, StepResult, StrategyKind};

/// Bytes charged per slot by the memory-accounting contract
/// (8 key + 8 value + 1 state tag), independent of the physical layout.
pub const SLOT_RECORD_BYTES: usize = 17;

/// Construction parameters of a table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableConfig {
    /// Slot count; must be prime and at least 2.
    pub capacity_m: usize,
    pub strategy: StrategyKind,
    pub hash_seed: u64,
}

/// One slot of the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotState {
    Empty,
    Occupied { key: u64, value: u64 },
    Tombstone,
}

/// Result of an insert.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsertOutcome {
    Inserted { probes: usize },
    Updated { probes: usize },
    /// No empty slot anywhere and the key is absent. An outcome, not a fault.
    TableFull,
}

/// Result of a lookup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LookupOutcome {
    Found { value: u64, probes: usize },
    Absent { probes: usize },
}

/// Result of a delete.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeleteOutcome {
    Deleted { probes: usize },
    NotFound { probes: usize },
}

/// Every slot index a lookup for a key would observe, in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeTrace {
    pub slots_visited: Vec<usize>,
    /// Index within `slots_visited` where the fallback sweep began, if it did.
    pub phase_boundary: Option<usize>,
}

/// Open-addressing hash table. Single-owner; see the module docs.
#[derive(Debug, Clone)]
pub struct Table {
    config: TableConfig,
    slots: Vec<SlotState>,
    occupied_count: usize,
    tombstone_count: usize,
}

/// Drives one probe path: strategy phase first, then the fallback sweep.
struct PathCursor<'a> {
    kind: &'a StrategyKind,
    state: ProbeState,
    m: usize,
    home: usize,
    sweep_next: usize,
    sweep_left: usize,
    in_sweep: bool,
    emitted: usize,
    boundary: Option<usize>,
}

impl<'a> PathCursor<'a> {
    fn start(kind: &'a StrategyKind, hashes: HashPair, m: usize) -> (Self, usize) {
        let (state, home) = probe_start(kind, hashes, m);
        (
            PathCursor {
                kind,
                state,
                m,
                home,
                sweep_next: 0,
                sweep_left: 0,
                in_sweep: false,
                emitted: 1,
                boundary: None,
            },
            home,
        )
    }

    fn advance(&mut self, obs: Observation) -> Option<usize> {
        if self.in_sweep {
            return self.next_sweep_slot();
        }
        match probe_next(self.kind, &mut self.state, obs, self.m)
            .expect("cursor stops advancing once the path is exhausted")
        {
            StepResult::NextSlot(i) => {
                self.emitted += 1;
                Some(i)
            }
            StepResult::Exhausted => {
                self.in_sweep = true;
                self.boundary = Some(self.emitted);
                self.sweep_next = (self.home + 1) % self.m;
                self.sweep_left = self.m;
                self.next_sweep_slot()
            }
        }
    }

    fn next_sweep_slot(&mut self) -> Option<usize> {
        if self.sweep_left == 0 {
            return None;
        }
        let i = self.sweep_next;
        self.sweep_next = (i + 1) % self.m;
        self.sweep_left -= 1;
        self.emitted += 1;
        Some(i)
    }
}

enum WalkEnd {
    Matched { slot: usize },
    EmptyReached { slot: usize },
    Exhausted,
}

struct WalkResult {
    end: WalkEnd,
    probes: usize,
    first_tombstone: Option<usize>,
    boundary: Option<usize>,
}

impl Table {
    /// Builds an empty table. Errors with `NonPrimeCapacity` if the capacity
    /// fails trial division, `InvalidParams` if the strategy parameters are
    /// unusable (including a funnel layout that does not fit the capacity).
    pub fn new(config: TableConfig) -> Result<Table, Error> {
        if config.capacity_m < 2 || !is_prime(config.capacity_m) {
            return Err(Error::NonPrimeCapacity(config.capacity_m));
        }
        config.strategy.validate(config.capacity_m)?;
        Ok(Table {
            slots: vec![SlotState::Empty; config.capacity_m],
            config,
            occupied_count: 0,
            tombstone_count: 0,
        })
    }

    pub fn config(&self) -> &TableConfig {
        &self.config
    }

    pub fn capacity(&self) -> usize {
        self.config.capacity_m
    }

    pub fn occupied_count(&self) -> usize {
        self.occupied_count
    }

    pub fn tombstone_count(&self) -> usize {
        self.tombstone_count
    }

    /// Occupied slots over capacity, in `[0, 1]`.
    pub fn load_factor(&self) -> f64 {
        self.occupied_count as f64 / self.config.capacity_m as f64
    }

    /// Recounts slot states directly: `(occupied, tombstones, empty)`.
    pub fn recount(&self) -> (usize, usize, usize) {
        let mut occ = 0;
        let mut tomb = 0;
        let mut empty = 0;
        for slot in &self.slots {
            match slot {
                SlotState::Occupied { .. } => occ += 1,
                SlotState::Tombstone => tomb += 1,
                SlotState::Empty => empty += 1,
            }
        }
        (occ, tomb, empty)
    }

    /// Documented accounting value, not a physical-memory probe:
    /// `capacity * SLOT_RECORD_BYTES + strategy metadata`.
    pub fn memory_footprint(&self) -> usize {
        self.config.capacity_m * SLOT_RECORD_BYTES + self.config.strategy.metadata_bytes()
    }

    /// Walks the probe path for `key` until a match, an empty slot, or full
    /// exhaustion (strategy budget plus sweep). Shared by every operation so
    /// that paths are identical by construction.
    fn walk_path(&self, key: u64, mut trace: Option<&mut Vec<usize>>) -> WalkResult {
        let m = self.config.capacity_m;
        let hashes = derive_hashes(key, self.config.hash_seed);
        let (mut cursor, mut idx) = PathCursor::start(&self.config.strategy, hashes, m);
        let mut probes = 0usize;
        let mut first_tombstone = None;
        loop {
            probes += 1;
            if let Some(t) = trace.as_deref_mut() {
                t.push(idx);
            }
            let obs = match self.slots[idx] {
                SlotState::Occupied { key: k, .. } if k == key => {
                    assert!(probes <= 2 * m);
                    return WalkResult {
                        end: WalkEnd::Matched { slot: idx },
                        probes,
                        first_tombstone,
                        boundary: cursor.boundary,
                    };
                }
                SlotState::Empty => {
                    assert!(probes <= 2 * m);
                    return WalkResult {
                        end: WalkEnd::EmptyReached { slot: idx },
                        probes,
                        first_tombstone,
                        boundary: cursor.boundary,
                    };
                }
                SlotState::Occupied { .. } => Observation::OccupiedOther,
                SlotState::Tombstone => {
                    if first_tombstone.is_none() {
                        first_tombstone = Some(idx);
                    }
                    Observation::TombstoneSeen
                }
            };
            match cursor.advance(obs) {
                Some(next) => idx = next,
                None => {
                    assert!(probes <= 2 * m);
                    return WalkResult {
                        end: WalkEnd::Exhausted,
                        probes,
                        first_tombstone,
                        boundary: cursor.boundary,
                    };
                }
            }
        }
    }

    /// Inserts or updates a key.
    ///
    /// A new key goes to the first empty slot on its probe path, or to the
    /// first tombstone seen on the path once an empty slot has confirmed the
    /// key absent. With no empty slot anywhere and the key absent the table
    /// is full.
    pub fn insert(&mut self, key: u64, value: u64) -> InsertOutcome {
        let walk = self.walk_path(key, None);
        match walk.end {
            WalkEnd::Matched { slot } => {
                if let SlotState::Occupied { value: v, .. } = &mut self.slots[slot] {
                    *v = value;
                }
                InsertOutcome::Updated { probes: walk.probes }
            }
            WalkEnd::EmptyReached { slot } => {
                let target = match walk.first_tombstone {
                    Some(t) => {
                        self.tombstone_count -= 1;
                        t
                    }
                    None => slot,
                };
                self.slots[target] = SlotState::Occupied { key, value };
                self.occupied_count += 1;
                InsertOutcome::Inserted { probes: walk.probes }
            }
            WalkEnd::Exhausted => {
                debug_assert_eq!(
                    self.occupied_count + self.tombstone_count,
                    self.config.capacity_m
                );
                InsertOutcome::TableFull
            }
        }
    }

    /// Looks a key up, following the identical observation-driven path insert
    /// took. Tombstones do not terminate the search.
    pub fn lookup(&self, key: u64) -> LookupOutcome {
        let walk = self.walk_path(key, None);
        match walk.end {
            WalkEnd::Matched { slot } => match self.slots[slot] {
                SlotState::Occupied { value, .. } => LookupOutcome::Found {
                    value,
                    probes: walk.probes,
                },
                _ => unreachable!("matched slot is occupied"),
            },
            WalkEnd::EmptyReached { .. } | WalkEnd::Exhausted => {
                LookupOutcome::Absent { probes: walk.probes }
            }
        }
    }

    /// Replaces the key's slot with a tombstone.
    pub fn delete(&mut self, key: u64) -> DeleteOutcome {
        let walk = self.walk_path(key, None);
        match walk.end {
            WalkEnd::Matched { slot } => {
                self.slots[slot] = SlotState::Tombstone;
                self.occupied_count -= 1;
                self.tombstone_count += 1;
                DeleteOutcome::Deleted { probes: walk.probes }
            }
            _ => DeleteOutcome::NotFound { probes: walk.probes },
        }
    }

    /// Replays the lookup path for a key without mutating the table.
    pub fn probe_trace(&self, key: u64) -> ProbeTrace {
        let mut slots = Vec::new();
        let walk = self.walk_path(key, Some(&mut slots));
        debug_assert_eq!(slots.len(), walk.probes);
        assert!(slots.len() <= 2 * self.config.capacity_m);
        ProbeTrace {
            slots_visited: slots,
            phase_boundary: walk.boundary,
        }
    }
}
