//! Open-addressing hash table with pluggable, observation-driven probe
//! strategies, plus the machinery to benchmark them reproducibly.
//!
//! The crate has five parts:
//!
//! * [`table`] — a fixed-capacity, prime-sized table with insert / lookup /
//!   delete, tombstone deletion, strict 2·m termination, and a documented
//!   memory-accounting contract.
//! * [`strategy`] — the probe-sequence generators behind one feedback
//!   iterator: plain double hashing, the adaptive step-size walk, and
//!   simplified elastic-region and funnel-level schemes.
//! * [`sim`] / [`sim_oracle`] — the stall-search simulator over an external
//!   occupancy board (both adaptation branches) and its independently written
//!   differential oracle.
//! * [`workload`] — seeded splitmix64 streams, prime sizing, and trial plans
//!   for load-factor sweeps.
//! * [`metrics`] / [`verify`] — probe-count aggregation and the runnable
//!   verification suites.
//!
//! Everything is deterministic in its seeds; nothing here does I/O.

pub mod error;
pub mod hash;
pub mod metrics;
pub mod prime;
pub mod sim;
pub mod sim_oracle;
pub mod strategy;
pub mod table;
pub mod verify;
pub mod workload;

pub use error::Error;
pub use hash::{derive_hashes, mix64, HashPair};
pub use metrics::{OpKind, Recorder, SummaryStats};
pub use sim::{occupancy_sweep, simulate_search, Board, Cell, SearchPredicate, SimResult};
pub use sim_oracle::oracle_search;
pub use strategy::{
    adaptive_update, elastic_region, funnel_levels, probe_next, probe_start, AdaptiveParams,
    ElasticParams, FunnelParams, Growth, Observation, ProbeState, Region, StepResult, StrategyKind,
};
pub use table::{
    DeleteOutcome, InsertOutcome, LookupOutcome, ProbeTrace, SlotState, Table, TableConfig,
    SLOT_RECORD_BYTES,
};
pub use workload::{build_trial, gen_unique_keys, SplitMix64, TrialMode, TrialPlan, TrialSpec};
