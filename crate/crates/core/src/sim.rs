//! Adaptive search over an externally given occupancy board.
//!
//! This is the stall-selection model in its literal form: a row of cells that
//! are vacant or taken, a walker that starts somewhere with a base step, and
//! the full two-branch adaptation rule — runs of taken cells grow the step,
//! vacancies shrink it. Unlike the live table, a board walk can continue
//! through vacancies (under [`SearchPredicate::FindId`]), which is the only
//! context where the decrease branch can fire at all.
//!
//! [`oracle_search`](crate::sim_oracle::oracle_search) is an independent
//! interpretation of the same rule used purely for differential testing.

use crate::error::Error;
use crate::strategy::{update_step, AdaptiveParams, Observation};
use crate::workload::SplitMix64;
use crate::hash::mix64;

/// One cell of the board.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    Vacant,
    Taken(u64),
}

/// The simulator's occupancy array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Board {
    cells: Vec<Cell>,
}

impl Board {
    /// Wraps a cell array. Boards are never empty.
    pub fn new(cells: Vec<Cell>) -> Board {
        assert!(!cells.is_empty(), "board must have at least one cell");
        Board { cells }
    }

    /// Seeded random board: each cell is independently taken with the given
    /// probability, carrying the draw itself as its id.
    pub fn random(n: usize, occupancy: f64, rng: &mut SplitMix64) -> Board {
        let cells = (0..n)
            .map(|_| {
                let draw = rng.next_u64();
                if (draw >> 11) as f64 / ((1u64 << 53) as f64) < occupancy {
                    Cell::Taken(draw)
                } else {
                    Cell::Vacant
                }
            })
            .collect();
        Board::new(cells)
    }

    pub fn size_n(&self) -> usize {
        self.cells.len()
    }

    pub fn cell(&self, i: usize) -> Cell {
        self.cells[i]
    }
}

/// What the walk is looking for.
///
/// `FindVacant` terminates on the first vacant cell. `FindId` continues
/// through vacant cells, exercising the decrease branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchPredicate {
    FindVacant,
    FindId(u64),
}

impl SearchPredicate {
    fn satisfied_by(self, cell: Cell) -> bool {
        match (self, cell) {
            (SearchPredicate::FindVacant, Cell::Vacant) => true,
            (SearchPredicate::FindId(want), Cell::Taken(id)) => id == want,
            _ => false,
        }
    }
}

/// Outcome of one board search, with the full probe trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimResult {
    pub found_index: Option<usize>,
    pub probes: usize,
    pub trace: Vec<usize>,
    pub fallback_used: bool,
}

/// Walks the board with the full adaptive rule: a budget of `size_n` adaptive
/// probes from `start` with base step `d0`, then a fallback sweep from
/// `start + 1`. Returns the first cell satisfying the predicate, or none.
pub fn simulate_search(
    board: &Board,
    start: usize,
    d0: usize,
    predicate: SearchPredicate,
    params: &AdaptiveParams,
) -> Result<SimResult, Error> {
    let n = board.size_n();
    if start >= n {
        return Err(Error::InvalidStart { start, size: n });
    }
    if d0 < 1 || d0 > (n - 1).max(1) {
        return Err(Error::InvalidParams(format!(
            "base step {d0} outside [1, {}]",
            (n - 1).max(1)
        )));
    }
    params.validate()?;

    let mut trace = Vec::new();
    let mut cur = start;
    let mut step = d0;
    let mut run = 0usize;
    for _ in 0..n {
        trace.push(cur);
        let cell = board.cell(cur);
        if predicate.satisfied_by(cell) {
            let probes = trace.len();
            return Ok(SimResult {
                found_index: Some(cur),
                probes,
                trace,
                fallback_used: false,
            });
        }
        let obs = match cell {
            Cell::Vacant => Observation::EmptySeen,
            Cell::Taken(_) => Observation::OccupiedOther,
        };
        let (d, c) = update_step(step, run, obs, params, n);
        step = d;
        run = c;
        cur = (cur + step) % n;
    }
    for offset in 1..=n {
        let idx = (start + offset) % n;
        trace.push(idx);
        if predicate.satisfied_by(board.cell(idx)) {
            let probes = trace.len();
            return Ok(SimResult {
                found_index: Some(idx),
                probes,
                trace,
                fallback_used: true,
            });
        }
    }
    let probes = trace.len();
    debug_assert_eq!(probes, 2 * n);
    Ok(SimResult {
        found_index: None,
        probes,
        trace,
        fallback_used: true,
    })
}

/// Inputs of an occupancy sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub n: usize,
    pub occupancies: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub params: AdaptiveParams,
}

/// Per-occupancy statistics over seeded random boards.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub occupancy: f64,
    pub trials: usize,
    pub mean_probes: f64,
    pub stddev_probes: f64,
    pub max_probes: usize,
    pub found_rate: f64,
}

/// Runs `trials` vacant-cell searches per occupancy fraction over seeded
/// random boards with random starts and base steps. Deterministic in the
/// seed; per-trial seeds are derived, so trial order does not matter.
pub fn occupancy_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>, Error> {
    if spec.n < 1 {
        return Err(Error::InvalidSpec("board size must be >= 1".into()));
    }
    if spec.trials < 1 {
        return Err(Error::InvalidSpec("trials must be >= 1".into()));
    }
    spec.params.validate()?;
    for &f in &spec.occupancies {
        if !(0.0..=1.0).contains(&f) {
            return Err(Error::InvalidSpec(format!(
                "occupancy fraction {f} outside [0, 1]"
            )));
        }
    }

    let mut rows = Vec::with_capacity(spec.occupancies.len());
    for (frac_idx, &occupancy) in spec.occupancies.iter().enumerate() {
        let mut count = 0u64;
        let mut sum = 0u64;
        let mut sum_sq = 0u128;
        let mut max = 0usize;
        let mut found = 0u64;
        for trial in 0..spec.trials {
            let trial_seed = spec.seed ^ mix64(trial as u64 ^ frac_idx as u64);
            let mut rng = SplitMix64::new(trial_seed);
            let board = Board::random(spec.n, occupancy, &mut rng);
            let start = (rng.next_u64() % spec.n as u64) as usize;
            let d0 = 1 + (rng.next_u64() % (spec.n - 1).max(1) as u64) as usize;
            let result = simulate_search(&board, start, d0, SearchPredicate::FindVacant, &spec.params)?;
            count += 1;
            sum += result.probes as u64;
            sum_sq += (result.probes as u128) * (result.probes as u128);
            max = max.max(result.probes);
            if result.found_index.is_some() {
                found += 1;
            }
        }
        let mean = sum as f64 / count as f64;
        let variance = (sum_sq as f64 / count as f64 - mean * mean).max(0.0);
        rows.push(SweepRow {
            n: spec.n,
            occupancy,
            trials: spec.trials,
            mean_probes: mean,
            stddev_probes: variance.sqrt(),
            max_probes: max,
            found_rate: found as f64 / count as f64,
        });
    }
    Ok(rows)
}
