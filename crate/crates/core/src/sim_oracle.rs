//! Naive step-by-step interpretation of the board-search rule, written
//! independently for differential testing. This file must not call into the
//! step helpers of `sim`/`strategy`; the whole rule is re-stated inline.

use crate::error::Error;
use crate::sim::{Board, Cell, SearchPredicate, SimResult};
use crate::strategy::{AdaptiveParams, Growth};

/// Reference interpretation of [`simulate_search`](crate::sim::simulate_search):
/// same inputs, same outputs, separate code.
pub fn oracle_search(
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
    let d_max = if n > 1 { n - 1 } else { 1 };
    if d0 < 1 || d0 > d_max {
        return Err(Error::InvalidParams(format!(
            "base step {d0} outside [1, {d_max}]"
        )));
    }
    if params.theta < 1 || params.delta < 1 {
        return Err(Error::InvalidParams("theta and delta must be >= 1".into()));
    }

    let wanted = |cell: Cell| -> bool {
        match predicate {
            SearchPredicate::FindVacant => matches!(cell, Cell::Vacant),
            SearchPredicate::FindId(want) => matches!(cell, Cell::Taken(id) if id == want),
        }
    };

    let mut visited: Vec<usize> = Vec::new();
    let mut pos = start;
    let mut step = d0;
    let mut streak = 0usize;

    let mut budget = n;
    while budget > 0 {
        budget -= 1;
        visited.push(pos);
        let cell = board.cell(pos);
        if wanted(cell) {
            return Ok(SimResult {
                found_index: Some(pos),
                probes: visited.len(),
                trace: visited,
                fallback_used: false,
            });
        }
        match cell {
            Cell::Vacant => {
                streak = 0;
                step = match params.growth {
                    Growth::Additive => {
                        if step > params.delta {
                            step - params.delta
                        } else {
                            1
                        }
                    }
                    Growth::Multiplicative => {
                        if step >= 2 {
                            step / 2
                        } else {
                            1
                        }
                    }
                };
            }
            Cell::Taken(_) => {
                streak += 1;
                if streak >= params.theta {
                    streak = 0;
                    let grown = match params.growth {
                        Growth::Additive => step + params.delta,
                        Growth::Multiplicative => step * 2,
                    };
                    step = if n >= 2 { (grown - 1) % (n - 1) + 1 } else { 1 };
                }
            }
        }
        pos = (pos + step) % n;
    }

    let mut offset = 1;
    while offset <= n {
        let idx = (start + offset) % n;
        visited.push(idx);
        if wanted(board.cell(idx)) {
            return Ok(SimResult {
                found_index: Some(idx),
                probes: visited.len(),
                trace: visited,
                fallback_used: true,
            });
        }
        offset += 1;
    }

    Ok(SimResult {
        found_index: None,
        probes: visited.len(),
        trace: visited,
        fallback_used: true,
    })
}
