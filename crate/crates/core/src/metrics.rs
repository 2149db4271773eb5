//! Probe-count aggregation: mean, population standard deviation, maximum,
//! nearest-rank p99, and the full per-count histogram, kept per operation
//! kind. Sums are integer-exact, so merging recorders is associative and
//! commutative and parallel trials can be aggregated in any order.

use std::collections::BTreeMap;

/// The operation a probe count belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpKind {
    Insert,
    LookupHit,
    LookupMiss,
    Delete,
}

impl OpKind {
    pub const ALL: [OpKind; 4] = [
        OpKind::Insert,
        OpKind::LookupHit,
        OpKind::LookupMiss,
        OpKind::Delete,
    ];

    pub fn label(self) -> &'static str {
        match self {
            OpKind::Insert => "insert",
            OpKind::LookupHit => "lookup_hit",
            OpKind::LookupMiss => "lookup_miss",
            OpKind::Delete => "delete",
        }
    }

    fn index(self) -> usize {
        match self {
            OpKind::Insert => 0,
            OpKind::LookupHit => 1,
            OpKind::LookupMiss => 2,
            OpKind::Delete => 3,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct KindAgg {
    count: u64,
    sum: u64,
    sum_sq: u128,
    max: u64,
    histogram: BTreeMap<u64, u64>,
}

impl KindAgg {
    fn record(&mut self, probes: u64) {
        self.count += 1;
        self.sum += probes;
        self.sum_sq += (probes as u128) * (probes as u128);
        self.max = self.max.max(probes);
        *self.histogram.entry(probes).or_insert(0) += 1;
    }

    fn merge_from(&mut self, other: &KindAgg) {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self.max = self.max.max(other.max);
        for (&probes, &n) in &other.histogram {
            *self.histogram.entry(probes).or_insert(0) += n;
        }
    }
}

/// Summary of one operation kind's probe counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats {
    pub count: u64,
    pub mean: f64,
    /// Population standard deviation.
    pub stddev: f64,
    pub max: u64,
    /// Nearest-rank 99th percentile.
    pub p99: u64,
}

/// Streaming per-kind probe-count aggregates.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Recorder {
    kinds: [KindAgg; 4],
}

impl Recorder {
    pub fn new() -> Self {
        Recorder::default()
    }

    /// Records one operation's probe count (always ≥ 1).
    pub fn record(&mut self, kind: OpKind, probes: u64) {
        debug_assert!(probes >= 1);
        self.kinds[kind.index()].record(probes);
    }

    pub fn count(&self, kind: OpKind) -> u64 {
        self.kinds[kind.index()].count
    }

    /// Sum of all recorded probe counts for a kind.
    pub fn total(&self, kind: OpKind) -> u64 {
        self.kinds[kind.index()].sum
    }

    pub fn summarize(&self, kind: OpKind) -> SummaryStats {
        let agg = &self.kinds[kind.index()];
        if agg.count == 0 {
            return SummaryStats {
                count: 0,
                mean: 0.0,
                stddev: 0.0,
                max: 0,
                p99: 0,
            };
        }
        let n = agg.count as f64;
        let mean = agg.sum as f64 / n;
        let variance = (agg.sum_sq as f64 / n - mean * mean).max(0.0);
        SummaryStats {
            count: agg.count,
            mean,
            stddev: variance.sqrt(),
            max: agg.max,
            p99: percentile_nearest_rank(&agg.histogram, agg.count, 0.99),
        }
    }

    /// Histogram as ascending `(probes, occurrences)` pairs.
    pub fn histogram(&self, kind: OpKind) -> Vec<(u64, u64)> {
        self.kinds[kind.index()]
            .histogram
            .iter()
            .map(|(&p, &n)| (p, n))
            .collect()
    }

    /// New recorder equivalent to having recorded both input streams.
    pub fn merge(&self, other: &Recorder) -> Recorder {
        let mut out = self.clone();
        out.merge_from(other);
        out
    }

    pub fn merge_from(&mut self, other: &Recorder) {
        for (mine, theirs) in self.kinds.iter_mut().zip(other.kinds.iter()) {
            mine.merge_from(theirs);
        }
    }
}

fn percentile_nearest_rank(histogram: &BTreeMap<u64, u64>, count: u64, q: f64) -> u64 {
    let rank = ((q * count as f64).ceil() as u64).max(1);
    let mut cumulative = 0;
    for (&probes, &n) in histogram {
        cumulative += n;
        if cumulative >= rank {
            return probes;
        }
    }
    0
}
