//! Core distribution types and information-theoretic measures.
//!
//! A [`FrequencyTable`] holds raw token counts with optional group and
//! period tags. Ranking ([`rank_distribution`]) aggregates counts per token
//! over the selected slice, applies a frequency floor, and orders tokens by
//! descending count (ties break by ascending token, so output is fully
//! deterministic). Normalized [`ProbabilityVector`]s feed entropy,
//! perplexity, and the memorylessness diagnostics in
//! [`crate::generators`].

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

/// Tolerance for "masses sum to one" checks.
pub const MASS_SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum DistError {
    #[error("min_count must be at least 1")]
    InvalidMinCount,
    #[error("no entries remain after filtering (min_count={min_count}, group={group:?}, period={period:?})")]
    EmptyAfterFilter {
        min_count: u64,
        group: Option<String>,
        period: Option<String>,
    },
    #[error("duplicate period {0} in accumulation input")]
    DuplicatePeriod(i64),
    #[error("accumulation requires at least one period")]
    NoPeriods,
    #[error("entropy must be non-negative, got {0}")]
    NegativeEntropy(f64),
    #[error("invalid ranked distribution: {0}")]
    InvalidRanking(&'static str),
    #[error("invalid probability vector: {0}")]
    InvalidMasses(&'static str),
}

/// One ingested row: a token with its count and optional tags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub token: String,
    pub count: u64,
    pub group: Option<String>,
    pub period: Option<i64>,
}

impl Entry {
    pub fn new(token: impl Into<String>, count: u64) -> Self {
        Self {
            token: token.into(),
            count,
            group: None,
            period: None,
        }
    }

    pub fn with_group(mut self, group: impl Into<String>) -> Self {
        self.group = Some(group.into());
        self
    }

    pub fn with_period(mut self, period: i64) -> Self {
        self.period = Some(period);
        self
    }
}

/// Raw token counts. `(token, group, period)` triples are unique; duplicates
/// are summed at construction. Zero counts are kept (word lists may contain
/// unattested members) but never survive ranking.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyTable {
    entries: Vec<Entry>,
}

impl FrequencyTable {
    /// Builds a table, summing duplicate `(token, group, period)` triples.
    /// Returns the table and the number of rows merged into an earlier one.
    pub fn aggregate(rows: impl IntoIterator<Item = Entry>) -> (Self, usize) {
        let mut map: BTreeMap<(String, Option<String>, Option<i64>), u64> = BTreeMap::new();
        let mut merged = 0usize;
        for row in rows {
            let key = (row.token, row.group, row.period);
            match map.entry(key) {
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += row.count;
                    merged += 1;
                }
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(row.count);
                }
            }
        }
        let entries = map
            .into_iter()
            .map(|((token, group, period), count)| Entry {
                token,
                count,
                group,
                period,
            })
            .collect();
        (Self { entries }, merged)
    }

    /// Convenience constructor for untagged `(token, count)` pairs.
    pub fn from_counts<T: Into<String>>(counts: impl IntoIterator<Item = (T, u64)>) -> Self {
        Self::aggregate(counts.into_iter().map(|(t, c)| Entry::new(t, c))).0
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Sum of all counts, over every tag combination.
    pub fn total(&self) -> u64 {
        self.entries.iter().map(|e| e.count).sum()
    }

    /// Tokens carrying a zero count anywhere in the table, for reporting the
    /// set dropped before ranking.
    pub fn zero_count_tokens(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .entries
            .iter()
            .filter(|e| e.count == 0)
            .map(|e| e.token.clone())
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Inclusive period filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodRange {
    pub start: i64,
    pub end: i64,
}

impl PeriodRange {
    pub fn new(start: i64, end: i64) -> Option<Self> {
        (start <= end).then_some(Self { start, end })
    }

    pub fn single(period: i64) -> Self {
        Self {
            start: period,
            end: period,
        }
    }

    pub fn contains(&self, period: i64) -> bool {
        self.start <= period && period <= self.end
    }
}

impl std::fmt::Display for PeriodRange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.start == self.end {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}:{}", self.start, self.end)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankedItem {
    pub rank: usize,
    pub token: String,
    pub count: u64,
}

/// Tokens ordered by descending count with ranks `1..=n`, after the
/// `min_count` floor. `source_total` is the token total of the slice before
/// the floor was applied.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankedDistribution {
    items: Vec<RankedItem>,
    min_count: u64,
    source_total: u64,
}

impl RankedDistribution {
    /// Validating constructor for externally assembled rankings.
    pub fn new(items: Vec<RankedItem>, min_count: u64, source_total: u64) -> Result<Self, DistError> {
        if min_count < 1 {
            return Err(DistError::InvalidMinCount);
        }
        if items.is_empty() {
            return Err(DistError::InvalidRanking("no items"));
        }
        for (i, item) in items.iter().enumerate() {
            if item.rank != i + 1 {
                return Err(DistError::InvalidRanking("ranks must be exactly 1..=n"));
            }
            if item.count < min_count {
                return Err(DistError::InvalidRanking("count below min_count"));
            }
            if i > 0 && items[i - 1].count < item.count {
                return Err(DistError::InvalidRanking("counts must be non-increasing"));
            }
        }
        Ok(Self {
            items,
            min_count,
            source_total,
        })
    }

    pub fn items(&self) -> &[RankedItem] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        false // non-empty by construction
    }

    pub fn min_count(&self) -> u64 {
        self.min_count
    }

    pub fn source_total(&self) -> u64 {
        self.source_total
    }

    /// Sum of the ranked counts (after the floor).
    pub fn ranked_total(&self) -> u64 {
        self.items.iter().map(|i| i.count).sum()
    }

    pub fn counts(&self) -> impl Iterator<Item = u64> + '_ {
        self.items.iter().map(|i| i.count)
    }
}

/// Aggregates the selected slice of `table` per token, applies the
/// `min_count` floor, and ranks by descending count (ties by ascending
/// token).
pub fn rank_distribution(
    table: &FrequencyTable,
    min_count: u64,
    group_filter: Option<&str>,
    period_filter: Option<PeriodRange>,
) -> Result<RankedDistribution, DistError> {
    if min_count < 1 {
        return Err(DistError::InvalidMinCount);
    }
    let mut totals: BTreeMap<&str, u64> = BTreeMap::new();
    let mut source_total = 0u64;
    for entry in table.entries() {
        if let Some(group) = group_filter {
            if entry.group.as_deref() != Some(group) {
                continue;
            }
        }
        if let Some(range) = period_filter {
            match entry.period {
                Some(p) if range.contains(p) => {}
                _ => continue,
            }
        }
        source_total += entry.count;
        *totals.entry(entry.token.as_str()).or_insert(0) += entry.count;
    }
    let mut kept: Vec<(&str, u64)> = totals
        .into_iter()
        .filter(|&(_, count)| count >= min_count)
        .collect();
    if kept.is_empty() {
        return Err(DistError::EmptyAfterFilter {
            min_count,
            group: group_filter.map(str::to_owned),
            period: period_filter.map(|r| r.to_string()),
        });
    }
    kept.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let items = kept
        .into_iter()
        .enumerate()
        .map(|(i, (token, count))| RankedItem {
            rank: i + 1,
            token: token.to_owned(),
            count,
        })
        .collect();
    Ok(RankedDistribution {
        items,
        min_count,
        source_total,
    })
}

/// Rank-indexed probability masses summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityVector {
    masses: Vec<(usize, f64)>,
}

impl ProbabilityVector {
    /// Validates masses in `(0, 1]` with ranks `1..=n` summing to one within
    /// [`MASS_SUM_TOLERANCE`].
    pub fn from_masses(masses: Vec<f64>) -> Result<Self, DistError> {
        if masses.is_empty() {
            return Err(DistError::InvalidMasses("no masses"));
        }
        let mut sum = 0.0;
        for &m in &masses {
            if !(m > 0.0 && m <= 1.0) {
                return Err(DistError::InvalidMasses("each mass must lie in (0, 1]"));
            }
            sum += m;
        }
        if (sum - 1.0).abs() > MASS_SUM_TOLERANCE {
            return Err(DistError::InvalidMasses("masses must sum to 1"));
        }
        Ok(Self {
            masses: masses
                .into_iter()
                .enumerate()
                .map(|(i, m)| (i + 1, m))
                .collect(),
        })
    }

    pub fn masses(&self) -> &[(usize, f64)] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        false // non-empty by construction
    }

    /// Probability at 1-based rank `k`.
    pub fn mass_at(&self, rank: usize) -> Option<f64> {
        self.masses.get(rank - 1).map(|&(_, m)| m)
    }

    /// Tail mass beyond rank `k`: `T(k) = Σ_{j>k} p_j`, with `T(0) = 1`.
    /// Computed by suffix summation so deep tails stay accurate.
    pub fn tail_masses(&self) -> Vec<f64> {
        let n = self.masses.len();
        let mut tails = vec![0.0; n + 1];
        for k in (0..n).rev() {
            tails[k] = tails[k + 1] + self.masses[k].1;
        }
        tails
    }
}

/// Frequency-normalizes a ranked distribution: `p(k) = count(k) / Σ counts`.
pub fn normalize(ranked: &RankedDistribution) -> ProbabilityVector {
    let total = ranked.ranked_total() as f64;
    let masses = ranked
        .items()
        .iter()
        .map(|item| (item.rank, item.count as f64 / total))
        .collect();
    ProbabilityVector { masses }
}

/// Shannon entropy in bits: `H = −Σ pᵢ log2 pᵢ`. Zero for a singleton.
pub fn entropy_bits(p: &ProbabilityVector) -> f64 {
    -p.masses
        .iter()
        .map(|&(_, m)| m * m.log2())
        .sum::<f64>()
}

/// Perplexity `2^H`: the size of the uniform distribution with the same
/// entropy.
pub fn perplexity(entropy_bits: f64) -> Result<f64, DistError> {
    if entropy_bits < 0.0 {
        return Err(DistError::NegativeEntropy(entropy_bits));
    }
    Ok(entropy_bits.exp2())
}

/// Entropy, perplexity, and type count for one distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropySummary {
    pub entropy_bits: f64,
    pub perplexity: f64,
    pub n_types: usize,
}

pub fn entropy_summary(p: &ProbabilityVector) -> EntropySummary {
    let h = entropy_bits(p).max(0.0); // -0.0 guard for singletons
    EntropySummary {
        entropy_bits: h,
        perplexity: h.exp2(),
        n_types: p.len(),
    }
}

/// Accumulates per-period tables: the output table at period `d` sums counts
/// over all periods `≤ d` (death is ignored — tokens never leave). Entries
/// in the cumulative table at `d` carry `period = Some(d)`.
pub fn accumulate_periods(
    tables: &[(i64, FrequencyTable)],
) -> Result<Vec<(i64, FrequencyTable)>, DistError> {
    if tables.is_empty() {
        return Err(DistError::NoPeriods);
    }
    let mut order: Vec<usize> = (0..tables.len()).collect();
    order.sort_by_key(|&i| tables[i].0);
    for w in order.windows(2) {
        if tables[w[0]].0 == tables[w[1]].0 {
            return Err(DistError::DuplicatePeriod(tables[w[0]].0));
        }
    }
    let mut running: BTreeMap<(String, Option<String>), u64> = BTreeMap::new();
    let mut out = Vec::with_capacity(tables.len());
    for &i in &order {
        let (period, table) = &tables[i];
        for entry in table.entries() {
            *running
                .entry((entry.token.clone(), entry.group.clone()))
                .or_insert(0) += entry.count;
        }
        let entries = running.iter().map(|((token, group), &count)| Entry {
            token: token.clone(),
            count,
            group: group.clone(),
            period: Some(*period),
        });
        out.push((*period, FrequencyTable::aggregate(entries).0));
    }
    Ok(out)
}
