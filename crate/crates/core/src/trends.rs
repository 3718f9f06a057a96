//! Per-period measure series and covariate correlation.
//!
//! [`measure_series`] evaluates one distribution measure (entropy,
//! perplexity, top-k share, type count) per period table, optionally after
//! cumulating the periods; [`correlate_series`] inner-joins two series on
//! period and fits an OLS line between their (optionally transformed)
//! values. Missing periods are dropped with a count, never interpolated.

use crate::dist::{self, DistError, FrequencyTable};
use crate::fitting::ols_line;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TrendError {
    #[error("need at least 3 shared periods, got {got}")]
    TooFewSharedPeriods { got: usize },
    #[error("log transform of series `{label}` hit a non-positive value {value} at period {period}")]
    NonPositiveValueUnderLog {
        label: String,
        period: i64,
        value: f64,
    },
    #[error("series `{label}` is constant after transform; correlation is undefined")]
    ConstantSeries { label: String },
    #[error("invalid series: {0}")]
    InvalidSeries(&'static str),
    #[error("period {period}: {source}")]
    AtPeriod {
        period: i64,
        #[source]
        source: DistError,
    },
}

/// Ordered (period, value) observations with strictly increasing periods.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub label: String,
    points: Vec<(i64, f64)>,
}

impl TimeSeries {
    /// Sorts by period and rejects duplicates.
    pub fn new(
        label: impl Into<String>,
        mut points: Vec<(i64, f64)>,
    ) -> Result<Self, TrendError> {
        if points.is_empty() {
            return Err(TrendError::InvalidSeries("no points"));
        }
        points.sort_by_key(|&(p, _)| p);
        if points.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(TrendError::InvalidSeries("duplicate period"));
        }
        Ok(Self {
            label: label.into(),
            points,
        })
    }

    pub fn points(&self) -> &[(i64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // non-empty by construction
    }

    pub fn value_at(&self, period: i64) -> Option<f64> {
        self.points
            .binary_search_by_key(&period, |&(p, _)| p)
            .ok()
            .map(|i| self.points[i].1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Entropy,
    Perplexity,
    TopKShare,
    TypeCount,
}

impl std::fmt::Display for Measure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Measure::Entropy => "entropy",
            Measure::Perplexity => "perplexity",
            Measure::TopKShare => "top_k_share",
            Measure::TypeCount => "type_count",
        };
        write!(f, "{name}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureOptions {
    /// Frequency floor applied before normalizing each period.
    pub min_count: u64,
    /// Accumulate periods before measuring (death ignored).
    pub cumulative: bool,
    /// `k` for [`Measure::TopKShare`].
    pub top_k: usize,
    /// Restrict each period table to one group tag.
    pub group: Option<String>,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        Self {
            min_count: 1,
            cumulative: false,
            top_k: 3,
            group: None,
        }
    }
}

/// Applies one measure per period table. Errors from a period are annotated
/// with that period.
pub fn measure_series(
    tables: &[(i64, FrequencyTable)],
    measure: Measure,
    options: &MeasureOptions,
) -> Result<TimeSeries, TrendError> {
    if tables.len() < 2 {
        return Err(TrendError::InvalidSeries("need at least 2 periods"));
    }
    let owned: Vec<(i64, FrequencyTable)>;
    let tables = if options.cumulative {
        owned = dist::accumulate_periods(tables).map_err(|source| TrendError::AtPeriod {
            period: tables.first().map(|&(p, _)| p).unwrap_or_default(),
            source,
        })?;
        &owned[..]
    } else {
        tables
    };
    let mut points = Vec::with_capacity(tables.len());
    for (period, table) in tables {
        let at = |source| TrendError::AtPeriod {
            period: *period,
            source,
        };
        let ranked =
            dist::rank_distribution(table, options.min_count, options.group.as_deref(), None)
                .map_err(at)?;
        let value = match measure {
            Measure::TypeCount => ranked.len() as f64,
            Measure::Entropy => dist::entropy_bits(&dist::normalize(&ranked)).max(0.0),
            Measure::Perplexity => dist::entropy_bits(&dist::normalize(&ranked)).max(0.0).exp2(),
            Measure::TopKShare => {
                let p = dist::normalize(&ranked);
                let k = options.top_k.min(p.len());
                p.masses()[..k].iter().map(|&(_, m)| m).sum()
            }
        };
        points.push((*period, value));
    }
    let label = match (&options.group, options.cumulative) {
        (Some(g), true) => format!("{measure}[group={g},cumulative]"),
        (Some(g), false) => format!("{measure}[group={g}]"),
        (None, true) => format!("{measure}[cumulative]"),
        (None, false) => measure.to_string(),
    };
    TimeSeries::new(label, points)
}

/// Per-period entropy of one target word's context-count distribution — an
/// explicit operationalization of "the word's entropy" in an n-gram corpus.
pub fn context_entropy_series(
    context_tables: &[(i64, FrequencyTable)],
) -> Result<TimeSeries, TrendError> {
    let mut points = Vec::with_capacity(context_tables.len());
    for (period, table) in context_tables {
        let at = |source| TrendError::AtPeriod {
            period: *period,
            source,
        };
        let ranked = dist::rank_distribution(table, 1, None, None).map_err(at)?;
        points.push((
            *period,
            dist::entropy_bits(&dist::normalize(&ranked)).max(0.0),
        ));
    }
    TimeSeries::new("context_entropy_bits", points)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    Identity,
    /// Natural log; rejects non-positive values.
    Log,
    /// Natural log rescaled affinely onto [0, 1] over the joined periods.
    /// R² is unchanged by the rescaling; slope and intercept are not.
    ScaledLog,
}

impl std::fmt::Display for Transform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Transform::Identity => "identity",
            Transform::Log => "log",
            Transform::ScaledLog => "scaled_log",
        };
        write!(f, "{name}")
    }
}

/// OLS trend of `b` against `a` over their shared periods.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_points: usize,
    /// Periods present in one series but not the other.
    pub n_dropped: usize,
    pub transform_a: Transform,
    pub transform_b: Transform,
}

/// Applies one transform to a series' values; public so plot-data emission
/// can reuse exactly the regression's view of the data.
pub fn transform_values(
    label: &str,
    transform: Transform,
    values: &[(i64, f64)],
) -> Result<Vec<f64>, TrendError> {
    let logs = |values: &[(i64, f64)]| -> Result<Vec<f64>, TrendError> {
        values
            .iter()
            .map(|&(period, v)| {
                if v <= 0.0 {
                    Err(TrendError::NonPositiveValueUnderLog {
                        label: label.to_owned(),
                        period,
                        value: v,
                    })
                } else {
                    Ok(v.ln())
                }
            })
            .collect()
    };
    match transform {
        Transform::Identity => Ok(values.iter().map(|&(_, v)| v).collect()),
        Transform::Log => logs(values),
        Transform::ScaledLog => {
            let ln = logs(values)?;
            let min = ln.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = ln.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if max == min {
                // constant; caught by the variance check below either way
                return Ok(vec![0.0; ln.len()]);
            }
            Ok(ln.into_iter().map(|v| (v - min) / (max - min)).collect())
        }
    }
}

/// Inner-joins on period, transforms both sides, and regresses the
/// transformed `b` values on the transformed `a` values.
pub fn correlate_series(
    a: &TimeSeries,
    b: &TimeSeries,
    transform_a: Transform,
    transform_b: Transform,
) -> Result<TrendResult, TrendError> {
    let mut joined: Vec<(i64, f64, f64)> = Vec::new();
    for &(period, va) in a.points() {
        if let Some(vb) = b.value_at(period) {
            joined.push((period, va, vb));
        }
    }
    let n_dropped = a.len() + b.len() - 2 * joined.len();
    if joined.len() < 3 {
        return Err(TrendError::TooFewSharedPeriods { got: joined.len() });
    }
    let xs = transform_values(
        &a.label,
        transform_a,
        &joined.iter().map(|&(p, va, _)| (p, va)).collect::<Vec<_>>(),
    )?;
    let ys = transform_values(
        &b.label,
        transform_b,
        &joined.iter().map(|&(p, _, vb)| (p, vb)).collect::<Vec<_>>(),
    )?;
    let constant = |vals: &[f64]| vals.iter().all(|&v| v == vals[0]);
    if constant(&xs) {
        return Err(TrendError::ConstantSeries {
            label: a.label.clone(),
        });
    }
    if constant(&ys) {
        return Err(TrendError::ConstantSeries {
            label: b.label.clone(),
        });
    }
    let (slope, intercept, r_squared) = ols_line(&xs, &ys);
    Ok(TrendResult {
        slope,
        intercept,
        r_squared,
        n_points: joined.len(),
        n_dropped,
        transform_a,
        transform_b,
    })
}
