//! Subcommand implementations. Each `run` returns the report text destined
//! for stdout; auxiliary plot-data and table files are only written when
//! `--out` is given.

use crate::error::CliError;
use crate::report::{float_value, ReportBuilder};
use lexdist::corpus::{self, LoadReport, TableFormat};
use lexdist::dist::{EntropySummary, FrequencyTable, PeriodRange, RankedDistribution};
use lexdist::fitting::{FitResult, PairedTest, PointwiseComparison};
use lexdist::trends::{TimeSeries, TrendResult};
use serde_json::{Map, Value};
use std::path::{Path, PathBuf};

pub mod compare;
pub mod entropy;
pub mod fit;
pub mod simulate;
pub mod trend;
pub mod validate;
pub mod verify;

/// Flags shared by every subcommand.
#[derive(Debug, Clone)]
pub struct GlobalOpts {
    pub lenient: bool,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub timestamp: bool,
    /// Raw arguments (minus the program name), recorded in the report.
    pub invocation: String,
}

impl GlobalOpts {
    fn ensure_out_dir(&self) -> Result<Option<&Path>, CliError> {
        if let Some(dir) = &self.out {
            std::fs::create_dir_all(dir)?;
            Ok(Some(dir))
        } else {
            Ok(None)
        }
    }

    /// Writes an auxiliary file under `--out`, if set.
    pub fn write_aux(&self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        if let Some(dir) = self.ensure_out_dir()? {
            std::fs::write(dir.join(name), bytes)?;
        }
        Ok(())
    }

    /// Finalizes the report: returns the stdout text and mirrors it to
    /// `<out>/report.json` when `--out` is set.
    pub fn emit(&self, builder: &ReportBuilder) -> Result<String, CliError> {
        let generated_at = self.timestamp.then(|| {
            let now = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            format!("{now}")
        });
        let text = builder.finish(generated_at);
        self.write_aux("report.json", text.as_bytes())?;
        Ok(text)
    }
}

pub fn load_table(path: &Path, lenient: bool) -> Result<(FrequencyTable, LoadReport), CliError> {
    let format = TableFormat::from_path(path);
    Ok(corpus::load_frequency_table(path, format, lenient)?)
}

/// `--period` accepts a single period (`1910`) or an inclusive range
/// (`1910:2000`).
pub fn parse_period_arg(raw: &str) -> Result<PeriodRange, CliError> {
    let bad = || {
        CliError::input(
            "BadPeriod",
            format!("--period expects `N` or `START:END`, got `{raw}`"),
        )
    };
    if let Some((start, end)) = raw.split_once(':') {
        let start = start.trim().parse().map_err(|_| bad())?;
        let end = end.trim().parse().map_err(|_| bad())?;
        PeriodRange::new(start, end).ok_or_else(bad)
    } else {
        Ok(PeriodRange::single(raw.trim().parse().map_err(|_| bad())?))
    }
}

pub fn sanitize_key(key: &str) -> String {
    key.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

// ---- JSON conversions with canonical float handling ----

pub fn ranked_value(ranked: &RankedDistribution) -> Value {
    let mut m = Map::new();
    m.insert("n_types".to_owned(), ranked.len().into());
    m.insert("min_count".to_owned(), ranked.min_count().into());
    m.insert("source_total".to_owned(), ranked.source_total().into());
    m.insert("ranked_total".to_owned(), ranked.ranked_total().into());
    m.insert(
        "top".to_owned(),
        Value::Array(
            ranked
                .items()
                .iter()
                .take(10)
                .map(|item| {
                    let mut row = Map::new();
                    row.insert("rank".to_owned(), item.rank.into());
                    row.insert("token".to_owned(), Value::String(item.token.clone()));
                    row.insert("count".to_owned(), item.count.into());
                    Value::Object(row)
                })
                .collect(),
        ),
    );
    Value::Object(m)
}

pub fn fit_value(fit: &FitResult) -> Value {
    let mut m = Map::new();
    m.insert("model".to_owned(), Value::String(fit.model.to_string()));
    m.insert("slope".to_owned(), float_value(fit.slope));
    m.insert("intercept".to_owned(), float_value(fit.intercept));
    m.insert("r_squared".to_owned(), float_value(fit.r_squared));
    m.insert("n_points".to_owned(), fit.n_points.into());
    if fit.slope > 0.0 {
        // rising rank-frequency curves are legal output but worth flagging
        m.insert("anomalous_positive_slope".to_owned(), Value::Bool(true));
    }
    Value::Object(m)
}

pub fn entropy_value(summary: &EntropySummary) -> Value {
    let mut m = Map::new();
    m.insert("entropy_bits".to_owned(), float_value(summary.entropy_bits));
    m.insert("perplexity".to_owned(), float_value(summary.perplexity));
    m.insert("n_types".to_owned(), summary.n_types.into());
    Value::Object(m)
}

pub fn paired_value(test: &PairedTest) -> Value {
    let mut m = Map::new();
    m.insert("t_statistic".to_owned(), float_value(test.t_statistic));
    m.insert(
        "degrees_of_freedom".to_owned(),
        test.degrees_of_freedom.into(),
    );
    m.insert(
        "mean_difference".to_owned(),
        float_value(test.mean_difference),
    );
    m.insert("p_value".to_owned(), float_value(test.p_value));
    Value::Object(m)
}

pub fn pointwise_value(cmp: &PointwiseComparison) -> Value {
    let mut m = Map::new();
    m.insert("r_squared".to_owned(), float_value(cmp.r_squared));
    m.insert("n_ranks_compared".to_owned(), cmp.n_ranks_compared.into());
    m.insert(
        "normalization".to_owned(),
        Value::String(cmp.normalization.to_string()),
    );
    Value::Object(m)
}

pub fn trend_value(result: &TrendResult) -> Value {
    let mut m = Map::new();
    m.insert("slope".to_owned(), float_value(result.slope));
    m.insert("intercept".to_owned(), float_value(result.intercept));
    m.insert("r_squared".to_owned(), float_value(result.r_squared));
    m.insert("n_points".to_owned(), result.n_points.into());
    m.insert("n_dropped".to_owned(), result.n_dropped.into());
    m.insert(
        "transform_a".to_owned(),
        Value::String(result.transform_a.to_string()),
    );
    m.insert(
        "transform_b".to_owned(),
        Value::String(result.transform_b.to_string()),
    );
    Value::Object(m)
}

pub fn timeseries_value(series: &TimeSeries) -> Value {
    let mut m = Map::new();
    m.insert("label".to_owned(), Value::String(series.label.clone()));
    m.insert(
        "points".to_owned(),
        Value::Array(
            series
                .points()
                .iter()
                .map(|&(period, value)| Value::Array(vec![period.into(), float_value(value)]))
                .collect(),
        ),
    );
    Value::Object(m)
}

pub fn load_report_value(report: &LoadReport) -> Value {
    let mut m = Map::new();
    m.insert("rows".to_owned(), report.rows.into());
    m.insert(
        "duplicates_merged".to_owned(),
        report.duplicates_merged.into(),
    );
    m.insert(
        "malformed".to_owned(),
        Value::Array(
            report
                .malformed
                .iter()
                .map(|(line, message)| {
                    Value::Array(vec![(*line).into(), Value::String(message.clone())])
                })
                .collect(),
        ),
    );
    Value::Object(m)
}

pub fn string_array(items: &[String]) -> Value {
    Value::Array(items.iter().cloned().map(Value::String).collect())
}
