//! `lexdist trend` — build a per-period measure series from tables (a
//! period-tagged file or a directory of `<period>.csv` files), inner-join it
//! with a covariate series, and fit the trend.

use super::*;
use crate::report::format_float;
use clap::ValueEnum;
use lexdist::corpus::{load_covariate_series, split_by_period};
use lexdist::trends::{
    correlate_series, measure_series, transform_values, Measure, MeasureOptions, TimeSeries,
    Transform,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureChoice {
    Entropy,
    Perplexity,
    TopKShare,
    TypeCount,
}

impl From<MeasureChoice> for Measure {
    fn from(m: MeasureChoice) -> Self {
        match m {
            MeasureChoice::Entropy => Measure::Entropy,
            MeasureChoice::Perplexity => Measure::Perplexity,
            MeasureChoice::TopKShare => Measure::TopKShare,
            MeasureChoice::TypeCount => Measure::TypeCount,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformChoice {
    Identity,
    Log,
    ScaledLog,
}

impl From<TransformChoice> for Transform {
    fn from(t: TransformChoice) -> Self {
        match t {
            TransformChoice::Identity => Transform::Identity,
            TransformChoice::Log => Transform::Log,
            TransformChoice::ScaledLog => Transform::ScaledLog,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrendArgs {
    pub tables: PathBuf,
    pub covariate: PathBuf,
    pub measure: MeasureChoice,
    pub min_count: u64,
    pub top_k: usize,
    pub cumulative: bool,
    pub group: Option<String>,
    pub transform_a: TransformChoice,
    pub transform_b: TransformChoice,
}

/// Loads period tables from a long-format file or a directory of
/// `<period>.csv` files.
fn load_period_tables(
    path: &Path,
    lenient: bool,
    builder: &mut ReportBuilder,
) -> Result<Vec<(i64, FrequencyTable)>, CliError> {
    if path.is_dir() {
        let mut names: Vec<PathBuf> = std::fs::read_dir(path)?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.extension().and_then(|e| e.to_str()) == Some("csv"))
            .collect();
        names.sort();
        let mut tables = Vec::new();
        for file in names {
            let stem = file
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or_default();
            let period: i64 = stem.parse().map_err(|_| {
                CliError::input(
                    "BadPeriod",
                    format!("table file name must be <period>.csv, got `{stem}.csv`"),
                )
            })?;
            builder.add_input(&file)?;
            tables.push((period, load_table(&file, lenient)?.0));
        }
        if tables.is_empty() {
            return Err(CliError::input(
                "EmptyFile",
                format!("{}: no <period>.csv files", path.display()),
            ));
        }
        Ok(tables)
    } else {
        builder.add_input(path)?;
        let (table, _) = load_table(path, lenient)?;
        Ok(split_by_period(&table)?)
    }
}

fn plot_csv(
    covariate: &TimeSeries,
    measured: &TimeSeries,
    result: &lexdist::trends::TrendResult,
) -> Result<Vec<u8>, CliError> {
    let joined: Vec<(i64, f64, f64)> = covariate
        .points()
        .iter()
        .filter_map(|&(p, va)| measured.value_at(p).map(|vb| (p, va, vb)))
        .collect();
    let a_points: Vec<(i64, f64)> = joined.iter().map(|&(p, va, _)| (p, va)).collect();
    let b_points: Vec<(i64, f64)> = joined.iter().map(|&(p, _, vb)| (p, vb)).collect();
    let ta = transform_values(&covariate.label, result.transform_a, &a_points)?;
    let tb = transform_values(&measured.label, result.transform_b, &b_points)?;
    let mut out =
        String::from("period,value_a,value_b,transformed_a,transformed_b,fitted_transformed_b\n");
    for (i, &(period, va, vb)) in joined.iter().enumerate() {
        out.push_str(&format!(
            "{period},{},{},{},{},{}\n",
            format_float(va),
            format_float(vb),
            format_float(ta[i]),
            format_float(tb[i]),
            format_float(result.slope * ta[i] + result.intercept),
        ));
    }
    Ok(out.into_bytes())
}

pub fn run(args: &TrendArgs, opts: &GlobalOpts) -> Result<String, CliError> {
    let mut builder = ReportBuilder::new(opts.invocation.clone());
    let tables = load_period_tables(&args.tables, opts.lenient, &mut builder)?;
    builder.add_input(&args.covariate)?;
    let covariate_points = load_covariate_series(&args.covariate)?;
    let covariate_label = args
        .covariate
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("covariate")
        .to_owned();
    let covariate = TimeSeries::new(covariate_label, covariate_points)?;

    let options = MeasureOptions {
        min_count: args.min_count,
        cumulative: args.cumulative,
        top_k: args.top_k,
        group: args.group.clone(),
    };
    let measured = measure_series(&tables, args.measure.into(), &options)?;
    let result = correlate_series(
        &covariate,
        &measured,
        args.transform_a.into(),
        args.transform_b.into(),
    )?;

    builder.insert("trend", trend_value(&result));
    builder.insert("measure_series", timeseries_value(&measured));
    builder.insert("covariate_series", timeseries_value(&covariate));
    builder.insert("measure", Value::String(Measure::from(args.measure).to_string()));
    builder.insert("min_count", args.min_count.into());
    builder.insert("cumulative", Value::Bool(args.cumulative));
    if let Some(g) = &args.group {
        builder.insert("group", Value::String(g.clone()));
    }
    opts.write_aux("trend_plot.csv", &plot_csv(&covariate, &measured, &result)?)?;
    opts.emit(&builder)
}
