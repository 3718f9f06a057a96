//! `lexdist entropy` — entropy and perplexity of one table slice, per
//! group, or per period (optionally over the cumulative tables).

use super::*;
use super::fit::ByChoice;
use lexdist::corpus::{split_by_key, split_by_period, GroupKey};
use lexdist::dist::{accumulate_periods, entropy_summary, normalize, rank_distribution};

#[derive(Debug, Clone)]
pub struct EntropyArgs {
    pub input: PathBuf,
    pub min_count: u64,
    pub group: Option<String>,
    pub period: Option<String>,
    pub by: Option<ByChoice>,
    pub cumulative: bool,
}

pub fn run(args: &EntropyArgs, opts: &GlobalOpts) -> Result<String, CliError> {
    if args.cumulative && !matches!(args.by, Some(ByChoice::Period)) {
        return Err(CliError::input(
            "FlagConflict",
            "--cumulative requires --by period",
        ));
    }
    let mut builder = ReportBuilder::new(opts.invocation.clone());
    builder.add_input(&args.input)?;
    let (table, load_report) = load_table(&args.input, opts.lenient)?;
    builder.insert("load", load_report_value(&load_report));
    builder.insert(
        "dropped_zero_count",
        string_array(&table.zero_count_tokens()),
    );
    builder.insert("min_count", args.min_count.into());
    builder.insert("cumulative", Value::Bool(args.cumulative));
    let period_range = args.period.as_deref().map(parse_period_arg).transpose()?;

    match args.by {
        None => {
            let ranked =
                rank_distribution(&table, args.min_count, args.group.as_deref(), period_range)?;
            let summary = entropy_summary(&normalize(&ranked));
            builder.insert("entropy", entropy_value(&summary));
            builder.insert("ranked", ranked_value(&ranked));
        }
        Some(ByChoice::Group) => {
            let mut by_group = Map::new();
            for (key, slice) in split_by_key(&table, GroupKey::Group, false)? {
                let value = match rank_distribution(&slice, args.min_count, None, None) {
                    Ok(ranked) => entropy_value(&entropy_summary(&normalize(&ranked))),
                    Err(e) => {
                        let mut m = Map::new();
                        m.insert("error".to_owned(), Value::String(e.to_string()));
                        Value::Object(m)
                    }
                };
                by_group.insert(key, value);
            }
            builder.insert("by_group", Value::Object(by_group));
        }
        Some(ByChoice::Period) => {
            let mut per_period = split_by_period(&table)?;
            if let Some(range) = period_range {
                per_period.retain(|&(p, _)| range.contains(p));
            }
            if args.cumulative {
                per_period = accumulate_periods(&per_period)?;
            }
            let mut series = Vec::new();
            for (period, slice) in &per_period {
                let ranked = rank_distribution(slice, args.min_count, args.group.as_deref(), None)
                    .map_err(|e| {
                        CliError::from(e)
                            .with_context("period", (*period).into())
                    })?;
                let summary = entropy_summary(&normalize(&ranked));
                let mut m = Map::new();
                m.insert("period".to_owned(), (*period).into());
                m.insert("entropy_bits".to_owned(), float_value(summary.entropy_bits));
                m.insert("perplexity".to_owned(), float_value(summary.perplexity));
                m.insert("n_types".to_owned(), summary.n_types.into());
                series.push(Value::Object(m));
            }
            builder.insert("series", Value::Array(series));
        }
    }
    if let Some(g) = &args.group {
        builder.insert("group", Value::String(g.clone()));
    }
    opts.emit(&builder)
}
