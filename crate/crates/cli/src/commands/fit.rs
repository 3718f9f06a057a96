//! `lexdist fit` — rank a table and fit the geometric and/or power-law
//! model, optionally per group or per period (with cumulation), optionally
//! restricted to a category word list. Emits `fit_plot*.csv` plot data.

use super::*;
use crate::report::format_float;
use clap::ValueEnum;
use lexdist::corpus::{extract_category, split_by_key, split_by_period, CasePolicy, GroupKey, WordList};
use lexdist::dist::{accumulate_periods, rank_distribution};
use lexdist::fitting::{compare_fits_paired, fit_geometric, fit_power_law};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelChoice {
    Geometric,
    Powerlaw,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseChoice {
    Fold,
    Exact,
}

impl From<CaseChoice> for CasePolicy {
    fn from(c: CaseChoice) -> Self {
        match c {
            CaseChoice::Fold => CasePolicy::Fold,
            CaseChoice::Exact => CasePolicy::Exact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ByChoice {
    Group,
    Period,
}

#[derive(Debug, Clone)]
pub struct FitArgs {
    pub input: PathBuf,
    pub min_count: u64,
    pub group: Option<String>,
    pub period: Option<String>,
    pub model: ModelChoice,
    pub word_list: Option<PathBuf>,
    pub case: CaseChoice,
    pub by: Option<ByChoice>,
    pub cumulative: bool,
}

struct SliceFits {
    geometric: Option<FitResult>,
    power_law: Option<FitResult>,
}

fn fit_slice(
    ranked: &RankedDistribution,
    model: ModelChoice,
    results: &mut Map<String, Value>,
) -> Result<SliceFits, CliError> {
    let mut fits = Map::new();
    let geometric = if matches!(model, ModelChoice::Geometric | ModelChoice::Both) {
        let fit = fit_geometric(ranked)?;
        fits.insert("geometric".to_owned(), fit_value(&fit));
        Some(fit)
    } else {
        None
    };
    let power_law = if matches!(model, ModelChoice::Powerlaw | ModelChoice::Both) {
        let fit = fit_power_law(ranked)?;
        fits.insert("power_law".to_owned(), fit_value(&fit));
        Some(fit)
    } else {
        None
    };
    results.insert("ranked".to_owned(), ranked_value(ranked));
    results.insert("fits".to_owned(), Value::Object(fits));
    Ok(SliceFits {
        geometric,
        power_law,
    })
}

fn plot_csv(ranked: &RankedDistribution, fits: &SliceFits) -> Vec<u8> {
    let mut out = String::from(
        "rank,count,log10_rank,log10_count,fitted_log10_count_geometric,fitted_log10_count_powerlaw\n",
    );
    for item in ranked.items() {
        let rank = item.rank as f64;
        let geo = fits
            .geometric
            .as_ref()
            .map(|f| format_float(f.fitted_log10(rank)))
            .unwrap_or_default();
        let pl = fits
            .power_law
            .as_ref()
            .map(|f| format_float(f.fitted_log10(rank.log2())))
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            item.rank,
            item.count,
            format_float(rank.log10()),
            format_float((item.count as f64).log10()),
            geo,
            pl,
        ));
    }
    out.into_bytes()
}

pub fn run(args: &FitArgs, opts: &GlobalOpts) -> Result<String, CliError> {
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

    if let Some(list_path) = &args.word_list {
        builder.add_input(list_path)?;
        let list = WordList::from_file(list_path, args.case.into())?;
        let (ranked, extraction) = extract_category(&table, &list, args.min_count)?;
        let mut extraction_map = Map::new();
        extraction_map.insert("list".to_owned(), Value::String(list.name.clone()));
        extraction_map.insert("list_size".to_owned(), list.tokens.len().into());
        extraction_map.insert("matched".to_owned(), extraction.matched.into());
        extraction_map.insert("missing".to_owned(), string_array(&extraction.missing));
        extraction_map.insert(
            "excluded_low_frequency".to_owned(),
            string_array(&extraction.excluded_low_frequency),
        );
        builder.insert("extraction", Value::Object(extraction_map));
        let mut results = Map::new();
        let fits = fit_slice(&ranked, args.model, &mut results)?;
        for (key, value) in results {
            builder.insert(&key, value);
        }
        opts.write_aux("fit_plot.csv", &plot_csv(&ranked, &fits))?;
        return opts.emit(&builder);
    }

    match args.by {
        None => {
            let ranked = rank_distribution(&table, args.min_count, args.group.as_deref(), period_range)?;
            let mut results = Map::new();
            let fits = fit_slice(&ranked, args.model, &mut results)?;
            for (key, value) in results {
                builder.insert(&key, value);
            }
            opts.write_aux("fit_plot.csv", &plot_csv(&ranked, &fits))?;
        }
        Some(by) => {
            let slices: Vec<(String, FrequencyTable)> = match by {
                ByChoice::Group => split_by_key(&table, GroupKey::Group, false)?
                    .into_iter()
                    .collect(),
                ByChoice::Period => {
                    let mut per_period = split_by_period(&table)?;
                    if let Some(range) = period_range {
                        per_period.retain(|&(p, _)| range.contains(p));
                    }
                    if args.cumulative {
                        per_period = accumulate_periods(&per_period)?;
                    }
                    per_period
                        .into_iter()
                        .map(|(p, t)| (p.to_string(), t))
                        .collect()
                }
            };
            let mut slice_map = Map::new();
            let mut pairs = Vec::new();
            for (key, slice_table) in &slices {
                let mut entry = Map::new();
                match rank_distribution(slice_table, args.min_count, args.group.as_deref(), None) {
                    Ok(ranked) => {
                        let mut results = Map::new();
                        match fit_slice(&ranked, args.model, &mut results) {
                            Ok(fits) => {
                                if let (Some(g), Some(p)) = (&fits.geometric, &fits.power_law) {
                                    pairs.push((g.r_squared, p.r_squared));
                                }
                                opts.write_aux(
                                    &format!("fit_plot_{}.csv", sanitize_key(key)),
                                    &plot_csv(&ranked, &fits),
                                )?;
                                entry.extend(results);
                            }
                            Err(e) => {
                                entry.insert("error".to_owned(), Value::String(e.to_string()));
                            }
                        }
                    }
                    Err(e) => {
                        entry.insert("error".to_owned(), Value::String(e.to_string()));
                    }
                }
                slice_map.insert(key.clone(), Value::Object(entry));
            }
            builder.insert("slices", Value::Object(slice_map));
            // paired geometric-vs-power-law test over the per-slice R² values
            if pairs.len() >= 2 {
                let test = compare_fits_paired(&pairs)?;
                builder.insert("paired_test", paired_value(&test));
            }
        }
    }
    opts.emit(&builder)
}
