//! `lexdist compare` — rank-by-rank comparison of two frequency-normalized
//! distributions: two files, or two group slices of one file.

use super::*;
use crate::report::format_float;
use clap::ValueEnum;
use lexdist::dist::{normalize, rank_distribution, ProbabilityVector};
use lexdist::fitting::{pointwise_compare, CompareSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceChoice {
    Probability,
    Log,
}

impl From<SpaceChoice> for CompareSpace {
    fn from(s: SpaceChoice) -> Self {
        match s {
            SpaceChoice::Probability => CompareSpace::Probability,
            SpaceChoice::Log => CompareSpace::LogProbability,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CompareArgs {
    pub input_a: PathBuf,
    pub input_b: Option<PathBuf>,
    pub group_a: Option<String>,
    pub group_b: Option<String>,
    pub top_n: usize,
    pub space: SpaceChoice,
    pub min_count: u64,
}

fn plot_csv(a: &ProbabilityVector, b: &ProbabilityVector, top_n: usize) -> Vec<u8> {
    let mut out = String::from("rank,mass_a,mass_b,log10_mass_a,log10_mass_b\n");
    for k in 1..=top_n {
        let ma = a.mass_at(k).expect("checked by pointwise_compare");
        let mb = b.mass_at(k).expect("checked by pointwise_compare");
        out.push_str(&format!(
            "{k},{},{},{},{}\n",
            format_float(ma),
            format_float(mb),
            format_float(ma.log10()),
            format_float(mb.log10()),
        ));
    }
    out.into_bytes()
}

pub fn run(args: &CompareArgs, opts: &GlobalOpts) -> Result<String, CliError> {
    if args.input_b.is_none() && (args.group_a.is_none() || args.group_b.is_none()) {
        return Err(CliError::input(
            "FlagConflict",
            "compare needs either two input files or --group-a and --group-b on one file",
        ));
    }
    let mut builder = ReportBuilder::new(opts.invocation.clone());
    builder.add_input(&args.input_a)?;
    let (table_a, _) = load_table(&args.input_a, opts.lenient)?;
    let table_b = match &args.input_b {
        Some(path) => {
            builder.add_input(path)?;
            Some(load_table(path, opts.lenient)?.0)
        }
        None => None,
    };
    let ranked_a = rank_distribution(&table_a, args.min_count, args.group_a.as_deref(), None)?;
    let ranked_b = rank_distribution(
        table_b.as_ref().unwrap_or(&table_a),
        args.min_count,
        args.group_b.as_deref(),
        None,
    )?;
    let pa = normalize(&ranked_a);
    let pb = normalize(&ranked_b);
    let comparison = pointwise_compare(&pa, &pb, args.top_n, args.space.into())?;

    builder.insert("comparison", pointwise_value(&comparison));
    builder.insert("side_a", ranked_value(&ranked_a));
    builder.insert("side_b", ranked_value(&ranked_b));
    builder.insert("min_count", args.min_count.into());
    if let Some(g) = &args.group_a {
        builder.insert("group_a", Value::String(g.clone()));
    }
    if let Some(g) = &args.group_b {
        builder.insert("group_b", Value::String(g.clone()));
    }
    opts.write_aux("compare_plot.csv", &plot_csv(&pa, &pb, args.top_n))?;
    opts.emit(&builder)
}
