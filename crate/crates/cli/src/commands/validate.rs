//! `lexdist validate` — load a table, enforce the schema, and report
//! ingestion statistics.

use super::*;
use lexdist::corpus::TableFormat;
use std::collections::BTreeSet;

#[derive(Debug, Clone)]
pub struct ValidateArgs {
    pub input: PathBuf,
}

pub fn run(args: &ValidateArgs, opts: &GlobalOpts) -> Result<String, CliError> {
    let mut builder = ReportBuilder::new(opts.invocation.clone());
    builder.add_input(&args.input)?;
    let format = TableFormat::from_path(&args.input);
    let (table, load_report) = load_table(&args.input, opts.lenient)?;

    builder.insert(
        "format",
        Value::String(match format {
            TableFormat::Csv => "csv".to_owned(),
            TableFormat::Tsv => "tsv".to_owned(),
        }),
    );
    builder.insert("load", load_report_value(&load_report));
    builder.insert("unique_triples", table.len().into());
    builder.insert("total", table.total().into());
    builder.insert(
        "dropped_zero_count",
        string_array(&table.zero_count_tokens()),
    );

    let groups: BTreeSet<String> = table
        .entries()
        .iter()
        .filter_map(|e| e.group.clone())
        .collect();
    let periods: BTreeSet<i64> = table.entries().iter().filter_map(|e| e.period).collect();
    builder.insert(
        "groups",
        Value::Array(groups.into_iter().map(Value::String).collect()),
    );
    builder.insert(
        "periods",
        Value::Array(periods.into_iter().map(Value::from).collect()),
    );
    opts.emit(&builder)
}
