//! Ingestion and slicing of frequency data.
//!
//! The on-disk schema is a UTF-8 CSV/TSV with header
//! `token,count[,group,period]`: counts are base-10 non-negative integers,
//! `group` is a free string, `period` a signed integer (year or decade
//! label). LF and CRLF are both accepted. Duplicate
//! `(token, group, period)` rows are summed with a warning counter;
//! malformed rows fail the load unless lenient mode is requested.
//!
//! [`write_frequency_table`] emits the canonical form (rows sorted by
//! token, group, period), so load → write → load → write is byte-stable.

use crate::dist::{DistError, Entry, FrequencyTable, RankedDistribution, RankedItem};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Name of the bucket that collects entries without the split key.
pub const UNTAGGED_BUCKET: &str = "untagged";

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: missing or invalid header (expected token,count[,group,period]; found `{found}`)")]
    MissingHeader { path: PathBuf, found: String },
    #[error("{path}: unknown column `{name}`")]
    UnknownColumn { path: PathBuf, name: String },
    #[error("{path}: no data rows")]
    EmptyFile { path: PathBuf },
    #[error("{path}: {count} malformed row(s), first at line {first_line}: {first_error}")]
    MalformedRows {
        path: PathBuf,
        count: usize,
        first_line: u64,
        first_error: String,
    },
    #[error("word list `{list}` contains duplicate token `{token}` after case policy")]
    DuplicateListEntry { list: String, token: String },
    #[error("word list `{name}` is empty")]
    EmptyWordList { name: String },
    #[error("no word-list member of `{list}` is attested in the table")]
    NoMatches { list: String },
    #[error("no entry carries the requested key")]
    NoTaggedEntries,
    #[error("{count} entries carry no period tag")]
    UntaggedEntries { count: usize },
    #[error(transparent)]
    Dist(#[from] DistError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableFormat {
    Csv,
    Tsv,
}

impl TableFormat {
    /// Picks TSV for `.tsv`/`.tab` extensions, CSV otherwise.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("tsv") | Some("tab") => TableFormat::Tsv,
            _ => TableFormat::Csv,
        }
    }

    fn delimiter(self) -> u8 {
        match self {
            TableFormat::Csv => b',',
            TableFormat::Tsv => b'\t',
        }
    }
}

/// Ingestion statistics surfaced alongside the loaded table.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LoadReport {
    /// Data rows parsed successfully.
    pub rows: usize,
    /// Rows merged into an earlier duplicate `(token, group, period)` triple.
    pub duplicates_merged: usize,
    /// `(line, message)` for rows skipped in lenient mode.
    pub malformed: Vec<(u64, String)>,
}

struct Columns {
    token: usize,
    count: usize,
    group: Option<usize>,
    period: Option<usize>,
}

fn parse_header(path: &Path, headers: &csv::StringRecord) -> Result<Columns, CorpusError> {
    let mut token = None;
    let mut count = None;
    let mut group = None;
    let mut period = None;
    for (i, name) in headers.iter().enumerate() {
        match name.trim() {
            "token" => token = Some(i),
            "count" => count = Some(i),
            "group" => group = Some(i),
            "period" => period = Some(i),
            other => {
                return Err(CorpusError::UnknownColumn {
                    path: path.to_owned(),
                    name: other.to_owned(),
                })
            }
        }
    }
    match (token, count) {
        (Some(token), Some(count)) => Ok(Columns {
            token,
            count,
            group,
            period,
        }),
        _ => Err(CorpusError::MissingHeader {
            path: path.to_owned(),
            found: headers.iter().collect::<Vec<_>>().join(","),
        }),
    }
}

fn parse_row(record: &csv::StringRecord, columns: &Columns) -> Result<Entry, String> {
    let token = record
        .get(columns.token)
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .ok_or("empty token")?
        .to_owned();
    let count: u64 = record
        .get(columns.count)
        .map(str::trim)
        .ok_or("missing count")?
        .parse()
        .map_err(|_| {
            format!(
                "count must be a non-negative integer, got `{}`",
                record.get(columns.count).unwrap_or("")
            )
        })?;
    let group = columns
        .group
        .and_then(|i| record.get(i))
        .map(str::trim)
        .filter(|g| !g.is_empty())
        .map(str::to_owned);
    let period = match columns.period.and_then(|i| record.get(i)).map(str::trim) {
        None | Some("") => None,
        Some(raw) => Some(
            raw.parse::<i64>()
                .map_err(|_| format!("period must be an integer, got `{raw}`"))?,
        ),
    };
    Ok(Entry {
        token,
        count,
        group,
        period,
    })
}

/// Loads a frequency table. In strict mode any malformed row fails the
/// load; in lenient mode malformed rows are skipped and reported.
pub fn load_frequency_table(
    path: &Path,
    format: TableFormat,
    lenient: bool,
) -> Result<(FrequencyTable, LoadReport), CorpusError> {
    let io_err = |source| CorpusError::Io {
        path: path.to_owned(),
        source,
    };
    let mut raw = String::new();
    std::fs::File::open(path)
        .map_err(io_err)?
        .read_to_string(&mut raw)
        .map_err(io_err)?;
    if raw.trim().is_empty() {
        return Err(CorpusError::EmptyFile {
            path: path.to_owned(),
        });
    }
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(format.delimiter())
        .flexible(true)
        .from_reader(raw.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| CorpusError::MissingHeader {
            path: path.to_owned(),
            found: e.to_string(),
        })?
        .clone();
    let columns = parse_header(path, &headers)?;

    let mut entries = Vec::new();
    let mut malformed: Vec<(u64, String)> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = (i + 2) as u64; // header is line 1
        match record {
            Ok(record) => match parse_row(&record, &columns) {
                Ok(entry) => entries.push(entry),
                Err(message) => malformed.push((line, message)),
            },
            Err(e) => malformed.push((line, e.to_string())),
        }
    }
    if !malformed.is_empty() && !lenient {
        let (first_line, first_error) = malformed[0].clone();
        return Err(CorpusError::MalformedRows {
            path: path.to_owned(),
            count: malformed.len(),
            first_line,
            first_error,
        });
    }
    if entries.is_empty() {
        return Err(CorpusError::EmptyFile {
            path: path.to_owned(),
        });
    }
    let rows = entries.len();
    let (table, duplicates_merged) = FrequencyTable::aggregate(entries);
    Ok((
        table,
        LoadReport {
            rows,
            duplicates_merged,
            malformed,
        },
    ))
}

/// Writes the canonical serialization: header with only the columns the
/// table uses, rows in (token, group, period) order.
pub fn write_frequency_table<W: Write>(
    table: &FrequencyTable,
    writer: W,
    format: TableFormat,
) -> Result<(), CorpusError> {
    let has_group = table.entries().iter().any(|e| e.group.is_some());
    let has_period = table.entries().iter().any(|e| e.period.is_some());
    let mut w = csv::WriterBuilder::new()
        .delimiter(format.delimiter())
        .from_writer(writer);
    let io = |source: csv::Error| CorpusError::Io {
        path: PathBuf::from("<writer>"),
        source: std::io::Error::other(source),
    };
    let mut header = vec!["token", "count"];
    if has_group {
        header.push("group");
    }
    if has_period {
        header.push("period");
    }
    w.write_record(&header).map_err(io)?;
    for entry in table.entries() {
        let mut row = vec![entry.token.clone(), entry.count.to_string()];
        if has_group {
            row.push(entry.group.clone().unwrap_or_default());
        }
        if has_period {
            row.push(entry.period.map(|p| p.to_string()).unwrap_or_default());
        }
        w.write_record(&row).map_err(io)?;
    }
    w.flush().map_err(|e| CorpusError::Io {
        path: PathBuf::from("<writer>"),
        source: e,
    })?;
    Ok(())
}

/// Writes the canonical serialization to a file path.
pub fn write_frequency_table_file(
    table: &FrequencyTable,
    path: &Path,
    format: TableFormat,
) -> Result<(), CorpusError> {
    let file = std::fs::File::create(path).map_err(|source| CorpusError::Io {
        path: path.to_owned(),
        source,
    })?;
    write_frequency_table(table, file, format)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CasePolicy {
    /// Fold tokens to lower case before matching (default: the source word
    /// lists capitalize inconsistently).
    Fold,
    Exact,
}

impl CasePolicy {
    fn apply(self, token: &str) -> String {
        match self {
            CasePolicy::Fold => token.to_lowercase(),
            CasePolicy::Exact => token.to_owned(),
        }
    }
}

/// A named category word list. Multi-word members ("pop up") are matched as
/// single tokens with an internal space; the corpus file must pre-join them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordList {
    pub name: String,
    pub tokens: Vec<String>,
    pub case_policy: CasePolicy,
}

impl WordList {
    /// Applies the case policy and rejects duplicates that emerge under it.
    pub fn new(
        name: impl Into<String>,
        tokens: impl IntoIterator<Item = String>,
        case_policy: CasePolicy,
    ) -> Result<Self, CorpusError> {
        let name = name.into();
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        for token in tokens {
            let token = case_policy.apply(token.trim());
            if token.is_empty() {
                continue;
            }
            if !seen.insert(token.clone()) {
                return Err(CorpusError::DuplicateListEntry { list: name, token });
            }
            out.push(token);
        }
        if out.is_empty() {
            return Err(CorpusError::EmptyWordList { name });
        }
        Ok(Self {
            name,
            tokens: out,
            case_policy,
        })
    }

    /// Reads one token per line; blank lines and `#` comments are skipped.
    /// The list name is the file stem.
    pub fn from_file(path: &Path, case_policy: CasePolicy) -> Result<Self, CorpusError> {
        let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
            path: path.to_owned(),
            source,
        })?;
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("wordlist")
            .to_owned();
        Self::new(
            name,
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_owned),
            case_policy,
        )
    }
}

/// Which members were found, which are unattested, and which fell below the
/// frequency floor. `matched + missing.len() == list size`;
/// `excluded_low_frequency` members are counted as matched.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionReport {
    pub matched: usize,
    pub missing: Vec<String>,
    pub excluded_low_frequency: Vec<String>,
}

/// Extracts the word-list members' frequencies from a table and ranks them.
/// Members absent from the table (or present only with zero counts) are
/// recorded as missing; members attested below `min_count` are recorded as
/// excluded and kept out of the ranking — the analysis continues without
/// them.
pub fn extract_category(
    table: &FrequencyTable,
    list: &WordList,
    min_count: u64,
) -> Result<(RankedDistribution, ExtractionReport), CorpusError> {
    if min_count < 1 {
        return Err(CorpusError::Dist(DistError::InvalidMinCount));
    }
    let mut totals: BTreeMap<&str, u64> = list.tokens.iter().map(|t| (t.as_str(), 0)).collect();
    for entry in table.entries() {
        let key = list.case_policy.apply(&entry.token);
        if let Some(total) = totals.get_mut(key.as_str()) {
            *total += entry.count;
        }
    }
    let mut missing = Vec::new();
    let mut excluded = Vec::new();
    let mut kept: Vec<(&str, u64)> = Vec::new();
    let mut matched = 0usize;
    let mut source_total = 0u64;
    for token in &list.tokens {
        let count = totals[token.as_str()];
        if count == 0 {
            missing.push(token.clone());
            continue;
        }
        matched += 1;
        source_total += count;
        if count < min_count {
            excluded.push(token.clone());
        } else {
            kept.push((token, count));
        }
    }
    missing.sort();
    excluded.sort();
    if kept.is_empty() {
        return Err(CorpusError::NoMatches {
            list: list.name.clone(),
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
    let ranked = RankedDistribution::new(items, min_count, source_total)?;
    Ok((
        ranked,
        ExtractionReport {
            matched,
            missing,
            excluded_low_frequency: excluded,
        },
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKey {
    Group,
    Period,
}

/// Partitions a table by group or period. Every tagged entry lands in
/// exactly one output table; untagged entries go to the sentinel
/// [`UNTAGGED_BUCKET`]. When nothing carries the key the split degenerates,
/// which is an error unless the caller asked for the sentinel bucket.
pub fn split_by_key(
    table: &FrequencyTable,
    key: GroupKey,
    untagged_bucket: bool,
) -> Result<BTreeMap<String, FrequencyTable>, CorpusError> {
    let mut buckets: BTreeMap<String, Vec<Entry>> = BTreeMap::new();
    let mut tagged = 0usize;
    for entry in table.entries() {
        let bucket = match key {
            GroupKey::Group => entry.group.clone(),
            GroupKey::Period => entry.period.map(|p| p.to_string()),
        };
        match bucket {
            Some(value) => {
                tagged += 1;
                buckets.entry(value).or_default().push(entry.clone());
            }
            None => buckets
                .entry(UNTAGGED_BUCKET.to_owned())
                .or_default()
                .push(entry.clone()),
        }
    }
    if tagged == 0 && !untagged_bucket {
        return Err(CorpusError::NoTaggedEntries);
    }
    Ok(buckets
        .into_iter()
        .map(|(key, entries)| (key, FrequencyTable::aggregate(entries).0))
        .collect())
}

/// Loads a covariate series file: CSV with header `period,value`, one
/// observation per row (same encoding rules as frequency tables).
pub fn load_covariate_series(path: &Path) -> Result<Vec<(i64, f64)>, CorpusError> {
    let io_err = |source| CorpusError::Io {
        path: path.to_owned(),
        source,
    };
    let mut raw = String::new();
    std::fs::File::open(path)
        .map_err(io_err)?
        .read_to_string(&mut raw)
        .map_err(io_err)?;
    if raw.trim().is_empty() {
        return Err(CorpusError::EmptyFile {
            path: path.to_owned(),
        });
    }
    let mut reader = csv::Reader::from_reader(raw.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| CorpusError::MissingHeader {
            path: path.to_owned(),
            found: e.to_string(),
        })?
        .clone();
    let names: Vec<&str> = headers.iter().map(str::trim).collect();
    if names != ["period", "value"] {
        return Err(CorpusError::MissingHeader {
            path: path.to_owned(),
            found: names.join(","),
        });
    }
    let mut points = Vec::new();
    let mut malformed: Vec<(u64, String)> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = (i + 2) as u64;
        let parsed = record.map_err(|e| e.to_string()).and_then(|r| {
            let period: i64 = r
                .get(0)
                .map(str::trim)
                .ok_or("missing period")?
                .parse()
                .map_err(|_| format!("period must be an integer, got `{}`", r.get(0).unwrap_or("")))?;
            let value: f64 = r
                .get(1)
                .map(str::trim)
                .ok_or("missing value")?
                .parse()
                .map_err(|_| format!("value must be a number, got `{}`", r.get(1).unwrap_or("")))?;
            Ok((period, value))
        });
        match parsed {
            Ok(point) => points.push(point),
            Err(message) => malformed.push((line, message)),
        }
    }
    if let Some((first_line, first_error)) = malformed.first().cloned() {
        return Err(CorpusError::MalformedRows {
            path: path.to_owned(),
            count: malformed.len(),
            first_line,
            first_error,
        });
    }
    if points.is_empty() {
        return Err(CorpusError::EmptyFile {
            path: path.to_owned(),
        });
    }
    Ok(points)
}

/// Typed period partition for time-series pipelines. Untagged entries are an
/// error here: a period series must account for every count.
pub fn split_by_period(table: &FrequencyTable) -> Result<Vec<(i64, FrequencyTable)>, CorpusError> {
    let untagged = table.entries().iter().filter(|e| e.period.is_none()).count();
    if untagged > 0 {
        return Err(CorpusError::UntaggedEntries { count: untagged });
    }
    if table.is_empty() {
        return Err(CorpusError::NoTaggedEntries);
    }
    let mut buckets: BTreeMap<i64, Vec<Entry>> = BTreeMap::new();
    for entry in table.entries() {
        buckets
            .entry(entry.period.expect("checked above"))
            .or_default()
            .push(entry.clone());
    }
    Ok(buckets
        .into_iter()
        .map(|(period, entries)| (period, FrequencyTable::aggregate(entries).0))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    fn write_temp(name: &str, contents: &str) -> PathBuf {
        let path = std::env::temp_dir().join(format!("lexdist-test-{}-{name}", std::process::id()));
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        path
    }

    #[test]
    fn load_basic_csv() {
        let path = write_temp("basic.csv", "token,count\na,3\nb,1\n");
        let (table, report) = load_frequency_table(&path, TableFormat::Csv, false).unwrap();
        assert_eq!(table.total(), 4);
        assert_eq!(report.rows, 2);
        assert_eq!(report.duplicates_merged, 0);
    }

    #[test]
    fn load_sums_duplicates_with_warning() {
        let path = write_temp("dup.csv", "token,count\na,3\na,2\n");
        let (table, report) = load_frequency_table(&path, TableFormat::Csv, false).unwrap();
        assert_eq!(table.entries()[0].count, 5);
        assert_eq!(report.duplicates_merged, 1);
    }

    #[test]
    fn load_full_schema_and_crlf() {
        let path = write_temp(
            "full.csv",
            "token,count,group,period\r\nanna,9,f,1910\r\nbert,4,m,1910\r\nanna,2,f,1920\r\n",
        );
        let (table, _) = load_frequency_table(&path, TableFormat::Csv, false).unwrap();
        assert_eq!(table.len(), 3);
        assert_eq!(table.entries()[0].group.as_deref(), Some("f"));
        assert_eq!(table.entries()[0].period, Some(1910));
    }

    #[test]
    fn load_tsv() {
        let path = write_temp("t.tsv", "token\tcount\nx\t7\n");
        assert_eq!(TableFormat::from_path(&path), TableFormat::Tsv);
        let (table, _) = load_frequency_table(&path, TableFormat::Tsv, false).unwrap();
        assert_eq!(table.total(), 7);
    }

    #[test]
    fn load_rejects_bad_files() {
        let empty = write_temp("empty.csv", "");
        assert!(matches!(
            load_frequency_table(&empty, TableFormat::Csv, false),
            Err(CorpusError::EmptyFile { .. })
        ));
        let header_only = write_temp("header-only.csv", "token,count\n");
        assert!(matches!(
            load_frequency_table(&header_only, TableFormat::Csv, false),
            Err(CorpusError::EmptyFile { .. })
        ));
        let bad_header = write_temp("bad-header.csv", "word,freq\na,1\n");
        assert!(matches!(
            load_frequency_table(&bad_header, TableFormat::Csv, false),
            Err(CorpusError::UnknownColumn { .. })
        ));
        let no_count = write_temp("no-count.csv", "token\na\n");
        assert!(matches!(
            load_frequency_table(&no_count, TableFormat::Csv, false),
            Err(CorpusError::MissingHeader { .. })
        ));
        let missing = Path::new("/nonexistent/lexdist.csv");
        assert!(matches!(
            load_frequency_table(missing, TableFormat::Csv, false),
            Err(CorpusError::Io { .. })
        ));
    }

    #[test]
    fn malformed_rows_strict_vs_lenient() {
        let path = write_temp("mal.csv", "token,count\na,3\nb,-2\nc,x\nd,1\n");
        let err = load_frequency_table(&path, TableFormat::Csv, false).unwrap_err();
        match err {
            CorpusError::MalformedRows {
                count, first_line, ..
            } => {
                assert_eq!(count, 2);
                assert_eq!(first_line, 3);
            }
            other => panic!("unexpected error: {other}"),
        }
        let (table, report) = load_frequency_table(&path, TableFormat::Csv, true).unwrap();
        assert_eq!(table.total(), 4);
        assert_eq!(report.malformed.len(), 2);
    }

    #[test]
    fn round_trip_is_idempotent() {
        let path = write_temp(
            "rt.csv",
            "token,count,group,period\nb,2,g1,1920\na,5,,\n\"x,y\",1,g2,\n",
        );
        let (table, _) = load_frequency_table(&path, TableFormat::Csv, false).unwrap();
        let mut first = Vec::new();
        write_frequency_table(&table, &mut first, TableFormat::Csv).unwrap();
        let path2 = write_temp("rt2.csv", std::str::from_utf8(&first).unwrap());
        let (table2, _) = load_frequency_table(&path2, TableFormat::Csv, false).unwrap();
        let mut second = Vec::new();
        write_frequency_table(&table2, &mut second, TableFormat::Csv).unwrap();
        assert_eq!(first, second);
        assert_eq!(table, table2);
    }

    fn color_list() -> WordList {
        WordList::new(
            "colors",
            ["Red", "Blue", "Chartreuse"].map(String::from),
            CasePolicy::Fold,
        )
        .unwrap()
    }

    #[test]
    fn extract_records_missing_and_excluded() {
        let table = FrequencyTable::from_counts([
            ("red", 90u64),
            ("blue", 30),
            ("chartreuse", 0),
            ("noise", 500),
        ]);
        let (ranked, report) = extract_category(&table, &color_list(), 1).unwrap();
        let tokens: Vec<&str> = ranked.items().iter().map(|i| i.token.as_str()).collect();
        assert_eq!(tokens, vec!["red", "blue"]);
        assert_eq!(report.matched, 2);
        assert_eq!(report.missing, vec!["chartreuse"]);
        assert!(report.excluded_low_frequency.is_empty());
        assert_eq!(report.matched + report.missing.len(), 3);
    }

    #[test]
    fn extract_low_frequency_exclusion() {
        let table = FrequencyTable::from_counts([("red", 90u64), ("blue", 2)]);
        let (ranked, report) = extract_category(&table, &color_list(), 5).unwrap();
        assert_eq!(ranked.len(), 1);
        assert_eq!(report.excluded_low_frequency, vec!["blue"]);
        assert_eq!(report.matched, 2);
    }

    #[test]
    fn extract_folds_case_and_aggregates_tags() {
        let (table, _) = FrequencyTable::aggregate([
            Entry::new("Red", 10).with_group("a"),
            Entry::new("RED", 5).with_group("b"),
        ]);
        let (ranked, _) = extract_category(&table, &color_list(), 1).unwrap();
        assert_eq!(ranked.items()[0].token, "red");
        assert_eq!(ranked.items()[0].count, 15);
    }

    #[test]
    fn extract_no_matches() {
        let table = FrequencyTable::from_counts([("noise", 10u64)]);
        assert!(matches!(
            extract_category(&table, &color_list(), 1),
            Err(CorpusError::NoMatches { .. })
        ));
    }

    #[test]
    fn word_list_rejects_duplicates_under_fold() {
        let dup = WordList::new("x", ["Grey", "grey"].map(String::from), CasePolicy::Fold);
        assert!(matches!(
            dup,
            Err(CorpusError::DuplicateListEntry { .. })
        ));
        // exact policy keeps them distinct
        assert!(WordList::new("x", ["Grey", "grey"].map(String::from), CasePolicy::Exact).is_ok());
    }

    #[test]
    fn split_by_group_partitions_exactly() {
        let (table, _) = FrequencyTable::aggregate([
            Entry::new("a", 5).with_group("m"),
            Entry::new("b", 3).with_group("f"),
        ]);
        let parts = split_by_key(&table, GroupKey::Group, false).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts["m"].total(), 5);
        assert_eq!(parts["f"].total(), 3);
        let total: u64 = parts.values().map(|t| t.total()).sum();
        assert_eq!(total, table.total());
    }

    #[test]
    fn split_untagged_goes_to_sentinel() {
        let (table, _) = FrequencyTable::aggregate([
            Entry::new("a", 5).with_group("m"),
            Entry::new("loose", 2),
        ]);
        let parts = split_by_key(&table, GroupKey::Group, false).unwrap();
        assert_eq!(parts[UNTAGGED_BUCKET].total(), 2);
        let total: u64 = parts.values().map(|t| t.total()).sum();
        assert_eq!(total, table.total());
    }

    #[test]
    fn split_all_untagged_needs_bucket_request() {
        let table = FrequencyTable::from_counts([("a", 1u64)]);
        assert!(matches!(
            split_by_key(&table, GroupKey::Group, false),
            Err(CorpusError::NoTaggedEntries)
        ));
        let parts = split_by_key(&table, GroupKey::Group, true).unwrap();
        assert_eq!(parts.len(), 1);
        assert!(parts.contains_key(UNTAGGED_BUCKET));
    }

    #[test]
    fn covariate_series_loads_and_validates() {
        let ok = write_temp("cov.csv", "period,value\n1910,200000\n1920,2.5e5\n");
        let points = load_covariate_series(&ok).unwrap();
        assert_eq!(points, vec![(1910, 200000.0), (1920, 250000.0)]);
        let bad = write_temp("cov-bad.csv", "period,value\n1910,x\n");
        assert!(matches!(
            load_covariate_series(&bad),
            Err(CorpusError::MalformedRows { .. })
        ));
        let wrong = write_temp("cov-wrong.csv", "year,value\n1910,1\n");
        assert!(matches!(
            load_covariate_series(&wrong),
            Err(CorpusError::MissingHeader { .. })
        ));
    }

    #[test]
    fn split_by_period_typed() {
        let (table, _) = FrequencyTable::aggregate([
            Entry::new("a", 2).with_period(1910),
            Entry::new("a", 1).with_period(1920),
            Entry::new("b", 3).with_period(1920),
        ]);
        let parts = split_by_period(&table).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].0, 1910);
        assert_eq!(parts[1].1.total(), 4);

        let mixed =
            FrequencyTable::aggregate([Entry::new("a", 2).with_period(1910), Entry::new("b", 1)]).0;
        assert!(matches!(
            split_by_period(&mixed),
            Err(CorpusError::UntaggedEntries { count: 1 })
        ));
    }
}
