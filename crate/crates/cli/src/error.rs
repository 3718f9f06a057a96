//! Error-to-exit-code discipline: 2 for input problems (files, formats,
//! flags, configs), 3 for analysis problems (valid inputs the math rejects).
//! Every failure prints one machine-readable JSON object to stderr:
//! `{"code", "message", "context"}`.

use lexdist::corpus::CorpusError;
use lexdist::dist::DistError;
use lexdist::fitting::FitError;
use lexdist::generators::GenError;
use lexdist::trends::TrendError;
use serde_json::{Map, Value};

#[derive(Debug)]
pub enum CliError {
    Input {
        code: &'static str,
        message: String,
        context: Map<String, Value>,
    },
    Analysis {
        code: &'static str,
        message: String,
        context: Map<String, Value>,
    },
}

impl CliError {
    pub fn input(code: &'static str, message: impl Into<String>) -> Self {
        CliError::Input {
            code,
            message: message.into(),
            context: Map::new(),
        }
    }

    pub fn analysis(code: &'static str, message: impl Into<String>) -> Self {
        CliError::Analysis {
            code,
            message: message.into(),
            context: Map::new(),
        }
    }

    pub fn with_context(mut self, key: &str, value: Value) -> Self {
        match &mut self {
            CliError::Input { context, .. } | CliError::Analysis { context, .. } => {
                context.insert(key.to_owned(), value);
            }
        }
        self
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input { .. } => 2,
            CliError::Analysis { .. } => 3,
        }
    }

    /// The `{code, message, context}` JSON line for stderr.
    pub fn to_json(&self) -> String {
        let (code, message, context) = match self {
            CliError::Input {
                code,
                message,
                context,
            }
            | CliError::Analysis {
                code,
                message,
                context,
            } => (code, message, context),
        };
        let mut m = Map::new();
        m.insert("code".to_owned(), Value::String((*code).to_owned()));
        m.insert("message".to_owned(), Value::String(message.clone()));
        m.insert("context".to_owned(), Value::Object(context.clone()));
        serde_json::to_string(&Value::Object(m)).expect("error JSON serializes")
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input { message, .. } | CliError::Analysis { message, .. } => {
                write!(f, "{message}")
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::input("Io", e.to_string())
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        let message = e.to_string();
        match e {
            CorpusError::Io { path, .. } => {
                CliError::input("Io", message).with_context("path", path.display().to_string().into())
            }
            CorpusError::MissingHeader { path, .. } => CliError::input("MissingHeader", message)
                .with_context("path", path.display().to_string().into()),
            CorpusError::UnknownColumn { path, name } => CliError::input("UnknownColumn", message)
                .with_context("path", path.display().to_string().into())
                .with_context("column", name.into()),
            CorpusError::EmptyFile { path } => CliError::input("EmptyFile", message)
                .with_context("path", path.display().to_string().into()),
            CorpusError::MalformedRows {
                path,
                count,
                first_line,
                ..
            } => CliError::input("MalformedRows", message)
                .with_context("path", path.display().to_string().into())
                .with_context("count", count.into())
                .with_context("first_line", first_line.into()),
            CorpusError::DuplicateListEntry { list, token } => {
                CliError::input("DuplicateListEntry", message)
                    .with_context("list", list.into())
                    .with_context("token", token.into())
            }
            CorpusError::EmptyWordList { name } => {
                CliError::input("EmptyWordList", message).with_context("list", name.into())
            }
            CorpusError::NoMatches { list } => {
                CliError::analysis("NoMatches", message).with_context("list", list.into())
            }
            CorpusError::NoTaggedEntries => CliError::analysis("NoTaggedEntries", message),
            CorpusError::UntaggedEntries { count } => {
                CliError::analysis("UntaggedEntries", message).with_context("count", count.into())
            }
            CorpusError::Dist(inner) => inner.into(),
        }
    }
}

impl From<DistError> for CliError {
    fn from(e: DistError) -> Self {
        let code = match &e {
            DistError::InvalidMinCount => "InvalidMinCount",
            DistError::EmptyAfterFilter { .. } => "EmptyAfterFilter",
            DistError::DuplicatePeriod(_) => "DuplicatePeriod",
            DistError::NoPeriods => "NoPeriods",
            DistError::NegativeEntropy(_) => "NegativeEntropy",
            DistError::InvalidRanking(_) => "InvalidRanking",
            DistError::InvalidMasses(_) => "InvalidMasses",
        };
        CliError::analysis(code, e.to_string())
    }
}

impl From<FitError> for CliError {
    fn from(e: FitError) -> Self {
        let code = match &e {
            FitError::TooFewPoints { .. } => "TooFewPoints",
            FitError::ZeroVariance => "ZeroVariance",
            FitError::TooFewPairs { .. } => "TooFewPairs",
            FitError::TooFewRanks { .. } => "TooFewRanks",
        };
        CliError::analysis(code, e.to_string())
    }
}

impl From<GenError> for CliError {
    fn from(e: GenError) -> Self {
        let message = e.to_string();
        match e {
            // a bad config file is an input problem
            GenError::InvalidConfig(_) => CliError::input("InvalidConfig", message),
            GenError::PopulationExtinct { generation } => {
                CliError::analysis("PopulationExtinct", message)
                    .with_context("generation", generation.into())
            }
            GenError::Unsatisfiable { .. } => CliError::analysis("Unsatisfiable", message),
            GenError::NoConvergence { .. } => CliError::analysis("NoConvergence", message),
            GenError::InvalidRatio(_) => CliError::input("InvalidRatio", message),
            GenError::NoTypes => CliError::input("NoTypes", message),
            GenError::NoDraws => CliError::input("NoDraws", message),
            GenError::NoComponents => CliError::input("NoComponents", message),
            GenError::InvalidWeight(_) => CliError::input("InvalidWeight", message),
            GenError::InsufficientSupport { .. } => {
                CliError::analysis("InsufficientSupport", message)
            }
        }
    }
}

impl From<TrendError> for CliError {
    fn from(e: TrendError) -> Self {
        let code = match &e {
            TrendError::TooFewSharedPeriods { .. } => "TooFewSharedPeriods",
            TrendError::NonPositiveValueUnderLog { .. } => "NonPositiveValueUnderLog",
            TrendError::ConstantSeries { .. } => "ConstantSeries",
            TrendError::InvalidSeries(_) => "InvalidSeries",
            TrendError::AtPeriod { .. } => "AnalysisAtPeriod",
        };
        CliError::analysis(code, e.to_string())
    }
}
