use clap::{Parser, Subcommand};
use lexdist_cli::commands::{
    compare, entropy, fit, simulate, trend, validate, verify, GlobalOpts,
};
use lexdist_cli::error::CliError;
use std::path::PathBuf;

/// Rank-frequency distribution statistics: fitting, entropy, comparison,
/// simulation, and trend analysis over `token,count[,group,period]` tables.
#[derive(Parser)]
#[command(name = "lexdist", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report output format (reports are always JSON)
    #[arg(long, global = true, default_value = "json", value_parser = ["json"])]
    format: String,

    /// Skip malformed rows instead of failing the load
    #[arg(long, global = true)]
    lenient: bool,

    /// Directory for the report and auxiliary plot-data / table files
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Override the seed of seeded subcommands
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Stamp the report envelope with a generation time (breaks
    /// byte-identity across runs; the stamp sits outside the hashed body)
    #[arg(long, global = true)]
    timestamp: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a frequency table file and report ingestion statistics
    Validate {
        /// Frequency table (CSV/TSV with header token,count[,group,period])
        input: PathBuf,
    },
    /// Fit geometric and/or power-law models to a ranked distribution
    Fit {
        input: PathBuf,
        /// Frequency floor applied before ranking
        #[arg(long, default_value_t = 1)]
        min_count: u64,
        /// Restrict to one group tag
        #[arg(long, conflicts_with = "word_list")]
        group: Option<String>,
        /// Restrict to a period (`1910`) or inclusive range (`1910:2000`)
        #[arg(long, conflicts_with = "word_list")]
        period: Option<String>,
        #[arg(long, value_enum, default_value_t = fit::ModelChoice::Both)]
        model: fit::ModelChoice,
        /// Restrict to the members of a word list (one token per line)
        #[arg(long)]
        word_list: Option<PathBuf>,
        /// Case policy for word-list matching
        #[arg(long, value_enum, default_value_t = fit::CaseChoice::Fold)]
        case: fit::CaseChoice,
        /// Fit every group or period slice separately and run the paired
        /// geometric-vs-power-law test across slices
        #[arg(long, value_enum, conflicts_with = "word_list")]
        by: Option<fit::ByChoice>,
        /// Accumulate period tables before fitting (requires --by period)
        #[arg(long)]
        cumulative: bool,
    },
    /// Point-wise comparison of two frequency-normalized distributions
    Compare {
        input_a: PathBuf,
        input_b: Option<PathBuf>,
        /// Group selector for side A (enables one-file comparisons)
        #[arg(long)]
        group_a: Option<String>,
        /// Group selector for side B
        #[arg(long)]
        group_b: Option<String>,
        /// Number of leading ranks to pair
        #[arg(long, default_value_t = 50)]
        top_n: usize,
        #[arg(long, value_enum, default_value_t = compare::SpaceChoice::Probability)]
        space: compare::SpaceChoice,
        #[arg(long, default_value_t = 1)]
        min_count: u64,
    },
    /// Entropy and perplexity of a distribution (optionally per group or
    /// per period)
    Entropy {
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        min_count: u64,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        period: Option<String>,
        #[arg(long, value_enum)]
        by: Option<fit::ByChoice>,
        /// Accumulate period tables before measuring (requires --by period)
        #[arg(long)]
        cumulative: bool,
    },
    /// Run the name-evolution simulator from a flat key-value config file
    Simulate {
        /// Config file (keys: seed, generations, births_per_generation,
        /// innovation_rate, mortality_rate, migration_rate, founders,
        /// migrant_pool)
        config: PathBuf,
    },
    /// Correlate a per-period measure series against a covariate series
    Trend {
        /// Period-tagged table file, or a directory of <period>.csv files
        tables: PathBuf,
        /// Covariate series (CSV with header period,value)
        covariate: PathBuf,
        #[arg(long, value_enum, default_value_t = trend::MeasureChoice::Perplexity)]
        measure: trend::MeasureChoice,
        #[arg(long, default_value_t = 1)]
        min_count: u64,
        /// k for --measure top-k-share
        #[arg(long, default_value_t = 3)]
        top_k: usize,
        /// Accumulate period tables before measuring
        #[arg(long)]
        cumulative: bool,
        #[arg(long)]
        group: Option<String>,
        /// Transform applied to the covariate values
        #[arg(long, value_enum, default_value_t = trend::TransformChoice::Identity)]
        transform_a: trend::TransformChoice,
        /// Transform applied to the measured values
        #[arg(long, value_enum, default_value_t = trend::TransformChoice::Identity)]
        transform_b: trend::TransformChoice,
    },
    /// Verify a saved report: digest, envelope structure, input hashes
    Report {
        report: PathBuf,
    },
}

fn run(cli: Cli, invocation: String) -> Result<String, CliError> {
    let opts = GlobalOpts {
        lenient: cli.lenient,
        out: cli.out.clone(),
        seed: cli.seed,
        timestamp: cli.timestamp,
        invocation,
    };
    match cli.command {
        Command::Validate { input } => {
            validate::run(&validate::ValidateArgs { input }, &opts)
        }
        Command::Fit {
            input,
            min_count,
            group,
            period,
            model,
            word_list,
            case,
            by,
            cumulative,
        } => fit::run(
            &fit::FitArgs {
                input,
                min_count,
                group,
                period,
                model,
                word_list,
                case,
                by,
                cumulative,
            },
            &opts,
        ),
        Command::Compare {
            input_a,
            input_b,
            group_a,
            group_b,
            top_n,
            space,
            min_count,
        } => compare::run(
            &compare::CompareArgs {
                input_a,
                input_b,
                group_a,
                group_b,
                top_n,
                space,
                min_count,
            },
            &opts,
        ),
        Command::Entropy {
            input,
            min_count,
            group,
            period,
            by,
            cumulative,
        } => entropy::run(
            &entropy::EntropyArgs {
                input,
                min_count,
                group,
                period,
                by,
                cumulative,
            },
            &opts,
        ),
        Command::Simulate { config } => {
            simulate::run(&simulate::SimulateArgs { config }, &opts)
        }
        Command::Trend {
            tables,
            covariate,
            measure,
            min_count,
            top_k,
            cumulative,
            group,
            transform_a,
            transform_b,
        } => trend::run(
            &trend::TrendArgs {
                tables,
                covariate,
                measure,
                min_count,
                top_k,
                cumulative,
                group,
                transform_a,
                transform_b,
            },
            &opts,
        ),
        Command::Report { report } => verify::run(&verify::VerifyArgs { report }),
    }
}

fn main() {
    let invocation = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let cli = Cli::parse();
    match run(cli, invocation) {
        Ok(stdout) => {
            print!("{stdout}");
        }
        Err(error) => {
            eprintln!("{}", error.to_json());
            std::process::exit(error.exit_code());
        }
    }
}
