use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "volasym",
    version,
    about = "Overnight vs intra-day volatility cross-correlation asymmetry"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Analyze one price-history file.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        /// Defaults to the file stem.
        #[arg(long)]
        symbol: Option<String>,
        /// Grouping label carried into panels (e.g. exchange or "index").
        #[arg(long)]
        group: Option<String>,
        #[command(flatten)]
        analysis: AnalysisArgs,
    },
    /// Analyze every file listed in a manifest of `symbol,path[,group]` lines.
    Batch {
        #[arg(long)]
        manifest: PathBuf,
        #[command(flatten)]
        analysis: AnalysisArgs,
    },
    /// Write a synthetic series as CSV.
    Synth {
        /// copula_pair, coupled_vol or null_vol
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 5000)]
        n: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        rho: f64,
        #[arg(long, default_value_t = 1.0)]
        coupling: f64,
        #[arg(long, default_value_t = 0.01)]
        scale: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-render cross-equity panels from saved report JSON files.
    Report {
        /// Files holding one report object or an array of reports.
        #[arg(long = "reports", num_args = 1.., required = true)]
        reports: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "csv,json,svg")]
        format: Vec<String>,
    },
}

#[derive(Debug, Args)]
pub struct AnalysisArgs {
    #[arg(long, default_value = "Date")]
    pub date_col: String,
    #[arg(long, default_value = "Open")]
    pub open_col: String,
    #[arg(long, default_value = "Close")]
    pub close_col: String,
    /// iso (YYYY-MM-DD) or dmy (DD.MM.YYYY)
    #[arg(long, default_value = "iso")]
    pub date_format: String,
    /// Field delimiter: "," or ";".
    #[arg(long, default_value = ",")]
    pub delimiter: String,
    #[arg(long)]
    pub decimal_comma: bool,
    /// spearman, kendall or pearson
    #[arg(long, default_value = "spearman")]
    pub method: String,
    #[arg(long, default_value_t = 30)]
    pub min_length: usize,
    /// Drop bars whose |d| or |n| exceeds this many log units.
    #[arg(long)]
    pub max_abs_logreturn: Option<f64>,
    /// Keep bars with non-positive prices (they then fail at return computation).
    #[arg(long)]
    pub keep_nonpositive: bool,
    /// Number of bootstrap resamples; omit to skip the bootstrap.
    #[arg(long)]
    pub boot: Option<usize>,
    #[arg(long)]
    pub block_len: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also emit lagged cross-correlations for lags 0..=max_lag.
    #[arg(long)]
    pub max_lag: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "csv,json,svg")]
    pub format: Vec<String>,
}
