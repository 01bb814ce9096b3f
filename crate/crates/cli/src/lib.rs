//! Pipeline wiring behind the `volasym` binary.

pub mod args;

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use volasym::asymmetry::{
    bootstrap_asymmetry, compute_asymmetry, lagged_xcorr, lags_to_csv, AsymmetryReport, BootstrapConfig,
};
use volasym::cleaning::{clean_series, CleanLog, CleanPolicy};
use volasym::ingest::{parse_csv, sort_and_validate, ColumnSpec, DuplicateDate, Rejection};
use volasym::rank_stats::MethodRegistry;
use volasym::report::{Panel, PanelKind, PanelSpec, RendererRegistry};
use volasym::returns::compute_returns;
use volasym::synth::{copula_pairs, pairs_to_csv, synth_prices, SynthKind, SynthSpec};
use volasym::{Error, ErrorClass, Result};

use args::{AnalysisArgs, Cli, CliCommand};

/// Options shared by `analyze` and `batch`.
#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    pub columns: ColumnSpec,
    pub policy: CleanPolicy,
    pub method: String,
    pub bootstrap: Option<BootstrapConfig>,
    pub max_lag: Option<usize>,
    pub formats: Vec<String>,
}

#[derive(Debug, Clone)]
pub enum Command {
    Analyze {
        input: PathBuf,
        symbol: Option<String>,
        group: Option<String>,
        options: AnalysisOptions,
    },
    Batch {
        manifest: PathBuf,
        options: AnalysisOptions,
    },
    Synth {
        spec: SynthSpec,
    },
    Report {
        reports: Vec<PathBuf>,
        formats: Vec<String>,
    },
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub out: PathBuf,
}

/// A failure tied to the input that caused it.
#[derive(Debug)]
pub struct Failure {
    pub input: Option<String>,
    pub error: Error,
}

impl Failure {
    fn new(input: impl Into<Option<String>>, error: Error) -> Self {
        Self {
            input: input.into(),
            error,
        }
    }

    pub fn exit_code(&self) -> i32 {
        exit_code(self.error.class())
    }

    /// `error reason=<token> exit=<code> [input=<path>] detail=<message>`
    pub fn line(&self) -> String {
        let input = self
            .input
            .as_deref()
            .map(|i| format!(" input={i}"))
            .unwrap_or_default();
        let detail = self.error.to_string().replace('\n', " ");
        format!(
            "error reason={} exit={}{} detail={:?}",
            self.error.reason(),
            self.exit_code(),
            input,
            detail
        )
    }
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure::new(None, error)
    }
}

pub fn exit_code(class: ErrorClass) -> i32 {
    match class {
        ErrorClass::Input => 1,
        ErrorClass::Config => 2,
        ErrorClass::Degenerate => 3,
    }
}

/// What a successful or partially successful run produced.
#[derive(Debug, Default)]
pub struct Outcome {
    pub artifacts: Vec<PathBuf>,
    pub reports: Vec<AsymmetryReport>,
    /// Per-input failures in a batch that otherwise continued.
    pub failures: Vec<Failure>,
    pub summary: Option<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        self.failures.first().map_or(0, Failure::exit_code)
    }
}

fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        Ok(match cli.command {
            CliCommand::Analyze {
                input,
                symbol,
                group,
                analysis,
            } => {
                let out = analysis.out.clone();
                RunConfig {
                    command: Command::Analyze {
                        input,
                        symbol,
                        group,
                        options: options_from(analysis)?,
                    },
                    out,
                }
            }
            CliCommand::Batch { manifest, analysis } => {
                let out = analysis.out.clone();
                RunConfig {
                    command: Command::Batch {
                        manifest,
                        options: options_from(analysis)?,
                    },
                    out,
                }
            }
            CliCommand::Synth {
                kind,
                n,
                rho,
                coupling,
                scale,
                seed,
                out,
            } => {
                let spec = SynthSpec {
                    kind: kind.parse::<SynthKind>()?,
                    n,
                    rho,
                    coupling,
                    seed,
                    scale,
                };
                spec.validate()?;
                RunConfig {
                    command: Command::Synth { spec },
                    out,
                }
            }
            CliCommand::Report { reports, out, format } => {
                check_formats(&format)?;
                RunConfig {
                    command: Command::Report {
                        reports,
                        formats: format,
                    },
                    out,
                }
            }
        })
    }
}

fn check_formats(formats: &[String]) -> Result<()> {
    let renderers = RendererRegistry::default();
    if formats.is_empty() {
        return Err(config("no output format requested"));
    }
    for f in formats {
        renderers.get(f)?;
    }
    Ok(())
}

fn options_from(a: AnalysisArgs) -> Result<AnalysisOptions> {
    let delimiter = match a.delimiter.as_str() {
        "," | "comma" => b',',
        ";" | "semicolon" => b';',
        "\\t" | "tab" => b'\t',
        other => return Err(config(format!("unsupported delimiter '{other}'"))),
    };
    let columns = ColumnSpec {
        date: a.date_col,
        open: a.open_col,
        close: a.close_col,
        date_format: a.date_format.parse()?,
        delimiter,
        decimal_comma: a.decimal_comma,
        ..ColumnSpec::default()
    };
    let policy = CleanPolicy {
        drop_nonpositive_prices: !a.keep_nonpositive,
        max_abs_logreturn: a.max_abs_logreturn,
        min_length: a.min_length,
    };
    policy.validate()?;
    MethodRegistry::default().get(&a.method)?;
    check_formats(&a.format)?;
    let bootstrap = match (a.boot, a.block_len) {
        (Some(n_boot), block_len) => Some(BootstrapConfig {
            n_boot,
            block_len,
            seed: a.seed,
        }),
        (None, Some(_)) => return Err(config("--block-len requires --boot")),
        (None, None) => None,
    };
    Ok(AnalysisOptions {
        columns,
        policy,
        method: a.method.to_ascii_lowercase(),
        bootstrap,
        max_lag: a.max_lag,
        formats: a.format,
    })
}

fn write(path: PathBuf, contents: &str, artifacts: &mut Vec<PathBuf>) -> Result<()> {
    fs::write(&path, contents)?;
    artifacts.push(path);
    Ok(())
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
struct IngestLog<'a> {
    rows_read: usize,
    rejected: &'a [Rejection],
    duplicates: &'a [DuplicateDate],
    clean: &'a CleanLog,
}

/// Run one input file through ingest, cleaning, returns and the asymmetry
/// measurement, writing `<symbol>.*` artifacts into `out`.
fn analyze_file(
    input: &Path,
    symbol: &str,
    group: Option<&str>,
    options: &AnalysisOptions,
    out: &Path,
) -> Result<(AsymmetryReport, Vec<PathBuf>)> {
    let method = MethodRegistry::default().get(&options.method)?;
    let renderers = RendererRegistry::default();

    let text = fs::read_to_string(input)?;
    let parsed = parse_csv(&text, symbol, &options.columns)?;
    let mut series = parsed.series;
    series.source = input.display().to_string();
    let (series, duplicates) = sort_and_validate(series)?;
    let (series, clean_log) = clean_series(series, &options.policy)?;
    let returns = compute_returns(&series)?;

    let mut report = match &options.bootstrap {
        Some(cfg) => bootstrap_asymmetry(&returns, cfg, method.as_ref())?,
        None => compute_asymmetry(&returns, method.as_ref())?,
    };
    report.group = group.map(str::to_string);
    let lags = options
        .max_lag
        .map(|max_lag| lagged_xcorr(&returns, max_lag, method.as_ref()))
        .transpose()?;

    let mut artifacts = Vec::new();
    let file = |suffix: &str| out.join(format!("{symbol}.{suffix}"));
    write(file("report.json"), &to_json(&report)?, &mut artifacts)?;
    let log = IngestLog {
        rows_read: parsed.rows_read,
        rejected: &parsed.rejected,
        duplicates: &duplicates,
        clean: &clean_log,
    };
    write(file("log.json"), &to_json(&log)?, &mut artifacts)?;

    let panel = Panel::timeseries(&returns, format!("{symbol}: intra-day and overnight log-returns"))?;
    for format in &options.formats {
        let spec = PanelSpec::new(PanelKind::Timeseries, panel.title.clone(), format.clone());
        let renderer = renderers.get(format)?;
        write(
            file(&format!("timeseries.{}", renderer.extension())),
            &renderers.render(&panel, &spec)?,
            &mut artifacts,
        )?;
        match renderer.name() {
            "csv" => {
                let table = format!("{}\n{}\n", AsymmetryReport::TABLE_HEADER, report.to_table_row());
                write(file("report.csv"), &table, &mut artifacts)?;
                if let Some(lags) = &lags {
                    write(file("lags.csv"), &lags_to_csv(lags), &mut artifacts)?;
                }
            }
            "json" => {
                if let Some(lags) = &lags {
                    write(file("lags.json"), &to_json(lags)?, &mut artifacts)?;
                }
            }
            _ => {}
        }
    }
    Ok((report, artifacts))
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "series".to_string())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub symbol: String,
    pub path: PathBuf,
    pub group: Option<String>,
}

/// `symbol,path[,group]` per line; blank lines and `#` comments are skipped.
/// Relative paths are resolved against `base`.
pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<ManifestEntry>> {
    let mut entries: Vec<ManifestEntry> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let (symbol, path, group) = match fields.as_slice() {
            [s, p] => (*s, *p, None),
            [s, p, g] => (*s, *p, Some(*g).filter(|g| !g.is_empty())),
            _ => {
                return Err(config(format!(
                    "manifest line {}: expected symbol,path[,group]",
                    i + 1
                )))
            }
        };
        if symbol.is_empty() || path.is_empty() {
            return Err(config(format!("manifest line {}: empty symbol or path", i + 1)));
        }
        if entries.iter().any(|e| e.symbol == symbol) {
            return Err(config(format!(
                "manifest line {}: duplicate symbol '{symbol}'",
                i + 1
            )));
        }
        entries.push(ManifestEntry {
            symbol: symbol.to_string(),
            path: base.join(path),
            group: group.map(str::to_string),
        });
    }
    if entries.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(entries)
}

/// `k of m equities satisfy C_nd > C_dn`
pub fn summary_line(reports: &[AsymmetryReport]) -> String {
    let k = reports.iter().filter(|r| r.night_leads()).count();
    format!("{k} of {} equities satisfy C_nd > C_dn", reports.len())
}

fn render_cross_panels(
    reports: &[AsymmetryReport],
    formats: &[String],
    out: &Path,
    artifacts: &mut Vec<PathBuf>,
) -> Result<()> {
    let renderers = RendererRegistry::default();
    let scatter = Panel::scatter(reports, "C_nd (preceding night) vs C_dn (following night)")?;
    let ratios = Panel::ratio_bars(reports, "C_nd / C_dn")?;
    for format in formats {
        let ext = renderers.get(format)?.extension();
        for (name, panel) in [("scatter", &scatter), ("ratios", &ratios)] {
            let spec = PanelSpec::new(panel.kind, panel.title.clone(), format.clone());
            write(
                out.join(format!("{name}.{ext}")),
                &renderers.render(panel, &spec)?,
                artifacts,
            )?;
        }
    }
    Ok(())
}

fn read_reports(path: &Path) -> Result<Vec<AsymmetryReport>> {
    let text = fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    Ok(if value.is_array() {
        serde_json::from_value(value)?
    } else {
        vec![serde_json::from_value(value)?]
    })
}

pub fn run(config: &RunConfig) -> std::result::Result<Outcome, Failure> {
    let out = &config.out;
    match &config.command {
        Command::Analyze {
            input,
            symbol,
            group,
            options,
        } => {
            fs::create_dir_all(out).map_err(Error::from)?;
            let symbol = symbol.clone().unwrap_or_else(|| file_stem(input));
            let (report, artifacts) = analyze_file(input, &symbol, group.as_deref(), options, out)
                .map_err(|e| Failure::new(input.display().to_string(), e))?;
            Ok(Outcome {
                artifacts,
                summary: Some(summary_line(std::slice::from_ref(&report))),
                reports: vec![report],
                failures: Vec::new(),
            })
        }
        Command::Batch { manifest, options } => {
            let text = fs::read_to_string(manifest)
                .map_err(|e| Failure::new(manifest.display().to_string(), e.into()))?;
            let base = manifest.parent().unwrap_or(Path::new("."));
            let entries =
                parse_manifest(&text, base).map_err(|e| Failure::new(manifest.display().to_string(), e))?;
            fs::create_dir_all(out).map_err(Error::from)?;

            let results: Vec<_> = entries
                .par_iter()
                .map(|e| analyze_file(&e.path, &e.symbol, e.group.as_deref(), options, out))
                .collect();

            let mut outcome = Outcome::default();
            for (entry, result) in entries.iter().zip(results) {
                match result {
                    Ok((report, artifacts)) => {
                        outcome.artifacts.extend(artifacts);
                        outcome.reports.push(report);
                    }
                    Err(e) => outcome
                        .failures
                        .push(Failure::new(entry.path.display().to_string(), e)),
                }
            }
            if outcome.reports.is_empty() {
                return Ok(outcome);
            }

            render_cross_panels(&outcome.reports, &options.formats, out, &mut outcome.artifacts)?;
            write(
                out.join("reports.json"),
                &to_json(&outcome.reports)?,
                &mut outcome.artifacts,
            )?;

            let mut by_symbol: Vec<&AsymmetryReport> = outcome.reports.iter().collect();
            by_symbol.sort_by(|a, b| a.symbol.cmp(&b.symbol));
            let mut summary = format!("{}\n", AsymmetryReport::TABLE_HEADER);
            for r in by_symbol {
                summary.push_str(&r.to_table_row());
                summary.push('\n');
            }
            let line = summary_line(&outcome.reports);
            write(out.join("summary.csv"), &summary, &mut outcome.artifacts)?;
            let mut text = line.clone();
            if !outcome.failures.is_empty() {
                text.push_str(&format!("; {} input(s) failed", outcome.failures.len()));
            }
            text.push('\n');
            write(out.join("summary.txt"), &text, &mut outcome.artifacts)?;
            outcome.summary = Some(line);
            Ok(outcome)
        }
        Command::Synth { spec } => {
            let csv = match spec.kind {
                SynthKind::CopulaPair => {
                    let (x, y) = copula_pairs(spec)?;
                    pairs_to_csv(&x, &y)
                }
                _ => synth_prices(spec)?.to_csv(),
            };
            if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(Error::from)?;
            }
            let mut artifacts = Vec::new();
            write(out.clone(), &csv, &mut artifacts)?;
            Ok(Outcome {
                artifacts,
                ..Outcome::default()
            })
        }
        Command::Report { reports, formats } => {
            let mut all = Vec::new();
            for path in reports {
                all.extend(read_reports(path).map_err(|e| Failure::new(path.display().to_string(), e))?);
            }
            if all.is_empty() {
                return Err(Error::EmptyInput.into());
            }
            fs::create_dir_all(out).map_err(Error::from)?;
            let mut outcome = Outcome {
                summary: Some(summary_line(&all)),
                ..Outcome::default()
            };
            render_cross_panels(&all, formats, out, &mut outcome.artifacts)?;
            outcome.reports = all;
            Ok(outcome)
        }
    }
}
