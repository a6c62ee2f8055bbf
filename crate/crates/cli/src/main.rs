//! `pmerge`: merge p-values, compute validity thresholds and prices, run the
//! dependence simulations and the sequential removal procedure.

mod svg;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pmerge::dependence_sim::{
    default_method_specs, default_rho_grid, ic_balance_check, sweep_rho, write_curve_csv,
    SignalCase, SweepConfig, DEFAULT_REPLICATIONS,
};
use pmerge::numfmt::format_sig;
use pmerge::sequential::{ingest_pvalues, run_sequential, AdjustedPValue, InputFormat};
use pmerge::thresholds::{
    default_methods, generate_log_k_table, generate_table, threshold, write_log_k_csv,
    ModePolicy, DEFAULT_KS, DEFAULT_MC_REPLICATIONS,
};
use pmerge::{combine, MergingMethod, Mode, PValueVector, ThresholdKind, ThresholdQuery};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser, Serialize)]
#[command(name = "pmerge", version, about = "Merging p-values under arbitrary dependence")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Master seed for every random stream.
    #[arg(long, global = true, env = "PMERGE_SEED", default_value_t = 0)]
    seed: u64,
    /// Significant digits of numbers in CSV output.
    #[arg(long, global = true, default_value_t = 6)]
    digits: usize,
    /// Replications used by `--mode monte-carlo`.
    #[arg(long, global = true, default_value_t = DEFAULT_MC_REPLICATIONS)]
    mc_replications: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
enum Command {
    /// Merge p-values and test at level epsilon.
    Merge {
        #[arg(long)]
        method: MergingMethod,
        #[arg(long, default_value = "vad")]
        kind: ThresholdKind,
        #[arg(long)]
        epsilon: f64,
        /// Comma-separated p-values.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "input")]
        values: Option<Vec<f64>>,
        /// File of p-values (one per line, or CSV).
        #[arg(long)]
        input: Option<PathBuf>,
        /// CSV column holding the p-values.
        #[arg(long)]
        column: Option<String>,
        #[arg(long)]
        mode: Option<Mode>,
    },
    /// One threshold value.
    Threshold {
        #[arg(long)]
        method: MergingMethod,
        #[arg(long)]
        kind: ThresholdKind,
        #[arg(long)]
        epsilon: f64,
        #[arg(long = "K", alias = "k")]
        k: usize,
        #[arg(long)]
        mode: Option<Mode>,
    },
    /// Prices for validity b/a and c/a over methods and K.
    Table {
        /// Level; several values are allowed with --per-log-k.
        #[arg(long, value_delimiter = ',', required = true)]
        epsilon: Vec<f64>,
        #[arg(long = "K", alias = "k", value_delimiter = ',')]
        k: Option<Vec<usize>>,
        /// Methods (order weights use `;` between weights).
        #[arg(long, value_delimiter = ',')]
        methods: Option<Vec<MergingMethod>>,
        /// Use this mode for every VI cell instead of the default policy.
        #[arg(long)]
        mode: Option<Mode>,
        /// One row per method with b/a and c/a columns per K.
        #[arg(long)]
        wide: bool,
        /// Decimals in the wide layout.
        #[arg(long, default_value_t = 3)]
        decimals: usize,
        /// VI price divided by log K.
        #[arg(long)]
        per_log_k: bool,
    },
    /// Rejection-probability curves over the factor correlation.
    Simulate {
        #[arg(long)]
        case: SignalCase,
        #[arg(long = "K", alias = "k")]
        k: usize,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
        /// Correlation grid; defaults to 0, 0.05, ..., 1.
        #[arg(long, value_delimiter = ',')]
        rho: Option<Vec<f64>>,
        #[arg(long = "N", alias = "n", default_value_t = DEFAULT_REPLICATIONS)]
        n: usize,
        /// Mode for VI thresholds instead of the default policy.
        #[arg(long)]
        mode: Option<Mode>,
        /// Also write an SVG chart here.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Two-sample KS comparison of the merged value under independence and comonotonicity.
    IcCheck {
        #[arg(long)]
        method: MergingMethod,
        #[arg(long = "K", alias = "k")]
        k: usize,
        #[arg(long = "N", alias = "n", default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 0.01)]
        level: f64,
    },
    /// Drop the smallest p-value until the merged value is no longer significant.
    Sequential {
        #[arg(long)]
        input: PathBuf,
        /// CSV column holding the p-values (default `p` for .csv files).
        #[arg(long)]
        column: Option<String>,
        #[arg(long)]
        method: MergingMethod,
        #[arg(long, default_value = "vad")]
        kind: ThresholdKind,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
        #[arg(long)]
        mode: Option<Mode>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<pmerge::Error> for Failure {
    fn from(e: pmerge::Error) -> Self {
        match e {
            pmerge::Error::Config(msg) => Failure::Usage(msg),
            e => Failure::Domain(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match serde_json::to_string(&cli) {
        Ok(cfg) => eprintln!("pmerge config: {cfg}"),
        Err(e) => eprintln!("pmerge config: <unserializable: {e}>"),
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn open_output(cli: &Cli) -> io::Result<Box<dyn Write>> {
    Ok(match &cli.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize + ?Sized>(out: &mut dyn Write, value: &T) -> Outcome {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

/// An explicit mode wins; `monte-carlo` picks up the global replication count
/// and seed. Otherwise VI thresholds follow the default policy and the rest
/// are exact.
fn resolve_mode(
    cli: &Cli,
    mode: Option<Mode>,
    method: &MergingMethod,
    kind: ThresholdKind,
    epsilon: f64,
    k: usize,
) -> Mode {
    match mode {
        Some(Mode::MonteCarlo { .. }) => Mode::MonteCarlo {
            n: cli.mc_replications,
            seed: cli.seed,
        },
        Some(m) => m,
        None if kind == ThresholdKind::Vi => ModePolicy::default().vi_mode(method, epsilon, k),
        None => Mode::Exact,
    }
}

fn input_format(path: &Path, column: &Option<String>) -> InputFormat {
    match column {
        Some(c) => InputFormat::Csv { column: c.clone() },
        None if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) => {
            InputFormat::Csv { column: "p".into() }
        }
        None => InputFormat::Text,
    }
}

fn load(path: &Path, column: &Option<String>) -> Result<PValueVector, Failure> {
    let p = ingest_pvalues(path, &input_format(path, column))?;
    eprintln!(
        "pmerge input: {} p-values from {}, min {}, max {}",
        p.len(),
        path.display(),
        format_sig(p.min(), 6),
        format_sig(p.max(), 6)
    );
    Ok(p)
}

fn write_svg(path: &Path, contents: &str) -> Outcome {
    std::fs::write(path, contents)?;
    eprintln!("pmerge: chart written to {}", path.display());
    Ok(())
}

fn run(cli: &Cli) -> Outcome {
    let d = cli.digits;
    match &cli.command {
        Command::Merge {
            method,
            kind,
            epsilon,
            values,
            input,
            column,
            mode,
        } => {
            let p = match (values, input) {
                (Some(v), None) => PValueVector::new(v.clone())?,
                (None, Some(path)) => load(path, column)?,
                _ => return Err(Failure::Usage("merge needs --values or --input".into())),
            };
            let k = p.len();
            let mode = resolve_mode(cli, *mode, method, *kind, *epsilon, k);
            eprintln!("pmerge resolved: K={k} mode={mode}");
            let combined = combine(method, &p)?;
            let q = ThresholdQuery::new(method.clone(), *kind, *epsilon, k).with_mode(mode);
            let g = threshold(&q)?;
            let adjusted = match mode {
                // an adjusted value would need a simulation per bisection step
                Mode::MonteCarlo { .. } => f64::NAN,
                _ => AdjustedPValue::new(method, *kind, mode, k)?.adjust(combined)?,
            };
            let reject = combined < g.value;
            let mut out = open_output(cli)?;
            match cli.format {
                Format::Json => write_json(
                    &mut *out,
                    &serde_json::json!({
                        "method": method, "kind": kind, "epsilon": epsilon, "K": k,
                        "combined": combined, "threshold": g.value, "adjusted": adjusted,
                        "reject": reject, "mode": g.mode_used.to_string(),
                    }),
                )?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut out);
                    w.write_record([
                        "method", "kind", "epsilon", "K", "combined", "threshold", "adjusted", "reject", "mode",
                    ])?;
                    w.write_record([
                        method.to_string(),
                        kind.to_string(),
                        format_sig(*epsilon, d),
                        k.to_string(),
                        format_sig(combined, d),
                        format_sig(g.value, d),
                        format_sig(adjusted, d),
                        reject.to_string(),
                        g.mode_used.to_string(),
                    ])?;
                    w.flush()?;
                }
            }
            out.flush()?;
        }
        Command::Threshold {
            method,
            kind,
            epsilon,
            k,
            mode,
        } => {
            let mode = resolve_mode(cli, *mode, method, *kind, *epsilon, *k);
            eprintln!("pmerge resolved: mode={mode}");
            let q = ThresholdQuery::new(method.clone(), *kind, *epsilon, *k).with_mode(mode);
            let r = threshold(&q)?;
            let mut out = open_output(cli)?;
            match cli.format {
                Format::Json => write_json(
                    &mut *out,
                    &serde_json::json!({
                        "method": method, "kind": kind, "epsilon": epsilon, "K": k,
                        "value": r.value, "mode": r.mode_used.to_string(), "diagnostics": r.diagnostics,
                    }),
                )?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut out);
                    w.write_record(["method", "kind", "epsilon", "K", "value", "mode", "diagnostics"])?;
                    w.write_record([
                        method.to_string(),
                        kind.to_string(),
                        format_sig(*epsilon, d),
                        k.to_string(),
                        format_sig(r.value, d),
                        r.mode_used.to_string(),
                        r.diagnostics.render(d),
                    ])?;
                    w.flush()?;
                }
            }
            out.flush()?;
        }
        Command::Table {
            epsilon,
            k,
            methods,
            mode,
            wide,
            decimals,
            per_log_k,
        } => {
            let ks = k.clone().unwrap_or_else(|| DEFAULT_KS.to_vec());
            let methods = methods.clone().unwrap_or_else(default_methods);
            let policy = match mode {
                Some(Mode::MonteCarlo { .. }) => ModePolicy::uniform(Mode::MonteCarlo {
                    n: cli.mc_replications,
                    seed: cli.seed,
                }),
                Some(m) => ModePolicy::uniform(*m),
                None => ModePolicy::default(),
            };
            eprintln!("pmerge resolved: K={ks:?} policy={policy:?}");
            let mut out = open_output(cli)?;
            if *per_log_k {
                let rows = generate_log_k_table(epsilon, &ks, &methods, &policy);
                match cli.format {
                    Format::Json => write_json(&mut *out, &rows)?,
                    Format::Csv => write_log_k_csv(&rows, &mut out, d)?,
                }
            } else {
                let [eps] = epsilon.as_slice() else {
                    return Err(Failure::Usage(
                        "table takes one --epsilon unless --per-log-k is given".into(),
                    ));
                };
                let table = generate_table(*eps, &ks, &methods, &policy)?;
                for c in table.cells.iter().filter(|c| c.error.is_some()) {
                    eprintln!(
                        "pmerge warning: {} K={} {}: {}",
                        c.label,
                        c.k,
                        c.kind,
                        c.error.as_deref().unwrap_or_default()
                    );
                }
                match (cli.format, wide) {
                    (Format::Json, _) => write_json(&mut *out, &table)?,
                    (Format::Csv, true) => table.write_wide_csv(&mut out, *decimals)?,
                    (Format::Csv, false) => table.write_csv(&mut out, d)?,
                }
            }
            out.flush()?;
        }
        Command::Simulate {
            case,
            k,
            epsilon,
            rho,
            n,
            mode,
            svg,
        } => {
            let policy = match mode {
                Some(Mode::MonteCarlo { .. }) => ModePolicy::uniform(Mode::MonteCarlo {
                    n: cli.mc_replications,
                    seed: cli.seed,
                }),
                Some(m) => ModePolicy::uniform(*m),
                None => ModePolicy::default(),
            };
            let config = SweepConfig {
                case: *case,
                k: *k,
                epsilon: *epsilon,
                rho_grid: rho.clone().unwrap_or_else(default_rho_grid),
                methods: default_method_specs(*epsilon, *k, &policy),
                n: *n,
                seed: cli.seed,
            };
            eprintln!("pmerge resolved: {}", serde_json::to_string(&config)?);
            let points = sweep_rho(&config)?;
            let mut out = open_output(cli)?;
            match cli.format {
                Format::Json => write_json(&mut *out, &points)?,
                Format::Csv => write_curve_csv(&points, &mut out, d)?,
            }
            out.flush()?;
            if let Some(path) = svg {
                let mut series: Vec<svg::Series> = Vec::new();
                for p in &points {
                    let name = format!("{} {}", p.method, p.threshold_kind);
                    match series.iter_mut().find(|s| s.name == name) {
                        Some(s) => s.points.push((p.rho, p.rp)),
                        None => series.push(svg::Series {
                            name,
                            points: vec![(p.rho, p.rp)],
                        }),
                    }
                }
                let title = format!("case {case}, K = {k}, epsilon = {epsilon}");
                write_svg(path, &svg::line_chart(&title, "rho", "rejection probability", &series))?;
            }
        }
        Command::IcCheck { method, k, n, level } => {
            let r = ic_balance_check(method, *k, *n, cli.seed, *level)?;
            let mut out = open_output(cli)?;
            match cli.format {
                Format::Json => write_json(
                    &mut *out,
                    &serde_json::json!({
                        "method": method, "K": k, "N": n, "seed": cli.seed, "result": r,
                    }),
                )?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut out);
                    w.write_record([
                        "method", "K", "N", "seed", "level", "ks_statistic", "critical_value", "balanced",
                    ])?;
                    w.write_record([
                        method.to_string(),
                        k.to_string(),
                        n.to_string(),
                        cli.seed.to_string(),
                        format_sig(*level, d),
                        format_sig(r.ks_statistic, d),
                        format_sig(r.critical_value, d),
                        r.balanced.to_string(),
                    ])?;
                    w.flush()?;
                }
            }
            out.flush()?;
        }
        Command::Sequential {
            input,
            column,
            method,
            kind,
            epsilon,
            mode,
            svg,
        } => {
            if *kind == ThresholdKind::Vc {
                return Err(Failure::Usage("sequential supports --kind vad or vi".into()));
            }
            let p = load(input, column)?;
            let mode = resolve_mode(cli, *mode, method, *kind, *epsilon, p.len());
            eprintln!("pmerge resolved: mode={mode}");
            let report = run_sequential(&p, method, *kind, *epsilon, mode)?;
            eprintln!("pmerge result: stop_index={}", report.stop_index);
            let mut out = open_output(cli)?;
            match cli.format {
                Format::Json => write_json(&mut *out, &report)?,
                Format::Csv => report.write_csv(&mut out, d)?,
            }
            out.flush()?;
            if let Some(path) = svg {
                let series = [svg::Series {
                    name: format!("{method} {kind}"),
                    points: report
                        .steps
                        .iter()
                        .map(|s| (s.n_removed as f64, s.adjusted))
                        .collect(),
                }];
                write_svg(
                    path,
                    &svg::line_chart("sequential removal", "p-values removed", "adjusted p-value", &series),
                )?;
            }
        }
    }
    Ok(())
}
