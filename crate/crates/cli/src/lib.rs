//! Argument handling, plot-data export and report formatting for the `aesec` binary.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use aesec::aes::AesKey;
use aesec::campaign::{CampaignConfig, CampaignResult, CodeKind, DecoderKind};
use aesec::codes::CodeParams;
use aesec::selftest::SelftestReport;
use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{flag}: {message}")]
    Usage { flag: &'static str, message: String },
    #[error("{path}: {message}")]
    File { path: PathBuf, message: String },
    #[error("selftest failed")]
    SelftestFailed,
    #[error(transparent)]
    Campaign(#[from] aesec::campaign::CampaignError),
}

impl CliError {
    fn usage(flag: &'static str, message: impl Into<String>) -> Self {
        CliError::Usage { flag, message: message.into() }
    }

    fn file(path: &Path, message: impl ToString) -> Self {
        CliError::File { path: path.to_owned(), message: message.to_string() }
    }

    /// 2 for bad invocations, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "aesec", version, about = "AES-128 as an error-correcting code: GRAND/ORBGRAND BER/BLER campaigns")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a Monte Carlo campaign over an Eb/N0 grid.
    Run(RunArgs),
    /// Check AES vectors, pattern generators, ML decoding and channel calibration.
    Selftest,
    /// Merge result files into one long-format CSV for plotting.
    PlotData(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CodeArg {
    Aes,
    Rlc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DecoderArg {
    Grand,
    Orbgrand,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long, value_enum, default_value = "aes")]
    pub code: CodeArg,
    #[arg(long, value_enum, default_value = "grand")]
    pub decoder: DecoderArg,
    /// Block length in bits.
    #[arg(long, default_value_t = 128)]
    pub n: usize,
    /// Message length in bits.
    #[arg(long, default_value_t = 116)]
    pub k: usize,
    /// Eb/N0 grid in dB: `start:step:stop` or a comma list.
    #[arg(long, default_value = "6:0.5:8", allow_hyphen_values = true)]
    pub ebn0: String,
    /// Oracle queries per block before abandoning.
    #[arg(long, default_value_t = 1_000_000)]
    pub max_queries: u64,
    /// Stop a point once this many block errors are seen.
    #[arg(long, default_value_t = 100)]
    pub min_block_errors: u64,
    /// Hard cap on blocks per point.
    #[arg(long, default_value_t = 1_000_000)]
    pub max_blocks: u64,
    /// Master seed for messages and noise.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// AES-128 key as 32 hex digits.
    #[arg(long, default_value = "000102030405060708090a0b0c0d0e0f")]
    pub aes_key: String,
    /// Seed for the random linear code's parity matrix.
    #[arg(long, default_value_t = 42)]
    pub rlc_seed: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    pub workers: Option<usize>,
    /// JSON result path; a `.csv` with per-point rows is written beside it. Stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the RLC generator matrix in text form (RLC runs only).
    #[arg(long)]
    pub save_code: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    /// Campaign result JSON files.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Output CSV path; stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A fully resolved `run` invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunPlan {
    pub config: CampaignConfig,
    pub workers: usize,
    pub out: Option<PathBuf>,
    pub save_code: Option<PathBuf>,
}

/// Parses `start:step:stop` (stop included when hit exactly, up to rounding)
/// or a comma-separated list.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("not a number: {t:?}"));
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [start, step, stop] => {
            let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
            if !step.is_finite() || step <= 0.0 {
                return Err(format!("step must be positive, got {step}"));
            }
            if stop < start {
                return Err(format!("stop {stop} is below start {start}"));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            (0..count).map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9).collect()
        }
        [list] => list.split(',').map(num).collect::<Result<Vec<_>, _>>()?,
        _ => return Err(format!("expected start:step:stop or a comma list, got {s:?}")),
    };
    if grid.is_empty() {
        return Err("grid is empty".into());
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err("grid must be strictly increasing".into());
    }
    Ok(grid)
}

impl RunArgs {
    pub fn resolve(&self) -> Result<RunPlan, CliError> {
        if self.k == 0 {
            return Err(CliError::usage("--k", "must be positive"));
        }
        if self.k >= self.n {
            return Err(CliError::usage("--k", format!("must be below n = {} (got {})", self.n, self.k)));
        }
        let params = CodeParams::new(self.n, self.k).map_err(|e| CliError::usage("--n", e.to_string()))?;
        if self.code == CodeArg::Aes && self.n != 128 {
            return Err(CliError::usage("--n", format!("the AES code has n = 128, got {}", self.n)));
        }
        let ebn0_grid_db = parse_grid(&self.ebn0).map_err(|m| CliError::usage("--ebn0", m))?;
        let aes_key = AesKey::from_hex(&self.aes_key).map_err(|e| CliError::usage("--aes-key", e.to_string()))?;
        if self.max_queries == 0 {
            return Err(CliError::usage("--max-queries", "must be at least 1"));
        }
        if self.min_block_errors == 0 {
            return Err(CliError::usage("--min-block-errors", "must be at least 1"));
        }
        if self.max_blocks < self.min_block_errors {
            return Err(CliError::usage("--max-blocks", "must be at least --min-block-errors"));
        }
        if self.workers == Some(0) {
            return Err(CliError::usage("--workers", "must be at least 1"));
        }
        if self.save_code.is_some() && self.code != CodeArg::Rlc {
            return Err(CliError::usage("--save-code", "only RLC runs have a generator matrix"));
        }
        let config = CampaignConfig {
            code_kind: match self.code {
                CodeArg::Aes => CodeKind::Aes,
                CodeArg::Rlc => CodeKind::Rlc,
            },
            decoder_kind: match self.decoder {
                DecoderArg::Grand => DecoderKind::Grand,
                DecoderArg::Orbgrand => DecoderKind::Orbgrand,
            },
            params,
            ebn0_grid_db,
            max_queries: self.max_queries,
            min_block_errors: self.min_block_errors,
            max_blocks: self.max_blocks,
            master_seed: self.seed,
            aes_key,
            rlc_seed: self.rlc_seed,
        };
        config.validate()?;
        let workers = self
            .workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        Ok(RunPlan { config, workers, out: self.out.clone(), save_code: self.save_code.clone() })
    }
}

/// Parses `argv` (program name first) into a `run` plan.
pub fn parse_and_validate<I, T>(argv: I) -> Result<RunPlan, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError::usage("arguments", e.to_string()))?;
    match cli.command {
        Command::Run(args) => args.resolve(),
        _ => Err(CliError::usage("subcommand", "expected `run`")),
    }
}

/// `path` with its extension replaced by `csv`.
pub fn csv_sibling(path: &Path) -> PathBuf {
    path.with_extension("csv")
}

pub fn write_outputs(plan: &RunPlan, result: &CampaignResult) -> Result<(), CliError> {
    if let Some(out) = &plan.out {
        fs::write(out, result.to_json()).map_err(|e| CliError::file(out, e))?;
        let csv = csv_sibling(out);
        fs::write(&csv, result.to_csv()).map_err(|e| CliError::file(&csv, e))?;
    }
    if let Some(path) = &plan.save_code {
        if let aesec::codes::Code::Rlc(code) = plan.config.build_code()? {
            fs::write(path, code.to_text()).map_err(|e| CliError::file(path, e))?;
        }
    }
    Ok(())
}

/// One row of the long-format plot table.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotRow {
    pub series: String,
    pub ebn0_db: f64,
    pub ber: f64,
    pub bler: f64,
    pub ber_ci_lo: f64,
    pub ber_ci_hi: f64,
    pub bler_ci_lo: f64,
    pub bler_ci_hi: f64,
}

pub const PLOT_HEADER: &str = "series,ebn0_db,ber,bler,ber_ci_lo,ber_ci_hi,bler_ci_lo,bler_ci_hi";

pub fn load_result(path: &Path) -> Result<CampaignResult, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::file(path, e))?;
    CampaignResult::from_json(&text).map_err(|e| CliError::file(path, e))
}

/// Rows grouped by series label (code/decoder), each series sorted by Eb/N0.
pub fn plot_rows(inputs: &[(PathBuf, CampaignResult)]) -> Result<Vec<PlotRow>, CliError> {
    let mut series: BTreeMap<String, Vec<PlotRow>> = BTreeMap::new();
    for (path, result) in inputs {
        let label = result.config.series_label();
        let rows = series.entry(label.clone()).or_default();
        for p in &result.points {
            if rows.iter().any(|r| r.ebn0_db == p.ebn0_db) {
                return Err(CliError::file(path, format!("duplicate point {} dB in series {label}", p.ebn0_db)));
            }
            rows.push(PlotRow {
                series: label.clone(),
                ebn0_db: p.ebn0_db,
                ber: p.ber,
                bler: p.bler,
                ber_ci_lo: p.ber_ci95.lo,
                ber_ci_hi: p.ber_ci95.hi,
                bler_ci_lo: p.bler_ci95.lo,
                bler_ci_hi: p.bler_ci95.hi,
            });
        }
    }
    Ok(series
        .into_values()
        .flat_map(|mut rows| {
            rows.sort_by(|a, b| a.ebn0_db.total_cmp(&b.ebn0_db));
            rows
        })
        .collect())
}

pub fn plot_csv(rows: &[PlotRow]) -> String {
    let mut out = String::from(PLOT_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.series, r.ebn0_db, r.ber, r.bler, r.ber_ci_lo, r.ber_ci_hi, r.bler_ci_lo, r.bler_ci_hi
        ));
    }
    out
}

/// Inverse of [`plot_csv`].
pub fn parse_plot_csv(text: &str) -> Result<Vec<PlotRow>, String> {
    let mut lines = text.lines();
    if lines.next() != Some(PLOT_HEADER) {
        return Err("missing or unexpected header".into());
    }
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 8 {
                return Err(format!("expected 8 fields: {line:?}"));
            }
            let x = |i: usize| f[i].parse::<f64>().map_err(|_| format!("bad number {:?}", f[i]));
            Ok(PlotRow {
                series: f[0].to_owned(),
                ebn0_db: x(1)?,
                ber: x(2)?,
                bler: x(3)?,
                ber_ci_lo: x(4)?,
                ber_ci_hi: x(5)?,
                bler_ci_lo: x(6)?,
                bler_ci_hi: x(7)?,
            })
        })
        .collect()
}

pub fn plot_data(args: &PlotArgs) -> Result<String, CliError> {
    let inputs = args
        .inputs
        .iter()
        .map(|p| load_result(p).map(|r| (p.clone(), r)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(plot_csv(&plot_rows(&inputs)?))
}

pub fn format_selftest(report: &SelftestReport) -> String {
    let mut out = String::new();
    for c in &report.checks {
        let tag = match (c.informational, c.passed) {
            (true, _) => "INFO",
            (false, true) => "PASS",
            (false, false) => "FAIL",
        };
        out.push_str(&format!("{tag} {}: {}\n", c.name, c.detail));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(s: &str) -> Vec<String> {
        std::iter::once("aesec".to_owned()).chain(s.split_whitespace().map(String::from)).collect()
    }

    #[test]
    fn grid_syntax() {
        assert_eq!(parse_grid("4:0.5:9").unwrap().len(), 11);
        assert_eq!(parse_grid("6:0.5:8").unwrap(), vec![6.0, 6.5, 7.0, 7.5, 8.0]);
        assert_eq!(parse_grid("0:0.1:0.3").unwrap(), vec![0.0, 0.1, 0.2, 0.3]);
        assert_eq!(parse_grid("1:1:2.5").unwrap(), vec![1.0, 2.0]);
        assert_eq!(parse_grid("6,7,8").unwrap(), vec![6.0, 7.0, 8.0]);
        assert_eq!(parse_grid("-2:1:0").unwrap(), vec![-2.0, -1.0, 0.0]);
        assert!(parse_grid("").is_err());
        assert!(parse_grid("8,7").is_err());
        assert!(parse_grid("1:0:2").is_err());
        assert!(parse_grid("3:1:2").is_err());
        assert!(parse_grid("1:2").is_err());
    }

    #[test]
    fn run_orbgrand_grid() {
        let plan = parse_and_validate(argv("run --code aes --decoder orbgrand --ebn0 4:0.5:9")).unwrap();
        assert_eq!(plan.config.ebn0_grid_db.len(), 11);
        assert_eq!(plan.config.code_kind, CodeKind::Aes);
        assert_eq!(plan.config.decoder_kind, DecoderKind::Orbgrand);
    }

    #[test]
    fn defaults_match_headline_setup() {
        let plan = parse_and_validate(argv("run")).unwrap();
        let c = &plan.config;
        assert_eq!((c.params.n, c.params.k), (128, 116));
        assert_eq!(format!("{:.2}", c.params.rate()), "0.91");
        assert_eq!((c.code_kind, c.decoder_kind), (CodeKind::Aes, DecoderKind::Grand));
        assert_eq!(c.max_queries, 1_000_000);
        assert_eq!(c.min_block_errors, 100);
        assert_eq!(c.aes_key, AesKey::EXAMPLE);
        assert_eq!(*c, CampaignConfig::default());
        assert!(plan.workers >= 1);
    }

    #[test]
    fn validation_errors_name_the_flag() {
        let err = parse_and_validate(argv("run --k 130 --n 128")).unwrap_err();
        assert!(err.to_string().starts_with("--k"), "{err}");
        assert_eq!(err.exit_code(), 2);

        let cases = [
            ("run --k 128", "--k"),
            ("run --ebn0 8,7", "--ebn0"),
            ("run --aes-key 1234", "--aes-key"),
            ("run --n 64 --k 32", "--n"),
            ("run --max-queries 0", "--max-queries"),
            ("run --min-block-errors 0", "--min-block-errors"),
            ("run --max-blocks 5", "--max-blocks"),
            ("run --workers 0", "--workers"),
            ("run --bogus 1", "arguments"),
        ];
        for (line, flag) in cases {
            let err = parse_and_validate(argv(line)).unwrap_err();
            assert!(err.to_string().starts_with(flag), "{line}: {err}");
        }
    }

    #[test]
    fn rlc_with_short_block() {
        let plan = parse_and_validate(argv("run --code rlc --n 64 --k 52 --ebn0 5")).unwrap();
        assert_eq!(plan.config.params, CodeParams { n: 64, k: 52 });
        assert_eq!(plan.config.ebn0_grid_db, vec![5.0]);
    }

    #[test]
    fn plot_csv_parse_back() {
        let rows = vec![
            PlotRow {
                series: "AES/GRAND".into(),
                ebn0_db: 6.5,
                ber: 1.0 / 3.0,
                bler: 0.1,
                ber_ci_lo: 0.2,
                ber_ci_hi: 0.4,
                bler_ci_lo: 0.05,
                bler_ci_hi: 0.2,
            },
            PlotRow { series: "RLC/ORBGRAND".into(), ebn0_db: 7.0, ..Default::default() },
        ];
        assert_eq!(parse_plot_csv(&plot_csv(&rows)).unwrap(), rows);
        assert!(parse_plot_csv("nope\n").is_err());
    }

    impl Default for PlotRow {
        fn default() -> Self {
            PlotRow {
                series: String::new(),
                ebn0_db: 0.0,
                ber: 0.0,
                bler: 0.0,
                ber_ci_lo: 0.0,
                ber_ci_hi: 0.0,
                bler_ci_lo: 0.0,
                bler_ci_hi: 0.0,
            }
        }
    }
}
