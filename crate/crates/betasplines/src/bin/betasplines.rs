//! Command line frontend: tiling generation, wavelet-system exports,
//! golden-data verification, and dense function sampling.
//!
//! Output goes to stdout or `--out`; relative `--out` paths are resolved
//! against `BETASPLINES_OUT_DIR` when that variable is set. JSON output
//! embeds the resolved configuration; the other formats echo it to stderr
//! so the data stream stays clean. Exit code 0 means success, 2 a
//! configuration error, 3 a computation or verification failure.

use std::env;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};

use betasplines::{
    chain_rows, csv_table, generate_beta_integers, generate_fibonacci_chain, parse_golden,
    run_verification, sample_series, text_table, wavelet_equations_at_seeds,
    wavelet_summaries, zeta_profiles, builtin_golden, ChainRow, Envelope, Family, FieldSpec,
    ModelSetSpec, QuadRat, RunConfig, SampleFunction, SampleSeries, WaveletEquation,
    WaveletSummary, ZetaProfile,
};

#[derive(Parser)]
#[command(name = "betasplines", version, about = "Spline wavelets on aperiodic tilings")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,
    /// Write output to this file instead of stdout. Relative paths are
    /// resolved against BETASPLINES_OUT_DIR when set.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Omit the timestamp field from JSON output.
    #[arg(long, global = true)]
    no_timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Export the nodes of a tiling as rows.
    Generate {
        /// Which point set to generate.
        #[arg(long, value_enum, default_value_t = SetArg::Fibonacci)]
        set: SetArg,
        /// Inclusive index range A..B; empty when A > B.
        #[arg(long, value_parser = parse_range, default_value = "-10..10", allow_hyphen_values = true)]
        range: (i64, i64),
        /// Field family.
        #[arg(long, value_enum, default_value_t = FamilyArg::Minus)]
        family: FamilyArg,
        /// Field coefficient.
        #[arg(long, default_value_t = 1)]
        a: u32,
        /// Word length for beta-integer generation.
        #[arg(long, default_value_t = 8)]
        letters: usize,
    },
    /// Export the wavelet system of the Fibonacci chain.
    Wavelets {
        /// Vanishing moments.
        #[arg(long, default_value_t = 2)]
        s: usize,
        /// Which point set to build on (only the Fibonacci chain carries
        /// the wavelet construction).
        #[arg(long, value_enum, default_value_t = SetArg::Fibonacci)]
        set: SetArg,
        /// What to emit.
        #[arg(long, value_enum, default_value_t = EmitArg::Summary)]
        emit: EmitArg,
        /// Generation range for the chain.
        #[arg(long, value_parser = parse_range, default_value = "-40..40", allow_hyphen_values = true)]
        range: (i64, i64),
        /// Earliest node index to seed wavelets at.
        #[arg(long, allow_hyphen_values = true)]
        anchor: Option<i64>,
    },
    /// Check computed systems against the bundled reference tables.
    Verify {
        /// Treat known reference anomalies as failures.
        #[arg(long)]
        strict: bool,
        /// Load reference data from this file instead of the bundled copy.
        #[arg(long)]
        golden: Option<PathBuf>,
    },
    /// Sample functions densely for plotting.
    Sample {
        /// Which function family to sample.
        #[arg(long, value_enum, default_value_t = FunctionArg::Phi)]
        function: FunctionArg,
        /// Restrict to one letter class or support word.
        #[arg(long)]
        word: Option<String>,
        /// Samples per unit length.
        #[arg(long, default_value_t = 100)]
        density: u32,
        /// Vanishing moments.
        #[arg(long, default_value_t = 2)]
        s: usize,
        /// Generation range for the chain.
        #[arg(long, value_parser = parse_range, default_value = "-40..40", allow_hyphen_values = true)]
        range: (i64, i64),
        /// Earliest node index to seed wavelets at.
        #[arg(long, allow_hyphen_values = true)]
        anchor: Option<i64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Table,
    Csv,
    Json,
}

impl FormatArg {
    fn name(self) -> &'static str {
        match self {
            FormatArg::Table => "table",
            FormatArg::Csv => "csv",
            FormatArg::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SetArg {
    Fibonacci,
    Beta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Minus,
    Plus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EmitArg {
    Summary,
    Tables,
    Refinement,
}

impl EmitArg {
    fn name(self) -> &'static str {
        match self {
            EmitArg::Summary => "summary",
            EmitArg::Tables => "tables",
            EmitArg::Refinement => "refinement",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FunctionArg {
    Phi,
    Psi,
    Zeta,
    Interpolant,
}

impl From<FunctionArg> for SampleFunction {
    fn from(arg: FunctionArg) -> SampleFunction {
        match arg {
            FunctionArg::Phi => SampleFunction::Phi,
            FunctionArg::Psi => SampleFunction::Psi,
            FunctionArg::Zeta => SampleFunction::Zeta,
            FunctionArg::Interpolant => SampleFunction::Interpolant,
        }
    }
}

fn parse_range(text: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| format!("expected an inclusive range A..B, got {text:?}"))?;
    let lo = lo
        .trim()
        .parse()
        .map_err(|_| format!("range start {lo:?} is not an integer"))?;
    let hi = hi
        .trim()
        .parse()
        .map_err(|_| format!("range end {hi:?} is not an integer"))?;
    Ok((lo, hi))
}

enum Failure {
    Config(String),
    Compute(String),
}

impl From<betasplines::Error> for Failure {
    fn from(e: betasplines::Error) -> Failure {
        Failure::Compute(e.to_string())
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

struct Output {
    format: FormatArg,
    out: Option<PathBuf>,
    no_timestamp: bool,
}

fn run(cli: Cli) -> Result<(), Failure> {
    let output = Output {
        format: cli.format,
        out: cli.out,
        no_timestamp: cli.no_timestamp,
    };
    let format = output.format;
    match cli.command {
        Command::Generate { set, range, family, a, letters } => {
            let (config, rows) = cmd_generate(set, range, family, a, letters, format)?;
            emit_rows(&output, config, chain_header(), chain_cells(&rows), &rows)
        }
        Command::Wavelets { s, set, emit, range, anchor } => {
            if set != SetArg::Fibonacci {
                return Err(Failure::Config(
                    "wavelet export is only available for --set fibonacci".into(),
                ));
            }
            let seq = fibonacci(range.0, range.1)?;
            let theta = golden_theta();
            let config = RunConfig {
                command: "wavelets".into(),
                family: "minus".into(),
                a: 1,
                format: format.name().into(),
                set: Some("fibonacci".into()),
                s: Some(s),
                range: Some(range),
                emit: Some(emit.name().into()),
                normalization: Some("unit".into()),
                mode: Some("exact".into()),
                ..RunConfig::default()
            };
            match emit {
                EmitArg::Summary => {
                    let data = wavelet_summaries(&seq, &theta, s, anchor)?;
                    emit_rows(&output, config, summary_header(), summary_cells(&data), &data)
                }
                EmitArg::Tables => {
                    let data = zeta_profiles(&seq, &theta, s, anchor)?;
                    let header = profile_header(&data);
                    let cells = profile_cells(&data, header.len());
                    emit_rows_owned(&output, config, header, cells, &data)
                }
                EmitArg::Refinement => {
                    let data = wavelet_equations_at_seeds(&seq, &theta, s, anchor)?;
                    emit_rows(&output, config, equation_header(), equation_cells(&data), &data)
                }
            }
        }
        Command::Verify { strict, golden } => cmd_verify(&output, strict, golden),
        Command::Sample { function, word, density, s, range, anchor } => {
            let seq = fibonacci(range.0, range.1)?;
            let theta = golden_theta();
            let config = RunConfig {
                command: "sample".into(),
                family: "minus".into(),
                a: 1,
                format: format.name().into(),
                set: Some("fibonacci".into()),
                s: Some(s),
                range: Some(range),
                function: Some(SampleFunction::from(function).to_string()),
                word: word.clone(),
                density: Some(density),
                normalization: Some("unit".into()),
                mode: Some("exact".into()),
                ..RunConfig::default()
            };
            let data = sample_series(
                &seq,
                &theta,
                s,
                function.into(),
                word.as_deref(),
                density,
                anchor,
            )?;
            emit_rows(&output, config, series_header(), series_cells(&data), &data)
        }
    }
}

fn golden_theta() -> QuadRat {
    QuadRat::from_pq_int(FieldSpec::golden(), 1, 1)
}

fn fibonacci(lo: i64, hi: i64) -> Result<betasplines::NodeSequence, Failure> {
    let spec = ModelSetSpec::default_fibonacci();
    Ok(generate_fibonacci_chain(&spec, lo.min(-1) - 1, hi.max(1) + 1)?)
}

fn cmd_generate(
    set: SetArg,
    range: (i64, i64),
    family: FamilyArg,
    a: u32,
    letters: usize,
    format: FormatArg,
) -> Result<(RunConfig, Vec<ChainRow>), Failure> {
    let family_value = match family {
        FamilyArg::Minus => Family::Minus,
        FamilyArg::Plus => Family::Plus,
    };
    let field = FieldSpec::new(family_value, a).map_err(|e| Failure::Config(e.to_string()))?;
    let (lo, hi) = range;
    let mut config = RunConfig {
        command: "generate".into(),
        family: format!("{family_value:?}").to_lowercase(),
        a,
        format: format.name().into(),
        range: Some(range),
        mode: Some("exact".into()),
        ..RunConfig::default()
    };
    let rows = match set {
        SetArg::Fibonacci => {
            config.set = Some("fibonacci".into());
            if field != FieldSpec::golden() {
                return Err(Failure::Config(
                    "the fibonacci chain is generated over --family minus --a 1".into(),
                ));
            }
            let seq = fibonacci(lo, hi)?;
            chain_rows(&seq, &golden_theta(), lo, hi)?
        }
        SetArg::Beta => {
            config.set = Some("beta".into());
            config.letters = Some(letters);
            let seq = generate_beta_integers(field, letters, lo < 0)?;
            let (seq_lo, seq_hi) = seq.index_range();
            let (lo, hi) = (lo.max(seq_lo), hi.min(seq_hi));
            chain_rows(&seq, &field.beta(), lo, hi)?
        }
    };
    Ok((config, rows))
}

fn cmd_verify(out: &Output, strict: bool, golden_path: Option<PathBuf>) -> Result<(), Failure> {
    let (golden, source) = match &golden_path {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                Failure::Compute(format!("cannot read {}: {e}", path.display()))
            })?;
            (parse_golden(&text)?, path.display().to_string())
        }
        None => (builtin_golden(), "builtin".to_string()),
    };
    let config = RunConfig {
        command: "verify".into(),
        family: golden.family.clone(),
        a: golden.a,
        format: out.format.name().into(),
        s: Some(golden.s),
        normalization: Some("unit".into()),
        mode: Some("exact".into()),
        golden: Some(source),
        strict: Some(strict),
        ..RunConfig::default()
    };
    let report = run_verification(&golden)?;
    let ok = report.ok(strict);
    let summary = report.summary_line();
    let header = vec!["status", "name", "detail"];
    let cells: Vec<Vec<String>> = report
        .checks
        .iter()
        .map(|c| vec![c.status.to_string(), c.name.clone(), c.detail.clone()])
        .collect();
    match out.format {
        FormatArg::Json => {
            let envelope = Envelope::new(config, timestamp(out), &report);
            write_output(out, &envelope.to_json()?)?;
        }
        FormatArg::Csv => {
            eprintln!("# {}", config.summary_line());
            write_output(out, &csv_table(&header, &cells))?;
        }
        FormatArg::Table => {
            eprintln!("# {}", config.summary_line());
            let mut text = text_table(&header, &cells);
            text.push_str(&format!("\n{summary}\n"));
            write_output(out, &text)?;
        }
    }
    if ok {
        Ok(())
    } else {
        let treated = if strict && report.failed() == 0 {
            " (warnings fail in strict mode)"
        } else {
            ""
        };
        Err(Failure::Compute(format!("verification failed: {summary}{treated}")))
    }
}

fn timestamp(out: &Output) -> Option<u64> {
    if out.no_timestamp {
        return None;
    }
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .ok()
        .map(|d| d.as_secs())
}

fn resolve_out(path: &Path) -> PathBuf {
    if path.is_relative() {
        if let Some(dir) = env::var_os("BETASPLINES_OUT_DIR") {
            return PathBuf::from(dir).join(path);
        }
    }
    path.to_path_buf()
}

fn write_output(out: &Output, text: &str) -> Result<(), Failure> {
    match &out.out {
        Some(path) => {
            let target = resolve_out(path);
            fs::write(&target, text).map_err(|e| {
                Failure::Compute(format!("cannot write {}: {e}", target.display()))
            })
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_rows<T: serde::Serialize>(
    out: &Output,
    config: RunConfig,
    header: Vec<&'static str>,
    cells: Vec<Vec<String>>,
    data: &T,
) -> Result<(), Failure> {
    let owned: Vec<String> = header.iter().map(|h| h.to_string()).collect();
    emit_rows_owned(out, config, owned, cells, data)
}

fn emit_rows_owned<T: serde::Serialize>(
    out: &Output,
    config: RunConfig,
    header: Vec<String>,
    cells: Vec<Vec<String>>,
    data: &T,
) -> Result<(), Failure> {
    let header_refs: Vec<&str> = header.iter().map(|h| h.as_str()).collect();
    match out.format {
        FormatArg::Json => {
            let envelope = Envelope::new(config, timestamp(out), data);
            write_output(out, &envelope.to_json()?)
        }
        FormatArg::Csv => {
            eprintln!("# {}", config.summary_line());
            write_output(out, &csv_table(&header_refs, &cells))
        }
        FormatArg::Table => {
            eprintln!("# {}", config.summary_line());
            write_output(out, &text_table(&header_refs, &cells))
        }
    }
}

fn chain_header() -> Vec<&'static str> {
    vec!["index", "node", "value", "letter", "in_inflated_set", "digits"]
}

fn chain_cells(rows: &[ChainRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            vec![
                r.index.to_string(),
                r.node.clone(),
                r.value.to_string(),
                r.letter.clone().unwrap_or_default(),
                r.in_inflated_set.to_string(),
                r.digits.clone().unwrap_or_default(),
            ]
        })
        .collect()
}

fn summary_header() -> Vec<&'static str> {
    vec![
        "word",
        "seed_index",
        "seed_node",
        "support_tiles",
        "vanishing_moments",
        "norm",
        "norm_scaled",
    ]
}

fn summary_cells(data: &[WaveletSummary]) -> Vec<Vec<String>> {
    data.iter()
        .map(|w| {
            vec![
                w.word.clone(),
                w.seed_index.to_string(),
                w.seed_node.clone(),
                w.support_tiles.to_string(),
                w.vanishing_moments.to_string(),
                w.norm.to_string(),
                w.norm_scaled.to_string(),
            ]
        })
        .collect()
}

fn profile_header(data: &[ZetaProfile]) -> Vec<String> {
    let coefficients = data
        .iter()
        .flat_map(|p| p.pieces.iter())
        .map(Vec::len)
        .max()
        .unwrap_or(0);
    let mut header = vec![
        "word".to_string(),
        "seed_index".to_string(),
        "piece".to_string(),
        "tile".to_string(),
        "left".to_string(),
    ];
    for i in 0..coefficients {
        header.push(format!("c{i}"));
    }
    header.push("norm".to_string());
    header.push("norm_sq".to_string());
    header
}

fn profile_cells(data: &[ZetaProfile], columns: usize) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for profile in data {
        for (i, piece) in profile.pieces.iter().enumerate() {
            let mut row = vec![
                profile.word.clone(),
                profile.seed_index.to_string(),
                i.to_string(),
                profile.tiles[i].clone(),
                profile.breakpoints[i].clone(),
            ];
            row.extend(piece.iter().cloned());
            while row.len() < columns - 2 {
                row.push(String::new());
            }
            row.push(profile.norm.to_string());
            row.push(profile.norm_sq.clone());
            rows.push(row);
        }
    }
    rows
}

fn equation_header() -> Vec<&'static str> {
    vec![
        "word",
        "seed_index",
        "phi",
        "node_index",
        "node",
        "coefficient",
        "norm_scaled",
        "norm_sq_scaled",
    ]
}

fn equation_cells(data: &[WaveletEquation]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for equation in data {
        for term in &equation.terms {
            rows.push(vec![
                equation.word.clone(),
                equation.seed_index.to_string(),
                term.phi.clone(),
                term.node_index.to_string(),
                term.node.clone(),
                term.coefficient.clone(),
                equation.norm_scaled.to_string(),
                equation.norm_sq_scaled.clone(),
            ]);
        }
    }
    rows
}

fn series_header() -> Vec<&'static str> {
    vec!["label", "x", "y"]
}

fn series_cells(data: &[SampleSeries]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for series in data {
        for &(x, y) in &series.samples {
            rows.push(vec![series.label.clone(), x.to_string(), y.to_string()]);
        }
    }
    rows
}
