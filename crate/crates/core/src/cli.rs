//! Command-line front end: `analyze`, `batch`, `fit`, `model` and `synth`.
//!
//! Exit codes: 0 success, 1 analysis rejection, 2 usage or parameter error,
//! 3 I/O or decode error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::audio_io::write_wav_pcm16;
use crate::error::{Error, Result};
use crate::pipeline::{analyze_file, AnalysisParams, DEFAULT_BAND_WIDTH_CENTS};
use crate::stats::{group_stats, summarise, write_fit_csv, FitRow, GroupReport, SkippedGroup};
use crate::synth::{render, true_measurement, SynthSpec};
use crate::vibrato_model::{
    acoustic_depth, model_curves, SourceInfo, StringSpec, VertexQuadratic, VibratoMeasurement,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Caps the worker count of `batch`.
pub const THREADS_ENV: &str = "VIBRATO_LAB_THREADS";

/// Columns of the `batch` output table.
pub const BATCH_COLUMNS: [&str; 12] = [
    "d_cents", "d_hz", "f_c_hz", "D_frac", "x_c_frac", "rate_hz", "n_cycles", "file", "player",
    "corpus", "status", "reason",
];

pub const MODEL_COLUMNS: [&str; 3] = ["x_c", "cents_uncompensated", "cents_compensated"];

#[derive(Debug, Parser)]
#[command(
    name = "vibrato-lab",
    version,
    about = "Measure vibrato in bowed-string recordings"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Measure one excerpt.
    Analyze(AnalyzeArgs),
    /// Measure every excerpt listed in a manifest CSV.
    Batch(BatchArgs),
    /// Fit a polynomial and rank correlation between two result columns.
    Fit(FitArgs),
    /// Pitch excursion along the string for constant and position-dependent depth.
    Model(ModelArgs),
    /// Render a vibrato test tone.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub file: PathBuf,
    /// Open-string frequency in Hz, or a cello string name (C, G, D, A).
    #[arg(long, value_parser = parse_string)]
    pub string_freq: StringSpec,
    /// Approximate pitch of the note in Hz.
    #[arg(long)]
    pub center_hint: f64,
    #[arg(long, default_value_t = DEFAULT_BAND_WIDTH_CENTS)]
    pub band_width_cents: f64,
    #[arg(long)]
    pub start: Option<f64>,
    #[arg(long)]
    pub end: Option<f64>,
    #[arg(long, default_value = "")]
    pub player: String,
    #[arg(long, default_value = "")]
    pub corpus: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the pitch track (time_s,f0_hz,confidence) here.
    #[arg(long)]
    pub dump_track: Option<PathBuf>,
    /// Write extrema, trend and deviations here.
    #[arg(long)]
    pub dump_cycles: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    /// CSV with columns path,string_freq_hz,center_hint_hz and optionally
    /// band_width_cents,start_s,end_s,player,corpus. Relative paths are
    /// resolved against the manifest's directory.
    pub manifest: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    pub results: PathBuf,
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub y: String,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub degree: u8,
    /// Also fit each value of this column separately.
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Open-string frequency; adds the note frequency to the crossing report.
    #[arg(long, value_parser = parse_string)]
    pub f_string: Option<StringSpec>,
    /// Constant physical depth D.
    #[arg(long)]
    pub const_d: f64,
    /// Position-dependent depth as `a,h,k` of a(x − h)² + k.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_quad)]
    pub quad_d: VertexQuadratic,
    #[arg(long, default_value_t = 0.0)]
    pub x_min: f64,
    #[arg(long, default_value_t = 0.9)]
    pub x_max: f64,
    /// Number of grid points, ends included.
    #[arg(long, default_value_t = 91)]
    pub steps: usize,
    /// Curve CSV destination (stdout if absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 440.0)]
    pub f_center: f64,
    #[arg(long, default_value_t = 20.0)]
    pub depth_cents: f64,
    #[arg(long, default_value_t = 6.0)]
    pub rate_hz: f64,
    #[arg(long, default_value_t = 2.0)]
    pub duration_s: f64,
    #[arg(long, default_value_t = 44100)]
    pub sample_rate: u32,
    #[arg(long, default_value_t = 3)]
    pub n_harmonics: u32,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub drift_hz_per_s: f64,
    #[arg(long, default_value_t = 0.0)]
    pub noise_rms: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the spec and the expected measurement as JSON.
    #[arg(long)]
    pub emit_truth: Option<PathBuf>,
    /// String for the expected measurement; defaults to the highest cello
    /// string at or below the centre.
    #[arg(long, value_parser = parse_string)]
    pub string_freq: Option<StringSpec>,
}

impl SynthArgs {
    pub fn spec(&self) -> SynthSpec {
        SynthSpec {
            f_center: self.f_center,
            depth_cents: self.depth_cents,
            rate_hz: self.rate_hz,
            duration_s: self.duration_s,
            sample_rate: self.sample_rate,
            n_harmonics: self.n_harmonics,
            drift_hz_per_s: self.drift_hz_per_s,
            noise_rms: self.noise_rms,
            seed: self.seed,
        }
    }
}

fn parse_string(s: &str) -> std::result::Result<StringSpec, String> {
    if let Some(spec) = StringSpec::cello(s) {
        return Ok(spec);
    }
    let f: f64 = s
        .parse()
        .map_err(|_| format!("`{s}` is neither a frequency nor a cello string name"))?;
    StringSpec::new(format!("{f}"), f).map_err(|e| e.to_string())
}

fn parse_quad(s: &str) -> std::result::Result<VertexQuadratic, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| format!("`{s}`: {e}"))?;
    match parts[..] {
        [a, h, k] => Ok(VertexQuadratic { a, h, k }),
        _ => Err(format!(
            "`{s}`: expected three comma-separated numbers a,h,k"
        )),
    }
}

/// Parse `args` (program name first) and run. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                return EXIT_USAGE;
            }
            let _ = write!(stdout, "{text}");
            return EXIT_OK;
        }
    };
    let outcome = match &cli.command {
        Command::Analyze(a) => cmd_analyze(a, stdout),
        Command::Batch(a) => cmd_batch(a, stderr),
        Command::Fit(a) => cmd_fit(a, stdout),
        Command::Model(a) => cmd_model(a, stdout, stderr),
        Command::Synth(a) => cmd_synth(a),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(e) => report_error(&e, stderr),
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.rejection_reason().is_some() {
        EXIT_REJECTED
    } else if e.is_io() || matches!(e, Error::Json(_)) {
        EXIT_IO
    } else {
        EXIT_USAGE
    }
}

fn report_error(e: &Error, stderr: &mut dyn Write) -> i32 {
    let code = exit_code(e);
    let body = match e {
        Error::Rejected { reason, detail } => serde_json::json!({
            "status": "rejected",
            "reason": reason,
            "detail": detail,
        }),
        other => serde_json::json!({
            "status": "error",
            "reason": other.to_string(),
        }),
    };
    let _ = writeln!(stderr, "{body}");
    code
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn cmd_analyze(args: &AnalyzeArgs, stdout: &mut dyn Write) -> Result<()> {
    let mut params = AnalysisParams::new(args.string_freq.clone(), args.center_hint);
    params.band_width_cents = args.band_width_cents;
    params.start_s = args.start;
    params.end_s = args.end;
    let source = SourceInfo {
        file: args.file.to_string_lossy().into_owned(),
        player: args.player.clone(),
        corpus: args.corpus.clone(),
    };
    let analysis = analyze_file(&args.file, &params, &source)?;

    if let Some(path) = &args.dump_track {
        let mut w = create(path)?;
        analysis.track.write_csv(&mut w)?;
        w.flush().map_err(io_err(path))?;
    }
    if let Some(path) = &args.dump_cycles {
        let mut w = create(path)?;
        analysis.cycles.write_csv(&mut w)?;
        w.flush().map_err(io_err(path))?;
    }

    let m = &analysis.measurement;
    match args.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *stdout);
            w.write_record(VibratoMeasurement::CSV_COLUMNS)?;
            w.write_record(m.csv_fields())?;
            w.flush().map_err(csv::Error::from)?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *stdout, m)?;
            writeln!(stdout).map_err(io_err(Path::new("<stdout>")))?;
        }
    }
    Ok(())
}

/// One manifest line.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ManifestRow {
    pub path: String,
    pub string_freq_hz: f64,
    pub center_hint_hz: f64,
    #[serde(default)]
    pub band_width_cents: Option<f64>,
    #[serde(default)]
    pub start_s: Option<f64>,
    #[serde(default)]
    pub end_s: Option<f64>,
    #[serde(default)]
    pub player: String,
    #[serde(default)]
    pub corpus: String,
}

impl ManifestRow {
    pub fn params(&self) -> Result<AnalysisParams> {
        if self.path.trim().is_empty() {
            return Err(Error::invalid("manifest path", "empty"));
        }
        let string = StringSpec::new(format!("{}", self.string_freq_hz), self.string_freq_hz)?;
        let mut params = AnalysisParams::new(string, self.center_hint_hz);
        params.band_width_cents = self.band_width_cents.unwrap_or(DEFAULT_BAND_WIDTH_CENTS);
        params.start_s = self.start_s;
        params.end_s = self.end_s;
        params.validate()?;
        Ok(params)
    }

    pub fn source(&self) -> SourceInfo {
        SourceInfo {
            file: self.path.clone(),
            player: self.player.clone(),
            corpus: self.corpus.clone(),
        }
    }
}

pub fn read_manifest(path: &Path) -> Result<Vec<ManifestRow>> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut rows = Vec::new();
    for (i, rec) in reader.deserialize::<ManifestRow>().enumerate() {
        rows.push(rec.map_err(|e| Error::invalid("manifest row", format!("line {}: {e}", i + 2)))?);
    }
    Ok(rows)
}

/// Batch result for one manifest row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchRow {
    pub source: SourceInfo,
    pub measurement: Option<VibratoMeasurement>,
    pub status: &'static str,
    pub reason: String,
}

impl BatchRow {
    pub fn csv_fields(&self) -> Vec<String> {
        let mut fields = match &self.measurement {
            Some(m) => m.csv_fields(),
            None => {
                let mut blank = vec![String::new(); 7];
                blank.extend([
                    self.source.file.clone(),
                    self.source.player.clone(),
                    self.source.corpus.clone(),
                ]);
                blank
            }
        };
        fields.push(self.status.to_string());
        fields.push(self.reason.clone());
        fields
    }
}

fn analyze_row(row: &ManifestRow, base: &Path) -> BatchRow {
    let source = row.source();
    let resolved = {
        let p = Path::new(&row.path);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            base.join(p)
        }
    };
    let result = row
        .params()
        .and_then(|params| analyze_file(&resolved, &params, &source));
    match result {
        Ok(analysis) => BatchRow {
            source,
            measurement: Some(analysis.measurement),
            status: "ok",
            reason: String::new(),
        },
        Err(e) => BatchRow {
            source,
            measurement: None,
            status: if e.rejection_reason().is_some() {
                "rejected"
            } else {
                "error"
            },
            reason: e
                .rejection_reason()
                .map_or_else(|| e.to_string(), str::to_string),
        },
    }
}

fn thread_cap() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| {
                Error::invalid(
                    "VIBRATO_LAB_THREADS",
                    format!("`{v}` is not a positive integer"),
                )
            }),
    }
}

/// Analyse every manifest row, in parallel, returning rows in manifest order.
pub fn run_batch(manifest: &Path) -> Result<Vec<BatchRow>> {
    let rows = read_manifest(manifest)?;
    let base = manifest.parent().unwrap_or(Path::new("")).to_path_buf();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_cap()?)
        .build()
        .map_err(|e| Error::invalid("thread pool", e.to_string()))?;
    Ok(pool.install(|| rows.par_iter().map(|r| analyze_row(r, &base)).collect()))
}

fn cmd_batch(args: &BatchArgs, stderr: &mut dyn Write) -> Result<()> {
    let results = run_batch(&args.manifest)?;
    let mut w = csv::Writer::from_writer(create(&args.out)?);
    w.write_record(BATCH_COLUMNS)?;
    for r in &results {
        w.write_record(r.csv_fields())?;
    }
    w.flush().map_err(csv::Error::from)?;

    let failed = results.iter().filter(|r| r.status != "ok").count();
    if results.is_empty() {
        let _ = writeln!(
            stderr,
            "warning: manifest {} has no rows",
            args.manifest.display()
        );
    } else if failed > 0 {
        let _ = writeln!(
            stderr,
            "warning: {failed} of {} rows not measured",
            results.len()
        );
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct FitReport<'a> {
    x: &'a str,
    y: &'a str,
    degree: usize,
    combined: GroupReport,
    groups: Vec<GroupReport>,
    skipped: Vec<SkippedGroup>,
}

/// Columns `x`, `y` (and optionally `group`) of a results table. Rows with a
/// `status` column other than `ok` are left out.
pub fn read_columns(
    path: &Path,
    x: &str,
    y: &str,
    group: Option<&str>,
) -> Result<(Vec<f64>, Vec<f64>, Vec<String>)> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    let headers = reader.headers()?.clone();
    let index = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| {
            Error::invalid(
                "column",
                format!("`{name}` not found in {}", path.display()),
            )
        })
    };
    let (ix, iy) = (index(x)?, index(y)?);
    let ig = group.map(index).transpose()?;
    let status = headers.iter().position(|h| h == "status");

    let (mut xs, mut ys, mut keys) = (Vec::new(), Vec::new(), Vec::new());
    for (line, rec) in reader.records().enumerate() {
        let rec = rec?;
        if status.is_some_and(|s| rec.get(s) != Some("ok")) {
            continue;
        }
        let num = |i: usize, name: &str| -> Result<f64> {
            let raw = rec.get(i).unwrap_or("");
            raw.parse().map_err(|_| {
                Error::invalid(
                    "results value",
                    format!("line {}: {name} = `{raw}`", line + 2),
                )
            })
        };
        xs.push(num(ix, x)?);
        ys.push(num(iy, y)?);
        keys.push(ig.and_then(|g| rec.get(g)).unwrap_or("").to_string());
    }
    Ok((xs, ys, keys))
}

fn cmd_fit(args: &FitArgs, stdout: &mut dyn Write) -> Result<()> {
    let degree = args.degree as usize;
    let (xs, ys, keys) = read_columns(&args.results, &args.x, &args.y, args.group.as_deref())?;
    let combined = summarise("all", &xs, &ys, degree)
        .map_err(|s| Error::invalid("fit data", format!("{} usable rows: {}", s.n, s.reason)))?;
    let (groups, skipped) = match args.group {
        Some(_) => {
            let g = group_stats(&keys, &xs, &ys, degree)?;
            (g.groups, g.skipped)
        }
        None => (Vec::new(), Vec::new()),
    };

    let mut sink: Box<dyn Write + '_> = match &args.out {
        Some(p) => Box::new(create(p)?),
        None => Box::new(&mut *stdout),
    };
    match args.format {
        Format::Json => {
            let report = FitReport {
                x: &args.x,
                y: &args.y,
                degree,
                combined,
                groups,
                skipped,
            };
            serde_json::to_writer_pretty(&mut sink, &report)?;
            writeln!(sink).map_err(io_err(Path::new("<output>")))?;
        }
        Format::Csv => {
            let rows: Vec<FitRow> = std::iter::once(&combined)
                .chain(&groups)
                .map(|r| FitRow::from_report(r, degree))
                .collect();
            write_fit_csv(&rows, &mut sink)?;
        }
    }
    sink.flush().map_err(io_err(Path::new("<output>")))?;
    Ok(())
}

fn cmd_model(args: &ModelArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    if args.steps < 2 || !(args.x_min < args.x_max) {
        return Err(Error::invalid(
            "model grid",
            format!(
                "need steps >= 2 and x_min < x_max, got {} points on [{}, {}]",
                args.steps, args.x_min, args.x_max
            ),
        ));
    }
    let span = args.x_max - args.x_min;
    let grid: Vec<f64> = (0..args.steps)
        .map(|i| args.x_min + span * i as f64 / (args.steps - 1) as f64)
        .collect();
    let curves = model_curves(&grid, args.const_d, args.quad_d)?;

    let report: &mut dyn Write = match &args.out {
        Some(path) => {
            let mut w = csv::Writer::from_writer(create(path)?);
            write_model_rows(&mut w, &curves)?;
            stdout
        }
        None => {
            let mut w = csv::Writer::from_writer(&mut *stdout);
            write_model_rows(&mut w, &curves)?;
            stderr
        }
    };
    if curves.crossings.is_empty() {
        let _ = writeln!(report, "no crossing in [{}, {}]", args.x_min, args.x_max);
    }
    for &x in &curves.crossings {
        let cents = crate::vibrato_model::cents_half_depth(args.const_d, x)?;
        match &args.f_string {
            Some(s) => {
                let note = s.f_s / (1.0 - x);
                let d_hz = acoustic_depth(args.const_d, x, s.f_s)?;
                let _ = writeln!(
                    report,
                    "crossing x_c={x:.6} cents={cents:.4} note_hz={note:.3} d_hz={d_hz:.4}"
                );
            }
            None => {
                let _ = writeln!(report, "crossing x_c={x:.6} cents={cents:.4}");
            }
        }
    }
    Ok(())
}

fn write_model_rows<W: Write>(
    w: &mut csv::Writer<W>,
    curves: &crate::vibrato_model::ModelCurves,
) -> Result<()> {
    w.write_record(MODEL_COLUMNS)?;
    for i in 0..curves.x_c.len() {
        w.write_record([
            format!("{:.6}", curves.x_c[i]),
            format!("{:.6}", curves.cents_uncompensated[i]),
            format!("{:.6}", curves.cents_compensated[i]),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct Truth<'a> {
    spec: &'a SynthSpec,
    string: &'a StringSpec,
    truth: VibratoMeasurement,
}

fn cmd_synth(args: &SynthArgs) -> Result<()> {
    let spec = args.spec();
    let buffer = render(&spec)?;
    write_wav_pcm16(&buffer, &args.out)?;
    if let Some(path) = &args.emit_truth {
        let string = match &args.string_freq {
            Some(s) => s.clone(),
            None => ["A", "D", "G", "C"]
                .iter()
                .filter_map(|n| StringSpec::cello(n))
                .find(|s| s.f_s <= spec.f_center)
                .ok_or_else(|| {
                    Error::invalid(
                        "string frequency",
                        format!(
                            "no cello string at or below {} Hz; pass --string-freq",
                            spec.f_center
                        ),
                    )
                })?,
        };
        let mut truth = true_measurement(&spec, &string)?;
        truth.file = args.out.to_string_lossy().into_owned();
        let mut w = create(path)?;
        serde_json::to_writer_pretty(
            &mut w,
            &Truth {
                spec: &spec,
                string: &string,
                truth,
            },
        )?;
        writeln!(w).map_err(io_err(path))?;
        w.flush().map_err(io_err(path))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn string_names_and_numbers() {
        assert_eq!(parse_string("A").unwrap().f_s, 220.0);
        assert_eq!(parse_string("146.83").unwrap().f_s, 146.83);
        assert!(parse_string("-3").is_err());
        assert!(parse_string("E").is_err());
    }

    #[test]
    fn quad_parsing() {
        let q = parse_quad("-0.0079,0.054,0.0066").unwrap();
        assert_eq!(
            q,
            VertexQuadratic {
                a: -0.0079,
                h: 0.054,
                k: 0.0066
            }
        );
        assert!(parse_quad("1,2").is_err());
        assert!(parse_quad("1,x,3").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::rejected("no-vibrato", "")), EXIT_REJECTED);
        assert_eq!(exit_code(&Error::invalid("x", "")), EXIT_USAGE);
        assert_eq!(
            exit_code(&Error::EmptyAudio {
                path: PathBuf::from("a.wav")
            }),
            EXIT_IO
        );
    }

    #[test]
    fn failed_row_keeps_metadata() {
        let row = BatchRow {
            source: SourceInfo {
                file: "x.wav".into(),
                player: "p".into(),
                corpus: "c".into(),
            },
            measurement: None,
            status: "error",
            reason: "missing".into(),
        };
        let f = row.csv_fields();
        assert_eq!(f.len(), BATCH_COLUMNS.len());
        assert_eq!(&f[7..], ["x.wav", "p", "c", "error", "missing"]);
    }
}
