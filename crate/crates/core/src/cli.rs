//! Command-line surface: `detect`, `reconstruct`, `eval`, `synth` and
//! `transcribe-ies`.
//!
//! Exit codes: 0 success, 1 validation or malformed input, 2 I/O,
//! 3 numerical failure (filter design, window overlap).

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::detection::detect_ies_detailed;
use crate::error::{Error, Result};
use crate::evaluation::{
    duration_histogram, metrics, score_with, ConfusionCounts, DisplayMetrics, DurationHistogram,
    GapUniverse, MetricSet, ScoreOptions,
};
use crate::filter::design_butterworth_bandpass;
use crate::io::{
    encode_intervals, encode_transcript, encode_waveform, read_frames, read_intervals,
    read_transcript, read_waveform, write_atomic, StagedWrites,
};
use crate::signal::{DetectorConfig, IeInterval, IeSource, Orientation};
use crate::synthesis::{synth_breathing, synth_transcript, SynthConfig};
use crate::transcript::{asr_punct_ies, asr_word_ies, default_stop_marks};
use crate::vrbola::{concatenate, overlap_add, WindowShape, WindowSpec};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(
    name = "respira",
    version,
    about = "Breathing-waveform and inspiration-event toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detect inspiration events in a breathing waveform.
    Detect(DetectArgs),
    /// Rebuild a continuous waveform from framewise estimates.
    Reconstruct(ReconstructArgs),
    /// Score estimated events against ground truth.
    Eval(EvalArgs),
    /// Generate a synthetic recording, its planted events and a transcript.
    Synth(SynthArgs),
    /// Derive events from a word-aligned transcript.
    TranscribeIes(TranscribeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrientationArg {
    MinToMax,
    MaxToMin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WaveSource {
    Belt,
    Vrb,
    Vrbola,
    Synthetic,
}

impl From<WaveSource> for IeSource {
    fn from(s: WaveSource) -> Self {
        match s {
            WaveSource::Belt => IeSource::Belt,
            WaveSource::Vrb => IeSource::Vrb,
            WaveSource::Vrbola => IeSource::Vrbola,
            WaveSource::Synthetic => IeSource::Synthetic,
        }
    }
}

/// Detector settings shared by `detect` and `transcribe-ies`; flags override the TOML file.
#[derive(Debug, Clone, Default, Args)]
pub struct DetectorFlags {
    /// TOML file with detector settings.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub filter_order: Option<usize>,
    #[arg(long)]
    pub band_low_hz: Option<f64>,
    #[arg(long)]
    pub band_high_hz: Option<f64>,
    #[arg(long)]
    pub min_separation_s: Option<f64>,
    #[arg(long)]
    pub prominence_threshold: Option<f64>,
    #[arg(long)]
    pub pause_threshold_s: Option<f64>,
    #[arg(long, value_enum)]
    pub orientation: Option<OrientationArg>,
}

impl DetectorFlags {
    pub fn resolve(&self) -> Result<DetectorConfig> {
        let mut cfg: DetectorConfig = match &self.config {
            Some(path) => read_toml(path)?,
            None => DetectorConfig::default(),
        };
        if let Some(v) = self.filter_order {
            cfg.filter_order = v;
        }
        if let Some(v) = self.band_low_hz {
            cfg.band_low_hz = v;
        }
        if let Some(v) = self.band_high_hz {
            cfg.band_high_hz = v;
        }
        if let Some(v) = self.min_separation_s {
            cfg.min_separation_s = v;
        }
        if let Some(v) = self.prominence_threshold {
            cfg.prominence_threshold = v;
        }
        if let Some(v) = self.pause_threshold_s {
            cfg.pause_threshold_s = v;
        }
        if let Some(o) = self.orientation {
            cfg.orientation = match o {
                OrientationArg::MinToMax => Orientation::MinToMax,
                OrientationArg::MaxToMin => Orientation::MaxToMin,
            };
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    /// Waveform file (`.csv` with `time_s,value`, or `.json`).
    pub waveform: PathBuf,
    /// Output intervals CSV.
    #[arg(long)]
    pub out: PathBuf,
    /// Write breathing statistics here as JSON instead of stdout.
    #[arg(long)]
    pub stats: Option<PathBuf>,
    /// Source tag for the emitted intervals.
    #[arg(long, value_enum, default_value = "belt")]
    pub source: WaveSource,
    /// Also write the designed filter coefficients as text.
    #[arg(long)]
    pub dump_filter: Option<PathBuf>,
    #[command(flatten)]
    pub detector: DetectorFlags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReconstructMode {
    /// Windowed overlap-add.
    Ola,
    /// Plain end-to-end concatenation (requires S = K).
    Concat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WindowArg {
    SquaredSine,
    Rectangular,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    /// Frames JSON `{sample_rate_hz, K, S, frames}`.
    pub frames: PathBuf,
    /// Output waveform (`.csv` or `.json`).
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "ola")]
    pub mode: ReconstructMode,
    #[arg(long, value_enum, default_value = "squared-sine")]
    pub window: WindowArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GapArg {
    Interior,
    IncludeOuter,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Estimated intervals: a CSV file, or a directory of CSVs matched to the truth by name.
    #[arg(long)]
    pub estimates: PathBuf,
    /// Ground-truth intervals: a CSV file or a directory.
    #[arg(long)]
    pub truth: PathBuf,
    /// Write the JSON report here (stdout summary is always printed).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0.05)]
    pub bin_width_s: f64,
    #[arg(long, default_value_t = 0.0)]
    pub overlap_slack_s: f64,
    #[arg(long, value_enum, default_value = "interior")]
    pub gap_universe: GapArg,
    /// Directory for histogram and interval-overlay CSVs.
    #[arg(long)]
    pub emit_plot_data: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// TOML file with generator settings.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: u64,
    /// Directory receiving `<label>_belt.csv`, `<label>_truth.csv` and `<label>_transcript.json`.
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub label: Option<String>,
    #[arg(long)]
    pub duration_s: Option<f64>,
    #[arg(long)]
    pub sample_rate_hz: Option<f64>,
    #[arg(long)]
    pub speech_resp_rate_hz: Option<f64>,
    #[arg(long)]
    pub ie_duration_mean_s: Option<f64>,
    #[arg(long)]
    pub ie_duration_jitter_s: Option<f64>,
    #[arg(long)]
    pub amplitude: Option<f64>,
    #[arg(long)]
    pub drift_per_s: Option<f64>,
    #[arg(long)]
    pub noise_sigma: Option<f64>,
    #[arg(long)]
    pub grammatical_fraction: Option<f64>,
    #[arg(long)]
    pub word_duration_s: Option<f64>,
    #[arg(long)]
    pub word_gap_s: Option<f64>,
    #[arg(long)]
    pub spurious_stop_rate: Option<f64>,
    #[arg(long)]
    pub long_pause_rate: Option<f64>,
    #[arg(long)]
    pub long_pause_s: Option<f64>,
}

impl SynthArgs {
    pub fn resolve(&self) -> Result<SynthConfig> {
        let mut cfg: SynthConfig = match &self.config {
            Some(path) => read_toml(path)?,
            None => SynthConfig::default(),
        };
        cfg.seed = self.seed;
        if let Some(v) = &self.label {
            cfg.label = v.clone();
        }
        let overrides = [
            (self.duration_s, &mut cfg.duration_s),
            (self.sample_rate_hz, &mut cfg.sample_rate_hz),
            (self.speech_resp_rate_hz, &mut cfg.speech_resp_rate_hz),
            (self.ie_duration_mean_s, &mut cfg.ie_duration_mean_s),
            (self.ie_duration_jitter_s, &mut cfg.ie_duration_jitter_s),
            (self.amplitude, &mut cfg.amplitude),
            (self.drift_per_s, &mut cfg.drift_per_s),
            (self.noise_sigma, &mut cfg.noise_sigma),
            (self.grammatical_fraction, &mut cfg.grammatical_fraction),
            (self.word_duration_s, &mut cfg.word_duration_s),
            (self.word_gap_s, &mut cfg.word_gap_s),
            (self.spurious_stop_rate, &mut cfg.spurious_stop_rate),
            (self.long_pause_rate, &mut cfg.long_pause_rate),
            (self.long_pause_s, &mut cfg.long_pause_s),
        ];
        for (flag, slot) in overrides {
            if let Some(v) = flag {
                *slot = v;
            }
        }
        let violations = cfg.violations();
        if !violations.is_empty() {
            let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
            return Err(Error::invalid("config", list.join("; ")));
        }
        if cfg.label.is_empty() || cfg.label.contains(['/', '\\']) {
            return Err(Error::invalid(
                "label",
                "must be a non-empty file-name fragment",
            ));
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TranscriptMethod {
    /// Word-to-word pauses longer than the pause threshold.
    Word,
    /// Pauses after stop-marked words.
    Punct,
}

#[derive(Debug, Args)]
pub struct TranscribeArgs {
    /// Transcript JSON `{audio_duration_s, words: [{word, start, end}]}`.
    pub transcript: PathBuf,
    #[arg(long, value_enum)]
    pub method: TranscriptMethod,
    #[arg(long)]
    pub out: PathBuf,
    /// Characters that end a clause or sentence.
    #[arg(long)]
    pub stop_marks: Option<String>,
    #[command(flatten)]
    pub detector: DetectorFlags,
}

fn read_toml<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    toml::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        location: e
            .span()
            .map(|s| format!("line {}", text[..s.start].lines().count().max(1)))
            .unwrap_or_else(|| "document".to_string()),
        message: e.message().to_string(),
    })
}

fn to_json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("report serializes");
    out.push(b'\n');
    out
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Detect(a) => cmd_detect(&a),
        Command::Reconstruct(a) => cmd_reconstruct(&a),
        Command::Eval(a) => cmd_eval(&a).map(|_| ()),
        Command::Synth(a) => cmd_synth(&a),
        Command::TranscribeIes(a) => cmd_transcribe_ies(&a),
    }
}

pub fn cmd_detect(args: &DetectArgs) -> Result<()> {
    let cfg = args.detector.resolve()?;
    let wave = read_waveform(&args.waveform)?;
    let det = detect_ies_detailed(&wave, &cfg, args.source.into())?;

    let mut staged = StagedWrites::new();
    staged.stage(&args.out, &encode_intervals(&det.intervals))?;
    let stats = to_json_bytes(&det.stats);
    if let Some(path) = &args.stats {
        staged.stage(path, &stats)?;
    }
    if let Some(path) = &args.dump_filter {
        let cascade = design_butterworth_bandpass(
            cfg.filter_order,
            cfg.band_low_hz,
            cfg.band_high_hz,
            wave.sample_rate_hz(),
        )?;
        staged.stage(path, cascade.coefficient_dump().as_bytes())?;
    }
    staged.commit()?;
    if args.stats.is_none() {
        print!("{}", String::from_utf8_lossy(&stats));
    }
    Ok(())
}

pub fn cmd_reconstruct(args: &ReconstructArgs) -> Result<()> {
    let frames = read_frames(&args.frames)?;
    let rec = match args.mode {
        ReconstructMode::Concat => concatenate(&frames)?,
        ReconstructMode::Ola => {
            let shape = match args.window {
                WindowArg::SquaredSine => WindowShape::SquaredSine,
                WindowArg::Rectangular => WindowShape::Rectangular,
            };
            overlap_add(&frames, &WindowSpec::for_frames(shape, &frames))?
        }
    };
    let label = args
        .frames
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let wave = rec.waveform.clone().with_label(label);
    let interior = (rec.interior != (0..wave.len())).then(|| rec.interior.clone());
    if let Some(r) = &interior {
        eprintln!(
            "note: samples outside [{}, {}) have partial window coverage",
            r.start, r.end
        );
    }
    write_atomic(&args.out, &encode_waveform(&args.out, &wave, interior)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalConfigEcho {
    pub overlap_slack_s: f64,
    pub gap_universe: GapUniverse,
    pub bin_width_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordingReport {
    pub name: String,
    pub estimates_path: String,
    pub truth_path: String,
    pub estimates_sha256: String,
    pub truth_sha256: String,
    pub counts: ConfusionCounts,
    pub metrics: MetricSet,
    pub display: DisplayMetrics,
    pub estimate_durations: DurationHistogram,
    pub truth_durations: DurationHistogram,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub recordings: usize,
    pub counts: ConfusionCounts,
    pub metrics: MetricSet,
    pub display: DisplayMetrics,
    pub estimate_durations: DurationHistogram,
    pub truth_durations: DurationHistogram,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool_version: String,
    pub config: EvalConfigEcho,
    pub recordings: Vec<RecordingReport>,
    pub corpus: CorpusReport,
}

fn sha256_hex(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

fn csv_files(dir: &Path) -> Result<BTreeMap<String, PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut out = BTreeMap::new();
    for entry in entries {
        let entry = entry.map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        let path = entry.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "csv") {
            let name = entry.file_name().to_string_lossy().into_owned();
            out.insert(name, path);
        }
    }
    Ok(out)
}

/// Pairs estimate and truth files; directories are matched by file name.
fn recording_pairs(estimates: &Path, truth: &Path) -> Result<Vec<(String, PathBuf, PathBuf)>> {
    match (estimates.is_dir(), truth.is_dir()) {
        (false, false) => {
            let name = estimates
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            Ok(vec![(name, estimates.to_path_buf(), truth.to_path_buf())])
        }
        (true, true) => {
            let est = csv_files(estimates)?;
            let tru = csv_files(truth)?;
            let names: BTreeSet<&String> = est.keys().chain(tru.keys()).collect();
            let mut pairs = Vec::with_capacity(names.len());
            for name in names {
                match (est.get(name), tru.get(name)) {
                    (Some(e), Some(t)) => pairs.push((name.clone(), e.clone(), t.clone())),
                    (None, _) => {
                        return Err(Error::invalid(
                            "estimates",
                            format!("no estimates file matching truth {name}"),
                        ))
                    }
                    (_, None) => {
                        return Err(Error::invalid(
                            "truth",
                            format!("no truth file matching estimates {name}"),
                        ))
                    }
                }
            }
            if pairs.is_empty() {
                return Err(Error::invalid("estimates", "no CSV files found"));
            }
            Ok(pairs)
        }
        _ => Err(Error::invalid(
            "estimates",
            "--estimates and --truth must both be files or both be directories",
        )),
    }
}

pub fn cmd_eval(args: &EvalArgs) -> Result<RunReport> {
    let opts = ScoreOptions {
        overlap_slack_s: args.overlap_slack_s,
        gap_universe: match args.gap_universe {
            GapArg::Interior => GapUniverse::Interior,
            GapArg::IncludeOuter => GapUniverse::IncludeOuter,
        },
    };
    let mut recordings = Vec::new();
    let mut all_est: Vec<IeInterval> = Vec::new();
    let mut all_truth: Vec<IeInterval> = Vec::new();
    let mut overlay = String::from("recording,series,start_s,end_s\n");
    for (name, est_path, truth_path) in recording_pairs(&args.estimates, &args.truth)? {
        let est = read_intervals(&est_path)?;
        let truth = read_intervals(&truth_path)?;
        let counts = score_with(&est, &truth, &opts).map_err(|e| match e {
            Error::Validation { field, reason } => Error::Parse {
                path: if field.starts_with("truth") {
                    truth_path.clone()
                } else {
                    est_path.clone()
                },
                location: field,
                message: reason,
            },
            other => other,
        })?;
        let m = metrics(&counts);
        for (series, ivs) in [("estimate", &est), ("truth", &truth)] {
            for iv in ivs.iter() {
                overlay.push_str(&format!(
                    "{name},{series},{},{}\n",
                    iv.start_s(),
                    iv.end_s()
                ));
            }
        }
        recordings.push(RecordingReport {
            name,
            estimates_sha256: sha256_hex(&est_path)?,
            truth_sha256: sha256_hex(&truth_path)?,
            estimates_path: est_path.display().to_string(),
            truth_path: truth_path.display().to_string(),
            counts,
            metrics: m,
            display: m.display(),
            estimate_durations: duration_histogram(&est, args.bin_width_s)?,
            truth_durations: duration_histogram(&truth, args.bin_width_s)?,
        });
        all_est.extend(est);
        all_truth.extend(truth);
    }

    let counts: ConfusionCounts = recordings.iter().map(|r| r.counts).sum();
    let m = metrics(&counts);
    let corpus = CorpusReport {
        recordings: recordings.len(),
        counts,
        metrics: m,
        display: m.display(),
        estimate_durations: duration_histogram(&all_est, args.bin_width_s)?,
        truth_durations: duration_histogram(&all_truth, args.bin_width_s)?,
    };
    let report = RunReport {
        tool_version: TOOL_VERSION.to_string(),
        config: EvalConfigEcho {
            overlap_slack_s: opts.overlap_slack_s,
            gap_universe: opts.gap_universe,
            bin_width_s: args.bin_width_s,
        },
        recordings,
        corpus,
    };

    let mut staged = StagedWrites::new();
    if let Some(path) = &args.out {
        staged.stage(path, &to_json_bytes(&report))?;
    }
    if let Some(dir) = &args.emit_plot_data {
        fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.clone(),
            source,
        })?;
        staged.stage(
            &dir.join("histograms.csv"),
            histogram_csv(&report).as_bytes(),
        )?;
        staged.stage(&dir.join("overlay.csv"), overlay.as_bytes())?;
    }
    staged.commit()?;
    print!("{}", summary_table(&report));
    Ok(report)
}

fn histogram_csv(report: &RunReport) -> String {
    let mut out = String::from("recording,series,bin_start_s,bin_end_s,count\n");
    let rows = report
        .recordings
        .iter()
        .map(|r| (r.name.as_str(), &r.estimate_durations, &r.truth_durations))
        .chain(std::iter::once((
            "corpus",
            &report.corpus.estimate_durations,
            &report.corpus.truth_durations,
        )));
    for (name, est, truth) in rows {
        for (series, h) in [("estimate", est), ("truth", truth)] {
            for (i, c) in h.bin_counts.iter().enumerate() {
                let (lo, hi) = h.bin_edges(i);
                out.push_str(&format!("{name},{series},{lo:.4},{hi:.4},{c}\n"));
            }
        }
    }
    out
}

fn summary_table(report: &RunReport) -> String {
    let mut out = format!(
        "{:<24} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6}\n",
        "recording", "tp", "tn", "fp", "fn", "sens", "spec", "f1"
    );
    let mut row = |name: &str, c: &ConfusionCounts, d: &DisplayMetrics| {
        out.push_str(&format!(
            "{:<24} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6}\n",
            name, c.tp, c.tn, c.fp, c.fn_, d.sensitivity, d.specificity, d.f1
        ));
    };
    if report.recordings.len() <= 50 {
        for r in &report.recordings {
            row(&r.name, &r.counts, &r.display);
        }
    }
    row("corpus", &report.corpus.counts, &report.corpus.display);
    out
}

pub fn cmd_synth(args: &SynthArgs) -> Result<()> {
    let cfg = args.resolve()?;
    let (wave, truth) = synth_breathing(&cfg)?;
    let transcript = synth_transcript(&truth, &cfg)?;
    fs::create_dir_all(&args.out_dir).map_err(|source| Error::Io {
        path: args.out_dir.clone(),
        source,
    })?;
    let belt = args.out_dir.join(format!("{}_belt.csv", cfg.label));
    let mut staged = StagedWrites::new();
    staged.stage(&belt, &encode_waveform(&belt, &wave, None)?)?;
    staged.stage(
        &args.out_dir.join(format!("{}_truth.csv", cfg.label)),
        &encode_intervals(&truth),
    )?;
    staged.stage(
        &args.out_dir.join(format!("{}_transcript.json", cfg.label)),
        &encode_transcript(&transcript),
    )?;
    staged.commit()
}

pub fn cmd_transcribe_ies(args: &TranscribeArgs) -> Result<()> {
    let cfg = args.detector.resolve()?;
    let transcript = read_transcript(&args.transcript)?;
    let intervals = match args.method {
        TranscriptMethod::Word => asr_word_ies(&transcript, cfg.pause_threshold_s)?,
        TranscriptMethod::Punct => {
            let marks = match &args.stop_marks {
                Some(s) => s.chars().collect(),
                None => default_stop_marks(),
            };
            asr_punct_ies(&transcript, &marks)?
        }
    };
    write_atomic(&args.out, &encode_intervals(&intervals))
}
