//! On-disk formats.
//!
//! | artifact   | format                                                        |
//! |------------|---------------------------------------------------------------|
//! | waveform   | CSV `time_s,value`, or JSON `{label, sample_rate_hz, samples}` |
//! | frames     | JSON `{sample_rate_hz, K, S, frames}`                         |
//! | transcript | JSON `{audio_duration_s, words: [{word, start, end}]}`        |
//! | intervals  | CSV `start_s,end_s,source`                                    |
//!
//! Waveform files are told apart by extension (`.json` or anything else as
//! CSV). CSV time stamps must be uniform within [`CSV_TIME_TOLERANCE_S`].
//!
//! Writes go through [`StagedWrites`]: every file is written to a temporary
//! sibling and renamed into place only after all of them succeeded.

use std::fs;
use std::io::Write;
use std::ops::Range;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use tempfile::NamedTempFile;

use crate::error::{Error, Result};
use crate::signal::{FrameSequence, IeInterval, Waveform};
use crate::transcript::Transcript;

pub const CSV_TIME_TOLERANCE_S: f64 = 1e-6;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn parse_err(path: &Path, location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        location: location.into(),
        message: message.into(),
    }
}

fn is_json(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|e| {
        parse_err(
            path,
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })
}

fn csv_location(pos: Option<&csv::Position>) -> String {
    pos.map_or_else(|| "record".to_string(), |p| format!("line {}", p.line()))
}

fn csv_reader(path: &Path, expected: &[&str]) -> Result<csv::Reader<fs::File>> {
    let file = fs::File::open(path).map_err(io_err(path))?;
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    let headers = rdr
        .headers()
        .map_err(|e| parse_err(path, "line 1", e.to_string()))?
        .clone();
    let got: Vec<&str> = headers.iter().collect();
    if got != expected {
        return Err(parse_err(
            path,
            "line 1",
            format!(
                "expected header {:?}, got {:?}",
                expected.join(","),
                got.join(",")
            ),
        ));
    }
    Ok(rdr)
}

fn parse_field<T: std::str::FromStr>(
    path: &Path,
    record: &csv::StringRecord,
    idx: usize,
    name: &str,
) -> Result<T> {
    let loc = csv_location(record.position());
    let raw = record
        .get(idx)
        .ok_or_else(|| parse_err(path, &loc, format!("missing field {name}")))?;
    raw.parse().map_err(|_| {
        parse_err(
            path,
            format!("{loc}, field {name}"),
            format!("cannot parse {raw:?}"),
        )
    })
}

/// Reads a waveform from CSV or JSON; the CSV label is the file stem.
pub fn read_waveform(path: &Path) -> Result<Waveform> {
    if is_json(path) {
        return read_json(path);
    }
    let mut rdr = csv_reader(path, &["time_s", "value"])?;
    let mut times = Vec::new();
    let mut values = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| parse_err(path, csv_location(e.position()), e.to_string()))?;
        let t: f64 = parse_field(path, &rec, 0, "time_s")?;
        let v: f64 = parse_field(path, &rec, 1, "value")?;
        if !t.is_finite() || !v.is_finite() {
            return Err(parse_err(
                path,
                csv_location(rec.position()),
                "non-finite number",
            ));
        }
        times.push((t, rec.position().map(|p| p.line())));
        values.push(v);
    }
    if times.len() < 2 {
        return Err(parse_err(
            path,
            "records",
            "need at least two samples to infer the sample rate",
        ));
    }
    let t0 = times[0].0;
    let dt = times[1].0 - t0;
    if dt <= 0.0 {
        return Err(parse_err(path, "line 3", "time stamps must increase"));
    }
    let n = times.len();
    // Average step over the whole file, less sensitive to rounding in the first pair.
    let dt = (times[n - 1].0 - t0) / (n - 1) as f64;
    for (i, &(t, line)) in times.iter().enumerate() {
        if (t - (t0 + i as f64 * dt)).abs() > CSV_TIME_TOLERANCE_S {
            return Err(parse_err(
                path,
                line.map_or_else(|| format!("record {i}"), |l| format!("line {l}")),
                format!("time stamp {t} is off the uniform grid of step {dt}"),
            ));
        }
    }
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Waveform::new(label, 1.0 / dt, values)
}

#[derive(Serialize)]
struct WaveformDoc<'a> {
    label: &'a str,
    sample_rate_hz: f64,
    samples: &'a [f64],
    /// Samples `[start, end)` covered by a full set of windows.
    #[serde(skip_serializing_if = "Option::is_none")]
    interior: Option<[usize; 2]>,
}

pub fn encode_waveform(
    path: &Path,
    w: &Waveform,
    interior: Option<Range<usize>>,
) -> Result<Vec<u8>> {
    if is_json(path) {
        let doc = WaveformDoc {
            label: w.label(),
            sample_rate_hz: w.sample_rate_hz(),
            samples: w.samples(),
            interior: interior.map(|r| [r.start, r.end]),
        };
        let mut out = serde_json::to_vec_pretty(&doc).expect("waveform serializes");
        out.push(b'\n');
        return Ok(out);
    }
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io {
        path: path.to_path_buf(),
        source: std::io::Error::other(e),
    };
    wtr.write_record(["time_s", "value"]).map_err(io)?;
    for (i, v) in w.samples().iter().enumerate() {
        wtr.write_record([w.time_of(i).to_string(), v.to_string()])
            .map_err(io)?;
    }
    wtr.into_inner().map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: std::io::Error::other(e.to_string()),
    })
}

pub fn read_frames(path: &Path) -> Result<FrameSequence> {
    read_json(path)
}

pub fn encode_frames(frames: &FrameSequence) -> Vec<u8> {
    let mut out = serde_json::to_vec(frames).expect("frames serialize");
    out.push(b'\n');
    out
}

pub fn read_transcript(path: &Path) -> Result<Transcript> {
    read_json(path)
}

pub fn encode_transcript(t: &Transcript) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(t).expect("transcript serializes");
    out.push(b'\n');
    out
}

pub fn read_intervals(path: &Path) -> Result<Vec<IeInterval>> {
    let mut rdr = csv_reader(path, &["start_s", "end_s", "source"])?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| parse_err(path, csv_location(e.position()), e.to_string()))?;
        let start: f64 = parse_field(path, &rec, 0, "start_s")?;
        let end: f64 = parse_field(path, &rec, 1, "end_s")?;
        let source: String = parse_field(path, &rec, 2, "source")?;
        let loc = csv_location(rec.position());
        let source = source
            .parse()
            .map_err(|e: Error| parse_err(path, format!("{loc}, field source"), e.to_string()))?;
        let iv = IeInterval::new(start, end, source)
            .map_err(|e| parse_err(path, &loc, e.to_string()))?;
        out.push(iv);
    }
    Ok(out)
}

pub fn encode_intervals(intervals: &[IeInterval]) -> Vec<u8> {
    let mut out = String::from("start_s,end_s,source\n");
    for iv in intervals {
        out.push_str(&format!(
            "{},{},{}\n",
            iv.start_s(),
            iv.end_s(),
            iv.source()
        ));
    }
    out.into_bytes()
}

/// A set of output files that appear together or not at all.
#[derive(Default)]
pub struct StagedWrites {
    staged: Vec<(NamedTempFile, PathBuf)>,
}

impl StagedWrites {
    pub fn new() -> Self {
        Self::default()
    }

    /// Writes `bytes` to a temporary file next to `path`.
    pub fn stage(&mut self, path: &Path, bytes: &[u8]) -> Result<()> {
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d,
            _ => Path::new("."),
        };
        let mut tmp = NamedTempFile::new_in(dir).map_err(io_err(path))?;
        tmp.write_all(bytes).map_err(io_err(path))?;
        tmp.as_file().sync_all().map_err(io_err(path))?;
        self.staged.push((tmp, path.to_path_buf()));
        Ok(())
    }

    /// Renames every staged file into place.
    pub fn commit(self) -> Result<()> {
        for (tmp, path) in self.staged {
            tmp.persist(&path).map_err(|e| Error::Io {
                path: path.clone(),
                source: e.error,
            })?;
        }
        Ok(())
    }
}

/// Writes one file atomically.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut staged = StagedWrites::new();
    staged.stage(path, bytes)?;
    staged.commit()
}
