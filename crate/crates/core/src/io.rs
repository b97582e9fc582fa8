//! CSV output for series, sweep tables and phase maps.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::observables::PayoffSeries;
use crate::sweep::{MapRecord, SweepPoint};

pub const SERIES_HEADER: [&str; 6] = [
    "round", "gain_p1", "gain_p2", "gain_p3", "gain_avg", "stderr",
];
pub const MAP_HEADER: [&str; 5] = ["theta", "phi", "scheme", "gain", "paradox"];
pub const SWEEP_HEADER_TAIL: [&str; 5] = ["scheme", "gain", "stderr", "verdict", "paradox"];

/// Fixed-point with 14 decimals; `-0` prints as `0`.
pub fn fmt_real(x: f64) -> String {
    let s = format!("{x:.14}");
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

fn write_rows<W: Write>(
    out: W,
    path: &Path,
    header: &[&str],
    rows: impl Iterator<Item = Vec<String>>,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(csv_err(path))?;
    for row in rows {
        w.write_record(&row).map_err(csv_err(path))?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn series_rows(series: &PayoffSeries) -> impl Iterator<Item = Vec<String>> + '_ {
    series.per_player.iter().enumerate().map(move |(t, p)| {
        let stderr = series.stderr.as_ref().map_or(0.0, |s| s[t]);
        vec![
            t.to_string(),
            fmt_real(p[0]),
            fmt_real(p[1]),
            fmt_real(p[2]),
            fmt_real(series.average_gain[t]),
            fmt_real(stderr),
        ]
    })
}

fn map_rows(records: &[MapRecord]) -> impl Iterator<Item = Vec<String>> + '_ {
    records.iter().map(|r| {
        vec![
            fmt_real(r.theta),
            fmt_real(r.phi),
            r.scheme.cli_name(),
            fmt_real(r.gain),
            flag(r.paradox).to_string(),
        ]
    })
}

fn sweep_rows(points: &[SweepPoint]) -> impl Iterator<Item = Vec<String>> + '_ {
    points.iter().flat_map(|p| {
        p.outcomes.iter().map(move |o| {
            vec![
                fmt_real(p.value),
                o.scheme.cli_name(),
                fmt_real(o.gain),
                fmt_real(o.stderr),
                o.verdict.to_string(),
                flag(o.paradox).to_string(),
            ]
        })
    })
}

/// `round,gain_p1,gain_p2,gain_p3,gain_avg,stderr`, one row per round
/// including round 0.
pub fn write_series_csv<W: Write>(series: &PayoffSeries, out: W) -> Result<()> {
    write_rows(
        out,
        Path::new("<stream>"),
        &SERIES_HEADER,
        series_rows(series),
    )
}

pub fn emit_series_csv(series: &PayoffSeries, path: &Path) -> Result<()> {
    write_rows(create(path)?, path, &SERIES_HEADER, series_rows(series))
}

/// `theta,phi,scheme,gain,paradox`, paradox as 0/1.
pub fn write_map_csv<W: Write>(records: &[MapRecord], out: W) -> Result<()> {
    write_rows(out, Path::new("<stream>"), &MAP_HEADER, map_rows(records))
}

pub fn emit_map_csv(records: &[MapRecord], path: &Path) -> Result<()> {
    write_rows(create(path)?, path, &MAP_HEADER, map_rows(records))
}

fn sweep_header(param: &str) -> Vec<&str> {
    std::iter::once(param).chain(SWEEP_HEADER_TAIL).collect()
}

/// `<param>,scheme,gain,stderr,verdict,paradox`, one row per (value, scheme).
pub fn write_sweep_csv<W: Write>(points: &[SweepPoint], param: &str, out: W) -> Result<()> {
    write_rows(
        out,
        Path::new("<stream>"),
        &sweep_header(param),
        sweep_rows(points),
    )
}

pub fn emit_sweep_csv(points: &[SweepPoint], param: &str, path: &Path) -> Result<()> {
    write_rows(
        create(path)?,
        path,
        &sweep_header(param),
        sweep_rows(points),
    )
}
