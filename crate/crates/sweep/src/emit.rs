//! CSV and JSON output. Floats go to CSV with 17 significant digits, which
//! round-trips every `f64`; JSON uses the shortest round-trip form and writes
//! non-finite values as `null`.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

use crate::engine::{CompareRecord, EigenRecord, SweepRecord};
use crate::spec::Method;

#[derive(Debug, Error)]
pub enum EmitError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad csv row: {0}")]
    Row(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format `{s}` (expected csv|json)")),
        }
    }
}

/// `null` for NaN/∞ on the way out, NaN for `null` on the way in.
pub mod nan_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "NaN".to_owned()
    }
}

/// A record type with a fixed CSV layout.
pub trait Tabular: Sized + Serialize + DeserializeOwned {
    const HEADER: &'static [&'static str];
    fn to_row(&self) -> Vec<String>;
    fn from_row(row: &csv::StringRecord) -> Result<Self, EmitError>;
}

struct Fields<'a> {
    row: &'a csv::StringRecord,
    at: usize,
}

impl<'a> Fields<'a> {
    fn next_str(&mut self) -> Result<&'a str, EmitError> {
        let s = self
            .row
            .get(self.at)
            .ok_or_else(|| EmitError::Row(format!("missing column {}", self.at)))?;
        self.at += 1;
        Ok(s)
    }

    fn parse<T: FromStr>(&mut self) -> Result<T, EmitError> {
        let at = self.at;
        let s = self.next_str()?;
        s.parse().map_err(|_| EmitError::Row(format!("column {at}: `{s}`")))
    }

    fn opt(&mut self) -> Result<Option<String>, EmitError> {
        let s = self.next_str()?;
        Ok((!s.is_empty()).then(|| s.to_owned()))
    }
}

fn fields(row: &csv::StringRecord) -> Fields<'_> {
    Fields { row, at: 0 }
}

impl Tabular for SweepRecord {
    const HEADER: &'static [&'static str] = &[
        "n",
        "method",
        "alpha",
        "theta",
        "power",
        "trace_re",
        "trace_im",
        "phase",
        "visibility",
        "error",
    ];

    fn to_row(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.method.to_string(),
            fmt_f64(self.alpha),
            fmt_f64(self.theta),
            self.power.to_string(),
            fmt_f64(self.trace_re),
            fmt_f64(self.trace_im),
            fmt_f64(self.phase),
            fmt_f64(self.visibility),
            self.error.clone().unwrap_or_default(),
        ]
    }

    fn from_row(row: &csv::StringRecord) -> Result<Self, EmitError> {
        let mut f = fields(row);
        Ok(Self {
            n: f.parse()?,
            method: f.parse::<Method>()?,
            alpha: f.parse()?,
            theta: f.parse()?,
            power: f.parse()?,
            trace_re: f.parse()?,
            trace_im: f.parse()?,
            phase: f.parse()?,
            visibility: f.parse()?,
            error: f.opt()?,
        })
    }
}

impl Tabular for EigenRecord {
    const HEADER: &'static [&'static str] = &[
        "n",
        "alpha",
        "theta",
        "rank",
        "eigen_re",
        "eigen_im",
        "eigen_arg",
        "eigen_abs",
        "error",
    ];

    fn to_row(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            fmt_f64(self.alpha),
            fmt_f64(self.theta),
            self.rank.to_string(),
            fmt_f64(self.eigen_re),
            fmt_f64(self.eigen_im),
            fmt_f64(self.eigen_arg),
            fmt_f64(self.eigen_abs),
            self.error.clone().unwrap_or_default(),
        ]
    }

    fn from_row(row: &csv::StringRecord) -> Result<Self, EmitError> {
        let mut f = fields(row);
        Ok(Self {
            n: f.parse()?,
            alpha: f.parse()?,
            theta: f.parse()?,
            rank: f.parse()?,
            eigen_re: f.parse()?,
            eigen_im: f.parse()?,
            eigen_arg: f.parse()?,
            eigen_abs: f.parse()?,
            error: f.opt()?,
        })
    }
}

impl Tabular for CompareRecord {
    const HEADER: &'static [&'static str] = &[
        "n",
        "alpha",
        "theta",
        "power",
        "uhlmann_phase",
        "sjoqvist_phase",
        "phase_ratio",
        "uhlmann_visibility",
        "sjoqvist_visibility",
        "visibility_ratio",
        "reduction_residual",
        "flags",
    ];

    fn to_row(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            fmt_f64(self.alpha),
            fmt_f64(self.theta),
            self.power.to_string(),
            fmt_f64(self.uhlmann_phase),
            fmt_f64(self.sjoqvist_phase),
            fmt_f64(self.phase_ratio),
            fmt_f64(self.uhlmann_visibility),
            fmt_f64(self.sjoqvist_visibility),
            fmt_f64(self.visibility_ratio),
            fmt_f64(self.reduction_residual),
            self.flags.clone().unwrap_or_default(),
        ]
    }

    fn from_row(row: &csv::StringRecord) -> Result<Self, EmitError> {
        let mut f = fields(row);
        Ok(Self {
            n: f.parse()?,
            alpha: f.parse()?,
            theta: f.parse()?,
            power: f.parse()?,
            uhlmann_phase: f.parse()?,
            sjoqvist_phase: f.parse()?,
            phase_ratio: f.parse()?,
            uhlmann_visibility: f.parse()?,
            sjoqvist_visibility: f.parse()?,
            visibility_ratio: f.parse()?,
            reduction_residual: f.parse()?,
            flags: f.opt()?,
        })
    }
}

pub fn write_csv<T: Tabular, W: Write>(records: &[T], out: W) -> Result<(), EmitError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(T::HEADER)?;
    for r in records {
        w.write_record(r.to_row())?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_json<T: Tabular, W: Write>(records: &[T], mut out: W) -> Result<(), EmitError> {
    serde_json::to_writer_pretty(&mut out, records)?;
    out.write_all(b"\n").map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_to<T: Tabular, W: Write>(records: &[T], format: Format, out: W) -> Result<(), EmitError> {
    match format {
        Format::Csv => write_csv(records, out),
        Format::Json => write_json(records, out),
    }
}

/// Write to `path`, reporting I/O failures with the path attached.
pub fn emit<T: Tabular>(records: &[T], format: Format, path: &Path) -> Result<(), EmitError> {
    let io = |source| EmitError::Io {
        path: path.to_owned(),
        source,
    };
    let file = File::create(path).map_err(io)?;
    let mut buf = BufWriter::new(file);
    write_to(records, format, &mut buf)?;
    buf.flush().map_err(io)
}

pub fn read_csv<T: Tabular, R: Read>(input: R) -> Result<Vec<T>, EmitError> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().ne(T::HEADER.iter().copied()) {
        return Err(EmitError::Row(format!("unexpected header {header:?}")));
    }
    r.records().map(|row| T::from_row(&row?)).collect()
}

pub fn read_json<T: Tabular, R: Read>(input: R) -> Result<Vec<T>, EmitError> {
    Ok(serde_json::from_reader(input)?)
}

pub fn read_from<T: Tabular>(path: &Path, format: Format) -> Result<Vec<T>, EmitError> {
    let file = File::open(path).map_err(|source| EmitError::Io {
        path: path.to_owned(),
        source,
    })?;
    match format {
        Format::Csv => read_csv(file),
        Format::Json => read_json(file),
    }
}
