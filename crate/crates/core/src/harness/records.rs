use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::qec::CodeId;

/// A row type with a fixed CSV schema.
pub trait CsvRecord: Sized {
    const HEADER: &'static [&'static str];
    fn to_row(&self) -> Vec<String>;
    fn from_row(row: &[&str]) -> Result<Self>;
}

/// 17 significant digits: enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn field<T: FromStr>(row: &[&str], i: usize, name: &str) -> Result<T> {
    let raw = row.get(i).ok_or_else(|| Error::Config(format!("missing column {name}")))?;
    raw.parse().map_err(|_| Error::Config(format!("bad {name} value {raw:?}")))
}

/// Logical error estimate at one grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct QecRecord {
    pub code: CodeId,
    pub m: usize,
    pub ec: u8,
    /// `continuous`, `pauli` or `approx`.
    pub model: String,
    pub p: f64,
    pub sigma: f64,
    pub kappa: f64,
    pub entropy: f64,
    pub p_err: f64,
    pub stderr: f64,
    pub n_instances: usize,
}

impl CsvRecord for QecRecord {
    const HEADER: &'static [&'static str] =
        &["code", "m", "ec", "model", "p", "sigma", "kappa", "entropy", "p_err", "stderr", "n_instances"];

    fn to_row(&self) -> Vec<String> {
        vec![
            self.code.to_string(),
            self.m.to_string(),
            self.ec.to_string(),
            self.model.clone(),
            fmt_f64(self.p),
            fmt_f64(self.sigma),
            fmt_f64(self.kappa),
            fmt_f64(self.entropy),
            fmt_f64(self.p_err),
            fmt_f64(self.stderr),
            self.n_instances.to_string(),
        ]
    }

    fn from_row(r: &[&str]) -> Result<Self> {
        Ok(QecRecord {
            code: CodeId::parse(r.first().copied().unwrap_or_default())?,
            m: field(r, 1, "m")?,
            ec: field(r, 2, "ec")?,
            model: field(r, 3, "model")?,
            p: field(r, 4, "p")?,
            sigma: field(r, 5, "sigma")?,
            kappa: field(r, 6, "kappa")?,
            entropy: field(r, 7, "entropy")?,
            p_err: field(r, 8, "p_err")?,
            stderr: field(r, 9, "stderr")?,
            n_instances: field(r, 10, "n_instances")?,
        })
    }
}

/// Grover failure probability at one grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct GroverRecord {
    pub n: usize,
    pub model: String,
    pub p: f64,
    pub sigma: f64,
    pub entropy: f64,
    pub gsa_err: f64,
    pub stderr: f64,
}

impl CsvRecord for GroverRecord {
    const HEADER: &'static [&'static str] = &["N", "model", "p", "sigma", "entropy", "gsa_err", "stderr"];

    fn to_row(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.model.clone(),
            fmt_f64(self.p),
            fmt_f64(self.sigma),
            fmt_f64(self.entropy),
            fmt_f64(self.gsa_err),
            fmt_f64(self.stderr),
        ]
    }

    fn from_row(r: &[&str]) -> Result<Self> {
        Ok(GroverRecord {
            n: field(r, 0, "N")?,
            model: field(r, 1, "model")?,
            p: field(r, 2, "p")?,
            sigma: field(r, 3, "sigma")?,
            entropy: field(r, 4, "entropy")?,
            gsa_err: field(r, 5, "gsa_err")?,
            stderr: field(r, 6, "stderr")?,
        })
    }
}

/// Approximation-to-model infidelity ratio statistics of one heatmap cell.
#[derive(Clone, Debug, PartialEq)]
pub struct HeatmapRecord {
    pub n_h: usize,
    pub n_cnot: usize,
    pub sigma: f64,
    pub mean_ratio: f64,
    pub var_ratio: f64,
    pub n_valid: usize,
    /// Circuits whose full-model infidelity vanished, leaving the ratio undefined.
    pub n_undefined: usize,
}

impl CsvRecord for HeatmapRecord {
    const HEADER: &'static [&'static str] =
        &["n_h", "n_cnot", "sigma", "mean_ratio", "var_ratio", "n_valid", "n_undefined"];

    fn to_row(&self) -> Vec<String> {
        vec![
            self.n_h.to_string(),
            self.n_cnot.to_string(),
            fmt_f64(self.sigma),
            fmt_f64(self.mean_ratio),
            fmt_f64(self.var_ratio),
            self.n_valid.to_string(),
            self.n_undefined.to_string(),
        ]
    }

    fn from_row(r: &[&str]) -> Result<Self> {
        Ok(HeatmapRecord {
            n_h: field(r, 0, "n_h")?,
            n_cnot: field(r, 1, "n_cnot")?,
            sigma: field(r, 2, "sigma")?,
            mean_ratio: field(r, 3, "mean_ratio")?,
            var_ratio: field(r, 4, "var_ratio")?,
            n_valid: field(r, 5, "n_valid")?,
            n_undefined: field(r, 6, "n_undefined")?,
        })
    }
}

/// One row of the entropy-matched axes.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyRecord {
    pub p: f64,
    pub p_bf: f64,
    pub kappa: f64,
    pub sigma: f64,
    pub entropy: f64,
}

impl CsvRecord for EntropyRecord {
    const HEADER: &'static [&'static str] = &["p", "p_bf", "kappa", "sigma", "entropy"];

    fn to_row(&self) -> Vec<String> {
        [self.p, self.p_bf, self.kappa, self.sigma, self.entropy].map(fmt_f64).to_vec()
    }

    fn from_row(r: &[&str]) -> Result<Self> {
        Ok(EntropyRecord {
            p: field(r, 0, "p")?,
            p_bf: field(r, 1, "p_bf")?,
            kappa: field(r, 2, "kappa")?,
            sigma: field(r, 3, "sigma")?,
            entropy: field(r, 4, "entropy")?,
        })
    }
}

/// Header plus one row per record.
pub fn write_csv<T: CsvRecord>(records: &[T], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|source| Error::Io { path: path.into(), source })?;
    let mut out = BufWriter::new(file);
    write_records(records, &mut out).map_err(|source| Error::Csv { path: path.into(), source })?;
    out.flush().map_err(|source| Error::Io { path: path.into(), source })
}

/// Write CSV to any sink.
pub fn write_records<T: CsvRecord, W: Write>(records: &[T], sink: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(T::HEADER)?;
    for r in records {
        w.write_record(r.to_row())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<T: CsvRecord>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path).map_err(|source| Error::Csv { path: path.into(), source })?;
    let header = r.headers().map_err(|source| Error::Csv { path: path.into(), source })?;
    if header.iter().ne(T::HEADER.iter().copied()) {
        return Err(Error::Config(format!(
            "{}: header {:?} does not match {:?}",
            path.display(),
            header,
            T::HEADER
        )));
    }
    let mut out = Vec::new();
    for row in r.records() {
        let row = row.map_err(|source| Error::Csv { path: path.into(), source })?;
        let fields: Vec<&str> = row.iter().collect();
        out.push(T::from_row(&fields)?);
    }
    Ok(out)
}
