//! File formats.
//!
//! Signals are stored in a small binary layout (all integers and floats little-endian):
//!
//! ```text
//! offset  size  field
//! 0       4     magic "MAS1" (4D 41 53 31)
//! 4       4     u32 n_channels
//! 8       8     u64 n_samples
//! 16      8     f64 sample rate in Hz, NaN when absent
//! 24      8·n   f64 samples, channel after channel
//! ```
//!
//! Paths ending in `.csv` use a text layout instead: one line per channel,
//! comma-separated values printed with shortest round-trip precision.
//!
//! Models are JSON documents with fields in the order `format_version`,
//! `method`, `f`, `n_channels`, `window`, `eps`, `barycenter`. The barycenter
//! holds exactly one of `cross_spectrum` (`re` and `im`, each indexed
//! `[bin][row][col]`), `channel_psd` (`values[channel][bin]`) or `spatial`
//! (`matrix[row][col]`).

use std::fs;
use std::path::Path;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::align::{AlignmentModel, Method, Statistics, FORMAT_VERSION};
use crate::error::{Error, Result};
use crate::herm::{CMatrix, RMatrix};
use crate::spectral::{ChannelPsd, CrossSpectrum, Signal, SpatialCov, WindowSpec};

pub const SIGNAL_MAGIC: &[u8; 4] = b"MAS1";
const HEADER_LEN: usize = 24;

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

pub fn encode_signal(sig: &Signal) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * sig.data().len());
    out.extend_from_slice(SIGNAL_MAGIC);
    out.extend_from_slice(&(sig.n_channels() as u32).to_le_bytes());
    out.extend_from_slice(&(sig.n_samples() as u64).to_le_bytes());
    out.extend_from_slice(&sig.sample_rate_hz().unwrap_or(f64::NAN).to_le_bytes());
    for v in sig.data().iter() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_signal(bytes: &[u8]) -> Result<Signal> {
    if bytes.len() < 4 {
        return Err(Error::TruncatedFile);
    }
    if &bytes[..4] != SIGNAL_MAGIC {
        return Err(Error::BadMagic);
    }
    if bytes.len() < HEADER_LEN {
        return Err(Error::TruncatedFile);
    }
    let n_c = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes")) as usize;
    let n_l = u64::from_le_bytes(bytes[8..16].try_into().expect("8 bytes")) as usize;
    let rate = f64::from_le_bytes(bytes[16..24].try_into().expect("8 bytes"));
    let expected = n_c
        .checked_mul(n_l)
        .and_then(|n| n.checked_mul(8))
        .and_then(|n| n.checked_add(HEADER_LEN))
        .ok_or(Error::TruncatedFile)?;
    if bytes.len() < expected {
        return Err(Error::TruncatedFile);
    }
    if bytes.len() > expected {
        return Err(Error::InvalidSignal(format!(
            "{} trailing bytes after the samples",
            bytes.len() - expected
        )));
    }
    let values: Vec<f64> = bytes[HEADER_LEN..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let data = Array2::from_shape_vec((n_c, n_l), values).map_err(|e| Error::InvalidSignal(e.to_string()))?;
    let rate = if rate.is_nan() { None } else { Some(rate) };
    Signal::new(data)?.with_sample_rate(rate)
}

pub fn signal_to_csv(sig: &Signal) -> String {
    let mut out = String::new();
    for row in sig.data().rows() {
        let line: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn signal_from_csv(text: &str) -> Result<Signal> {
    let rows = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.split(',')
                .map(|v| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::InvalidSignal(format!("bad value {v:?}: {e}")))
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Err(Error::TruncatedFile);
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    Signal::from_rows(&rows)
}

/// Writes a signal; `.csv` paths get the text layout.
pub fn write_signal(path: impl AsRef<Path>, sig: &Signal) -> Result<()> {
    let path = path.as_ref();
    let bytes = if is_csv(path) {
        signal_to_csv(sig).into_bytes()
    } else {
        encode_signal(sig)
    };
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn read_signal(path: impl AsRef<Path>) -> Result<Signal> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    if is_csv(path) {
        let text = String::from_utf8(bytes).map_err(|e| Error::InvalidSignal(e.to_string()))?;
        signal_from_csv(&text)
    } else {
        decode_signal(&bytes)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    format_version: u32,
    method: Method,
    f: usize,
    n_channels: usize,
    window: WindowSpec,
    eps: f64,
    barycenter: BarycenterDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum BarycenterDoc {
    CrossSpectrum { re: Vec<Vec<Vec<f64>>>, im: Vec<Vec<Vec<f64>>> },
    ChannelPsd { values: Vec<Vec<f64>> },
    Spatial { matrix: Vec<Vec<f64>> },
}

fn rows_of<T: Copy>(m: &nalgebra::DMatrix<T>) -> Vec<Vec<T>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

fn square_from_rows<T: nalgebra::Scalar + Copy>(rows: &[Vec<T>], n: usize, what: &str) -> Result<nalgebra::DMatrix<T>> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Schema(format!("{what} must be {n}x{n}")));
    }
    Ok(nalgebra::DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn to_doc(model: &AlignmentModel) -> ModelDoc {
    let barycenter = match &model.barycenter {
        Statistics::CrossSpectrum(cs) => BarycenterDoc::CrossSpectrum {
            re: cs.bins().iter().map(|b| rows_of(&b.map(|v| v.re))).collect(),
            im: cs.bins().iter().map(|b| rows_of(&b.map(|v| v.im))).collect(),
        },
        Statistics::ChannelPsd(p) => BarycenterDoc::ChannelPsd {
            values: p.values().rows().into_iter().map(|r| r.to_vec()).collect(),
        },
        Statistics::Spatial(s) => BarycenterDoc::Spatial {
            matrix: rows_of(s.matrix()),
        },
    };
    ModelDoc {
        format_version: model.format_version,
        method: model.method,
        f: model.f,
        n_channels: model.n_channels,
        window: model.window,
        eps: model.eps,
        barycenter,
    }
}

fn from_doc(doc: ModelDoc) -> Result<AlignmentModel> {
    let n = doc.n_channels;
    if n == 0 {
        return Err(Error::Schema("n_channels must be positive".into()));
    }
    let schema = |e: Error| Error::Schema(e.to_string());
    let barycenter = match doc.barycenter {
        BarycenterDoc::CrossSpectrum { re, im } => {
            if re.len() != im.len() || re.is_empty() {
                return Err(Error::Schema("cross_spectrum re/im must have the same positive number of bins".into()));
            }
            let bins = re
                .iter()
                .zip(&im)
                .map(|(r, i)| {
                    let r = square_from_rows(r, n, "cross_spectrum bin")?;
                    let i = square_from_rows(i, n, "cross_spectrum bin")?;
                    Ok(CMatrix::from_fn(n, n, |a, b| Complex64::new(r[(a, b)], i[(a, b)])))
                })
                .collect::<Result<Vec<_>>>()?;
            let cs = CrossSpectrum::from_raw_bins(bins).map_err(schema)?;
            cs.validate().map_err(schema)?;
            Statistics::CrossSpectrum(cs)
        }
        BarycenterDoc::ChannelPsd { values } => {
            let f = values.first().map_or(0, Vec::len);
            if values.len() != n || values.iter().any(|r| r.len() != f) {
                return Err(Error::Schema(format!("channel_psd must be {n} rows of equal length")));
            }
            let arr = Array2::from_shape_vec((n, f), values.concat()).map_err(|e| Error::Schema(e.to_string()))?;
            Statistics::ChannelPsd(ChannelPsd::new(arr).map_err(schema)?)
        }
        BarycenterDoc::Spatial { matrix } => {
            let m: RMatrix = square_from_rows(&matrix, n, "spatial matrix")?;
            Statistics::Spatial(SpatialCov::new(m).map_err(schema)?)
        }
    };
    let model = AlignmentModel {
        format_version: doc.format_version,
        method: doc.method,
        f: doc.f,
        n_channels: n,
        window: doc.window,
        eps: doc.eps,
        barycenter,
    };
    model.check().map_err(|e| match e {
        Error::Schema(_) => e,
        other => Error::Schema(other.to_string()),
    })?;
    Ok(model)
}

pub fn model_to_json(model: &AlignmentModel) -> String {
    serde_json::to_string_pretty(&to_doc(model)).expect("model serializes")
}

pub fn model_from_json(text: &str) -> Result<AlignmentModel> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    let version = value
        .get("format_version")
        .ok_or_else(|| Error::Schema("missing format_version".into()))?;
    let found = version
        .as_u64()
        .ok_or_else(|| Error::Schema("format_version must be a nonnegative integer".into()))?;
    if found != u64::from(FORMAT_VERSION) {
        return Err(Error::VersionUnsupported {
            found,
            supported: FORMAT_VERSION,
        });
    }
    let doc: ModelDoc = serde_json::from_value(value).map_err(|e| Error::Schema(e.to_string()))?;
    from_doc(doc)
}

pub fn save_model(path: impl AsRef<Path>, model: &AlignmentModel) -> Result<()> {
    let path = path.as_ref();
    let mut text = model_to_json(model);
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<AlignmentModel> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    model_from_json(&text)
}
