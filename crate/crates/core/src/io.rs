//! JSON and CSV encodings.
//!
//! Complex matrices are nested row-major arrays of `[re, im]` pairs; real
//! matrices are nested row-major arrays of numbers.

use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::channel::{
    kraus_to_ptm, ptm_to_choi, validate_cptp, ChannelModel, CptpReport, KrausChannel,
    PauliTransferMatrix,
};
use crate::pauli::CMatrix;
use crate::states::{Protocol, StateFamily};
use crate::tomography::{EntryEstimate, TomographyResult};
use crate::{Error, Result};

pub type ComplexRows = Vec<Vec<[f64; 2]>>;
pub type RealRows = Vec<Vec<f64>>;

pub fn complex_to_rows(m: &CMatrix) -> ComplexRows {
    (0..m.nrows())
        .map(|r| {
            (0..m.ncols())
                .map(|c| [m[(r, c)].re, m[(r, c)].im])
                .collect()
        })
        .collect()
}

pub fn complex_from_rows(rows: &[Vec<[f64; 2]>]) -> Result<CMatrix> {
    let (nrows, ncols) = rectangular(rows)?;
    Ok(CMatrix::from_fn(nrows, ncols, |r, c| {
        let [re, im] = rows[r][c];
        Complex64::new(re, im)
    }))
}

pub fn real_to_rows(m: &DMatrix<f64>) -> RealRows {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect())
        .collect()
}

pub fn real_from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let (nrows, ncols) = rectangular(rows)?;
    Ok(DMatrix::from_fn(nrows, ncols, |r, c| rows[r][c]))
}

fn rectangular<T>(rows: &[Vec<T>]) -> Result<(usize, usize)> {
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || ncols == 0 {
        return Err(Error::Malformed("empty matrix".into()));
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
        return Err(Error::DimensionMismatch {
            expected: ncols,
            found: bad.len(),
        });
    }
    Ok((rows.len(), ncols))
}

/// A channel given either by a named model or by raw Kraus operators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChannelSpec {
    Model(ChannelModel),
    Kraus { kraus: Vec<ComplexRows>, n: usize },
}

impl ChannelSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(format!("channel spec: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Parses `model=name,key=value,...`. Array parameters use `:` as the
    /// separator, e.g. `probs=0.7:0.1:0.1:0.1`.
    pub fn parse_inline(text: &str) -> Result<Self> {
        let mut model = None;
        let mut params = Map::new();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Malformed(format!("expected key=value, got {part:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            if key == "model" {
                model = Some(value.to_string());
                continue;
            }
            params.insert(key.to_string(), inline_value(key, value)?);
        }
        let model = model.ok_or_else(|| Error::Malformed("missing model=<name>".into()))?;
        let json = serde_json::json!({ "model": model, "params": params });
        serde_json::from_value::<ChannelModel>(json)
            .map(Self::Model)
            .map_err(|e| Error::UnknownName(format!("{model}: {e}")))
    }

    pub fn build(&self) -> Result<KrausChannel> {
        match self {
            Self::Model(m) => m.build(),
            Self::Kraus { kraus, n } => {
                let ops = kraus
                    .iter()
                    .map(|rows| complex_from_rows(rows))
                    .collect::<Result<Vec<_>>>()?;
                KrausChannel::new(*n, ops)
            }
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Self::Model(m) => m.n(),
            Self::Kraus { n, .. } => *n,
        }
    }

    pub fn from_channel(ch: &KrausChannel) -> Self {
        Self::Kraus {
            kraus: ch.operators().iter().map(complex_to_rows).collect(),
            n: ch.n(),
        }
    }
}

impl FromStr for ChannelSpec {
    type Err = Error;

    /// Inline `model=...` text, otherwise a JSON document.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim_start().starts_with("model=") {
            Self::parse_inline(s)
        } else {
            Self::from_json(s)
        }
    }
}

fn inline_value(key: &str, value: &str) -> Result<Value> {
    let number = |s: &str| -> Result<Value> {
        if let Ok(u) = s.parse::<u64>() {
            return Ok(Value::from(u));
        }
        s.parse::<f64>()
            .map(Value::from)
            .map_err(|_| Error::Malformed(format!("{key}: {s:?} is not a number")))
    };
    if value.contains(':') {
        value
            .split(':')
            .map(number)
            .collect::<Result<Vec<_>>>()
            .map(Value::Array)
    } else {
        number(value)
    }
}

/// Analytic PTM export with the generating channel spec for provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PtmExport {
    pub n: usize,
    pub gamma: RealRows,
    pub channel: ChannelSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub choi: Option<ComplexRows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<CptpReport>,
}

impl PtmExport {
    pub fn from_spec(spec: &ChannelSpec, with_choi: bool, with_report: bool) -> Result<Self> {
        let ch = spec.build()?;
        let ptm = kraus_to_ptm(&ch)?;
        let choi = if with_choi {
            Some(complex_to_rows(ptm_to_choi(&ptm)?.matrix()))
        } else {
            None
        };
        Ok(Self {
            n: ptm.n(),
            gamma: real_to_rows(ptm.matrix()),
            channel: spec.clone(),
            choi,
            report: with_report.then(|| validate_cptp(&ch)),
        })
    }

    pub fn ptm(&self) -> Result<PauliTransferMatrix> {
        PauliTransferMatrix::from_matrix_unchecked(self.n, real_from_rows(&self.gamma)?)
    }
}

/// Input-state family with its reconstruction matrix `β`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFamilyExport {
    pub protocol: Option<Protocol>,
    pub n: usize,
    pub states: Vec<ComplexRows>,
    pub beta: RealRows,
}

impl From<&StateFamily> for StateFamilyExport {
    fn from(family: &StateFamily) -> Self {
        Self {
            protocol: family.protocol(),
            n: family.n(),
            states: family
                .states()
                .iter()
                .map(|s| complex_to_rows(s.matrix()))
                .collect(),
            beta: real_to_rows(family.reconstruction().beta()),
        }
    }
}

#[derive(Serialize)]
struct CsvRow {
    i: usize,
    j: usize,
    gamma_hat: f64,
    std_error: f64,
    n_configs_used: usize,
}

/// One row per entry, sorted by `(i, j)`.
pub fn write_entries_csv<W: Write>(entries: &[EntryEstimate], out: W) -> Result<()> {
    let mut sorted: Vec<&EntryEstimate> = entries.iter().collect();
    sorted.sort_by_key(|e| (e.i, e.j));
    let mut w = csv::Writer::from_writer(out);
    for e in sorted {
        w.serialize(CsvRow {
            i: e.i,
            j: e.j,
            gamma_hat: e.value,
            std_error: e.std_error,
            n_configs_used: e.n_configs,
        })
        .map_err(|e| Error::Malformed(format!("csv: {e}")))?;
    }
    w.flush().map_err(|e| Error::Malformed(format!("csv: {e}")))
}

pub fn result_to_csv(result: &TomographyResult) -> Result<String> {
    let mut buf = Vec::new();
    write_entries_csv(&result.entries, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Malformed(e.to_string()))
}

#[derive(Serialize)]
struct TaggedCsvRow {
    protocol: Protocol,
    i: usize,
    j: usize,
    gamma_hat: f64,
    std_error: f64,
    n_configs_used: usize,
}

/// Several results in one table. A single result uses the plain layout of
/// [`write_entries_csv`]; more than one adds a leading `protocol` column.
pub fn results_to_csv(results: &[TomographyResult]) -> Result<String> {
    if let [single] = results {
        return result_to_csv(single);
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for result in results {
        let mut entries: Vec<&EntryEstimate> = result.entries.iter().collect();
        entries.sort_by_key(|e| (e.i, e.j));
        for e in entries {
            w.serialize(TaggedCsvRow {
                protocol: result.protocol,
                i: e.i,
                j: e.j,
                gamma_hat: e.value,
                std_error: e.std_error,
                n_configs_used: e.n_configs,
            })
            .map_err(|e| Error::Malformed(format!("csv: {e}")))?;
        }
    }
    let buf = w
        .into_inner()
        .map_err(|e| Error::Malformed(format!("csv: {e}")))?;
    String::from_utf8(buf).map_err(|e| Error::Malformed(e.to_string()))
}
