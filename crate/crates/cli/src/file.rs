//! JSON instance files.
//!
//! ```json
//! {
//!   "A": {"rows": 1, "cols": 1, "data": [2.0]},
//!   "B": {"rows": 1, "cols": 1, "data": [1.0]},
//!   "C": {"rows": 1, "cols": 1, "data": [1.0]},
//!   "D": {"rows": 1, "cols": 1, "data": [1.0]},
//!   "F": {"rows": 1, "cols": 1, "data": [3.0]},
//!   "genspec": {"m": 1, "n": 1, "p": 1, "q": 1, "seed": 7, "margin": 0.5}
//! }
//! ```
//!
//! `"E"` is accepted in place of `"F"`. Matrices are row-major. Numbers are
//! written as `{:.16e}` (17 significant digits) and parsed with correct
//! rounding, so a write/read cycle reproduces every `f64` bit for bit.

use std::fs;
use std::path::{Path, PathBuf};

use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};
use sylave::gen::GenSpec;
use sylave::{Instance64, Matrix64};

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixDoc {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    #[serde(rename = "A")]
    a: MatrixDoc,
    #[serde(rename = "B")]
    b: MatrixDoc,
    #[serde(rename = "C")]
    c: MatrixDoc,
    #[serde(rename = "D")]
    d: MatrixDoc,
    #[serde(rename = "F", alias = "E")]
    f: MatrixDoc,
    #[serde(default)]
    genspec: Option<GenSpec>,
}

/// A parsed instance plus its optional generation record.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceFile {
    pub instance: Instance64,
    pub genspec: Option<GenSpec>,
}

fn to_matrix(name: &'static str, doc: MatrixDoc) -> Result<Matrix64, CliError> {
    let expected = doc.rows.saturating_mul(doc.cols);
    if doc.data.len() != expected {
        return Err(CliError::Invalid(format!(
            "{name}: data has {} entries but rows x cols = {} x {} = {expected}",
            doc.data.len(),
            doc.rows,
            doc.cols
        )));
    }
    Matrix64::from_row_major(doc.rows, doc.cols, doc.data).map_err(|e| CliError::Invalid(format!("{name}: {e}")))
}

impl InstanceFile {
    pub fn new(instance: Instance64, genspec: Option<GenSpec>) -> Self {
        Self { instance, genspec }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: InstanceDoc = serde_json::from_str(text).map_err(|e| CliError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let instance = Instance64::new(
            to_matrix("A", doc.a)?,
            to_matrix("B", doc.b)?,
            to_matrix("C", doc.c)?,
            to_matrix("D", doc.d)?,
            to_matrix("F", doc.f)?,
        )
        .map_err(|e| CliError::Invalid(e.to_string()))?;
        Ok(Self { instance, genspec: doc.genspec })
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text).map_err(|e| e.in_file(path))
    }

    pub fn to_json(&self) -> String {
        let inst = &self.instance;
        let doc = OutDoc {
            a: OutMatrix(inst.a()),
            b: OutMatrix(inst.b()),
            c: OutMatrix(inst.c()),
            d: OutMatrix(inst.d()),
            f: OutMatrix(inst.f()),
            genspec: self.genspec.as_ref(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("instance serializes");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        fs::write(path, self.to_json()).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
    }
}

#[derive(Serialize)]
struct OutDoc<'a> {
    #[serde(rename = "A")]
    a: OutMatrix<'a>,
    #[serde(rename = "B")]
    b: OutMatrix<'a>,
    #[serde(rename = "C")]
    c: OutMatrix<'a>,
    #[serde(rename = "D")]
    d: OutMatrix<'a>,
    #[serde(rename = "F")]
    f: OutMatrix<'a>,
    #[serde(skip_serializing_if = "Option::is_none")]
    genspec: Option<&'a GenSpec>,
}

/// Matrix with its entries written to 17 significant digits.
pub(crate) struct OutMatrix<'a>(pub(crate) &'a Matrix64);

struct Digits<'a>(&'a [f64]);

impl Serialize for Digits<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for x in self.0 {
            let raw = serde_json::value::RawValue::from_string(format!("{x:.16e}")).map_err(serde::ser::Error::custom)?;
            seq.serialize_element(&raw)?;
        }
        seq.end()
    }
}

impl Serialize for OutMatrix<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Doc<'a> {
            rows: usize,
            cols: usize,
            data: Digits<'a>,
        }
        Doc { rows: self.0.rows(), cols: self.0.cols(), data: Digits(self.0.as_slice()) }.serialize(serializer)
    }
}

/// `instance_<seed>_<index>.json` inside `dir`.
pub fn instance_path(dir: &Path, seed: u64, index: usize) -> PathBuf {
    dir.join(format!("instance_{seed}_{index}.json"))
}
