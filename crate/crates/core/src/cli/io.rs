//! JSON formats: instance files, path files and report serialization.

use std::io;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::forms::{FormSpace, SymmetricForm, DEFAULT_SYM_TOL};

/// Writes every `f64` with 17 significant digits so values round-trip exactly.
struct ExactFloats;

impl Formatter for ExactFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

/// Compact JSON with exact floats. Non-finite floats become `null`.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, ExactFloats);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Input(format!("serialization failed: {e}")))?;
    Ok(String::from_utf8(out).expect("serde_json emits UTF-8"))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    pub k: usize,
    /// Row-major `n × n` matrices, one per basis form.
    pub basis: Vec<Vec<f64>>,
    #[serde(default)]
    pub meta: Value,
}

impl InstanceFile {
    pub fn from_space(space: &FormSpace, meta: Value) -> Self {
        Self {
            n: space.dim_v(),
            k: space.dim_w(),
            basis: space
                .basis()
                .iter()
                .map(SymmetricForm::to_row_major)
                .collect(),
            meta,
        }
    }

    pub fn to_space(&self) -> Result<FormSpace> {
        if self.basis.len() != self.k {
            return Err(Error::Input(format!(
                "instance declares k = {} but lists {} basis forms",
                self.k,
                self.basis.len()
            )));
        }
        let forms = self
            .basis
            .iter()
            .enumerate()
            .map(|(j, entries)| {
                if entries.len() != self.n * self.n {
                    return Err(Error::Input(format!(
                        "basis form {j} has {} entries, expected {}",
                        entries.len(),
                        self.n * self.n
                    )));
                }
                SymmetricForm::with_tolerance(
                    DMatrix::from_row_slice(self.n, self.n, entries),
                    DEFAULT_SYM_TOL,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        FormSpace::new(forms)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathFile {
    pub knots: Vec<Vec<f64>>,
}

pub(crate) fn read_text(path: &Path) -> std::result::Result<String, io::Error> {
    std::fs::read_to_string(path)
}

pub(crate) fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed {what}: {e}")))
}

/// Knots from a path file, or from the `results.knots` of a connect report.
pub(crate) fn parse_knots(text: &str) -> Result<Vec<DVector<f64>>> {
    let value: Value = parse_json(text, "path file")?;
    let knots = value
        .get("knots")
        .or_else(|| value.get("results").and_then(|r| r.get("knots")))
        .ok_or_else(|| Error::Input("path file has no `knots` array".into()))?;
    let file: PathFile = serde_json::from_value(serde_json::json!({ "knots": knots }))
        .map_err(|e| Error::Input(format!("malformed knots: {e}")))?;
    Ok(file.knots.into_iter().map(DVector::from_vec).collect())
}

pub(crate) fn vec_of(v: &DVector<f64>) -> Vec<f64> {
    v.iter().copied().collect()
}
