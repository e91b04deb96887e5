//! JSON file formats: codes, qudit check matrices, and search specs.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::builders::{BuildError, QuditCheckMatrix, QuditRow};
use crate::code::{CodeError, ModeLayout, PfCode};
use crate::pf::PfOperator;
use crate::search::SearchSpec;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("unsupported format_version {0} (expected {FORMAT_VERSION})")]
    Version(u32),
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

fn field(field: impl Into<String>, message: impl ToString) -> IoError {
    IoError::Field {
        field: field.into(),
        message: message.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorEntry {
    pub mu: u64,
    pub alpha: Vec<u64>,
}

/// Which construction produced a file, and with what parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub builder: String,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
}

impl Provenance {
    pub fn new(builder: &str, params: &[(&str, Value)]) -> Self {
        Self {
            builder: builder.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        }
    }
}

/// On-disk code format. Inverse modes are written as exponent `D - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeFileV1 {
    pub format_version: u32,
    #[serde(rename = "D")]
    pub modulus: u64,
    pub num_modes: usize,
    pub generators: Vec<GeneratorEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode_layout: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl CodeFileV1 {
    pub fn from_code(code: &PfCode, provenance: Option<Provenance>) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            modulus: code.modulus(),
            num_modes: code.num_modes(),
            generators: code
                .generators()
                .iter()
                .map(|g| GeneratorEntry {
                    mu: g.mu(),
                    alpha: g.alpha().to_vec(),
                })
                .collect(),
            mode_layout: code.layout().map(|l| l.coords().to_vec()),
            provenance,
        }
    }

    pub fn to_code(&self) -> Result<PfCode, IoError> {
        if self.format_version != FORMAT_VERSION {
            return Err(IoError::Version(self.format_version));
        }
        let d = self.modulus;
        if d < 2 {
            return Err(field("D", "modulus must be at least 2"));
        }
        if self.num_modes == 0 || self.num_modes % 2 != 0 {
            return Err(field("num_modes", "must be even and positive"));
        }
        let gens = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| {
                if g.alpha.len() != self.num_modes {
                    return Err(field(
                        format!("generators[{i}].alpha"),
                        format!("has {} entries, expected {}", g.alpha.len(), self.num_modes),
                    ));
                }
                if let Some(j) = g.alpha.iter().position(|&a| a >= d) {
                    return Err(field(
                        format!("generators[{i}].alpha[{j}]"),
                        format!("{} is not a residue mod {d}", g.alpha[j]),
                    ));
                }
                if g.mu >= 2 * d {
                    return Err(field(
                        format!("generators[{i}].mu"),
                        format!("{} is not a residue mod {}", g.mu, 2 * d),
                    ));
                }
                PfOperator::new(d, g.mu, g.alpha.clone()).map_err(|e| field(format!("generators[{i}]"), e))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let code = PfCode::new(d, self.num_modes, gens).map_err(|e| field("generators", e))?;
        match &self.mode_layout {
            None => Ok(code),
            Some(coords) => {
                let layout = ModeLayout::new(coords.clone()).map_err(|e| field("mode_layout", e))?;
                code.with_layout(layout).map_err(|e: CodeError| field("mode_layout", e))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuditFileV1 {
    pub format_version: u32,
    #[serde(rename = "D")]
    pub modulus: u64,
    pub num_qudits: usize,
    pub rows: Vec<QuditRow>,
}

impl QuditFileV1 {
    pub fn from_matrix(q: &QuditCheckMatrix) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            modulus: q.modulus(),
            num_qudits: q.num_qudits(),
            rows: q.rows().to_vec(),
        }
    }

    pub fn to_matrix(&self) -> Result<QuditCheckMatrix, IoError> {
        if self.format_version != FORMAT_VERSION {
            return Err(IoError::Version(self.format_version));
        }
        for (i, r) in self.rows.iter().enumerate() {
            for (name, part) in [("x", &r.x), ("z", &r.z)] {
                if part.len() != self.num_qudits {
                    return Err(field(
                        format!("rows[{i}].{name}"),
                        format!("has {} entries, expected {}", part.len(), self.num_qudits),
                    ));
                }
                if let Some(j) = part.iter().position(|&a| a >= self.modulus) {
                    return Err(field(
                        format!("rows[{i}].{name}[{j}]"),
                        format!("{} is not a residue mod {}", part[j], self.modulus),
                    ));
                }
            }
        }
        QuditCheckMatrix::new(self.modulus, self.num_qudits, self.rows.clone())
            .map_err(|e: BuildError| field("rows", e))
    }
}

pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T, IoError> {
    Ok(serde_json::from_str(text)?)
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })
}

pub fn parse_code(text: &str) -> Result<PfCode, IoError> {
    parse_json::<CodeFileV1>(text)?.to_code()
}

pub fn read_code(path: &Path) -> Result<PfCode, IoError> {
    parse_code(&read_text(path)?)
}

pub fn read_qudit_code(path: &Path) -> Result<QuditCheckMatrix, IoError> {
    parse_json::<QuditFileV1>(&read_text(path)?)?.to_matrix()
}

pub fn read_search_spec(path: &Path) -> Result<SearchSpec, IoError> {
    parse_json(&read_text(path)?)
}

/// Pretty JSON with a trailing newline; field order is fixed by the types.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn code_json(code: &PfCode, provenance: Option<Provenance>) -> String {
    to_json(&CodeFileV1::from_code(code, provenance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::code_8_1_3_d3;

    #[test]
    fn round_trip() {
        let c = code_8_1_3_d3();
        let text = code_json(&c, Some(Provenance::new("test", &[("n", Value::from(4))])));
        assert_eq!(parse_code(&text).unwrap(), c);
        let again = code_json(&parse_code(&text).unwrap(), Some(Provenance::new("test", &[("n", Value::from(4))])));
        assert_eq!(text, again);
    }

    #[test]
    fn out_of_range_names_field() {
        let text = r#"{"format_version":1,"D":3,"num_modes":2,"generators":[{"mu":0,"alpha":[1,3]}]}"#;
        match parse_code(text) {
            Err(IoError::Field { field, .. }) => assert_eq!(field, "generators[0].alpha[1]"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_error_has_position() {
        let text = "{\n  \"format_version\": 1,\n  \"D\": ,\n}";
        match parse_code(text) {
            Err(IoError::Json { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_version() {
        let text = r#"{"format_version":2,"D":3,"num_modes":2,"generators":[]}"#;
        assert!(matches!(parse_code(text), Err(IoError::Version(2))));
    }
}
