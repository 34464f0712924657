//! JSON group and band documents.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bands::{make_band, FlatBand};
use crate::groups::{validate_definition, AffineElement, SignAssignment, SpaceGroup, Validation, Word};
use crate::linalg::{format_rational, IntMatrix, QuadraticForm, RatMatrix, RatVec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDocument {
    pub dimension: usize,
    pub gram: Vec<Vec<String>>,
    pub generators: Vec<GeneratorDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relators: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub metadata: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDocument {
    pub linear: Vec<Vec<i64>>,
    pub translation: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandDocument {
    pub base: GroupDocument,
    pub flip: SignAssignment,
    pub width: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DocumentError {
    /// Malformed JSON or wrong field types.
    Syntax { line: usize, column: usize, message: String },
    /// A field with an unusable value.
    Field { path: String, message: String },
    /// Well-formed data that does not define a crystallographic group.
    Invalid(Validation),
}

impl fmt::Display for DocumentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DocumentError::Syntax { line, column, message } => write!(f, "line {line}, column {column}: {message}"),
            DocumentError::Field { path, message } => write!(f, "{path}: {message}"),
            DocumentError::Invalid(v) => {
                let lines: Vec<String> = v.issues.iter().map(|d| format!("check ({}) failed: {d}", d.check())).collect();
                write!(f, "{}", lines.join("; "))
            }
        }
    }
}

fn field(path: impl Into<String>, message: impl Into<String>) -> DocumentError {
    DocumentError::Field { path: path.into(), message: message.into() }
}

fn syntax(e: serde_json::Error) -> DocumentError {
    DocumentError::Syntax { line: e.line(), column: e.column(), message: e.to_string() }
}

pub enum Document {
    Group(GroupDocument),
    Band(BandDocument),
}

/// Parses either kind of document; a top-level `base` key marks a band.
pub fn parse_document(text: &str) -> Result<Document, DocumentError> {
    let value: Value = serde_json::from_str(text).map_err(syntax)?;
    if value.get("base").is_some() {
        serde_json::from_str(text).map(Document::Band).map_err(syntax)
    } else {
        serde_json::from_str(text).map(Document::Group).map_err(syntax)
    }
}

fn parse_rational(path: &str, s: &str) -> Result<BigRational, DocumentError> {
    s.trim().parse().map_err(|_| field(path, format!("`{s}` is not a rational number p/q")))
}

impl GroupDocument {
    pub fn from_group(sg: &SpaceGroup, metadata: Value) -> GroupDocument {
        let n = sg.dim();
        let gram = (0..n).map(|i| sg.form().gram().row(i).iter().map(format_rational).collect()).collect();
        let generators = sg
            .generators()
            .iter()
            .map(|g| GeneratorDocument {
                linear: g.linear.to_rows().iter().map(|r| r.iter().map(small).collect()).collect(),
                translation: g.translation.iter().map(format_rational).collect(),
            })
            .collect();
        GroupDocument {
            dimension: n,
            gram,
            generators,
            relators: sg.relators().map(<[Word]>::to_vec),
            metadata,
        }
    }

    /// Builds and validates the group, reporting the first located problem.
    pub fn to_group(&self, cap: usize) -> Result<SpaceGroup, DocumentError> {
        let n = self.dimension;
        if n == 0 {
            return Err(field("dimension", "must be positive"));
        }
        if self.gram.len() != n {
            return Err(field("gram", format!("expected {n} rows, found {}", self.gram.len())));
        }
        let mut rows = Vec::with_capacity(n);
        for (i, row) in self.gram.iter().enumerate() {
            if row.len() != n {
                return Err(field(format!("gram[{i}]"), format!("expected {n} entries, found {}", row.len())));
            }
            let parsed: Result<Vec<_>, _> =
                row.iter().enumerate().map(|(j, s)| parse_rational(&format!("gram[{i}][{j}]"), s)).collect();
            rows.push(parsed?);
        }
        let form = QuadraticForm::new(RatMatrix::from_rows(rows)).map_err(|e| field("gram", e.to_string()))?;
        let mut gens = Vec::with_capacity(self.generators.len());
        for (k, g) in self.generators.iter().enumerate() {
            let at = |s: &str| format!("generators[{k}].{s}");
            if g.linear.len() != n || g.linear.iter().any(|r| r.len() != n) {
                return Err(field(at("linear"), format!("expected a {n}x{n} integer matrix")));
            }
            if g.translation.len() != n {
                return Err(field(at("translation"), format!("expected {n} entries, found {}", g.translation.len())));
            }
            let linear = IntMatrix::from_rows(g.linear.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect());
            if !linear.is_unimodular() {
                return Err(field(at("linear"), "matrix is not invertible over the integers"));
            }
            let t: Result<RatVec, _> = g
                .translation
                .iter()
                .enumerate()
                .map(|(j, s)| parse_rational(&at(&format!("translation[{j}]")), s))
                .collect();
            gens.push(AffineElement::new(linear, t?));
        }
        if let Some(rels) = &self.relators {
            let k = gens.len() as i64;
            for (i, r) in rels.iter().enumerate() {
                if let Some(j) = r.iter().position(|&l| l == 0 || l.abs() > k) {
                    return Err(field(format!("relators[{i}][{j}]"), format!("letter must be ±1..±{k}")));
                }
            }
        }
        let (sg, validation) = validate_definition(form, gens, self.relators.clone(), cap);
        match sg {
            Some(sg) if validation.is_valid() => Ok(sg),
            _ => Err(DocumentError::Invalid(validation)),
        }
    }
}

impl BandDocument {
    pub fn from_band(band: &FlatBand, metadata: Value) -> BandDocument {
        BandDocument {
            base: GroupDocument::from_group(band.base(), metadata),
            flip: band.flip().clone(),
            width: format_rational(band.width()),
        }
    }

    pub fn to_band(&self, cap: usize) -> Result<FlatBand, DocumentError> {
        let base = self.base.to_group(cap).map_err(|e| match e {
            DocumentError::Field { path, message } => field(format!("base.{path}"), message),
            other => other,
        })?;
        let width = parse_rational("width", &self.width)?;
        make_band(base, self.flip.clone(), width).map_err(|e| field("flip", e.to_string()))
    }
}

pub fn metadata(name: &str, parameters: BTreeMap<String, String>) -> Value {
    serde_json::json!({ "name": name, "parameters": parameters })
}

fn small(x: &BigInt) -> i64 {
    x.to_i64().expect("matrix entry fits in i64")
}
