//! JSON encodings shared by config files, input files and reports.
//!
//! Field elements are coefficient arrays `[c_0, …, c_{r-1}]`; on input a bare
//! integer is also accepted when `r = 1`. Reports always emit arrays.

use std::fs;
use std::path::Path;

use fqeuclid::embed::ColoredPattern;
use fqeuclid::sample::sample_subset;
use fqeuclid::{Field, FieldElement, QuadraticForm, QuadraticSpace, VertexSet};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{CliError, Result};

pub fn field_json(f: &Field) -> Value {
    json!({
        "p": f.characteristic(),
        "r": f.degree(),
        "modulus": f.modulus().map(|m| m.to_vec()).unwrap_or_default(),
    })
}

pub fn element_json(f: &Field, e: FieldElement) -> Value {
    json!(f.coeffs(e))
}

pub fn vector_json(space: &QuadraticSpace, v: usize) -> Value {
    Value::Array(
        space
            .coords(v)
            .iter()
            .map(|&c| element_json(space.field(), c))
            .collect(),
    )
}

pub fn parse_element(f: &Field, v: &Value) -> std::result::Result<FieldElement, String> {
    let bad = || format!("{} is not an element of F_{}", v, f.order());
    match v {
        Value::Number(n) if f.degree() == 1 => {
            let c = n.as_u64().filter(|&c| c < f.characteristic() as u64).ok_or_else(bad)?;
            f.from_coeffs(&[c as u32]).map_err(|_| bad())
        }
        Value::Array(items) => {
            let coeffs = items
                .iter()
                .map(|c| c.as_u64().and_then(|c| u32::try_from(c).ok()).ok_or_else(bad))
                .collect::<std::result::Result<Vec<u32>, String>>()?;
            f.from_coeffs(&coeffs).map_err(|_| bad())
        }
        _ => Err(bad()),
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::FileFormat(format!("{}: {}", path.display(), e)))?;
    serde_json::from_str(&text).map_err(|e| CliError::FileFormat(format!("{}: {}", path.display(), e)))
}

/// `{"dim": d, "gram": [[…], …]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormFile {
    pub dim: usize,
    pub gram: Vec<Vec<Value>>,
}

impl FormFile {
    pub fn to_form(&self, f: &Field) -> Result<QuadraticForm> {
        if self.gram.len() != self.dim || self.gram.iter().any(|row| row.len() != self.dim) {
            return Err(CliError::FileFormat(format!("gram must be {0}x{0}", self.dim)));
        }
        let entries = self
            .gram
            .iter()
            .flatten()
            .map(|v| parse_element(f, v).map_err(CliError::FileFormat))
            .collect::<Result<Vec<_>>>()?;
        Ok(QuadraticForm::new(f, self.dim, entries)?)
    }
}

/// `{"k": k, "edges": [[i, j, color], …]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternFile {
    pub k: usize,
    pub edges: Vec<(usize, usize, Value)>,
}

impl PatternFile {
    pub fn to_pattern(&self, f: &Field) -> Result<ColoredPattern> {
        let edges = self
            .edges
            .iter()
            .map(|(i, j, c)| Ok((*i, *j, parse_element(f, c).map_err(CliError::FileFormat)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ColoredPattern::new(self.k, edges)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleSpec {
    pub size: usize,
    pub seed: u64,
}

/// A JSON list of vertex indices or `{"sample": {"size": m, "seed": s}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SubsetSpec {
    List(Vec<usize>),
    Sample { sample: SampleSpec },
}

impl SubsetSpec {
    pub fn resolve(&self, n: usize) -> Result<VertexSet> {
        let members = match self {
            SubsetSpec::List(v) => v.clone(),
            SubsetSpec::Sample { sample } => sample_subset(n, sample.size, sample.seed)
                .map_err(|_| CliError::Config(format!("sample size {} exceeds {} vertices", sample.size, n)))?,
        };
        Ok(VertexSet::new(n, members)?)
    }
}

/// `{"table": [F(x) for x in vertex-index order]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableFile {
    pub table: Vec<Value>,
}

impl TableFile {
    pub fn values(&self, f: &Field) -> Result<Vec<FieldElement>> {
        self.table
            .iter()
            .map(|v| parse_element(f, v).map_err(CliError::FileFormat))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_encodings() {
        let f3 = Field::new(3, 1, None).unwrap();
        assert_eq!(parse_element(&f3, &json!(2)).unwrap(), f3.from_int(2));
        assert_eq!(parse_element(&f3, &json!([2])).unwrap(), f3.from_int(2));
        assert!(parse_element(&f3, &json!(3)).is_err());
        assert!(parse_element(&f3, &json!(-1)).is_err());
        let f9 = Field::new(3, 2, None).unwrap();
        let e = parse_element(&f9, &json!([1, 2])).unwrap();
        assert_eq!(element_json(&f9, e), json!([1, 2]));
        assert!(parse_element(&f9, &json!(1)).is_err());
        assert!(parse_element(&f9, &json!([1])).is_err());
        assert_eq!(element_json(&f3, f3.one()), json!([1]));
    }

    #[test]
    fn field_serialization() {
        assert_eq!(
            field_json(&Field::new(3, 2, None).unwrap()),
            json!({"p": 3, "r": 2, "modulus": [1, 0, 1]})
        );
        assert_eq!(field_json(&Field::new(5, 1, None).unwrap())["modulus"], json!([]));
    }

    #[test]
    fn subset_specs() {
        let list: SubsetSpec = serde_json::from_str("[3, 1, 4]").unwrap();
        assert_eq!(list.resolve(9).unwrap().members(), &[1, 3, 4]);
        assert!(matches!(
            serde_json::from_str::<SubsetSpec>("[3, 3]").unwrap().resolve(9),
            Err(CliError::Core(fqeuclid::Error::DuplicateVertex(3)))
        ));
        let s: SubsetSpec = serde_json::from_str(r#"{"sample": {"size": 4, "seed": 9}}"#).unwrap();
        assert_eq!(s.resolve(25).unwrap().len(), 4);
        assert!(s.resolve(3).is_err());
    }

    #[test]
    fn pattern_and_form_files() {
        let f = Field::new(5, 1, None).unwrap();
        let p: PatternFile = serde_json::from_str(r#"{"k": 3, "edges": [[0, 1, 1], [1, 2, [2]]]}"#).unwrap();
        let h = p.to_pattern(&f).unwrap();
        assert_eq!((h.k(), h.n()), (3, 2));
        let bad: PatternFile = serde_json::from_str(r#"{"k": 2, "edges": [[0, 1, 7]]}"#).unwrap();
        assert!(matches!(bad.to_pattern(&f), Err(CliError::FileFormat(_))));
        let form: FormFile = serde_json::from_str(r#"{"dim": 2, "gram": [[1, 0], [0, 2]]}"#).unwrap();
        assert_eq!(form.to_form(&f).unwrap().dim(), 2);
        let ragged: FormFile = serde_json::from_str(r#"{"dim": 2, "gram": [[1, 0], [0]]}"#).unwrap();
        assert!(ragged.to_form(&f).is_err());
    }
}
