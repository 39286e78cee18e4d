//! JSON form of structure constants:
//! `{"dim": n, "arity": m, "entries": [{"in": [j1, ..., jm], "out": i, "coeff": "p/q"}]}`
//! with 1-based indices and `in` sorted ascending.

use polaris_core::{StructTensor, SymAlgebra};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::parse::parse_rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorEntry {
    #[serde(rename = "in")]
    pub inputs: Vec<usize>,
    pub out: usize,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorDoc {
    pub dim: usize,
    pub arity: usize,
    pub entries: Vec<TensorEntry>,
}

#[derive(Debug, Error)]
pub enum TensorError {
    #[error("invalid tensor JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("entry {entry}: invalid coefficient `{coeff}`")]
    Coefficient { entry: usize, coeff: String },
    #[error("entry {entry}: index {index} is outside 1..={dim}")]
    Index { entry: usize, index: usize, dim: usize },
    #[error("invalid tensor: {0}")]
    Structure(#[from] polaris_core::Error),
}

impl TensorDoc {
    pub fn from_tensor(t: &StructTensor) -> Self {
        let entries = t
            .entries()
            .map(|(inputs, out, c)| TensorEntry {
                inputs: inputs.iter().map(|j| j + 1).collect(),
                out: out + 1,
                coeff: c.to_string(),
            })
            .collect();
        TensorDoc { dim: t.dim(), arity: t.arity(), entries }
    }

    pub fn to_tensor(&self) -> Result<StructTensor, TensorError> {
        let mut parsed = Vec::with_capacity(self.entries.len());
        for (k, e) in self.entries.iter().enumerate() {
            let coeff = parse_rational(&e.coeff)
                .ok_or_else(|| TensorError::Coefficient { entry: k, coeff: e.coeff.clone() })?;
            if let Some(&index) = e.inputs.iter().chain([&e.out]).find(|&&j| j == 0 || j > self.dim) {
                return Err(TensorError::Index { entry: k, index, dim: self.dim });
            }
            let inputs = e.inputs.iter().map(|j| j - 1).collect::<Vec<_>>();
            parsed.push((inputs, e.out - 1, coeff));
        }
        Ok(StructTensor::from_entries(self.dim, self.arity, parsed)?)
    }
}

/// Pretty JSON with one entry per line.
pub fn tensor_to_json(a: &SymAlgebra) -> String {
    let doc = TensorDoc::from_tensor(a.tensor());
    let mut out = format!("{{\n  \"dim\": {},\n  \"arity\": {},\n  \"entries\": [", doc.dim, doc.arity);
    for (k, e) in doc.entries.iter().enumerate() {
        out.push_str(if k == 0 { "\n    " } else { ",\n    " });
        out.push_str(&serde_json::to_string(e).expect("entry serializes"));
    }
    out.push_str(if doc.entries.is_empty() { "]\n}\n" } else { "\n  ]\n}\n" });
    out
}

pub fn tensor_from_json(text: &str) -> Result<SymAlgebra, TensorError> {
    let doc: TensorDoc = serde_json::from_str(text)?;
    Ok(SymAlgebra::new(doc.to_tensor()?))
}
