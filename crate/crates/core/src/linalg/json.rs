//! Matrix JSON format: `{"n": 2, "entries": [[..], [..]], "exact": true}`.
//! Exact entries are strings `"p/q"` (or `"p"` for integers); float entries
//! are JSON numbers.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};

use super::matrix::Matrix;
use super::scalar::{parse_rational, Rational};

/// A matrix in either numeric backing.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyMatrix {
    Float(Matrix<f64>),
    Exact(Matrix<Rational>),
}

impl From<Matrix<f64>> for AnyMatrix {
    fn from(m: Matrix<f64>) -> Self {
        Self::Float(m)
    }
}

impl From<Matrix<Rational>> for AnyMatrix {
    fn from(m: Matrix<Rational>) -> Self {
        Self::Exact(m)
    }
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

impl AnyMatrix {
    pub fn dim(&self) -> usize {
        match self {
            Self::Float(m) => m.dim(),
            Self::Exact(m) => m.dim(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Self::Exact(_))
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        match self {
            Self::Float(m) => m.clone(),
            Self::Exact(m) => m.to_f64(),
        }
    }

    /// Exact copy; float entries are read back from their decimal text.
    pub fn to_exact(&self) -> Result<Matrix<Rational>> {
        match self {
            Self::Float(m) => m.to_exact_from_input(),
            Self::Exact(m) => Ok(m.clone()),
        }
    }

    pub fn is_z_matrix(&self) -> bool {
        match self {
            Self::Float(m) => m.is_z_matrix(),
            Self::Exact(m) => m.is_z_matrix(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Self::Float(m) => {
                let rows: Vec<Value> = m.rows().map(|r| json!(r)).collect();
                json!({ "n": m.dim(), "entries": rows })
            }
            Self::Exact(m) => {
                let rows: Vec<Value> =
                    m.rows().map(|r| Value::Array(r.iter().map(|x| Value::String(x.to_string())).collect())).collect();
                json!({ "n": m.dim(), "entries": rows, "exact": true })
            }
        }
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let obj: &Map<String, Value> = value.as_object().ok_or_else(|| parse_err("matrix must be a JSON object"))?;
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| parse_err("missing or non-integer field \"n\""))? as usize;
        if n == 0 {
            return Err(parse_err("matrix dimension n must be positive"));
        }
        let exact = match obj.get("exact") {
            None | Some(Value::Null) => false,
            Some(Value::Bool(b)) => *b,
            Some(_) => return Err(parse_err("field \"exact\" must be a boolean")),
        };
        let rows = obj
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err("missing array field \"entries\""))?;
        if rows.len() != n {
            return Err(parse_err(format!("expected {n} rows, found {}", rows.len())));
        }
        let mut cells = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_array().ok_or_else(|| parse_err(format!("row {i} is not an array")))?;
            if row.len() != n {
                return Err(parse_err(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            cells.extend(row.iter());
        }
        if exact {
            let data = cells
                .into_iter()
                .map(|v| match v {
                    Value::String(s) => parse_rational(s).ok_or_else(|| parse_err(format!("bad rational {s:?}"))),
                    Value::Number(num) => {
                        parse_rational(&num.to_string()).ok_or_else(|| parse_err(format!("bad number {num}")))
                    }
                    other => Err(parse_err(format!("bad exact entry {other}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Self::Exact(Matrix::new(n, data)?))
        } else {
            let data = cells
                .into_iter()
                .map(|v| v.as_f64().ok_or_else(|| parse_err(format!("entry {v} is not a number"))))
                .collect::<Result<Vec<_>>>()?;
            Ok(Self::Float(Matrix::new(n, data)?))
        }
    }
}

/// Reads a single matrix object or an array of them.
pub fn matrices_from_json(text: &str) -> Result<Vec<AnyMatrix>> {
    let value: Value = serde_json::from_str(text)?;
    match &value {
        Value::Array(items) => {
            if items.is_empty() {
                return Err(parse_err("matrix list is empty"));
            }
            items.iter().map(AnyMatrix::from_json).collect()
        }
        _ => Ok(vec![AnyMatrix::from_json(&value)?]),
    }
}

pub fn matrices_to_json(matrices: &[AnyMatrix]) -> Value {
    Value::Array(matrices.iter().map(AnyMatrix::to_json).collect())
}
