//! JSON input documents.
//!
//! ```json
//! { "n": 2, "pi": [2, 1], "tau": [1, 2], "a_pi": ["1", "1/2"], "a_tau": ["1", "-3"] }
//! ```
//!
//! Rationals are strings (`"p/q"`, integers or finite decimals); plain JSON
//! integers are accepted too, JSON floats are not. A `matrix` field (rows of
//! rationals) supplies a raw structural matrix; it may stand alone or sit
//! next to an algebra, in which case it must match the algebra's matrix.

use serde::Deserialize;
use serde_json::Value;

use crate::algebra::{EvolutionAlgebra, StructuralMatrix};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraDocument {
    pub algebra: Option<EvolutionAlgebra>,
    pub matrix: Option<StructuralMatrix>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    n: Option<usize>,
    pi: Option<Vec<usize>>,
    tau: Option<Vec<usize>>,
    a_pi: Option<Vec<Value>>,
    a_tau: Option<Vec<Value>>,
    matrix: Option<Vec<Vec<Value>>>,
}

fn field_err(field: &str, msg: impl std::fmt::Display) -> Error {
    Error::Document(format!("field `{field}`: {msg}"))
}

fn rational_value(field: &str, v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => rational::parse(s).map_err(|_| field_err(field, format!("invalid rational {s:?}"))),
        Value::Number(num) if num.is_i64() || num.is_u64() => {
            rational::parse(&num.to_string()).map_err(|e| field_err(field, e))
        }
        other => Err(field_err(field, format!("expected a rational string, found {other}"))),
    }
}

fn rational_vec(field: &str, vs: &[Value]) -> Result<Vec<Rational>> {
    vs.iter()
        .enumerate()
        .map(|(i, v)| rational_value(&format!("{field}[{}]", i + 1), v))
        .collect()
}

fn permutation(field: &str, image: Vec<usize>, n: usize) -> Result<Permutation> {
    if image.len() != n {
        return Err(field_err(field, format!("has {} entries, expected n = {n}", image.len())));
    }
    Permutation::new(image).map_err(|e| field_err(field, e))
}

impl AlgebraDocument {
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Err(Error::Document("empty document".into()));
        }
        let raw: RawDocument =
            serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;

        let any_algebra_field = raw.pi.is_some() || raw.tau.is_some() || raw.a_pi.is_some() || raw.a_tau.is_some();
        let algebra = if any_algebra_field {
            let n = raw.n.ok_or_else(|| field_err("n", "missing"))?;
            let pi = raw.pi.ok_or_else(|| field_err("pi", "missing"))?;
            let tau = raw.tau.ok_or_else(|| field_err("tau", "missing"))?;
            let a_pi = raw.a_pi.ok_or_else(|| field_err("a_pi", "missing"))?;
            let a_tau = raw.a_tau.ok_or_else(|| field_err("a_tau", "missing"))?;
            let pi = permutation("pi", pi, n)?;
            let tau = permutation("tau", tau, n)?;
            for (name, v) in [("a_pi", &a_pi), ("a_tau", &a_tau)] {
                if v.len() != n {
                    return Err(field_err(name, format!("has {} entries, expected n = {n}", v.len())));
                }
            }
            let a_pi = rational_vec("a_pi", &a_pi)?;
            let a_tau = rational_vec("a_tau", &a_tau)?;
            Some(EvolutionAlgebra::new(pi, tau, a_pi, a_tau).map_err(|e| field_err("pi/tau", e))?)
        } else {
            None
        };

        let matrix = match raw.matrix {
            None => None,
            Some(rows) => {
                let n = rows.len();
                if let Some(declared) = raw.n {
                    if declared != n {
                        return Err(field_err("matrix", format!("has {n} rows, expected n = {declared}")));
                    }
                }
                let rows = rows
                    .iter()
                    .enumerate()
                    .map(|(i, row)| {
                        if row.len() != n {
                            return Err(field_err(
                                &format!("matrix[{}]", i + 1),
                                format!("has {} entries, expected {n}", row.len()),
                            ));
                        }
                        rational_vec(&format!("matrix[{}]", i + 1), row)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Some(StructuralMatrix::from_rows(rows).map_err(|e| field_err("matrix", e))?)
            }
        };

        match (&algebra, &matrix) {
            (None, None) => Err(Error::Document("need either pi/tau/a_pi/a_tau or matrix".into())),
            (Some(e), Some(m)) if e.structural_matrix() != *m => {
                Err(field_err("matrix", "does not match the algebra's structural constants"))
            }
            _ => Ok(Self { algebra, matrix }),
        }
    }

    pub fn read(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Document(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Document(msg) => Error::Document(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// The matrix to use for raw-matrix operations.
    pub fn structural_matrix(&self) -> StructuralMatrix {
        match (&self.matrix, &self.algebra) {
            (Some(m), _) => m.clone(),
            (None, Some(e)) => e.structural_matrix(),
            (None, None) => unreachable!("parse guarantees one of the two"),
        }
    }

    pub fn algebra(&self) -> Result<&EvolutionAlgebra> {
        self.algebra
            .as_ref()
            .ok_or_else(|| Error::Document("this operation needs pi, tau, a_pi and a_tau, not only a matrix".into()))
    }

    pub fn from_algebra(e: EvolutionAlgebra) -> Self {
        Self { algebra: Some(e), matrix: None }
    }

    pub fn to_json(&self) -> String {
        let mut v = match &self.algebra {
            Some(e) => serde_json::to_value(e).expect("algebra serializes"),
            None => Value::Object(Default::default()),
        };
        if let Some(m) = &self.matrix {
            v["matrix"] = serde_json::to_value(m).expect("matrix serializes");
            v["n"] = Value::from(m.n());
        }
        serde_json::to_string_pretty(&v).expect("value serializes")
    }
}
