use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::scalar::{format_rational, parse_rational, Backend, Scalar};
use crate::weil::{AlgebraSpec, AlgebraSpecJson, Jet, WeilError};

use super::{JetMatrix, JetVector, LinalgError, SmoothComplex};

/// A number as JSON: a float, or a string holding `p/q` or a decimal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarJson {
    Number(f64),
    Text(String),
}

impl ScalarJson {
    pub fn from_scalar<S: Scalar>(s: &S) -> Self {
        match S::BACKEND {
            Backend::Exact => ScalarJson::Text(format_rational(&s.to_rational().expect("exact scalar"))),
            Backend::Approx => ScalarJson::Number(s.to_f64()),
        }
    }

    pub fn to_scalar<S: Scalar>(&self) -> Result<S, LinalgError> {
        let q = match self {
            ScalarJson::Number(x) => {
                if S::BACKEND == Backend::Approx {
                    return S::from_f64(*x).ok_or_else(|| LinalgError::MalformedInput(format!("bad number {x}")));
                }
                parse_rational(&x.to_string())
            }
            ScalarJson::Text(t) => parse_rational(t),
        };
        let q: BigRational = q.ok_or_else(|| LinalgError::MalformedInput(format!("bad number {self:?}")))?;
        Ok(S::from_rational(&q))
    }
}

/// One real component: standard part plus nilpotent coefficients keyed by
/// monomial label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartJson {
    pub std: ScalarJson,
    #[serde(default)]
    pub nil: BTreeMap<String, ScalarJson>,
}

impl PartJson {
    pub fn from_jet<S: Scalar>(j: &Jet<S>) -> Self {
        let mut nil = BTreeMap::new();
        for (label, c) in j.terms() {
            if label != "1" && !c.is_zero() {
                nil.insert(label, ScalarJson::from_scalar(c));
            }
        }
        PartJson { std: ScalarJson::from_scalar(j.std_part()), nil }
    }

    pub fn to_jet<S: Scalar>(&self, algebra: &Arc<AlgebraSpec>) -> Result<Jet<S>, LinalgError> {
        let mut coeffs = vec![S::zero(); algebra.dim()];
        coeffs[0] = self.std.to_scalar()?;
        for (label, c) in &self.nil {
            if let Some(i) = algebra.parse_monomial(label)? {
                coeffs[i] = coeffs[i].clone() + c.to_scalar()?;
            }
        }
        Ok(Jet::from_coefficients(algebra, coeffs)?)
    }
}

/// `[re, im]`.
pub type EntryJson = [PartJson; 2];

pub fn entry_to_json<S: Scalar>(z: &SmoothComplex<S>) -> EntryJson {
    [PartJson::from_jet(z.re()), PartJson::from_jet(z.im())]
}

pub fn entry_from_json<S: Scalar>(e: &EntryJson, algebra: &Arc<AlgebraSpec>) -> Result<SmoothComplex<S>, LinalgError> {
    Ok(SmoothComplex::new(e[0].to_jet(algebra)?, e[1].to_jet(algebra)?)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraSpecJson>,
    pub entries: Vec<EntryJson>,
}

/// Rows of entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraSpecJson>,
    pub entries: Vec<Vec<EntryJson>>,
}

fn resolve_algebra<S: Scalar>(
    embedded: &Option<AlgebraSpecJson>,
    fallback: Option<&Arc<AlgebraSpec>>,
) -> Result<Arc<AlgebraSpec>, LinalgError> {
    let alg = match (embedded, fallback) {
        (Some(spec), _) => AlgebraSpec::from_json_value(spec)?,
        (None, Some(a)) => a.clone(),
        (None, None) => return Err(LinalgError::MalformedInput("no algebra given".into())),
    };
    if alg.backend() != S::BACKEND {
        return Err(WeilError::MixedBackends.into());
    }
    Ok(alg)
}

fn parse_err(e: serde_json::Error) -> LinalgError {
    LinalgError::MalformedInput(e.to_string())
}

impl<S: Scalar> JetVector<S> {
    pub fn to_json_value(&self, with_algebra: bool) -> VectorJson {
        VectorJson {
            algebra: with_algebra.then(|| self.algebra().to_json_value()),
            entries: self.entries().iter().map(entry_to_json).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value(true)).expect("serializable")
    }

    /// Reads a vector; the embedded algebra wins over `algebra`.
    pub fn from_json_value(doc: &VectorJson, algebra: Option<&Arc<AlgebraSpec>>) -> Result<Self, LinalgError> {
        let alg = resolve_algebra::<S>(&doc.algebra, algebra)?;
        let entries = doc.entries.iter().map(|e| entry_from_json(e, &alg)).collect::<Result<_, _>>()?;
        JetVector::new(&alg, entries)
    }

    pub fn from_json(text: &str, algebra: Option<&Arc<AlgebraSpec>>) -> Result<Self, LinalgError> {
        Self::from_json_value(&serde_json::from_str(text).map_err(parse_err)?, algebra)
    }
}

impl<S: Scalar> JetMatrix<S> {
    pub fn to_json_value(&self, with_algebra: bool) -> MatrixJson {
        MatrixJson {
            algebra: with_algebra.then(|| self.algebra().to_json_value()),
            entries: (0..self.rows())
                .map(|i| (0..self.cols()).map(|j| entry_to_json(self.get(i, j))).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value(true)).expect("serializable")
    }

    pub fn from_json_value(doc: &MatrixJson, algebra: Option<&Arc<AlgebraSpec>>) -> Result<Self, LinalgError> {
        let alg = resolve_algebra::<S>(&doc.algebra, algebra)?;
        let rows = doc.entries.len();
        let cols = doc.entries.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows * cols);
        for row in &doc.entries {
            if row.len() != cols {
                return Err(LinalgError::MixedDimensions { expected: cols, found: row.len() });
            }
            for e in row {
                entries.push(entry_from_json(e, &alg)?);
            }
        }
        JetMatrix::new(&alg, rows, cols, entries)
    }

    pub fn from_json(text: &str, algebra: Option<&Arc<AlgebraSpec>>) -> Result<Self, LinalgError> {
        Self::from_json_value(&serde_json::from_str(text).map_err(parse_err)?, algebra)
    }
}
