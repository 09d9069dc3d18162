//! JSON document model: exact scalar encodings, matrix and certificate
//! documents with a fixed top-level version and deterministic key order, so
//! reruns emit byte-identical files.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use splitmat_core::{
    Certificate, Field, FieldDescriptor, FieldKind, Matrix, Scalar, SimilarityWitness, SummandKind,
};
use std::str::FromStr;

pub const VERSION: &str = "1";

/// Document-level failures split by exit-code class: malformed inputs are
/// usage errors, invalid certificates are verification failures.
#[derive(Debug, thiserror::Error)]
pub enum DocError {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("invalid certificate: {0}")]
    Invalid(String),
}

fn malformed(msg: impl Into<String>) -> DocError {
    DocError::Malformed(msg.into())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDoc {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
}

pub fn field_to_doc(field: &Field) -> FieldDoc {
    match field.kind() {
        FieldKind::Rationals => {
            FieldDoc { kind: "rationals".into(), p: None, k: None, modulus: None }
        }
        FieldKind::Finite { p, k, modulus } => FieldDoc {
            kind: "finite".into(),
            p: Some(*p),
            k: Some(*k),
            modulus: if *k == 1 { None } else { Some(modulus.clone()) },
        },
    }
}

pub fn field_from_doc(doc: &FieldDoc) -> Result<Field, DocError> {
    match doc.kind.as_str() {
        "rationals" => {
            if doc.p.is_some() || doc.k.is_some() || doc.modulus.is_some() {
                return Err(malformed("the rationals take no p, k or modulus"));
            }
            Ok(FieldDescriptor::rationals())
        }
        "finite" => {
            let p = doc.p.ok_or_else(|| malformed("finite field without a characteristic p"))?;
            let k = doc.k.unwrap_or_else(|| match &doc.modulus {
                Some(m) => m.len().saturating_sub(1),
                None => 1,
            });
            match (&doc.modulus, k) {
                (None, 1) => FieldDescriptor::prime_field(p)
                    .map_err(|e| malformed(format!("bad prime field: {e}"))),
                (None, _) => Err(malformed("extension degree k >= 2 needs a modulus")),
                (Some(_), 0 | 1) => Err(malformed("a modulus needs extension degree k >= 2")),
                (Some(m), k) => {
                    if m.len() != k + 1 {
                        return Err(malformed(format!(
                            "modulus of length {} does not match extension degree {k}",
                            m.len()
                        )));
                    }
                    FieldDescriptor::extension_field(p, m)
                        .map_err(|e| malformed(format!("bad extension field: {e}")))
                }
            }
        }
        other => Err(malformed(format!("unknown field kind {other:?}"))),
    }
}

/// Canonical scalar cell: rationals and prime fields as strings ("a/b" or a
/// decimal in [0, p)), extension elements as coefficient arrays
/// lowest-degree-first.
pub fn scalar_to_value(s: &Scalar) -> Value {
    match s.finite_coeffs() {
        None => Value::String(s.to_string()),
        Some(coeffs) => {
            if coeffs.len() == 1 {
                Value::String(coeffs[0].to_string())
            } else {
                Value::Array(coeffs.iter().map(|&c| Value::from(c)).collect())
            }
        }
    }
}

fn parse_rational(text: &str) -> Result<BigRational, DocError> {
    let (numer_text, denom_text) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let numer = BigInt::from_str(numer_text.trim())
        .map_err(|_| malformed(format!("bad rational numerator {numer_text:?}")))?;
    let denom = BigInt::from_str(denom_text.trim())
        .map_err(|_| malformed(format!("bad rational denominator {denom_text:?}")))?;
    if denom.is_zero() || denom.is_negative() {
        return Err(malformed(format!("rational denominator {denom_text:?} must be positive")));
    }
    Ok(BigRational::new(numer, denom))
}

pub fn scalar_from_value(field: &Field, v: &Value) -> Result<Scalar, DocError> {
    match field.kind() {
        FieldKind::Rationals => {
            let text = v.as_str().ok_or_else(|| malformed("rational cells are strings"))?;
            let r = parse_rational(text)?;
            Scalar::from_rational(field, r).map_err(|e| malformed(e.to_string()))
        }
        FieldKind::Finite { p, k: 1, .. } => {
            let text = v
                .as_str()
                .ok_or_else(|| malformed("prime-field cells are decimal strings"))?;
            let digit = u64::from_str(text.trim())
                .map_err(|_| malformed(format!("bad prime-field element {text:?}")))?;
            if digit >= *p {
                return Err(malformed(format!("element {digit} is outside [0, {p})")));
            }
            Scalar::from_coeffs(field, &[digit]).map_err(|e| malformed(e.to_string()))
        }
        FieldKind::Finite { p, k, .. } => {
            let items = v
                .as_array()
                .ok_or_else(|| malformed("extension-field cells are coefficient arrays"))?;
            if items.len() > *k {
                return Err(malformed(format!(
                    "coefficient array of length {} in a degree-{k} extension",
                    items.len()
                )));
            }
            let mut coeffs = Vec::with_capacity(items.len());
            for item in items {
                let c = item
                    .as_u64()
                    .ok_or_else(|| malformed("extension coefficients are nonnegative integers"))?;
                if c >= *p {
                    return Err(malformed(format!("coefficient {c} is outside [0, {p})")));
                }
                coeffs.push(c);
            }
            Scalar::from_coeffs(field, &coeffs).map_err(|e| malformed(e.to_string()))
        }
    }
}

pub fn matrix_to_rows(m: &Matrix) -> Vec<Vec<Value>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| scalar_to_value(m.get(i, j))).collect())
        .collect()
}

pub fn matrix_from_rows(field: &Field, rows: &[Vec<Value>]) -> Result<Matrix, DocError> {
    if rows.is_empty() {
        return Err(malformed("matrix has no rows"));
    }
    let cols = rows[0].len();
    if cols == 0 {
        return Err(malformed("matrix has no columns"));
    }
    let mut cells = Vec::with_capacity(rows.len());
    for row in rows {
        if row.len() != cols {
            return Err(malformed(format!(
                "ragged matrix: row of length {} after a row of length {cols}",
                row.len()
            )));
        }
        let mut parsed = Vec::with_capacity(cols);
        for v in row {
            parsed.push(scalar_from_value(field, v)?);
        }
        cells.push(parsed);
    }
    Ok(Matrix::from_fn(field, rows.len(), cols, |i, j| cells[i][j].clone()))
}

fn check_version(version: &str) -> Result<(), DocError> {
    if version != VERSION {
        return Err(malformed(format!(
            "unsupported document version {version:?}, expected {VERSION:?}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    pub version: String,
    pub field: FieldDoc,
    pub matrix: Vec<Vec<Value>>,
}

impl MatrixDocument {
    pub fn new(m: &Matrix) -> MatrixDocument {
        MatrixDocument {
            version: VERSION.into(),
            field: field_to_doc(m.field()),
            matrix: matrix_to_rows(m),
        }
    }

    pub fn to_matrix(&self) -> Result<Matrix, DocError> {
        check_version(&self.version)?;
        let field = field_from_doc(&self.field)?;
        matrix_from_rows(&field, &self.matrix)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SummandDoc {
    pub kind: String,
    pub coefficient: Value,
    pub matrix: Vec<Vec<Value>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDoc {
    pub source: Vec<Vec<Value>>,
    pub target: Vec<Vec<Value>>,
    pub transform: Vec<Vec<Value>>,
}

/// Why a decomposition is impossible: the invariant factor of the wrong
/// parity, or the elementary divisor with an odd exponent, plus a free-form
/// note for anything else.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstructionDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariant_factor: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elementary_divisor: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponent: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    pub version: String,
    pub kind: String,
    pub status: String,
    pub field: FieldDoc,
    pub target: Vec<Vec<Value>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<ObstructionDoc>,
    pub summands: Vec<SummandDoc>,
    pub witnesses: Vec<WitnessDoc>,
}

fn kind_to_name(kind: SummandKind) -> &'static str {
    kind.name()
}

fn kind_from_name(name: &str) -> Result<SummandKind, DocError> {
    match name {
        "square-zero" => Ok(SummandKind::SquareZero),
        "idempotent" => Ok(SummandKind::Idempotent),
        other => Err(malformed(format!("unknown summand kind {other:?}"))),
    }
}

impl CertificateDocument {
    pub fn from_certificate(kind: &str, c: &Certificate) -> CertificateDocument {
        let summands = c
            .summands
            .iter()
            .zip(&c.kinds)
            .zip(&c.coefficients)
            .map(|((m, sk), coeff)| SummandDoc {
                kind: kind_to_name(*sk).into(),
                coefficient: scalar_to_value(coeff),
                matrix: matrix_to_rows(m),
            })
            .collect();
        let witnesses = c
            .witnesses
            .iter()
            .map(|w| WitnessDoc {
                source: matrix_to_rows(w.source()),
                target: matrix_to_rows(w.target()),
                transform: matrix_to_rows(w.transform()),
            })
            .collect();
        CertificateDocument {
            version: VERSION.into(),
            kind: kind.into(),
            status: "verified".into(),
            field: field_to_doc(c.target.field()),
            target: matrix_to_rows(&c.target),
            obstruction: None,
            summands,
            witnesses,
        }
    }

    pub fn impossible(kind: &str, target: &Matrix, why: ObstructionDoc) -> CertificateDocument {
        CertificateDocument {
            version: VERSION.into(),
            kind: kind.into(),
            status: "impossible".into(),
            field: field_to_doc(target.field()),
            target: matrix_to_rows(target),
            obstruction: Some(why),
            summands: Vec::new(),
            witnesses: Vec::new(),
        }
    }

    /// Rebuilds the core certificate; witnesses are re-validated on the way
    /// in, so a tampered transform surfaces as an invalid certificate rather
    /// than a parse error.
    pub fn to_certificate(&self) -> Result<Certificate, DocError> {
        check_version(&self.version)?;
        match self.status.as_str() {
            "verified" => {}
            "impossible" => {
                return Err(DocError::Invalid(
                    "document records an impossible decomposition".into(),
                ))
            }
            other => return Err(malformed(format!("unknown status {other:?}"))),
        }
        let field = field_from_doc(&self.field)?;
        let target = matrix_from_rows(&field, &self.target)?;
        let mut summands = Vec::with_capacity(self.summands.len());
        let mut kinds = Vec::with_capacity(self.summands.len());
        let mut coefficients = Vec::with_capacity(self.summands.len());
        for s in &self.summands {
            kinds.push(kind_from_name(&s.kind)?);
            coefficients.push(scalar_from_value(&field, &s.coefficient)?);
            summands.push(matrix_from_rows(&field, &s.matrix)?);
        }
        let mut witnesses = Vec::with_capacity(self.witnesses.len());
        for w in &self.witnesses {
            let source = matrix_from_rows(&field, &w.source)?;
            let wtarget = matrix_from_rows(&field, &w.target)?;
            let transform = matrix_from_rows(&field, &w.transform)?;
            witnesses.push(
                SimilarityWitness::new(source, wtarget, transform)
                    .map_err(|e| DocError::Invalid(e.to_string()))?,
            );
        }
        Ok(Certificate { target, summands, kinds, coefficients, witnesses })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementaryDivisorDoc {
    pub base: String,
    pub base_coeffs: Vec<Value>,
    pub exponent: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenvalueCellsDoc {
    pub eigenvalue: Value,
    pub size1_cells: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CanonDocument {
    pub version: String,
    pub field: FieldDoc,
    pub invariant_factors: Vec<String>,
    pub invariant_factor_coeffs: Vec<Vec<Value>>,
    pub elementary_divisors: Vec<ElementaryDivisorDoc>,
    pub size1_cells: Vec<EigenvalueCellsDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleDocument {
    pub version: String,
    pub kind: String,
    pub field: FieldDoc,
    pub decomposable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summands: Option<Vec<Vec<Vec<Value>>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckDocument {
    pub version: String,
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

/// Canonical document text: two-space pretty JSON, declaration-order keys,
/// one trailing newline.
pub fn print_pretty<T: Serialize>(doc: &T) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("documents serialize infallibly");
    text.push('\n');
    text
}
