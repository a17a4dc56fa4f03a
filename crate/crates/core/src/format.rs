//! JSON file formats and their canonical serialization.
//!
//! Field elements are strings (`"3"`, `"-1/2"`; prime-field values in
//! `0..p`), matrices are arrays of rows, subspaces are their reduced
//! row-echelon bases. Output is compact JSON with keys in declaration order
//! followed by a newline, so identical inputs give identical bytes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gitdecide::{GradedModule, Provenance, Verdict};
use crate::hilbertmumford::{OneParamSubgroup, Weight};
use crate::linalg::{ExactField, Matrix, Subspace};
use crate::sigmamod::{InvolutionSpace, SigmaModule, Sign};

/// Accepts both `"1/2"` and bare JSON integers on input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Text(String),
    Int(i64),
}

impl Entry {
    fn text(&self) -> String {
        match self {
            Entry::Text(s) => s.clone(),
            Entry::Int(n) => n.to_string(),
        }
    }
}

pub type MatrixJson = Vec<Vec<String>>;

pub fn matrix_json(m: &Matrix) -> MatrixJson {
    m.to_strings()
}

pub fn parse_matrix(field: ExactField, rows: &[Vec<Entry>], cols: Option<usize>, what: &str) -> Result<Matrix> {
    let text: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(Entry::text).collect()).collect();
    Matrix::parse_rows(field, &text, cols).map_err(|e| match e {
        Error::Shape(msg) => Error::Shape(format!("{what}: {msg}")),
        other => other,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvolutionJson<E = String> {
    pub dim: usize,
    pub involution: Vec<Vec<E>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceJson<E = String> {
    pub basis: Vec<Vec<E>>,
    pub weight: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaJson<E = String> {
    pub pieces: Vec<PieceJson<E>>,
}

/// The module file: a σ-module plus optional `lambda` and `subspace`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleJson<E = String> {
    pub field: String,
    pub sign: String,
    pub dim_h: usize,
    pub w: InvolutionJson<E>,
    pub forms: Vec<Vec<Vec<E>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<LambdaJson<E>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subspace: Option<Vec<Vec<E>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedModule {
    pub module: SigmaModule,
    pub lambda: Option<OneParamSubgroup>,
    pub subspace: Option<Subspace>,
}

/// Parses and validates a module file. With `field_override`, entries are
/// read in that field instead of the declared one. Diagnostics name the first
/// violated invariant: shape, then involution square, then symmetry relation.
pub fn parse_module_file(bytes: &[u8], field_override: Option<ExactField>) -> Result<ParsedModule> {
    let text = std::str::from_utf8(bytes).map_err(|_| Error::Malformed("input is not UTF-8".into()))?;
    let raw: ModuleJson<Entry> = serde_json::from_str(text)?;
    let declared: ExactField = raw.field.parse()?;
    let field = field_override.unwrap_or(declared);
    let sign = Sign::parse(&raw.sign)?;
    let n = raw.dim_h;

    if raw.w.involution.len() != raw.w.dim {
        return Err(Error::shape(format!(
            "involution has {} rows, expected {}",
            raw.w.involution.len(),
            raw.w.dim
        )));
    }
    let s = parse_matrix(field, &raw.w.involution, Some(raw.w.dim), "involution")?;
    if s.cols() != raw.w.dim {
        return Err(Error::shape(format!(
            "involution has {} columns, expected {}",
            s.cols(),
            raw.w.dim
        )));
    }
    if raw.forms.len() != raw.w.dim {
        return Err(Error::shape(format!(
            "{} forms for a {}-dimensional W",
            raw.forms.len(),
            raw.w.dim
        )));
    }
    let mut forms = Vec::with_capacity(raw.forms.len());
    for (k, f) in raw.forms.iter().enumerate() {
        if f.len() != n || f.iter().any(|r| r.len() != n) {
            return Err(Error::shape(format!("form {k} is not {n}x{n}")));
        }
        forms.push(parse_matrix(field, f, Some(n), &format!("form {k}"))?);
    }
    let w = InvolutionSpace::new(s)?;
    let module = SigmaModule::new(field, sign, w, n, forms)?;

    let lambda = match &raw.lambda {
        None => None,
        Some(l) => {
            let pieces = l
                .pieces
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    Ok((
                        parse_subspace(field, n, &p.basis, &format!("lambda piece {i}"))?,
                        p.weight,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            Some(OneParamSubgroup::new(pieces)?)
        }
    };
    let subspace = match &raw.subspace {
        None => None,
        Some(rows) => Some(parse_subspace(field, n, rows, "subspace")?),
    };
    Ok(ParsedModule {
        module,
        lambda,
        subspace,
    })
}

fn parse_subspace(field: ExactField, n: usize, rows: &[Vec<Entry>], what: &str) -> Result<Subspace> {
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::shape(format!("{what}: vectors must have length {n}")));
    }
    let m = parse_matrix(field, rows, Some(n), what)?;
    Ok(Subspace::row_space(&m))
}

pub fn module_json(q: &SigmaModule) -> ModuleJson {
    ModuleJson {
        field: q.field().to_string(),
        sign: q.sign().as_str().to_string(),
        dim_h: q.dim_h(),
        w: InvolutionJson {
            dim: q.w().dim(),
            involution: matrix_json(q.w().matrix()),
        },
        forms: q.forms().iter().map(matrix_json).collect(),
        lambda: None,
        subspace: None,
    }
}

pub fn parsed_module_json(p: &ParsedModule) -> ModuleJson {
    let mut out = module_json(&p.module);
    out.lambda = p.lambda.as_ref().map(lambda_json);
    out.subspace = p.subspace.as_ref().map(subspace_json);
    out
}

pub fn subspace_json(v: &Subspace) -> MatrixJson {
    matrix_json(v.basis())
}

pub fn lambda_json(l: &OneParamSubgroup) -> LambdaJson {
    LambdaJson {
        pieces: l
            .pieces()
            .iter()
            .map(|(s, a)| PieceJson {
                basis: subspace_json(s),
                weight: *a,
            })
            .collect(),
    }
}

pub fn weight_json(w: Weight) -> String {
    w.to_string()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProvenanceJson {
    Exhaustive,
    Heuristic(Vec<u64>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateJson {
    #[serde(rename = "V")]
    pub v: MatrixJson,
    pub lambda: LambdaJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerdictJson {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateJson>,
    pub provenance: ProvenanceJson,
    pub mu: Option<String>,
}

pub fn verdict_json(v: &Verdict) -> VerdictJson {
    VerdictJson {
        status: v.status.as_str().to_string(),
        certificate: v.certificate.as_ref().map(|c| CertificateJson {
            v: subspace_json(&c.subspace),
            lambda: lambda_json(&c.lambda),
        }),
        provenance: match &v.provenance {
            Provenance::Exhaustive => ProvenanceJson::Exhaustive,
            Provenance::Heuristic(p) => ProvenanceJson::Heuristic(p.clone()),
        },
        mu: v.mu.map(weight_json),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearPieceJson {
    pub dim: usize,
    pub alpha: Vec<MatrixJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedJson {
    pub length: usize,
    pub filtration: Vec<MatrixJson>,
    pub pieces: Vec<LinearPieceJson>,
    pub core: ModuleJson,
    pub assembled: ModuleJson,
    pub lambda: LambdaJson,
    pub adapted_basis: MatrixJson,
}

pub fn graded_json(g: &GradedModule) -> GradedJson {
    GradedJson {
        length: g.filtration.length(),
        filtration: g.filtration.chain.iter().map(subspace_json).collect(),
        pieces: g
            .pieces
            .iter()
            .map(|p| LinearPieceJson {
                dim: p.dim(),
                alpha: p.alpha().iter().map(matrix_json).collect(),
            })
            .collect(),
        core: module_json(&g.core),
        assembled: module_json(&g.assembled),
        lambda: lambda_json(&g.lambda),
        adapted_basis: matrix_json(&g.adapted_basis),
    }
}

/// Compact JSON plus a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string(value)?;
    s.push('\n');
    Ok(s)
}

/// Input for the `pfaffian` command: one matrix, or a list for a type vector.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PfaffianJson {
    pub field: String,
    #[serde(default)]
    pub matrix: Option<Vec<Vec<Entry>>>,
    #[serde(default)]
    pub matrices: Option<Vec<Vec<Vec<Entry>>>>,
}
