//! The JSON problem-file format consumed by the command-line front end.
//!
//! A problem file declares the coefficient field, the dimension, the
//! truncation degree, and the vector field, plus optional commuting fields,
//! formal-product first integrals, and semi-invariants with cofactors.
//! Series are stored as term lists with scalar literals in the declared
//! field; parsing reduces every literal to power-basis canonical form, so
//! rendering a parsed problem and parsing it again is the identity.

use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::darboux::RationalVectorField;
use crate::scalars::{iota, FieldElement, NumberField};
use crate::series::{MultiIndex, TruncatedSeries, VectorFieldJet};
use crate::walcher::DarbouxFunction;

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("cannot read {path}: {detail}")]
    Io { path: String, detail: String },
    #[error("parse error at line {line}, column {column}: {detail}")]
    Parse {
        line: usize,
        column: usize,
        detail: String,
    },
    #[error("invalid {path}: {detail}")]
    Validation { path: String, detail: String },
}

/// A semi-invariant as declared in the input, before checking it against
/// the vector field.
#[derive(Debug, Clone, PartialEq)]
pub struct DeclaredSemiInvariant {
    pub function: TruncatedSeries,
    pub cofactor: TruncatedSeries,
}

#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub field: Arc<NumberField>,
    pub dimension: usize,
    pub degree: u32,
    pub vector_field: VectorFieldJet,
    pub commuting_fields: Vec<RationalVectorField>,
    pub integrals: Vec<DarbouxFunction>,
    pub semi_invariants: Vec<DeclaredSemiInvariant>,
}

impl PartialEq for ProblemFile {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.dimension == other.dimension
            && self.degree == other.degree
            && self.vector_field == other.vector_field
            && self.commuting_fields.len() == other.commuting_fields.len()
            && self
                .commuting_fields
                .iter()
                .zip(&other.commuting_fields)
                .all(|(a, b)| a.numer() == b.numer() && a.denom() == b.denom())
            && self.integrals.len() == other.integrals.len()
            && self
                .integrals
                .iter()
                .zip(&other.integrals)
                .all(|(a, b)| a.factors() == b.factors())
            && self.semi_invariants == other.semi_invariants
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    field: RawField,
    dimension: usize,
    degree: u32,
    vector_field: Vec<Vec<RawTerm>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    commuting_fields: Vec<RawRational>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    integrals: Vec<Vec<RawFactor>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    semi_invariants: Vec<RawSemiInvariant>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    min_poly: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    iota: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    coeff: String,
    exponents: Vec<u32>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRational {
    numerator: Vec<Vec<RawTerm>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    denominator: Option<Vec<RawTerm>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFactor {
    factor: Vec<RawTerm>,
    power: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSemiInvariant {
    function: Vec<RawTerm>,
    cofactor: Vec<RawTerm>,
}

pub fn parse_problem(path: &Path) -> Result<ProblemFile, ProblemError> {
    let text = std::fs::read_to_string(path).map_err(|e| ProblemError::Io {
        path: path.display().to_string(),
        detail: e.to_string(),
    })?;
    parse_problem_str(&text)
}

pub fn parse_problem_str(text: &str) -> Result<ProblemFile, ProblemError> {
    let raw: RawProblem = serde_json::from_str(text).map_err(|e| {
        let detail = e.to_string();
        let detail = match detail.rfind(" at line ") {
            Some(cut) => detail[..cut].to_string(),
            None => detail,
        };
        ProblemError::Parse {
            line: e.line(),
            column: e.column(),
            detail,
        }
    })?;
    resolve(raw)
}

fn invalid(path: impl Into<String>, detail: impl Into<String>) -> ProblemError {
    ProblemError::Validation {
        path: path.into(),
        detail: detail.into(),
    }
}

fn resolve(raw: RawProblem) -> Result<ProblemFile, ProblemError> {
    let field = resolve_field(&raw.field)?;
    let n = raw.dimension;
    if n == 0 || n > crate::resonance::MAX_SOLVER_VARS {
        return Err(invalid(
            "dimension",
            format!("must lie in 1..={}", crate::resonance::MAX_SOLVER_VARS),
        ));
    }
    let m = raw.degree;
    if m < 2 || m > crate::resonance::MAX_SOLVER_DEGREE {
        return Err(invalid(
            "degree",
            format!("must lie in 2..={}", crate::resonance::MAX_SOLVER_DEGREE),
        ));
    }

    if raw.vector_field.len() != n {
        return Err(invalid(
            "vector_field",
            format!("expected {n} components, found {}", raw.vector_field.len()),
        ));
    }
    let vector_field = resolve_jet(&field, n, m, &raw.vector_field, "vector_field")?;

    let mut commuting_fields = Vec::new();
    for (k, rf) in raw.commuting_fields.iter().enumerate() {
        let path = format!("commuting_fields[{k}]");
        if rf.numerator.len() != n {
            return Err(invalid(
                format!("{path}.numerator"),
                format!("expected {n} components, found {}", rf.numerator.len()),
            ));
        }
        let numer = resolve_jet(&field, n, m, &rf.numerator, &format!("{path}.numerator"))?;
        let denom = match &rf.denominator {
            Some(terms) => {
                let d =
                    resolve_series(&field, n, m, terms, &format!("{path}.denominator"))?;
                if d.is_zero() {
                    return Err(invalid(format!("{path}.denominator"), "must be nonzero"));
                }
                d
            }
            None => TruncatedSeries::constant(&field, n, m, FieldElement::one(&field)),
        };
        commuting_fields.push(RationalVectorField::new(numer, denom));
    }

    let mut integrals = Vec::new();
    for (k, rp) in raw.integrals.iter().enumerate() {
        let path = format!("integrals[{k}]");
        if rp.is_empty() {
            return Err(invalid(path, "a formal product needs at least one factor"));
        }
        let mut factors = Vec::new();
        for (j, rf) in rp.iter().enumerate() {
            let fpath = format!("{path}[{j}]");
            let g = resolve_series(&field, n, m, &rf.factor, &format!("{fpath}.factor"))?;
            if g.is_zero() {
                return Err(invalid(format!("{fpath}.factor"), "must be nonzero"));
            }
            let c = resolve_scalar(&field, &rf.power, &format!("{fpath}.power"))?;
            factors.push((g, c));
        }
        integrals.push(DarbouxFunction::new(factors));
    }

    let mut semi_invariants = Vec::new();
    for (k, rs) in raw.semi_invariants.iter().enumerate() {
        let path = format!("semi_invariants[{k}]");
        let function =
            resolve_series(&field, n, m, &rs.function, &format!("{path}.function"))?;
        if function.is_zero() {
            return Err(invalid(format!("{path}.function"), "must be nonzero"));
        }
        let cofactor =
            resolve_series(&field, n, m, &rs.cofactor, &format!("{path}.cofactor"))?;
        semi_invariants.push(DeclaredSemiInvariant { function, cofactor });
    }

    Ok(ProblemFile {
        field,
        dimension: n,
        degree: m,
        vector_field,
        commuting_fields,
        integrals,
        semi_invariants,
    })
}

fn resolve_field(raw: &RawField) -> Result<Arc<NumberField>, ProblemError> {
    let mut coeffs = Vec::new();
    for (k, text) in raw.min_poly.iter().enumerate() {
        let c = BigRational::from_str(text).map_err(|e| {
            invalid(format!("field.min_poly[{k}]"), e.to_string())
        })?;
        coeffs.push(c);
    }
    let plain = NumberField::new(coeffs.clone(), None)
        .map_err(|e| invalid("field.min_poly", e.to_string()))?;
    match &raw.iota {
        None => Ok(plain),
        Some(text) => {
            let i = FieldElement::parse(&plain, text)
                .map_err(|e| invalid("field.iota", e.to_string()))?;
            NumberField::new(coeffs, Some(i.coords().to_vec()))
                .map_err(|e| invalid("field.iota", e.to_string()))
        }
    }
}

fn resolve_scalar(
    field: &Arc<NumberField>,
    text: &str,
    path: &str,
) -> Result<FieldElement, ProblemError> {
    FieldElement::parse(field, text).map_err(|e| invalid(path, e.to_string()))
}

fn resolve_series(
    field: &Arc<NumberField>,
    n: usize,
    cap: u32,
    terms: &[RawTerm],
    path: &str,
) -> Result<TruncatedSeries, ProblemError> {
    let mut out = TruncatedSeries::zero(field, n, cap);
    let mut seen: Vec<&[u32]> = Vec::new();
    for (k, term) in terms.iter().enumerate() {
        let tpath = format!("{path}[{k}]");
        if term.exponents.len() != n {
            return Err(invalid(
                format!("{tpath}.exponents"),
                format!("expected length {n}, found {}", term.exponents.len()),
            ));
        }
        let degree: u32 = term.exponents.iter().sum();
        if degree > cap {
            return Err(invalid(
                format!("{tpath}.exponents"),
                format!("total degree {degree} exceeds the truncation degree {cap}"),
            ));
        }
        if seen.contains(&term.exponents.as_slice()) {
            return Err(invalid(
                format!("{tpath}.exponents"),
                "duplicate exponent vector in one series",
            ));
        }
        seen.push(&term.exponents);
        let c = resolve_scalar(field, &term.coeff, &format!("{tpath}.coeff"))?;
        out.add_coeff(MultiIndex::new(term.exponents.clone()), &c);
    }
    Ok(out)
}

fn resolve_jet(
    field: &Arc<NumberField>,
    n: usize,
    cap: u32,
    raw: &[Vec<RawTerm>],
    path: &str,
) -> Result<VectorFieldJet, ProblemError> {
    let mut comps = Vec::with_capacity(n);
    for (k, terms) in raw.iter().enumerate() {
        comps.push(resolve_series(
            field,
            n,
            cap,
            terms,
            &format!("{path}[{k}]"),
        )?);
    }
    Ok(VectorFieldJet::new(comps).expect("components built with one shape"))
}

/// Canonical JSON rendering of a parsed problem: scalar literals in
/// power-basis canonical form, terms in graded order with the
/// descending-lex tie break, defaulted sections omitted.
#[must_use]
pub fn render_problem(p: &ProblemFile) -> String {
    let raw = RawProblem {
        field: RawField {
            min_poly: p.field.min_poly().iter().map(ToString::to_string).collect(),
            iota: iota(&p.field).map(|i| i.to_string()),
        },
        dimension: p.dimension,
        degree: p.degree,
        vector_field: render_jet(&p.vector_field),
        commuting_fields: p
            .commuting_fields
            .iter()
            .map(|y| {
                let d = y.denom();
                let one = TruncatedSeries::constant(
                    d.field(),
                    d.nvars(),
                    d.cap(),
                    FieldElement::one(d.field()),
                );
                RawRational {
                    numerator: render_jet(y.numer()),
                    denominator: if *d == one { None } else { Some(render_terms(d)) },
                }
            })
            .collect(),
        integrals: p
            .integrals
            .iter()
            .map(|product| {
                product
                    .factors()
                    .iter()
                    .map(|(g, c)| RawFactor {
                        factor: render_terms(g),
                        power: c.to_string(),
                    })
                    .collect()
            })
            .collect(),
        semi_invariants: p
            .semi_invariants
            .iter()
            .map(|s| RawSemiInvariant {
                function: render_terms(&s.function),
                cofactor: render_terms(&s.cofactor),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&raw).expect("plain data serializes");
    out.push('\n');
    out
}

fn render_terms(s: &TruncatedSeries) -> Vec<RawTerm> {
    s.terms()
        .map(|(idx, c)| RawTerm {
            coeff: c.to_string(),
            exponents: idx.exponents().to_vec(),
        })
        .collect()
}

fn render_jet(v: &VectorFieldJet) -> Vec<Vec<RawTerm>> {
    v.components().iter().map(render_terms).collect()
}
