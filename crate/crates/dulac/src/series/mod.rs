//! Truncated multivariate formal power series over a number field, plus
//! vector-field jets and coordinate changes built on them.
//!
//! Every value carries its truncation degree; arithmetic keeps the minimum
//! of the operand caps, so precision loss is always explicit in the types
//! rather than a global mode.

mod change;
mod jet;

pub use change::{compose, invert_change, pushforward, substitute, CoordinateChange};
pub use jet::{apply_derivation, lie_bracket, VectorFieldJet};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::scalars::{FieldElement, NumberField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("expected {expected} variables, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operands live over different number fields")]
    FieldMismatch,
    #[error("linear part of the coordinate change is not invertible")]
    NonInvertibleLinearPart,
    #[error("coordinate change does not fix the origin")]
    NonvanishingAtOrigin,
}

/// Exponent vector of a monomial in `x1..xn`.
///
/// Ordered by total degree first, ties broken so that within a degree the
/// lexicographically larger exponent vector comes first; iteration over a
/// `BTreeMap` keyed by this type then matches the printed term order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    #[must_use]
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    #[must_use]
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    #[must_use]
    pub fn unit(n: usize, j: usize) -> Self {
        let mut e = vec![0; n];
        e[j] = 1;
        MultiIndex(e)
    }

    #[must_use]
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[must_use]
    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    #[must_use]
    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Lowers exponent `j` by one; None when it is already zero.
    #[must_use]
    pub fn lower(&self, j: usize) -> Option<MultiIndex> {
        if self.0[j] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[j] -= 1;
        Some(MultiIndex(e))
    }

    /// All exponent vectors in `n` variables of total degree exactly `d`,
    /// in canonical (descending-lex) order.
    #[must_use]
    pub fn all_of_degree(n: usize, d: u32) -> Vec<MultiIndex> {
        fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if n == 1 {
                prefix.push(d);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for first in (0..=d).rev() {
                prefix.push(first);
                rec(n - 1, d - first, prefix, out);
                prefix.pop();
            }
        }
        assert!(n >= 1);
        let mut out = Vec::new();
        rec(n, d, &mut Vec::with_capacity(n), &mut out);
        out
    }

    /// Monomial text like `x1^2*x3`; None for the constant monomial.
    #[must_use]
    pub fn render(&self) -> Option<String> {
        let mut parts = Vec::new();
        for (k, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if e == 1 {
                parts.push(format!("x{}", k + 1));
            } else {
                parts.push(format!("x{}^{}", k + 1, e));
            }
        }
        if parts.is_empty() {
            None
        } else {
            Some(parts.join("*"))
        }
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0).reverse())
    }
}

/// Sparse polynomial of bounded total degree, understood as a power series
/// known exactly through degree `cap`.
#[derive(Debug, Clone)]
pub struct TruncatedSeries {
    field: Arc<NumberField>,
    nvars: usize,
    cap: u32,
    terms: BTreeMap<MultiIndex, FieldElement>,
}

impl TruncatedSeries {
    #[must_use]
    pub fn zero(field: &Arc<NumberField>, nvars: usize, cap: u32) -> Self {
        TruncatedSeries {
            field: field.clone(),
            nvars,
            cap,
            terms: BTreeMap::new(),
        }
    }

    #[must_use]
    pub fn constant(field: &Arc<NumberField>, nvars: usize, cap: u32, c: FieldElement) -> Self {
        let mut s = Self::zero(field, nvars, cap);
        s.set_coeff(MultiIndex::zero(nvars), c);
        s
    }

    #[must_use]
    pub fn variable(field: &Arc<NumberField>, nvars: usize, cap: u32, j: usize) -> Self {
        let mut s = Self::zero(field, nvars, cap);
        s.set_coeff(MultiIndex::unit(nvars, j), FieldElement::one(field));
        s
    }

    #[must_use]
    pub fn monomial(
        field: &Arc<NumberField>,
        nvars: usize,
        cap: u32,
        idx: MultiIndex,
        c: FieldElement,
    ) -> Self {
        let mut s = Self::zero(field, nvars, cap);
        s.set_coeff(idx, c);
        s
    }

    #[must_use]
    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    #[must_use]
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    #[must_use]
    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &FieldElement)> {
        self.terms.iter()
    }

    #[must_use]
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient at `idx`, zero when absent.
    #[must_use]
    pub fn coeff(&self, idx: &MultiIndex) -> FieldElement {
        self.terms
            .get(idx)
            .cloned()
            .unwrap_or_else(|| FieldElement::zero(&self.field))
    }

    /// Stores a coefficient, dropping zeros and terms beyond the cap.
    pub fn set_coeff(&mut self, idx: MultiIndex, c: FieldElement) {
        debug_assert_eq!(idx.len(), self.nvars);
        if idx.degree() > self.cap || c.is_zero() {
            self.terms.remove(&idx);
        } else {
            self.terms.insert(idx, c);
        }
    }

    /// Adds into a coefficient in place.
    pub fn add_coeff(&mut self, idx: MultiIndex, c: &FieldElement) {
        let sum = &self.coeff(&idx) + c;
        self.set_coeff(idx, sum);
    }

    /// Lowest total degree among nonzero terms; None for the zero series.
    #[must_use]
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().next().map(MultiIndex::degree)
    }

    /// Highest total degree among nonzero terms; None for the zero series.
    #[must_use]
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    /// Re-caps the series, discarding higher terms when lowering.
    #[must_use]
    pub fn truncated(&self, cap: u32) -> TruncatedSeries {
        let mut out = TruncatedSeries::zero(&self.field, self.nvars, cap);
        for (idx, c) in &self.terms {
            if idx.degree() <= cap {
                out.terms.insert(idx.clone(), c.clone());
            }
        }
        out
    }

    /// The homogeneous degree-`k` part, cap unchanged.
    #[must_use]
    pub fn graded_part(&self, k: u32) -> TruncatedSeries {
        let mut out = TruncatedSeries::zero(&self.field, self.nvars, self.cap);
        for (idx, c) in &self.terms {
            if idx.degree() == k {
                out.terms.insert(idx.clone(), c.clone());
            }
        }
        out
    }

    #[must_use]
    pub fn add(&self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.assert_compatible(rhs);
        let cap = self.cap.min(rhs.cap);
        let mut out = self.truncated(cap);
        for (idx, c) in &rhs.terms {
            if idx.degree() <= cap {
                out.add_coeff(idx.clone(), c);
            }
        }
        out
    }

    #[must_use]
    pub fn sub(&self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.add(&rhs.neg())
    }

    #[must_use]
    pub fn neg(&self) -> TruncatedSeries {
        let mut out = TruncatedSeries::zero(&self.field, self.nvars, self.cap);
        for (idx, c) in &self.terms {
            out.terms.insert(idx.clone(), -c);
        }
        out
    }

    #[must_use]
    pub fn scale(&self, s: &FieldElement) -> TruncatedSeries {
        let mut out = TruncatedSeries::zero(&self.field, self.nvars, self.cap);
        if s.is_zero() {
            return out;
        }
        for (idx, c) in &self.terms {
            let prod = c * s;
            if !prod.is_zero() {
                out.terms.insert(idx.clone(), prod);
            }
        }
        out
    }

    #[must_use]
    pub fn mul(&self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.assert_compatible(rhs);
        let cap = self.cap.min(rhs.cap);
        let mut out = TruncatedSeries::zero(&self.field, self.nvars, cap);
        for (ia, ca) in &self.terms {
            let da = ia.degree();
            if da > cap {
                continue;
            }
            for (ib, cb) in &rhs.terms {
                if da + ib.degree() > cap {
                    continue;
                }
                let prod = ca * cb;
                out.add_coeff(ia.add(ib), &prod);
            }
        }
        out
    }

    /// Partial derivative in variable `j`; the cap drops by one since the
    /// top slice of the operand no longer determines it.
    #[must_use]
    pub fn partial(&self, j: usize) -> TruncatedSeries {
        let mut out = TruncatedSeries::zero(&self.field, self.nvars, self.cap.saturating_sub(1));
        for (idx, c) in &self.terms {
            if let Some(lowered) = idx.lower(j) {
                let mult = FieldElement::from_int(&self.field, i64::from(idx.exponents()[j]));
                let scaled = c * &mult;
                out.add_coeff(lowered, &scaled);
            }
        }
        out
    }

    /// Exact evaluation of the stored terms at a point.
    #[must_use]
    pub fn eval(&self, point: &[FieldElement]) -> FieldElement {
        assert_eq!(point.len(), self.nvars);
        let mut acc = FieldElement::zero(&self.field);
        for (idx, c) in &self.terms {
            let mut term = c.clone();
            for (j, &e) in idx.exponents().iter().enumerate() {
                for _ in 0..e {
                    term = &term * &point[j];
                }
            }
            acc = &acc + &term;
        }
        acc
    }

    fn assert_compatible(&self, rhs: &TruncatedSeries) {
        assert_eq!(self.nvars, rhs.nvars, "series dimension mismatch");
        assert!(
            self.field.compatible(&rhs.field),
            "series over different number fields"
        );
    }
}

/// Product with dimension checking; the cap is the minimum of the operands'.
pub fn series_mul(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    if a.nvars != b.nvars {
        return Err(SeriesError::DimensionMismatch {
            expected: a.nvars,
            got: b.nvars,
        });
    }
    if !a.field.compatible(&b.field) {
        return Err(SeriesError::FieldMismatch);
    }
    Ok(a.mul(b))
}

/// Exact division `h / g` in the truncated ring: returns the quotient `q`
/// with `h = q·g` through the shared cap, or `None` when no such series
/// exists. The quotient's cap is the shared cap minus the order of `g`,
/// since higher slices of `q` are not pinned down by the data. Division
/// proceeds slice by slice, dividing each residual homogeneous slice by the
/// lowest slice of `g`; `g` identically zero gives `None`.
#[must_use]
pub fn exact_quotient(h: &TruncatedSeries, g: &TruncatedSeries) -> Option<TruncatedSeries> {
    assert_eq!(h.nvars(), g.nvars(), "series dimension mismatch");
    assert!(
        h.field().compatible(g.field()),
        "series over different number fields"
    );
    let cap = h.cap().min(g.cap());
    let g = g.truncated(cap);
    let h = h.truncated(cap);
    let r = g.order()?;
    let qcap = cap - r;
    let lead = g.graded_part(r);
    let field = h.field().clone();
    let n = h.nvars();
    let mut q = TruncatedSeries::zero(&field, n, cap);
    let mut rem = h;
    for d in 0..=qcap {
        let slice = rem.graded_part(r + d);
        if slice.is_zero() {
            continue;
        }
        let qd = divide_homogeneous(&slice, &lead)?;
        rem = rem.sub(&qd.mul(&g));
        q = q.add(&qd);
    }
    if rem.is_zero() {
        Some(q.truncated(qcap))
    } else {
        None
    }
}

/// Multiplicative inverse of a unit series, `None` when the constant term
/// vanishes.
#[must_use]
pub fn unit_inverse(u: &TruncatedSeries) -> Option<TruncatedSeries> {
    if u.coeff(&MultiIndex::zero(u.nvars())).is_zero() {
        return None;
    }
    let one = TruncatedSeries::constant(u.field(), u.nvars(), u.cap(), FieldElement::one(u.field()));
    exact_quotient(&one, u)
}

/// Division of one homogeneous polynomial by another, leading terms first.
/// The map order within a fixed degree is lexicographic on exponents, which
/// is multiplicative, so cancelling the leading term strictly shrinks the
/// remainder and the loop terminates.
fn divide_homogeneous(
    num: &TruncatedSeries,
    den: &TruncatedSeries,
) -> Option<TruncatedSeries> {
    let field = num.field().clone();
    let n = num.nvars();
    let cap = num.cap();
    let (lead_idx, lead_c) = den
        .terms()
        .next()
        .map(|(i, c)| (i.clone(), c.clone()))?;
    let mut out = TruncatedSeries::zero(&field, n, cap);
    let mut rem = num.clone();
    loop {
        let next = rem.terms().next().map(|(i, c)| (i.clone(), c.clone()));
        let Some((idx, c)) = next else {
            return Some(out);
        };
        let m = try_sub_exponents(&idx, &lead_idx)?;
        let coef = &c / &lead_c;
        out.add_coeff(m.clone(), &coef);
        let t = TruncatedSeries::monomial(&field, n, cap, m, coef);
        rem = rem.sub(&t.mul(den));
    }
}

fn try_sub_exponents(a: &MultiIndex, b: &MultiIndex) -> Option<MultiIndex> {
    let mut out = Vec::with_capacity(a.len());
    for (&ea, &eb) in a.exponents().iter().zip(b.exponents()) {
        out.push(ea.checked_sub(eb)?);
    }
    Some(MultiIndex::new(out))
}

impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars
            && self.field.compatible(&other.field)
            && self.terms == other.terms
    }
}

impl Eq for TruncatedSeries {}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_series(self))
    }
}

/// Canonical text form: terms in map order, scalar coefficients in their
/// canonical form, a single-term negative coefficient folded into the join,
/// multi-term coefficients parenthesized, unit coefficients left implicit
/// on monomials.
pub fn render_series(s: &TruncatedSeries) -> String {
    let sole = s.terms.len() == 1;
    let mut out = String::new();
    for (idx, c) in &s.terms {
        let scalar = c.to_string();
        let multi = scalar.contains(' ');
        let (negative, body) = if !multi && scalar.starts_with('-') {
            (true, scalar[1..].to_string())
        } else {
            (false, scalar)
        };
        let piece = match idx.render() {
            None => {
                if multi && !sole {
                    format!("({body})")
                } else {
                    body
                }
            }
            Some(mono) => {
                if multi {
                    format!("({body}) * {mono}")
                } else if body == "1" {
                    mono
                } else {
                    format!("{body} * {mono}")
                }
            }
        };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else if negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&piece);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
