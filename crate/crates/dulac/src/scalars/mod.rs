//! Number fields `Q(theta)` presented by a monic irreducible minimal
//! polynomial, elements in the power basis `1, theta, ..., theta^(d-1)`, and
//! exact rational-rank computations on tuples of elements.
//!
//! A field may carry a designated element `iota` with `iota^2 = -1`; the
//! toric machinery requires it, everything else works without.

mod factor;
pub(crate) mod qpoly;
mod parse;
mod rank;

pub use rank::{rational_rank, RationalRank};

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Largest supported extension degree. Validation cost of the deterministic
/// factorization grows quickly past this.
pub const MAX_DEGREE: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("minimal polynomial must be monic")]
    NotMonic,
    #[error("extension degree {0} exceeds the supported maximum {MAX_DEGREE}")]
    UnsupportedDegree(usize),
    #[error("minimal polynomial is reducible over Q")]
    ReducibleMinPoly,
    #[error("designated iota does not square to -1")]
    IotaSquareMismatch,
    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("scalar literal parse error: {0}")]
    Parse(String),
}

/// A number field in power-basis presentation. Construct through
/// [`NumberField::new`]; the result is shared behind an `Arc` because every
/// element keeps a handle to its field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberField {
    min_poly: Vec<BigRational>,
    degree: usize,
    iota: Option<Vec<BigRational>>,
}

impl NumberField {
    /// Validates and builds a field. `min_poly` is constant term first and
    /// must be monic of degree 1..=8; degree 1 denotes the rationals and
    /// requires a nonzero constant term (so `theta` names a nonzero
    /// rational). `iota` is given in power-basis coordinates and must square
    /// to -1.
    pub fn new(
        min_poly: Vec<BigRational>,
        iota: Option<Vec<BigRational>>,
    ) -> Result<Arc<NumberField>, FieldError> {
        let trimmed = qpoly::trim(min_poly);
        if trimmed.len() < 2 {
            return Err(FieldError::ReducibleMinPoly);
        }
        let degree = trimmed.len() - 1;
        if !trimmed.last().unwrap().is_one() {
            return Err(FieldError::NotMonic);
        }
        if degree > MAX_DEGREE {
            return Err(FieldError::UnsupportedDegree(degree));
        }
        if degree == 1 {
            if trimmed[0].is_zero() {
                return Err(FieldError::ReducibleMinPoly);
            }
        } else if !factor::is_irreducible(&trimmed) {
            return Err(FieldError::ReducibleMinPoly);
        }
        if let Some(coords) = &iota {
            if coords.len() != degree {
                return Err(FieldError::DimensionMismatch {
                    expected: degree,
                    got: coords.len(),
                });
            }
        }
        let field = Arc::new(NumberField {
            min_poly: trimmed,
            degree,
            iota,
        });
        if let Some(coords) = &field.iota {
            let i = FieldElement {
                coords: coords.clone(),
                field: field.clone(),
            };
            if &i * &i != -FieldElement::one(&field) {
                return Err(FieldError::IotaSquareMismatch);
            }
        }
        Ok(field)
    }

    /// The rationals, presented with minimal polynomial `t - 1`.
    pub fn rationals() -> Arc<NumberField> {
        NumberField::new(
            vec![-BigRational::one(), BigRational::one()],
            None,
        )
        .expect("t - 1 is a valid presentation")
    }

    /// `Q(i)` with `iota = t`.
    pub fn gaussian() -> Arc<NumberField> {
        NumberField::new(
            vec![BigRational::one(), BigRational::zero(), BigRational::one()],
            Some(vec![BigRational::zero(), BigRational::one()]),
        )
        .expect("t^2 + 1 is a valid presentation")
    }

    #[must_use]
    pub fn degree(&self) -> usize {
        self.degree
    }

    #[must_use]
    pub fn min_poly(&self) -> &[BigRational] {
        &self.min_poly
    }

    #[must_use]
    pub fn has_iota(&self) -> bool {
        self.iota.is_some()
    }

    pub fn compatible(&self, other: &NumberField) -> bool {
        self.min_poly == other.min_poly
    }
}

/// Iota as an element, if the field designates one.
pub fn iota(field: &Arc<NumberField>) -> Option<FieldElement> {
    field.iota.as_ref().map(|coords| FieldElement {
        coords: coords.clone(),
        field: field.clone(),
    })
}

/// An element of a [`NumberField`], stored as `degree` rational coordinates
/// in the power basis.
#[derive(Debug, Clone)]
pub struct FieldElement {
    coords: Vec<BigRational>,
    field: Arc<NumberField>,
}

impl FieldElement {
    pub fn new(field: &Arc<NumberField>, coords: Vec<BigRational>) -> Result<Self, FieldError> {
        if coords.len() != field.degree {
            return Err(FieldError::DimensionMismatch {
                expected: field.degree,
                got: coords.len(),
            });
        }
        Ok(FieldElement {
            coords,
            field: field.clone(),
        })
    }

    #[must_use]
    pub fn zero(field: &Arc<NumberField>) -> Self {
        FieldElement {
            coords: vec![BigRational::zero(); field.degree],
            field: field.clone(),
        }
    }

    #[must_use]
    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_rational(field, BigRational::one())
    }

    #[must_use]
    pub fn from_rational(field: &Arc<NumberField>, q: BigRational) -> Self {
        let mut coords = vec![BigRational::zero(); field.degree];
        coords[0] = q;
        FieldElement {
            coords,
            field: field.clone(),
        }
    }

    #[must_use]
    pub fn from_int(field: &Arc<NumberField>, n: i64) -> Self {
        Self::from_rational(field, BigRational::from(BigInt::from(n)))
    }

    /// The generator theta. For a degree-1 field this is the rational root
    /// of the minimal polynomial.
    #[must_use]
    pub fn generator(field: &Arc<NumberField>) -> Self {
        if field.degree == 1 {
            return Self::from_rational(field, -field.min_poly[0].clone());
        }
        let mut coords = vec![BigRational::zero(); field.degree];
        coords[1] = BigRational::one();
        FieldElement {
            coords,
            field: field.clone(),
        }
    }

    /// Parses the scalar literal syntax, e.g. `1/2*t^3 - 2*t + 7/3`.
    pub fn parse(field: &Arc<NumberField>, text: &str) -> Result<Self, FieldError> {
        parse::parse_scalar(field, text)
    }

    #[must_use]
    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    #[must_use]
    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    #[must_use]
    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    /// Some(q) when the element lies in the prime field.
    #[must_use]
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    /// Multiplicative inverse; None for zero.
    #[must_use]
    pub fn inv(&self) -> Option<FieldElement> {
        if self.is_zero() {
            return None;
        }
        let elem = qpoly::trim(self.coords.clone());
        let (g, u, _) = qpoly::egcd(&elem, &self.field.min_poly);
        debug_assert_eq!(g.len(), 1, "minimal polynomial must be irreducible");
        let scaled = qpoly::scale(&u, &g[0].recip());
        let reduced = qpoly::rem(&scaled, &self.field.min_poly);
        Some(self.field_elem(reduced))
    }

    /// Deterministic coordinate-lexicographic comparison, used wherever
    /// output order must not depend on construction history.
    #[must_use]
    pub fn cmp_coords(&self, other: &FieldElement) -> std::cmp::Ordering {
        self.coords.cmp(&other.coords)
    }

    fn field_elem(&self, mut coords: Vec<BigRational>) -> FieldElement {
        coords.resize(self.field.degree, BigRational::zero());
        FieldElement {
            coords,
            field: self.field.clone(),
        }
    }

    fn check_fields(&self, other: &FieldElement) {
        assert!(
            self.field.compatible(&other.field),
            "field elements from incompatible number fields"
        );
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.compatible(&other.field) && self.coords == other.coords
    }
}

impl Eq for FieldElement {}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&parse::render_scalar(&self.coords))
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.check_fields(rhs);
        let coords = self
            .coords
            .iter()
            .zip(&rhs.coords)
            .map(|(a, b)| a + b)
            .collect();
        FieldElement {
            coords,
            field: self.field.clone(),
        }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.check_fields(rhs);
        let coords = self
            .coords
            .iter()
            .zip(&rhs.coords)
            .map(|(a, b)| a - b)
            .collect();
        FieldElement {
            coords,
            field: self.field.clone(),
        }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.check_fields(rhs);
        let product = qpoly::mul(
            &qpoly::trim(self.coords.clone()),
            &qpoly::trim(rhs.coords.clone()),
        );
        let reduced = qpoly::rem(&product, &self.field.min_poly);
        self.field_elem(reduced)
    }
}

impl Div for &FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: &FieldElement) -> FieldElement {
        let inv = rhs.inv().expect("division by zero field element");
        self * &inv
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            coords: self.coords.iter().map(|c| -c).collect(),
            field: self.field.clone(),
        }
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        &self + &rhs
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        &self - &rhs
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        &self * &rhs
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}
