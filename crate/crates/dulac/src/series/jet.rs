//! Vector fields truncated at a degree cap, the derivation they induce on
//! series, and the Lie bracket.

use std::sync::Arc;

use crate::scalars::{FieldElement, NumberField};

use super::{MultiIndex, SeriesError, TruncatedSeries};

/// A formal vector field `X = Σ Xⱼ ∂/∂xⱼ` with all components truncated at
/// one common cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorFieldJet {
    components: Vec<TruncatedSeries>,
}

impl VectorFieldJet {
    pub fn new(components: Vec<TruncatedSeries>) -> Result<Self, SeriesError> {
        assert!(!components.is_empty(), "vector field needs at least one component");
        let n = components.len();
        let cap = components[0].cap();
        for c in &components {
            if c.nvars() != n {
                return Err(SeriesError::DimensionMismatch {
                    expected: n,
                    got: c.nvars(),
                });
            }
            if !c.field().compatible(components[0].field()) {
                return Err(SeriesError::FieldMismatch);
            }
        }
        let components = components
            .into_iter()
            .map(|c| {
                let cc = c.cap().min(cap);
                c.truncated(cc)
            })
            .collect::<Vec<_>>();
        let min_cap = components.iter().map(TruncatedSeries::cap).min().unwrap();
        let components = components
            .into_iter()
            .map(|c| c.truncated(min_cap))
            .collect();
        Ok(VectorFieldJet { components })
    }

    #[must_use]
    pub fn zero(field: &Arc<NumberField>, n: usize, cap: u32) -> Self {
        VectorFieldJet {
            components: (0..n).map(|_| TruncatedSeries::zero(field, n, cap)).collect(),
        }
    }

    /// The diagonal linear field `Σ λⱼ xⱼ ∂/∂xⱼ`.
    #[must_use]
    pub fn diagonal(field: &Arc<NumberField>, lambda: &[FieldElement], cap: u32) -> Self {
        let n = lambda.len();
        let components = lambda
            .iter()
            .enumerate()
            .map(|(j, l)| TruncatedSeries::variable(field, n, cap, j).scale(l))
            .collect();
        VectorFieldJet { components }
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        self.components.len()
    }

    #[must_use]
    pub fn cap(&self) -> u32 {
        self.components[0].cap()
    }

    #[must_use]
    pub fn field(&self) -> &Arc<NumberField> {
        self.components[0].field()
    }

    #[must_use]
    pub fn component(&self, j: usize) -> &TruncatedSeries {
        &self.components[j]
    }

    #[must_use]
    pub fn components(&self) -> &[TruncatedSeries] {
        &self.components
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.components.iter().all(TruncatedSeries::is_zero)
    }

    /// Lowest total degree over all components; None when zero.
    #[must_use]
    pub fn order(&self) -> Option<u32> {
        self.components.iter().filter_map(TruncatedSeries::order).min()
    }

    /// The homogeneous degree-`k` slice, componentwise.
    #[must_use]
    pub fn graded_slice(&self, k: u32) -> VectorFieldJet {
        VectorFieldJet {
            components: self.components.iter().map(|c| c.graded_part(k)).collect(),
        }
    }

    /// Degree-1 coefficient matrix: entry `(i, j)` is the coefficient of
    /// `xⱼ` in component `i`.
    #[must_use]
    pub fn linear_matrix(&self) -> Vec<Vec<FieldElement>> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.components[i].coeff(&MultiIndex::unit(n, j)))
                    .collect()
            })
            .collect()
    }

    #[must_use]
    pub fn add(&self, rhs: &VectorFieldJet) -> VectorFieldJet {
        assert_eq!(self.dim(), rhs.dim());
        VectorFieldJet {
            components: self
                .components
                .iter()
                .zip(&rhs.components)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    #[must_use]
    pub fn sub(&self, rhs: &VectorFieldJet) -> VectorFieldJet {
        assert_eq!(self.dim(), rhs.dim());
        VectorFieldJet {
            components: self
                .components
                .iter()
                .zip(&rhs.components)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    #[must_use]
    pub fn neg(&self) -> VectorFieldJet {
        VectorFieldJet {
            components: self.components.iter().map(TruncatedSeries::neg).collect(),
        }
    }

    #[must_use]
    pub fn scale(&self, s: &FieldElement) -> VectorFieldJet {
        VectorFieldJet {
            components: self.components.iter().map(|c| c.scale(s)).collect(),
        }
    }

    #[must_use]
    pub fn truncated(&self, cap: u32) -> VectorFieldJet {
        VectorFieldJet {
            components: self.components.iter().map(|c| c.truncated(cap)).collect(),
        }
    }

    /// True when no component has a constant term.
    #[must_use]
    pub fn vanishes_at_origin(&self) -> bool {
        self.order().map_or(true, |o| o >= 1)
    }
}

/// `X(f) = Σⱼ Xⱼ ∂f/∂xⱼ`. When `X` fixes the origin the result is exact
/// through `min(cap_X, cap_f)`; a constant component costs one degree.
pub fn apply_derivation(
    x: &VectorFieldJet,
    f: &TruncatedSeries,
) -> Result<TruncatedSeries, SeriesError> {
    if x.dim() != f.nvars() {
        return Err(SeriesError::DimensionMismatch {
            expected: x.dim(),
            got: f.nvars(),
        });
    }
    if !x.field().compatible(f.field()) {
        return Err(SeriesError::FieldMismatch);
    }
    let base = x.cap().min(f.cap());
    let cap = if x.vanishes_at_origin() {
        base
    } else {
        base.saturating_sub(1)
    };
    let mut acc = TruncatedSeries::zero(f.field(), f.nvars(), cap);
    for j in 0..x.dim() {
        let df = f.partial(j).truncated(cap);
        let prod = x.component(j).truncated(cap).mul(&df);
        acc = acc.add(&prod.truncated(cap));
    }
    Ok(acc.truncated(cap))
}

/// `[X,Y]ⱼ = X(Yⱼ) − Y(Xⱼ)`.
pub fn lie_bracket(x: &VectorFieldJet, y: &VectorFieldJet) -> Result<VectorFieldJet, SeriesError> {
    if x.dim() != y.dim() {
        return Err(SeriesError::DimensionMismatch {
            expected: x.dim(),
            got: y.dim(),
        });
    }
    let mut components = Vec::with_capacity(x.dim());
    for j in 0..x.dim() {
        let a = apply_derivation(x, y.component(j))?;
        let b = apply_derivation(y, x.component(j))?;
        components.push(a.sub(&b));
    }
    VectorFieldJet::new(components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::NumberField;

    fn int(field: &Arc<NumberField>, n: i64) -> FieldElement {
        FieldElement::from_int(field, n)
    }

    fn euler_component(field: &Arc<NumberField>, n: usize, cap: u32, j: usize) -> TruncatedSeries {
        TruncatedSeries::variable(field, n, cap, j)
    }

    #[test]
    fn euler_weight_on_powers() {
        let f = NumberField::rationals();
        let x = VectorFieldJet::new(vec![euler_component(&f, 1, 8, 0)]).unwrap();
        for k in 1..=5u32 {
            let mono = TruncatedSeries::monomial(
                &f,
                1,
                8,
                MultiIndex::new(vec![k]),
                FieldElement::one(&f),
            );
            let out = apply_derivation(&x, &mono).unwrap();
            assert_eq!(out, mono.scale(&int(&f, i64::from(k))));
        }
    }

    #[test]
    fn saddle_kills_xy() {
        let f = NumberField::rationals();
        let saddle = VectorFieldJet::new(vec![
            TruncatedSeries::variable(&f, 2, 6, 0),
            TruncatedSeries::variable(&f, 2, 6, 1).neg(),
        ])
        .unwrap();
        let xy = TruncatedSeries::monomial(
            &f,
            2,
            6,
            MultiIndex::new(vec![1, 1]),
            FieldElement::one(&f),
        );
        let out = apply_derivation(&saddle, &xy).unwrap();
        assert!(out.is_zero());
    }

    #[test]
    fn shear_derivation_expansion() {
        // X = x d/dx + (2y + x^2) d/dy applied to y gives 2y + x^2, and no
        // constant c makes X(y - c x^2) proportional to y - c x^2.
        let f = NumberField::rationals();
        let mut second = TruncatedSeries::variable(&f, 2, 6, 1).scale(&int(&f, 2));
        second.add_coeff(MultiIndex::new(vec![2, 0]), &FieldElement::one(&f));
        let x = VectorFieldJet::new(vec![TruncatedSeries::variable(&f, 2, 6, 0), second]).unwrap();
        let y = TruncatedSeries::variable(&f, 2, 6, 1);
        let out = apply_derivation(&x, &y).unwrap();
        let mut expect = TruncatedSeries::variable(&f, 2, 6, 1).scale(&int(&f, 2));
        expect.add_coeff(MultiIndex::new(vec![2, 0]), &FieldElement::one(&f));
        assert_eq!(out, expect);
        // X(y - c x^2) = 2y + (1 - 2c) x^2, proportional to y - c x^2 only
        // if 1 - 2c = -2c, impossible.
        for c in [-2i64, -1, 0, 1, 2, 3] {
            let probe = y.sub(
                &TruncatedSeries::monomial(
                    &f,
                    2,
                    6,
                    MultiIndex::new(vec![2, 0]),
                    int(&f, c),
                ),
            );
            let image = apply_derivation(&x, &probe).unwrap();
            let scaled = probe.scale(&int(&f, 2));
            assert_ne!(image, scaled);
        }
    }

    #[test]
    fn bracket_eigenvector() {
        let f = NumberField::rationals();
        let euler = VectorFieldJet::new(vec![euler_component(&f, 1, 6, 0)]).unwrap();
        let quad = VectorFieldJet::new(vec![TruncatedSeries::monomial(
            &f,
            1,
            6,
            MultiIndex::new(vec![2]),
            FieldElement::one(&f),
        )])
        .unwrap();
        let br = lie_bracket(&euler, &quad).unwrap();
        assert_eq!(br, quad);
    }

    #[test]
    fn bracket_of_commuting_diagonals_vanishes() {
        let f = NumberField::rationals();
        let a = VectorFieldJet::new(vec![
            TruncatedSeries::variable(&f, 2, 5, 0),
            TruncatedSeries::zero(&f, 2, 5),
        ])
        .unwrap();
        let b = VectorFieldJet::new(vec![
            TruncatedSeries::zero(&f, 2, 5),
            TruncatedSeries::variable(&f, 2, 5, 1),
        ])
        .unwrap();
        assert!(lie_bracket(&a, &b).unwrap().is_zero());
    }

    #[test]
    fn bracket_with_self_vanishes() {
        let f = NumberField::rationals();
        let mut second = TruncatedSeries::variable(&f, 2, 5, 1).scale(&int(&f, 3));
        second.add_coeff(MultiIndex::new(vec![2, 1]), &int(&f, 7));
        let x = VectorFieldJet::new(vec![TruncatedSeries::variable(&f, 2, 5, 0), second]).unwrap();
        assert!(lie_bracket(&x, &x).unwrap().is_zero());
    }

    #[test]
    fn constant_component_costs_a_degree() {
        let f = NumberField::rationals();
        let affine = VectorFieldJet::new(vec![TruncatedSeries::constant(
            &f,
            1,
            5,
            FieldElement::one(&f),
        )])
        .unwrap();
        let g = TruncatedSeries::variable(&f, 1, 5, 0);
        let out = apply_derivation(&affine, &g).unwrap();
        assert_eq!(out.cap(), 4);
        assert_eq!(out.coeff(&MultiIndex::zero(1)), int(&f, 1));
    }
}
