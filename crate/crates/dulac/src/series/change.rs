//! Formal coordinate changes fixing the origin, their composition and
//! inversion, substitution of series, and transport of vector fields.

use std::sync::Arc;

use crate::linalg;
use crate::scalars::{FieldElement, NumberField};

use super::{MultiIndex, SeriesError, TruncatedSeries, VectorFieldJet};

/// An origin-preserving change of coordinates with invertible linear part,
/// stored as the new coordinates expanded in the old ones. The inverse to
/// the same cap is computed once at construction.
#[derive(Debug, Clone)]
pub struct CoordinateChange {
    components: Vec<TruncatedSeries>,
    inverse: Vec<TruncatedSeries>,
}

impl CoordinateChange {
    pub fn new(components: Vec<TruncatedSeries>) -> Result<Self, SeriesError> {
        assert!(!components.is_empty(), "coordinate change needs components");
        let n = components.len();
        let cap = components
            .iter()
            .map(TruncatedSeries::cap)
            .min()
            .unwrap();
        let field = components[0].field().clone();
        let mut comps = Vec::with_capacity(n);
        for c in components {
            if c.nvars() != n {
                return Err(SeriesError::DimensionMismatch {
                    expected: n,
                    got: c.nvars(),
                });
            }
            if !c.field().compatible(&field) {
                return Err(SeriesError::FieldMismatch);
            }
            if !c.coeff(&MultiIndex::zero(n)).is_zero() {
                return Err(SeriesError::NonvanishingAtOrigin);
            }
            comps.push(c.truncated(cap));
        }
        let lin = linear_matrix(&comps);
        let Some(lin_inv) = linalg::inverse(&lin, &field) else {
            return Err(SeriesError::NonInvertibleLinearPart);
        };
        let inverse = invert_components(&comps, &lin_inv, &field, cap);
        Ok(CoordinateChange {
            components: comps,
            inverse,
        })
    }

    #[must_use]
    pub fn identity(field: &Arc<NumberField>, n: usize, cap: u32) -> Self {
        let comps: Vec<_> = (0..n)
            .map(|j| TruncatedSeries::variable(field, n, cap, j))
            .collect();
        CoordinateChange {
            components: comps.clone(),
            inverse: comps,
        }
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
    pub fn components(&self) -> &[TruncatedSeries] {
        &self.components
    }

    #[must_use]
    pub fn component(&self, j: usize) -> &TruncatedSeries {
        &self.components[j]
    }

    #[must_use]
    pub fn inverse_components(&self) -> &[TruncatedSeries] {
        &self.inverse
    }

    #[must_use]
    pub fn is_identity(&self) -> bool {
        let n = self.dim();
        self.components
            .iter()
            .enumerate()
            .all(|(j, c)| {
                c.term_count() == 1 && c.coeff(&MultiIndex::unit(n, j)).is_one()
            })
    }
}

impl PartialEq for CoordinateChange {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
    }
}

impl Eq for CoordinateChange {}

fn linear_matrix(comps: &[TruncatedSeries]) -> Vec<Vec<FieldElement>> {
    let n = comps.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| comps[i].coeff(&MultiIndex::unit(n, j)))
                .collect()
        })
        .collect()
}

/// `f` composed with the tuple `comps`, all components vanishing at the
/// origin, truncated at the common cap. Powers of each component are
/// memoized across terms.
fn substitute_components(f: &TruncatedSeries, comps: &[TruncatedSeries]) -> TruncatedSeries {
    let cap = comps
        .iter()
        .map(TruncatedSeries::cap)
        .min()
        .unwrap_or(f.cap())
        .min(f.cap());
    let field = f.field();
    let out_vars = comps[0].nvars();
    let one = TruncatedSeries::constant(field, out_vars, cap, FieldElement::one(field));
    let mut powers: Vec<Vec<TruncatedSeries>> = comps
        .iter()
        .map(|c| vec![one.clone(), c.truncated(cap)])
        .collect();
    let mut acc = TruncatedSeries::zero(field, out_vars, cap);
    for (idx, coeff) in f.terms() {
        if idx.degree() > cap {
            continue;
        }
        let mut prod = TruncatedSeries::constant(field, out_vars, cap, coeff.clone());
        for (j, &e) in idx.exponents().iter().enumerate() {
            while powers[j].len() <= e as usize {
                let next = powers[j].last().unwrap().mul(&powers[j][1]);
                powers[j].push(next);
            }
            if e > 0 {
                prod = prod.mul(&powers[j][e as usize]);
            }
            if prod.is_zero() {
                break;
            }
        }
        acc = acc.add(&prod);
    }
    acc
}

fn invert_components(
    comps: &[TruncatedSeries],
    lin_inv: &[Vec<FieldElement>],
    field: &Arc<NumberField>,
    cap: u32,
) -> Vec<TruncatedSeries> {
    let n = comps.len();
    let lin_inv_series: Vec<TruncatedSeries> = (0..n)
        .map(|i| {
            let mut s = TruncatedSeries::zero(field, n, cap);
            for (j, entry) in lin_inv[i].iter().enumerate() {
                s.add_coeff(MultiIndex::unit(n, j), entry);
            }
            s
        })
        .collect();
    // Split off the nonlinear tail H; the inverse is the fixed point of
    // psi -> Linv - Linv H(psi), reached in at most cap rounds because the
    // degree-k slice freezes once lower slices have.
    let lin = linear_matrix(comps);
    let tails: Vec<TruncatedSeries> = comps
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut l = TruncatedSeries::zero(field, n, cap);
            for (j, entry) in lin[i].iter().enumerate() {
                l.add_coeff(MultiIndex::unit(n, j), entry);
            }
            c.sub(&l)
        })
        .collect();
    if tails.iter().all(TruncatedSeries::is_zero) {
        return lin_inv_series;
    }
    let mut psi = lin_inv_series.clone();
    for _ in 0..=cap {
        let h_of_psi: Vec<TruncatedSeries> = tails
            .iter()
            .map(|h| substitute_components(h, &psi))
            .collect();
        let next: Vec<TruncatedSeries> = (0..n)
            .map(|i| {
                let mut corr = TruncatedSeries::zero(field, n, cap);
                for (j, entry) in lin_inv[i].iter().enumerate() {
                    corr = corr.add(&h_of_psi[j].scale(entry));
                }
                lin_inv_series[i].sub(&corr)
            })
            .collect();
        if next == psi {
            break;
        }
        psi = next;
    }
    psi
}

/// `f` composed with the change, truncated at the smaller cap.
pub fn substitute(
    f: &TruncatedSeries,
    change: &CoordinateChange,
) -> Result<TruncatedSeries, SeriesError> {
    if f.nvars() != change.dim() {
        return Err(SeriesError::DimensionMismatch {
            expected: change.dim(),
            got: f.nvars(),
        });
    }
    if !f.field().compatible(change.field()) {
        return Err(SeriesError::FieldMismatch);
    }
    Ok(substitute_components(f, &change.components))
}

/// `outer` after `inner` as a single change.
pub fn compose(
    outer: &CoordinateChange,
    inner: &CoordinateChange,
) -> Result<CoordinateChange, SeriesError> {
    if outer.dim() != inner.dim() {
        return Err(SeriesError::DimensionMismatch {
            expected: inner.dim(),
            got: outer.dim(),
        });
    }
    let comps: Vec<TruncatedSeries> = outer
        .components
        .iter()
        .map(|c| substitute_components(c, &inner.components))
        .collect();
    CoordinateChange::new(comps)
}

/// The inverse change; its cached inverse is the original, so this is
/// constant time.
pub fn invert_change(change: &CoordinateChange) -> CoordinateChange {
    CoordinateChange {
        components: change.inverse.clone(),
        inverse: change.components.clone(),
    }
}

/// The vector field `X` written in the coordinates produced by `change`:
/// each component is `X` applied to the new coordinate, then pulled back
/// through the inverse change.
pub fn pushforward(
    x: &VectorFieldJet,
    change: &CoordinateChange,
) -> Result<VectorFieldJet, SeriesError> {
    if x.dim() != change.dim() {
        return Err(SeriesError::DimensionMismatch {
            expected: change.dim(),
            got: x.dim(),
        });
    }
    if !x.field().compatible(change.field()) {
        return Err(SeriesError::FieldMismatch);
    }
    let mut comps = Vec::with_capacity(x.dim());
    for j in 0..x.dim() {
        let moved = super::jet::apply_derivation(x, change.component(j))?;
        comps.push(substitute_components(&moved, &change.inverse));
    }
    VectorFieldJet::new(comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::NumberField;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn int(field: &Arc<NumberField>, n: i64) -> FieldElement {
        FieldElement::from_int(field, n)
    }

    fn shear(field: &Arc<NumberField>, cap: u32, sign: i64) -> CoordinateChange {
        // (x, y + sign * x^3)
        let x = TruncatedSeries::variable(field, 2, cap, 0);
        let mut y = TruncatedSeries::variable(field, 2, cap, 1);
        y.add_coeff(MultiIndex::new(vec![3, 0]), &int(field, sign));
        CoordinateChange::new(vec![x, y]).unwrap()
    }

    #[test]
    fn identity_substitution() {
        let f = NumberField::rationals();
        let id = CoordinateChange::identity(&f, 2, 4);
        let x = TruncatedSeries::variable(&f, 2, 4, 0);
        assert_eq!(substitute(&x, &id).unwrap(), x);
        assert!(id.is_identity());
    }

    #[test]
    fn substitute_picks_out_component() {
        let f = NumberField::rationals();
        let c = shear(&f, 4, -1);
        let y = TruncatedSeries::variable(&f, 2, 4, 1);
        let out = substitute(&y, &c).unwrap();
        let mut expect = TruncatedSeries::variable(&f, 2, 4, 1);
        expect.add_coeff(MultiIndex::new(vec![3, 0]), &int(&f, -1));
        assert_eq!(out, expect);
    }

    #[test]
    fn substitute_is_a_ring_morphism_on_example() {
        // (y - x^3) * y under (x, y + x^3) at cap 4: the first factor
        // becomes y, the second y + x^3, so the product is y^2 + x^3 y.
        let f = NumberField::rationals();
        let c = shear(&f, 4, 1);
        let y = TruncatedSeries::variable(&f, 2, 4, 1);
        let mut first = TruncatedSeries::variable(&f, 2, 4, 1);
        first.add_coeff(MultiIndex::new(vec![3, 0]), &int(&f, -1));
        let g = first.mul(&y);
        let out = substitute(&g, &c).unwrap();
        let mut expect = TruncatedSeries::zero(&f, 2, 4);
        expect.add_coeff(MultiIndex::new(vec![0, 2]), &int(&f, 1));
        expect.add_coeff(MultiIndex::new(vec![3, 1]), &int(&f, 1));
        assert_eq!(out, expect);
        let lhs = substitute(&first, &c).unwrap().mul(&substitute(&y, &c).unwrap());
        assert_eq!(out, lhs);
    }

    #[test]
    fn invert_triangular_shear() {
        let f = NumberField::rationals();
        let c = shear(&f, 4, -1);
        let inv = invert_change(&c);
        assert_eq!(inv, shear(&f, 4, 1));
        let comp = compose(&c, &inv).unwrap();
        assert!(comp.is_identity());
        let comp2 = compose(&inv, &c).unwrap();
        assert!(comp2.is_identity());
    }

    #[test]
    fn invert_identity_and_scaling() {
        let f = NumberField::rationals();
        let id = CoordinateChange::identity(&f, 2, 5);
        assert!(invert_change(&id).is_identity());

        let two_x = CoordinateChange::new(vec![TruncatedSeries::variable(&f, 1, 3, 0)
            .scale(&int(&f, 2))])
        .unwrap();
        let inv = invert_change(&two_x);
        let half = FieldElement::from_rational(
            &f,
            BigRational::new(BigInt::from(1), BigInt::from(2)),
        );
        assert_eq!(
            inv.components()[0],
            TruncatedSeries::variable(&f, 1, 3, 0).scale(&half)
        );
    }

    #[test]
    fn rejects_bad_changes() {
        let f = NumberField::rationals();
        let con = TruncatedSeries::constant(&f, 1, 3, int(&f, 1));
        assert_eq!(
            CoordinateChange::new(vec![con]).unwrap_err(),
            SeriesError::NonvanishingAtOrigin
        );
        let sq = TruncatedSeries::monomial(
            &f,
            1,
            3,
            MultiIndex::new(vec![2]),
            int(&f, 1),
        );
        assert_eq!(
            CoordinateChange::new(vec![sq]).unwrap_err(),
            SeriesError::NonInvertibleLinearPart
        );
    }

    #[test]
    fn pushforward_straightens_shear_flow() {
        // X = x d/dx + (2y + x^3) d/dy in coordinates (x, y - x^3) becomes
        // x d/dx + 2y d/dy.
        let f = NumberField::rationals();
        let mut second = TruncatedSeries::variable(&f, 2, 6, 1).scale(&int(&f, 2));
        second.add_coeff(MultiIndex::new(vec![3, 0]), &int(&f, 1));
        let x = VectorFieldJet::new(vec![
            TruncatedSeries::variable(&f, 2, 6, 0),
            second,
        ])
        .unwrap();
        let c = shear(&f, 6, -1);
        let out = pushforward(&x, &c).unwrap();
        let expect = VectorFieldJet::new(vec![
            TruncatedSeries::variable(&f, 2, 6, 0),
            TruncatedSeries::variable(&f, 2, 6, 1).scale(&int(&f, 2)),
        ])
        .unwrap();
        assert_eq!(out, expect);
    }

    #[test]
    fn pushforward_round_trip() {
        let f = NumberField::rationals();
        let mut second = TruncatedSeries::variable(&f, 2, 5, 1).scale(&int(&f, -1));
        second.add_coeff(MultiIndex::new(vec![2, 1]), &int(&f, 3));
        let x = VectorFieldJet::new(vec![
        TruncatedSeries::variable(&f, 2, 5, 0),
            second,
        ])
        .unwrap();
        let c = shear(&f, 5, 1);
        let there = pushforward(&x, &c).unwrap();
        let back = pushforward(&there, &invert_change(&c)).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn linear_scaling_leaves_euler_field_alone() {
        let f = NumberField::rationals();
        let euler = VectorFieldJet::new(vec![TruncatedSeries::variable(&f, 1, 4, 0)]).unwrap();
        let c = CoordinateChange::new(vec![TruncatedSeries::variable(&f, 1, 4, 0)
            .scale(&int(&f, 2))])
        .unwrap();
        let out = pushforward(&euler, &c).unwrap();
        assert_eq!(out, euler);
    }

    #[test]
    fn general_linear_change_round_trip() {
        let f = NumberField::gaussian();
        let i = crate::scalars::iota(&f).unwrap();
        // (x + i y, x - i y) with a cubic correction on the first slot.
        let mut c1 = TruncatedSeries::variable(&f, 2, 5, 0);
        c1.add_coeff(MultiIndex::unit(2, 1), &i);
        c1.add_coeff(MultiIndex::new(vec![1, 2]), &int(&f, 2));
        let mut c2 = TruncatedSeries::variable(&f, 2, 5, 0);
        c2.add_coeff(MultiIndex::unit(2, 1), &(-&i));
        let c = CoordinateChange::new(vec![c1, c2]).unwrap();
        assert!(compose(&c, &invert_change(&c)).unwrap().is_identity());
        assert!(compose(&invert_change(&c), &c).unwrap().is_identity());
    }
}
