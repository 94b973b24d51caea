//! Degree-by-degree normalization of a vector-field jet whose linear part
//! is given in Jordan-split upper-triangular form, and the truncated
//! rotation generators the normalized field inherits from its semisimple
//! part.

use thiserror::Error;

use crate::resonance::{toric_decompose, weight, ToricDecomposition};
use crate::scalars::{iota, FieldElement};
use crate::series::{
    compose, invert_change, lie_bracket, pushforward, CoordinateChange, MultiIndex,
    TruncatedSeries, VectorFieldJet,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NormalFormError {
    #[error("vector field does not vanish at the origin")]
    NonvanishingAtOrigin,
    #[error("linear part is not upper triangular with a commuting diagonal/nilpotent split")]
    LinearPartNotJordanSplit,
    #[error("field does not designate a square root of -1")]
    MissingIota,
}

/// The Jordan split of a degree-1 slice: eigenvalues on the diagonal and a
/// strictly upper-triangular nilpotent remainder that commutes with the
/// diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearPart {
    pub diag: Vec<FieldElement>,
    pub nilp: Vec<Vec<FieldElement>>,
}

impl LinearPart {
    #[must_use]
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    #[must_use]
    pub fn has_nilpotent_part(&self) -> bool {
        self.nilp.iter().any(|row| row.iter().any(|e| !e.is_zero()))
    }

    /// The diagonal field `Σ λⱼ xⱼ ∂ⱼ` as a jet.
    #[must_use]
    pub fn semisimple_jet(&self, cap: u32) -> VectorFieldJet {
        VectorFieldJet::diagonal(self.diag[0].field(), &self.diag, cap)
    }

    /// The strictly triangular remainder as a jet.
    #[must_use]
    pub fn nilpotent_jet(&self, cap: u32) -> VectorFieldJet {
        let field = self.diag[0].field();
        let n = self.dim();
        let comps = (0..n)
            .map(|i| {
                let mut s = TruncatedSeries::zero(field, n, cap);
                for (j, entry) in self.nilp[i].iter().enumerate() {
                    s.add_coeff(MultiIndex::unit(n, j), entry);
                }
                s
            })
            .collect();
        VectorFieldJet::new(comps).expect("linear components are well formed")
    }
}

/// Splits the degree-1 slice of `x` into its Jordan components, insisting
/// on the shape the rest of the pipeline needs: origin fixed, matrix upper
/// triangular, and off-diagonal entries only between equal eigenvalues.
/// Nothing here computes a Jordan form; the input must already be one.
pub fn validate_linear_part(x: &VectorFieldJet) -> Result<LinearPart, NormalFormError> {
    if !x.vanishes_at_origin() {
        return Err(NormalFormError::NonvanishingAtOrigin);
    }
    let a = x.linear_matrix();
    let n = x.dim();
    let field = x.field();
    let mut diag = Vec::with_capacity(n);
    let mut nilp = vec![vec![FieldElement::zero(field); n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                diag.push(a[i][j].clone());
            } else if !a[i][j].is_zero() {
                if i > j {
                    return Err(NormalFormError::LinearPartNotJordanSplit);
                }
                nilp[i][j] = a[i][j].clone();
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if !nilp[i][j].is_zero() && diag[i] != diag[j] {
                return Err(NormalFormError::LinearPartNotJordanSplit);
            }
        }
    }
    Ok(LinearPart { diag, nilp })
}

/// Splits a graded slice `V` as `V = [X¹, U] + R` with `R` supported on
/// resonant monomials (`⟨a,λ⟩ = λⱼ`) and `U` on non-resonant ones.
///
/// On the non-resonant span, `ad` of the diagonal part acts by the nonzero
/// scalars `⟨a,λ⟩ − λⱼ` and `ad` of the nilpotent part is nilpotent and
/// commutes with it, so the inverse is the finite alternating series over
/// `ad_nilp` with scalar division at each step.
pub fn homological_solve(lin: &LinearPart, v: &VectorFieldJet) -> (VectorFieldJet, VectorFieldJet) {
    assert!(
        v.order().map_or(true, |o| o >= 2),
        "homological slices start at degree 2"
    );
    let field = lin.diag[0].field();
    let n = lin.dim();
    let cap = v.cap();

    let split = |w: &VectorFieldJet| -> (VectorFieldJet, VectorFieldJet) {
        let mut res_comps = Vec::with_capacity(n);
        let mut nonres_comps = Vec::with_capacity(n);
        for j in 0..n {
            let mut res = TruncatedSeries::zero(field, n, cap);
            let mut nonres = TruncatedSeries::zero(field, n, cap);
            for (a, c) in w.component(j).terms() {
                let eig = &weight(&lin.diag, a) - &lin.diag[j];
                if eig.is_zero() {
                    res.set_coeff(a.clone(), c.clone());
                } else {
                    nonres.set_coeff(a.clone(), c.clone());
                }
            }
            res_comps.push(res);
            nonres_comps.push(nonres);
        }
        (
            VectorFieldJet::new(res_comps).expect("split keeps shape"),
            VectorFieldJet::new(nonres_comps).expect("split keeps shape"),
        )
    };

    let inv_diag = |w: &VectorFieldJet| -> VectorFieldJet {
        let comps = (0..n)
            .map(|j| {
                let mut out = TruncatedSeries::zero(field, n, cap);
                for (a, c) in w.component(j).terms() {
                    let eig = &weight(&lin.diag, a) - &lin.diag[j];
                    let scaled = c / &eig;
                    out.set_coeff(a.clone(), scaled);
                }
                out
            })
            .collect();
        VectorFieldJet::new(comps).expect("division keeps shape")
    };

    let (r, v_nr) = split(v);
    if v_nr.is_zero() {
        return (VectorFieldJet::zero(field, n, cap), r);
    }
    let mut u = VectorFieldJet::zero(field, n, cap);
    let mut term = inv_diag(&v_nr);
    if lin.has_nilpotent_part() {
        let xn = lin.nilpotent_jet(cap);
        while !term.is_zero() {
            u = u.add(&term);
            let moved = lie_bracket(&xn, &term).expect("bracket of matching jets");
            term = inv_diag(&moved).neg();
        }
    } else {
        u = term;
    }
    (u, r)
}

/// Count of removed/retained degree-`k` terms at one normalization step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeDiagnostics {
    pub degree: u32,
    pub removed: usize,
    pub retained: usize,
}

/// Everything `normalize_to_degree` produces: the resonant-only jet, the
/// coordinate changes that got there, per-degree counts, and the weight
/// decomposition of the diagonal when the field supplies `ι`.
#[derive(Debug, Clone)]
pub struct NormalizationResult {
    pub normalized: VectorFieldJet,
    pub linear: LinearPart,
    pub steps: Vec<CoordinateChange>,
    pub composed: CoordinateChange,
    pub diagnostics: Vec<DegreeDiagnostics>,
    pub decomp: Option<ToricDecomposition>,
    pub degree_bound: u32,
}

/// Removes every non-resonant term of degree 2..=`degree_bound`, one degree
/// at a time, applying each coordinate change in full before the next
/// degree is inspected.
pub fn normalize_to_degree(
    x: &VectorFieldJet,
    degree_bound: u32,
) -> Result<NormalizationResult, NormalFormError> {
    assert!(degree_bound >= 2, "normalization starts at degree 2");
    assert!(
        degree_bound <= x.cap(),
        "degree bound exceeds the jet cap"
    );
    let lin = validate_linear_part(x)?;
    let field = x.field();
    let n = x.dim();
    let decomp = match toric_decompose(&lin.diag) {
        Ok(d) => Some(d),
        Err(_) => None,
    };

    let mut current = x.truncated(degree_bound);
    let mut steps = Vec::new();
    let mut composed = CoordinateChange::identity(field, n, degree_bound);
    let mut diagnostics = Vec::new();

    for k in 2..=degree_bound {
        let slice = current.graded_slice(k);
        let (u, r) = homological_solve(&lin, &slice);
        let removed: usize = (0..n)
            .map(|j| slice.component(j).term_count() - r.component(j).term_count())
            .sum();
        let retained: usize = (0..n).map(|j| r.component(j).term_count()).sum();
        diagnostics.push(DegreeDiagnostics {
            degree: k,
            removed,
            retained,
        });
        if u.is_zero() {
            continue;
        }
        let comps = (0..n)
            .map(|j| {
                TruncatedSeries::variable(field, n, degree_bound, j).sub(u.component(j))
            })
            .collect();
        let change = CoordinateChange::new(comps).expect("near-identity change is valid");
        current = pushforward(&current, &change).expect("pushforward of matching jets");
        composed = compose(&change, &composed).expect("chain composition");
        steps.push(change);
    }

    Ok(NormalizationResult {
        normalized: current,
        linear: lin,
        steps,
        composed,
        diagnostics,
        decomp,
        degree_bound,
    })
}

/// The truncated rotation generators in the original coordinates.
#[derive(Debug, Clone)]
pub struct TruncatedTorusGenerators {
    pub order: u32,
    pub generators: Vec<VectorFieldJet>,
}

/// Carries the diagonal integer-weight generators `ι Σⱼ ρᵢⱼ xⱼ ∂ⱼ` back
/// through the normalization chain, truncated at order `m`. Generators for
/// two orders agree through the smaller order because the chains do.
pub fn torus_generators_truncated(
    res: &NormalizationResult,
    m: u32,
) -> Result<TruncatedTorusGenerators, NormalFormError> {
    assert!(m >= 2 && m <= res.degree_bound, "order must lie in 2..=degree bound");
    let Some(decomp) = &res.decomp else {
        return Err(NormalFormError::MissingIota);
    };
    let field = res.normalized.field();
    let i = iota(field).expect("decomposition implies iota");
    let back = invert_change(&res.composed);
    let mut generators = Vec::with_capacity(decomp.tau);
    for row in &decomp.rhos {
        let weights: Vec<FieldElement> = row
            .iter()
            .map(|r| {
                let as_field = FieldElement::from_rational(
                    field,
                    num_rational::BigRational::from(r.clone()),
                );
                &as_field * &i
            })
            .collect();
        let diag = VectorFieldJet::diagonal(field, &weights, m);
        let pulled = pushforward(&diag, &back).expect("chain inverse transport");
        generators.push(pulled.truncated(m));
    }
    Ok(TruncatedTorusGenerators {
        order: m,
        generators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::NumberField;
    use std::sync::Arc;

    fn int(field: &Arc<NumberField>, n: i64) -> FieldElement {
        FieldElement::from_int(field, n)
    }

    fn linear_jet(field: &Arc<NumberField>, rows: &[&[i64]], cap: u32) -> VectorFieldJet {
        let n = rows.len();
        let comps = rows
            .iter()
            .map(|row| {
                let mut s = TruncatedSeries::zero(field, n, cap);
                for (j, &e) in row.iter().enumerate() {
                    s.add_coeff(MultiIndex::unit(n, j), &int(field, e));
                }
                s
            })
            .collect();
        VectorFieldJet::new(comps).unwrap()
    }

    #[test]
    fn validate_diagonal_and_jordan_block() {
        let f = NumberField::rationals();
        let d = validate_linear_part(&linear_jet(&f, &[&[1, 0], &[0, 2]], 4)).unwrap();
        assert_eq!(d.diag, vec![int(&f, 1), int(&f, 2)]);
        assert!(!d.has_nilpotent_part());

        let jb = validate_linear_part(&linear_jet(&f, &[&[1, 1], &[0, 1]], 4)).unwrap();
        assert_eq!(jb.diag, vec![int(&f, 1), int(&f, 1)]);
        assert_eq!(jb.nilp[0][1], int(&f, 1));
        assert!(jb.has_nilpotent_part());
    }

    #[test]
    fn validate_rejects_coupled_distinct_eigenvalues() {
        let f = NumberField::rationals();
        assert_eq!(
            validate_linear_part(&linear_jet(&f, &[&[1, 1], &[0, 2]], 4)).unwrap_err(),
            NormalFormError::LinearPartNotJordanSplit
        );
        assert_eq!(
            validate_linear_part(&linear_jet(&f, &[&[1, 0], &[1, 1]], 4)).unwrap_err(),
            NormalFormError::LinearPartNotJordanSplit
        );
    }

    #[test]
    fn validate_rejects_affine_field() {
        let f = NumberField::rationals();
        let mut c = TruncatedSeries::variable(&f, 1, 3, 0);
        c.add_coeff(MultiIndex::zero(1), &int(&f, 1));
        let x = VectorFieldJet::new(vec![c]).unwrap();
        assert_eq!(
            validate_linear_part(&x).unwrap_err(),
            NormalFormError::NonvanishingAtOrigin
        );
    }

    fn mono_field(
        field: &Arc<NumberField>,
        n: usize,
        cap: u32,
        exps: &[u32],
        comp: usize,
        c: i64,
    ) -> VectorFieldJet {
        let mut comps: Vec<TruncatedSeries> =
            (0..n).map(|_| TruncatedSeries::zero(field, n, cap)).collect();
        comps[comp].set_coeff(MultiIndex::new(exps.to_vec()), int(field, c));
        VectorFieldJet::new(comps).unwrap()
    }

    #[test]
    fn homological_solve_diagonal_cases() {
        let f = NumberField::rationals();
        let lin = LinearPart {
            diag: vec![int(&f, 1), int(&f, 2)],
            nilp: vec![vec![FieldElement::zero(&f); 2]; 2],
        };
        // x^3 d/dy has eigenvalue 3 - 2 = 1.
        let v = mono_field(&f, 2, 4, &[3, 0], 1, 1);
        let (u, r) = homological_solve(&lin, &v);
        assert_eq!(u, v);
        assert!(r.is_zero());
        // x^2 d/dy is resonant.
        let v2 = mono_field(&f, 2, 4, &[2, 0], 1, 1);
        let (u2, r2) = homological_solve(&lin, &v2);
        assert!(u2.is_zero());
        assert_eq!(r2, v2);
    }

    #[test]
    fn homological_solve_with_nilpotent_correction() {
        let f = NumberField::rationals();
        let lin = LinearPart {
            diag: vec![int(&f, 1), int(&f, 1)],
            nilp: vec![
                vec![FieldElement::zero(&f), int(&f, 1)],
                vec![FieldElement::zero(&f), FieldElement::zero(&f)],
            ],
        };
        let v = mono_field(&f, 2, 4, &[2, 0], 0, 1);
        let (u, r) = homological_solve(&lin, &v);
        assert!(r.is_zero());
        // U = (x^2 - 2xy + 2y^2) d/dx.
        let mut expect_c = TruncatedSeries::zero(&f, 2, 4);
        expect_c.set_coeff(MultiIndex::new(vec![2, 0]), int(&f, 1));
        expect_c.set_coeff(MultiIndex::new(vec![1, 1]), int(&f, -2));
        expect_c.set_coeff(MultiIndex::new(vec![0, 2]), int(&f, 2));
        let expect =
            VectorFieldJet::new(vec![expect_c, TruncatedSeries::zero(&f, 2, 4)]).unwrap();
        assert_eq!(u, expect);
        // Defining identity: V = [X1, U] + R.
        let x1 = lin.semisimple_jet(4).add(&lin.nilpotent_jet(4));
        let back = lie_bracket(&x1, &u).unwrap().add(&r);
        assert_eq!(back, v);
    }

    fn shear_example(field: &Arc<NumberField>, cap: u32) -> VectorFieldJet {
        // x d/dx + (2y + x^3) d/dy
        let mut second = TruncatedSeries::variable(field, 2, cap, 1).scale(&int(field, 2));
        second.add_coeff(MultiIndex::new(vec![3, 0]), &int(field, 1));
        VectorFieldJet::new(vec![TruncatedSeries::variable(field, 2, cap, 0), second]).unwrap()
    }

    #[test]
    fn normalize_removes_cubic_shear() {
        let f = NumberField::rationals();
        let x = shear_example(&f, 4);
        let res = normalize_to_degree(&x, 4).unwrap();
        let expect = VectorFieldJet::new(vec![
            TruncatedSeries::variable(&f, 2, 4, 0),
            TruncatedSeries::variable(&f, 2, 4, 1).scale(&int(&f, 2)),
        ])
        .unwrap();
        assert_eq!(res.normalized, expect);
        assert_eq!(res.steps.len(), 1);
        // The single step is y' = y - x^3.
        let step = &res.steps[0];
        assert_eq!(step.component(0), &TruncatedSeries::variable(&f, 2, 4, 0));
        let mut shear = TruncatedSeries::variable(&f, 2, 4, 1);
        shear.add_coeff(MultiIndex::new(vec![3, 0]), &int(&f, -1));
        assert_eq!(step.component(1), &shear);
        // Conjugacy through the composed chain.
        let moved = pushforward(&x.truncated(4), &res.composed).unwrap();
        assert_eq!(moved, res.normalized);
        let diag3 = res.diagnostics.iter().find(|d| d.degree == 3).unwrap();
        assert_eq!((diag3.removed, diag3.retained), (1, 0));
    }

    #[test]
    fn resonant_input_is_a_fixed_point() {
        let f = NumberField::rationals();
        let mut second = TruncatedSeries::variable(&f, 2, 4, 1).scale(&int(&f, 2));
        second.add_coeff(MultiIndex::new(vec![2, 0]), &int(&f, 1));
        let x = VectorFieldJet::new(vec![
            TruncatedSeries::variable(&f, 2, 4, 0),
            second,
        ])
        .unwrap();
        let res = normalize_to_degree(&x, 4).unwrap();
        assert_eq!(res.normalized, x.truncated(4));
        assert!(res.steps.is_empty());
        assert!(res.composed.is_identity());
        let diag2 = res.diagnostics.iter().find(|d| d.degree == 2).unwrap();
        assert_eq!((diag2.removed, diag2.retained), (0, 1));
    }

    #[test]
    fn one_dimensional_nonresonant_flow_linearizes() {
        let f = NumberField::rationals();
        let mut c = TruncatedSeries::variable(&f, 1, 3, 0);
        c.add_coeff(MultiIndex::new(vec![2]), &int(&f, 1));
        let x = VectorFieldJet::new(vec![c]).unwrap();
        let res = normalize_to_degree(&x, 3).unwrap();
        let expect = VectorFieldJet::new(vec![TruncatedSeries::variable(&f, 1, 3, 0)]).unwrap();
        assert_eq!(res.normalized, expect);
        let moved = pushforward(&x.truncated(3), &res.composed).unwrap();
        assert_eq!(moved, res.normalized);
    }

    #[test]
    fn normalized_terms_are_all_resonant() {
        let f = NumberField::rationals();
        // A saddle with assorted junk in degrees 2 and 3.
        let mut c1 = TruncatedSeries::variable(&f, 2, 5, 0);
        c1.add_coeff(MultiIndex::new(vec![2, 0]), &int(&f, 3));
        c1.add_coeff(MultiIndex::new(vec![2, 1]), &int(&f, 1));
        let mut c2 = TruncatedSeries::variable(&f, 2, 5, 1).neg();
        c2.add_coeff(MultiIndex::new(vec![0, 2]), &int(&f, -2));
        c2.add_coeff(MultiIndex::new(vec![1, 1]), &int(&f, 5));
        let x = VectorFieldJet::new(vec![c1, c2]).unwrap();
        let res = normalize_to_degree(&x, 5).unwrap();
        let lam = &res.linear.diag;
        for j in 0..2 {
            for (a, _) in res.normalized.component(j).terms() {
                if a.degree() < 2 {
                    continue;
                }
                assert_eq!(weight(lam, a), lam[j], "non-resonant term survived");
            }
        }
        let moved = pushforward(&x.truncated(5), &res.composed).unwrap();
        assert_eq!(moved, res.normalized);
        let xs = res.linear.semisimple_jet(5);
        assert!(lie_bracket(&xs, &res.normalized).unwrap().is_zero());
    }

    #[test]
    fn torus_generator_of_shear_is_iota_x() {
        let f = NumberField::gaussian();
        let x = shear_example(&f, 4);
        let res = normalize_to_degree(&x, 4).unwrap();
        let decomp = res.decomp.as_ref().unwrap();
        assert_eq!(decomp.tau, 1);
        let gens = torus_generators_truncated(&res, 4).unwrap();
        assert_eq!(gens.generators.len(), 1);
        let i = iota(&f).unwrap();
        let expect = x.truncated(4).scale(&i);
        assert_eq!(gens.generators[0], expect);
        // Preservation: bracket with the input has nothing through degree 4.
        let br = lie_bracket(&gens.generators[0], &x).unwrap();
        assert!(br.truncated(4).is_zero());
    }

    #[test]
    fn torus_generators_stable_across_orders() {
        let f = NumberField::gaussian();
        let x = shear_example(&f, 6);
        let res = normalize_to_degree(&x, 6).unwrap();
        let g4 = torus_generators_truncated(&res, 4).unwrap();
        let g6 = torus_generators_truncated(&res, 6).unwrap();
        for (a, b) in g4.generators.iter().zip(&g6.generators) {
            assert_eq!(a.truncated(4), b.truncated(4));
        }
    }

    #[test]
    fn generators_reconstruct_semisimple_part() {
        let f = NumberField::gaussian();
        let x = shear_example(&f, 4);
        let res = normalize_to_degree(&x, 4).unwrap();
        let decomp = res.decomp.as_ref().unwrap();
        // In normalized coordinates the generators are diagonal and the
        // gamma-weighted sum recovers the semisimple part exactly.
        let i = iota(&f).unwrap();
        let mut acc = VectorFieldJet::zero(&f, 2, 4);
        for (g, row) in decomp.gammas.iter().zip(&decomp.rhos) {
            let weights: Vec<FieldElement> = row
                .iter()
                .map(|r| {
                    let fe = FieldElement::from_rational(
                        &f,
                        num_rational::BigRational::from(r.clone()),
                    );
                    &(&fe * &i) * g
                })
                .collect();
            acc = acc.add(&VectorFieldJet::diagonal(&f, &weights, 4));
        }
        assert_eq!(acc, res.linear.semisimple_jet(4));
    }

    #[test]
    fn torus_generators_need_iota() {
        let f = NumberField::rationals();
        let x = shear_example(&f, 4);
        let res = normalize_to_degree(&x, 4).unwrap();
        assert!(res.decomp.is_none());
        assert_eq!(
            torus_generators_truncated(&res, 4).unwrap_err(),
            NormalFormError::MissingIota
        );
    }
}
