//! Verification of the integrability hypotheses for a supplied family of
//! commuting rational fields and formal-product first integrals, plus a
//! bounded search for polynomial semi-invariants with a fixed constant
//! cofactor.

use std::sync::Arc;

use crate::linalg;
use crate::normalform::{validate_linear_part, LinearPart};
use crate::scalars::{FieldElement, NumberField};
use crate::series::{
    apply_derivation, lie_bracket, MultiIndex, TruncatedSeries, VectorFieldJet,
};
use crate::walcher::{cleared_log_sum, DarbouxFunction, IdentityCheck, SemiInvariant};

/// A vector field `Y′/F` with polynomial or truncated-series entries; the
/// denominator may have a nonzero constant term and is shared by all
/// components.
#[derive(Debug, Clone)]
pub struct RationalVectorField {
    numer: VectorFieldJet,
    denom: TruncatedSeries,
}

impl RationalVectorField {
    #[must_use]
    pub fn new(numer: VectorFieldJet, denom: TruncatedSeries) -> Self {
        assert_eq!(numer.dim(), denom.nvars(), "denominator dimension mismatch");
        assert!(
            numer.field().compatible(denom.field()),
            "numerator and denominator over different number fields"
        );
        assert!(!denom.is_zero(), "zero denominator");
        RationalVectorField { numer, denom }
    }

    #[must_use]
    pub fn polynomial(numer: VectorFieldJet) -> Self {
        let one = TruncatedSeries::constant(
            numer.field(),
            numer.dim(),
            numer.cap(),
            FieldElement::one(numer.field()),
        );
        RationalVectorField { numer, denom: one }
    }

    #[must_use]
    pub fn numer(&self) -> &VectorFieldJet {
        &self.numer
    }

    #[must_use]
    pub fn denom(&self) -> &TruncatedSeries {
        &self.denom
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        self.numer.dim()
    }

    #[must_use]
    pub fn field(&self) -> &Arc<NumberField> {
        self.numer.field()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// One checked pair; `left` and `right` index into the inputs of the check
/// that produced it. On failure `residual` names the lowest surviving term
/// of the cleared identity.
#[derive(Debug, Clone)]
pub struct PairCheck {
    pub left: usize,
    pub right: usize,
    pub check: IdentityCheck,
    pub residual: Option<String>,
}

#[derive(Debug, Clone)]
pub struct CommutingReport {
    pub pairs: Vec<PairCheck>,
    pub all_passed: bool,
}

/// The cleared bracket of `A/F` and `B/G` componentwise: the k-th entry is
/// `FG·[A,B]_k − F·A(G)·B_k + G·B(F)·A_k`, which vanishes exactly when the
/// rational fields commute. Exact for polynomial inputs whose cleared
/// products stay within the cap.
#[must_use]
pub fn commuting_residual(
    left: &RationalVectorField,
    right: &RationalVectorField,
    cap: u32,
) -> VectorFieldJet {
    assert_eq!(left.dim(), right.dim(), "field dimension mismatch");
    let a = left.numer().truncated(cap);
    let f = left.denom().truncated(cap);
    let b = right.numer().truncated(cap);
    let g = right.denom().truncated(cap);

    let ab = lie_bracket(&a, &b).expect("dimensions already checked");
    let ag = apply_derivation(&a, &g).expect("dimensions already checked");
    let bf = apply_derivation(&b, &f).expect("dimensions already checked");
    let fg = f.mul(&g);

    let comps = (0..a.dim())
        .map(|k| {
            fg.mul(ab.component(k))
                .sub(&f.mul(&ag).mul(b.component(k)))
                .add(&g.mul(&bf).mul(a.component(k)))
        })
        .collect();
    VectorFieldJet::new(comps).expect("componentwise arithmetic keeps shape")
}

pub fn check_commuting(fields: &[RationalVectorField], degree_bound: u32) -> CommutingReport {
    let mut pairs = Vec::new();
    for i in 0..fields.len() {
        for j in i + 1..fields.len() {
            let resid = commuting_residual(&fields[i], &fields[j], degree_bound);
            pairs.push(PairCheck {
                left: i,
                right: j,
                check: IdentityCheck {
                    passed: resid.is_zero(),
                    first_failure_degree: resid.order(),
                },
                residual: lowest_jet_term(&resid),
            });
        }
    }
    let all_passed = pairs.iter().all(|p| p.check.passed);
    CommutingReport { pairs, all_passed }
}

#[derive(Debug, Clone)]
pub struct FirstIntegralReport {
    pub pairs: Vec<PairCheck>,
    pub all_passed: bool,
}

/// The cleared derivative of a formal product along `Y = A/F`:
/// `Σ_k c_k·A(G_k)·∏_{l≠k} G_l`, which vanishes exactly when the product is
/// a first integral; the denominator drops out as a global unit of the
/// rational identity.
#[must_use]
pub fn integral_residual(
    y: &RationalVectorField,
    p: &DarbouxFunction,
    cap: u32,
) -> TruncatedSeries {
    assert_eq!(y.dim(), p.nvars(), "integral dimension mismatch");
    cleared_log_sum(&y.numer().truncated(cap), p, cap)
}

/// `Yᵢ(Pⱼ) = 0` for every field and every formal product, via
/// [`integral_residual`].
pub fn check_first_integrals(
    fields: &[RationalVectorField],
    integrals: &[DarbouxFunction],
    degree_bound: u32,
) -> FirstIntegralReport {
    let mut pairs = Vec::new();
    for (i, y) in fields.iter().enumerate() {
        for (j, p) in integrals.iter().enumerate() {
            let resid = integral_residual(y, p, degree_bound);
            let residual = resid
                .order()
                .map(|d| crate::series::render_series(&resid.graded_part(d)));
            pairs.push(PairCheck {
                left: i,
                right: j,
                check: IdentityCheck {
                    passed: resid.is_zero(),
                    first_failure_degree: resid.order(),
                },
                residual,
            });
        }
    }
    let all_passed = pairs.iter().all(|p| p.check.passed);
    FirstIntegralReport { pairs, all_passed }
}

fn lowest_jet_term(jet: &VectorFieldJet) -> Option<String> {
    let order = jet.order()?;
    let k = (0..jet.dim())
        .find(|&k| jet.component(k).order() == Some(order))
        .expect("some component attains the order");
    Some(format!(
        "component {}: {}",
        k + 1,
        crate::series::render_series(&jet.component(k).graded_part(order))
    ))
}

#[derive(Debug, Clone)]
pub struct IndependenceReport {
    pub witness: Option<Vec<FieldElement>>,
    pub integral_rank: usize,
    pub field_rank: usize,
    pub points_tried: usize,
    pub verdict: Verdict,
}

const SAMPLE_COORDS: [(i64, i64); 8] = [
    (1, 1),
    (-1, 1),
    (2, 1),
    (-2, 1),
    (1, 2),
    (-1, 2),
    (3, 1),
    (-3, 1),
];

/// Looks for a rational sample point where the cleared log-derivative rows
/// of the integrals reach full rank `q` and the evaluated field columns
/// reach full rank `p`. Sampling walks a fixed grid in shells of growing
/// coordinate height, skipping points on the zero set of any factor or
/// denominator, so reports are reproducible; exhausting the grid is
/// inconclusive rather than a failure, since independence can hide from
/// any finite sample.
pub fn check_independence(
    fields: &[RationalVectorField],
    integrals: &[DarbouxFunction],
) -> IndependenceReport {
    let n = fields
        .first()
        .map(RationalVectorField::dim)
        .or_else(|| integrals.first().map(DarbouxFunction::nvars))
        .expect("nothing to check");
    let field = fields
        .first()
        .map(|y| y.field().clone())
        .unwrap_or_else(|| integrals[0].factors()[0].0.field().clone());
    let p = fields.len();
    let q = integrals.len();

    let coords: Vec<FieldElement> = SAMPLE_COORDS
        .iter()
        .map(|&(num, den)| {
            &FieldElement::from_int(&field, num) / &FieldElement::from_int(&field, den)
        })
        .collect();

    let mut best_integral = 0usize;
    let mut best_field = 0usize;
    let mut tried = 0usize;

    for shell in 0..coords.len() {
        let mut index = vec![0usize; n];
        loop {
            if index.iter().copied().max() == Some(shell) {
                let point: Vec<FieldElement> =
                    index.iter().map(|&i| coords[i].clone()).collect();
                if !on_singular_locus(fields, integrals, &point) {
                    tried += 1;
                    let ir = integral_rank_at(integrals, &point, n, &field);
                    let fr = field_rank_at(fields, &point, n, &field);
                    best_integral = best_integral.max(ir);
                    best_field = best_field.max(fr);
                    if ir == q && fr == p {
                        return IndependenceReport {
                            witness: Some(point),
                            integral_rank: ir,
                            field_rank: fr,
                            points_tried: tried,
                            verdict: Verdict::Pass,
                        };
                    }
                }
            }
            let mut carry = 0;
            loop {
                if carry == n {
                    break;
                }
                index[carry] += 1;
                if index[carry] > shell {
                    index[carry] = 0;
                    carry += 1;
                } else {
                    break;
                }
            }
            if carry == n {
                break;
            }
        }
    }

    IndependenceReport {
        witness: None,
        integral_rank: best_integral,
        field_rank: best_field,
        points_tried: tried,
        verdict: Verdict::Inconclusive,
    }
}

fn on_singular_locus(
    fields: &[RationalVectorField],
    integrals: &[DarbouxFunction],
    point: &[FieldElement],
) -> bool {
    for y in fields {
        if y.denom().eval(point).is_zero() {
            return true;
        }
    }
    for p in integrals {
        for (g, _) in p.factors() {
            if g.eval(point).is_zero() {
                return true;
            }
        }
    }
    false
}

/// Rank of the q×n matrix whose j-th row is the cleared gradient
/// `Σ_k c_k·∇G_k·∏_{l≠k}G_l` evaluated at the point.
fn integral_rank_at(
    integrals: &[DarbouxFunction],
    point: &[FieldElement],
    n: usize,
    field: &Arc<NumberField>,
) -> usize {
    let mut rows = Vec::new();
    for p in integrals {
        let mut row = vec![FieldElement::zero(field); n];
        for (k, (gk, ck)) in p.factors().iter().enumerate() {
            let mut outer = ck.clone();
            for (l, (gl, _)) in p.factors().iter().enumerate() {
                if l != k {
                    outer = &outer * &gl.eval(point);
                }
            }
            for (col, slot) in row.iter_mut().enumerate() {
                let dg = gk.partial(col).eval(point);
                *slot = &*slot + &(&outer * &dg);
            }
        }
        rows.push(row);
    }
    linalg::rank(&rows)
}

/// Rank of the n×p matrix of evaluated numerators; denominators are
/// nonzero at the sample and only rescale columns.
fn field_rank_at(
    fields: &[RationalVectorField],
    point: &[FieldElement],
    n: usize,
    field: &Arc<NumberField>,
) -> usize {
    if fields.is_empty() {
        return 0;
    }
    let mut rows = vec![vec![FieldElement::zero(field); fields.len()]; n];
    for (col, y) in fields.iter().enumerate() {
        for row in 0..n {
            rows[row][col] = y.numer().component(row).eval(point);
        }
    }
    linalg::rank(&rows)
}

/// The combined verdict over all the hypotheses: `p` commuting fields and
/// `q = n − p` independent first integrals.
#[derive(Debug, Clone)]
pub struct IntegrabilityCertificate {
    pub p: usize,
    pub q: usize,
    pub commuting: CommutingReport,
    pub integrals: FirstIntegralReport,
    pub independence: IndependenceReport,
    pub verdict: Verdict,
}

/// Runs the three checks and merges them: any failed polynomial identity is
/// a definite failure, a missing independence witness alone degrades the
/// verdict to inconclusive.
pub fn integrability_certificate(
    fields: &[RationalVectorField],
    integrals: &[DarbouxFunction],
    degree_bound: u32,
) -> IntegrabilityCertificate {
    assert!(!fields.is_empty(), "at least one field is required");
    let n = fields[0].dim();
    assert_eq!(
        fields.len() + integrals.len(),
        n,
        "field and integral counts must split the dimension"
    );
    let commuting = check_commuting(fields, degree_bound);
    let integrals_report = check_first_integrals(fields, integrals, degree_bound);
    let independence = check_independence(fields, integrals);
    let verdict = if !commuting.all_passed || !integrals_report.all_passed {
        Verdict::Fail
    } else {
        independence.verdict
    };
    IntegrabilityCertificate {
        p: fields.len(),
        q: integrals.len(),
        commuting,
        integrals: integrals_report,
        independence,
        verdict,
    }
}

/// Searches for polynomial semi-invariants of degree at most `deg_g`. The
/// constant cofactor of any semi-invariant is a weight `⟨a, λ⟩` of some
/// exponent vector with `|a| ≤ deg_g`, so the search fixes each candidate
/// weight in turn, seeds the lowest slice with the matching eigenvectors
/// of the scalar action of the linear part, and continues degree by degree
/// through `degree_bound` by solving the linear slice equations with free
/// variables pinned to zero. Seeds with no continuation are dropped; every
/// returned pair is validated.
pub fn find_semi_invariants(
    x: &VectorFieldJet,
    deg_g: u32,
    degree_bound: u32,
) -> Vec<SemiInvariant> {
    assert!(deg_g >= 1 && deg_g <= degree_bound, "degree window is empty");
    assert!(degree_bound <= x.cap(), "degree bound exceeds the cap");
    let lin = validate_linear_part(x).expect("linear part must be Jordan split");
    let field = x.field().clone();
    let n = x.dim();
    let x_work = x.truncated(degree_bound);

    let mut candidates: Vec<FieldElement> = Vec::new();
    for d in 0..=deg_g {
        for a in MultiIndex::all_of_degree(n, d) {
            let w = crate::resonance::weight(&lin.diag, &a);
            if !candidates.contains(&w) {
                candidates.push(w);
            }
        }
    }
    candidates.sort_by(FieldElement::cmp_coords);

    let mut found = Vec::new();
    for c in &candidates {
        for r in 1..=deg_g {
            for seed in eigen_seeds(&lin, c, r, &field, n) {
                if let Some(si) = continue_seed(&x_work, &lin, c, &seed, deg_g, degree_bound) {
                    found.push(si);
                }
            }
        }
    }
    found
}

/// Kernel of (scalar action of the linear part − c) on the degree-`r`
/// monomial slice, returned as homogeneous series.
fn eigen_seeds(
    lin: &LinearPart,
    c: &FieldElement,
    r: u32,
    field: &Arc<NumberField>,
    n: usize,
) -> Vec<TruncatedSeries> {
    let basis = MultiIndex::all_of_degree(n, r);
    let lin_jet = lin.semisimple_jet(r).add(&lin.nilpotent_jet(r));
    let mut rows = vec![vec![FieldElement::zero(field); basis.len()]; basis.len()];
    for (col, a) in basis.iter().enumerate() {
        let mono =
            TruncatedSeries::monomial(field, n, r, a.clone(), FieldElement::one(field));
        let image = apply_derivation(&lin_jet, &mono).expect("dimensions match");
        for (row, b) in basis.iter().enumerate() {
            let mut entry = image.coeff(b);
            if row == col {
                entry = &entry - c;
            }
            rows[row][col] = entry;
        }
    }
    linalg::kernel(&rows, basis.len(), field)
        .into_iter()
        .map(|v| {
            let mut s = TruncatedSeries::zero(field, n, r);
            for (a, coeff) in basis.iter().zip(v) {
                s.add_coeff(a.clone(), &coeff);
            }
            s
        })
        .collect()
}

/// Extends a homogeneous seed slice to a polynomial semi-invariant and its
/// cofactor, or gives up at the first inconsistent slice equation.
fn continue_seed(
    x: &VectorFieldJet,
    lin: &LinearPart,
    c: &FieldElement,
    seed: &TruncatedSeries,
    deg_g: u32,
    degree_bound: u32,
) -> Option<SemiInvariant> {
    let field = x.field().clone();
    let n = x.dim();
    let r = seed.order().expect("seed slice is nonzero");
    let lin_jet = lin
        .semisimple_jet(degree_bound)
        .add(&lin.nilpotent_jet(degree_bound));

    let mut g = seed.truncated(degree_bound);
    let mut lam = TruncatedSeries::constant(&field, n, degree_bound, c.clone());
    let g_low = seed.graded_part(r).truncated(degree_bound);

    for d in 1..=(degree_bound - r) {
        let s = r + d;
        let g_basis = if s <= deg_g {
            MultiIndex::all_of_degree(n, s)
        } else {
            Vec::new()
        };
        let l_basis = MultiIndex::all_of_degree(n, d);
        let rows_basis = MultiIndex::all_of_degree(n, s);
        let ncols = g_basis.len() + l_basis.len();

        let residual = apply_derivation(x, &g)
            .expect("dimensions match")
            .sub(&lam.mul(&g))
            .graded_part(s);

        let mut rows = vec![vec![FieldElement::zero(&field); ncols]; rows_basis.len()];
        for (col, a) in g_basis.iter().enumerate() {
            let mono =
                TruncatedSeries::monomial(&field, n, s, a.clone(), FieldElement::one(&field));
            let image = apply_derivation(&lin_jet, &mono).expect("dimensions match");
            for (row, b) in rows_basis.iter().enumerate() {
                let mut entry = image.coeff(b);
                if b == a {
                    entry = &entry - c;
                }
                rows[row][col] = entry;
            }
        }
        for (col, a) in l_basis.iter().enumerate() {
            let mono =
                TruncatedSeries::monomial(&field, n, s, a.clone(), FieldElement::one(&field));
            let prod = mono.mul(&g_low);
            for (row, b) in rows_basis.iter().enumerate() {
                rows[row][g_basis.len() + col] = -&prod.coeff(b);
            }
        }
        let rhs: Vec<FieldElement> = rows_basis.iter().map(|b| -&residual.coeff(b)).collect();

        let solution = linalg::solve(&rows, &rhs, ncols, &field)?;
        for (a, value) in g_basis.iter().zip(&solution) {
            g.add_coeff(a.clone(), value);
        }
        for (a, value) in l_basis.iter().zip(&solution[g_basis.len()..]) {
            lam.add_coeff(a.clone(), value);
        }
    }

    SemiInvariant::new(x, g, lam).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resonance::weight;
    use crate::scalars::NumberField;

    fn int(field: &Arc<NumberField>, n: i64) -> FieldElement {
        FieldElement::from_int(field, n)
    }

    fn jet(comps: Vec<TruncatedSeries>) -> VectorFieldJet {
        VectorFieldJet::new(comps).unwrap()
    }

    fn saddle(field: &Arc<NumberField>, cap: u32) -> VectorFieldJet {
        let x1 = TruncatedSeries::variable(field, 2, cap, 0);
        let y1 = TruncatedSeries::variable(field, 2, cap, 1);
        jet(vec![x1, y1.neg()])
    }

    #[test]
    fn diagonal_pair_commutes() {
        let f = NumberField::rationals();
        let cap = 5;
        let x = RationalVectorField::polynomial(saddle(&f, cap));
        let x1 = TruncatedSeries::variable(&f, 2, cap, 0);
        let scaling = RationalVectorField::polynomial(jet(
            vec![x1, TruncatedSeries::zero(&f, 2, cap)],
        ));
        let report = check_commuting(&[x, scaling], cap);
        assert!(report.all_passed);
        assert_eq!(report.pairs.len(), 1);
    }

    #[test]
    fn rational_denominator_first_integral_commutes() {
        let f = NumberField::rationals();
        let cap = 6;
        let x = RationalVectorField::polynomial(saddle(&f, cap));
        let x1 = TruncatedSeries::variable(&f, 2, cap, 0);
        let y1 = TruncatedSeries::variable(&f, 2, cap, 1);
        let one = TruncatedSeries::constant(&f, 2, cap, int(&f, 1));
        let y = RationalVectorField::new(
            jet(vec![x1.clone(), TruncatedSeries::zero(&f, 2, cap)]),
            one.sub(&x1.mul(&y1)),
        );
        let report = check_commuting(&[x, y], cap);
        assert!(report.all_passed);
    }

    #[test]
    fn shear_does_not_commute_with_scaling() {
        let f = NumberField::rationals();
        let cap = 4;
        let x1 = TruncatedSeries::variable(&f, 2, cap, 0);
        let y1 = TruncatedSeries::variable(&f, 2, cap, 1);
        let scaling = RationalVectorField::polynomial(jet(
            vec![x1, TruncatedSeries::zero(&f, 2, cap)],
        ));
        let shear = RationalVectorField::polynomial(jet(
            vec![y1, TruncatedSeries::zero(&f, 2, cap)],
        ));
        let report = check_commuting(&[scaling, shear], cap);
        assert!(!report.all_passed);
        assert_eq!(report.pairs[0].check.first_failure_degree, Some(1));
    }

    #[test]
    fn product_integral_passes_and_euler_fails() {
        let f = NumberField::rationals();
        let cap = 5;
        let x1 = TruncatedSeries::variable(&f, 2, cap, 0);
        let y1 = TruncatedSeries::variable(&f, 2, cap, 1);
        let xy = DarbouxFunction::new(vec![(x1.mul(&y1), int(&f, 1))]);

        let sad = RationalVectorField::polynomial(saddle(&f, cap));
        let report = check_first_integrals(&[sad], &[xy.clone()], cap);
        assert!(report.all_passed);

        let euler = RationalVectorField::polynomial(jet(vec![x1, y1]));
        let report = check_first_integrals(&[euler], &[xy], cap);
        assert!(!report.all_passed);
        assert_eq!(report.pairs[0].check.first_failure_degree, Some(2));
    }

    #[test]
    fn independence_witness_at_the_first_grid_point() {
        let f = NumberField::rationals();
        let cap = 5;
        let x1 = TruncatedSeries::variable(&f, 2, cap, 0);
        let y1 = TruncatedSeries::variable(&f, 2, cap, 1);
        let sad = RationalVectorField::polynomial(saddle(&f, cap));
        let xy = DarbouxFunction::new(vec![(x1.mul(&y1), int(&f, 1))]);
        let report = check_independence(&[sad], &[xy]);
        assert_eq!(report.verdict, Verdict::Pass);
        assert_eq!(report.witness.unwrap(), vec![int(&f, 1), int(&f, 1)]);
        assert_eq!(report.integral_rank, 1);
        assert_eq!(report.field_rank, 1);
        assert_eq!(report.points_tried, 1);
    }

    #[test]
    fn dependent_integrals_stay_inconclusive() {
        let f = NumberField::rationals();
        let cap = 5;
        let x1 = TruncatedSeries::variable(&f, 2, cap, 0);
        let y1 = TruncatedSeries::variable(&f, 2, cap, 1);
        let xy = x1.mul(&y1);
        let p1 = DarbouxFunction::new(vec![(xy.clone(), int(&f, 1))]);
        let p2 = DarbouxFunction::new(vec![(xy.mul(&xy), int(&f, 1))]);
        let report = check_independence(&[], &[p1, p2]);
        assert_eq!(report.verdict, Verdict::Inconclusive);
        assert!(report.witness.is_none());
        assert_eq!(report.integral_rank, 1);
        assert!(report.points_tried > 1);
    }

    #[test]
    fn three_dimensional_split_passes() {
        let f = NumberField::rationals();
        let cap = 5;
        let x1 = TruncatedSeries::variable(&f, 3, cap, 0);
        let y1 = TruncatedSeries::variable(&f, 3, cap, 1);
        let z1 = TruncatedSeries::variable(&f, 3, cap, 2);
        let zero = TruncatedSeries::zero(&f, 3, cap);
        let sad = RationalVectorField::polynomial(jet(
            vec![x1.clone(), y1.clone().neg(), zero.clone()],
        ));
        let vertical =
            RationalVectorField::polynomial(jet(vec![zero.clone(), zero, z1]));
        let xy = DarbouxFunction::new(vec![(x1.mul(&y1), int(&f, 1))]);
        let cert = integrability_certificate(&[sad, vertical], &[xy], cap);
        assert_eq!(cert.p, 2);
        assert_eq!(cert.q, 1);
        assert_eq!(cert.verdict, Verdict::Pass);
        assert_eq!(cert.independence.field_rank, 2);
    }

    #[test]
    fn failing_identity_dominates_the_verdict() {
        let f = NumberField::rationals();
        let cap = 5;
        let x1 = TruncatedSeries::variable(&f, 2, cap, 0);
        let y1 = TruncatedSeries::variable(&f, 2, cap, 1);
        let euler = RationalVectorField::polynomial(jet(vec![x1.clone(), y1.clone()]));
        let xy = DarbouxFunction::new(vec![(x1.mul(&y1), int(&f, 1))]);
        let cert = integrability_certificate(&[euler], &[xy], cap);
        assert_eq!(cert.verdict, Verdict::Fail);
        assert!(cert.commuting.all_passed);
        assert!(!cert.integrals.all_passed);
    }

    #[test]
    fn shear_search_finds_the_two_polynomial_semi_invariants() {
        let f = NumberField::rationals();
        let cap = 6;
        let x1 = TruncatedSeries::variable(&f, 2, cap, 0);
        let y1 = TruncatedSeries::variable(&f, 2, cap, 1);
        let x = jet(
            vec![
                x1.clone(),
                y1.scale(&int(&f, 2)).add(&x1.mul(&x1)),
            ],
        );
        let found = find_semi_invariants(&x, 2, cap);
        assert_eq!(found.len(), 2);

        assert_eq!(found[0].function(), &x1.truncated(cap));
        assert_eq!(
            found[0].cofactor(),
            &TruncatedSeries::constant(&f, 2, cap, int(&f, 1))
        );
        assert_eq!(found[1].function(), &x1.mul(&x1).truncated(cap));
        assert_eq!(
            found[1].cofactor(),
            &TruncatedSeries::constant(&f, 2, cap, int(&f, 2))
        );
    }

    #[test]
    fn saddle_search_lists_weights_and_the_product_integral() {
        let f = NumberField::rationals();
        let cap = 5;
        let x = saddle(&f, cap);
        let found = find_semi_invariants(&x, 2, cap);
        assert_eq!(found.len(), 5);
        let lin = validate_linear_part(&x).unwrap();
        for si in &found {
            let lowest = si.function().graded_part(si.order());
            for (a, _) in lowest.terms() {
                assert_eq!(
                    weight(&lin.diag, a),
                    si.cofactor().coeff(&MultiIndex::zero(2))
                );
            }
        }
        let x1 = TruncatedSeries::variable(&f, 2, cap, 0);
        let y1 = TruncatedSeries::variable(&f, 2, cap, 1);
        let xy = x1.mul(&y1).truncated(cap);
        assert!(found
            .iter()
            .any(|si| si.function() == &xy && si.cofactor().is_zero()));
    }
}
