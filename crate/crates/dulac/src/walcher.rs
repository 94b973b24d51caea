//! Renormalization of semi-invariants so their cofactors commute with the
//! semisimple linear part, and the conservation checks for Darboux-type
//! first integrals and rational commutants that build on it.

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::darboux::RationalVectorField;
use crate::normalform::validate_linear_part;
use crate::resonance::{toric_decompose, weight, ToricDecomposition};
use crate::scalars::{iota, FieldElement};
use crate::series::{
    apply_derivation, exact_quotient, lie_bracket, MultiIndex, TruncatedSeries, VectorFieldJet,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WalcherError {
    #[error("vector field is not in normal form through the working degree")]
    NotInNormalForm,
    #[error("declared cofactor does not satisfy X(F) = lambda*F through the working degree")]
    NotASemiInvariant,
    #[error("lowest slice of the renormalized function mixes torus weights")]
    MixedTorusWeights,
    #[error("the factors do not satisfy the cleared first-integral identity")]
    NotAFirstIntegral,
    #[error("factor {index} is not divisible into its derivative through the working degree")]
    FactorNotSemiInvariant { index: usize },
    #[error("the cleared commutation identity fails")]
    NotCommuting,
    #[error("denominator is not a semi-invariant through the working degree")]
    DenominatorNotSemiInvariant,
}

/// A function `F` with nonzero lowest slice together with a cofactor
/// `lambda` satisfying `X(F) = lambda*F`. The identity is checked against
/// the supplied field at construction time, through the shared cap.
#[derive(Debug, Clone)]
pub struct SemiInvariant {
    f: TruncatedSeries,
    cofactor: TruncatedSeries,
}

impl SemiInvariant {
    pub fn new(
        x: &VectorFieldJet,
        f: TruncatedSeries,
        cofactor: TruncatedSeries,
    ) -> Result<SemiInvariant, WalcherError> {
        assert_eq!(f.nvars(), x.dim(), "function dimension mismatch");
        assert_eq!(cofactor.nvars(), x.dim(), "cofactor dimension mismatch");
        assert!(
            f.field().compatible(x.field()) && cofactor.field().compatible(x.field()),
            "mismatched number fields"
        );
        if f.is_zero() {
            return Err(WalcherError::NotASemiInvariant);
        }
        let derived = apply_derivation(x, &f).expect("dimensions already checked");
        if derived != cofactor.mul(&f) {
            return Err(WalcherError::NotASemiInvariant);
        }
        Ok(SemiInvariant { f, cofactor })
    }

    #[must_use]
    pub fn function(&self) -> &TruncatedSeries {
        &self.f
    }

    #[must_use]
    pub fn cofactor(&self) -> &TruncatedSeries {
        &self.cofactor
    }

    /// Degree of the lowest nonzero slice.
    #[must_use]
    pub fn order(&self) -> u32 {
        self.f.order().expect("nonzero by construction")
    }
}

/// Output of the cofactor renormalization. `beta` is the truncated product
/// of the per-degree unit factors, which are kept in `factors` for
/// inspection; `torus_weights` and `torus_cofactors` are present whenever
/// the scalar field contains ι.
#[derive(Debug, Clone)]
pub struct WalcherResult {
    pub beta: TruncatedSeries,
    pub factors: Vec<TruncatedSeries>,
    pub f_star: TruncatedSeries,
    pub lambda_star: TruncatedSeries,
    pub lambda0: FieldElement,
    pub torus_weights: Option<Vec<BigInt>>,
    pub torus_cofactors: Option<Vec<FieldElement>>,
}

/// Multiplies the semi-invariant by unit factors `1 + beta_k`, degree by
/// degree, until every slice of the cofactor is supported on weight-zero
/// monomials. Each `beta_k` solves the degree-`k` linear equation given by
/// the full linear part: the diagonal is inverted monomial-wise and the
/// nilpotent remainder is folded in by the alternating iteration, mirroring
/// the homological solve for vector fields. Inverting the diagonal alone
/// would leave nilpotent cross terms in the renormalized cofactor.
pub fn walcher_normalize(
    x: &VectorFieldJet,
    si: &SemiInvariant,
    degree_bound: u32,
) -> Result<WalcherResult, WalcherError> {
    let n = x.dim();
    let field = x.field().clone();
    assert!(degree_bound >= 1, "degree bound below one");
    assert!(
        degree_bound <= x.cap()
            && degree_bound <= si.function().cap()
            && degree_bound <= si.cofactor().cap(),
        "degree bound exceeds a cap"
    );

    let lin = validate_linear_part(x).map_err(|_| WalcherError::NotInNormalForm)?;
    let xs = lin.semisimple_jet(x.cap());
    let bracket = lie_bracket(&xs, x).expect("dimensions already checked");
    if !bracket.truncated(degree_bound).is_zero() {
        return Err(WalcherError::NotInNormalForm);
    }

    let x_work = x.truncated(degree_bound);
    let xn = lin.nilpotent_jet(degree_bound);
    let mut f = si.function().truncated(degree_bound);
    let mut lam = si.cofactor().truncated(degree_bound);

    let derived = apply_derivation(&x_work, &f).expect("dimensions already checked");
    if derived != lam.mul(&f) {
        return Err(WalcherError::NotASemiInvariant);
    }

    let lambda0 = lam.coeff(&MultiIndex::zero(n));
    let one = TruncatedSeries::constant(&field, n, degree_bound, FieldElement::one(&field));
    let mut beta = one.clone();
    let mut factors = Vec::new();

    for k in 1..=degree_bound {
        let slice = lam.graded_part(k);
        let mut nonres = TruncatedSeries::zero(&field, n, degree_bound);
        for (a, c) in slice.terms() {
            if !weight(&lin.diag, a).is_zero() {
                nonres.set_coeff(a.clone(), c.clone());
            }
        }
        if nonres.is_zero() {
            continue;
        }

        let mut term = weight_divide(&lin.diag, &nonres).neg();
        let mut beta_k = TruncatedSeries::zero(&field, n, degree_bound);
        while !term.is_zero() {
            beta_k = beta_k.add(&term);
            let pushed = apply_derivation(&xn, &term).expect("dimensions already checked");
            term = weight_divide(&lin.diag, &pushed).neg();
        }

        let u = one.add(&beta_k);
        let u_inv = crate::series::unit_inverse(&u).expect("unit by construction");
        let du = apply_derivation(&x_work, &beta_k).expect("dimensions already checked");
        f = u.mul(&f);
        lam = lam.add(&du.mul(&u_inv));
        beta = beta.mul(&u);
        factors.push(beta_k);
    }

    let (torus_weights, torus_cofactors) = if field.has_iota() {
        let decomp = toric_decompose(&lin.diag).expect("iota present");
        let (w, cof) = torus_weight_split(&decomp, &f)?;
        (Some(w), Some(cof))
    } else {
        (None, None)
    };

    Ok(WalcherResult {
        beta,
        factors,
        f_star: f,
        lambda_star: lam,
        lambda0,
        torus_weights,
        torus_cofactors,
    })
}

/// Weight of the renormalized function under each rotation generator,
/// read off its lowest slice: `λ^{(0)i} = ι·⟨a, ρᵢ⟩` for the common
/// exponent class `a`. The weights reconstruct the constant cofactor as
/// `Σᵢ γᵢ λ^{(0)i}`.
pub fn torus_cofactor_split(
    decomp: &ToricDecomposition,
    res: &WalcherResult,
) -> Result<Vec<FieldElement>, WalcherError> {
    torus_weight_split(decomp, &res.f_star).map(|(_, cof)| cof)
}

fn torus_weight_split(
    decomp: &ToricDecomposition,
    f_star: &TruncatedSeries,
) -> Result<(Vec<BigInt>, Vec<FieldElement>), WalcherError> {
    let field = f_star.field();
    let r = f_star.order().expect("renormalized function is nonzero");
    let slice = f_star.graded_part(r);
    let mut common: Option<Vec<BigInt>> = None;
    for (a, _) in slice.terms() {
        let w: Vec<BigInt> = decomp.rhos.iter().map(|row| index_weight(a, row)).collect();
        match &common {
            None => common = Some(w),
            Some(prev) if *prev == w => {}
            Some(_) => return Err(WalcherError::MixedTorusWeights),
        }
    }
    let w = common.expect("nonzero slice has at least one term");
    let i = iota(field).expect("decomposition requires iota");
    let cof = w
        .iter()
        .map(|wi| &i * &FieldElement::from_rational(field, BigRational::from(wi.clone())))
        .collect();
    Ok((w, cof))
}

fn index_weight(a: &MultiIndex, row: &[BigInt]) -> BigInt {
    a.exponents()
        .iter()
        .zip(row)
        .fold(BigInt::from(0), |acc, (&e, r)| acc + BigInt::from(e) * r)
}

fn weight_divide(diag: &[FieldElement], s: &TruncatedSeries) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(s.field(), s.nvars(), s.cap());
    for (a, c) in s.terms() {
        let w = weight(diag, a);
        out.set_coeff(a.clone(), c / &w);
    }
    out
}

/// A formal product `∏ Gⱼ^{cⱼ}` kept as its factor list; the product is
/// never expanded and every identity involving it is stated through
/// log-derivatives with cleared denominators.
#[derive(Debug, Clone)]
pub struct DarbouxFunction {
    factors: Vec<(TruncatedSeries, FieldElement)>,
}

impl DarbouxFunction {
    #[must_use]
    pub fn new(factors: Vec<(TruncatedSeries, FieldElement)>) -> Self {
        assert!(!factors.is_empty(), "a formal product needs a factor");
        let n = factors[0].0.nvars();
        for (g, c) in &factors {
            assert_eq!(g.nvars(), n, "factor dimension mismatch");
            assert!(!g.is_zero(), "zero factor in a formal product");
            assert!(
                g.field().compatible(c.field()),
                "exponent outside the factor's number field"
            );
        }
        DarbouxFunction { factors }
    }

    #[must_use]
    pub fn factors(&self) -> &[(TruncatedSeries, FieldElement)] {
        &self.factors
    }

    #[must_use]
    pub fn nvars(&self) -> usize {
        self.factors[0].0.nvars()
    }
}

/// Outcome of a single series identity: `first_failure_degree` is the
/// lowest degree of the residual when the identity does not hold, `None`
/// when it could not even be stated (for instance a missing constant
/// cofactor).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub passed: bool,
    pub first_failure_degree: Option<u32>,
}

impl IdentityCheck {
    fn of_series(resid: &TruncatedSeries) -> Self {
        IdentityCheck {
            passed: resid.is_zero(),
            first_failure_degree: resid.order(),
        }
    }

    fn of_jet(resid: &VectorFieldJet) -> Self {
        IdentityCheck {
            passed: resid.is_zero(),
            first_failure_degree: resid.order(),
        }
    }

    fn unstated() -> Self {
        IdentityCheck {
            passed: false,
            first_failure_degree: None,
        }
    }
}

/// Per-identity verdicts for a Darboux-type first integral against the
/// semisimple part and the rotation generators.
#[derive(Debug, Clone)]
pub struct ConservationReport {
    pub cofactors: Vec<TruncatedSeries>,
    pub cofactor_sum: IdentityCheck,
    pub constant_sum: IdentityCheck,
    pub semisimple_integral: IdentityCheck,
    pub torus_integrals: Vec<IdentityCheck>,
    pub all_passed: bool,
}

/// Checks the conservation identities for `P = ∏ Gⱼ^{cⱼ}` with `X(P) = 0`:
/// each factor divides its derivative, the weighted cofactor sums vanish,
/// and the cleared log-derivative sums against the semisimple part and
/// each rotation generator vanish. The torus identities can genuinely fail
/// for irrational exponents, so they are verdicts rather than errors: the
/// weighted integer factor weights only cancel against rational exponent
/// combinations.
pub fn verify_darboux_conservation(
    x: &VectorFieldJet,
    p: &DarbouxFunction,
    decomp: &ToricDecomposition,
    degree_bound: u32,
) -> Result<ConservationReport, WalcherError> {
    assert_eq!(p.nvars(), x.dim(), "product dimension mismatch");
    assert!(degree_bound <= x.cap(), "degree bound exceeds the field cap");

    let lin = validate_linear_part(x).map_err(|_| WalcherError::NotInNormalForm)?;
    let xs = lin.semisimple_jet(degree_bound);
    let bracket = lie_bracket(&lin.semisimple_jet(x.cap()), x).expect("dimensions already checked");
    if !bracket.truncated(degree_bound).is_zero() {
        return Err(WalcherError::NotInNormalForm);
    }

    let x_work = x.truncated(degree_bound);
    let field = x.field().clone();

    let integral_resid = cleared_log_sum(&x_work, p, degree_bound);
    if !integral_resid.is_zero() {
        return Err(WalcherError::NotAFirstIntegral);
    }

    let mut cofactors = Vec::new();
    for (j, (g, _)) in p.factors().iter().enumerate() {
        let gw = g.truncated(degree_bound);
        let dg = apply_derivation(&x_work, &gw).expect("dimensions already checked");
        match exact_quotient(&dg, &gw) {
            Some(lam) => cofactors.push(lam),
            None => return Err(WalcherError::FactorNotSemiInvariant { index: j + 1 }),
        }
    }

    let mut weighted = TruncatedSeries::zero(&field, x.dim(), degree_bound);
    let mut constant = FieldElement::zero(&field);
    for (lam, (_, c)) in cofactors.iter().zip(p.factors()) {
        weighted = weighted.add(&lam.scale(c));
        constant = &constant + &(c * &lam.coeff(&MultiIndex::zero(x.dim())));
    }
    let cofactor_sum = IdentityCheck::of_series(&weighted);
    let constant_sum = IdentityCheck {
        passed: constant.is_zero(),
        first_failure_degree: if constant.is_zero() { None } else { Some(0) },
    };

    let semisimple_integral = IdentityCheck::of_series(&cleared_log_sum(&xs, p, degree_bound));

    let i = iota(&field).expect("decomposition requires iota");
    let mut torus_integrals = Vec::new();
    for row in &decomp.rhos {
        let z = rotation_generator(&field, row, &i, degree_bound);
        torus_integrals.push(IdentityCheck::of_series(&cleared_log_sum(
            &z,
            p,
            degree_bound,
        )));
    }

    let all_passed = cofactor_sum.passed
        && constant_sum.passed
        && semisimple_integral.passed
        && torus_integrals.iter().all(|c| c.passed);

    Ok(ConservationReport {
        cofactors,
        cofactor_sum,
        constant_sum,
        semisimple_integral,
        torus_integrals,
        all_passed,
    })
}

/// Per-identity verdicts for a rational commutant `Y = Y′/F` against the
/// rotation generators.
#[derive(Debug, Clone)]
pub struct CommutantReport {
    pub denominator_cofactor: TruncatedSeries,
    pub torus_denominator: Vec<IdentityCheck>,
    pub torus_numerator: Vec<IdentityCheck>,
    pub torus_commuting: Vec<IdentityCheck>,
    pub all_passed: bool,
}

/// Checks that a rational field commuting with `X` also commutes with each
/// rotation generator: the denominator is a semi-invariant whose generator
/// cofactors are constants, the numerator satisfies the matching bracket
/// identity slice by slice, and the cleared bracket with the full quotient
/// vanishes.
pub fn verify_commutant_conservation(
    x: &VectorFieldJet,
    y: &RationalVectorField,
    decomp: &ToricDecomposition,
    degree_bound: u32,
) -> Result<CommutantReport, WalcherError> {
    assert_eq!(y.dim(), x.dim(), "commutant dimension mismatch");
    assert!(degree_bound <= x.cap(), "degree bound exceeds the field cap");

    let lin = validate_linear_part(x).map_err(|_| WalcherError::NotInNormalForm)?;
    let bracket = lie_bracket(&lin.semisimple_jet(x.cap()), x).expect("dimensions already checked");
    if !bracket.truncated(degree_bound).is_zero() {
        return Err(WalcherError::NotInNormalForm);
    }

    let field = x.field().clone();
    let n = x.dim();
    let x_work = x.truncated(degree_bound);
    let f = y.denom().truncated(degree_bound);
    let yp = y.numer().truncated(degree_bound);

    let xf = apply_derivation(&x_work, &f).expect("dimensions already checked");
    let xb = lie_bracket(&x_work, &yp).expect("dimensions already checked");
    for j in 0..n {
        let resid = xf.mul(yp.component(j)).sub(&f.mul(xb.component(j)));
        if !resid.is_zero() {
            return Err(WalcherError::NotCommuting);
        }
    }

    let denominator_cofactor =
        exact_quotient(&xf, &f).ok_or(WalcherError::DenominatorNotSemiInvariant)?;

    let i = iota(&field).expect("decomposition requires iota");
    let mut torus_denominator = Vec::new();
    let mut torus_numerator = Vec::new();
    let mut torus_commuting = Vec::new();
    for row in &decomp.rhos {
        let z = rotation_generator(&field, row, &i, degree_bound);
        let zf = apply_derivation(&z, &f).expect("dimensions already checked");
        let zb = lie_bracket(&z, &yp).expect("dimensions already checked");

        let constant_cof = match exact_quotient(&zf, &f) {
            Some(q) => {
                let c0 = q.coeff(&MultiIndex::zero(n));
                let excess = q.sub(&TruncatedSeries::constant(&field, n, q.cap(), c0.clone()));
                torus_denominator.push(IdentityCheck::of_series(&excess));
                if excess.is_zero() {
                    Some(c0)
                } else {
                    None
                }
            }
            None => {
                torus_denominator.push(IdentityCheck::unstated());
                None
            }
        };

        match &constant_cof {
            Some(c) => {
                let resid = zb.sub(&yp.scale(c));
                torus_numerator.push(IdentityCheck::of_jet(&resid));
            }
            None => torus_numerator.push(IdentityCheck::unstated()),
        }

        let mut passed = true;
        let mut first: Option<u32> = None;
        for j in 0..n {
            let resid = zf.mul(yp.component(j)).sub(&f.mul(zb.component(j)));
            if let Some(d) = resid.order() {
                passed = false;
                first = Some(first.map_or(d, |cur| cur.min(d)));
            }
        }
        torus_commuting.push(IdentityCheck {
            passed,
            first_failure_degree: first,
        });
    }

    let all_passed = torus_denominator.iter().all(|c| c.passed)
        && torus_numerator.iter().all(|c| c.passed)
        && torus_commuting.iter().all(|c| c.passed);

    Ok(CommutantReport {
        denominator_cofactor,
        torus_denominator,
        torus_numerator,
        torus_commuting,
        all_passed,
    })
}

/// `Σⱼ cⱼ·V(Gⱼ)·∏_{l≠j} G_l`, the numerator of `V(P)/P` after clearing
/// all factor denominators.
pub(crate) fn cleared_log_sum(
    v: &VectorFieldJet,
    p: &DarbouxFunction,
    cap: u32,
) -> TruncatedSeries {
    let field = v.field().clone();
    let n = v.dim();
    let mut acc = TruncatedSeries::zero(&field, n, cap);
    for (j, (gj, cj)) in p.factors().iter().enumerate() {
        let dg = apply_derivation(v, &gj.truncated(cap)).expect("dimensions already checked");
        let mut term = dg.scale(cj);
        for (l, (gl, _)) in p.factors().iter().enumerate() {
            if l != j {
                term = term.mul(&gl.truncated(cap));
            }
        }
        acc = acc.add(&term);
    }
    acc
}

fn rotation_generator(
    field: &std::sync::Arc<crate::scalars::NumberField>,
    row: &[BigInt],
    i: &FieldElement,
    cap: u32,
) -> VectorFieldJet {
    let diag: Vec<FieldElement> = row
        .iter()
        .map(|r| i * &FieldElement::from_rational(field, BigRational::from(r.clone())))
        .collect();
    VectorFieldJet::diagonal(field, &diag, cap)
}
