//! Resonance relations `⟨a, λ⟩ = λⱼ` among eigenvalues, found two
//! independent ways, and the decomposition of a diagonal linear part into
//! integer-weight rotation generators.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::intlat;
use crate::linalg;
use crate::scalars::{iota, rational_rank, FieldElement};
use crate::series::MultiIndex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResonanceError {
    #[error("eigenvalue field does not designate a square root of -1")]
    MissingIota,
}

/// Solver guardrails; exhaustive enumeration is only run at desk scale.
pub const MAX_SOLVER_DEGREE: u32 = 20;
pub const MAX_SOLVER_VARS: usize = 6;

/// All resonance relations up to a degree bound. Component indices are
/// zero-based; entries are sorted by exponent vector, then component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResonanceSet {
    pub degree_bound: u32,
    pub entries: Vec<(MultiIndex, usize)>,
}

impl ResonanceSet {
    #[must_use]
    pub fn contains(&self, a: &MultiIndex, j: usize) -> bool {
        self.entries.iter().any(|(b, k)| b == a && *k == j)
    }
}

/// `⟨a, λ⟩ = Σ aᵢ λᵢ` as a field element.
#[must_use]
pub fn weight(lambda: &[FieldElement], a: &MultiIndex) -> FieldElement {
    assert_eq!(lambda.len(), a.len());
    let field = lambda[0].field();
    let mut acc = FieldElement::zero(field);
    for (l, &e) in lambda.iter().zip(a.exponents()) {
        if e == 0 {
            continue;
        }
        let mult = FieldElement::from_int(field, i64::from(e));
        acc = &acc + &(l * &mult);
    }
    acc
}

/// Brute-force scan of every exponent vector with `2 ≤ |a| ≤ degree_bound`
/// against every component.
#[must_use]
pub fn enumerate_resonances(lambda: &[FieldElement], degree_bound: u32) -> ResonanceSet {
    assert!(degree_bound >= 2, "resonances start at degree 2");
    let n = lambda.len();
    let mut entries = Vec::new();
    for d in 2..=degree_bound {
        for a in MultiIndex::all_of_degree(n, d) {
            let w = weight(lambda, &a);
            for (j, l) in lambda.iter().enumerate() {
                if &w == l {
                    entries.push((a.clone(), j));
                }
            }
        }
    }
    ResonanceSet {
        degree_bound,
        entries,
    }
}

/// Second, independent route to the resonances of one component: write
/// `⟨a, λ⟩ − λⱼ = 0` coordinate-wise over the power basis as a rational
/// linear system in `a`, row-reduce it, and enumerate only the free
/// coordinates over the simplex `{a ≥ 0, |a| ≤ degree_bound}`; pivot
/// coordinates are forced and merely checked for integrality and range.
#[must_use]
pub fn resonance_lattice_solver(
    lambda: &[FieldElement],
    j: usize,
    degree_bound: u32,
) -> Vec<MultiIndex> {
    let n = lambda.len();
    assert!(j < n, "component index out of range");
    assert!(degree_bound >= 2);
    assert!(
        degree_bound <= MAX_SOLVER_DEGREE && n <= MAX_SOLVER_VARS,
        "solver is limited to degree {MAX_SOLVER_DEGREE} and {MAX_SOLVER_VARS} variables"
    );
    let d = lambda[0].field().degree();

    // Row c of the system: Σᵢ aᵢ λᵢ[c] = λⱼ[c].
    let mut aug: Vec<Vec<BigRational>> = (0..d)
        .map(|c| {
            let mut row: Vec<BigRational> = lambda.iter().map(|l| l.coords()[c].clone()).collect();
            row.push(lambda[j].coords()[c].clone());
            row
        })
        .collect();
    let pivots = rational_rref(&mut aug);
    if pivots.contains(&n) {
        return Vec::new();
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();

    let mut found = Vec::new();
    let mut assignment = vec![0u32; free.len()];
    loop {
        let total_free: u32 = assignment.iter().sum();
        if total_free <= degree_bound {
            if let Some(a) = solve_pivots(&aug, &pivots, &free, &assignment, n) {
                let deg = a.degree();
                if (2..=degree_bound).contains(&deg) {
                    found.push(a);
                }
            }
        }
        // Odometer over free coordinates, each capped by the degree bound.
        let mut pos = 0;
        loop {
            if pos == assignment.len() {
                found.sort();
                found.dedup();
                return found;
            }
            if assignment[pos] < degree_bound {
                assignment[pos] += 1;
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
    }
}

/// Reduced-row-echelon form over the rationals; returns pivot columns.
fn rational_rref(rows: &mut Vec<Vec<BigRational>>) -> Vec<usize> {
    let m = rows.len();
    if m == 0 {
        return Vec::new();
    }
    let n = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r][c..].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for jj in c..n {
                    let delta = &f * &rows[r][jj];
                    rows[i][jj] = &rows[i][jj] - delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn solve_pivots(
    aug: &[Vec<BigRational>],
    pivots: &[usize],
    free: &[usize],
    assignment: &[u32],
    n: usize,
) -> Option<MultiIndex> {
    let mut exps = vec![0u32; n];
    for (&col, &v) in free.iter().zip(assignment) {
        exps[col] = v;
    }
    for (r, &pc) in pivots.iter().enumerate() {
        // Pivot row reads: a[pc] + Σ_free coeff * a[free] = rhs.
        let mut value = aug[r][n].clone();
        for (&fc, &v) in free.iter().zip(assignment) {
            if v != 0 {
                let used = &aug[r][fc] * BigRational::from(BigInt::from(v));
                value -= used;
            }
        }
        if !value.denom().eq(&BigInt::from(1)) {
            return None;
        }
        let num = value.numer();
        if num.sign() == num_bigint::Sign::Minus {
            return None;
        }
        let as_u32: u32 = num.try_into().ok()?;
        exps[pc] = as_u32;
    }
    Some(MultiIndex::new(exps))
}

/// The weight data of the rotation generators attached to a diagonal
/// linear part: `tau` generators with rationally independent coefficients
/// `gammas` and integer weight rows `rhos`, reconstructing the eigenvalues
/// as `λⱼ = ι · Σᵢ γᵢ ρᵢⱼ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricDecomposition {
    pub n: usize,
    pub tau: usize,
    pub gammas: Vec<FieldElement>,
    pub rhos: Vec<Vec<BigInt>>,
}

/// Splits `λ/ι` along a rational basis and saturates the resulting weight
/// lattice. The weight rows are the Hermite-normal-form basis of the
/// saturation, so the output is canonical; `gammas` are recomputed against
/// those rows and inherit rational independence from the basis split.
pub fn toric_decompose(lambda: &[FieldElement]) -> Result<ToricDecomposition, ResonanceError> {
    let n = lambda.len();
    assert!(n >= 1);
    let field = lambda[0].field();
    let Some(i) = iota(field) else {
        return Err(ResonanceError::MissingIota);
    };
    let i_inv = -&i;
    let w: Vec<FieldElement> = lambda.iter().map(|l| l * &i_inv).collect();
    let rr = rational_rank(&w);
    if rr.rank == 0 {
        return Ok(ToricDecomposition {
            n,
            tau: 0,
            gammas: Vec::new(),
            rhos: Vec::new(),
        });
    }
    // Row k of the rational weight matrix holds the k-th basis coefficient
    // of every component of λ/ι.
    let q_rows: Vec<Vec<BigRational>> = (0..rr.rank)
        .map(|k| (0..n).map(|col| rr.coeffs[col][k].clone()).collect())
        .collect();
    let rhos = intlat::saturate_rows(&intlat::clear_rational_rows(&q_rows), n);
    let tau = rhos.len();
    debug_assert_eq!(tau, rr.rank);

    // gammas solve the n×tau system rho^T gamma = λ/ι over the field.
    let rho_t: linalg::Matrix = (0..n)
        .map(|col| {
            (0..tau)
                .map(|row| {
                    FieldElement::from_rational(field, BigRational::from(rhos[row][col].clone()))
                })
                .collect()
        })
        .collect();
    let gammas =
        linalg::solve(&rho_t, &w, tau, field).expect("saturated rows span the weight space");
    Ok(ToricDecomposition {
        n,
        tau,
        gammas,
        rhos,
    })
}

/// True when `⟨a, ρᵢ⟩ = ρᵢⱼ` for every weight row; with no rows (`tau` 0)
/// every monomial counts as resonant.
#[must_use]
pub fn is_resonant_monomial(decomp: &ToricDecomposition, a: &MultiIndex, j: usize) -> bool {
    assert_eq!(a.len(), decomp.n);
    assert!(j < decomp.n);
    decomp.rhos.iter().all(|row| {
        let mut acc = BigInt::zero();
        for (r, &e) in row.iter().zip(a.exponents()) {
            acc += r * BigInt::from(e);
        }
        acc == row[j]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::NumberField;
    use num_bigint::BigInt;
    use std::sync::Arc;

    fn q(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn qr(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn ints(field: &Arc<NumberField>, vals: &[i64]) -> Vec<FieldElement> {
        vals.iter().map(|&v| FieldElement::from_int(field, v)).collect()
    }

    #[test]
    fn poincare_node_resonance() {
        let f = NumberField::rationals();
        let lam = ints(&f, &[1, 2]);
        let set = enumerate_resonances(&lam, 3);
        assert_eq!(set.entries, vec![(MultiIndex::new(vec![2, 0]), 1)]);
    }

    #[test]
    fn saddle_resonances() {
        let f = NumberField::rationals();
        let lam = ints(&f, &[1, -1]);
        let set = enumerate_resonances(&lam, 3);
        assert_eq!(
            set.entries,
            vec![
                (MultiIndex::new(vec![2, 1]), 0),
                (MultiIndex::new(vec![1, 2]), 1),
            ]
        );
    }

    #[test]
    fn irrational_pair_has_no_resonances() {
        let f = NumberField::new(vec![q(-2), q(0), q(1)], None).unwrap();
        let sqrt2 = FieldElement::generator(&f);
        let lam = vec![FieldElement::one(&f), sqrt2];
        let set = enumerate_resonances(&lam, 5);
        assert!(set.entries.is_empty());
    }

    #[test]
    fn solver_matches_node() {
        let f = NumberField::rationals();
        let lam = ints(&f, &[1, 2]);
        assert_eq!(
            resonance_lattice_solver(&lam, 1, 6),
            vec![MultiIndex::new(vec![2, 0])]
        );
        assert!(resonance_lattice_solver(&lam, 0, 6).is_empty());
    }

    #[test]
    fn solver_matches_saddle() {
        let f = NumberField::rationals();
        let lam = ints(&f, &[1, -1]);
        assert_eq!(
            resonance_lattice_solver(&lam, 0, 5),
            vec![
                MultiIndex::new(vec![2, 1]),
                MultiIndex::new(vec![3, 2]),
            ]
        );
    }

    #[test]
    fn solver_on_gaussian_rotation() {
        let f = NumberField::gaussian();
        let i = iota(&f).unwrap();
        let lam = vec![i.clone(), -&i];
        assert_eq!(
            resonance_lattice_solver(&lam, 0, 4),
            vec![MultiIndex::new(vec![2, 1])]
        );
    }

    #[test]
    fn solver_agrees_with_enumeration_on_degenerate_spectrum() {
        // Zero spectrum: every monomial is resonant for both components,
        // so the free-variable enumeration path is fully exercised.
        let f = NumberField::rationals();
        let lam = ints(&f, &[0, 0]);
        let set = enumerate_resonances(&lam, 4);
        for j in 0..2 {
            let solved = resonance_lattice_solver(&lam, j, 4);
            let expected: Vec<MultiIndex> = set
                .entries
                .iter()
                .filter(|(_, k)| *k == j)
                .map(|(a, _)| a.clone())
                .collect();
            assert_eq!(solved, expected);
        }
        assert!(set.contains(&MultiIndex::new(vec![1, 1]), 0));
    }

    #[test]
    fn toric_of_conjugate_rotation() {
        let f = NumberField::gaussian();
        let i = iota(&f).unwrap();
        let lam = vec![i.clone(), -&i];
        let dec = toric_decompose(&lam).unwrap();
        assert_eq!(dec.tau, 1);
        assert_eq!(dec.rhos, vec![vec![BigInt::from(1), BigInt::from(-1)]]);
        assert_eq!(dec.gammas, vec![FieldElement::one(&f)]);
    }

    #[test]
    fn toric_of_integer_weights() {
        let f = NumberField::gaussian();
        let i = iota(&f).unwrap();
        let two_i = &i + &i;
        let three_i = &two_i + &i;
        let dec = toric_decompose(&[two_i, three_i]).unwrap();
        assert_eq!(dec.tau, 1);
        assert_eq!(dec.rhos, vec![vec![BigInt::from(2), BigInt::from(3)]]);
        assert_eq!(dec.gammas, vec![FieldElement::one(&f)]);
    }

    #[test]
    fn toric_of_independent_pair() {
        let f = NumberField::new(
            vec![q(9), q(0), q(-2), q(0), q(1)],
            Some(vec![q(0), qr(1, 6), q(0), qr(1, 6)]),
        )
        .unwrap();
        let i = iota(&f).unwrap();
        let sqrt2 = FieldElement::new(&f, vec![q(0), qr(5, 6), q(0), qr(-1, 6)]).unwrap();
        let lam = vec![i.clone(), &i * &sqrt2];
        let dec = toric_decompose(&lam).unwrap();
        assert_eq!(dec.tau, 2);
        assert_eq!(
            dec.rhos,
            vec![
                vec![BigInt::from(1), BigInt::from(0)],
                vec![BigInt::from(0), BigInt::from(1)],
            ]
        );
        assert_eq!(dec.gammas, vec![FieldElement::one(&f), sqrt2]);
    }

    #[test]
    fn toric_requires_iota() {
        let f = NumberField::rationals();
        let lam = ints(&f, &[1, 2]);
        assert_eq!(toric_decompose(&lam).unwrap_err(), ResonanceError::MissingIota);
    }

    #[test]
    fn all_zero_spectrum_decomposes_trivially() {
        let f = NumberField::gaussian();
        let lam = vec![FieldElement::zero(&f), FieldElement::zero(&f)];
        let dec = toric_decompose(&lam).unwrap();
        assert_eq!(dec.tau, 0);
        assert!(dec.gammas.is_empty());
        assert!(dec.rhos.is_empty());
        assert!(is_resonant_monomial(&dec, &MultiIndex::new(vec![2, 0]), 0));
    }

    #[test]
    fn reconstruction_identity_holds() {
        let f = NumberField::gaussian();
        let i = iota(&f).unwrap();
        // λ = (2i, 3i, -i)
        let lam = vec![
            &i + &i,
            &(&i + &i) + &i,
            -&i,
        ];
        let dec = toric_decompose(&lam).unwrap();
        for (j, l) in lam.iter().enumerate() {
            let mut acc = FieldElement::zero(&f);
            for (g, row) in dec.gammas.iter().zip(&dec.rhos) {
                let r = FieldElement::from_rational(&f, BigRational::from(row[j].clone()));
                acc = &acc + &(g * &r);
            }
            assert_eq!(&(&acc * &i), l);
        }
    }

    #[test]
    fn resonance_matches_torus_weights() {
        let f = NumberField::gaussian();
        let i = iota(&f).unwrap();
        let lam = vec![i.clone(), -&i];
        let dec = toric_decompose(&lam).unwrap();
        for d in 2..=6u32 {
            for a in MultiIndex::all_of_degree(2, d) {
                for j in 0..2 {
                    let resonant = weight(&lam, &a) == lam[j];
                    assert_eq!(resonant, is_resonant_monomial(&dec, &a, j));
                }
            }
        }
    }
}
