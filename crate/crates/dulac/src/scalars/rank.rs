//! Rank of a tuple of field elements over the rationals, with an explicit
//! basis and expansion coefficients, computed by exact row reduction on the
//! power-basis coordinates.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::FieldElement;

/// Outcome of [`rational_rank`]. `basis_indices` are positions into the
/// input tuple, earliest-first; `coeffs[k]` expands input `k` over that
/// basis, so `coeffs[k].len() == rank` and basis members expand as unit
/// vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalRank {
    pub rank: usize,
    pub basis_indices: Vec<usize>,
    pub coeffs: Vec<Vec<BigRational>>,
}

/// Dimension of the Q-span of `values`, together with the first spanning
/// subsequence and the expansion of every input over it.
///
/// Zero inputs contribute nothing; an all-zero (or empty) tuple has rank 0
/// and empty expansions.
pub fn rational_rank(values: &[FieldElement]) -> RationalRank {
    let n = values.len();
    if n == 0 {
        return RationalRank {
            rank: 0,
            basis_indices: Vec::new(),
            coeffs: Vec::new(),
        };
    }
    let d = values[0].field().degree();
    for v in values {
        assert!(
            v.field().compatible(values[0].field()),
            "rank inputs must share a number field"
        );
    }

    let mut basis_indices: Vec<usize> = Vec::new();
    // Reduced pivot rows with their leading column, and alongside each the
    // expansion of that reduced row over the original basis inputs.
    let mut pivots: Vec<(usize, Vec<BigRational>)> = Vec::new();
    let mut pivot_expr: Vec<Vec<BigRational>> = Vec::new();
    let mut coeffs: Vec<Vec<BigRational>> = Vec::with_capacity(n);

    for (k, v) in values.iter().enumerate() {
        let mut row = v.coords().to_vec();
        let mut combo = vec![BigRational::zero(); basis_indices.len()];
        for (p, (lead, prow)) in pivots.iter().enumerate() {
            if row[*lead].is_zero() {
                continue;
            }
            let factor = row[*lead].clone();
            for j in 0..d {
                let delta = &factor * &prow[j];
                row[j] = &row[j] - &delta;
            }
            for (j, pe) in pivot_expr[p].iter().enumerate() {
                combo[j] = &combo[j] + &(&factor * pe);
            }
        }
        if let Some(lead) = (0..d).find(|&j| !row[j].is_zero()) {
            let scale = row[lead].recip();
            for item in row.iter_mut() {
                *item = &*item * &scale;
            }
            // The residual is the input minus its projection on the earlier
            // basis, so the normalized pivot expands with the projection
            // negated and the input itself scaled.
            let mut pe: Vec<BigRational> = combo.iter().map(|c| -(&scale * c)).collect();
            pe.push(scale);
            basis_indices.push(k);
            pivots.push((lead, row));
            pivot_expr.push(pe);
            let mut unit = vec![BigRational::zero(); basis_indices.len()];
            *unit.last_mut().unwrap() = BigRational::one();
            coeffs.push(unit);
        } else {
            coeffs.push(combo);
        }
    }

    let rank = basis_indices.len();
    for e in coeffs.iter_mut() {
        e.resize(rank, BigRational::zero());
    }
    RationalRank {
        rank,
        basis_indices,
        coeffs,
    }
}
