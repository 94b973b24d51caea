//! Deterministic irreducibility test over Q for monic polynomials of small
//! degree: rational-root elimination first, then a Kronecker interpolation
//! search for factors of degree 2..=d/2. Intended for desk-scale minimal
//! polynomials, where the divisor enumeration stays tiny.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::qpoly::{self, QPoly};

/// True iff the monic polynomial (constant term first, degree >= 2) has no
/// nontrivial factorization over Q.
pub fn is_irreducible(min_poly: &[BigRational]) -> bool {
    let d = min_poly.len() - 1;
    debug_assert!(d >= 2);
    let ints = qpoly::primitive_integer(min_poly);
    if has_rational_root(&ints) {
        return false;
    }
    for k in 2..=d / 2 {
        if has_factor_of_degree(&ints, k) {
            return false;
        }
    }
    true
}

fn eval_int(p: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn has_rational_root(p: &[BigInt]) -> bool {
    if p[0].is_zero() {
        return true;
    }
    let lead = p.last().unwrap();
    for num in divisors(&p[0]) {
        for den in divisors(lead) {
            for sign in [1i32, -1] {
                let root = BigRational::new(&num * BigInt::from(sign), den.clone());
                let rp: QPoly = p.iter().map(|c| BigRational::from(c.clone())).collect();
                if qpoly::eval(&rp, &root).is_zero() {
                    return true;
                }
            }
        }
    }
    false
}

/// Positive divisors of |v|, ascending. v must be nonzero.
fn divisors(v: &BigInt) -> Vec<BigInt> {
    let n = v.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    loop {
        let dd = &d * &d;
        if dd > n {
            break;
        }
        if (&n % &d).is_zero() {
            small.push(d.clone());
            if dd != n {
                large.push(&n / &d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Kronecker search: a degree-k factor of p is determined by its values at
/// k+1 points, and each such value divides p at that point. Enumerate the
/// divisor tuples, interpolate, and test-divide. The points are integers in
/// the fixed order 0, 1, -1, 2, -2, ...; after the rational-root test p has
/// no integer root, so every sample value is nonzero.
fn has_factor_of_degree(p: &[BigInt], k: usize) -> bool {
    let points: Vec<BigInt> = sample_points(k + 1);
    let values: Vec<Vec<BigInt>> = points.iter().map(|x| divisors(&eval_int(p, x))).collect();
    let rp: QPoly = p.iter().map(|c| BigRational::from(c.clone())).collect();
    let mut choice = vec![0usize; points.len()];
    loop {
        // The first coordinate stays positive: g and -g divide the same way.
        let mut candidate_vals: Vec<BigRational> = Vec::with_capacity(points.len());
        for (i, sel) in choice.iter().enumerate() {
            let (idx, negate) = if i == 0 { (*sel, false) } else { (*sel / 2, *sel % 2 == 1) };
            let mag = &values[i][idx];
            let signed = if negate { -mag.clone() } else { mag.clone() };
            candidate_vals.push(BigRational::from(signed));
        }
        if let Some(g) = interpolate(&points, &candidate_vals) {
            if g.len() == k + 1 && is_integer_poly(&g) && qpoly::rem(&rp, &g).is_empty() {
                return true;
            }
        }
        // Odometer over (divisor, sign) choices; index 0 has no sign bit.
        let mut i = 0;
        loop {
            if i >= choice.len() {
                return false;
            }
            let limit = if i == 0 { values[i].len() } else { values[i].len() * 2 };
            choice[i] += 1;
            if choice[i] < limit {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn sample_points(count: usize) -> Vec<BigInt> {
    let mut pts = vec![BigInt::zero()];
    let mut v = 1i64;
    while pts.len() < count {
        pts.push(BigInt::from(v));
        if pts.len() < count {
            pts.push(BigInt::from(-v));
        }
        v += 1;
    }
    pts
}

fn is_integer_poly(p: &[BigRational]) -> bool {
    p.iter().all(|c| c.is_integer())
}

/// Lagrange interpolation through the given points; None when the data is
/// degenerate (it never is for distinct points, kept for safety).
fn interpolate(xs: &[BigInt], ys: &[BigRational]) -> Option<QPoly> {
    let mut acc: QPoly = Vec::new();
    for i in 0..xs.len() {
        let mut basis: QPoly = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for j in 0..xs.len() {
            if i == j {
                continue;
            }
            let xj = BigRational::from(xs[j].clone());
            basis = qpoly::mul(&basis, &[-xj, BigRational::one()]);
            let diff = BigRational::from(&xs[i] - &xs[j]);
            if diff.is_zero() {
                return None;
            }
            denom *= diff;
        }
        let coef = &ys[i] / denom;
        acc = qpoly::add(&acc, &qpoly::scale(&basis, &coef));
    }
    Some(qpoly::trim(acc))
}
