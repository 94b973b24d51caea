//! Dense univariate polynomials over the rationals, used for minimal-poly
//! reduction, inversion, and the irreducibility check. Coefficient order is
//! constant term first; the zero polynomial is the empty vector.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type QPoly = Vec<BigRational>;

pub fn trim(mut p: QPoly) -> QPoly {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn add(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    trim(out)
}

pub fn neg(a: &[BigRational]) -> QPoly {
    a.iter().map(|c| -c).collect()
}

pub fn sub(a: &[BigRational], b: &[BigRational]) -> QPoly {
    add(a, &neg(b))
}

pub fn scale(a: &[BigRational], s: &BigRational) -> QPoly {
    if s.is_zero() {
        return Vec::new();
    }
    a.iter().map(|c| c * s).collect()
}

pub fn mul(a: &[BigRational], b: &[BigRational]) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    trim(out)
}

/// Quotient and remainder with respect to a nonzero divisor.
pub fn divmod(a: &[BigRational], b: &[BigRational]) -> (QPoly, QPoly) {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut rem = trim(a.to_vec());
    let db = b.len() - 1;
    let lead = b.last().unwrap().clone();
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    while rem.len() > db {
        let dr = rem.len() - 1;
        let c = rem.last().unwrap() / &lead;
        quot[dr - db] = c.clone();
        for j in 0..=db {
            let t = &b[j] * &c;
            rem[dr - db + j] -= t;
        }
        rem = trim(rem);
        if rem.is_empty() {
            break;
        }
    }
    (trim(quot), rem)
}

pub fn rem(a: &[BigRational], b: &[BigRational]) -> QPoly {
    divmod(a, b).1
}

pub fn eval(p: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Extended Euclid: returns (g, u, v) with u*a + v*b = g. The gcd is not
/// normalized; callers divide by its leading coefficient as needed.
pub fn egcd(a: &[BigRational], b: &[BigRational]) -> (QPoly, QPoly, QPoly) {
    let mut r0 = trim(a.to_vec());
    let mut r1 = trim(b.to_vec());
    let mut u0: QPoly = vec![BigRational::one()];
    let mut u1: QPoly = Vec::new();
    let mut v0: QPoly = Vec::new();
    let mut v1: QPoly = vec![BigRational::one()];
    while !r1.is_empty() {
        let (q, r) = divmod(&r0, &r1);
        let nu = sub(&u0, &mul(&q, &u1));
        let nv = sub(&v0, &mul(&q, &v1));
        r0 = r1;
        r1 = r;
        u0 = u1;
        u1 = nu;
        v0 = v1;
        v1 = nv;
    }
    (r0, u0, v0)
}

/// Clears denominators and divides out the integer content; the result has
/// the same roots and factors as the input, with a positive leading
/// coefficient.
pub fn primitive_integer(p: &[BigRational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let p = trim(p.to_vec());
    if p.is_empty() {
        return Vec::new();
    }
    let mut lcm = BigInt::one();
    for c in &p {
        lcm = lcm.lcm(c.denom());
    }
    let mut ints: Vec<BigInt> = p.iter().map(|c| (c * BigRational::from(lcm.clone())).to_integer()).collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = content.gcd(c);
    }
    if !content.is_zero() {
        for c in ints.iter_mut() {
            *c /= &content;
        }
    }
    if ints.last().unwrap().is_negative() {
        for c in ints.iter_mut() {
            *c = -c.clone();
        }
    }
    ints
}
