//! Integer row lattices: Hermite normal form, integer kernels, and
//! saturation. Everything here is exact over arbitrary-size integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Row-style Hermite normal form: echelon with positive pivots, entries
/// above each pivot reduced into `[0, pivot)`, zero rows dropped. The
/// result depends only on the row lattice, which makes it a canonical
/// representative.
pub fn hnf_rows(mat: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = mat.to_vec();
    let m = a.len();
    if m == 0 {
        return a;
    }
    let n = a[0].len();
    let mut pivot_row = 0;
    for col in 0..n {
        if pivot_row == m {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..m {
                if a[r][col].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some(r),
                    Some(b) => {
                        if a[r][col].abs() < a[b][col].abs() {
                            best = Some(r);
                        }
                    }
                }
            }
            let Some(b) = best else { break };
            a.swap(pivot_row, b);
            let mut cleared = true;
            for r in pivot_row + 1..m {
                if a[r][col].is_zero() {
                    continue;
                }
                let q = a[r][col].div_floor(&a[pivot_row][col]);
                if !q.is_zero() {
                    for j in 0..n {
                        let delta = &q * &a[pivot_row][j];
                        a[r][j] = &a[r][j] - delta;
                    }
                }
                if !a[r][col].is_zero() {
                    cleared = false;
                }
            }
            if cleared {
                break;
            }
        }
        if !a[pivot_row][col].is_zero() {
            if a[pivot_row][col].is_negative() {
                for j in 0..n {
                    a[pivot_row][j] = -&a[pivot_row][j];
                }
            }
            for r in 0..pivot_row {
                let q = a[r][col].div_floor(&a[pivot_row][col]);
                if !q.is_zero() {
                    for j in 0..n {
                        let delta = &q * &a[pivot_row][j];
                        a[r][j] = &a[r][j] - delta;
                    }
                }
            }
            pivot_row += 1;
        }
    }
    a.retain(|row| row.iter().any(|x| !x.is_zero()));
    a
}

/// Basis, in Hermite normal form, of `{x in Z^ncols : A x = 0}` where the
/// rows of `a` are the constraints.
pub fn integer_kernel(a: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let m = a.len();
    // Rows of the working matrix are [column j of a | unit j]; HNF rows
    // whose constraint part is zero carry a kernel basis in the unit part.
    let mut work: Vec<Vec<BigInt>> = Vec::with_capacity(ncols);
    for j in 0..ncols {
        let mut row: Vec<BigInt> = (0..m).map(|i| a[i][j].clone()).collect();
        for k in 0..ncols {
            row.push(if k == j { BigInt::from(1) } else { BigInt::zero() });
        }
        work.push(row);
    }
    let reduced = hnf_rows(&work);
    let mut basis = Vec::new();
    for row in &reduced {
        if row[..m].iter().all(Zero::is_zero) {
            basis.push(row[m..].to_vec());
        }
    }
    hnf_rows(&basis)
}

/// Canonical basis of the saturation `span_Q(rows) ∩ Z^ncols` of the row
/// lattice: the kernel of the kernel.
pub fn saturate_rows(a: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let k = integer_kernel(a, ncols);
    integer_kernel(&k, ncols)
}

/// Scales each rational row to a primitive integer row (coprime entries,
/// first nonzero entry's sign preserved). The Q-span of the rows is
/// unchanged, so this is a safe preprocessor for [`saturate_rows`].
pub fn clear_rational_rows(rows: &[Vec<BigRational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let mut denom_lcm = BigInt::from(1);
            for x in row {
                denom_lcm = denom_lcm.lcm(x.denom());
            }
            let ints: Vec<BigInt> = row
                .iter()
                .map(|x| x.numer() * (&denom_lcm / x.denom()))
                .collect();
            let mut content = BigInt::zero();
            for x in &ints {
                content = content.gcd(x);
            }
            if content.is_zero() {
                ints
            } else {
                ints.iter().map(|x| x / &content).collect()
            }
        })
        .collect()
}
