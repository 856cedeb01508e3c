use num_complex::Complex;
use num_traits::Zero;

use super::{eigenvalues, CMatrix};
use crate::error::Result;
use crate::real::{cabs, cone, czero, Real};

/// Evaluates the monic polynomial `z^n + c[n-1] z^{n-1} + ... + c[0]` and its
/// derivative by Horner's rule.
pub fn poly_eval<T: Real>(lower: &[Complex<T>], z: Complex<T>) -> (Complex<T>, Complex<T>) {
    let mut p = cone::<T>();
    let mut dp = czero::<T>();
    for c in lower.iter().rev() {
        dp = dp * z + p;
        p = p * z + *c;
    }
    (p, dp)
}

/// Roots of the monic polynomial with lower coefficients `lower`
/// (`lower[k]` multiplies `z^k`), from the companion-matrix eigenvalues,
/// each polished by a few Newton steps.
pub fn roots_monic<T: Real>(lower: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    let n = lower.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut companion = CMatrix::zeros(n, n);
    for i in 1..n {
        companion[(i, i - 1)] = cone();
    }
    for (i, c) in lower.iter().enumerate() {
        companion[(i, n - 1)] = -*c;
    }
    let mut roots = eigenvalues(&companion)?;
    for z in roots.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = poly_eval(lower, *z);
            if dp.is_zero() {
                break;
            }
            let candidate = *z - p / dp;
            if cabs(poly_eval(lower, candidate).0) < cabs(p) {
                *z = candidate;
            } else {
                break;
            }
        }
    }
    Ok(roots)
}
