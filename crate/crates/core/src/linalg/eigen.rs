//! Eigenvalues of general complex matrices: Householder reduction to upper
//! Hessenberg form followed by single-shift QR sweeps with Wilkinson shifts.
//! Eigenvectors come from inverse iteration.

use num_complex::Complex;
use num_traits::Zero;

use super::CMatrix;
use crate::error::{Error, Result};
use crate::real::{cabs, csqrt, czero, Real};

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

fn hessenberg<T: Real>(a: &CMatrix<T>) -> CMatrix<T> {
    let n = a.rows();
    let mut h = a.clone();
    let two = T::of(2.0);
    for k in 0..n.saturating_sub(2) {
        let norm = (k + 1..n).fold(T::zero(), |acc, i| acc + h[(i, k)].norm_sqr()).sqrt();
        if norm == T::zero() {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.is_zero() { Complex::new(T::one(), T::zero()) } else { x0 / cabs(x0) };
        let mut v: Vec<Complex<T>> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] = v[0] + phase * norm;
        let vnorm = v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        if vnorm == T::zero() {
            continue;
        }
        for z in v.iter_mut() {
            *z = *z / vnorm;
        }
        // H <- (I - 2 v v^*) H
        for j in 0..n {
            let dot = v.iter().enumerate().fold(czero(), |acc, (t, vi)| acc + vi.conj() * h[(k + 1 + t, j)]);
            for (t, vi) in v.iter().enumerate() {
                h[(k + 1 + t, j)] = h[(k + 1 + t, j)] - *vi * dot * two;
            }
        }
        // H <- H (I - 2 v v^*)
        for i in 0..n {
            let dot = v.iter().enumerate().fold(czero::<T>(), |acc, (t, vi)| acc + h[(i, k + 1 + t)] * *vi);
            for (t, vi) in v.iter().enumerate() {
                h[(i, k + 1 + t)] = h[(i, k + 1 + t)] - dot * vi.conj() * two;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = czero();
        }
    }
    h
}

/// Eigenvalue of the trailing 2x2 block closest to its last diagonal entry.
fn wilkinson_shift<T: Real>(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Complex<T> {
    let two = T::of(2.0);
    let half_tr = (a + d) / two;
    let disc = csqrt((a - d) * (a - d) / (two * two) + b * c);
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if cabs(l1 - d) < cabs(l2 - d) {
        l1
    } else {
        l2
    }
}

/// All eigenvalues, in the order they deflate.
pub fn eigenvalues<T: Real>(a: &CMatrix<T>) -> Result<Vec<Complex<T>>> {
    assert!(a.is_square(), "eigenvalues of a non-square matrix");
    let n = a.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    if !a.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let mut h = hessenberg(a);
    let eps = T::epsilon();
    let mut out = vec![czero(); n];
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;

    loop {
        if hi == 0 {
            out[0] = h[(0, 0)];
            break;
        }
        let mut l = hi;
        while l > 0 {
            let sub = cabs(h[(l, l - 1)]);
            let diag = cabs(h[(l - 1, l - 1)]) + cabs(h[(l, l)]);
            if sub <= eps * diag || sub < T::min_positive_value() {
                h[(l, l - 1)] = czero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            out[hi] = h[(hi, hi)];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > MAX_SWEEPS_PER_EIGENVALUE * n {
            return Err(Error::IllConditioned { what: "QR eigenvalue iteration", condition: f64::INFINITY });
        }

        let mut shift = wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)]);
        if iter.is_multiple_of(11) {
            // exceptional shift
            let s = cabs(h[(hi, hi - 1)]) + if hi >= 2 { cabs(h[(hi - 1, hi - 2)]) } else { T::zero() };
            shift = h[(hi, hi)] + Complex::new(s * T::of(0.75), s * T::of(-0.4375));
        }

        for i in l..=hi {
            h[(i, i)] = h[(i, i)] - shift;
        }
        let mut rotations = Vec::with_capacity(hi - l);
        for k in l..hi {
            let x = h[(k, k)];
            let y = h[(k + 1, k)];
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (c, s) = if r == T::zero() {
                (Complex::new(T::one(), T::zero()), czero())
            } else {
                (x / r, y / r)
            };
            for j in k..=hi {
                let p = h[(k, j)];
                let q = h[(k + 1, j)];
                h[(k, j)] = c.conj() * p + s.conj() * q;
                h[(k + 1, j)] = -s * p + c * q;
            }
            rotations.push((c, s));
        }
        for (idx, (c, s)) in rotations.into_iter().enumerate() {
            let k = l + idx;
            let top = (k + 2).min(hi);
            for i in l..=top {
                let p = h[(i, k)];
                let q = h[(i, k + 1)];
                h[(i, k)] = p * c + q * s;
                h[(i, k + 1)] = -p * s.conj() + q * c.conj();
            }
        }
        for i in l..=hi {
            h[(i, i)] = h[(i, i)] + shift;
        }
    }
    Ok(out)
}

/// Eigenvalues ordered lexicographically by (real, imaginary) part.
pub fn sorted_eigenvalues<T: Real>(a: &CMatrix<T>) -> Result<Vec<Complex<T>>> {
    let mut ev = eigenvalues(a)?;
    ev.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap_or(std::cmp::Ordering::Equal).then(x.im.partial_cmp(&y.im).unwrap_or(std::cmp::Ordering::Equal)));
    Ok(ev)
}

/// Right eigenvector for an (approximate) eigenvalue by inverse iteration,
/// normalized to unit 2-norm with its largest component real positive.
pub fn eigenvector<T: Real>(a: &CMatrix<T>, lambda: Complex<T>) -> Result<Vec<Complex<T>>> {
    let n = a.rows();
    let scale = a.max_abs().max(cabs(lambda)).max(T::min_positive_value());
    let delta = scale * T::epsilon() * T::of(64.0);
    let shifted = CMatrix::from_fn(n, n, |i, j| if i == j { a[(i, j)] - lambda - Complex::new(delta, delta) } else { a[(i, j)] });
    let lu = shifted.lu();
    let mut x: Vec<Complex<T>> = (0..n).map(|k| Complex::new(T::one(), T::of(0.1 + 0.013 * k as f64))).collect();
    for _ in 0..4 {
        let mut y = lu.solve(&x)?;
        let norm = y.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        if norm == T::zero() || !norm.is_finite() {
            return Err(Error::SingularMatrix("inverse iteration"));
        }
        for z in y.iter_mut() {
            *z = *z / norm;
        }
        x = y;
    }
    let (imax, _) = x.iter().enumerate().fold((0, T::zero()), |(bi, bv), (i, z)| if cabs(*z) > bv { (i, cabs(*z)) } else { (bi, bv) });
    let phase = x[imax] / cabs(x[imax]);
    Ok(x.into_iter().map(|z| z / phase).collect())
}
