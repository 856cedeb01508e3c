use num_complex::Complex;
use num_traits::Zero;

use super::CMatrix;
use crate::error::{Error, Result};
use crate::real::{cabs, czero, Real};

/// Least-squares solution and diagnostics.
#[derive(Clone, Debug)]
pub struct LeastSquares<T: Real> {
    pub solution: Vec<Complex<T>>,
    /// 1-norm condition number of the column-equilibrated triangular factor.
    pub condition: T,
    /// `||A x - b|| / ||b||`.
    pub relative_residual: T,
}

/// Minimizes `||A x - b||_2` for a tall matrix by Householder QR on the
/// column-equilibrated system.
pub fn least_squares<T: Real>(a: &CMatrix<T>, b: &[Complex<T>]) -> Result<LeastSquares<T>> {
    let (m, n) = (a.rows(), a.cols());
    if m < n || b.len() != m {
        return Err(Error::InvalidInput(format!("least squares needs rows >= cols, got {m}x{n}")));
    }
    let col_scale: Vec<T> = (0..n)
        .map(|j| {
            let s = (0..m).fold(T::zero(), |acc, i| acc + a[(i, j)].norm_sqr()).sqrt();
            if s == T::zero() {
                T::one()
            } else {
                s
            }
        })
        .collect();
    let mut r = CMatrix::from_fn(m, n, |i, j| a[(i, j)] / col_scale[j]);
    let mut rhs = b.to_vec();
    let two = T::of(2.0);

    for k in 0..n {
        let norm = (k..m).fold(T::zero(), |acc, i| acc + r[(i, k)].norm_sqr()).sqrt();
        if norm == T::zero() {
            continue;
        }
        let x0 = r[(k, k)];
        let phase = if x0.is_zero() { Complex::new(T::one(), T::zero()) } else { x0 / cabs(x0) };
        let alpha = -phase * norm;
        let mut v: Vec<Complex<T>> = (k..m).map(|i| r[(i, k)]).collect();
        v[0] = v[0] - alpha;
        let vnorm = v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        if vnorm == T::zero() {
            continue;
        }
        for z in v.iter_mut() {
            *z = *z / vnorm;
        }
        for j in k..n {
            let dot = v.iter().enumerate().fold(czero(), |acc, (t, vi)| acc + vi.conj() * r[(k + t, j)]);
            for (t, vi) in v.iter().enumerate() {
                r[(k + t, j)] = r[(k + t, j)] - *vi * dot * two;
            }
        }
        let dot = v.iter().enumerate().fold(czero(), |acc, (t, vi)| acc + vi.conj() * rhs[k + t]);
        for (t, vi) in v.iter().enumerate() {
            rhs[k + t] = rhs[k + t] - *vi * dot * two;
        }
    }

    if (0..n).any(|i| r[(i, i)].is_zero()) {
        return Err(Error::IllConditioned { what: "least-squares system", condition: f64::INFINITY });
    }
    let mut y = vec![czero::<T>(); n];
    for i in (0..n).rev() {
        let mut s = rhs[i];
        for j in i + 1..n {
            s = s - r[(i, j)] * y[j];
        }
        y[i] = s / r[(i, i)];
    }

    let upper = CMatrix::from_fn(n, n, |i, j| if j >= i { r[(i, j)] } else { czero() });
    let condition = upper.lu().condition_1(&upper);
    let solution: Vec<Complex<T>> = y.iter().zip(&col_scale).map(|(yi, s)| *yi / *s).collect();

    let ax = a.mul_vec(&solution);
    let res = ax.iter().zip(b).fold(T::zero(), |acc, (p, q)| acc + (*p - *q).norm_sqr()).sqrt();
    let bn = b.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
    let relative_residual = if bn == T::zero() { res } else { res / bn };
    Ok(LeastSquares { solution, condition, relative_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::cx;

    #[test]
    fn recovers_consistent_solution() {
        let a = CMatrix::from_fn(7, 3, |i, j| cx((i as f64 + 1.0).powi(j as i32), 0.3 * i as f64 - j as f64));
        let x: Vec<Complex<f64>> = vec![cx(1.0, -2.0), cx(0.5, 0.25), cx(-3.0, 1.0)];
        let b = a.mul_vec(&x);
        let ls = least_squares(&a, &b).unwrap();
        for (got, want) in ls.solution.iter().zip(&x) {
            assert!((got - want).norm() < 1e-11, "{got} vs {want}");
        }
        assert!(ls.relative_residual < 1e-13);
        assert!(ls.condition.is_finite());
    }

    #[test]
    fn square_system_matches_lu() {
        let a = CMatrix::from_fn(4, 4, |i, j| cx(((i * 7 + j * 3) % 5) as f64 + 0.1 * j as f64, (i as f64 - j as f64) * 0.2));
        let b: Vec<Complex<f64>> = vec![cx(1.0, 0.0), cx(0.0, 1.0), cx(-1.0, 0.5), cx(2.0, 0.0)];
        let ls = least_squares(&a, &b).unwrap();
        let direct = a.lu().solve(&b).unwrap();
        for (p, q) in ls.solution.iter().zip(&direct) {
            assert!((p - q).norm() < 1e-10);
        }
    }

    #[test]
    fn wide_system_rejected() {
        let a = CMatrix::<f64>::zeros(2, 3);
        assert!(least_squares(&a, &[cx(0.0, 0.0), cx(0.0, 0.0)]).is_err());
    }
}
