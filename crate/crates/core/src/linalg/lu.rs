use num_complex::Complex;
use num_traits::{One, Zero};

use super::CMatrix;
use crate::error::{Error, Result};
use crate::real::{cabs, czero, Real};

/// LU factorization with partial pivoting, `P A = L U`.
///
/// Factorization never fails; singularity is detected when solving.
#[derive(Clone, Debug)]
pub struct Lu<T: Real> {
    lu: CMatrix<T>,
    perm: Vec<usize>,
    sign: T,
    scale: T,
}

impl<T: Real> Lu<T> {
    pub fn new(a: &CMatrix<T>) -> Self {
        assert!(a.is_square(), "LU of a non-square matrix");
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = T::one();
        for k in 0..n {
            let mut p = k;
            let mut best = cabs(lu[(k, k)]);
            for i in k + 1..n {
                let v = cabs(lu[(i, k)]);
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = lu[(k, k)];
            if pivot.is_zero() {
                continue;
            }
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] = lu[(i, j)] - f * u;
                }
            }
        }
        Self { lu, perm, sign, scale: a.max_abs() }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn det(&self) -> Complex<T> {
        (0..self.dim()).fold(Complex::new(self.sign, T::zero()), |acc, i| acc * self.lu[(i, i)])
    }

    /// Smallest pivot modulus relative to the largest entry of the input.
    pub fn min_pivot_ratio(&self) -> T {
        if self.scale == T::zero() {
            return T::zero();
        }
        (0..self.dim()).map(|i| cabs(self.lu[(i, i)])).fold(T::infinity(), T::min) / self.scale
    }

    pub fn is_singular(&self) -> bool {
        self.min_pivot_ratio() <= T::epsilon()
    }

    pub fn solve(&self, b: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        if (0..self.dim()).any(|i| self.lu[(i, i)].is_zero()) {
            return Err(Error::SingularMatrix("LU solve"));
        }
        Ok(self.solve_unchecked(b))
    }

    fn solve_unchecked(&self, b: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.dim();
        assert_eq!(b.len(), n);
        let mut x: Vec<Complex<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s = s - self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s = s - self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        x
    }

    pub fn inverse(&self) -> Result<CMatrix<T>> {
        let n = self.dim();
        let mut inv = CMatrix::zeros(n, n);
        for j in 0..n {
            let mut e = vec![czero(); n];
            e[j] = Complex::one();
            let col = self.solve(&e)?;
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        Ok(inv)
    }

    /// `||A||_1 ||A^{-1}||_1`, infinite when singular.
    pub fn condition_1(&self, a: &CMatrix<T>) -> T {
        match self.inverse() {
            Ok(inv) => a.norm_1() * inv.norm_1(),
            Err(_) => T::infinity(),
        }
    }
}
