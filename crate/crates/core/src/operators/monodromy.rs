use num_complex::Complex;

use super::local::{right_apply_one, right_apply_two};
use super::{check_u, k_minus, k_minus_derivative, k_plus, k_plus_derivative, r_matrix, r_matrix_derivative, Operator};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::params::ModelParams;
use crate::real::{cabs, Real};

/// An operator on `aux (x) quantum` split into its auxiliary-space blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockMonodromy<T: Real> {
    pub a: Operator<T>,
    pub b: Operator<T>,
    pub c: Operator<T>,
    pub d: Operator<T>,
}

impl<T: Real> BlockMonodromy<T> {
    pub fn from_full(m: &Operator<T>) -> Self {
        let h = m.rows() / 2;
        Self { a: m.block(0, 0, h, h), b: m.block(0, h, h, h), c: m.block(h, 0, h, h), d: m.block(h, h, h, h) }
    }

    pub fn to_full(&self) -> Operator<T> {
        CMatrix::from_blocks(&self.a, &self.b, &self.c, &self.d)
    }
}

/// One factor of an ordered product, with its derivative in `u`.
struct Factor<T: Real> {
    value: Operator<T>,
    derivative: Option<Operator<T>>,
    /// `None` for the auxiliary space alone, `Some(j)` for aux and site `j` (1-based).
    site: Option<usize>,
}

/// Running product `P` and optionally `dP/du`.
struct Product<T: Real> {
    value: Operator<T>,
    derivative: Option<Operator<T>>,
    factors: usize,
}

impl<T: Real> Product<T> {
    fn identity(n: usize, with_derivative: bool) -> Self {
        let dim = 2 << n;
        Self {
            value: CMatrix::identity(dim),
            derivative: with_derivative.then(|| CMatrix::zeros(dim, dim)),
            factors: n + 1,
        }
    }

    fn apply(m: &mut Operator<T>, g: &Operator<T>, site: Option<usize>, factors: usize) {
        match site {
            None => right_apply_one(m, g, 0, factors),
            Some(j) => right_apply_two(m, g, 0, j, factors),
        }
    }

    fn times(&mut self, f: Factor<T>) {
        if let Some(d) = self.derivative.as_mut() {
            // (P F)' = P' F + P F'
            Self::apply(d, &f.value, f.site, self.factors);
            let mut pf = self.value.clone();
            Self::apply(&mut pf, f.derivative.as_ref().expect("factor derivative"), f.site, self.factors);
            *d = &*d + &pf;
        }
        Self::apply(&mut self.value, &f.value, f.site, self.factors);
    }
}

fn r_factor<T: Real>(arg: Complex<T>, scale: Complex<T>, q: Complex<T>, site: usize, deriv: bool) -> Result<Factor<T>> {
    Ok(Factor {
        value: r_matrix(arg, q)?,
        derivative: if deriv { Some(r_matrix_derivative(arg, q)?.scale(scale)) } else { None },
        site: Some(site),
    })
}

fn t_factors<T: Real>(u: Complex<T>, m: &ModelParams<T>, deriv: bool) -> Result<Vec<Factor<T>>> {
    m.x().iter().enumerate().map(|(j, x)| r_factor(u / *x, x.inv(), m.q(), j + 1, deriv)).collect()
}

fn hat_factors<T: Real>(u: Complex<T>, m: &ModelParams<T>, deriv: bool) -> Result<Vec<Factor<T>>> {
    m.x().iter().enumerate().rev().map(|(j, x)| r_factor(u * *x, *x, m.q(), j + 1, deriv)).collect()
}

fn product<T: Real>(n: usize, factors: Vec<Factor<T>>, deriv: bool) -> Product<T> {
    let mut p = Product::identity(n, deriv);
    for f in factors {
        p.times(f);
    }
    p
}

/// `T_a(u) = R_{a1}(u/x_1) ... R_{aN}(u/x_N)`.
pub fn monodromy<T: Real>(u: Complex<T>, m: &ModelParams<T>) -> Result<BlockMonodromy<T>> {
    check_u(u)?;
    Ok(BlockMonodromy::from_full(&product(m.n(), t_factors(u, m, false)?, false).value))
}

/// `T^_a(u) = R_{aN}(u x_N) ... R_{a1}(u x_1)`.
pub fn hat_monodromy<T: Real>(u: Complex<T>, m: &ModelParams<T>) -> Result<BlockMonodromy<T>> {
    check_u(u)?;
    Ok(BlockMonodromy::from_full(&product(m.n(), hat_factors(u, m, false)?, false).value))
}

fn double_row_product<T: Real>(u: Complex<T>, m: &ModelParams<T>, deriv: bool) -> Result<Product<T>> {
    check_u(u)?;
    let mut factors = t_factors(u, m, deriv)?;
    factors.push(Factor {
        value: k_minus(u, m)?,
        derivative: if deriv { Some(k_minus_derivative(u, m)?) } else { None },
        site: None,
    });
    factors.extend(hat_factors(u, m, deriv)?);
    Ok(product(m.n(), factors, deriv))
}

/// Blocks of `K_a(u) = T_a(u) K^-_a(u) T^_a(u)` as they stand (the lower-right
/// block is not shifted).
pub fn double_row_matrix<T: Real>(u: Complex<T>, m: &ModelParams<T>) -> Result<BlockMonodromy<T>> {
    Ok(BlockMonodromy::from_full(&double_row_product(u, m, false)?.value))
}

/// `(q - q^{-1}) / (q u^2 - q^{-1} u^{-2})`, the shift between the lower-right
/// block of `K_a(u)` and the operator `D(u)`.
pub(crate) fn d_shift<T: Real>(u: Complex<T>, q: Complex<T>) -> Result<Complex<T>> {
    let (a, b) = (q * u * u, (q * u * u).inv());
    let den = a - b;
    if cabs(den) <= T::epsilon() * T::of(64.0) * (cabs(a) + cabs(b)) {
        return Err(Error::CrossingSingularity { re: u.re.to_f64_lossy(), im: u.im.to_f64_lossy() });
    }
    Ok((q - q.inv()) / den)
}

/// Double-row operators `A, B, C, D`.
pub fn double_row_operators<T: Real>(u: Complex<T>, m: &ModelParams<T>) -> Result<BlockMonodromy<T>> {
    let shift = d_shift(u, m.q())?;
    let mut k = double_row_matrix(u, m)?;
    k.d = &k.d - &k.a.scale(shift);
    Ok(k)
}

fn trace_with_k_plus<T: Real>(kp: &Operator<T>, k: &BlockMonodromy<T>) -> Operator<T> {
    // Tr_a (K^+ K): sum_{ij} K^+_{ij} K_{ji}
    let mut t = k.a.scale(kp[(0, 0)]);
    t = &t + &k.c.scale(kp[(0, 1)]);
    t = &t + &k.b.scale(kp[(1, 0)]);
    &t + &k.d.scale(kp[(1, 1)])
}

/// `t(u) = Tr_a K^+_a(u) T_a(u) K^-_a(u) T^_a(u)`.
pub fn transfer_matrix<T: Real>(u: Complex<T>, m: &ModelParams<T>) -> Result<Operator<T>> {
    Ok(trace_with_k_plus(&k_plus(u, m)?, &double_row_matrix(u, m)?))
}

/// `(t(u), dt/du)` by the product rule over all R- and K-factors.
pub fn transfer_matrix_derivative<T: Real>(u: Complex<T>, m: &ModelParams<T>) -> Result<(Operator<T>, Operator<T>)> {
    let p = double_row_product(u, m, true)?;
    let k = BlockMonodromy::from_full(&p.value);
    let dk = BlockMonodromy::from_full(p.derivative.as_ref().expect("derivative requested"));
    let kp = k_plus(u, m)?;
    let dkp = k_plus_derivative(u, m)?;
    let t = trace_with_k_plus(&kp, &k);
    let dt = &trace_with_k_plus(&dkp, &k) + &trace_with_k_plus(&kp, &dk);
    Ok((t, dt))
}

#[cfg(test)]
mod tests {
    use super::super::local::embed;
    use super::*;
    use crate::params::{sample_generic_params, ChainMode};
    use crate::real::{cone, cx};

    fn params(n: usize, seed: u64) -> ModelParams<f64> {
        sample_generic_params(seed, n, ChainMode::Inhomogeneous).unwrap()
    }

    /// `R_{aj}` embedded in `aux (x) site_1 (x) ... (x) site_N` by conjugating
    /// `R_{a1}` with the transposition of sites 1 and j, built from adjacent swaps.
    fn embedded_r(r: &Operator<f64>, j: usize, n: usize) -> Operator<f64> {
        let swap = r_matrix(cone::<f64>(), cx(0.6, 0.3)).unwrap();
        let s = |k: usize| embed(&swap, k, n + 1);
        let mut p = CMatrix::identity(2 << n);
        for k in (1..j).chain((1..j.saturating_sub(1)).rev()) {
            p = p.matmul(&s(k));
        }
        p.matmul(&embed(r, 0, n + 1)).matmul(&p)
    }

    #[test]
    fn blocks_reassemble() {
        let m = params(2, 1);
        let u = cx(0.9, 0.3);
        let t = monodromy(u, &m).unwrap();
        assert_eq!(BlockMonodromy::from_full(&t.to_full()), t);
        let k = double_row_matrix(u, &m).unwrap();
        let ops = double_row_operators(u, &m).unwrap();
        let shift = d_shift(u, m.q()).unwrap();
        let back = &ops.d + &ops.a.scale(shift);
        assert!((&back - &k.d).frobenius_norm() <= 1e-15 * k.d.frobenius_norm());
        assert_eq!((&ops.a, &ops.b, &ops.c), (&k.a, &k.b, &k.c));
    }

    #[test]
    fn single_site_monodromy_at_inhomogeneity_is_permutation() {
        let m = params(1, 2);
        let t = monodromy(m.x()[0], &m).unwrap().to_full();
        let p = r_matrix(cone::<f64>(), m.q()).unwrap();
        assert!((&t - &p).frobenius_norm() < 1e-14);
    }

    #[test]
    fn monodromies_match_embedded_products() {
        for n in 1..=3 {
            let m = params(n, 3 + n as u64);
            let u = cx(1.1, -0.4);
            let mut t = CMatrix::identity(2 << n);
            let mut th = CMatrix::identity(2 << n);
            for (j, x) in m.x().iter().enumerate() {
                t = t.matmul(&embedded_r(&r_matrix(u / x, m.q()).unwrap(), j + 1, n));
            }
            for (j, x) in m.x().iter().enumerate().rev() {
                th = th.matmul(&embedded_r(&r_matrix(u * x, m.q()).unwrap(), j + 1, n));
            }
            let got = monodromy(u, &m).unwrap().to_full();
            let got_hat = hat_monodromy(u, &m).unwrap().to_full();
            assert!((&got - &t).frobenius_norm() < 1e-12 * t.frobenius_norm());
            assert!((&got_hat - &th).frobenius_norm() < 1e-12 * th.frobenius_norm());
        }
    }

    #[test]
    fn rtt_relation() {
        // R_{12}(u/v) T_1(u) T_2(v) = T_2(v) T_1(u) R_{12}(u/v) on aux1 (x) aux2 (x) quantum
        for n in 1..=3 {
            let m = params(n, 20 + n as u64);
            let (u, v) = (cx(0.8, 0.5), cx(1.3, -0.2));
            let dim = 1 << n;
            let lift = |t: &Operator<f64>, first: bool| {
                // t on aux (x) quantum -> aux1 (x) aux2 (x) quantum
                CMatrix::from_fn(4 * dim, 4 * dim, |i, j| {
                    let (a1, a2, r) = (i / (2 * dim), (i / dim) % 2, i % dim);
                    let (b1, b2, c) = (j / (2 * dim), (j / dim) % 2, j % dim);
                    if first {
                        if a2 != b2 { return cx(0.0, 0.0); }
                        t[(a1 * dim + r, b1 * dim + c)]
                    } else {
                        if a1 != b1 { return cx(0.0, 0.0); }
                        t[(a2 * dim + r, b2 * dim + c)]
                    }
                })
            };
            let t1 = lift(&monodromy(u, &m).unwrap().to_full(), true);
            let t2 = lift(&monodromy(v, &m).unwrap().to_full(), false);
            let r = r_matrix(u / v, m.q()).unwrap().kron(&CMatrix::identity(dim));
            let lhs = r.matmul(&t1).matmul(&t2);
            let rhs = t2.matmul(&t1).matmul(&r);
            let scale = r.frobenius_norm().powi(2) * t1.frobenius_norm() * t2.frobenius_norm();
            assert!((&lhs - &rhs).frobenius_norm() < 1e-12 * scale, "N={n}");
        }
    }

    #[test]
    fn single_site_transfer_matches_brute_force() {
        let m = params(1, 9);
        let u = cx(0.7, 0.6);
        let x = m.x()[0];
        let t = r_matrix(u / x, m.q()).unwrap();
        let th = r_matrix(u * x, m.q()).unwrap();
        let km = k_minus(u, &m).unwrap().kron(&CMatrix::identity(2));
        let kp = k_plus(u, &m).unwrap().kron(&CMatrix::identity(2));
        let full = kp.matmul(&t).matmul(&km).matmul(&th);
        // partial trace over the auxiliary (first) factor
        let want = CMatrix::from_fn(2, 2, |i, j| full[(i, j)] + full[(2 + i, 2 + j)]);
        let got = transfer_matrix(u, &m).unwrap();
        assert!((&got - &want).frobenius_norm() < 1e-13 * want.frobenius_norm());
    }

    #[test]
    fn analytic_derivative_matches_finite_difference() {
        let m = params(3, 4);
        let u = cx(0.95, 0.2);
        let (t, dt) = transfer_matrix_derivative(u, &m).unwrap();
        assert!((&t - &transfer_matrix(u, &m).unwrap()).frobenius_norm() < 1e-13 * t.frobenius_norm());
        let h = 1e-5;
        let fd = (&transfer_matrix(u + h, &m).unwrap() - &transfer_matrix(u - h, &m).unwrap()).scale(cx(0.5 / h, 0.0));
        assert!((&dt - &fd).frobenius_norm() < 1e-7 * dt.frobenius_norm());
    }

    #[test]
    fn crossing_singularity_detected() {
        let m = params(2, 5);
        let u = crate::real::csqrt(crate::real::csqrt(m.q().inv() * m.q().inv()));
        assert!(matches!(double_row_operators(u, &m), Err(Error::CrossingSingularity { .. })));
    }
}
