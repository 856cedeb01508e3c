//! Large-`u` behaviour of the monodromies, the double-row matrix and the
//! modified creation operator, expressed through `U_q(sl_2)`-type operators.

use num_complex::Complex;

use super::{modified_b, reference_states};
use crate::error::Result;
use crate::linalg::{vec_norm, vec_sub, CMatrix};
use crate::operators::{double_row_matrix, hat_monodromy, monodromy, BlockMonodromy, Operator};
use crate::params::{ModifiedConstants, ModelParams};
use crate::real::{cone, cpow, csqrt, i_unit, Real};
use crate::report::{CheckRecord, VerificationReport};

pub const DOLAN_GRADY_TOL: f64 = 1e-10;
pub const EIGEN_TOL: f64 = 1e-12;
pub const ASYMPTOTIC_BB_TOL: f64 = 1e-4;

/// Magnitudes of `u` used by the decay fits; the phase is fixed.
const MAGNITUDES: [f64; 2] = [1e3, 1e6];
const PHASE: f64 = 0.37;

/// `S^3`, `S^+-`, hatted `S^+-` and the pair `A`, `A*` on the quantum space.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticOperators<T: Real> {
    pub s3: Operator<T>,
    pub s_plus: Operator<T>,
    pub s_minus: Operator<T>,
    pub hat_s_plus: Operator<T>,
    pub hat_s_minus: Operator<T>,
    pub a: Operator<T>,
    pub a_star: Operator<T>,
    /// Twice the `S^3` eigenvalue of each basis vector.
    twice_s3: Vec<i32>,
    q_half: Complex<T>,
}

fn spin(state: usize, site: usize, n: usize) -> i32 {
    if state >> (n - 1 - site) & 1 == 0 {
        1
    } else {
        -1
    }
}

impl<T: Real> AsymptoticOperators<T> {
    pub fn new(m: &ModelParams<T>) -> Self {
        let n = m.n();
        let dim = 1usize << n;
        let q = m.q();
        let qh = csqrt(q);
        let twice_s3: Vec<i32> = (0..dim).map(|s| (0..n).map(|j| spin(s, j, n)).sum()).collect();
        let s3 = CMatrix::from_diagonal(&twice_s3.iter().map(|&k| Complex::new(T::of(k as f64 / 2.0), T::zero())).collect::<Vec<_>>());

        // x_i q^{-sign L / 2} sigma^{+-}_i q^{sign R / 2} with L, R the sums of
        // sigma^3 left and right of site i; the hatted version flips `sign`
        // and inverts x_i.
        let ladder = |raise: bool, hat: bool| {
            let mut out = CMatrix::zeros(dim, dim);
            let sign = if raise != hat { 1 } else { -1 };
            for (i, x) in m.x().iter().enumerate() {
                let bit = 1usize << (n - 1 - i);
                let weight = if hat { x.inv() } else { *x };
                for s in 0..dim {
                    // sigma^+ maps down (bit set) to up; sigma^- the reverse.
                    if (s & bit != 0) != raise {
                        continue;
                    }
                    let left: i32 = (0..i).map(|j| spin(s, j, n)).sum();
                    let right: i32 = (i + 1..n).map(|j| spin(s, j, n)).sum();
                    out[(s ^ bit, s)] = weight * cpow(qh, sign * (right - left));
                }
            }
            out
        };
        let (s_plus, s_minus) = (ladder(true, false), ladder(false, false));
        let (hat_s_plus, hat_s_minus) = (ladder(true, true), ladder(false, true));

        let qs3 = |k: i32| CMatrix::from_diagonal(&twice_s3.iter().map(|&s| cpow(qh, k * s)).collect::<Vec<_>>());
        let e = m.sklyanin();
        let [_, _, tau2, tau_t2] = m.squares();
        let c = (q - q.inv()) / qh;
        let a = &qs3(2).scale(e.nu_minus)
            + &(&s_minus.matmul(&qs3(1)).scale(tau_t2) + &qs3(1).matmul(&hat_s_plus).scale(tau2)).scale(c);
        let a_star = &qs3(-2).scale(e.nu_plus)
            + &(&s_plus.matmul(&qs3(-1)).scale(tau2) + &qs3(-1).matmul(&hat_s_minus).scale(tau_t2)).scale(c);
        Self { s3, s_plus, s_minus, hat_s_plus, hat_s_minus, a, a_star, twice_s3, q_half: qh }
    }

    /// `q^{k S^3}`.
    pub fn q_pow_s3(&self, k: i32) -> Operator<T> {
        CMatrix::from_diagonal(&self.twice_s3.iter().map(|&s| cpow(self.q_half, k * s)).collect::<Vec<_>>())
    }

    /// `[X, [X, [X, Y]_q]_{q^{-1}}] - (q^2 - q^{-2})^2 tau^2 tau~^2 [X, Y]`
    /// relative to the larger side.
    pub fn dolan_grady_residual(&self, m: &ModelParams<T>, dual: bool) -> T {
        let (x, y) = if dual { (&self.a_star, &self.a) } else { (&self.a, &self.a_star) };
        let q = m.q();
        let qc = |p: &Operator<T>, r: &Operator<T>, k: Complex<T>| &p.matmul(r).scale(k) - &r.matmul(p).scale(k.inv());
        let inner = qc(x, y, q);
        let middle = qc(x, &inner, q.inv());
        let lhs = x.commutator(&middle);
        let [_, _, tau2, tau_t2] = m.squares();
        let k = q * q - (q * q).inv();
        let rhs = x.commutator(y).scale(k * k * tau2 * tau_t2);
        (&lhs - &rhs).frobenius_norm() / lhs.frobenius_norm().max(rhs.frobenius_norm())
    }

    /// `||A|N> - i tau tau~ (q^N mu/mu~ + q^{-N} mu~/mu)|N>|| / ||A|N>||`.
    pub fn a_eigen_residual(&self, m: &ModelParams<T>) -> T {
        let b = m.boundary();
        let n = m.n() as i32;
        let ket = reference_states(m).ket;
        let lambda = i_unit::<T>()
            * b.tau
            * b.tau_tilde
            * (cpow(m.q(), n) * b.mu / b.mu_tilde + cpow(m.q(), -n) * b.mu_tilde / b.mu);
        let av = self.a.mul_vec(&ket);
        let expected: Vec<_> = ket.iter().map(|z| *z * lambda).collect();
        vec_norm(&vec_sub(&av, &expected)) / vec_norm(&av)
    }

    fn aux_diag(&self, top: &Operator<T>, bottom: &Operator<T>) -> Operator<T> {
        let z = CMatrix::zeros(top.rows(), top.cols());
        CMatrix::from_blocks(top, &z, &z, bottom)
    }

    fn aux_offdiag(&self, upper: &Operator<T>, lower: &Operator<T>) -> Operator<T> {
        let z = CMatrix::zeros(upper.rows(), upper.cols());
        CMatrix::from_blocks(&z, upper, lower, &z)
    }

    /// `||(prod x) T_a(u) - two-term expansion|| / ||leading||`, or the hatted
    /// version with `(prod x)^{-1}`.
    pub fn monodromy_remainder(&self, m: &ModelParams<T>, u: Complex<T>, hat: bool) -> Result<T> {
        let n = m.n() as i32;
        let c = m.q() - m.q().inv();
        let prod_x = m.x().iter().fold(cone::<T>(), |acc, x| acc * *x);
        let (full, factor, (up, down)) = if hat {
            (hat_monodromy(u, m)?, prod_x.inv(), (&self.hat_s_plus, &self.hat_s_minus))
        } else {
            (monodromy(u, m)?, prod_x, (&self.s_plus, &self.s_minus))
        };
        let root = self.q_half * u / c;
        let lead = self.aux_diag(&self.q_pow_s3(1), &self.q_pow_s3(-1)).scale(cpow(root, n));
        let second = self.aux_offdiag(down, up).scale(cpow(root, n - 1));
        let rest = &(&full.to_full().scale(factor) - &lead) - &second;
        Ok(rest.frobenius_norm() / lead.frobenius_norm())
    }

    /// `||K_a(u) - (q u^2/c^2)^N [[A u, tau^2 u^2], [tau~^2 u^2, A* u]]|| / ||leading||`.
    pub fn double_row_remainder(&self, m: &ModelParams<T>, u: Complex<T>) -> Result<T> {
        let c = m.q() - m.q().inv();
        let pref = cpow(m.q() * u * u / (c * c), m.n() as i32);
        let [_, _, tau2, tau_t2] = m.squares();
        let id = CMatrix::identity(self.a.rows());
        let lead = BlockMonodromy {
            a: self.a.scale(pref * u),
            b: id.scale(pref * tau2 * u * u),
            c: id.scale(pref * tau_t2 * u * u),
            d: self.a_star.scale(pref * u),
        }
        .to_full();
        let k = double_row_matrix(u, m)?.to_full();
        Ok((&k - &lead).frobenius_norm() / lead.frobenius_norm())
    }
}

/// Relative distance of `B(u, midx)|N>` from its leading large-`u` term.
pub fn creation_on_reference<T: Real>(m: &ModelParams<T>, u: Complex<T>, midx: i32) -> Result<T> {
    let b = m.boundary();
    let q = m.q();
    let n = m.n() as i32;
    let c = q - q.inv();
    let k = ModifiedConstants::unchecked(m);
    let i = i_unit::<T>();
    let [_, _, tau2, _] = m.squares();
    let one = cone::<T>();
    let coefficient = cpow(q * u * u / (c * c), n) * q * u * u * u * tau2
        * (one + i * b.mu_tilde * b.tau_tilde / (b.mu * b.tau) * cpow(q, midx - n) * k.beta)
        * (one + i * b.mu * b.tau_tilde / (b.mu_tilde * b.tau) * cpow(q, midx + n) * k.beta)
        / k.gamma(midx + 1);
    let ket = reference_states(m).ket;
    let got = modified_b(u, midx, m)?.mul_vec(&ket);
    let expected: Vec<_> = ket.iter().map(|z| *z * coefficient).collect();
    Ok(vec_norm(&vec_sub(&got, &expected)) / vec_norm(&expected))
}

fn at(mag: f64) -> Complex<f64> {
    Complex::from_polar(mag, PHASE)
}

/// `log10` of the remainder ratio between the two magnitudes; two powers of
/// `u` of extra decay give 6.
fn decay_record<T: Real>(name: &str, f: impl Fn(Complex<T>) -> Result<T>) -> Result<CheckRecord> {
    let small = f(crate::real::convert(at(MAGNITUDES[0])))?.to_f64_lossy();
    let large = f(crate::real::convert(at(MAGNITUDES[1])))?.to_f64_lossy();
    Ok(CheckRecord::deviation(name, (small / large).log10(), 6.0, 1.0)
        .with_input("remainder_small_u", small)
        .with_input("remainder_large_u", large))
}

/// Operator-level large-`u` checks at `|u|` in `{1e3, 1e6}`.
pub fn asymptotic_operator_suite<T: Real>(m: &ModelParams<T>) -> Result<VerificationReport> {
    let ops = AsymptoticOperators::new(m);
    let mut report = VerificationReport::new();
    let n = m.n();
    report.push(decay_record("monodromy_decay", |u| ops.monodromy_remainder(m, u, false))?.with_input("n", n));
    report.push(decay_record("hat_monodromy_decay", |u| ops.monodromy_remainder(m, u, true))?.with_input("n", n));
    report.push(decay_record("double_row_decay", |u| ops.double_row_remainder(m, u))?.with_input("n", n));
    report.push(CheckRecord::new("dolan_grady", ops.dolan_grady_residual(m, false).to_f64_lossy(), DOLAN_GRADY_TOL).with_input("n", n));
    report.push(CheckRecord::new("dolan_grady_dual", ops.dolan_grady_residual(m, true).to_f64_lossy(), DOLAN_GRADY_TOL).with_input("n", n));
    report.push(CheckRecord::new("a_eigenvalue", ops.a_eigen_residual(m).to_f64_lossy(), EIGEN_TOL).with_input("n", n));
    for midx in super::m_sequence(n, super::Side::Ket) {
        let value = creation_on_reference(m, crate::real::convert(at(MAGNITUDES[1])), midx)?.to_f64_lossy();
        report.push(
            CheckRecord::new("creation_on_reference", value, ASYMPTOTIC_BB_TOL)
                .with_input("n", n)
                .with_input("m", midx)
                .with_input("precision", T::LABEL),
        );
    }
    Ok(report)
}
