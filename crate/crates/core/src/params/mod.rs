//! Model parameters: chain length, deformation, inhomogeneities and the eight
//! fundamental boundary parameters, plus everything derived from them
//! algebraically (K-matrix entries, Hamiltonian couplings, the constants of
//! the modified creation/annihilation operators).

mod sampling;
mod text;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::real::{cabs, cone, cpow, i_unit, Real};

pub use sampling::{sample_generic_params, ChainMode, SAMPLE_RETRIES};

/// Relative genericity threshold for distinctness and non-vanishing checks.
pub const GENERICITY_TOL: f64 = 1e-6;

/// The fundamental boundary parameters. The K-matrices use the squares of
/// `kappa`, `tau` and their tilded partners; the unsquared values enter the
/// scalar-product normalization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryParams<T: Real> {
    pub kappa: Complex<T>,
    pub kappa_tilde: Complex<T>,
    pub tau: Complex<T>,
    pub tau_tilde: Complex<T>,
    pub xi: Complex<T>,
    pub xi_tilde: Complex<T>,
    pub mu: Complex<T>,
    pub mu_tilde: Complex<T>,
}

impl<T: Real> BoundaryParams<T> {
    pub(crate) const NAMES: [&'static str; 8] = ["kappa", "kappa_tilde", "tau", "tau_tilde", "xi", "xi_tilde", "mu", "mu_tilde"];

    pub fn as_array(&self) -> [Complex<T>; 8] {
        [self.kappa, self.kappa_tilde, self.tau, self.tau_tilde, self.xi, self.xi_tilde, self.mu, self.mu_tilde]
    }

    pub fn from_array(v: [Complex<T>; 8]) -> Self {
        let [kappa, kappa_tilde, tau, tau_tilde, xi, xi_tilde, mu, mu_tilde] = v;
        Self { kappa, kappa_tilde, tau, tau_tilde, xi, xi_tilde, mu, mu_tilde }
    }

    /// All entries finite and nonzero.
    pub fn validate(&self) -> Result<()> {
        for (name, z) in Self::NAMES.iter().zip(self.as_array()) {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::InvalidParams(format!("{name} is not finite")));
            }
            if cabs(z) == T::zero() {
                return Err(Error::ZeroParameter(name));
            }
        }
        Ok(())
    }

    pub fn convert<U: Real>(&self) -> BoundaryParams<U> {
        BoundaryParams::from_array(self.as_array().map(crate::real::convert))
    }
}

/// Diagonal entries of `K^-` (`nu_-`, `nu_+`) and `K^+` (`eps_-`, `eps_+`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SklyaninEntries<T: Real> {
    pub nu_minus: Complex<T>,
    pub nu_plus: Complex<T>,
    pub eps_minus: Complex<T>,
    pub eps_plus: Complex<T>,
}

/// `nu_-`, `nu_+`, `eps_-`, `eps_+` from the fundamental boundary parameters.
pub fn derive_sklyanin_entries<T: Real>(b: &BoundaryParams<T>) -> Result<SklyaninEntries<T>> {
    for (name, z) in [("mu", b.mu), ("mu_tilde", b.mu_tilde), ("xi", b.xi), ("xi_tilde", b.xi_tilde)] {
        if cabs(z) == T::zero() {
            return Err(Error::ZeroParameter(name));
        }
    }
    let i = i_unit::<T>();
    let one = cone::<T>();
    let tt = i * b.tau_tilde * b.tau;
    let kk = i * b.kappa_tilde * b.kappa;
    Ok(SklyaninEntries {
        nu_minus: tt * (b.mu / b.mu_tilde + b.mu_tilde / b.mu),
        nu_plus: tt * (b.mu * b.mu_tilde + one / (b.mu * b.mu_tilde)),
        eps_minus: kk * (b.xi / b.xi_tilde + b.xi_tilde / b.xi),
        eps_plus: kk * (b.xi * b.xi_tilde + one / (b.xi_tilde * b.xi)),
    })
}

/// Boundary couplings of the spin-chain Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HamiltonianCouplings<T: Real> {
    /// Left `sigma^3` field.
    pub epsilon: Complex<T>,
    pub kappa_minus: Complex<T>,
    pub kappa_plus: Complex<T>,
    /// Right `sigma^3` field.
    pub nu: Complex<T>,
    pub tau_minus: Complex<T>,
    pub tau_plus: Complex<T>,
}

impl<T: Real> HamiltonianCouplings<T> {
    /// Couplings from the K-matrix entries directly; `squares` holds
    /// `(kappa^2, kappa_tilde^2, tau^2, tau_tilde^2)`.
    pub fn from_k_entries(q: Complex<T>, e: &SklyaninEntries<T>, squares: [Complex<T>; 4]) -> Result<Self> {
        let [kappa_sq, kappa_tilde_sq, tau_sq, tau_tilde_sq] = squares;
        let eps_sum = e.eps_plus + e.eps_minus;
        let nu_sum = e.nu_plus + e.nu_minus;
        let tol = T::of(GENERICITY_TOL);
        if cabs(eps_sum) <= tol * (cabs(e.eps_plus) + cabs(e.eps_minus)) || cabs(eps_sum) == T::zero() {
            return Err(Error::DegenerateBoundary("eps_+ + eps_-"));
        }
        if cabs(nu_sum) <= tol * (cabs(e.nu_plus) + cabs(e.nu_minus)) || cabs(nu_sum) == T::zero() {
            return Err(Error::DegenerateBoundary("nu_+ + nu_-"));
        }
        let c = q - q.inv();
        let two = T::of(2.0);
        Ok(Self {
            epsilon: c / two * (e.eps_plus - e.eps_minus) / eps_sum,
            kappa_minus: c * two / eps_sum * kappa_sq,
            kappa_plus: c * two / eps_sum * kappa_tilde_sq,
            nu: c / two * (e.nu_minus - e.nu_plus) / nu_sum,
            tau_minus: c * two / nu_sum * tau_tilde_sq,
            tau_plus: c * two / nu_sum * tau_sq,
        })
    }
}

/// Chain length, deformation parameter, inhomogeneities and boundary data.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams<T: Real> {
    n: usize,
    q: Complex<T>,
    x: Vec<Complex<T>>,
    boundary: BoundaryParams<T>,
}

impl<T: Real> ModelParams<T> {
    /// Validates: `N >= 1`, `q` nonzero and not a root of unity of order up to
    /// `4N + 8`, inhomogeneities pairwise distinct (or all exactly 1), boundary
    /// parameters finite and nonzero.
    pub fn new(q: Complex<T>, x: Vec<Complex<T>>, boundary: BoundaryParams<T>) -> Result<Self> {
        let n = x.len();
        if n == 0 {
            return Err(Error::InvalidParams("chain length N must be at least 1".into()));
        }
        if !(q.re.is_finite() && q.im.is_finite()) || cabs(q) == T::zero() {
            return Err(Error::InvalidParams("q must be finite and nonzero".into()));
        }
        let tol = T::of(GENERICITY_TOL);
        for k in 1..=(4 * n as i32 + 8) {
            if cabs(cpow(q, 2 * k) - cone()) <= tol {
                return Err(Error::InvalidParams(format!("q is (numerically) a root of unity: q^{} = 1", 2 * k)));
            }
        }
        boundary.validate()?;
        let homogeneous = x.iter().all(|z| *z == cone());
        if !homogeneous {
            for (i, a) in x.iter().enumerate() {
                if !(a.re.is_finite() && a.im.is_finite()) || cabs(*a) == T::zero() {
                    return Err(Error::InvalidParams(format!("x_{} must be finite and nonzero", i + 1)));
                }
                for (j, b) in x.iter().enumerate().skip(i + 1) {
                    if cabs(*a - *b) <= tol * cabs(*a).max(cabs(*b)) {
                        return Err(Error::InvalidParams(format!("x_{} and x_{} coincide", i + 1, j + 1)));
                    }
                }
            }
        }
        Ok(Self { n, q, x, boundary })
    }

    /// Homogeneous chain `x_i = 1`.
    pub fn homogeneous(n: usize, q: Complex<T>, boundary: BoundaryParams<T>) -> Result<Self> {
        Self::new(q, vec![cone(); n], boundary)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension `2^N` of the quantum space.
    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn q(&self) -> Complex<T> {
        self.q
    }

    pub fn x(&self) -> &[Complex<T>] {
        &self.x
    }

    pub fn boundary(&self) -> &BoundaryParams<T> {
        &self.boundary
    }

    pub fn is_homogeneous(&self) -> bool {
        self.x.iter().all(|z| *z == cone())
    }

    /// Same chain with different boundary parameters.
    pub fn with_boundary(&self, boundary: BoundaryParams<T>) -> Result<Self> {
        Self::new(self.q, self.x.clone(), boundary)
    }

    pub fn sklyanin(&self) -> SklyaninEntries<T> {
        derive_sklyanin_entries(&self.boundary).expect("validated boundary parameters are nonzero")
    }

    /// `(kappa^2, kappa_tilde^2, tau^2, tau_tilde^2)`.
    pub fn squares(&self) -> [Complex<T>; 4] {
        let b = &self.boundary;
        [b.kappa * b.kappa, b.kappa_tilde * b.kappa_tilde, b.tau * b.tau, b.tau_tilde * b.tau_tilde]
    }

    pub fn convert<U: Real>(&self) -> ModelParams<U> {
        ModelParams {
            n: self.n,
            q: crate::real::convert(self.q),
            x: self.x.iter().map(|z| crate::real::convert(*z)).collect(),
            boundary: self.boundary.convert(),
        }
    }
}

pub fn derive_hamiltonian_couplings<T: Real>(m: &ModelParams<T>) -> Result<HamiltonianCouplings<T>> {
    HamiltonianCouplings::from_k_entries(m.q(), &m.sklyanin(), m.squares())
}

/// `alpha`, `beta` of the modified operators; `gamma_m = alpha q^{-m} - beta q^m`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModifiedConstants<T: Real> {
    pub alpha: Complex<T>,
    pub beta: Complex<T>,
    q: Complex<T>,
    n: usize,
}

impl<T: Real> ModifiedConstants<T> {
    /// Constants without the non-vanishing check on `gamma_m`.
    pub fn unchecked(m: &ModelParams<T>) -> Self {
        let b = m.boundary();
        let q = m.q();
        let n = m.n() as i32;
        let i = i_unit::<T>();
        let beta = -i * (b.kappa_tilde * b.xi_tilde / (b.kappa * b.xi)) * cpow(q, 1 - 2 * n);
        let alpha = -i * (b.kappa_tilde * b.xi / (b.kappa * b.xi_tilde)) * cpow(q, 1 + 2 * n);
        Self { alpha, beta, q, n: m.n() }
    }

    pub fn gamma(&self, m: i32) -> Complex<T> {
        self.alpha * cpow(self.q, -m) - self.beta * cpow(self.q, m)
    }

    /// Odd indices `m` in `[-2N+1, 2N+1]`.
    pub fn checked_indices(&self) -> impl Iterator<Item = i32> {
        let n = self.n as i32;
        (-2 * n + 1..=2 * n + 1).step_by(2)
    }

    /// `|gamma_m| < tol * max(1, |alpha q^{-m}| + |beta q^m|)`.
    pub fn is_singular(&self, m: i32) -> bool {
        let scale = (cabs(self.alpha * cpow(self.q, -m)) + cabs(self.beta * cpow(self.q, m))).max(T::one());
        cabs(self.gamma(m)) < T::of(GENERICITY_TOL) * scale
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Modified-operator constants, rejecting parameter sets where some `gamma_m`
/// used by the Bethe vectors vanishes.
pub fn modified_constants<T: Real>(m: &ModelParams<T>) -> Result<ModifiedConstants<T>> {
    let c = ModifiedConstants::unchecked(m);
    let bad: Vec<i32> = c.checked_indices().filter(|&k| c.is_singular(k)).collect();
    if bad.is_empty() {
        Ok(c)
    } else {
        Err(Error::SingularGamma(bad))
    }
}

/// `(b; q)_n = prod_{k=0}^{n-1} (1 - b q^k)`.
pub fn q_pochhammer<T: Real>(b: Complex<T>, q: Complex<T>, n: usize) -> Complex<T> {
    let mut acc = cone::<T>();
    let mut qk = cone::<T>();
    for _ in 0..n {
        acc = acc * (cone::<T>() - b * qk);
        qk = qk * q;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::cx;
    use proptest::prelude::*;

    fn boundary(seed: f64) -> BoundaryParams<f64> {
        let z = |k: f64| Complex::from_polar(0.6 + 0.17 * ((seed + k) * 1.3).sin().abs() * 7.0, seed * 0.7 + k * 1.9);
        BoundaryParams::from_array([z(1.0), z(2.0), z(3.0), z(4.0), z(5.0), z(6.0), z(7.0), z(8.0)])
    }

    fn model(seed: f64, n: usize) -> ModelParams<f64> {
        let q = Complex::from_polar(0.9 + 0.05 * seed, 0.4 + 0.1 * seed);
        let x = (0..n).map(|k| Complex::from_polar(0.8 + 0.11 * k as f64, 0.3 * k as f64 + seed)).collect();
        ModelParams::new(q, x, boundary(seed)).unwrap()
    }

    #[test]
    fn equal_mu_gives_nu_minus_two_i_tau_tau() {
        let mut b = boundary(0.3);
        b.mu_tilde = b.mu;
        let e = derive_sklyanin_entries(&b).unwrap();
        let want = cx::<f64>(0.0, 2.0) * b.tau_tilde * b.tau;
        assert!((e.nu_minus - want).norm() < 1e-14 * want.norm());
    }

    #[test]
    fn unit_xi_gives_equal_eps() {
        let mut b = boundary(0.8);
        b.xi = cx(1.0, 0.0);
        b.xi_tilde = cx(1.0, 0.0);
        let e = derive_sklyanin_entries(&b).unwrap();
        let want = cx::<f64>(0.0, 2.0) * b.kappa_tilde * b.kappa;
        assert!((e.eps_minus - want).norm() < 1e-14 * want.norm());
        assert!((e.eps_plus - want).norm() < 1e-14 * want.norm());
    }

    #[test]
    fn sklyanin_entries_match_direct_substitution() {
        let b = boundary(1.7);
        let e = derive_sklyanin_entries(&b).unwrap();
        // direct substitution with everything over a common denominator
        let i = cx::<f64>(0.0, 1.0);
        let nu_m = i * b.tau_tilde * b.tau * (b.mu * b.mu + b.mu_tilde * b.mu_tilde) / (b.mu * b.mu_tilde);
        let nu_p = i * b.tau_tilde * b.tau * (b.mu * b.mu * b.mu_tilde * b.mu_tilde + 1.0) / (b.mu * b.mu_tilde);
        let ep_m = i * b.kappa_tilde * b.kappa * (b.xi * b.xi + b.xi_tilde * b.xi_tilde) / (b.xi * b.xi_tilde);
        let ep_p = i * b.kappa_tilde * b.kappa * (b.xi * b.xi * b.xi_tilde * b.xi_tilde + 1.0) / (b.xi * b.xi_tilde);
        for (got, want) in [(e.nu_minus, nu_m), (e.nu_plus, nu_p), (e.eps_minus, ep_m), (e.eps_plus, ep_p)] {
            assert!((got - want).norm() <= 1e-14 * want.norm(), "{got} vs {want}");
        }
    }

    #[test]
    fn zero_mu_rejected() {
        let mut b = boundary(0.1);
        b.mu = cx(0.0, 0.0);
        assert_eq!(derive_sklyanin_entries(&b), Err(Error::ZeroParameter("mu")));
        assert_eq!(b.validate(), Err(Error::ZeroParameter("mu")));
    }

    #[test]
    fn equal_eps_gives_zero_epsilon() {
        let mut b = boundary(0.5);
        b.xi_tilde = cx(1.0, 0.0);
        let m = model(0.5, 2).with_boundary(b).unwrap();
        let h = derive_hamiltonian_couplings(&m).unwrap();
        assert!(h.epsilon.norm() < 1e-15);
    }

    #[test]
    fn vanishing_kappa_tilde_square_gives_zero_kappa_plus() {
        let m = model(0.2, 2);
        let [k2, _, t2, tt2] = m.squares();
        let h = HamiltonianCouplings::from_k_entries(m.q(), &m.sklyanin(), [k2, cx(0.0, 0.0), t2, tt2]).unwrap();
        assert_eq!(h.kappa_plus, cx(0.0, 0.0));
    }

    #[test]
    fn couplings_match_direct_substitution() {
        let m = model(2.2, 3);
        let h = derive_hamiltonian_couplings(&m).unwrap();
        let b = m.boundary();
        let q = m.q();
        let c = q - 1.0 / q;
        let i = cx::<f64>(0.0, 1.0);
        // expand eps_+ +- eps_- and nu_+ +- nu_- by hand
        let kk = i * b.kappa_tilde * b.kappa;
        let tt = i * b.tau_tilde * b.tau;
        let ep = kk * (b.xi * b.xi_tilde + 1.0 / (b.xi * b.xi_tilde));
        let em = kk * (b.xi / b.xi_tilde + b.xi_tilde / b.xi);
        let np = tt * (b.mu * b.mu_tilde + 1.0 / (b.mu * b.mu_tilde));
        let nm = tt * (b.mu / b.mu_tilde + b.mu_tilde / b.mu);
        let checks = [
            (h.epsilon, 0.5 * c * (ep - em) / (ep + em)),
            (h.kappa_minus, 2.0 * c * b.kappa * b.kappa / (ep + em)),
            (h.kappa_plus, 2.0 * c * b.kappa_tilde * b.kappa_tilde / (ep + em)),
            (h.nu, 0.5 * c * (nm - np) / (np + nm)),
            (h.tau_minus, 2.0 * c * b.tau_tilde * b.tau_tilde / (np + nm)),
            (h.tau_plus, 2.0 * c * b.tau * b.tau / (np + nm)),
        ];
        for (got, want) in checks {
            assert!((got - want).norm() <= 1e-14 * want.norm().max(1e-300), "{got} vs {want}");
        }
    }

    #[test]
    fn degenerate_boundary_detected() {
        let m = model(0.9, 2);
        let mut e = m.sklyanin();
        e.eps_minus = -e.eps_plus;
        assert_eq!(
            HamiltonianCouplings::from_k_entries(m.q(), &e, m.squares()),
            Err(Error::DegenerateBoundary("eps_+ + eps_-"))
        );
    }

    #[test]
    fn modified_constants_identities() {
        let m = model(1.1, 3);
        let c = modified_constants(&m).unwrap();
        let b = m.boundary();
        let q = m.q();
        let want = -(b.kappa_tilde / b.kappa).powu(2) * q * q;
        assert!((c.alpha * c.beta - want).norm() < 1e-13 * want.norm());
        assert!((c.gamma(0) - (c.alpha - c.beta)).norm() < 1e-15 * c.alpha.norm());
        // independent evaluator: expand alpha, beta inline
        for mm in [-5, -1, 3, 7] {
            let i = cx::<f64>(0.0, 1.0);
            let a = -i * b.kappa_tilde * b.xi / (b.kappa * b.xi_tilde) * q.powi(7 - mm);
            let be = -i * b.kappa_tilde * b.xi_tilde / (b.kappa * b.xi) * q.powi(-5 + mm);
            let want = a - be;
            assert!((c.gamma(mm) - want).norm() < 1e-13 * want.norm());
        }
    }

    #[test]
    fn singular_gamma_reported() {
        let m = model(0.4, 2);
        let b = *m.boundary();
        // alpha / beta = (xi / xi_tilde)^2 q^{4N}, so gamma_1 = 0 when xi_tilde = xi q^{2N-1}
        let fine = BoundaryParams { xi_tilde: b.xi * m.q().powi(3), ..b };
        let m2 = m.with_boundary(fine).unwrap();
        let c = ModifiedConstants::unchecked(&m2);
        assert!(c.gamma(1).norm() < 1e-12 * c.alpha.norm());
        let zero_m: Vec<i32> = c.checked_indices().filter(|&k| c.is_singular(k)).collect();
        assert!(zero_m.contains(&1));
        assert!(matches!(modified_constants(&m2), Err(Error::SingularGamma(v)) if v == zero_m));
    }

    #[test]
    fn pochhammer_small_cases() {
        let q = cx::<f64>(0.3, 0.7);
        let b = cx::<f64>(1.2, -0.4);
        assert_eq!(q_pochhammer(b, q, 0), cx(1.0, 0.0));
        assert_eq!(q_pochhammer(b, q, 1), cx::<f64>(1.0, 0.0) - b);
        assert_eq!(q_pochhammer(cx::<f64>(2.0, 0.0), cx(3.0, 0.0), 2), cx(5.0, 0.0));
    }

    #[test]
    fn root_of_unity_and_duplicates_rejected() {
        let b = boundary(0.0);
        let q = Complex::from_polar(1.0, std::f64::consts::PI / 3.0);
        assert!(matches!(ModelParams::new(q, vec![cx(1.1, 0.0)], b), Err(Error::InvalidParams(_))));
        let q = cx(0.8, 0.3);
        assert!(ModelParams::new(q, vec![cx(1.1, 0.0), cx(1.1, 0.0)], b).is_err());
        assert!(ModelParams::new(q, vec![], b).is_err());
        assert!(ModelParams::homogeneous(3, q, b).unwrap().is_homogeneous());
    }

    proptest! {
        #[test]
        fn pochhammer_recurrence(br in -2.0f64..2.0, bi in -2.0f64..2.0, qr in 0.5f64..1.5, qa in 0.0f64..6.2, n in 0usize..20) {
            let b = cx::<f64>(br, bi);
            let q = Complex::from_polar(qr, qa);
            let lhs = q_pochhammer(b, q, n + 1);
            let rhs = q_pochhammer(b, q, n) * (1.0 - b * q.powi(n as i32));
            prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
        }

        #[test]
        fn gamma_three_term_recurrence(seed in 0.0f64..10.0, m in -12i32..12) {
            let c = ModifiedConstants::unchecked(&model(seed, 3));
            let q = model(seed, 3).q();
            let lhs = c.gamma(m + 2) + c.gamma(m - 2);
            let rhs = (q * q + 1.0 / (q * q)) * c.gamma(m);
            let scale = c.gamma(m + 2).norm() + c.gamma(m - 2).norm();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * scale);
        }
    }
}
