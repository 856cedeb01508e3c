use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{derive_hamiltonian_couplings, modified_constants, BoundaryParams, ModelParams, GENERICITY_TOL};
use crate::error::{Error, Result};
use crate::real::{cabs, cone, cpow, Real};

/// Attempts before [`sample_generic_params`] gives up.
pub const SAMPLE_RETRIES: usize = 64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainMode {
    #[default]
    Inhomogeneous,
    /// All inhomogeneities equal to 1.
    Homogeneous,
}

impl std::str::FromStr for ChainMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inhomogeneous" => Ok(Self::Inhomogeneous),
            "homogeneous" => Ok(Self::Homogeneous),
            other => Err(Error::Parse(format!("unknown chain mode `{other}`"))),
        }
    }
}

fn polar(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Complex<f64> {
    let r = (rng.gen_range(lo.ln()..hi.ln())).exp();
    Complex::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

fn draw(rng: &mut ChaCha8Rng, n: usize, mode: ChainMode) -> Result<ModelParams<f64>> {
    let q = polar(rng, 0.5, 2.0);
    let x = match mode {
        ChainMode::Homogeneous => vec![cone(); n],
        ChainMode::Inhomogeneous => (0..n).map(|_| polar(rng, 0.7, 1.4)).collect(),
    };
    let mut b = [cone(); 8];
    for z in b.iter_mut() {
        *z = polar(rng, 0.5, 2.0);
    }
    ModelParams::new(q, x, BoundaryParams::from_array(b))
}

fn small<T: Real>(z: Complex<T>, scale: T) -> bool {
    cabs(z) <= T::of(GENERICITY_TOL) * scale.max(T::one())
}

/// Genericity conditions beyond [`ModelParams::new`]: every denominator met by
/// the Hamiltonian couplings, the modified operators and the scalar-product
/// normalization stays away from zero.
pub(crate) fn genericity_violation<T: Real>(m: &ModelParams<T>) -> Option<String> {
    if let Err(e) = derive_hamiltonian_couplings(m) {
        return Some(e.to_string());
    }
    if let Err(e) = modified_constants(m) {
        return Some(e.to_string());
    }
    let b = m.boundary();
    for (name, z) in [("mu", b.mu), ("mu_tilde", b.mu_tilde), ("xi", b.xi), ("xi_tilde", b.xi_tilde)] {
        if small(z * z + cone(), T::one()) {
            return Some(format!("{name}^2 = -1"));
        }
    }
    let q = m.q();
    let n = m.n() as i32;
    let ratio = b.kappa_tilde * b.tau_tilde / (b.kappa * b.tau);
    let families = [
        ("xi_tilde^2/xi^2 q^(2-4N)", (b.xi_tilde / b.xi).powu(2) * cpow(q, 2 - 4 * n), 4),
        ("-ratio mu_tilde xi/(mu xi_tilde) q^(1-N)", -ratio * b.mu_tilde * b.xi / (b.mu * b.xi_tilde) * cpow(q, 1 - n), 2),
        ("-ratio mu xi_tilde/(mu_tilde xi) q^(1-N)", -ratio * b.mu * b.xi_tilde / (b.mu_tilde * b.xi) * cpow(q, 1 - n), 2),
        ("-ratio mu_tilde xi_tilde/(mu xi) q^(1-3N)", -ratio * b.mu_tilde * b.xi_tilde / (b.mu * b.xi) * cpow(q, 1 - 3 * n), 2),
    ];
    for (name, base, step) in families {
        for k in 0..m.n() {
            let term = base * cpow(q, step * k as i32);
            if small(cone::<T>() - term, cabs(term)) {
                return Some(format!("Pochhammer factor ({name}; q^{step}) vanishes at k = {k}"));
            }
        }
    }
    None
}

/// Draws a generic parameter set for chain length `n`. Deterministic in
/// `(seed, n, mode)`; retries on a fixed sequence of independent substreams.
pub fn sample_generic_params<T: Real>(seed: u64, n: usize, mode: ChainMode) -> Result<ModelParams<T>> {
    if n == 0 {
        return Err(Error::InvalidParams("chain length N must be at least 1".into()));
    }
    let mut last = String::new();
    for attempt in 0..SAMPLE_RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt as u64);
        let candidate = match draw(&mut rng, n, mode) {
            Ok(p) => p.convert::<T>(),
            Err(e) => {
                last = e.to_string();
                continue;
            }
        };
        match genericity_violation(&candidate) {
            None => return Ok(candidate),
            Some(reason) => last = reason,
        }
    }
    Err(Error::GenericityFailure { attempts: SAMPLE_RETRIES, reason: last })
}
