use num_complex::Complex;

use super::SpectralContext;
use crate::error::{Error, Result};
use crate::real::{cabs, Real};

/// An ordered set of spectral parameters with its Bethe-equation residuals.
#[derive(Clone, Debug, PartialEq)]
pub struct BetheRoots<T: Real> {
    pub roots: Vec<Complex<T>>,
    /// `U(u_i)` for each root.
    pub u_values: Vec<Complex<T>>,
    pub onshell: bool,
    /// `|Y(u_i|ubar)| / max(|phi(u_i) Q(u_i/q, ubar)|, |H(u_i)|)`.
    pub residuals: Vec<f64>,
    pub eigen_index: Option<usize>,
    /// Condition number of the coefficient solve that produced the roots (0 if not solved).
    pub condition: f64,
}

impl<T: Real> BetheRoots<T> {
    /// Wraps an arbitrary set, computing residuals; `onshell` uses the default tolerance.
    pub fn new(roots: Vec<Complex<T>>, ctx: &SpectralContext<T>) -> Result<Self> {
        let u_values: Vec<Complex<T>> = roots.iter().map(|u| ctx.big_u(*u)).collect();
        let scale = u_values.iter().fold(T::one(), |acc, z| acc.max(cabs(*z)));
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                if cabs(u_values[i] - u_values[j]) <= T::of(1e-6) * scale {
                    return Err(Error::InvalidInput(format!("roots {i} and {j} coincide in U")));
                }
            }
        }
        let residuals = roots
            .iter()
            .map(|u| {
                let y = cabs(ctx.y(*u, &roots)?);
                let s = ctx.y_scale(*u, &roots)?;
                Ok(if s == T::zero() { y } else { y / s }.to_f64_lossy())
            })
            .collect::<Result<Vec<f64>>>()?;
        let onshell = residuals.iter().all(|r| *r <= super::ONSHELL_TOL);
        Ok(Self { roots, u_values, onshell, residuals, eigen_index: None, condition: 0.0 })
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// NaN-propagating maximum of the residuals.
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |acc: f64, r| if r.is_nan() || acc.is_nan() { f64::NAN } else { acc.max(*r) })
    }
}

impl BetheRoots<f64> {
    /// Text record: `key value` lines with round-trip precision.
    pub fn to_text(&self, ctx: &SpectralContext<f64>) -> String {
        let q = ctx.q();
        let mut out = format!("N {}\nq_re {:?}\nq_im {:?}\nM {}\n", ctx.n(), q.re, q.im, self.roots.len());
        match self.eigen_index {
            Some(i) => out.push_str(&format!("eigen_index {i}\n")),
            None => out.push_str("eigen_index none\n"),
        }
        out.push_str(&format!("onshell {}\ncondition {:?}\n", self.onshell, self.condition));
        for (i, (u, r)) in self.roots.iter().zip(&self.residuals).enumerate() {
            out.push_str(&format!("root_{i}_re {:?}\nroot_{i}_im {:?}\nresidual_{i} {:?}\n", u.re, u.im, r));
        }
        out
    }

    /// Parses a record written by [`BetheRoots::to_text`]; `N` and `q` must
    /// match the context and `U`-values are recomputed.
    pub fn from_text(text: &str, ctx: &SpectralContext<f64>) -> Result<Self> {
        let mut map = std::collections::HashMap::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (k, v) = line.split_once(' ').ok_or_else(|| Error::Parse(format!("expected `key value`, got `{line}`")))?;
            map.insert(k.to_string(), v.trim().to_string());
        }
        let get = |k: &str| map.get(k).cloned().ok_or_else(|| Error::Parse(format!("missing key `{k}`")));
        let num = |k: &str| -> Result<f64> { get(k)?.parse().map_err(|e| Error::Parse(format!("bad `{k}`: {e}"))) };
        let n: usize = get("N")?.parse().map_err(|e| Error::Parse(format!("bad N: {e}")))?;
        if n != ctx.n() || Complex::new(num("q_re")?, num("q_im")?) != ctx.q() {
            return Err(Error::Parse("record does not belong to this model".into()));
        }
        let m: usize = get("M")?.parse().map_err(|e| Error::Parse(format!("bad M: {e}")))?;
        let eigen_index = match get("eigen_index")?.as_str() {
            "none" => None,
            s => Some(s.parse().map_err(|e| Error::Parse(format!("bad eigen_index: {e}")))?),
        };
        let onshell = get("onshell")?.parse().map_err(|e| Error::Parse(format!("bad onshell: {e}")))?;
        let condition = num("condition")?;
        let mut roots = Vec::with_capacity(m);
        let mut residuals = Vec::with_capacity(m);
        for i in 0..m {
            roots.push(Complex::new(num(&format!("root_{i}_re"))?, num(&format!("root_{i}_im"))?));
            residuals.push(num(&format!("residual_{i}"))?);
        }
        let u_values = roots.iter().map(|u| ctx.big_u(*u)).collect();
        Ok(Self { roots, u_values, onshell, residuals, eigen_index, condition })
    }
}
