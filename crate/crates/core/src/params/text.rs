//! Key-value text form of [`ModelParams<f64>`]: one `key value` pair per line,
//! values printed with round-trip precision.

use num_complex::Complex;

use super::{BoundaryParams, ModelParams};
use crate::error::{Error, Result};

impl ModelParams<f64> {
    pub fn to_text(&self) -> String {
        let mut out = format!("N {}\n", self.n);
        let mut push = |key: &str, z: Complex<f64>| {
            out.push_str(&format!("{key}_re {:?}\n{key}_im {:?}\n", z.re, z.im));
        };
        push("q", self.q);
        for (i, z) in self.x.iter().enumerate() {
            push(&format!("x_{}", i + 1), *z);
        }
        for (name, z) in BoundaryParams::<f64>::NAMES.iter().zip(self.boundary.as_array()) {
            push(name, z);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut map = std::collections::HashMap::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (key, value) = line
                .split_once(char::is_whitespace)
                .ok_or_else(|| Error::Parse(format!("expected `key value`, got `{line}`")))?;
            if map.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(Error::Parse(format!("duplicate key `{key}`")));
            }
        }
        let n: usize = map
            .get("N")
            .ok_or_else(|| Error::Parse("missing key `N`".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad N: {e}")))?;
        let real = |key: String| -> Result<f64> {
            map.get(&key)
                .ok_or_else(|| Error::Parse(format!("missing key `{key}`")))?
                .parse()
                .map_err(|e| Error::Parse(format!("bad value for `{key}`: {e}")))
        };
        let complex = |key: &str| -> Result<Complex<f64>> { Ok(Complex::new(real(format!("{key}_re"))?, real(format!("{key}_im"))?)) };
        let q = complex("q")?;
        let x = (1..=n).map(|i| complex(&format!("x_{i}"))).collect::<Result<Vec<_>>>()?;
        let mut b = [Complex::new(0.0, 0.0); 8];
        for (slot, name) in b.iter_mut().zip(BoundaryParams::<f64>::NAMES) {
            *slot = complex(name)?;
        }
        let expected = 1 + 2 * (1 + n + 8);
        if map.len() != expected {
            return Err(Error::Parse(format!("expected {expected} keys, found {}", map.len())));
        }
        ModelParams::new(q, x, BoundaryParams::from_array(b))
    }
}
