//! Plain-text matrix exchange format: a `rows cols` header followed by one
//! `re im` pair per line in row-major order. Values use the shortest
//! representation that round-trips through `f64` parsing.

use num_complex::Complex;

use super::CMatrix;
use crate::error::{Error, Result};

pub fn write_matrix_text(m: &CMatrix<f64>) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for z in m.as_slice() {
        out.push_str(&format!("{:?} {:?}\n", z.re, z.im));
    }
    out
}

pub fn parse_matrix_text(text: &str) -> Result<CMatrix<f64>> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty matrix text".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|e| Error::Parse(format!("bad header `{header}`: {e}"))))
        .collect::<Result<_>>()?;
    let [rows, cols] = dims[..] else {
        return Err(Error::Parse(format!("header must be `rows cols`, got `{header}`")));
    };
    let mut data = Vec::with_capacity(rows * cols);
    for line in lines {
        let parts: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|e| Error::Parse(format!("bad entry `{line}`: {e}"))))
            .collect::<Result<_>>()?;
        let [re, im] = parts[..] else {
            return Err(Error::Parse(format!("entry must be `re im`, got `{line}`")));
        };
        data.push(Complex::new(re, im));
    }
    if data.len() != rows * cols {
        return Err(Error::Parse(format!("expected {} entries, found {}", rows * cols, data.len())));
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| data[i * cols + j]))
}
