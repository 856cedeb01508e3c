//! In-place right multiplication by operators acting on one or two tensor
//! factors. Factor 0 is the most significant bit of the basis index.

use num_complex::Complex;

use crate::linalg::CMatrix;
use crate::real::{czero, Real};

/// `m <- m (g)_{p}` for a 2x2 `g` acting on factor `p` of `factors`.
pub(crate) fn right_apply_one<T: Real>(m: &mut CMatrix<T>, g: &CMatrix<T>, p: usize, factors: usize) {
    let cols = m.cols();
    debug_assert_eq!(cols, 1 << factors);
    let bp = 1usize << (factors - 1 - p);
    let g = [[g[(0, 0)], g[(0, 1)]], [g[(1, 0)], g[(1, 1)]]];
    for row in m.as_mut_slice().chunks_mut(cols) {
        for c in (0..cols).filter(|c| c & bp == 0) {
            let (x0, x1) = (row[c], row[c | bp]);
            row[c] = x0 * g[0][0] + x1 * g[1][0];
            row[c | bp] = x0 * g[0][1] + x1 * g[1][1];
        }
    }
}

/// `m <- m (g)_{p r}` for a 4x4 `g` on factors `p` (high) and `r` (low).
pub(crate) fn right_apply_two<T: Real>(m: &mut CMatrix<T>, g: &CMatrix<T>, p: usize, r: usize, factors: usize) {
    let cols = m.cols();
    debug_assert_eq!(cols, 1 << factors);
    let bp = 1usize << (factors - 1 - p);
    let br = 1usize << (factors - 1 - r);
    let mut gg = [[czero::<T>(); 4]; 4];
    for (i, row) in gg.iter_mut().enumerate() {
        for (j, z) in row.iter_mut().enumerate() {
            *z = g[(i, j)];
        }
    }
    for row in m.as_mut_slice().chunks_mut(cols) {
        for c in (0..cols).filter(|c| c & bp == 0 && c & br == 0) {
            let idx = [c, c | br, c | bp, c | bp | br];
            let old: [Complex<T>; 4] = idx.map(|k| row[k]);
            for (k, &target) in idx.iter().enumerate() {
                row[target] = old[0] * gg[0][k] + old[1] * gg[1][k] + old[2] * gg[2][k] + old[3] * gg[3][k];
            }
        }
    }
}

/// `I_{2^p} (x) g (x) I_{2^{factors - p - width}}`.
pub(crate) fn embed<T: Real>(g: &CMatrix<T>, p: usize, factors: usize) -> CMatrix<T> {
    let width = g.rows().trailing_zeros() as usize;
    let left = CMatrix::identity(1 << p);
    let right = CMatrix::identity(1 << (factors - p - width));
    left.kron(g).kron(&right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::cx;

    fn mat(n: usize, seed: usize) -> CMatrix<f64> {
        CMatrix::from_fn(n, n, |i, j| cx(((i * 7 + j * 3 + seed) % 11) as f64 - 5.0, ((i + 2 * j + seed) % 5) as f64))
    }

    #[test]
    fn local_application_matches_embedded_product() {
        let factors = 4;
        let m = mat(16, 1);
        let g2 = mat(2, 2);
        let g4 = mat(4, 3);
        for p in 0..factors {
            let mut got = m.clone();
            right_apply_one(&mut got, &g2, p, factors);
            assert_eq!(got, m.matmul(&embed(&g2, p, factors)));
        }
        // two-site, non-adjacent factors: conjugate the embedded operator by swaps
        for (p, r) in [(0, 1), (0, 3), (1, 2), (2, 3)] {
            let mut got = m.clone();
            right_apply_two(&mut got, &g4, p, r, factors);
            let full = CMatrix::from_fn(16, 16, |a, b| {
                let bit = |x: usize, k: usize| (x >> (factors - 1 - k)) & 1;
                let rest = |x: usize| x & !((1 << (factors - 1 - p)) | (1 << (factors - 1 - r)));
                if rest(a) != rest(b) {
                    return cx(0.0, 0.0);
                }
                g4[(2 * bit(a, p) + bit(a, r), 2 * bit(b, p) + bit(b, r))]
            });
            let want = m.matmul(&full);
            assert!((&got - &want).frobenius_norm() < 1e-12, "factors {p},{r}");
        }
    }
}
