//! Envelope (variable-band) LDL^T factorization for sparse symmetric
//! positive-definite matrices, used as the direct solver behind shift-invert.

use super::csr::Csr;
use crate::error::{Error, Result};

/// Row-major envelope storage: row i keeps columns `first[i] ..= i`.
pub struct EnvelopeLdl {
    n: usize,
    first: Vec<usize>,
    /// row_start[i] indexes the beginning of row i inside `l`.
    row_start: Vec<usize>,
    /// Unit lower-triangular rows (the trailing diagonal slot stores 1).
    l: Vec<f64>,
    d: Vec<f64>,
}

impl EnvelopeLdl {
    /// Factorizes A (symmetric, SPD up to roundoff). The matrix should be
    /// pre-permuted (e.g. by RCM) for a small envelope.
    pub fn factor(a: &Csr) -> Result<Self> {
        let n = a.n;
        let mut first = vec![0usize; n];
        for i in 0..n {
            let lo = a.row_ptr[i];
            let hi = a.row_ptr[i + 1];
            let mut f = i;
            for k in lo..hi {
                let j = a.col_idx[k];
                if j < f {
                    f = j;
                }
            }
            first[i] = f;
        }
        // The envelope must be monotone for the row algorithm: entry (i, j)
        // contributes fill only within rows' stored spans, which the envelope
        // definition already guarantees.
        let mut row_start = vec![0usize; n + 1];
        for i in 0..n {
            row_start[i + 1] = row_start[i] + (i - first[i] + 1);
        }
        let mut l = vec![0.0f64; row_start[n]];
        let mut d = vec![0.0f64; n];
        // Scatter A's lower triangle into the envelope.
        for i in 0..n {
            for k in a.row_ptr[i]..a.row_ptr[i + 1] {
                let j = a.col_idx[k];
                if j <= i {
                    l[row_start[i] + (j - first[i])] = a.values[k];
                }
            }
        }
        let scale = a.values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
        // Row-by-row factorization.
        for i in 0..n {
            let fi = first[i];
            for j in fi..i {
                let fj = first[j];
                let lo = fi.max(fj);
                let mut sum = l[row_start[i] + (j - fi)];
                for k in lo..j {
                    sum -= l[row_start[i] + (k - fi)] * d[k] * l[row_start[j] + (k - fj)];
                }
                l[row_start[i] + (j - fi)] = sum / d[j];
            }
            let mut diag = l[row_start[i] + (i - fi)];
            for k in fi..i {
                let lik = l[row_start[i] + (k - fi)];
                diag -= lik * lik * d[k];
            }
            if !(diag.is_finite()) || diag.abs() < 1e-100 * scale {
                return Err(Error::Singular(format!(
                    "pivot {diag:.3e} at row {i} of {n}"
                )));
            }
            d[i] = diag;
            l[row_start[i] + (i - fi)] = 1.0;
        }
        Ok(EnvelopeLdl {
            n,
            first,
            row_start,
            l,
            d,
        })
    }

    /// Solves A x = b in place.
    pub fn solve(&self, b: &mut [f64]) {
        let n = self.n;
        debug_assert_eq!(b.len(), n);
        // Forward: L y = b.
        for i in 0..n {
            let fi = self.first[i];
            let base = self.row_start[i];
            let mut sum = b[i];
            for k in fi..i {
                sum -= self.l[base + (k - fi)] * b[k];
            }
            b[i] = sum;
        }
        // Diagonal.
        for i in 0..n {
            b[i] /= self.d[i];
        }
        // Backward: L^T x = y, column-oriented over rows.
        for i in (0..n).rev() {
            let fi = self.first[i];
            let base = self.row_start[i];
            let xi = b[i];
            for k in fi..i {
                b[k] -= self.l[base + (k - fi)] * xi;
            }
        }
    }

    pub fn envelope_size(&self) -> usize {
        self.l.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::csr::TripletBuilder;

    #[test]
    fn solves_poisson_system() {
        // 1D Dirichlet Laplacian, solution known analytically.
        let n = 50;
        let mut b = TripletBuilder::new(n);
        for i in 0..n {
            b.add(i, i, 2.0);
            if i + 1 < n {
                b.add(i, i + 1, -1.0);
                b.add(i + 1, i, -1.0);
            }
        }
        let a = b.build();
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64 * 0.17).sin()).collect();
        let mut rhs = a.matvec_alloc(&x_true);
        let f = EnvelopeLdl::factor(&a).unwrap();
        f.solve(&mut rhs);
        for (xi, ti) in rhs.iter().zip(&x_true) {
            assert!((xi - ti).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_singular_matrix() {
        let mut b = TripletBuilder::new(2);
        b.add(0, 0, 1.0);
        b.add(0, 1, 1.0);
        b.add(1, 0, 1.0);
        b.add(1, 1, 1.0);
        let a = b.build();
        assert!(EnvelopeLdl::factor(&a).is_err());
    }
}
