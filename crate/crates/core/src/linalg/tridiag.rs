//! Eigensolver for symmetric tridiagonal pencils (K, M), M positive definite,
//! by Sturm-count bisection plus inverse iteration. Also covers the standard
//! problem (M = I), which is how Lanczos Ritz values are extracted.

/// Symmetric tridiagonal matrix: diagonal `d` (n) and off-diagonal `e` (n-1).
#[derive(Debug, Clone)]
pub struct SymTridiag {
    pub d: Vec<f64>,
    pub e: Vec<f64>,
}

impl SymTridiag {
    pub fn n(&self) -> usize {
        self.d.len()
    }

    pub fn identity(n: usize) -> Self {
        SymTridiag {
            d: vec![1.0; n],
            e: vec![0.0; n.saturating_sub(1)],
        }
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let n = self.n();
        for i in 0..n {
            let mut acc = self.d[i] * x[i];
            if i > 0 {
                acc += self.e[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.e[i] * x[i + 1];
            }
            y[i] = acc;
        }
    }
}

/// Number of eigenvalues of (K, M) strictly below `sigma`, via the inertia of
/// K - sigma*M (LDL^T pivot signs).
pub fn count_below(k: &SymTridiag, m: &SymTridiag, sigma: f64) -> usize {
    let n = k.n();
    let mut count = 0usize;
    let mut d_prev = 1.0f64;
    let scale = k
        .d
        .iter()
        .chain(k.e.iter())
        .fold(0.0f64, |a, v| a.max(v.abs()))
        .max(1e-300);
    let tiny = f64::MIN_POSITIVE.sqrt() * scale;
    for i in 0..n {
        let a = k.d[i] - sigma * m.d[i];
        let mut piv = a;
        if i > 0 {
            let b = k.e[i - 1] - sigma * m.e[i - 1];
            piv -= b * b / d_prev;
        }
        if piv == 0.0 {
            piv = tiny;
        }
        if piv < 0.0 {
            count += 1;
        }
        d_prev = piv;
    }
    count
}

/// First `k_wanted` eigenvalues (ascending) of the pencil, by bisection.
pub fn eigenvalues(k: &SymTridiag, m: &SymTridiag, k_wanted: usize) -> Vec<f64> {
    let n = k.n();
    assert!(k_wanted <= n, "requested more eigenvalues than matrix order");
    // Expand a bracket containing the wanted part of the spectrum.
    let mut lo = -1.0f64;
    let mut hi = 1.0f64;
    for _ in 0..200 {
        if count_below(k, m, lo) == 0 {
            break;
        }
        lo *= 2.0;
    }
    for _ in 0..400 {
        if count_below(k, m, hi) >= k_wanted {
            break;
        }
        hi *= 2.0;
    }
    let mut out = Vec::with_capacity(k_wanted);
    for j in 0..k_wanted {
        let mut a = lo;
        let mut b = hi;
        // Invariant: count(a) <= j < count(b).
        for _ in 0..140 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if count_below(k, m, mid) <= j {
                a = mid;
            } else {
                b = mid;
            }
            if b - a <= 1e-15 * (a.abs().max(b.abs()).max(1.0)) {
                break;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}

/// Tridiagonal LU solve with partial pivoting for (K - lambda*M) x = rhs.
/// Returns false if the matrix is numerically singular beyond rescue.
fn solve_shifted(k: &SymTridiag, m: &SymTridiag, lambda: f64, rhs: &mut [f64]) -> bool {
    let n = k.n();
    // Band copies: sub (a), diag (b), super (c), second super (fill, d2).
    let mut a = vec![0.0; n];
    let mut b = vec![0.0; n];
    let mut c = vec![0.0; n];
    let mut d2 = vec![0.0; n];
    for i in 0..n {
        b[i] = k.d[i] - lambda * m.d[i];
        if i + 1 < n {
            c[i] = k.e[i] - lambda * m.e[i];
            a[i + 1] = c[i];
        }
    }
    // Only exact zero pivots are rescued: tiny pivots after partial pivoting
    // are what inverse iteration feeds on.
    let scale = b.iter().chain(c.iter()).fold(0.0f64, |x, v| x.max(v.abs()));
    let tiny = 1e-300 + scale * f64::EPSILON * f64::EPSILON;
    for i in 0..n - 1 {
        if a[i + 1].abs() > b[i].abs() {
            // Swap rows i and i+1. Row i holds (b, c, d2) over columns
            // (i, i+1, i+2); row i+1 holds (a, b, c) over the same columns.
            let row_i = (b[i], c[i], d2[i]);
            let row_j = (a[i + 1], b[i + 1], c[i + 1]);
            b[i] = row_j.0;
            c[i] = row_j.1;
            d2[i] = row_j.2;
            a[i + 1] = row_i.0;
            b[i + 1] = row_i.1;
            c[i + 1] = row_i.2;
            rhs.swap(i, i + 1);
        }
        if b[i] == 0.0 {
            b[i] = tiny;
        }
        let l = a[i + 1] / b[i];
        b[i + 1] -= l * c[i];
        c[i + 1] -= l * d2[i];
        rhs[i + 1] -= l * rhs[i];
    }
    if b[n - 1] == 0.0 {
        b[n - 1] = tiny;
    }
    // Back substitution.
    rhs[n - 1] /= b[n - 1];
    if n >= 2 {
        rhs[n - 2] = (rhs[n - 2] - c[n - 2] * rhs[n - 1]) / b[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        rhs[i] = (rhs[i] - c[i] * rhs[i + 1] - d2[i] * rhs[i + 2]) / b[i];
    }
    rhs.iter().all(|v| v.is_finite())
}

/// Eigenpair extraction: bisection eigenvalues plus inverse iteration vectors,
/// M-orthonormalized within clusters. Returns (values, vectors, residuals).
pub fn eigenpairs(
    k: &SymTridiag,
    m: &SymTridiag,
    k_wanted: usize,
) -> (Vec<f64>, Vec<Vec<f64>>, Vec<f64>) {
    let n = k.n();
    let values = eigenvalues(k, m, k_wanted);
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(values.len());
    let mut residuals = Vec::with_capacity(values.len());
    let spread = values
        .iter()
        .fold(1.0f64, |a, v| a.max(v.abs()));
    for (j, &lambda) in values.iter().enumerate() {
        let mut x: Vec<f64> = (0..n)
            .map(|i| (0.37 + 1.7 * (i as f64 + 1.0) * (j as f64 + 1.3)).sin())
            .collect();
        m_normalize(m, &mut x);
        for _ in 0..4 {
            // M-orthogonalize against nearby converged vectors to split clusters.
            for (jj, v) in vectors.iter().enumerate() {
                if (values[jj] - lambda).abs() < 1e-6 * spread {
                    let c = m_inner(m, &x, v);
                    for (xi, vi) in x.iter_mut().zip(v) {
                        *xi -= c * vi;
                    }
                }
            }
            let mut rhs = vec![0.0; n];
            m.matvec(&x, &mut rhs);
            if !solve_shifted(k, m, lambda + spread * 1e-14, &mut rhs) {
                break;
            }
            x = rhs;
            m_normalize(m, &mut x);
        }
        for (jj, v) in vectors.iter().enumerate() {
            if (values[jj] - lambda).abs() < 1e-6 * spread {
                let c = m_inner(m, &x, v);
                for (xi, vi) in x.iter_mut().zip(v) {
                    *xi -= c * vi;
                }
            }
        }
        m_normalize(m, &mut x);
        // Residual ||K x - lambda M x||_2 / ||M x||_2.
        let mut kx = vec![0.0; n];
        let mut mx = vec![0.0; n];
        k.matvec(&x, &mut kx);
        m.matvec(&x, &mut mx);
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..n {
            let r = kx[i] - lambda * mx[i];
            num += r * r;
            den += mx[i] * mx[i];
        }
        residuals.push((num / den.max(1e-300)).sqrt());
        vectors.push(x);
    }
    (values, vectors, residuals)
}

pub fn m_inner(m: &SymTridiag, x: &[f64], y: &[f64]) -> f64 {
    let n = m.n();
    let mut acc = 0.0;
    for i in 0..n {
        let mut row = m.d[i] * y[i];
        if i > 0 {
            row += m.e[i - 1] * y[i - 1];
        }
        if i + 1 < n {
            row += m.e[i] * y[i + 1];
        }
        acc += x[i] * row;
    }
    acc
}

fn m_normalize(m: &SymTridiag, x: &mut [f64]) {
    let nrm = m_inner(m, x, x).sqrt();
    if nrm > 0.0 {
        for xi in x.iter_mut() {
            *xi /= nrm;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Discrete 1D Neumann Laplacian (FD) has eigenvalues
    /// (2 - 2 cos(pi j / (n-1))) / h^2 ... here in unscaled form.
    #[test]
    fn standard_tridiagonal_matches_closed_form() {
        let n = 40;
        let mut d = vec![2.0; n];
        d[0] = 1.0;
        d[n - 1] = 1.0;
        let e = vec![-1.0; n - 1];
        let k = SymTridiag { d, e };
        let m = SymTridiag::identity(n);
        let vals = eigenvalues(&k, &m, 5);
        for (j, v) in vals.iter().enumerate() {
            let exact = 2.0 - 2.0 * (std::f64::consts::PI * j as f64 / n as f64).cos();
            assert!(
                (v - exact).abs() < 1e-11,
                "mode {j}: got {v}, want {exact}"
            );
        }
    }

    #[test]
    fn generalized_pencil_with_mass_matrix() {
        // K = FD Laplacian (Dirichlet), M = tridiagonal FEM-style mass.
        let n = 60;
        let h = 1.0 / (n as f64 + 1.0);
        let k = SymTridiag {
            d: vec![2.0 / h; n],
            e: vec![-1.0 / h; n - 1],
        };
        let m = SymTridiag {
            d: vec![4.0 * h / 6.0; n],
            e: vec![h / 6.0; n - 1],
        };
        let (vals, vecs, res) = eigenpairs(&k, &m, 3);
        // P1 FEM discrete eigenvalues of -u'' on (0,1) Dirichlet:
        // lambda_h = 6/h^2 * (1-cos(j pi h))/(2+cos(j pi h)).
        for (j, v) in vals.iter().enumerate() {
            let t = (std::f64::consts::PI * (j as f64 + 1.0) * h).cos();
            let exact = 6.0 / (h * h) * (1.0 - t) / (2.0 + t);
            assert!(
                (v - exact).abs() < 1e-8 * exact,
                "mode {j}: got {v}, want {exact}"
            );
        }
        for r in &res {
            assert!(*r < 1e-9, "residual too large: {r}");
        }
        // M-orthonormality.
        for i in 0..vecs.len() {
            for j in 0..vecs.len() {
                let ip = m_inner(&m, &vecs[i], &vecs[j]);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip - want).abs() < 1e-10);
            }
        }
    }
}
