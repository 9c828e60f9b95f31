//! Shift-invert Lanczos for the generalized symmetric eigenproblem
//! K x = mu M x with M positive definite. Works in the M-inner product with
//! full reorthogonalization; the shifted operator is factorized once by the
//! envelope solver after RCM reordering.

use super::csr::{axpy, Csr};
use super::envelope::EnvelopeLdl;
use super::rcm::{permute_symmetric, reverse_cuthill_mckee};
use super::tridiag::{eigenpairs as tridiag_eigenpairs, SymTridiag};
use crate::error::{Error, Result};

pub struct LanczosOptions {
    pub shift: f64,
    /// Residual target for ||K x - mu M x||_2 <= tol * ||M x||_2.
    pub tol: f64,
    pub max_dim: usize,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            shift: -0.5,
            tol: 1e-10,
            max_dim: 400,
        }
    }
}

pub struct EigenPairs {
    pub values: Vec<f64>,
    /// Row i is the M-normalized eigenvector of values[i].
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

/// Computes the `k` smallest eigenpairs of (K, M) that are M-orthogonal to
/// `deflate` (pass the constant Neumann mode there; it is not returned).
pub fn smallest_eigenpairs(
    k_mat: &Csr,
    m_mat: &Csr,
    k: usize,
    deflate: &[Vec<f64>],
    opts: &LanczosOptions,
) -> Result<EigenPairs> {
    let n = k_mat.n;
    let n_free = n - deflate.len();
    if k == 0 {
        return Err(Error::parameter("requested zero eigenpairs"));
    }
    if k >= n_free {
        return Err(Error::parameter(format!(
            "requested {k} eigenpairs but only {n_free} discrete modes are available"
        )));
    }

    // Factor K - shift*M once, in RCM ordering.
    let shifted = {
        let mut b = super::csr::TripletBuilder::new(n);
        for i in 0..n {
            for p in k_mat.row_ptr[i]..k_mat.row_ptr[i + 1] {
                b.add(i, k_mat.col_idx[p], k_mat.values[p]);
            }
            for p in m_mat.row_ptr[i]..m_mat.row_ptr[i + 1] {
                b.add(i, m_mat.col_idx[p], -opts.shift * m_mat.values[p]);
            }
        }
        b.build()
    };
    let perm = reverse_cuthill_mckee(&shifted);
    let permuted = permute_symmetric(&shifted, &perm);
    let factor = EnvelopeLdl::factor(&permuted)?;
    let mut inv_perm = vec![0usize; n];
    for (new, &old) in perm.iter().enumerate() {
        inv_perm[old] = new;
    }
    let solve = |rhs: &[f64], out: &mut Vec<f64>| {
        let mut tmp = vec![0.0; n];
        for i in 0..n {
            tmp[inv_perm[i]] = rhs[i];
        }
        factor.solve(&mut tmp);
        out.clear();
        out.resize(n, 0.0);
        for i in 0..n {
            out[i] = tmp[inv_perm[i]];
        }
    };

    let m_dot = |x: &[f64], y: &[f64]| m_mat.bilinear(x, y);

    // Lanczos state.
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let max_dim = opts.max_dim.min(n_free);

    let fresh_vector = |attempt: usize| -> Vec<f64> {
        (0..n)
            .map(|i| {
                let t = (i + 1) as f64 * (1.0 + 0.29 * attempt as f64);
                (1.7 * t).sin() + 0.31 * (0.57 * t).cos()
            })
            .collect()
    };

    // Orthogonalize against deflation space and current basis (two passes).
    let reorthogonalize = |w: &mut Vec<f64>, basis: &[Vec<f64>]| {
        for _ in 0..2 {
            let mw = m_mat.matvec_alloc(w);
            for v in deflate.iter().chain(basis.iter()) {
                let c = super::csr::dot(&mw, v);
                if c != 0.0 {
                    axpy(-c, v, w);
                }
            }
        }
    };

    let mut attempt = 0usize;
    let mut v = fresh_vector(attempt);
    reorthogonalize(&mut v, &basis);
    let nv = m_dot(&v, &v).sqrt();
    if !(nv > 0.0) {
        return Err(Error::parameter("deflation space spans the whole problem"));
    }
    for x in v.iter_mut() {
        *x /= nv;
    }

    let mut best: Option<EigenPairs> = None;
    let mut checkpoint = (2 * k + 12).min(max_dim);
    let mut mv = vec![0.0; n];
    loop {
        // One Lanczos step.
        m_mat.matvec(&v, &mut mv);
        let mut w = Vec::new();
        solve(&mv, &mut w);
        let alpha = m_dot(&w, &v);
        axpy(-alpha, &v, &mut w);
        if let Some(prev) = basis.last() {
            let beta_prev = *betas.last().unwrap();
            axpy(-beta_prev, prev, &mut w);
        }
        reorthogonalize(&mut w, &basis);
        // Note: v itself is not yet in `basis`; project it out explicitly.
        let c = m_dot(&w, &v);
        axpy(-c, &v, &mut w);
        let beta = m_dot(&w, &w).sqrt();
        basis.push(v.clone());
        alphas.push(alpha);

        let dim = basis.len();
        if beta < 1e-13 || dim >= checkpoint || dim >= max_dim {
            // Extract Ritz pairs and test convergence.
            let extracted = extract(k_mat, m_mat, &basis, &alphas, &betas, k, opts.shift)?;
            let worst = extracted
                .residuals
                .iter()
                .fold(0.0f64, |a, r| a.max(*r));
            let done = extracted.values.len() == k && worst <= opts.tol;
            best = Some(extracted);
            if done {
                break;
            }
            if dim >= max_dim {
                break;
            }
            checkpoint = (2 * checkpoint).min(max_dim);
        }

        if beta < 1e-13 {
            // Invariant subspace exhausted; restart with a fresh direction.
            if basis.len() >= n_free {
                break;
            }
            attempt += 1;
            if attempt > 8 {
                break;
            }
            let mut f = fresh_vector(attempt);
            reorthogonalize(&mut f, &basis);
            let nf = m_dot(&f, &f).sqrt();
            if !(nf > 1e-12) {
                break;
            }
            for x in f.iter_mut() {
                *x /= nf;
            }
            v = f;
            betas.push(0.0);
        } else {
            for x in w.iter_mut() {
                *x /= beta;
            }
            v = w;
            betas.push(beta);
        }
    }

    let result = best.ok_or_else(|| Error::SolverNoConvergence {
        detail: "no Ritz extraction performed".into(),
        iterations: 0,
        residual: f64::NAN,
    })?;
    let worst = result.residuals.iter().fold(0.0f64, |a, r| a.max(*r));
    if result.values.len() < k || worst > opts.tol {
        return Err(Error::SolverNoConvergence {
            detail: format!("wanted {k} pairs at tol {:.1e}", opts.tol),
            iterations: result.iterations,
            residual: worst,
        });
    }
    Ok(result)
}

/// Ritz extraction from the current Lanczos tridiagonal.
fn extract(
    k_mat: &Csr,
    m_mat: &Csr,
    basis: &[Vec<f64>],
    alphas: &[f64],
    betas: &[f64],
    k: usize,
    shift: f64,
) -> Result<EigenPairs> {
    let dim = basis.len();
    let t = SymTridiag {
        d: alphas.to_vec(),
        e: betas[..dim - 1].to_vec(),
    };
    let ident = SymTridiag::identity(dim);
    // Largest theta of T correspond to eigenvalues nearest the shift.
    let (all_theta, all_y, _) = tridiag_eigenpairs(&t, &ident, dim);
    let take = k.min(dim);
    let n = k_mat.n;
    let mut values = Vec::with_capacity(take);
    let mut vectors = Vec::with_capacity(take);
    let mut residuals = Vec::with_capacity(take);
    // thetas ascending; walk from the top (largest theta = smallest mu).
    for idx in (dim - take..dim).rev() {
        let theta = all_theta[idx];
        if theta.abs() < 1e-300 {
            continue;
        }
        let mu = shift + 1.0 / theta;
        let y = &all_y[idx];
        let mut x = vec![0.0; n];
        for (vj, yj) in basis.iter().zip(y.iter()) {
            axpy(*yj, vj, &mut x);
        }
        // M-normalize (roundoff guard) and measure the true residual.
        let mnorm = m_mat.bilinear(&x, &x).sqrt();
        if mnorm > 0.0 {
            for xi in x.iter_mut() {
                *xi /= mnorm;
            }
        }
        let kx = k_mat.matvec_alloc(&x);
        let mx = m_mat.matvec_alloc(&x);
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..n {
            let r = kx[i] - mu * mx[i];
            num += r * r;
            den += mx[i] * mx[i];
        }
        values.push(mu);
        vectors.push(x);
        residuals.push((num / den.max(1e-300)).sqrt());
    }
    // Ascending in mu.
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let vectors: Vec<Vec<f64>> = order.iter().map(|&i| vectors[i].clone()).collect();
    let residuals: Vec<f64> = order.iter().map(|&i| residuals[i]).collect();
    Ok(EigenPairs {
        values,
        vectors,
        residuals,
        iterations: dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::csr::TripletBuilder;

    fn laplacian_1d(n: usize) -> (Csr, Csr) {
        // Neumann FD Laplacian pencil with identity mass.
        let mut kb = TripletBuilder::new(n);
        let mut mb = TripletBuilder::new(n);
        for i in 0..n {
            let d = if i == 0 || i == n - 1 { 1.0 } else { 2.0 };
            kb.add(i, i, d);
            mb.add(i, i, 1.0);
            if i + 1 < n {
                kb.add(i, i + 1, -1.0);
                kb.add(i + 1, i, -1.0);
            }
        }
        (kb.build(), mb.build())
    }

    #[test]
    fn finds_smallest_modes_with_deflation() {
        let n = 120;
        let (k, m) = laplacian_1d(n);
        let c = vec![1.0 / (n as f64).sqrt(); n];
        let got = smallest_eigenpairs(&k, &m, 4, &[c], &LanczosOptions::default()).unwrap();
        for (j, v) in got.values.iter().enumerate() {
            let exact = 2.0 - 2.0 * (std::f64::consts::PI * (j + 1) as f64 / n as f64).cos();
            assert!(
                (v - exact).abs() < 1e-9,
                "mode {}: got {v}, want {exact}",
                j + 1
            );
        }
        for r in &got.residuals {
            assert!(*r <= 1e-10);
        }
        // Returned vectors are M-orthonormal and M-orthogonal to the constant.
        for x in &got.vectors {
            let mean: f64 = x.iter().sum();
            assert!(mean.abs() < 1e-8);
        }
    }

    #[test]
    fn rejects_oversized_request() {
        let (k, m) = laplacian_1d(6);
        let c = vec![1.0; 6];
        assert!(smallest_eigenpairs(&k, &m, 5, &[c], &LanczosOptions::default()).is_err());
    }
}
