//! The 2D Neumann eigensolve: deflated shift-invert Lanczos on the assembled
//! pair, plus Rayleigh-quotient and weighted-mean views of nodal fields.

use serde::Serialize;

use super::assemble::{assemble, DiscretePair};
use super::mesh::{mesh_domain, MeshInfo, MeshOpts, TriMesh};
use crate::error::{Error, Result};
use crate::linalg::{smallest_eigenpairs, LanczosOptions};
use crate::weights::WeightSpec;

#[derive(Debug, Clone, Serialize)]
pub struct Spectrum2D {
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    pub mesh: MeshInfo,
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<f64>>,
}

impl Spectrum2D {
    /// Groups eigenvalues within 1e-8 relative into multiplicity classes.
    pub fn multiplicities(&self) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = Vec::new();
        for &v in &self.eigenvalues {
            match out.last_mut() {
                Some((rep, count)) if (v - *rep).abs() <= 1e-8 * (1.0 + rep.abs()) => {
                    *count += 1;
                }
                _ => out.push((v, 1)),
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Opts2D {
    pub h: f64,
    pub tail_tol: f64,
    pub tol: f64,
    /// Transverse layers for profile meshes (0 = automatic).
    pub n_layers: usize,
}

impl Default for Opts2D {
    fn default() -> Self {
        Opts2D {
            h: 0.05,
            tail_tol: 1e-10,
            tol: 1e-10,
            n_layers: 0,
        }
    }
}

impl Opts2D {
    pub fn mesh_opts(&self) -> MeshOpts {
        MeshOpts {
            h: self.h,
            tail_tol: self.tail_tol,
            n_layers: self.n_layers,
        }
    }
}

/// Solves the generalized pair for the k+1 lowest Neumann modes: the zero
/// mode is deflated analytically (constant vector, eigenvalue 0) and the
/// remaining k pairs come from shift-invert Lanczos at sigma = -1/2.
pub fn solve_pair(pair: &DiscretePair, mesh: &TriMesh, k: usize, tol: f64) -> Result<Spectrum2D> {
    let n = pair.n();
    if k == 0 {
        return Err(Error::parameter("mode count k must be at least 1"));
    }
    // Constant mode, M-normalized.
    let ones = vec![1.0; n];
    let mass = pair.m.bilinear(&ones, &ones);
    if !(mass > 0.0) {
        return Err(Error::Degenerate("mass matrix is not positive".into()));
    }
    let c: Vec<f64> = ones.iter().map(|v| v / mass.sqrt()).collect();
    let kc = pair.k.matvec_alloc(&c);
    let mc = pair.m.matvec_alloc(&c);
    let r0 = {
        let num: f64 = kc.iter().map(|v| v * v).sum::<f64>().sqrt();
        let den: f64 = mc.iter().map(|v| v * v).sum::<f64>().sqrt();
        num / den
    };
    let opts = LanczosOptions {
        shift: -0.5,
        tol,
        max_dim: 400,
    };
    let got = smallest_eigenpairs(&pair.k, &pair.m, k, std::slice::from_ref(&c), &opts)?;
    let mut eigenvalues = vec![0.0];
    let mut residuals = vec![r0];
    let mut eigenvectors = vec![c];
    eigenvalues.extend(got.values);
    residuals.extend(got.residuals);
    eigenvectors.extend(got.vectors);
    Ok(Spectrum2D {
        eigenvalues,
        residuals,
        mesh: mesh.info(),
        eigenvectors,
    })
}

/// Meshes the domain, assembles the Gaussian pair and solves for k+1 modes.
pub fn solve_neumann_2d(
    w: &WeightSpec,
    d: &crate::geometry::Domain,
    k: usize,
    opts: &Opts2D,
) -> Result<(Spectrum2D, TriMesh, DiscretePair)> {
    let mesh = mesh_domain(w, d, &opts.mesh_opts())?;
    let pair = assemble(w, &mesh);
    let spec = solve_pair(&pair, &mesh, k, opts.tol)?;
    Ok((spec, mesh, pair))
}

/// Discrete Rayleigh quotient u^T K u / u^T M u.
pub fn rayleigh_quotient(pair: &DiscretePair, u: &[f64]) -> Result<f64> {
    let den = pair.m.bilinear(u, u);
    if !(den > 0.0) {
        return Err(Error::domain("field is zero in the weighted norm"));
    }
    Ok(pair.k.bilinear(u, u) / den)
}

/// Weighted mean 1^T M u (the integral of the P1 field against dm_gamma).
pub fn weighted_mean(pair: &DiscretePair, u: &[f64]) -> f64 {
    let ones = vec![1.0; pair.n()];
    pair.m.bilinear(&ones, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Domain;
    use crate::sl1d::{solve_neumann_1d, Interval, Opts1D};

    #[test]
    fn strip_first_mode_tends_to_one() {
        let w = WeightSpec::default();
        let d = Domain::strip(0.0, 1.0).unwrap();
        let opts = Opts2D {
            h: 0.1,
            tail_tol: 1e-9,
            ..Default::default()
        };
        let (spec, _, pair) = solve_neumann_2d(&w, &d, 2, &opts).unwrap();
        assert!(spec.eigenvalues[0].abs() <= 1e-10);
        assert!(
            (spec.eigenvalues[1] - 1.0).abs() < 5e-3,
            "mu1 = {}",
            spec.eigenvalues[1]
        );
        // mu1 eigenvector has zero weighted mean.
        let mean = weighted_mean(&pair, &spec.eigenvectors[1]);
        assert!(mean.abs() < 1e-8);
        // Rayleigh consistency.
        let q = rayleigh_quotient(&pair, &spec.eigenvectors[1]).unwrap();
        assert!((q - spec.eigenvalues[1]).abs() < 1e-11);
    }

    #[test]
    fn rectangle_matches_tensor_sums() {
        let w = WeightSpec::default();
        let d = Domain::polygon(vec![[-1.0, 0.0], [1.0, 0.0], [1.0, 2.0], [-1.0, 2.0]]).unwrap();
        // Structured mesh at the same h as the 1D grids.
        let h = 0.05;
        let mesh = crate::fem2d::mesh::mesh_rectangle(-1.0, 1.0, 0.0, 2.0, h).unwrap();
        let pair = assemble(&w, &mesh);
        let spec = solve_pair(&pair, &mesh, 5, 1e-10).unwrap();
        let _ = d;

        let o1 = Opts1D {
            h,
            ..Default::default()
        };
        let sx = solve_neumann_1d(&w, Interval::new(-1.0, 1.0).unwrap(), 4, &o1).unwrap();
        let sy = solve_neumann_1d(&w, Interval::new(0.0, 2.0).unwrap(), 4, &o1).unwrap();
        let mut sums = Vec::new();
        for a in &sx.eigenvalues {
            for b in &sy.eigenvalues {
                sums.push(a + b);
            }
        }
        sums.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for j in 0..6 {
            let got = spec.eigenvalues[j];
            let want = sums[j];
            assert!(
                (got - want).abs() <= 2e-3 * (1.0 + want.abs()),
                "mode {j}: 2d {got} vs tensor {want}"
            );
        }
    }

    #[test]
    fn min_max_upper_bound_for_mean_zero_fields() {
        let w = WeightSpec::default();
        let mesh = crate::fem2d::mesh::mesh_rectangle(-1.0, 1.0, -1.0, 1.0, 0.1).unwrap();
        let pair = assemble(&w, &mesh);
        let spec = solve_pair(&pair, &mesh, 1, 1e-10).unwrap();
        let mu1 = spec.eigenvalues[1];
        // Any mean-zero test field bounds mu1 from above.
        for field in [
            |x: f64, _y: f64| x,
            |x: f64, y: f64| x * y,
            |x: f64, y: f64| (x + 0.3 * y).sin(),
        ] {
            let mut u: Vec<f64> = mesh.vertices.iter().map(|v| field(v[0], v[1])).collect();
            let mean = weighted_mean(&pair, &u) / pair.total_mass();
            for v in u.iter_mut() {
                *v -= mean;
            }
            let q = rayleigh_quotient(&pair, &u).unwrap();
            assert!(
                q >= mu1 - 1e-10,
                "quotient {q} below discrete mu1 {mu1}"
            );
        }
    }
}
