//! eps-sweeps: for a shrinking family of channel domains, track the lowest
//! eigenvalues against the half-line references, the Dirichlet upper-bound
//! constants, and the transverse defect of each eigenfunction.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fem2d::mesh::{mesh_profile_with_layout, ChannelLayout};
use crate::fem2d::{assemble, solve_pair, MeshInfo, Spectrum2D, TriMesh};
use crate::geometry::Profile;
use crate::sl1d::{solve_dirichlet_bound_constants, solve_neumann_1d, Interval, Opts1D};
use crate::thinlimit::ThinMap;
use crate::weights::{EpsWeights, WeightSpec};

#[derive(Debug, Clone, Copy)]
pub struct SweepOpts {
    pub h: f64,
    pub n_layers: usize,
    pub tail_tol: f64,
    pub tol: f64,
    pub h_1d: f64,
}

impl Default for SweepOpts {
    fn default() -> Self {
        SweepOpts {
            h: 0.02,
            n_layers: 6,
            tail_tol: 1e-10,
            tol: 1e-9,
            h_1d: 0.005,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub eps: f64,
    pub n: usize,
    pub mu: f64,
    pub residual: f64,
    /// Normalized transverse defect ||eta|| / ||psi|| on the channel part.
    pub defect: f64,
    pub nu_ref: f64,
    pub c_n: f64,
    pub mesh: MeshInfo,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub eps_list: Vec<f64>,
    pub n_max: usize,
    /// Half-line references nu_n.
    pub nu: Vec<f64>,
    /// Dirichlet upper-bound constants C_n.
    pub c: Vec<f64>,
    pub rows: Vec<SweepRow>,
    /// Linear-in-eps extrapolation from the last two sweep points.
    pub extrapolated: Vec<f64>,
    /// Per-mode flag: |mu_n(eps) - nu_n| decreased monotonically.
    pub monotone_approach: Vec<bool>,
}

impl SweepReport {
    pub fn mu(&self, eps_idx: usize, n: usize) -> f64 {
        self.rows[eps_idx * (self.n_max + 1) + n].mu
    }

    pub fn defect(&self, eps_idx: usize, n: usize) -> f64 {
        self.rows[eps_idx * (self.n_max + 1) + n].defect
    }

    /// Least-squares slope of log(defect) vs log(eps) for mode n.
    pub fn defect_slope(&self, n: usize) -> f64 {
        let pts: Vec<(f64, f64)> = self
            .eps_list
            .iter()
            .enumerate()
            .filter(|(i, _)| self.defect(*i, n) > 0.0)
            .map(|(i, &e)| (e.ln(), self.defect(i, n).ln()))
            .collect();
        let n_pts = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        (n_pts * sxy - sx * sy) / (n_pts * sxx - sx * sx)
    }
}

/// Transverse defect of a nodal mode on a terrain channel mesh: decompose
/// psi(s, t) = phi(s) + eta(s, t) with vanishing transverse mean of eta per
/// column, and return ||eta|| / ||psi|| in the rho * gamma_0 weighted norm
/// over the channel part (columns right of the inlet).
pub fn transverse_defect(
    w: &WeightSpec,
    map: &ThinMap,
    layout: &ChannelLayout,
    values: &[f64],
) -> Result<f64> {
    let ew = EpsWeights::with_a_eps(w, map.eps, map.a_eps);
    let t_levels = &layout.levels;
    let mt = t_levels.len();
    if mt < 3 {
        return Err(Error::parameter("need at least 3 transverse levels"));
    }
    // Trapezoid weights in t.
    let mut wt = vec![0.0; mt];
    for j in 0..mt - 1 {
        let dt = t_levels[j + 1] - t_levels[j];
        wt[j] += 0.5 * dt;
        wt[j + 1] += 0.5 * dt;
    }
    let mut norm_eta = 0.0;
    let mut norm_psi = 0.0;
    let cols: Vec<(usize, f64)> = layout
        .cols
        .iter()
        .enumerate()
        .filter(|(_, &x)| x >= map.a_eps - 1e-14)
        .map(|(i, &x)| (i, x))
        .collect();
    if cols.len() < 3 {
        return Err(Error::parameter("channel part has too few columns"));
    }
    for ci in 0..cols.len() {
        let (col, x) = cols[ci];
        let s = x - map.a_eps;
        // Trapezoid weight in s.
        let ds = {
            let left = if ci > 0 { x - cols[ci - 1].1 } else { 0.0 };
            let right = if ci + 1 < cols.len() {
                cols[ci + 1].1 - x
            } else {
                0.0
            };
            0.5 * (left + right)
        };
        let wcol = ds * ew.rho(s) * ew.gamma0(s);
        let base = layout.col_start[col];
        let psi: Vec<f64> = (0..mt).map(|j| values[base + j]).collect();
        let phi: f64 = (0..mt).map(|j| wt[j] * psi[j]).sum();
        let mut e2 = 0.0;
        let mut p2 = 0.0;
        for j in 0..mt {
            let eta = psi[j] - phi;
            e2 += wt[j] * eta * eta;
            p2 += wt[j] * psi[j] * psi[j];
        }
        norm_eta += wcol * e2;
        norm_psi += wcol * p2;
    }
    if !(norm_psi > 0.0) {
        return Err(Error::domain("mode vanishes on the channel part"));
    }
    Ok((norm_eta / norm_psi).sqrt())
}

/// Solves the channel eigenproblem for one eps on the physical terrain mesh.
pub fn solve_channel(
    w: &WeightSpec,
    profile: &Profile,
    eps: f64,
    n_max: usize,
    opts: &SweepOpts,
) -> Result<(Spectrum2D, TriMesh, ChannelLayout, ThinMap)> {
    let map = ThinMap::new(profile.clone(), eps)?;
    let (mesh, layout) =
        mesh_profile_with_layout(&map, w, opts.h, opts.tail_tol, opts.n_layers)?;
    let pair = assemble(w, &mesh);
    let spec = solve_pair(&pair, &mesh, n_max, opts.tol)?;
    Ok((spec, mesh, layout, map))
}

pub fn sweep(
    w: &WeightSpec,
    profile: &Profile,
    eps_list: &[f64],
    n_max: usize,
    opts: &SweepOpts,
) -> Result<SweepReport> {
    if eps_list.len() < 2 {
        return Err(Error::parameter("sweep needs at least two eps values"));
    }
    for w2 in eps_list.windows(2) {
        if !(w2[1] < w2[0]) {
            return Err(Error::parameter("eps values must decrease strictly"));
        }
    }
    for &eps in eps_list {
        let map = ThinMap::new(profile.clone(), eps)?;
        if !(eps <= 1.0 && map.a_eps <= 1.0) {
            return Err(Error::parameter(format!(
                "eps = {eps} violates the smallness assumption (eps <= 1, a_eps <= 1)"
            )));
        }
    }
    let o1 = Opts1D {
        h: opts.h_1d,
        tail_tol: opts.tail_tol,
        ..Default::default()
    };
    let nu = solve_neumann_1d(w, Interval::half_line(0.0), n_max, &o1)?
        .eigenvalues;
    let c = solve_dirichlet_bound_constants(w, n_max, &o1)?;

    let mut rows = Vec::new();
    for &eps in eps_list {
        let (spec, _, layout, map) =
            solve_channel(w, profile, eps, n_max, opts).map_err(|e| {
                Error::Parameter(format!("eps = {eps}: {e}"))
            })?;
        for n in 0..=n_max {
            let defect = if n == 0 {
                0.0
            } else {
                transverse_defect(w, &map, &layout, &spec.eigenvectors[n])?
            };
            rows.push(SweepRow {
                eps,
                n,
                mu: spec.eigenvalues[n],
                residual: spec.residuals[n],
                defect,
                nu_ref: nu[n],
                c_n: c[n],
                mesh: spec.mesh.clone(),
            });
        }
    }
    // Linear two-point extrapolation in eps from the last pair.
    let k = eps_list.len();
    let (e1, e2) = (eps_list[k - 2], eps_list[k - 1]);
    let stride = n_max + 1;
    let mut extrapolated = Vec::with_capacity(stride);
    for n in 0..=n_max {
        let m1 = rows[(k - 2) * stride + n].mu;
        let m2 = rows[(k - 1) * stride + n].mu;
        extrapolated.push((m2 * e1 - m1 * e2) / (e1 - e2));
    }
    let mut monotone_approach = Vec::with_capacity(stride);
    for n in 0..=n_max {
        let mut ok = true;
        let mut prev = f64::INFINITY;
        for i in 0..k {
            let gap = (rows[i * stride + n].mu - nu[n]).abs();
            if gap > prev + 1e-12 {
                ok = false;
            }
            prev = gap;
        }
        monotone_approach.push(ok);
    }
    Ok(SweepReport {
        eps_list: eps_list.to_vec(),
        n_max,
        nu,
        c,
        rows,
        extrapolated,
        monotone_approach,
    })
}
