//! 1D Neumann Sturm-Liouville solver for -(g v')' = nu g v with Gaussian
//! weights on finite, half-infinite and full-line intervals, plus the
//! auxiliary Dirichlet problem supplying the channel upper-bound constants.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::tridiag::{eigenpairs, SymTridiag};
use crate::quad::gauss_legendre;
use crate::weights::{EpsWeights, WeightSpec};

/// Interval with possibly infinite endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a < b) {
            return Err(Error::parameter(format!("interval needs a < b, got ({a}, {b})")));
        }
        if a.is_nan() || b.is_nan() {
            return Err(Error::parameter("interval endpoints must not be NaN"));
        }
        Ok(Interval { a, b })
    }

    pub fn real_line() -> Self {
        Interval {
            a: f64::NEG_INFINITY,
            b: f64::INFINITY,
        }
    }

    pub fn half_line(a: f64) -> Self {
        Interval {
            a,
            b: f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Grid1D {
    pub interval: Interval,
    pub nodes: Vec<f64>,
    /// Truncation radius (distance from the weight center) when an endpoint
    /// was infinite.
    pub trunc_radius: Option<f64>,
}

impl Grid1D {
    /// Uniform grid over the (truncated) interval. Infinite endpoints are cut
    /// at distance `radius` from the weight center -x0.
    pub fn uniform(interval: Interval, w: &WeightSpec, h: f64, radius: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::parameter("mesh width must be positive"));
        }
        let center = -w.x0;
        let mut lo = interval.a;
        let mut hi = interval.b;
        let mut truncated = false;
        if !lo.is_finite() {
            lo = center - radius;
            truncated = true;
        }
        if !hi.is_finite() {
            hi = center + radius;
            truncated = true;
        }
        if !(lo < hi) {
            return Err(Error::parameter(format!(
                "truncated interval is empty: ({lo}, {hi})"
            )));
        }
        let n_el = ((hi - lo) / h).ceil().max(2.0) as usize;
        let nodes: Vec<f64> = (0..=n_el)
            .map(|i| lo + (hi - lo) * i as f64 / n_el as f64)
            .collect();
        Ok(Grid1D {
            interval,
            nodes,
            trunc_radius: truncated.then_some(radius),
        })
    }

    pub fn h_max(&self) -> f64 {
        self.nodes
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes.len() < 3 {
            return Err(Error::Mesh("grid needs at least 3 nodes".into()));
        }
        let mut hmin = f64::INFINITY;
        let mut hmax = 0.0f64;
        for w in self.nodes.windows(2) {
            let h = w[1] - w[0];
            if !(h > 0.0) {
                return Err(Error::Mesh("grid nodes must increase strictly".into()));
            }
            hmin = hmin.min(h);
            hmax = hmax.max(h);
        }
        if hmax / hmin > 1e6 {
            return Err(Error::Mesh(format!(
                "mesh ratio {:.2e} exceeds 1e6",
                hmax / hmin
            )));
        }
        Ok(())
    }
}

/// Assembles stiffness and mass tridiagonals for P1 elements with separate
/// stiffness/mass weights evaluated by 4-point Gauss per element.
pub fn assemble_1d(
    grid: &Grid1D,
    w_stiff: &dyn Fn(f64) -> f64,
    w_mass: &dyn Fn(f64) -> f64,
) -> (SymTridiag, SymTridiag) {
    let n = grid.nodes.len();
    let (gx, gw) = gauss_legendre(4);
    let mut kd = vec![0.0; n];
    let mut ke = vec![0.0; n - 1];
    let mut md = vec![0.0; n];
    let mut me = vec![0.0; n - 1];
    for el in 0..n - 1 {
        let xa = grid.nodes[el];
        let xb = grid.nodes[el + 1];
        let h = xb - xa;
        let mid = 0.5 * (xa + xb);
        let half = 0.5 * h;
        let mut int_ws = 0.0; // integral of stiffness weight
        let mut m00 = 0.0;
        let mut m01 = 0.0;
        let mut m11 = 0.0;
        for (x, wq) in gx.iter().zip(gw.iter()) {
            let xq = mid + half * x;
            let phi1 = (xq - xa) / h;
            let phi0 = 1.0 - phi1;
            let ws = w_stiff(xq) * wq * half;
            let wm = w_mass(xq) * wq * half;
            int_ws += ws;
            m00 += wm * phi0 * phi0;
            m01 += wm * phi0 * phi1;
            m11 += wm * phi1 * phi1;
        }
        let kcoef = int_ws / (h * h);
        kd[el] += kcoef;
        kd[el + 1] += kcoef;
        ke[el] -= kcoef;
        md[el] += m00;
        md[el + 1] += m11;
        me[el] += m01;
    }
    (SymTridiag { d: kd, e: ke }, SymTridiag { d: md, e: me })
}

#[derive(Debug, Clone, Serialize)]
pub struct GridSummary {
    #[serde(rename = "R")]
    pub radius: Option<f64>,
    pub h: f64,
    pub n_nodes: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Spectrum1D {
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    pub grid: GridSummary,
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<f64>>,
    #[serde(skip)]
    pub nodes: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
pub struct Opts1D {
    pub h: f64,
    /// Explicit truncation radius; when None it is chosen from `tail_tol`.
    pub radius: Option<f64>,
    pub tail_tol: f64,
    pub tol: f64,
}

impl Default for Opts1D {
    fn default() -> Self {
        Opts1D {
            h: 0.005,
            radius: None,
            tail_tol: 1e-12,
            tol: 1e-9,
        }
    }
}

impl Opts1D {
    pub fn pick_radius(&self) -> f64 {
        match self.radius {
            Some(r) => r,
            None => {
                // One-sided Gaussian tail sqrt(pi/2) erfc(R/sqrt(2)) <= tail_tol.
                let mut r = 4.0;
                while crate::geometry::measure::gauss_tail_right(0.0, r) > self.tail_tol {
                    r += 0.5;
                    if r > 60.0 {
                        break;
                    }
                }
                r
            }
        }
    }
}

/// First k+1 Neumann eigenpairs of -(g0 v')' = nu g0 v on the interval, with
/// g0(s) = exp(-(x0+s)^2/2); the constant exp(-y0^2/2) cancels.
pub fn solve_neumann_1d(
    w: &WeightSpec,
    interval: Interval,
    k: usize,
    opts: &Opts1D,
) -> Result<Spectrum1D> {
    let grid = Grid1D::uniform(interval, w, opts.h, opts.pick_radius())?;
    grid.validate()?;
    let n = grid.nodes.len();
    if k + 1 > n {
        return Err(Error::parameter(format!(
            "requested {} modes but the grid has {n} nodes",
            k + 1
        )));
    }
    let weight = |x: f64| w.gamma0(x);
    let (kk, mm) = assemble_1d(&grid, &weight, &weight);
    let (values, vectors, residuals) = eigenpairs(&kk, &mm, k + 1);
    let worst = residuals.iter().cloned().fold(0.0f64, f64::max);
    if worst > opts.tol.max(1e-8) {
        return Err(Error::SolverNoConvergence {
            detail: "1D Neumann eigensolve".into(),
            iterations: 0,
            residual: worst,
        });
    }
    Ok(Spectrum1D {
        eigenvalues: values,
        residuals,
        grid: GridSummary {
            radius: grid.trunc_radius,
            h: grid.h_max(),
            n_nodes: n,
        },
        eigenvectors: vectors,
        nodes: grid.nodes,
    })
}

/// Richardson-extrapolated Neumann eigenvalues from meshes h and h/2,
/// assuming second-order convergence.
pub fn solve_neumann_1d_extrapolated(
    w: &WeightSpec,
    interval: Interval,
    k: usize,
    opts: &Opts1D,
) -> Result<(Vec<f64>, Spectrum1D)> {
    let coarse = solve_neumann_1d(w, interval, k, opts)?;
    let fine_opts = Opts1D {
        h: opts.h / 2.0,
        ..*opts
    };
    let fine = solve_neumann_1d(w, interval, k, &fine_opts)?;
    let extrap = fine
        .eigenvalues
        .iter()
        .zip(&coarse.eigenvalues)
        .map(|(f, c)| (4.0 * f - c) / 3.0)
        .collect();
    Ok((extrap, fine))
}

/// First k+1 Dirichlet eigenvalues of -gm^{-1} (gp u')' on (0, inf) with
/// stiffness weight gp = gamma_+ and mass weight gm = gamma_-; these bound
/// the channel eigenvalues uniformly in eps <= 1.
pub fn solve_dirichlet_bound_constants(
    w: &WeightSpec,
    k: usize,
    opts: &Opts1D,
) -> Result<Vec<f64>> {
    // a_eps enters gamma_+/- only through |x0| a_eps terms that cancel in the
    // envelope definitions; build them with a_eps = 0 (they are eps-free).
    let ew = EpsWeights::with_a_eps(w, 0.0, 0.0);
    let radius = opts.pick_radius() + w.x0.abs() + 2.0;
    let grid = Grid1D::uniform(Interval::new(0.0, radius)?, w, opts.h, radius)?;
    grid.validate()?;
    let n = grid.nodes.len();
    if k + 3 > n {
        return Err(Error::parameter("grid too coarse for requested modes"));
    }
    let (kk, mm) = assemble_1d(&grid, &|s| ew.gamma_plus(s), &|s| ew.gamma_minus(s));
    // Dirichlet at both ends: restrict to interior nodes.
    let strip = |t: &SymTridiag| SymTridiag {
        d: t.d[1..n - 1].to_vec(),
        e: t.e[1..n - 2].to_vec(),
    };
    let (values, _, residuals) = eigenpairs(&strip(&kk), &strip(&mm), k + 1);
    let worst = residuals.iter().cloned().fold(0.0f64, f64::max);
    if worst > opts.tol.max(1e-8) {
        return Err(Error::SolverNoConvergence {
            detail: "Dirichlet bound-constant solve".into(),
            iterations: 0,
            residual: worst,
        });
    }
    Ok(values)
}
