//! Assembly of the transformed quadratic form on the fixed reference strip:
//! the channel operator pushed through the layer map, with the anisotropic
//! coefficient coupling stretched slopes to transverse derivatives. Its
//! spectrum matches the physical channel discretization up to mesh error,
//! the two being unitarily equivalent in the continuum.

use crate::error::{Error, Result};
use crate::fem2d::{assemble_with, DiscretePair, TriMesh};
use crate::thinlimit::ThinMap;
use crate::weights::WeightSpec;

#[derive(Debug, Clone, Copy)]
pub struct RefStripOpts {
    /// Mesh width in s on the channel side.
    pub h: f64,
    /// Transverse layers.
    pub n_layers: usize,
    /// Cut distance from the singular end s = -1 (Jacobian vanishes there).
    pub delta_cut: f64,
    pub tail_tol: f64,
}

impl Default for RefStripOpts {
    fn default() -> Self {
        RefStripOpts {
            h: 0.04,
            n_layers: 6,
            delta_cut: 1e-3,
            tail_tol: 1e-10,
        }
    }
}

/// Structured mesh of (-1 + delta_cut, s_max) x (0, 1), graded toward the
/// singular end and aligned with the s = 0 kink.
pub fn reference_strip_mesh(
    map: &ThinMap,
    w: &WeightSpec,
    opts: &RefStripOpts,
) -> Result<TriMesh> {
    if !(opts.delta_cut > 0.0 && opts.delta_cut < 1.0) {
        return Err(Error::parameter("delta_cut must lie in (0, 1)"));
    }
    let m = opts.n_layers.max(2);
    // Tail of gamma_0(s + a_eps) controls the right cutoff in s.
    let tail = |s: f64| {
        crate::geometry::measure::gauss_tail_right(w.x0 + map.a_eps, s)
    };
    let mut s_max = 1.0f64;
    while tail(s_max) > opts.tail_tol {
        s_max += 0.25;
        if s_max > 80.0 {
            break;
        }
    }
    let mut cols: Vec<f64> = Vec::new();
    if map.s_min() < 0.0 {
        // Geometric growth away from the singular end, then uniform.
        let mut s = -1.0 + opts.delta_cut;
        while s < 0.0 {
            cols.push(s);
            let ds = (0.5 * (s + 1.0)).clamp(0.5 * opts.delta_cut, opts.h);
            s += ds;
        }
    }
    cols.push(0.0);
    let mut s = opts.h;
    while s < s_max {
        cols.push(s);
        s += opts.h;
    }
    cols.push(s_max);
    cols.dedup_by(|a, b| (*a - *b).abs() < 1e-13 * s_max);

    let mut vertices = Vec::with_capacity(cols.len() * (m + 1));
    for &sc in &cols {
        for j in 0..=m {
            vertices.push([sc, j as f64 / m as f64]);
        }
    }
    let id = |i: usize, j: usize| i * (m + 1) + j;
    let mut triangles = Vec::with_capacity(2 * (cols.len() - 1) * m);
    for i in 0..cols.len() - 1 {
        for j in 0..m {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            if (i + j) % 2 == 0 {
                triangles.push([a, b, c]);
                triangles.push([a, c, d]);
            } else {
                triangles.push([a, b, d]);
                triangles.push([b, c, d]);
            }
        }
    }
    // Reuse the rectangle finalizer path by constructing directly.
    let mesh = TriMesh {
        vertices,
        triangles,
        boundary_edges: Vec::new(),
        h_max: 0.0,
        min_angle_deg: 0.0,
        graded_zone: None,
        domain_tag: format!("refstrip(eps={})", map.eps),
        trunc_radius: Some(s_max + w.x0 + map.a_eps),
    };
    rebuild_metadata(mesh)
}

fn rebuild_metadata(mesh: TriMesh) -> Result<TriMesh> {
    // Route through the public checks by re-finalizing via mesh module
    // internals: cheapest is to recompute on a fresh TriMesh.
    crate::fem2d::mesh::refinalize(mesh)
}

/// Assembles the transformed stiffness/mass pair on a reference-strip mesh.
/// Fails if any triangle straddles the s = 0 kink line.
pub fn assemble_h_eps(
    w: &WeightSpec,
    map: &ThinMap,
    mesh: &TriMesh,
) -> Result<DiscretePair> {
    for t in &mesh.triangles {
        let mut neg = false;
        let mut pos = false;
        for &vi in t {
            let s = mesh.vertices[vi][0];
            if s < -1e-12 {
                neg = true;
            }
            if s > 1e-12 {
                pos = true;
            }
        }
        if neg && pos {
            return Err(Error::Mesh(
                "reference-strip mesh must align an element edge with s = 0".into(),
            ));
        }
    }
    let eps = map.eps;
    let pair = assemble_with(mesh, &mut |s, t| {
        let gp = map.g_prime(s);
        let x = map.g(s);
        let fe = map.f_eps(x);
        let fep = map.f_eps_prime(x);
        let a = fep / fe * t;
        let weight = w.gamma(x, fe * t) * gp * fe / eps;
        let g11 = 1.0 / (gp * gp);
        let g12 = -a / gp;
        let g22 = a * a + 1.0 / (fe * fe);
        (
            [[g11 * weight, g12 * weight], [g12 * weight, g22 * weight]],
            weight,
        )
    });
    Ok(pair)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem2d::solve_pair;
    use crate::geometry::{gaussian_measure, Domain, Profile};

    #[test]
    fn transformed_mass_matches_channel_measure() {
        let w = WeightSpec::default();
        let p = Profile::linear(1.0).unwrap();
        let eps = 0.2;
        let map = ThinMap::new(p.clone(), eps).unwrap();
        let opts = RefStripOpts::default();
        let mesh = reference_strip_mesh(&map, &w, &opts).unwrap();
        let pair = assemble_h_eps(&w, &map, &mesh).unwrap();
        let d = Domain::profile(p, eps).unwrap();
        let m_gamma = gaussian_measure(&w, &d, 1e-10).unwrap();
        let got = pair.total_mass();
        let want = m_gamma / eps;
        assert!(
            (got - want).abs() < 2e-4 * want,
            "mass {got} vs m_gamma/eps {want}"
        );
    }

    #[test]
    fn lowest_mode_is_zero_with_constants() {
        let w = WeightSpec::default();
        let map = ThinMap::new(Profile::linear(1.0).unwrap(), 0.2).unwrap();
        let mesh = reference_strip_mesh(&map, &w, &RefStripOpts::default()).unwrap();
        let pair = assemble_h_eps(&w, &map, &mesh).unwrap();
        pair.validate().unwrap();
        let spec = solve_pair(&pair, &mesh, 1, 1e-9).unwrap();
        assert!(spec.eigenvalues[0].abs() < 1e-9);
        assert!(spec.eigenvalues[1] > 0.5);
    }

    #[test]
    fn misaligned_mesh_is_rejected() {
        let w = WeightSpec::default();
        let map = ThinMap::new(Profile::linear(1.0).unwrap(), 0.2).unwrap();
        // A rectangle mesh over s in (-0.05, 0.35) whose columns skip s = 0.
        let mesh = crate::fem2d::mesh_rectangle(-0.05, 0.35, 0.0, 1.0, 0.1).unwrap();
        assert!(assemble_h_eps(&w, &map, &mesh).is_err());
    }
}
