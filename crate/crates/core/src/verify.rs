//! Theorem-level checkers: the spectral lower bound, the diameter bound, the
//! equal-area splitting mechanics on strips, and the strictness scan for
//! wedge-perturbed strips. Verdicts carry a two-mesh discretization error
//! estimate and are reproducible bit-for-bit for a fixed config and seed.

use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fem2d::{
    assemble, mesh_domain, solve_pair, DiscretePair, MeshInfo, MeshOpts, TriMesh,
};
use crate::geometry::measure::measure_polygon;
use crate::geometry::{bisect_polygon, truncate, Bracket, ConvexPolygon, Domain};
use crate::quad::triangle_rule_d6;
use crate::sl1d::{solve_neumann_1d_extrapolated, Interval, Opts1D};
use crate::weights::WeightSpec;
use crate::BUILD_ID;

#[derive(Debug, Clone, Copy)]
pub struct VerifyOpts {
    /// Coarse mesh width; the fine level is h/2.
    pub h: f64,
    pub tail_tol: f64,
    pub tol: f64,
}

impl Default for VerifyOpts {
    fn default() -> Self {
        VerifyOpts {
            h: 0.1,
            tail_tol: 1e-10,
            tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub check: String,
    pub domain: String,
    pub mu1: f64,
    pub bound: f64,
    pub margin: f64,
    pub tol: f64,
    pub pass: bool,
    pub seed: Option<u64>,
    pub mesh: MeshInfo,
    pub build: &'static str,
}

/// Two-mesh solve: returns (extrapolated mu1, discretization tolerance, fine
/// mesh info, fine-level artifacts).
fn mu1_two_mesh(
    w: &WeightSpec,
    d: &Domain,
    opts: &VerifyOpts,
) -> Result<(f64, f64, Spectral)> {
    let coarse = spectral(w, d, opts.h, opts)?;
    let fine = spectral(w, d, opts.h / 2.0, opts)?;
    let (mc, mf) = (coarse.spec_mu1, fine.spec_mu1);
    let extrap = mf + (mf - mc) / 3.0;
    let tol_discr = (mf - mc).abs() * 2.0 / 3.0 + 1e-9;
    Ok((extrap, tol_discr, fine))
}

pub(crate) struct Spectral {
    pub mesh: TriMesh,
    pub pair: DiscretePair,
    pub spec_mu1: f64,
    pub eigenvector: Vec<f64>,
    pub mesh_info: MeshInfo,
}

fn spectral(w: &WeightSpec, d: &Domain, h: f64, opts: &VerifyOpts) -> Result<Spectral> {
    let mesh = mesh_domain(
        w,
        d,
        &MeshOpts {
            h,
            tail_tol: opts.tail_tol,
            n_layers: 0,
        },
    )?;
    let pair = assemble(w, &mesh);
    let spec = solve_pair(&pair, &mesh, 1, opts.tol)?;
    Ok(Spectral {
        mesh_info: spec.mesh.clone(),
        spec_mu1: spec.eigenvalues[1],
        eigenvector: spec.eigenvectors.into_iter().nth(1).unwrap(),
        mesh,
        pair,
    })
}

/// Theorem-level check mu1(domain) >= 1 for convex domains.
pub fn check_lower_bound(w: &WeightSpec, d: &Domain, opts: &VerifyOpts) -> Result<Verdict> {
    let (mu1, tol_discr, fine) = mu1_two_mesh(w, d, opts)?;
    Ok(Verdict {
        check: "lower-bound".into(),
        domain: d.tag(),
        mu1,
        bound: 1.0,
        margin: mu1 - 1.0,
        tol: tol_discr,
        pass: mu1 >= 1.0 - tol_discr,
        seed: None,
        mesh: fine.mesh_info,
        build: BUILD_ID,
    })
}

/// Diameter comparison mu1(domain) >= mu1(-d/2, d/2) for bounded convex sets.
pub fn check_diameter_bound(w: &WeightSpec, d: &Domain, opts: &VerifyOpts) -> Result<Verdict> {
    if !d.is_bounded() {
        return Err(Error::parameter(
            "diameter bound requires a bounded domain",
        ));
    }
    let diam = d.diameter();
    let (mu1, tol_2d, fine) = mu1_two_mesh(w, d, opts)?;
    let o1 = Opts1D {
        h: (opts.h / 4.0).min(0.005),
        ..Default::default()
    };
    let (ext, _) = solve_neumann_1d_extrapolated(
        w,
        Interval::new(-0.5 * diam, 0.5 * diam)?,
        1,
        &o1,
    )?;
    let bound = ext[1];
    let tol = tol_2d + 1e-7;
    Ok(Verdict {
        check: "diameter".into(),
        domain: d.tag(),
        mu1,
        bound,
        margin: mu1 - bound,
        tol,
        pass: mu1 >= bound - tol,
        seed: None,
        mesh: fine.mesh_info,
        build: BUILD_ID,
    })
}

/// Clips a triangle against { p . n <= c } (or the complement), returning
/// sub-triangles that cover the kept part.
fn clip_triangle(
    tri: [[f64; 2]; 3],
    n: [f64; 2],
    c: f64,
    keep_below: bool,
) -> Vec<[[f64; 2]; 3]> {
    let side = |p: [f64; 2]| {
        let s = p[0] * n[0] + p[1] * n[1] - c;
        if keep_below {
            s
        } else {
            -s
        }
    };
    let mut poly: Vec<[f64; 2]> = Vec::with_capacity(4);
    for i in 0..3 {
        let a = tri[i];
        let b = tri[(i + 1) % 3];
        let (sa, sb) = (side(a), side(b));
        if sa <= 0.0 {
            poly.push(a);
        }
        if (sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0) {
            let t = sa / (sa - sb);
            poly.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }
    if poly.len() < 3 {
        return Vec::new();
    }
    (1..poly.len() - 1)
        .map(|i| [poly[0], poly[i], poly[i + 1]])
        .collect()
}

#[derive(Debug, Clone, Copy, Default)]
struct HalfIntegrals {
    mass: f64,
    u: f64,
    u_sq: f64,
    energy: f64,
}

/// Integrals of (1, u, u^2, |grad u|^2) against dm_gamma over the part of the
/// mesh on one side of the line { p . n = c }, clipping cut elements.
fn half_integrals(
    w: &WeightSpec,
    mesh: &TriMesh,
    u: &[f64],
    n: [f64; 2],
    c: f64,
    keep_below: bool,
) -> HalfIntegrals {
    let rule = triangle_rule_d6();
    let mut out = HalfIntegrals::default();
    for t in &mesh.triangles {
        let (p0, p1, p2) = (
            mesh.vertices[t[0]],
            mesh.vertices[t[1]],
            mesh.vertices[t[2]],
        );
        let (grad, _) = crate::fem2d::p1_gradients_pub(p0, p1, p2);
        let gu = [
            u[t[0]] * grad[0][0] + u[t[1]] * grad[1][0] + u[t[2]] * grad[2][0],
            u[t[0]] * grad[0][1] + u[t[1]] * grad[1][1] + u[t[2]] * grad[2][1],
        ];
        let gu2 = gu[0] * gu[0] + gu[1] * gu[1];
        // Affine representation u(x) = u0 + gu . (x - p0).
        let u_at = |x: f64, y: f64| u[t[0]] + gu[0] * (x - p0[0]) + gu[1] * (y - p0[1]);
        for sub in clip_triangle([p0, p1, p2], n, c, keep_below) {
            let mut mass = 0.0;
            let mut ui = 0.0;
            let mut uq = 0.0;
            for (bc, wq) in rule.points.iter().zip(rule.weights.iter()) {
                let x = bc[0] * sub[0][0] + bc[1] * sub[1][0] + bc[2] * sub[2][0];
                let y = bc[0] * sub[0][1] + bc[1] * sub[1][1] + bc[2] * sub[2][1];
                let g = w.gamma(x, y);
                let uv = u_at(x, y);
                mass += wq * g;
                ui += wq * g * uv;
                uq += wq * g * uv * uv;
            }
            let area = 0.5
                * ((sub[1][0] - sub[0][0]) * (sub[2][1] - sub[0][1])
                    - (sub[2][0] - sub[0][0]) * (sub[1][1] - sub[0][1]))
                    .abs();
            out.mass += area * mass;
            out.u += area * ui;
            out.u_sq += area * uq;
            out.energy += area * mass * gu2;
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitReport {
    pub domain: String,
    pub alpha_star: f64,
    pub offset: f64,
    /// I(alpha_star), integral of the eigenfunction over the primed half.
    pub half_integral: f64,
    pub l1_norm: f64,
    pub equal_area_defect: f64,
    pub total_measure: f64,
    pub mu1_whole: f64,
    pub mu1_half1: f64,
    pub mu1_half2: f64,
    pub rayleigh_half1: f64,
    pub rayleigh_half2: f64,
    pub bracket: Bracket,
    pub degenerate_half: bool,
    pub pass: bool,
    pub mesh: MeshInfo,
    pub build: &'static str,
}

/// The splitting-lemma mechanics: find the direction whose equal-area cut
/// annihilates the integral of the first eigenfunction, then compare the
/// restricted Rayleigh quotients of that eigenfunction with mu1. The minimum
/// of the two quotients can never exceed the whole-domain quotient (mediant
/// inequality), which is the literal discrete form of the lemma's mechanism.
pub fn split_experiment(w: &WeightSpec, d: &Domain, opts: &VerifyOpts) -> Result<SplitReport> {
    let fine = spectral(w, d, opts.h, opts)?;
    let u = &fine.eigenvector;
    let mu1 = fine.spec_mu1;
    let trunc = truncate(w, d, opts.tail_tol)?;
    let poly = &trunc.polygon;
    let total = measure_polygon(w, poly, 1e-13);

    // L1 norm of u for the stopping rule.
    let l1 = {
        let rule = triangle_rule_d6();
        let mut acc = 0.0;
        for t in &fine.mesh.triangles {
            let (p0, p1, p2) = (
                fine.mesh.vertices[t[0]],
                fine.mesh.vertices[t[1]],
                fine.mesh.vertices[t[2]],
            );
            acc += rule.integrate(p0, p1, p2, &mut |x, y| {
                // Nodal interpolation is fine for a normalizer.
                let (grad, _) = crate::fem2d::p1_gradients_pub(p0, p1, p2);
                let gu = [
                    u[t[0]] * grad[0][0] + u[t[1]] * grad[1][0] + u[t[2]] * grad[2][0],
                    u[t[0]] * grad[0][1] + u[t[1]] * grad[1][1] + u[t[2]] * grad[2][1],
                ];
                let uv = u[t[0]] + gu[0] * (x - p0[0]) + gu[1] * (y - p0[1]);
                w.gamma(x, y) * uv.abs()
            });
        }
        acc
    };

    let area_tol = (0.05 * opts.tol).max(1e-12);
    let mut eval = |alpha: f64| -> Result<(f64, f64)> {
        let c = bisect_polygon(w, poly, alpha, area_tol, total)?;
        let n = [alpha.cos(), alpha.sin()];
        let h = half_integrals(w, &fine.mesh, u, n, c, true);
        Ok((h.u, c))
    };
    let (alpha_star, i_value, offset, bracket) =
        crate::geometry::zero_mean_search(&mut eval, opts.tol * l1)?;

    let n = [alpha_star.cos(), alpha_star.sin()];
    let lower = half_integrals(w, &fine.mesh, u, n, offset, true);
    let upper = half_integrals(w, &fine.mesh, u, n, offset, false);
    let q1 = lower.energy / lower.u_sq;
    let q2 = upper.energy / upper.u_sq;
    let equal_area_defect = (lower.mass - 0.5 * total).abs();

    // Eigenvalues of the two half-domains (polygon clip + fresh mesh).
    let mut degenerate_half = false;
    let mut half_mu = [f64::NAN; 2];
    for (i, keep) in [true, false].into_iter().enumerate() {
        let sign = if keep { 1.0 } else { -1.0 };
        let clipped = poly.clip_halfplane([sign * n[0], sign * n[1]], sign * offset);
        match clipped {
            Some(hp) if measure_polygon(w, &hp, 1e-12) > 1e-6 * total => {
                let hd = Domain::Polygon { vertices: hp };
                let got = spectral(w, &hd, opts.h, opts)?;
                half_mu[i] = got.spec_mu1;
            }
            _ => degenerate_half = true,
        }
    }

    let pass = q1.min(q2) <= mu1 + 1e-6
        && i_value.abs() <= opts.tol.max(1e-8) * l1.max(1.0)
        && equal_area_defect <= 1e-8 * total;
    Ok(SplitReport {
        domain: d.tag(),
        alpha_star,
        offset,
        half_integral: i_value,
        l1_norm: l1,
        equal_area_defect,
        total_measure: total,
        mu1_whole: mu1,
        mu1_half1: half_mu[0],
        mu1_half2: half_mu[1],
        rayleigh_half1: q1,
        rayleigh_half2: q2,
        bracket,
        degenerate_half,
        pass,
        mesh: fine.mesh_info,
        build: BUILD_ID,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct StrictnessPoint {
    pub kappa: f64,
    pub mu1: f64,
    pub margin: f64,
    pub tol: f64,
    pub mesh: MeshInfo,
}

/// Wedge-perturbed strips { 0 < y < 1, x > kappa |y - 1/2| - 1/(2 kappa) }:
/// the wedge vertex recedes as kappa -> 0, so the family tends to the full
/// strip and the margins mu1 - 1 should shrink to zero.
pub fn strictness_scan(
    w: &WeightSpec,
    kappas: &[f64],
    opts: &VerifyOpts,
) -> Result<Vec<StrictnessPoint>> {
    let mut out = Vec::new();
    for &kappa in kappas {
        let d = wedge_domain(w, kappa, opts)?;
        let (mu1, tol, fine) = mu1_two_mesh(w, &d, opts)?;
        out.push(StrictnessPoint {
            kappa,
            mu1,
            margin: mu1 - 1.0,
            tol,
            mesh: fine.mesh_info,
        });
    }
    Ok(out)
}

pub fn wedge_domain(w: &WeightSpec, kappa: f64, opts: &VerifyOpts) -> Result<Domain> {
    if kappa < 0.0 {
        return Err(Error::parameter("wedge slope must be nonnegative"));
    }
    if kappa == 0.0 {
        return Domain::strip(0.0, 1.0);
    }
    let strip = Domain::strip(0.0, 1.0)?;
    let t = truncate(w, &strip, opts.tail_tol)?;
    let (lo, hi) = t.polygon.bbox();
    let x_vertex = -0.5 / kappa;
    let p_end = 0.5 * kappa + x_vertex;
    if p_end <= lo[0] {
        // Wedge entirely inside the discarded tail: identical to the strip.
        return Ok(Domain::Polygon { vertices: t.polygon });
    }
    let verts = vec![
        [p_end, 0.0],
        [hi[0], 0.0],
        [hi[0], 1.0],
        [p_end, 1.0],
        [x_vertex, 0.5],
    ];
    Ok(Domain::polygon(verts)?)
}

/// Seeded random convex polygons: support points at sorted uniform angles
/// with radii in [1/2, 3], hulled; degenerate draws are rejected.
pub fn random_convex_polygons(seed: u64, count: usize) -> Vec<ConvexPolygon> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut unit = move || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n_dirs = 8 + (unit() * 9.0).floor() as usize; // 8..=16
        let mut angles: Vec<f64> = (0..n_dirs)
            .map(|_| unit() * std::f64::consts::TAU)
            .collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let pts: Vec<[f64; 2]> = angles
            .iter()
            .map(|&a| {
                let r = 0.5 + 2.5 * unit();
                [r * a.cos(), r * a.sin()]
            })
            .collect();
        match ConvexPolygon::hull_of(&pts) {
            Ok(p) if p.area() > 0.05 => out.push(p),
            _ => {}
        }
    }
    out
}

/// Lower-bound suite over the seeded polygon corpus.
pub fn suite_lower_bound(
    w: &WeightSpec,
    seed: u64,
    count: usize,
    opts: &VerifyOpts,
) -> Result<Vec<Verdict>> {
    let mut out = Vec::new();
    for poly in random_convex_polygons(seed, count) {
        let d = Domain::Polygon { vertices: poly };
        let mut v = check_lower_bound(w, &d, opts)?;
        v.seed = Some(seed);
        out.push(v);
    }
    Ok(out)
}

/// Diameter-bound suite over the same corpus.
pub fn suite_diameter(
    w: &WeightSpec,
    seed: u64,
    count: usize,
    opts: &VerifyOpts,
) -> Result<Vec<Verdict>> {
    let mut out = Vec::new();
    for poly in random_convex_polygons(seed, count) {
        let d = Domain::Polygon { vertices: poly };
        let mut v = check_diameter_bound(w, &d, opts)?;
        v.seed = Some(seed);
        out.push(v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl1d::solve_neumann_1d;

    #[test]
    fn lower_bound_on_square_matches_tensor_oracle() {
        let w = WeightSpec::default();
        let d = Domain::polygon(vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]])
            .unwrap();
        let opts = VerifyOpts {
            h: 0.1,
            ..Default::default()
        };
        let v = check_lower_bound(&w, &d, &opts).unwrap();
        assert!(v.pass);
        // Tensor oracle: mu1(square) = nu1(-1, 1).
        let o1 = Opts1D {
            h: 0.002,
            ..Default::default()
        };
        let s = solve_neumann_1d(&w, Interval::new(-1.0, 1.0).unwrap(), 1, &o1).unwrap();
        assert!(
            (v.mu1 - s.eigenvalues[1]).abs() < 5e-3,
            "mu1 {} vs tensor {}",
            v.mu1,
            s.eigenvalues[1]
        );
        assert!(v.mu1 > 1.0);
    }

    #[test]
    fn semi_strip_exceeds_one_by_separation() {
        let w = WeightSpec::default();
        let d = Domain::semi_strip(0.0, 0.0, 1.0).unwrap();
        let opts = VerifyOpts {
            h: 0.05,
            tail_tol: 1e-10,
            tol: 1e-9,
        };
        let v = check_lower_bound(&w, &d, &opts).unwrap();
        assert!(v.pass);
        // Separated oracle: min(nu1(0, inf), nu1 of (0,1)) = nu1(0, inf) = 2.
        let o1 = Opts1D {
            h: 0.004,
            ..Default::default()
        };
        let half = solve_neumann_1d(&w, Interval::half_line(0.0), 1, &o1).unwrap();
        let cross = solve_neumann_1d(&w, Interval::new(0.0, 1.0).unwrap(), 1, &o1).unwrap();
        let want = half.eigenvalues[1].min(cross.eigenvalues[1]);
        assert!(
            (v.mu1 - want).abs() < 5e-3,
            "semi-strip mu1 {} vs oracle {want}",
            v.mu1
        );
    }

    #[test]
    fn diameter_bound_examples() {
        let w = WeightSpec::default();
        let opts = VerifyOpts {
            h: 0.1,
            ..Default::default()
        };
        let square = Domain::polygon(vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]])
            .unwrap();
        let v = check_diameter_bound(&w, &square, &opts).unwrap();
        assert!(v.pass && v.margin > 0.0);

        // Thin rectangle: both sides approach nu1(-1, 1); small margin.
        let thin = Domain::polygon(vec![
            [-1.0, 0.0],
            [1.0, 0.0],
            [1.0, 0.05],
            [-1.0, 0.05],
        ])
        .unwrap();
        let vt = check_diameter_bound(
            &w,
            &thin,
            &VerifyOpts {
                h: 0.02,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(vt.pass, "thin rectangle margin {}", vt.margin);
        assert!(vt.margin < 0.2);

        // Regular hexagon inscribed in the unit circle.
        let hexa: Vec<[f64; 2]> = (0..6)
            .map(|i| {
                let a = std::f64::consts::TAU * i as f64 / 6.0;
                [a.cos(), a.sin()]
            })
            .collect();
        let vh = check_diameter_bound(&w, &Domain::polygon(hexa).unwrap(), &opts).unwrap();
        assert!(vh.pass && vh.margin > 0.0);
    }

    #[test]
    fn unbounded_domain_rejected_by_diameter_check() {
        let w = WeightSpec::default();
        let opts = VerifyOpts::default();
        let d = Domain::strip(0.0, 1.0).unwrap();
        assert!(check_diameter_bound(&w, &d, &opts).is_err());
    }

    #[test]
    fn corpus_is_deterministic_and_valid() {
        let a = random_convex_polygons(42, 20);
        let b = random_convex_polygons(42, 20);
        assert_eq!(a.len(), 20);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.vertices(), y.vertices());
        }
        let c = random_convex_polygons(7, 5);
        assert!(c.iter().any(|p| p.vertices() != a[0].vertices()));
    }

    #[test]
    fn wedge_domains_shrink_with_kappa() {
        let w = WeightSpec::default();
        let opts = VerifyOpts::default();
        let d1 = wedge_domain(&w, 1.0, &opts).unwrap();
        match &d1 {
            Domain::Polygon { vertices } => {
                assert_eq!(vertices.len(), 5);
            }
            _ => panic!("expected polygon"),
        }
        assert!(matches!(
            wedge_domain(&w, 0.0, &opts).unwrap(),
            Domain::Strip { .. }
        ));
    }
}
