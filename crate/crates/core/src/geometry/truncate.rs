//! Truncation of unbounded domains to convex polygons with a controlled
//! Gaussian tail. The paper's analysis is exact on unbounded sets; numerics
//! cut where the discarded mass is below `tail_tol` and record the radius.

use super::domain::Domain;
use super::measure::{gauss_segment, gauss_tail_right, TWO_PI};
use super::polygon::ConvexPolygon;
use crate::error::{Error, Result};
use crate::thinlimit::ThinMap;
use crate::weights::WeightSpec;

#[derive(Debug, Clone)]
pub struct Truncated {
    pub polygon: ConvexPolygon,
    /// Distance from the weight center at which the domain was cut;
    /// None when the input was already bounded.
    pub radius: Option<f64>,
}

/// Smallest r in [lo, hi] with tail(r) <= target, for decreasing `tail`.
fn solve_tail(tail: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, target: f64) -> f64 {
    while tail(hi) > target {
        lo = hi;
        hi *= 2.0;
        if hi > 1e6 {
            return hi;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if tail(mid) <= target {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-9 * hi.abs().max(1.0) {
            break;
        }
    }
    hi
}

pub fn truncate(w: &WeightSpec, d: &Domain, tail_tol: f64) -> Result<Truncated> {
    if !(tail_tol > 0.0) {
        return Err(Error::parameter("tail tolerance must be positive"));
    }
    match d {
        Domain::Polygon { vertices } => Ok(Truncated {
            polygon: vertices.clone(),
            radius: None,
        }),
        Domain::Plane => {
            let sides = 128usize;
            // Disc tail outside radius r is 2 pi exp(-r^2/2); enlarge so the
            // inscribed polygon still contains the target disc.
            let r_target = solve_tail(|r| TWO_PI * (-0.5 * r * r).exp(), 1.0, 8.0, tail_tol);
            let r = r_target / (std::f64::consts::PI / sides as f64).cos();
            let [cx, cy] = w.center();
            let verts: Vec<[f64; 2]> = (0..sides)
                .map(|i| {
                    let a = TWO_PI * i as f64 / sides as f64;
                    [cx + r * a.cos(), cy + r * a.sin()]
                })
                .collect();
            Ok(Truncated {
                polygon: ConvexPolygon::new(verts)?,
                radius: Some(r_target),
            })
        }
        Domain::Strip { y1, y2 } => {
            let y_mass = gauss_segment(w.y0, *y1, *y2);
            let tail = |r: f64| 2.0 * y_mass * gauss_tail_right(0.0, r);
            let r = solve_tail(tail, 1.0, 8.0, tail_tol);
            let cx = -w.x0;
            Ok(Truncated {
                polygon: ConvexPolygon::rectangle(cx - r, cx + r, *y1, *y2)?,
                radius: Some(r),
            })
        }
        Domain::SemiStrip { x, y1, y2 } => {
            let y_mass = gauss_segment(w.y0, *y1, *y2);
            let tail = |r: f64| y_mass * gauss_tail_right(w.x0, r);
            // Cut coordinate b solves the one-sided tail; keep b > x.
            let b = solve_tail(tail, *x, x.abs().max(1.0) + 8.0, tail_tol);
            Ok(Truncated {
                polygon: ConvexPolygon::rectangle(*x, b, *y1, *y2)?,
                radius: Some(b + w.x0),
            })
        }
        Domain::Profile { f, eps } => {
            let map = ThinMap::new(f.clone(), *eps)?;
            let a_eps = map.a_eps;
            // Channel mass beyond x is at most eps * right tail of gamma_0.
            let tail = |x: f64| eps * gauss_tail_right(w.x0, x);
            let start = a_eps.max(1.0);
            let xr = solve_tail(tail, start, start + 8.0, tail_tol);
            let mut verts: Vec<[f64; 2]> = vec![[xr, 0.0], [xr, *eps]];
            if a_eps > 0.0 {
                verts.push([a_eps, *eps]);
                // Sample the concave arc from a_eps down toward the corner;
                // the inscribed polyline keeps the region convex.
                let kinks = f.kinks();
                let samples = 24usize;
                let mut arc: Vec<f64> = (1..samples)
                    .map(|i| a_eps * (samples - i) as f64 / samples as f64)
                    .collect();
                arc.extend(kinks.iter().filter(|&&x| x > 0.0 && x < a_eps));
                arc.sort_by(|a, b| b.partial_cmp(a).unwrap());
                arc.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * a_eps);
                for x in arc {
                    verts.push([x, f.eval(x)]);
                }
            }
            verts.push([0.0, 0.0]);
            // Remove collinear run-ons (e.g. linear profiles sample to a line).
            let poly = ConvexPolygon::hull_of(&verts)?;
            Ok(Truncated {
                polygon: poly,
                radius: Some(xr + w.x0),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::measure::{gaussian_measure, measure_polygon};
    use crate::geometry::Profile;

    #[test]
    fn plane_truncation_radius_and_mass() {
        let w = WeightSpec::default();
        let t = truncate(&w, &Domain::Plane, 1e-12).unwrap();
        let r = t.radius.unwrap();
        assert!((7.0..8.5).contains(&r), "r = {r}");
        let m = measure_polygon(&w, &t.polygon, 1e-13);
        assert!(TWO_PI - m < 1e-12, "discarded {}", TWO_PI - m);
    }

    #[test]
    fn strip_truncates_to_rectangle() {
        let w = WeightSpec::default();
        let d = Domain::strip(0.0, 1.0).unwrap();
        let t = truncate(&w, &d, 1e-10).unwrap();
        assert_eq!(t.polygon.len(), 4);
        let exact = gaussian_measure(&w, &d, 1e-13).unwrap();
        let m = measure_polygon(&w, &t.polygon, 1e-13);
        assert!(exact - m >= 0.0);
        assert!(exact - m < 1e-10, "discarded {}", exact - m);
        // 1D tail oracle: mass beyond R on both sides.
        let r = t.radius.unwrap();
        let y_mass = gauss_segment(0.0, 0.0, 1.0);
        let tail = 2.0 * y_mass * gauss_tail_right(0.0, r);
        assert!(tail <= 1e-10);
    }

    #[test]
    fn bounded_polygon_passes_through() {
        let w = WeightSpec::default();
        let d = Domain::polygon(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
        let t = truncate(&w, &d, 1e-10).unwrap();
        assert!(t.radius.is_none());
        assert_eq!(t.polygon.len(), 3);
    }

    #[test]
    fn profile_truncation_is_convex_and_tight() {
        let w = WeightSpec::default();
        for f in [Profile::linear(1.0).unwrap(), Profile::tanh(1.0).unwrap()] {
            let d = Domain::profile(f, 0.3).unwrap();
            let t = truncate(&w, &d, 1e-9).unwrap();
            assert!(t.polygon.len() >= 4);
            let m = measure_polygon(&w, &t.polygon, 1e-12);
            assert!(m > 0.0);
        }
    }
}
