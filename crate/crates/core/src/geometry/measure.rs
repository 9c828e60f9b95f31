//! Gaussian measure of domains and weighted integrals of scalar fields over
//! convex polygons.

use super::domain::Domain;
use super::polygon::ConvexPolygon;
use super::truncate::truncate;
use crate::error::{Error, Result};
use crate::quad::{integrate_adaptive, triangle_rule_d6};
use crate::weights::WeightSpec;

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;
const SQRT_HALF_PI: f64 = 1.2533141373155003; // sqrt(pi/2)
const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Closed-form 1D slice: int_a^b exp(-(c+t)^2/2) dt.
pub fn gauss_segment(c: f64, a: f64, b: f64) -> f64 {
    SQRT_HALF_PI * (libm::erf((c + b) / SQRT_2) - libm::erf((c + a) / SQRT_2))
}

/// int_a^inf exp(-(c+t)^2/2) dt.
pub fn gauss_tail_right(c: f64, a: f64) -> f64 {
    SQRT_HALF_PI * libm::erfc((c + a) / SQRT_2)
}

/// Gaussian measure of `d` to absolute tolerance `tol`. Unbounded domains use
/// closed forms where separable and truncation (tail below tol/10) otherwise.
pub fn gaussian_measure(w: &WeightSpec, d: &Domain, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::parameter(format!("tolerance must be positive, got {tol}")));
    }
    match d {
        Domain::Plane => Ok(TWO_PI),
        Domain::Strip { y1, y2 } => {
            // x-part integrates to sqrt(2 pi) regardless of the offset.
            Ok((TWO_PI).sqrt() * gauss_segment(w.y0, *y1, *y2))
        }
        Domain::SemiStrip { x, y1, y2 } => {
            Ok(gauss_tail_right(w.x0, *x) * gauss_segment(w.y0, *y1, *y2))
        }
        Domain::Polygon { vertices } => Ok(measure_polygon(w, vertices, tol)),
        Domain::Profile { .. } => {
            let t = truncate(w, d, tol / 10.0)?;
            Ok(measure_polygon(w, &t.polygon, tol * 0.9))
        }
    }
}

/// Measure of a convex polygon by slicing in x: the y-section integrates in
/// closed form and the outer integral is adapted piecewise between vertex
/// abscissae.
pub fn measure_polygon(w: &WeightSpec, poly: &ConvexPolygon, tol: f64) -> f64 {
    let mut xs: Vec<f64> = poly.vertices().iter().map(|v| v[0]).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup_by(|a, b| (*a - *b).abs() < 1e-15 * (a.abs().max(1.0)));
    if xs.len() < 2 {
        return 0.0;
    }
    let pieces = xs.len() - 1;
    let mut total = 0.0;
    for k in 0..pieces {
        let (xa, xb) = (xs[k], xs[k + 1]);
        let mut f = |x: f64| match section(poly, x) {
            Some((ylo, yhi)) => w.gamma0(x) * gauss_segment(w.y0, ylo, yhi),
            None => 0.0,
        };
        total += integrate_adaptive(&mut f, xa, xb, tol / pieces as f64);
    }
    total
}

/// Vertical section [ylo, yhi] of a convex polygon at abscissa x.
fn section(poly: &ConvexPolygon, x: f64) -> Option<(f64, f64)> {
    let verts = poly.vertices();
    let n = verts.len();
    let mut ylo = f64::INFINITY;
    let mut yhi = f64::NEG_INFINITY;
    let mut hits = 0;
    for i in 0..n {
        let a = verts[i];
        let b = verts[(i + 1) % n];
        let (sa, sb) = (a[0] - x, b[0] - x);
        if sa == 0.0 && sb == 0.0 {
            // Vertical edge at x.
            ylo = ylo.min(a[1].min(b[1]));
            yhi = yhi.max(a[1].max(b[1]));
            hits += 2;
        } else if (sa <= 0.0 && sb > 0.0) || (sa >= 0.0 && sb < 0.0) {
            let t = sa / (sa - sb);
            let y = a[1] + t * (b[1] - a[1]);
            ylo = ylo.min(y);
            yhi = yhi.max(y);
            hits += 1;
        }
    }
    if hits >= 2 && yhi > ylo {
        Some((ylo, yhi))
    } else {
        None
    }
}

/// Weighted integral int_poly f(x, y) gamma dm over a convex polygon, by
/// adaptive refinement of a centroid fan with the degree-6 triangle rule.
pub fn integrate_over_polygon(
    w: &WeightSpec,
    poly: &ConvexPolygon,
    f: &dyn Fn(f64, f64) -> f64,
    tol: f64,
) -> f64 {
    let rule = triangle_rule_d6();
    let c = poly.centroid();
    let verts = poly.vertices();
    let n = verts.len();
    let mut g = |x: f64, y: f64| f(x, y) * w.gamma(x, y);

    struct Cell {
        tri: [[f64; 2]; 3],
        value: f64,
        err: f64,
    }
    let estimate = |rule: &crate::quad::TriangleRule,
                    g: &mut dyn FnMut(f64, f64) -> f64,
                    tri: &[[f64; 2]; 3]| {
        let coarse = rule.integrate(tri[0], tri[1], tri[2], g);
        // Midpoint 4-split as the refined reference.
        let m01 = mid(tri[0], tri[1]);
        let m12 = mid(tri[1], tri[2]);
        let m20 = mid(tri[2], tri[0]);
        let fine = rule.integrate(tri[0], m01, m20, g)
            + rule.integrate(m01, tri[1], m12, g)
            + rule.integrate(m20, m12, tri[2], g)
            + rule.integrate(m01, m12, m20, g);
        (fine, (fine - coarse).abs())
    };

    let mut cells: Vec<Cell> = Vec::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for i in 0..n {
        let tri = [c, verts[i], verts[(i + 1) % n]];
        let (v, e) = estimate(&rule, &mut g, &tri);
        total += v;
        total_err += e;
        cells.push(Cell { tri, value: v, err: e });
    }
    let max_cells = 20000;
    while total_err > tol && cells.len() < max_cells {
        let (idx, _) = cells
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.err.partial_cmp(&b.1.err).unwrap())
            .unwrap();
        let cell = cells.swap_remove(idx);
        total -= cell.value;
        total_err -= cell.err;
        let t = &cell.tri;
        let m01 = mid(t[0], t[1]);
        let m12 = mid(t[1], t[2]);
        let m20 = mid(t[2], t[0]);
        for tri in [
            [t[0], m01, m20],
            [m01, t[1], m12],
            [m20, m12, t[2]],
            [m01, m12, m20],
        ] {
            let (v, e) = estimate(&rule, &mut g, &tri);
            total += v;
            total_err += e;
            cells.push(Cell { tri, value: v, err: e });
        }
    }
    total
}

fn mid(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_measure_is_two_pi() {
        let w = WeightSpec::new(0.7, -0.3);
        let m = gaussian_measure(&w, &Domain::Plane, 1e-12).unwrap();
        assert!((m - TWO_PI).abs() < 1e-14);
    }

    #[test]
    fn half_plane_measure_is_pi() {
        // Half plane y > 0 as a wide strip.
        let w = WeightSpec::default();
        let d = Domain::strip(0.0, 60.0).unwrap();
        let m = gaussian_measure(&w, &d, 1e-12).unwrap();
        assert!((m - std::f64::consts::PI).abs() < 1e-12, "m = {m}");
    }

    #[test]
    fn unit_square_matches_1d_oracle() {
        // Independent oracle: (int_0^1 exp(-t^2/2) dt)^2 by composite Simpson.
        let n = 4000;
        let h = 1.0 / n as f64;
        let f = |t: f64| (-0.5 * t * t).exp();
        let mut s = f(0.0) + f(1.0);
        for i in 1..n {
            let x = i as f64 * h;
            s += f(x) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        let oracle = (s * h / 3.0).powi(2);

        let w = WeightSpec::default();
        let square = ConvexPolygon::rectangle(0.0, 1.0, 0.0, 1.0).unwrap();
        let m = measure_polygon(&w, &square, 1e-12);
        assert!((m - oracle).abs() < 1e-10, "m = {m}, oracle = {oracle}");
    }

    #[test]
    fn polygon_measure_additive_under_clipping() {
        let w = WeightSpec::new(0.2, 0.1);
        let tri = ConvexPolygon::new(vec![[-1.0, -1.0], [2.0, 0.0], [0.0, 1.5]]).unwrap();
        let total = measure_polygon(&w, &tri, 1e-12);
        let n = [0.3f64.cos(), 0.3f64.sin()];
        for c in [-0.4, 0.0, 0.5] {
            let a = tri
                .clip_halfplane(n, c)
                .map(|p| measure_polygon(&w, &p, 1e-12))
                .unwrap_or(0.0);
            let b = tri
                .clip_halfplane([-n[0], -n[1]], -c)
                .map(|p| measure_polygon(&w, &p, 1e-12))
                .unwrap_or(0.0);
            assert!((a + b - total).abs() < 1e-10);
        }
    }

    #[test]
    fn field_integral_over_polygon() {
        // int_{square} x^2 dm over (-1,1)^2 equals the separable product.
        let w = WeightSpec::default();
        let sq = ConvexPolygon::rectangle(-1.0, 1.0, -1.0, 1.0).unwrap();
        let got = integrate_over_polygon(&w, &sq, &|x, _| x * x, 1e-10);
        let mut fx = |x: f64| x * x * (-0.5 * x * x).exp();
        let ix = integrate_adaptive(&mut fx, -1.0, 1.0, 1e-13);
        let iy = gauss_segment(0.0, -1.0, 1.0);
        assert!((got - ix * iy).abs() < 1e-9, "got {got}, want {}", ix * iy);
    }

    #[test]
    fn rejects_bad_tolerance() {
        let w = WeightSpec::default();
        assert!(gaussian_measure(&w, &Domain::Plane, 0.0).is_err());
    }
}
