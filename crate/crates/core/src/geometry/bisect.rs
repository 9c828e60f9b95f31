//! Equal-Gaussian-area bisection by a straight line, and the search for a
//! direction whose equal-area cut also annihilates the integral of a given
//! field (the splitting-lemma mechanism).

use super::domain::Domain;
use super::measure::{gaussian_measure, integrate_over_polygon, measure_polygon};
use super::polygon::ConvexPolygon;
use super::truncate::truncate;
use crate::error::{Error, Result};
use crate::weights::WeightSpec;

/// A scalar field sampled pointwise on a domain.
pub trait ScalarField {
    fn eval(&self, x: f64, y: f64) -> f64;
}

impl<F: Fn(f64, f64) -> f64> ScalarField for F {
    fn eval(&self, x: f64, y: f64) -> f64 {
        self(x, y)
    }
}

/// The line {p . (cos a, sin a) = offset} splitting `poly` into halves of
/// equal Gaussian measure. The "primed" half is { p . n <= offset }, whose
/// outward co-normal along the cut is +n; this makes I(a) = -I(a + pi) hold
/// by construction for mean-zero fields.
pub fn bisect_polygon(
    w: &WeightSpec,
    poly: &ConvexPolygon,
    angle: f64,
    tol: f64,
    total: f64,
) -> Result<f64> {
    let n = [angle.cos(), angle.sin()];
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in poly.vertices() {
        let c = v[0] * n[0] + v[1] * n[1];
        lo = lo.min(c);
        hi = hi.max(c);
    }
    let qtol = (tol * total * 0.05).max(1e-15);
    let half = 0.5 * total;
    let measure_below = |c: f64| -> f64 {
        match poly.clip_halfplane(n, c) {
            Some(p) => measure_polygon(w, &p, qtol),
            None => {
                // Empty clip: all mass on one side.
                let mid = 0.5 * (lo + hi);
                if c < mid {
                    0.0
                } else {
                    total
                }
            }
        }
    };
    // Illinois secant iteration on g(c) = measure_below(c) - total/2,
    // monotone increasing in c.
    let mut a = lo;
    let mut b = hi;
    let mut fa = -half;
    let mut fb = half;
    let mut c = 0.5 * (a + b);
    for _ in 0..200 {
        let fc = measure_below(c) - half;
        if fc.abs() <= tol * total {
            return Ok(c);
        }
        if fc < 0.0 {
            a = c;
            fa = fc;
            fb *= 0.5;
        } else {
            b = c;
            fb = fc;
            fa *= 0.5;
        }
        let secant = b - fb * (b - a) / (fb - fa);
        c = if secant.is_finite() && secant > a && secant < b {
            secant
        } else {
            0.5 * (a + b)
        };
    }
    Err(Error::SolverNoConvergence {
        detail: "equal-area offset search stalled".into(),
        iterations: 200,
        residual: (measure_below(c) - half).abs() / total,
    })
}

/// Equal-area line offset for a general domain (unbounded domains are
/// truncated with a tail far below the splitting tolerance).
pub fn bisect_equal_area(w: &WeightSpec, d: &Domain, angle: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::parameter("tolerance must be positive"));
    }
    let rough = gaussian_measure(w, d, 1e-9)?;
    if rough < 1e-12 {
        return Err(Error::Degenerate(format!(
            "domain has vanishing Gaussian measure ({rough:.3e})"
        )));
    }
    let trunc = truncate(w, d, (0.02 * tol * rough).min(1e-12))?;
    let total = measure_polygon(w, &trunc.polygon, (0.01 * tol * rough).max(1e-15));
    bisect_polygon(w, &trunc.polygon, angle, tol, total)
}

/// Sign-change certificate for the zero-mean direction search.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Bracket {
    pub alpha_lo: f64,
    pub i_lo: f64,
    pub alpha_hi: f64,
    pub i_hi: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ZeroMeanDirection {
    pub angle: f64,
    pub offset: f64,
    /// I(angle): integral of the field over the primed half.
    pub half_integral: f64,
    /// L1 norm of the field used to normalize the stopping test.
    pub l1_norm: f64,
    pub degenerate: bool,
    pub bracket: Option<Bracket>,
}

/// Generic alpha-search: `half_integral(alpha)` must return (I(alpha),
/// offset(alpha)) with I continuous and I(alpha + pi) = -I(alpha).
pub(crate) fn zero_mean_search(
    mut half_integral: impl FnMut(f64) -> Result<(f64, f64)>,
    stop: f64,
) -> Result<(f64, f64, f64, Bracket)> {
    let n_grid = 48usize;
    let step = std::f64::consts::PI / n_grid as f64;
    let mut alphas = Vec::with_capacity(n_grid + 1);
    let mut vals = Vec::with_capacity(n_grid + 1);
    let mut offs = Vec::with_capacity(n_grid + 1);
    for j in 0..n_grid {
        let a = (j as f64 + 0.5) * step;
        let (i, c) = half_integral(a)?;
        alphas.push(a);
        vals.push(i);
        offs.push(c);
    }
    // Wrap pair: I(alpha_0 + pi) = -I(alpha_0).
    alphas.push(alphas[0] + std::f64::consts::PI);
    vals.push(-vals[0]);
    offs.push(f64::NAN);

    let mut found = None;
    for j in 0..n_grid {
        if vals[j] == 0.0 || vals[j].signum() != vals[j + 1].signum() {
            found = Some(j);
            break;
        }
    }
    let j = found.ok_or_else(|| {
        Error::domain(
            "no sign change of the half-domain integral; the field must have zero weighted mean",
        )
    })?;
    let bracket = Bracket {
        alpha_lo: alphas[j],
        i_lo: vals[j],
        alpha_hi: alphas[j + 1],
        i_hi: vals[j + 1],
    };
    let (mut a, mut fa) = (alphas[j], vals[j]);
    let (mut b, mut fb) = (alphas[j + 1], vals[j + 1]);
    let (mut best_alpha, mut best_i, mut best_off) = (a, fa, offs[j]);
    for _ in 0..100 {
        if best_i.abs() <= stop {
            break;
        }
        let t = if fb != fa { fa / (fa - fb) } else { 0.5 };
        let mid = a + (b - a) * t.clamp(0.05, 0.95);
        let (fm, cm) = half_integral(mid)?;
        if fm.abs() < best_i.abs() {
            best_alpha = mid;
            best_i = fm;
            best_off = cm;
        }
        if fm == 0.0 {
            break;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    Ok((best_alpha, best_i, best_off, bracket))
}

/// Finds an angle whose equal-area cut gives a vanishing half-domain integral
/// of `u` (|I| <= tol * ||u||_L1). Requires the weighted mean of `u` to be
/// zero, which is what makes the sign flip I(a) = -I(a + pi) hold.
pub fn find_zero_mean_direction(
    w: &WeightSpec,
    d: &Domain,
    u: &dyn ScalarField,
    tol: f64,
) -> Result<ZeroMeanDirection> {
    if !(tol > 0.0) {
        return Err(Error::parameter("tolerance must be positive"));
    }
    let rough = gaussian_measure(w, d, 1e-9)?;
    if rough < 1e-12 {
        return Err(Error::Degenerate("zero-measure domain".into()));
    }
    let trunc = truncate(w, d, (0.01 * rough * tol).min(1e-12))?;
    let poly = &trunc.polygon;
    let total = measure_polygon(w, poly, 1e-13);

    let l1 = integrate_over_polygon(w, poly, &|x, y| u.eval(x, y).abs(), 1e-4 * total);
    if l1 <= 1e-13 * total {
        return Ok(ZeroMeanDirection {
            angle: 0.0,
            offset: bisect_polygon(w, poly, 0.0, tol.max(1e-10), total)?,
            half_integral: 0.0,
            l1_norm: l1,
            degenerate: true,
            bracket: None,
        });
    }
    let mean = integrate_over_polygon(w, poly, &|x, y| u.eval(x, y), 1e-5 * l1);
    if mean.abs() > 1e-3 * l1 {
        return Err(Error::domain(format!(
            "field has nonzero weighted mean ({:.3e} relative); recentre it first",
            mean.abs() / l1
        )));
    }

    let itol = (0.02 * tol * l1).max(1e-15);
    let area_tol = (0.01 * tol).max(1e-12);
    let mut half_integral = |alpha: f64| -> Result<(f64, f64)> {
        let c = bisect_polygon(w, poly, alpha, area_tol, total)?;
        let n = [alpha.cos(), alpha.sin()];
        let val = match poly.clip_halfplane(n, c) {
            Some(h) => integrate_over_polygon(w, &h, &|x, y| u.eval(x, y), itol),
            None => 0.0,
        };
        Ok((val, c))
    };
    let (angle, half_int, offset, bracket) = zero_mean_search(&mut half_integral, tol * l1)?;
    Ok(ZeroMeanDirection {
        angle,
        offset,
        half_integral: half_int,
        l1_norm: l1,
        degenerate: false,
        bracket: Some(bracket),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strip_horizontal_cut_is_symmetric() {
        let w = WeightSpec::default();
        let d = Domain::strip(-1.0, 1.0).unwrap();
        let c = bisect_equal_area(&w, &d, std::f64::consts::FRAC_PI_2, 1e-10).unwrap();
        assert!(c.abs() < 1e-9, "offset = {c}");
    }

    #[test]
    fn square_vertical_cut_is_symmetric() {
        let w = WeightSpec::default();
        let d = Domain::polygon(vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]).unwrap();
        let c = bisect_equal_area(&w, &d, 0.0, 1e-10).unwrap();
        assert!(c.abs() < 1e-9, "offset = {c}");
    }

    #[test]
    fn triangle_cut_halves_agree_with_quadrature_oracle() {
        let w = WeightSpec::default();
        let tri = ConvexPolygon::new(vec![[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]]).unwrap();
        let d = Domain::Polygon {
            vertices: tri.clone(),
        };
        let c = bisect_equal_area(&w, &d, 0.0, 1e-9).unwrap();
        let total = measure_polygon(&w, &tri, 1e-13);

        // Oracle: composite Simpson in x of the sliced integrand, plus an
        // independent bisection on that oracle.
        let oracle_left = |cut: f64| -> f64 {
            let n = 2000;
            let h = cut / n as f64;
            let integrand = |x: f64| {
                let ytop = 2.0 - x;
                (-0.5 * x * x).exp()
                    * crate::geometry::measure::gauss_segment(0.0, 0.0, ytop)
            };
            let mut s = integrand(0.0) + integrand(cut);
            for i in 1..n {
                s += integrand(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            s * h / 3.0
        };
        let (mut lo, mut hi) = (0.0, 2.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if oracle_left(mid) < 0.5 * total {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let c_oracle = 0.5 * (lo + hi);
        assert!((c - c_oracle).abs() < 1e-6, "c = {c}, oracle = {c_oracle}");

        // Recompute both halves and check the split.
        let left = tri.clip_halfplane([1.0, 0.0], c).unwrap();
        let right = tri.clip_halfplane([-1.0, 0.0], -c).unwrap();
        let ml = measure_polygon(&w, &left, 1e-13);
        let mr = measure_polygon(&w, &right, 1e-13);
        assert!((ml - 0.5 * total).abs() <= 2e-9 * total);
        assert!((ml + mr - total).abs() <= 1e-10 * total);
    }

    #[test]
    fn zero_field_flags_degenerate() {
        let w = WeightSpec::default();
        let d = Domain::polygon(vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]).unwrap();
        let r = find_zero_mean_direction(&w, &d, &|_x: f64, _y: f64| 0.0, 1e-8).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.angle, 0.0);
    }

    #[test]
    fn odd_field_on_square_selects_horizontal_cut() {
        // u = x has zero mean; the half-integral vanishes for the horizontal
        // line (normal along y), where oddness in x kills the integral.
        let w = WeightSpec::default();
        let d = Domain::polygon(vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]).unwrap();
        let r = find_zero_mean_direction(&w, &d, &|x: f64, _y: f64| x, 1e-7).unwrap();
        assert!(!r.degenerate);
        assert!(r.half_integral.abs() <= 1e-7 * r.l1_norm);
        assert!(
            (r.angle.sin().abs() - 1.0).abs() < 0.05,
            "expected a horizontal cut line, got angle {}",
            r.angle
        );
        let b = r.bracket.unwrap();
        assert!(b.i_lo.signum() != b.i_hi.signum());
    }

    #[test]
    fn nonzero_mean_field_is_rejected() {
        let w = WeightSpec::default();
        let d = Domain::polygon(vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]).unwrap();
        assert!(find_zero_mean_direction(&w, &d, &|_x: f64, _y: f64| 1.0, 1e-8).is_err());
    }
}
