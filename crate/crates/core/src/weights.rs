//! Gaussian weight functions: the planar weight with offsets, its 1D traces,
//! and the eps-dependent comparison weights used by the thin-domain analysis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Profile;
use crate::thinlimit::ThinMap;

/// The planar Gaussian weight exp(-((x0+x)^2 + (y0+y)^2)/2).
///
/// The offsets shift the weight, not the domain; (0, 0) is the standard
/// Gaussian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    #[serde(default)]
    pub x0: f64,
    #[serde(default)]
    pub y0: f64,
}

impl Default for WeightSpec {
    fn default() -> Self {
        WeightSpec { x0: 0.0, y0: 0.0 }
    }
}

impl WeightSpec {
    pub fn new(x0: f64, y0: f64) -> Self {
        WeightSpec { x0, y0 }
    }

    /// gamma(x, y); strictly positive and <= 1 for zero offsets.
    #[inline]
    pub fn gamma(&self, x: f64, y: f64) -> f64 {
        let u = self.x0 + x;
        let v = self.y0 + y;
        (-0.5 * (u * u + v * v)).exp()
    }

    /// The 1D trace gamma_0(s) = gamma(s, 0), dropping the constant
    /// exp(-y0^2/2) factor which cancels in every Rayleigh quotient.
    #[inline]
    pub fn gamma0(&self, s: f64) -> f64 {
        let u = self.x0 + s;
        (-0.5 * u * u).exp()
    }

    /// Center of mass of the weight, i.e. the point maximizing gamma.
    pub fn center(&self) -> [f64; 2] {
        [-self.x0, -self.y0]
    }
}

/// The unshifted 1D weight gamma_1(x) = exp(-x^2/2).
#[inline]
pub fn gamma1(x: f64) -> f64 {
    (-0.5 * x * x).exp()
}

/// Checked evaluation of the planar weight.
pub fn eval_gamma(w: &WeightSpec, x: f64, y: f64) -> Result<f64> {
    if !(x.is_finite() && y.is_finite()) {
        return Err(Error::domain(format!("non-finite point ({x}, {y})")));
    }
    Ok(w.gamma(x, y))
}

/// Evaluates gamma composed with the thin-domain layer map at (s, t).
pub fn eval_gamma_eps(
    w: &WeightSpec,
    profile: &Profile,
    eps: f64,
    s: f64,
    t: f64,
) -> Result<f64> {
    let map = ThinMap::new(profile.clone(), eps)?;
    let [x, y] = map.apply(s, t)?;
    Ok(w.gamma(x, y))
}

/// The eps-dependent weight factors of the thin-domain estimates:
/// the envelopes gamma_-, gamma_+ and the refinement pair (rho_eps, c_eps).
#[derive(Debug, Clone)]
pub struct EpsWeights {
    pub eps: f64,
    pub a_eps: f64,
    x0_abs: f64,
    y0_abs: f64,
    spec: WeightSpec,
}

impl EpsWeights {
    pub fn new(w: &WeightSpec, profile: &Profile, eps: f64) -> Result<Self> {
        let map = ThinMap::new(profile.clone(), eps)?;
        Ok(Self::with_a_eps(w, eps, map.a_eps))
    }

    pub fn with_a_eps(w: &WeightSpec, eps: f64, a_eps: f64) -> Self {
        EpsWeights {
            eps,
            a_eps,
            x0_abs: w.x0.abs(),
            y0_abs: w.y0.abs(),
            spec: *w,
        }
    }

    /// Lower envelope gamma_-(s), valid on the channel part for eps <= 1.
    pub fn gamma_minus(&self, s: f64) -> f64 {
        let u = self.x0_abs + s + 1.0;
        let v = self.y0_abs + 1.0;
        (-0.5 * (u * u + v * v)).exp()
    }

    /// Upper envelope gamma_+(s).
    pub fn gamma_plus(&self, s: f64) -> f64 {
        let u = s - self.x0_abs;
        (-0.5 * (u * u - 2.0 * self.y0_abs)).exp()
    }

    /// rho_eps(s) <= 1, increasing to 1 pointwise as eps -> 0.
    pub fn rho(&self, s: f64) -> f64 {
        let head = self.a_eps * self.a_eps
            + 2.0 * self.x0_abs * self.a_eps
            + self.eps * self.eps
            + 2.0 * self.y0_abs * self.eps;
        (-0.5 * head).exp() * (-self.a_eps * s).exp()
    }

    /// c_eps >= 1, decreasing to 1 as eps -> 0.
    pub fn c_eps(&self) -> f64 {
        let head =
            2.0 * self.x0_abs * self.a_eps + self.eps * self.eps + 2.0 * self.y0_abs * self.eps;
        (0.5 * head).exp()
    }

    /// gamma_eps(s, t) on the channel: the weight at the mapped point
    /// (s + a_eps, eps * t).
    pub fn gamma_eps_channel(&self, s: f64, t: f64) -> f64 {
        self.spec.gamma(s + self.a_eps, self.eps * t)
    }

    pub fn gamma0(&self, s: f64) -> f64 {
        // Keep the exp(-y0^2/2) factor here: the comparison bounds
        // rho*gamma_0 <= gamma_eps <= c*rho*gamma_0 are stated for the full
        // planar weight restricted to the axis.
        self.spec.gamma(s, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Profile;

    #[test]
    fn gamma_closed_form_points() {
        let w = WeightSpec::default();
        assert_eq!(w.gamma(0.0, 0.0), 1.0);
        assert!((w.gamma(1.0, 0.0) - (-0.5f64).exp()).abs() < 1e-15);
        let shifted = WeightSpec::new(1.0, 0.0);
        assert!((shifted.gamma(1.0, 0.0) - (-2.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn gamma_symmetries_at_zero_offset() {
        let w = WeightSpec::default();
        for &(x, y) in &[(0.3, -1.2), (2.0, 0.7), (-0.4, -0.9)] {
            assert!((w.gamma(x, y) - w.gamma(y, x)).abs() < 1e-16);
            assert!((w.gamma(x, y) - w.gamma(-x, -y)).abs() < 1e-16);
            assert!(w.gamma(x, y) > 0.0 && w.gamma(x, y) <= 1.0);
        }
    }

    #[test]
    fn eval_gamma_rejects_non_finite() {
        let w = WeightSpec::default();
        assert!(eval_gamma(&w, f64::NAN, 0.0).is_err());
        assert!(eval_gamma(&w, 0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn gamma_eps_linear_profile_points() {
        let w = WeightSpec::default();
        let p = Profile::linear(1.0).unwrap();
        // L(0,0) = (a_eps, 0) with a_eps = 0.1.
        let v = eval_gamma_eps(&w, &p, 0.1, 0.0, 0.0).unwrap();
        assert!((v - (-0.005f64).exp()).abs() < 1e-14);
        // L(-1, t) = (0, 0).
        let v = eval_gamma_eps(&w, &p, 0.1, -1.0, 0.5).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
        // L(1, 1) = (1.1, 0.1): cross-check by composing the two factors.
        let v = eval_gamma_eps(&w, &p, 0.1, 1.0, 1.0).unwrap();
        let map = ThinMap::new(p, 0.1).unwrap();
        let [x, y] = map.apply(1.0, 1.0).unwrap();
        assert!((x - 1.1).abs() < 1e-14 && (y - 0.1).abs() < 1e-14);
        assert!((v - w.gamma(x, y)).abs() < 1e-16);
        assert!((v - (-0.5 * (1.1f64 * 1.1 + 0.01)).exp()).abs() < 1e-14);
    }

    #[test]
    fn gamma_eps_outside_reference_strip_is_error() {
        let w = WeightSpec::default();
        let p = Profile::linear(1.0).unwrap();
        assert!(eval_gamma_eps(&w, &p, 0.1, -1.5, 0.5).is_err());
        assert!(eval_gamma_eps(&w, &p, 0.1, 0.5, 1.5).is_err());
    }

    /// Golden-ratio low-discrepancy samples of (0,20)x(0,1).
    fn quasi_random(n: usize) -> impl Iterator<Item = (f64, f64)> {
        (0..n).map(|i| {
            let a = (i as f64 * 0.618033988749895).fract();
            let b = (i as f64 * 0.754877666246693).fract();
            (20.0 * a, b)
        })
    }

    #[test]
    fn two_sided_envelope_on_channel() {
        // The envelope bounds hold for nonnegative offsets (the upper one
        // needs x0 >= 0, y0 >= 0 pointwise).
        for w in [
            WeightSpec::default(),
            WeightSpec::new(0.7, 0.0),
            WeightSpec::new(1.3, 0.5),
        ] {
            let p = Profile::linear(1.0).unwrap();
            for eps in [1.0, 0.5, 0.1] {
                let ew = EpsWeights::new(&w, &p, eps).unwrap();
                for (s, t) in quasi_random(1000) {
                    let g = ew.gamma_eps_channel(s, t);
                    assert!(
                        ew.gamma_minus(s) <= g && g <= ew.gamma_plus(s),
                        "envelope violated at s={s}, t={t}, eps={eps}"
                    );
                }
            }
        }
    }

    #[test]
    fn refined_bounds_on_channel() {
        for w in [WeightSpec::default(), WeightSpec::new(0.9, 0.4)] {
            let p = Profile::linear(1.0).unwrap();
            for eps in [0.5, 0.2, 0.1] {
                let ew = EpsWeights::new(&w, &p, eps).unwrap();
                let c = ew.c_eps();
                assert!(c >= 1.0);
                for (s, t) in quasi_random(500) {
                    let g = ew.gamma_eps_channel(s, t);
                    let lower = ew.rho(s) * ew.gamma0(s);
                    assert!(ew.rho(s) <= 1.0 + 1e-15);
                    assert!(
                        g >= lower * (1.0 - 1e-13),
                        "lower refinement violated at s={s}, t={t}"
                    );
                    assert!(
                        g <= c * lower * (1.0 + 1e-13),
                        "upper refinement violated at s={s}, t={t}"
                    );
                }
            }
        }
    }

    #[test]
    fn rho_increases_to_one_as_eps_shrinks() {
        let w = WeightSpec::new(0.3, 0.2);
        let p = Profile::linear(1.0).unwrap();
        for &s in &[0.0, 0.5, 2.0, 10.0] {
            let mut prev = 0.0;
            for eps in [0.4, 0.2, 0.1, 0.05] {
                let ew = EpsWeights::new(&w, &p, eps).unwrap();
                let r = ew.rho(s);
                assert!(r > prev, "rho not increasing at s={s}, eps={eps}");
                assert!(r <= 1.0);
                prev = r;
            }
            assert!(prev > 0.9 * (-0.05 * s).exp());
        }
        // c_eps -> 1 monotonically as well.
        let mut prev_c = f64::INFINITY;
        for eps in [0.4, 0.2, 0.1, 0.05] {
            let c = EpsWeights::new(&w, &p, eps).unwrap().c_eps();
            assert!(c < prev_c && c >= 1.0);
            prev_c = c;
        }
    }
}
