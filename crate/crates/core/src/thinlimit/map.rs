//! The thin-domain layer map: inlet width a_eps, the piecewise-linear
//! stretching g_eps, the diffeomorphism L_eps onto the channel domain, and
//! its Jacobian.

use crate::error::{Error, Result};
use crate::geometry::Profile;

/// Smallest root of f(x) = eps, found by monotone bisection to 1e-14
/// relative accuracy.
pub fn compute_a_eps(p: &Profile, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::parameter(format!("eps must be positive, got {eps}")));
    }
    if !(eps < p.sup()) {
        return Err(Error::parameter(format!(
            "eps must be below sup f = {}, got {eps}",
            p.sup()
        )));
    }
    let mut lo = 0.0f64;
    let mut hi = eps / p.fprime0(); // tangent bound: f(x) <= f'(0) x
    while p.eval(hi) < eps {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::parameter("profile never reaches eps"));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if p.eval(mid) >= eps {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    Ok(hi)
}

/// Parameterization of the channel domain over the reference strip
/// (-1, inf) x (0, 1). `Flat` is the collarless inlet (full height at x = 0):
/// there a_eps = 0, g(s) = s, and the reference strip shrinks to s >= 0.
#[derive(Debug, Clone)]
pub enum Inlet {
    Corner(Profile),
    Flat,
}

#[derive(Debug, Clone)]
pub struct ThinMap {
    pub inlet: Inlet,
    pub eps: f64,
    pub a_eps: f64,
}

impl ThinMap {
    pub fn new(profile: Profile, eps: f64) -> Result<Self> {
        let a_eps = compute_a_eps(&profile, eps)?;
        Ok(ThinMap {
            inlet: Inlet::Corner(profile),
            eps,
            a_eps,
        })
    }

    /// Collarless channel (0, inf) x (0, eps); the easy case with a_eps = 0.
    pub fn flat(eps: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::parameter("eps must be positive"));
        }
        Ok(ThinMap {
            inlet: Inlet::Flat,
            eps,
            a_eps: 0.0,
        })
    }

    /// Left end of the reference strip (-1 for a corner inlet, 0 for flat).
    pub fn s_min(&self) -> f64 {
        match self.inlet {
            Inlet::Corner(_) => -1.0,
            Inlet::Flat => 0.0,
        }
    }

    /// f_eps(x) = min(eps, f(x)).
    pub fn f_eps(&self, x: f64) -> f64 {
        match &self.inlet {
            Inlet::Corner(p) => p.eval(x).min(self.eps),
            Inlet::Flat => self.eps,
        }
    }

    /// Derivative of f_eps from the right (0 on the channel part).
    pub fn f_eps_prime(&self, x: f64) -> f64 {
        match &self.inlet {
            Inlet::Corner(p) => {
                if x < self.a_eps {
                    p.derivative(x)
                } else {
                    0.0
                }
            }
            Inlet::Flat => 0.0,
        }
    }

    pub fn g(&self, s: f64) -> f64 {
        if s < 0.0 {
            self.a_eps * s + self.a_eps
        } else {
            s + self.a_eps
        }
    }

    pub fn g_prime(&self, s: f64) -> f64 {
        if s < 0.0 {
            self.a_eps
        } else {
            1.0
        }
    }

    /// L_eps(s, t) = (g(s), f_eps(g(s)) t) for (s, t) in the closed
    /// reference strip.
    pub fn apply(&self, s: f64, t: f64) -> Result<[f64; 2]> {
        if !(s >= self.s_min() && (0.0..=1.0).contains(&t)) {
            return Err(Error::domain(format!(
                "(s, t) = ({s}, {t}) outside the reference strip"
            )));
        }
        let x = self.g(s);
        Ok([x, self.f_eps(x) * t])
    }

    /// Jacobian g'(s) f_eps(g(s)); t-independent, equal to eps on s > 0,
    /// singular as s -> -1. At the s = 0 kink the right-sided value is used.
    pub fn jacobian(&self, s: f64) -> f64 {
        self.g_prime(s) * self.f_eps(self.g(s))
    }
}
