//! Channel profiles: concave, non-decreasing f with f(0) = 0 and finite
//! initial slope, given in closed form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "lowercase")]
pub enum ProfileForm {
    /// f(x) = slope * x
    Linear { slope: f64 },
    /// f(x) = scale * tanh(x / scale); initial slope 1, sup = scale.
    Tanh { scale: f64 },
    /// Concave piecewise-linear interpolant of `knots`, extended with the
    /// last slope beyond the final knot. First knot must be (0, 0).
    Pwl { knots: Vec<[f64; 2]> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProfileForm", into = "ProfileForm")]
pub struct Profile {
    form: ProfileForm,
    fprime0: f64,
}

impl TryFrom<ProfileForm> for Profile {
    type Error = Error;
    fn try_from(form: ProfileForm) -> Result<Self> {
        Profile::new(form)
    }
}

impl From<Profile> for ProfileForm {
    fn from(p: Profile) -> ProfileForm {
        p.form
    }
}

impl Profile {
    pub fn new(form: ProfileForm) -> Result<Self> {
        let fprime0 = match &form {
            ProfileForm::Linear { slope } => {
                if !(slope.is_finite() && *slope > 0.0) {
                    return Err(Error::parameter(format!(
                        "linear profile needs a positive finite slope, got {slope}"
                    )));
                }
                *slope
            }
            ProfileForm::Tanh { scale } => {
                if !(scale.is_finite() && *scale > 0.0) {
                    return Err(Error::parameter(format!(
                        "tanh profile needs a positive finite scale, got {scale}"
                    )));
                }
                1.0
            }
            ProfileForm::Pwl { knots } => {
                if knots.len() < 2 {
                    return Err(Error::parameter("pwl profile needs at least 2 knots"));
                }
                if knots[0] != [0.0, 0.0] {
                    return Err(Error::parameter("pwl profile must start at (0, 0)"));
                }
                let mut prev_slope = f64::INFINITY;
                for w in knots.windows(2) {
                    let dx = w[1][0] - w[0][0];
                    let dy = w[1][1] - w[0][1];
                    if !(dx > 0.0) {
                        return Err(Error::parameter("pwl knots must have increasing x"));
                    }
                    if dy < 0.0 {
                        return Err(Error::parameter("pwl profile must be non-decreasing"));
                    }
                    let slope = dy / dx;
                    if slope > prev_slope + 1e-12 {
                        return Err(Error::parameter("pwl profile must be concave"));
                    }
                    prev_slope = prev_slope.min(slope);
                }
                let first = (knots[1][1] - knots[0][1]) / (knots[1][0] - knots[0][0]);
                if !(first > 0.0) {
                    return Err(Error::parameter("pwl profile is trivial (zero first slope)"));
                }
                first
            }
        };
        let p = Profile { form, fprime0 };
        p.check_sampled_invariants()?;
        Ok(p)
    }

    pub fn linear(slope: f64) -> Result<Self> {
        Profile::new(ProfileForm::Linear { slope })
    }

    pub fn tanh(scale: f64) -> Result<Self> {
        Profile::new(ProfileForm::Tanh { scale })
    }

    pub fn piecewise_linear(knots: Vec<[f64; 2]>) -> Result<Self> {
        Profile::new(ProfileForm::Pwl { knots })
    }

    pub fn form(&self) -> &ProfileForm {
        &self.form
    }

    /// f(x) for x >= 0.
    pub fn eval(&self, x: f64) -> f64 {
        debug_assert!(x >= 0.0);
        match &self.form {
            ProfileForm::Linear { slope } => slope * x,
            ProfileForm::Tanh { scale } => scale * (x / scale).tanh(),
            ProfileForm::Pwl { knots } => {
                let last = knots.len() - 1;
                if x >= knots[last][0] {
                    let slope = (knots[last][1] - knots[last - 1][1])
                        / (knots[last][0] - knots[last - 1][0]);
                    return knots[last][1] + slope * (x - knots[last][0]);
                }
                let k = knots.partition_point(|kn| kn[0] <= x).max(1);
                let (a, b) = (knots[k - 1], knots[k]);
                a[1] + (b[1] - a[1]) * (x - a[0]) / (b[0] - a[0])
            }
        }
    }

    pub fn fprime0(&self) -> f64 {
        self.fprime0
    }

    /// One-sided derivative f'(x+), defined everywhere for these forms.
    pub fn derivative(&self, x: f64) -> f64 {
        match &self.form {
            ProfileForm::Linear { slope } => *slope,
            ProfileForm::Tanh { scale } => {
                let c = (x / scale).cosh();
                1.0 / (c * c)
            }
            ProfileForm::Pwl { knots } => {
                let last = knots.len() - 1;
                let k = if x >= knots[last][0] {
                    last
                } else {
                    knots.partition_point(|kn| kn[0] <= x).max(1)
                };
                (knots[k][1] - knots[k - 1][1]) / (knots[k][0] - knots[k - 1][0])
            }
        }
    }

    /// sup f over [0, inf); may be infinite.
    pub fn sup(&self) -> f64 {
        match &self.form {
            ProfileForm::Linear { .. } => f64::INFINITY,
            ProfileForm::Tanh { scale } => *scale,
            ProfileForm::Pwl { knots } => {
                let last = knots.len() - 1;
                let slope =
                    (knots[last][1] - knots[last - 1][1]) / (knots[last][0] - knots[last - 1][0]);
                if slope > 0.0 {
                    f64::INFINITY
                } else {
                    knots[last][1]
                }
            }
        }
    }

    /// Interior kink locations (x > 0), needed for mesh alignment.
    pub fn kinks(&self) -> Vec<f64> {
        match &self.form {
            ProfileForm::Pwl { knots } => knots[1..knots.len() - 1].iter().map(|k| k[0]).collect(),
            _ => Vec::new(),
        }
    }

    fn check_sampled_invariants(&self) -> Result<()> {
        // f(0) = 0, monotone, concave second differences, f(s) <= f'(0) s.
        if self.eval(0.0).abs() > 1e-14 {
            return Err(Error::parameter("profile must vanish at 0"));
        }
        let n = 200;
        let xmax = 4.0_f64.max(match &self.form {
            ProfileForm::Pwl { knots } => 2.0 * knots.last().unwrap()[0],
            _ => 4.0,
        });
        let h = xmax / n as f64;
        let mut prev = 0.0;
        let mut prev_diff = f64::INFINITY;
        for i in 1..=n {
            let x = i as f64 * h;
            let v = self.eval(x);
            if v < prev - 1e-12 {
                return Err(Error::parameter("profile must be non-decreasing"));
            }
            let diff = v - prev;
            if diff > prev_diff + 1e-10 * (1.0 + v.abs()) {
                return Err(Error::parameter("profile must be concave"));
            }
            if v > self.fprime0 * x * (1.0 + 1e-12) + 1e-14 {
                return Err(Error::parameter("profile exceeds its tangent at 0"));
            }
            prev_diff = diff;
            prev = v;
        }
        if prev <= 0.0 {
            return Err(Error::parameter("profile is trivial"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_and_tanh_forms() {
        let p = Profile::linear(2.0).unwrap();
        assert_eq!(p.eval(0.3), 0.6);
        assert_eq!(p.fprime0(), 2.0);
        assert_eq!(p.sup(), f64::INFINITY);

        let t = Profile::tanh(1.0).unwrap();
        assert!((t.eval(0.5) - 0.5f64.tanh()).abs() < 1e-15);
        assert_eq!(t.fprime0(), 1.0);
        assert_eq!(t.sup(), 1.0);
    }

    #[test]
    fn pwl_validation() {
        let ok = Profile::piecewise_linear(vec![[0.0, 0.0], [1.0, 1.0], [2.0, 1.5]]).unwrap();
        assert!((ok.eval(1.5) - 1.25).abs() < 1e-15);
        assert_eq!(ok.fprime0(), 1.0);
        // Convex (slope increasing) must be rejected.
        assert!(Profile::piecewise_linear(vec![[0.0, 0.0], [1.0, 0.5], [2.0, 2.0]]).is_err());
        // Decreasing rejected.
        assert!(Profile::piecewise_linear(vec![[0.0, 0.0], [1.0, 1.0], [2.0, 0.5]]).is_err());
        // Must start at origin.
        assert!(Profile::piecewise_linear(vec![[0.0, 0.5], [1.0, 1.0]]).is_err());
    }

    #[test]
    fn tangent_bound_holds() {
        for p in [
            Profile::linear(0.7).unwrap(),
            Profile::tanh(2.0).unwrap(),
            Profile::piecewise_linear(vec![[0.0, 0.0], [0.5, 0.4], [1.5, 0.9]]).unwrap(),
        ] {
            for i in 1..100 {
                let x = i as f64 * 0.05;
                assert!(p.eval(x) <= p.fprime0() * x * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn profile_json_round_trip() {
        let p = Profile::tanh(1.5).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"form":"tanh","scale":1.5}"#);
        let back: Profile = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
