//! Tagged domain descriptions: strips, semi-strips, convex polygons, channel
//! profile domains, and the whole plane.

use serde::{Deserialize, Serialize};

use super::polygon::ConvexPolygon;
use super::profile::Profile;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
#[serde(try_from = "DomainRaw")]
pub enum Domain {
    /// { (x, y) : y1 < y < y2 }
    Strip { y1: f64, y2: f64 },
    /// { (x, y) : x > x_left, y1 < y < y2 }
    #[serde(rename = "semistrip")]
    SemiStrip { x: f64, y1: f64, y2: f64 },
    Polygon { vertices: ConvexPolygon },
    /// { (x, y) : 0 < x, 0 < y < min(eps, f(x)) }
    Profile { f: Profile, eps: f64 },
    Plane,
}

/// Unvalidated mirror used for deserialization.
#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum DomainRaw {
    Strip {
        y1: f64,
        y2: f64,
    },
    #[serde(rename = "semistrip")]
    SemiStrip {
        x: f64,
        y1: f64,
        y2: f64,
    },
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
    Profile {
        f: Profile,
        eps: f64,
    },
    Plane,
}

impl TryFrom<DomainRaw> for Domain {
    type Error = Error;
    fn try_from(raw: DomainRaw) -> Result<Self> {
        match raw {
            DomainRaw::Strip { y1, y2 } => Domain::strip(y1, y2),
            DomainRaw::SemiStrip { x, y1, y2 } => Domain::semi_strip(x, y1, y2),
            DomainRaw::Polygon { vertices } => {
                Ok(Domain::Polygon {
                    vertices: ConvexPolygon::new(vertices)?,
                })
            }
            DomainRaw::Profile { f, eps } => Domain::profile(f, eps),
            DomainRaw::Plane => Ok(Domain::Plane),
        }
    }
}

impl Domain {
    pub fn strip(y1: f64, y2: f64) -> Result<Self> {
        if !(y1 < y2) {
            return Err(Error::parameter(format!("strip needs y1 < y2, got ({y1}, {y2})")));
        }
        Ok(Domain::Strip { y1, y2 })
    }

    pub fn semi_strip(x: f64, y1: f64, y2: f64) -> Result<Self> {
        if !(y1 < y2) {
            return Err(Error::parameter(format!(
                "semi-strip needs y1 < y2, got ({y1}, {y2})"
            )));
        }
        if !x.is_finite() {
            return Err(Error::parameter("semi-strip needs a finite left endpoint"));
        }
        Ok(Domain::SemiStrip { x, y1, y2 })
    }

    pub fn polygon(vertices: Vec<[f64; 2]>) -> Result<Self> {
        Ok(Domain::Polygon {
            vertices: ConvexPolygon::new(vertices)?,
        })
    }

    pub fn profile(f: Profile, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < f.sup()) {
            return Err(Error::parameter(format!(
                "profile thickness must satisfy 0 < eps < sup f, got eps = {eps}"
            )));
        }
        Ok(Domain::Profile { f, eps })
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, Domain::Polygon { .. })
    }

    /// Diameter of the domain; +inf for the unbounded kinds.
    pub fn diameter(&self) -> f64 {
        match self {
            Domain::Polygon { vertices } => vertices.diameter(),
            _ => f64::INFINITY,
        }
    }

    /// Short human-readable tag for reports.
    pub fn tag(&self) -> String {
        match self {
            Domain::Strip { y1, y2 } => format!("strip({y1},{y2})"),
            Domain::SemiStrip { x, y1, y2 } => format!("semistrip({x};{y1},{y2})"),
            Domain::Polygon { vertices } => format!("polygon[{}]", vertices.len()),
            Domain::Profile { f, eps } => {
                let form = match f.form() {
                    super::profile::ProfileForm::Linear { slope } => format!("linear:{slope}"),
                    super::profile::ProfileForm::Tanh { scale } => format!("tanh:{scale}"),
                    super::profile::ProfileForm::Pwl { knots } => format!("pwl:{}", knots.len()),
                };
                format!("profile({form};eps={eps})")
            }
            Domain::Plane => "plane".into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diameter_dispatch() {
        let square = Domain::polygon(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert!((square.diameter() - 2.0f64.sqrt()).abs() < 1e-15);
        assert_eq!(Domain::strip(0.0, 1.0).unwrap().diameter(), f64::INFINITY);
        assert_eq!(Domain::Plane.diameter(), f64::INFINITY);
    }

    #[test]
    fn json_schema_round_trip() {
        let cases = [
            r#"{"kind":"polygon","vertices":[[0.0,0.0],[1.0,0.0],[0.0,1.0]]}"#,
            r#"{"kind":"strip","y1":0.0,"y2":1.0}"#,
            r#"{"kind":"semistrip","x":0.5,"y1":0.0,"y2":1.0}"#,
            r#"{"kind":"profile","f":{"form":"linear","slope":1.0},"eps":0.1}"#,
            r#"{"kind":"plane"}"#,
        ];
        for c in cases {
            let d: Domain = serde_json::from_str(c).unwrap();
            let s = serde_json::to_string(&d).unwrap();
            let d2: Domain = serde_json::from_str(&s).unwrap();
            assert_eq!(d, d2, "case {c}");
        }
    }

    #[test]
    fn validation_errors() {
        assert!(Domain::strip(1.0, 0.0).is_err());
        assert!(serde_json::from_str::<Domain>(
            r#"{"kind":"polygon","vertices":[[0,0],[0,1],[1,0]]}"#
        )
        .is_err());
        // eps >= sup f rejected.
        let f = Profile::tanh(1.0).unwrap();
        assert!(Domain::profile(f, 1.5).is_err());
    }
}
