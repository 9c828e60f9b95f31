//! Convex polygons with counterclockwise orientation: validation, diameter,
//! and halfplane clipping.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const CONVEXITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct ConvexPolygon {
    vertices: Vec<[f64; 2]>,
}

impl TryFrom<Vec<[f64; 2]>> for ConvexPolygon {
    type Error = Error;
    fn try_from(v: Vec<[f64; 2]>) -> Result<Self> {
        ConvexPolygon::new(v)
    }
}

impl From<ConvexPolygon> for Vec<[f64; 2]> {
    fn from(p: ConvexPolygon) -> Self {
        p.vertices
    }
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

impl ConvexPolygon {
    /// Validates vertex count, distinctness, and convex ccw orientation with
    /// cross products of normalized consecutive edges >= -1e-12.
    pub fn new(vertices: Vec<[f64; 2]>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::Degenerate(format!("{n} vertices, need >= 3")));
        }
        let scale = vertices
            .iter()
            .flat_map(|v| v.iter())
            .fold(0.0f64, |m, x| m.max(x.abs()))
            .max(1.0);
        for i in 0..n {
            for j in (i + 1)..n {
                let dx = vertices[i][0] - vertices[j][0];
                let dy = vertices[i][1] - vertices[j][1];
                if dx.hypot(dy) < 1e-12 * scale {
                    return Err(Error::Degenerate(format!("repeated vertices {i} and {j}")));
                }
            }
        }
        let mut any_positive = false;
        for i in 0..n {
            let o = vertices[i];
            let a = vertices[(i + 1) % n];
            let b = vertices[(i + 2) % n];
            let e1 = [a[0] - o[0], a[1] - o[1]];
            let e2 = [b[0] - a[0], b[1] - a[1]];
            let l1 = e1[0].hypot(e1[1]);
            let l2 = e2[0].hypot(e2[1]);
            let c = (e1[0] * e2[1] - e1[1] * e2[0]) / (l1 * l2);
            if c < -CONVEXITY_TOL {
                return Err(Error::Degenerate(format!(
                    "non-convex or clockwise corner at vertex {}",
                    (i + 1) % n
                )));
            }
            if c > CONVEXITY_TOL {
                any_positive = true;
            }
        }
        if !any_positive {
            return Err(Error::Degenerate("all vertices collinear".into()));
        }
        Ok(ConvexPolygon { vertices })
    }

    /// Convenience constructor that orients and hulls a point cloud.
    pub fn hull_of(points: &[[f64; 2]]) -> Result<Self> {
        let mut pts = points.to_vec();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        if pts.len() < 3 {
            return Err(Error::Degenerate("hull needs >= 3 distinct points".into()));
        }
        // Andrew monotone chain.
        let mut lower: Vec<[f64; 2]> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0
            {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<[f64; 2]> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0
            {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        ConvexPolygon::new(lower)
    }

    pub fn rectangle(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        ConvexPolygon::new(vec![[x0, y0], [x1, y0], [x1, y1], [x0, y1]])
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        let mut acc = 0.0;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            acc += a[0] * b[1] - b[0] * a[1];
        }
        0.5 * acc
    }

    pub fn centroid(&self) -> [f64; 2] {
        let n = self.vertices.len();
        let (mut cx, mut cy, mut a) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            let w = p[0] * q[1] - q[0] * p[1];
            cx += (p[0] + q[0]) * w;
            cy += (p[1] + q[1]) * w;
            a += w;
        }
        [cx / (3.0 * a), cy / (3.0 * a)]
    }

    pub fn bbox(&self) -> ([f64; 2], [f64; 2]) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for v in &self.vertices {
            for k in 0..2 {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        (lo, hi)
    }

    /// Exact diameter over vertex pairs (the diameter of a convex polygon is
    /// attained at two vertices).
    pub fn diameter(&self) -> f64 {
        let n = self.vertices.len();
        let mut best = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                let dx = self.vertices[i][0] - self.vertices[j][0];
                let dy = self.vertices[i][1] - self.vertices[j][1];
                best = best.max(dx.hypot(dy));
            }
        }
        best
    }

    pub fn contains(&self, p: [f64; 2], tol: f64) -> bool {
        let n = self.vertices.len();
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            if cross(a, b, p) < -tol {
                return false;
            }
        }
        true
    }

    /// Clips by the halfplane { p : p . normal <= offset }. Returns None when
    /// the intersection is empty or degenerate (fewer than 3 vertices or
    /// relative area below 1e-14).
    pub fn clip_halfplane(&self, normal: [f64; 2], offset: f64) -> Option<ConvexPolygon> {
        let n = self.vertices.len();
        let side = |p: [f64; 2]| p[0] * normal[0] + p[1] * normal[1] - offset;
        let mut out: Vec<[f64; 2]> = Vec::with_capacity(n + 2);
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let sa = side(a);
            let sb = side(b);
            if sa <= 0.0 {
                out.push(a);
            }
            if (sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0) {
                let t = sa / (sa - sb);
                out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
            }
        }
        // Remove consecutive near-duplicates introduced by vertices on the line.
        let scale = self
            .vertices
            .iter()
            .flat_map(|v| v.iter())
            .fold(1.0f64, |m, x| m.max(x.abs()));
        let mut dedup: Vec<[f64; 2]> = Vec::with_capacity(out.len());
        for p in out {
            if let Some(last) = dedup.last() {
                if (p[0] - last[0]).hypot(p[1] - last[1]) < 1e-13 * scale {
                    continue;
                }
            }
            dedup.push(p);
        }
        while dedup.len() >= 2 {
            let first = dedup[0];
            let last = *dedup.last().unwrap();
            if (first[0] - last[0]).hypot(first[1] - last[1]) < 1e-13 * scale {
                dedup.pop();
            } else {
                break;
            }
        }
        if dedup.len() < 3 {
            return None;
        }
        let poly = ConvexPolygon { vertices: dedup };
        if poly.area() < 1e-14 * scale * scale {
            return None;
        }
        Some(poly)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diameter_examples() {
        let square = ConvexPolygon::new(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
            .unwrap();
        assert!((square.diameter() - 2.0f64.sqrt()).abs() < 1e-15);
        let tri = ConvexPolygon::new(vec![[0.0, 0.0], [3.0, 0.0], [0.0, 4.0]]).unwrap();
        assert!((tri.diameter() - 5.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_polygons() {
        // Clockwise.
        assert!(ConvexPolygon::new(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]]).is_err());
        // Non-convex.
        assert!(ConvexPolygon::new(vec![
            [0.0, 0.0],
            [2.0, 0.0],
            [1.0, 0.1],
            [0.0, 2.0]
        ])
        .is_err());
        // Repeated vertex.
        assert!(ConvexPolygon::new(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).is_err());
    }

    #[test]
    fn clip_square() {
        let square =
            ConvexPolygon::new(vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]).unwrap();
        // Keep x <= 0.
        let half = square.clip_halfplane([1.0, 0.0], 0.0).unwrap();
        assert!((half.area() - 2.0).abs() < 1e-14);
        // Empty clip.
        assert!(square.clip_halfplane([1.0, 0.0], -2.0).is_none());
        // Full polygon kept.
        let full = square.clip_halfplane([1.0, 0.0], 5.0).unwrap();
        assert_eq!(full.len(), 4);
    }

    #[test]
    fn clip_areas_are_additive() {
        let tri = ConvexPolygon::new(vec![[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]]).unwrap();
        let n = [0.6f64.cos(), 0.6f64.sin()];
        for c in [-0.5, 0.2, 0.9, 1.4] {
            let a1 = tri.clip_halfplane(n, c).map(|p| p.area()).unwrap_or(0.0);
            let a2 = tri
                .clip_halfplane([-n[0], -n[1]], -c)
                .map(|p| p.area())
                .unwrap_or(0.0);
            assert!((a1 + a2 - tri.area()).abs() < 1e-12);
        }
    }

    #[test]
    fn hull_of_point_cloud() {
        let pts = [
            [0.0, 0.0],
            [1.0, 0.0],
            [1.0, 1.0],
            [0.0, 1.0],
            [0.5, 0.5],
            [0.2, 0.8],
        ];
        let hull = ConvexPolygon::hull_of(&pts).unwrap();
        assert_eq!(hull.len(), 4);
        assert!((hull.area() - 1.0).abs() < 1e-15);
    }
}
