//! Incremental Bowyer-Watson Delaunay triangulation of planar point sets.
//! Points are expected to be well separated (mesh generation feeds lattice
//! and boundary points), so f64 predicates with small tolerances suffice.

#[derive(Clone, Copy)]
struct Tri {
    v: [usize; 3],
    /// Neighbor across edge (v[e], v[(e+1)%3]).
    adj: [Option<usize>; 3],
    alive: bool,
}

pub struct Delaunay {
    pts: Vec<[f64; 2]>,
    tris: Vec<Tri>,
    last_alive: usize,
    n_input: usize,
}

fn orient(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
}

fn in_circle(a: [f64; 2], b: [f64; 2], c: [f64; 2], p: [f64; 2]) -> f64 {
    let (ax, ay) = (a[0] - p[0], a[1] - p[1]);
    let (bx, by) = (b[0] - p[0], b[1] - p[1]);
    let (cx, cy) = (c[0] - p[0], c[1] - p[1]);
    let a2 = ax * ax + ay * ay;
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    ax * (by * c2 - b2 * cy) - ay * (bx * c2 - b2 * cx) + a2 * (bx * cy - by * cx)
}

impl Delaunay {
    /// Triangulates `points`; returns ccw triangles indexing into `points`.
    pub fn triangulate(points: &[[f64; 2]]) -> Vec<[usize; 3]> {
        assert!(points.len() >= 3);
        let n = points.len();
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in points {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
        let cx = 0.5 * (lo[0] + hi[0]);
        let cy = 0.5 * (lo[1] + hi[1]);
        let big = 40.0 * span;
        let mut pts = points.to_vec();
        pts.push([cx - big, cy - 0.7 * big]);
        pts.push([cx + big, cy - 0.7 * big]);
        pts.push([cx, cy + big]);
        let mut d = Delaunay {
            pts,
            tris: vec![Tri {
                v: [n, n + 1, n + 2],
                adj: [None; 3],
                alive: true,
            }],
            last_alive: 0,
            n_input: n,
        };
        // Insert points sorted along a space-filling-ish sweep for locality,
        // keeping determinism.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| {
            let a = points[i];
            let b = points[j];
            (a[1], a[0]).partial_cmp(&(b[1], b[0])).unwrap()
        });
        for idx in order {
            d.insert(idx);
        }
        d.tris
            .iter()
            .filter(|t| t.alive && t.v.iter().all(|&v| v < n))
            .map(|t| t.v)
            .collect()
    }

    fn locate(&self, p: [f64; 2]) -> usize {
        let mut t = self.last_alive;
        if !self.tris[t].alive {
            t = self.tris.iter().position(|x| x.alive).unwrap();
        }
        let scale = 1e-13;
        for _ in 0..4 * self.tris.len() + 16 {
            let tri = &self.tris[t];
            let mut moved = false;
            for e in 0..3 {
                let a = self.pts[tri.v[e]];
                let b = self.pts[tri.v[(e + 1) % 3]];
                let edge_scale =
                    scale * ((b[0] - a[0]).abs() + (b[1] - a[1]).abs() + 1.0);
                if orient(a, b, p) < -edge_scale {
                    if let Some(nb) = tri.adj[e] {
                        t = nb;
                        moved = true;
                        break;
                    }
                }
            }
            if !moved {
                return t;
            }
        }
        // Fallback: exhaustive scan.
        for (i, tri) in self.tris.iter().enumerate() {
            if !tri.alive {
                continue;
            }
            let inside = (0..3).all(|e| {
                orient(self.pts[tri.v[e]], self.pts[tri.v[(e + 1) % 3]], p) >= -1e-9
            });
            if inside {
                return i;
            }
        }
        panic!("point location failed");
    }

    fn insert(&mut self, pi: usize) {
        let p = self.pts[pi];
        let seed = self.locate(p);
        // Grow the cavity of circumcircle violations.
        let mut cavity = vec![seed];
        let mut seen = std::collections::HashSet::new();
        seen.insert(seed);
        let mut stack = vec![seed];
        while let Some(t) = stack.pop() {
            for e in 0..3 {
                if let Some(nb) = self.tris[t].adj[e] {
                    if seen.contains(&nb) || !self.tris[nb].alive {
                        continue;
                    }
                    let tv = self.tris[nb].v;
                    let (a, b, c) = (self.pts[tv[0]], self.pts[tv[1]], self.pts[tv[2]]);
                    let area2 = orient(a, b, c).abs().max(1e-300);
                    if in_circle(a, b, c, p) > -1e-12 * area2 {
                        seen.insert(nb);
                        cavity.push(nb);
                        stack.push(nb);
                    }
                }
            }
        }
        // Boundary edges of the cavity (edge, outside neighbor).
        let mut boundary: Vec<([usize; 2], Option<usize>)> = Vec::new();
        for &t in &cavity {
            for e in 0..3 {
                let nb = self.tris[t].adj[e];
                let outside = match nb {
                    Some(x) => !seen.contains(&x),
                    None => true,
                };
                if outside {
                    let a = self.tris[t].v[e];
                    let b = self.tris[t].v[(e + 1) % 3];
                    boundary.push(([a, b], nb));
                }
            }
        }
        for &t in &cavity {
            self.tris[t].alive = false;
        }
        // Retriangulate the star of p.
        let mut edge_to_tri: std::collections::HashMap<(usize, usize), (usize, usize)> =
            std::collections::HashMap::new();
        let mut created = Vec::with_capacity(boundary.len());
        for ([a, b], nb) in boundary {
            let ti = self.tris.len();
            self.tris.push(Tri {
                v: [pi, a, b],
                adj: [None, nb, None],
            alive: true,
            });
            created.push(ti);
            // Fix the outside neighbor's back-pointer.
            if let Some(x) = nb {
                let xt = &mut self.tris[x];
                for e in 0..3 {
                    let (u, v) = (xt.v[e], xt.v[(e + 1) % 3]);
                    if (u, v) == (b, a) {
                        xt.adj[e] = Some(ti);
                    }
                }
            }
            // Link the two spoke edges (p, a) and (b, p) with siblings.
            for (key, edge) in [((pi.min(a), pi.max(a)), 0usize), ((pi.min(b), pi.max(b)), 2)] {
                if let Some(&(other_t, other_e)) = edge_to_tri.get(&key) {
                    self.tris[ti].adj[edge] = Some(other_t);
                    self.tris[other_t].adj[other_e] = Some(ti);
                } else {
                    edge_to_tri.insert(key, (ti, edge));
                }
            }
        }
        self.last_alive = *created.last().unwrap();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn total_area(pts: &[[f64; 2]], tris: &[[usize; 3]]) -> f64 {
        tris.iter()
            .map(|t| 0.5 * orient(pts[t[0]], pts[t[1]], pts[t[2]]))
            .sum()
    }

    #[test]
    fn grid_points_triangulate_to_full_square() {
        let mut pts = Vec::new();
        for i in 0..=10 {
            for j in 0..=10 {
                pts.push([i as f64 * 0.1, j as f64 * 0.1]);
            }
        }
        let tris = Delaunay::triangulate(&pts);
        assert_eq!(tris.len(), 200);
        assert!((total_area(&pts, &tris) - 1.0).abs() < 1e-12);
        for t in &tris {
            assert!(orient(pts[t[0]], pts[t[1]], pts[t[2]]) > 0.0);
        }
    }

    #[test]
    fn collinear_boundary_points_all_used() {
        // A triangle with midpoints on its edges plus one interior point.
        let pts = vec![
            [0.0, 0.0],
            [1.0, 0.0],
            [2.0, 0.0],
            [1.0, 1.0],
            [0.5, 0.5],
            [1.5, 0.5],
            [1.0, 0.3],
        ];
        let tris = Delaunay::triangulate(&pts);
        let used: std::collections::HashSet<usize> = tris.iter().flatten().cloned().collect();
        assert_eq!(used.len(), pts.len(), "all points must appear");
        assert!((total_area(&pts, &tris) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_cloud_area_equals_hull_area() {
        // Deterministic pseudo-random cloud.
        let mut pts = Vec::new();
        let mut s = 12345u64;
        let mut rnd = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..400 {
            pts.push([rnd() * 3.0 - 1.5, rnd() * 2.0 - 1.0]);
        }
        let tris = Delaunay::triangulate(&pts);
        let hull = crate::geometry::ConvexPolygon::hull_of(&pts).unwrap();
        assert!((total_area(&pts, &tris) - hull.area()).abs() < 1e-10);
    }
}
